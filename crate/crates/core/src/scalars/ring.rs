//! Laurent polynomials over the cyclotomic base in the formal symbols
//! `pi`, the declared constants, and phase symbols `<phi>`.
//!
//! Monomials form a torsion-free abelian group; they are ordered
//! lexicographically on their coordinate vectors, which is compatible with
//! multiplication and makes leading terms meaningful.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::cyclo::Cyclotomic;
use super::exponent::ScalarExponent;
use super::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) pi: i64,
    pub(crate) powers: BTreeMap<String, i64>,
    /// Phase exponent; its rational part is always zero (rational phases
    /// live in the cyclotomic coefficient).
    pub(crate) phase: ScalarExponent,
}

fn cmp_sparse<K: Ord, V: Ord + Zero + Clone>(a: &BTreeMap<K, V>, b: &BTreeMap<K, V>) -> Ordering {
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    let zero = V::zero();
    loop {
        let (va, vb) = match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some((ka, va)), Some((kb, vb))) => match ka.cmp(kb) {
                Ordering::Less => {
                    let v = (*va).clone();
                    ia.next();
                    (v, zero.clone())
                }
                Ordering::Greater => {
                    let v = (*vb).clone();
                    ib.next();
                    (zero.clone(), v)
                }
                Ordering::Equal => {
                    let r = ((*va).clone(), (*vb).clone());
                    ia.next();
                    ib.next();
                    r
                }
            },
            (Some((_, va)), None) => {
                let v = (*va).clone();
                ia.next();
                (v, zero.clone())
            }
            (None, Some((_, vb))) => {
                let v = (*vb).clone();
                ib.next();
                (zero.clone(), v)
            }
        };
        match va.cmp(&vb) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pi
            .cmp(&other.pi)
            .then_with(|| cmp_sparse(&self.powers, &other.powers))
            .then_with(|| cmp_sparse(self.phase.linear_part(), other.phase.linear_part()))
            .then_with(|| cmp_sparse(self.phase.quadratic_part(), other.phase.quadratic_part()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.pi == 0 && self.powers.is_empty() && self.phase.is_zero()
    }

    pub fn pi_power(&self) -> i64 {
        self.pi
    }

    pub fn powers(&self) -> &BTreeMap<String, i64> {
        &self.powers
    }

    pub fn phase(&self) -> &ScalarExponent {
        &self.phase
    }

    pub fn pi() -> Self {
        Monomial {
            pi: 1,
            ..Default::default()
        }
    }

    pub fn constant(name: &str) -> Self {
        let mut powers = BTreeMap::new();
        powers.insert(name.to_string(), 1);
        Monomial {
            powers,
            ..Default::default()
        }
    }

    pub fn phase_symbol(phase: ScalarExponent) -> Self {
        debug_assert!(phase.rational_part().is_zero());
        Monomial {
            phase,
            ..Default::default()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut powers = self.powers.clone();
        for (k, v) in &other.powers {
            let e = powers.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                powers.remove(k);
            }
        }
        Monomial {
            pi: self.pi + other.pi,
            powers,
            phase: self.phase.add(&other.phase),
        }
    }

    pub fn inv(&self) -> Self {
        Monomial {
            pi: -self.pi,
            powers: self.powers.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            phase: self.phase.neg(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

/// Finite sum of `Cyclotomic * Monomial` terms with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Cyclotomic::one(), Monomial::one())
    }

    pub fn term(c: Cyclotomic, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Cyclotomic)> {
        self.terms.iter()
    }

    /// Complexity measure used for pivot selection.
    pub fn weight(&self) -> usize {
        self.terms.values().map(Cyclotomic::weight).sum()
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Cyclotomic)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    pub fn lowest(&self) -> Option<(&Monomial, &Cyclotomic)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, m: &Monomial, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                *existing = existing.add(c);
                if existing.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, &c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&ma.mul(mb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.mul(c))).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect(),
        }
    }

    /// Exact quotient `self / divisor` if it exists.
    ///
    /// Monomials are units, so long division never gets stuck on a leading
    /// term; termination comes from the lower bound every quotient monomial
    /// must respect (`low(self)/low(divisor)`) and a step cap.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dl_m, dl_c) = divisor.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dlow, _) = divisor.lowest()?;
        let (slow, _) = self.lowest()?;
        let floor = slow.div(dlow);
        let dl_inv = dl_c.inv()?;
        let cap = 64 + 8 * (self.len() + divisor.len());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        for _ in 0..cap {
            let Some((rm, rc)) = rem.leading() else {
                return Some(quot);
            };
            let qm = rm.div(dl_m);
            if qm < floor {
                return None;
            }
            let qc = rc.mul(&dl_inv);
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(&qm, &qc);
        }
        rem.is_zero().then_some(quot)
    }

    /// Complex conjugate: cyclotomic conjugation and `<phi> -> <-phi>`;
    /// `pi` and the constants are real.
    pub fn conj(&self) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mm = Monomial {
                pi: m.pi,
                powers: m.powers.clone(),
                phase: m.phase.neg(),
            };
            out.add_term(&mm, &c.conj());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::term(Cyclotomic::one(), Monomial::constant("a"))
    }

    #[test]
    fn monomial_order_is_compatible_with_multiplication() {
        let a = Monomial::constant("a");
        let b = Monomial::constant("b");
        let p = Monomial::pi();
        let ms = [a.clone(), b.clone(), p.clone(), a.inv(), a.mul(&b), Monomial::one()];
        for u in &ms {
            for v in &ms {
                for w in &ms {
                    assert_eq!(u.cmp(v), u.mul(w).cmp(&v.mul(w)));
                }
            }
        }
    }

    #[test]
    fn exact_division() {
        let one = Poly::one();
        let xm1 = x().sub(&one);
        let xp1 = x().add(&one);
        let prod = xm1.mul(&xp1);
        assert_eq!(prod.div_exact(&xm1), Some(xp1.clone()));
        assert_eq!(prod.div_exact(&xp1), Some(xm1.clone()));
        assert_eq!(xp1.div_exact(&xm1), None);
        let x5m1 = x().mul(&x()).mul(&x()).mul(&x()).mul(&x()).sub(&one);
        let q = x5m1.div_exact(&xm1).unwrap();
        assert_eq!(q.len(), 5);
    }
}
