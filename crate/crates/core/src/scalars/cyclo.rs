//! Cyclotomic numbers `Q(zeta_N)`.
//!
//! Elements are stored in the power basis of `Q[x]/(Phi_N)` for the smallest
//! order `N` whose cyclotomic field contains them, so the representation is
//! unique and structural equality is field equality.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients (low to high) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial order must be positive");
    if let Some(hit) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return hit;
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            poly = div_monic_int(&poly, &phi_d);
        }
    }
    let poly = Rc::new(poly);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, poly.clone()));
    poly
}

fn div_monic_int(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

/// Euler's totient, which is also the degree of `Phi_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

fn reduce_mod_phi(mut poly: Vec<Rational>, order: u32) -> Vec<Rational> {
    let phi = cyclotomic_poly(order);
    let deg = phi.len() - 1;
    if poly.len() <= deg {
        poly.resize(deg, Rational::zero());
        return poly;
    }
    for k in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[k], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if *pj != 0 {
                poly[k - deg + j] -= &c * Rational::from_integer(BigInt::from(*pj));
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// An element of a cyclotomic field over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The imaginary unit, `zeta_4`.
    pub fn i() -> Self {
        Self::root_of_unity(&Rational::new(BigInt::one(), BigInt::from(4)))
    }

    /// `exp(2 pi i q)` for a rational `q`.
    pub fn root_of_unity(q: &Rational) -> Self {
        let den = q.denom().clone();
        let order: u32 = den
            .try_into()
            .expect("root of unity order does not fit in u32");
        let p = q.numer().mod_floor(&BigInt::from(order));
        let p: usize = p.try_into().expect("exponent fits");
        let mut poly = vec![Rational::zero(); p + 1];
        poly[p] = Rational::one();
        Self::canonical(order, reduce_mod_phi(poly, order))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients with respect to `zeta_order`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    /// The rational value, when the element is rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Number of nonzero power-basis coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn lift(&self, to: u32) -> Vec<Rational> {
        if to == self.order {
            return self.coeffs.clone();
        }
        let step = (to / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        reduce_mod_phi(poly, to)
    }

    fn canonical(order: u32, coeffs: Vec<Rational>) -> Self {
        if order == 1 || coeffs[1..].iter().all(Zero::is_zero) {
            return Cyclotomic {
                order: 1,
                coeffs: vec![coeffs[0].clone()],
            };
        }
        for d in 2..order {
            if !order.is_multiple_of(d) || d % 4 == 2 {
                continue;
            }
            if let Some(sub) = Self::membership(order, &coeffs, d) {
                return Cyclotomic { order: d, coeffs: sub };
            }
        }
        Cyclotomic { order, coeffs }
    }

    /// Coordinates of `coeffs` (an element of `Q(zeta_order)`) in the power
    /// basis of the subfield `Q(zeta_d)`, if it lies there.
    fn membership(order: u32, coeffs: &[Rational], d: u32) -> Option<Vec<Rational>> {
        let sub_deg = totient(d);
        let columns: Vec<Vec<Rational>> = (0..sub_deg)
            .map(|j| {
                let mut unit = vec![Rational::zero(); sub_deg];
                unit[j] = Rational::one();
                Cyclotomic { order: d, coeffs: unit }.lift(order)
            })
            .collect();
        solve_rational(&columns, coeffs)
    }

    fn binary(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_rational(op(&self.coeffs[0], &other.coeffs[0]));
        }
        let order = self.order.lcm(&other.order);
        let a = self.lift(order);
        let b = other.lift(order);
        let sum = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        Self::canonical(order, sum)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        let order = self.order.lcm(&other.order);
        let a = self.lift(order);
        let b = other.lift(order);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::canonical(order, reduce_mod_phi(prod, order))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        let n = self.coeffs.len();
        let columns: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut unit = vec![Rational::zero(); n];
                unit[j] = Rational::one();
                self.mul(&Cyclotomic {
                    order: self.order,
                    coeffs: unit,
                })
                .lift(self.order)
            })
            .collect();
        let mut target = vec![Rational::zero(); n];
        target[0] = Rational::one();
        let sol = solve_rational(&columns, &target)?;
        Some(Self::canonical(self.order, sol))
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut poly = vec![Rational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[(n - j) % n] += c;
        }
        Self::canonical(self.order, reduce_mod_phi(poly, self.order))
    }

    /// Sign of the leading nonzero coefficient, used to pull a minus sign out
    /// when printing.
    pub fn leading_is_negative(&self) -> bool {
        self.coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
    }
}

/// Solves `sum_j y_j columns[j] = target` over the rationals.
fn solve_rational(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        let Some(p) = (prow..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(prow, p);
        let inv = m[prow][c].recip();
        for x in m[prow].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != prow && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=cols {
                    let delta = &f * &m[prow][k];
                    m[r][k] -= delta;
                }
            }
        }
        pivots.push(c);
        prow += 1;
        if prow == rows {
            break;
        }
    }
    if m[prow..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (r, c) in pivots.iter().enumerate() {
        sol[*c] = m[r][cols].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(9), 6);
    }

    #[test]
    fn half_turn_is_minus_one() {
        let z = Cyclotomic::root_of_unity(&q(1, 2));
        assert_eq!(z, Cyclotomic::from_int(-1));
        assert!(z.add(&Cyclotomic::one()).is_zero());
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let a = Cyclotomic::root_of_unity(&q(1, 3));
        let b = Cyclotomic::root_of_unity(&q(2, 3));
        assert!(a.add(&b).add(&Cyclotomic::one()).is_zero());
    }

    #[test]
    fn sixth_root_reduces_to_third_roots() {
        // zeta_6 = -zeta_3^2 lives in Q(zeta_3), so the canonical order drops.
        let z6 = Cyclotomic::root_of_unity(&q(1, 6));
        assert_eq!(z6.order(), 3);
        let z3sq = Cyclotomic::root_of_unity(&q(2, 3));
        assert_eq!(z6, z3sq.neg());
    }

    #[test]
    fn inverse_and_conjugate() {
        let i = Cyclotomic::i();
        assert_eq!(i.mul(&i), Cyclotomic::from_int(-1));
        let x = Cyclotomic::from_int(2).add(&i);
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        assert_eq!(x.conj(), Cyclotomic::from_int(2).sub(&i));
        let z5 = Cyclotomic::root_of_unity(&q(2, 5));
        assert!(z5.mul(&z5.conj()).is_one());
    }

    #[test]
    fn subfield_detection_for_mixed_orders() {
        // i * zeta_3 * conj(i * zeta_3) = 1 after passing through order 12
        let w = Cyclotomic::i().mul(&Cyclotomic::root_of_unity(&q(1, 3)));
        assert_eq!(w.order(), 12);
        assert!(w.mul(&w.conj()).is_one());
        // sqrt(-3) = zeta_3 - zeta_3^2 squared is -3
        let s = Cyclotomic::root_of_unity(&q(1, 3)).sub(&Cyclotomic::root_of_unity(&q(2, 3)));
        assert_eq!(s.mul(&s), Cyclotomic::from_int(-3));
    }
}
