use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AffineMap, TrigError};
use crate::scalars::{Scalar, ScalarExponent};

/// Per-variable frequency `ν`: the term `exp(2 pi i <ν, x>)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrequencyVector(pub Vec<ScalarExponent>);

impl FrequencyVector {
    pub fn zero(dim: usize) -> Self {
        FrequencyVector(vec![ScalarExponent::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ScalarExponent::is_zero)
    }

    pub fn neg(&self) -> Self {
        FrequencyVector(self.0.iter().map(ScalarExponent::neg).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        FrequencyVector(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    /// `<ν, b>`, a phase exponent of degree at most two.
    pub fn pair_with(&self, b: &[ScalarExponent]) -> ScalarExponent {
        let mut acc = ScalarExponent::zero();
        for (nu, bv) in self.0.iter().zip(b) {
            acc = acc.add(&nu.mul(bv).expect("frequencies and translations are linear"));
        }
        acc
    }
}

/// Key of one basis function `x^e · exp(2 pi i <ν, x>)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermKey {
    pub exps: Vec<u32>,
    pub freq: FrequencyVector,
}

impl TermKey {
    pub fn constant(dim: usize) -> Self {
        TermKey {
            exps: vec![0; dim],
            freq: FrequencyVector::zero(dim),
        }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Trigonometric polynomial `Σ c · x^e · exp(2 pi i <ν, x>)` on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Self::term(dim, TermKey::constant(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    pub fn term(dim: usize, key: TermKey, c: Scalar) -> Self {
        debug_assert_eq!(key.exps.len(), dim);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        TrigPoly { dim, terms }
    }

    /// The coordinate function `x_v`.
    pub fn variable(dim: usize, v: usize) -> Self {
        let mut key = TermKey::constant(dim);
        key.exps[v] = 1;
        Self::term(dim, key, Scalar::one())
    }

    /// `exp(2 pi i <ν, x>)`.
    pub fn exponential(freq: FrequencyVector) -> Self {
        let dim = freq.dim();
        Self::term(
            dim,
            TermKey {
                exps: vec![0; dim],
                freq,
            },
            Scalar::one(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TermKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Highest total polynomial degree among the terms.
    pub fn poly_degree(&self) -> u32 {
        self.terms.keys().map(TermKey::degree).max().unwrap_or(0)
    }

    fn check_dim(&self, other: &Self) -> Result<(), TrigError> {
        if self.dim != other.dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub(crate) fn add_term(&mut self, key: &TermKey, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(key) {
            Some(existing) => {
                *existing = &*existing + c;
                if existing.is_zero() {
                    self.terms.remove(key);
                }
            }
            None => {
                self.terms.insert(key.clone(), c.clone());
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TrigError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("trig polynomial dimension mismatch")
    }

    pub fn neg(&self) -> Self {
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, TrigError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key = TermKey {
                    exps: ka.exps.iter().zip(&kb.exps).map(|(a, b)| a + b).collect(),
                    freq: ka.freq.add(&kb.freq),
                };
                out.add_term(&key, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("trig polynomial dimension mismatch")
    }

    /// Exact partial derivative in variable `v`.
    pub fn partial(&self, v: usize) -> Self {
        assert!(v < self.dim, "variable index out of range");
        let two_pi_i = Scalar::from_int(2) * Scalar::pi() * Scalar::i();
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            let e = k.exps[v];
            if e > 0 {
                let mut lowered = k.clone();
                lowered.exps[v] -= 1;
                out.add_term(&lowered, &(c * &Scalar::from_int(e as i64)));
            }
            let nu = &k.freq.0[v];
            if !nu.is_zero() {
                let factor = &two_pi_i * &Scalar::from_exponent(nu);
                out.add_term(k, &(c * &factor));
            }
        }
        out
    }

    /// `f ∘ h` for an affine change of coordinates.
    pub fn pullback(&self, h: &AffineMap) -> Result<Self, TrigError> {
        if h.target_dim() != self.dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.dim,
                found: h.target_dim(),
            });
        }
        let m = h.source_dim();
        // x_v = Σ_j A_vj y_j + b_v
        let coords: Vec<TrigPoly> = (0..self.dim)
            .map(|v| {
                let mut p = TrigPoly::constant(m, Scalar::from_exponent(&h.translation()[v]));
                for (j, a) in h.linear()[v].iter().enumerate() {
                    p = p.add(&TrigPoly::variable(m, j).scale(&Scalar::from_rational(a.clone())));
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<TrigPoly>> = coords.iter().map(|c| vec![TrigPoly::one(m), c.clone()]).collect();
        let mut out = Self::zero(m);
        for (k, c) in &self.terms {
            let mut poly = TrigPoly::one(m);
            for (v, &e) in k.exps.iter().enumerate() {
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().mul(&coords[v]);
                    powers[v].push(next);
                }
                poly = poly.mul(&powers[v][e as usize]);
            }
            let phase = Scalar::phase(&k.freq.pair_with(h.translation()));
            let wave = TrigPoly::exponential(h.pull_frequency(&k.freq));
            let term = poly.mul(&wave).scale(&(c * &phase));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        TrigPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        TermKey {
                            exps: k.exps.clone(),
                            freq: k.freq.neg(),
                        },
                        c.conj(),
                    )
                })
                .collect(),
        }
    }

    /// Whether the function is real-valued.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn frequencies(&self) -> impl Iterator<Item = &FrequencyVector> {
        self.terms.keys().map(|k| &k.freq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn e(k: i64) -> TrigPoly {
        TrigPoly::exponential(FrequencyVector(vec![ScalarExponent::from_int(k)]))
    }

    fn cos2pi(k: i64) -> TrigPoly {
        e(k).add(&e(-k)).scale(&Scalar::ratio(1, 2))
    }

    #[test]
    fn opposite_frequencies_cancel() {
        assert_eq!(e(1).mul(&e(-1)), TrigPoly::one(1));
    }

    #[test]
    fn product_to_sum() {
        let lhs = cos2pi(1).mul(&cos2pi(1));
        let rhs = TrigPoly::constant(1, Scalar::ratio(1, 2)).add(&cos2pi(2).scale(&Scalar::ratio(1, 2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_examples() {
        let two_pi_i = Scalar::from_int(2) * Scalar::pi() * Scalar::i();
        assert_eq!(e(1).partial(0), e(1).scale(&two_pi_i));
        let t = TrigPoly::variable(1, 0);
        let lhs = t.mul(&e(1)).partial(0);
        let rhs = TrigPoly::one(1).add(&t.scale(&two_pi_i)).mul(&e(1));
        assert_eq!(lhs, rhs);
        assert!(TrigPoly::constant(1, Scalar::from_int(7)).partial(0).is_zero());
    }

    #[test]
    fn pullback_examples() {
        let half = AffineMap::translation_by(vec![ScalarExponent::rational(rat(1, 2))]);
        assert_eq!(e(1).pullback(&half).unwrap(), e(1).neg());
        let by_a = AffineMap::translation_by(vec![ScalarExponent::constant("a")]);
        assert_eq!(
            e(1).pullback(&by_a).unwrap(),
            e(1).scale(&Scalar::phase(&ScalarExponent::constant("a")))
        );
        let t = TrigPoly::variable(1, 0);
        let h = AffineMap::new(1, vec![vec![rat(2, 1)]], vec![ScalarExponent::from_int(1)]).unwrap();
        let rhs = t
            .mul(&t)
            .scale(&Scalar::from_int(4))
            .add(&t.scale(&Scalar::from_int(4)))
            .add(&TrigPoly::one(1));
        assert_eq!(t.mul(&t).pullback(&h).unwrap(), rhs);
    }

    #[test]
    fn reality() {
        assert!(cos2pi(3).is_real());
        assert!(!e(1).is_real());
    }
}
