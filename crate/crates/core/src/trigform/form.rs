use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{AffineMap, TermKey, TrigError, TrigPoly};
use crate::scalars::{Rational, Scalar};

/// A differential form of fixed degree on a chart, with trigonometric
/// polynomial coefficients keyed by strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigForm {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, TrigPoly>,
}

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Merge two increasing index tuples; returns the sign of the sorting
/// permutation, or `None` if they share an index.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= &m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let delta = &f * &m[c][k];
                    m[r][k] -= delta;
                }
            }
        }
    }
    acc
}

impl TrigForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        TrigForm {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn function(f: TrigPoly) -> Self {
        Self::from_component(f.dim(), vec![], f)
    }

    /// `f dx_I`, with `indices` in any order (sorted with sign).
    pub fn from_component(dim: usize, indices: Vec<usize>, f: TrigPoly) -> Self {
        let degree = indices.len();
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mut out = Self::zero(dim, degree);
        if sorted.len() != degree || f.is_zero() {
            return out;
        }
        let mut swaps = 0;
        let mut perm = indices;
        for i in 0..perm.len() {
            for j in 0..perm.len() - 1 - i {
                if perm[j] > perm[j + 1] {
                    perm.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        let f = if swaps % 2 == 1 { f.neg() } else { f };
        out.comps.insert(sorted, f);
        out
    }

    /// The coordinate covector `dx_v`.
    pub fn dx(dim: usize, v: usize) -> Self {
        Self::from_component(dim, vec![v], TrigPoly::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &TrigPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, indices: &[usize]) -> TrigPoly {
        self.comps.get(indices).cloned().unwrap_or_else(|| TrigPoly::zero(self.dim))
    }

    /// Flattened `(index tuple, term key, coefficient)` view.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &TermKey, &Scalar)> {
        self.comps.iter().flat_map(|(i, p)| p.terms().map(move |(k, c)| (i, k, c)))
    }

    pub fn add_term(&mut self, indices: &[usize], key: &TermKey, c: &Scalar) {
        debug_assert_eq!(indices.len(), self.degree);
        let entry = self
            .comps
            .entry(indices.to_vec())
            .or_insert_with(|| TrigPoly::zero(self.dim));
        entry.add_term(key, c);
        if entry.is_zero() {
            self.comps.remove(indices);
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), TrigError> {
        if self.dim != other.dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(TrigError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Sum; a zero form of any degree acts as the identity.
    pub fn try_add(&self, other: &Self) -> Result<Self, TrigError> {
        self.compatible(other)?;
        if self.is_zero() && self.degree != other.degree {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (i, p) in &other.comps {
            for (k, c) in p.terms() {
                out.add_term(i, k, c);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("incompatible forms")
    }

    pub fn neg(&self) -> Self {
        TrigForm {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|(i, p)| (i.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        TrigForm {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|(i, p)| (i.clone(), p.scale(s))).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, TrigError> {
        if self.dim != other.dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ia, pa) in &self.comps {
            for (ib, pb) in &other.comps {
                let Some((idx, odd)) = merge_indices(ia, ib) else {
                    continue;
                };
                let prod = pa.mul(pb);
                let prod = if odd { prod.neg() } else { prod };
                for (k, c) in prod.terms() {
                    out.add_term(&idx, k, c);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (idx, p) in &self.comps {
            for v in 0..self.dim {
                if idx.contains(&v) {
                    continue;
                }
                let dp = p.partial(v);
                if dp.is_zero() {
                    continue;
                }
                let before = idx.iter().filter(|&&i| i < v).count();
                let mut new_idx = idx.clone();
                new_idx.insert(before, v);
                let dp = if before % 2 == 1 { dp.neg() } else { dp };
                for (k, c) in dp.terms() {
                    out.add_term(&new_idx, k, c);
                }
            }
        }
        out
    }

    /// `h*ω`: coefficients composed with `h`, and `dx_I ↦ Σ_J det A[I,J] dy_J`.
    pub fn pullback(&self, h: &AffineMap) -> Result<Self, TrigError> {
        if h.target_dim() != self.dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.dim,
                found: h.target_dim(),
            });
        }
        let m = h.source_dim();
        let mut out = Self::zero(m, self.degree);
        let targets = index_tuples(m, self.degree);
        for (idx, p) in &self.comps {
            let pulled = p.pullback(h)?;
            for jdx in &targets {
                let minor: Vec<Vec<Rational>> = idx
                    .iter()
                    .map(|&i| jdx.iter().map(|&j| h.linear()[i][j].clone()).collect())
                    .collect();
                let coef = det(minor);
                if coef.is_zero() {
                    continue;
                }
                let s = Scalar::from_rational(coef);
                for (k, c) in pulled.terms() {
                    out.add_term(jdx, k, &(c * &s));
                }
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by a function.
    pub fn mul_function(&self, f: &TrigPoly) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, p) in &self.comps {
            for (k, c) in p.mul(f).terms() {
                out.add_term(idx, k, c);
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        TrigForm {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|(i, p)| (i.clone(), p.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ScalarExponent};
    use crate::trigform::FrequencyVector;

    fn e1(k: i64) -> TrigPoly {
        TrigPoly::exponential(FrequencyVector(vec![ScalarExponent::from_int(k)]))
    }

    #[test]
    fn wedge_signs() {
        let dt = TrigForm::dx(1, 0);
        assert!(dt.wedge(&dt).unwrap().is_zero());
        let f = TrigForm::function(e1(1));
        assert_eq!(f.wedge(&dt).unwrap(), dt.mul_function(&e1(1)));
        let dx = TrigForm::dx(2, 0);
        let dy = TrigForm::dx(2, 1);
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
    }

    #[test]
    fn derivative_of_cosine() {
        let cos = e1(1).add(&e1(-1)).scale(&Scalar::ratio(1, 2));
        let sin = e1(1).sub(&e1(-1)).scale(&(Scalar::i().inv().unwrap() * Scalar::ratio(1, 2)));
        let lhs = TrigForm::function(cos).d();
        let rhs = TrigForm::dx(1, 0).mul_function(&sin).scale(&(Scalar::from_int(-2) * Scalar::pi()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_and_top_degree() {
        let f = TrigPoly::variable(1, 0).mul(&e1(1));
        assert!(TrigForm::function(f.clone()).d().d().is_zero());
        assert!(TrigForm::dx(1, 0).mul_function(&f).d().is_zero());
    }

    #[test]
    fn pullback_examples() {
        let dt = TrigForm::dx(1, 0);
        let half = AffineMap::translation_by(vec![ScalarExponent::rational(rat(1, 2))]);
        assert_eq!(dt.pullback(&half).unwrap(), dt);
        let flip = AffineMap::new(1, vec![vec![rat(-1, 1)]], vec![ScalarExponent::zero()]).unwrap();
        let w = dt.mul_function(&e1(1));
        assert_eq!(w.pullback(&flip).unwrap(), dt.mul_function(&e1(-1)).neg());
        assert_eq!(w.pullback(&AffineMap::identity(1)).unwrap(), w);
    }

    #[test]
    fn area_form_scales_by_determinant() {
        let area = TrigForm::dx(2, 0).wedge(&TrigForm::dx(2, 1)).unwrap();
        let h = AffineMap::new(2, vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]], vec![
            ScalarExponent::zero(),
            ScalarExponent::zero(),
        ])
        .unwrap();
        assert_eq!(area.pullback(&h).unwrap(), area.scale(&Scalar::from_int(-2)));
    }

    #[test]
    fn index_tuples_are_lexicographic() {
        assert_eq!(index_tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(index_tuples(2, 0), vec![Vec::<usize>::new()]);
        assert!(index_tuples(1, 2).is_empty());
    }
}
