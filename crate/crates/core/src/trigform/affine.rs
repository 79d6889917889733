use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{FrequencyVector, TrigError};
use crate::scalars::{Rational, ScalarExponent};

/// `x = A y + b` from a `source_dim`-dimensional domain into a
/// `target_dim`-dimensional chart. `A` is rational; the translation lies in
/// the rational span of `1` and the declared constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    source_dim: usize,
    target_dim: usize,
    linear: Vec<Vec<Rational>>,
    translation: Vec<ScalarExponent>,
}

impl AffineMap {
    pub fn new(
        source_dim: usize,
        linear: Vec<Vec<Rational>>,
        translation: Vec<ScalarExponent>,
    ) -> Result<Self, TrigError> {
        let target_dim = linear.len();
        if translation.len() != target_dim {
            return Err(TrigError::DimensionMismatch {
                expected: target_dim,
                found: translation.len(),
            });
        }
        if let Some(row) = linear.iter().find(|r| r.len() != source_dim) {
            return Err(TrigError::DimensionMismatch {
                expected: source_dim,
                found: row.len(),
            });
        }
        if translation.iter().any(|b| !b.is_at_most_linear()) {
            return Err(TrigError::NonAffine(
                "translation must be linear in the constants".into(),
            ));
        }
        Ok(AffineMap {
            source_dim,
            target_dim,
            linear,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let linear = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        AffineMap {
            source_dim: dim,
            target_dim: dim,
            linear,
            translation: vec![ScalarExponent::zero(); dim],
        }
    }

    pub fn translation_by(shift: Vec<ScalarExponent>) -> Self {
        let mut m = Self::identity(shift.len());
        m.translation = shift;
        m
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn linear(&self) -> &[Vec<Rational>] {
        &self.linear
    }

    pub fn translation(&self) -> &[ScalarExponent] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.source_dim)
    }

    pub fn has_identity_linear_part(&self) -> bool {
        self.source_dim == self.target_dim && self.linear == Self::identity(self.source_dim).linear
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap, TrigError> {
        if inner.target_dim != self.source_dim {
            return Err(TrigError::DimensionMismatch {
                expected: self.source_dim,
                found: inner.target_dim,
            });
        }
        let linear = (0..self.target_dim)
            .map(|i| {
                (0..inner.source_dim)
                    .map(|j| {
                        (0..self.source_dim)
                            .map(|k| &self.linear[i][k] * &inner.linear[k][j])
                            .fold(Rational::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect();
        let translation = (0..self.target_dim)
            .map(|i| {
                let mut acc = self.translation[i].clone();
                for k in 0..self.source_dim {
                    acc = acc.add(&inner.translation[k].scale(&self.linear[i][k]));
                }
                acc
            })
            .collect();
        Ok(AffineMap {
            source_dim: inner.source_dim,
            target_dim: self.target_dim,
            linear,
            translation,
        })
    }

    /// Inverse map when the linear part is square and invertible.
    pub fn inverse(&self) -> Option<AffineMap> {
        if self.source_dim != self.target_dim {
            return None;
        }
        let n = self.source_dim;
        let mut m: Vec<Vec<Rational>> = self
            .linear
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero())?;
            m.swap(c, p);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in 0..2 * n {
                        let delta = &f * &m[c][k];
                        m[r][k] -= delta;
                    }
                }
            }
        }
        let inv_lin: Vec<Vec<Rational>> = m.into_iter().map(|r| r[n..].to_vec()).collect();
        let translation = (0..n)
            .map(|i| {
                let mut acc = ScalarExponent::zero();
                for k in 0..n {
                    acc = acc.sub(&self.translation[k].scale(&inv_lin[i][k]));
                }
                acc
            })
            .collect();
        Some(AffineMap {
            source_dim: n,
            target_dim: n,
            linear: inv_lin,
            translation,
        })
    }

    /// The frequency `Aᵀ ν` seen in source coordinates.
    pub fn pull_frequency(&self, freq: &FrequencyVector) -> FrequencyVector {
        FrequencyVector(
            (0..self.source_dim)
                .map(|j| {
                    let mut acc = ScalarExponent::zero();
                    for (v, nu) in freq.0.iter().enumerate() {
                        acc = acc.add(&nu.scale(&self.linear[v][j]));
                    }
                    acc
                })
                .collect(),
        )
    }

    /// For a square matrix with exactly one nonzero entry per row and column,
    /// returns `(source index, scale)` for every target coordinate.
    pub fn monomial_pattern(&self) -> Option<Vec<(usize, Rational)>> {
        if self.source_dim != self.target_dim {
            return None;
        }
        let mut used = vec![false; self.source_dim];
        let mut out = Vec::with_capacity(self.target_dim);
        for row in &self.linear {
            let nz: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_zero()).collect();
            if nz.len() != 1 || used[nz[0]] {
                return None;
            }
            used[nz[0]] = true;
            out.push((nz[0], row[nz[0]].clone()));
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn shift(q: Rational) -> AffineMap {
        AffineMap::translation_by(vec![ScalarExponent::rational(q)])
    }

    #[test]
    fn composition_and_inverse() {
        let a = shift(rat(1, 2));
        let b = shift(rat(-1, 2));
        assert!(a.compose(&b).unwrap().is_identity());
        let scale = AffineMap::new(1, vec![vec![rat(2, 1)]], vec![ScalarExponent::from_int(1)]).unwrap();
        let inv = scale.inverse().unwrap();
        assert!(scale.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&scale).unwrap().is_identity());
    }

    #[test]
    fn composition_is_associative() {
        let a = AffineMap::new(2, vec![vec![rat(0, 1), rat(1, 1)], vec![rat(-1, 1), rat(0, 1)]], vec![
            ScalarExponent::constant("a"),
            ScalarExponent::from_int(1),
        ])
        .unwrap();
        let b = AffineMap::new(2, vec![vec![rat(3, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 2)]], vec![
            ScalarExponent::from_int(2),
            ScalarExponent::zero(),
        ])
        .unwrap();
        let c = AffineMap::translation_by(vec![ScalarExponent::from_int(5), ScalarExponent::constant("a")]);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(a.compose(&AffineMap::identity(2)).unwrap(), a);
    }

    #[test]
    fn singular_maps_have_no_inverse() {
        let m = AffineMap::new(2, vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]], vec![
            ScalarExponent::zero(),
            ScalarExponent::zero(),
        ])
        .unwrap();
        assert!(m.inverse().is_none());
        assert!(m.monomial_pattern().is_none());
    }
}
