//! Dense exact linear algebra over [`Scalar`].
//!
//! Gauss–Jordan elimination picking, in each column, the nonzero entry of
//! least [`Scalar::weight`] as pivot, which keeps intermediate expressions
//! small.

use crate::scalars::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Scalar::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Scalar::is_zero))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.cols, &self.data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = &out.data[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack shape");
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.iter().chain(b).cloned().collect())
                .collect(),
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack shape");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.data[i][c].is_zero())
                .min_by_key(|&i| m.data[i][c].weight());
            let Some(p) = best else { continue };
            m.data.swap(r, p);
            let inv = m.data[r][c].inv().expect("nonzero pivot");
            for x in m.data[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            let pivot_row = m.data[r].clone();
            for (i, row) in m.data.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                    if !pv.is_zero() {
                        row[k] = &row[k] - &(&f * pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().pivots.len()
    }

    /// Basis of `{x : self·x = 0}`; each vector is 1 on its own free column
    /// and 0 on the others, so coordinates of a kernel element in this basis
    /// are its free-column entries.
    pub fn nullspace(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.get(row, f);
                }
                v
            })
            .collect();
        (basis, free)
    }

    /// Some solution of `self·x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let Rref { matrix, pivots } = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            n,
            matrix.data.into_iter().map(|r| r[n..].to_vec()).collect(),
        ))
    }
}

/// Rank of a set of column vectors of common length `len`.
pub fn rank_of_columns(len: usize, columns: &[Vec<Scalar>]) -> usize {
    if columns.is_empty() || len == 0 {
        return 0;
    }
    Matrix::from_columns(len, columns).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ScalarExponent;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_nullspace_solve() {
        let m = Matrix::from_rows(3, vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)], vec![s(0), s(1), s(1)]]);
        assert_eq!(m.rank(), 2);
        let (ns, free) = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(free, vec![2]);
        assert!(m.mul_vec(&ns[0]).iter().all(Scalar::is_zero));
        let x = m.solve(&[s(3), s(6), s(1)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![s(3), s(6), s(1)]);
        assert!(m.solve(&[s(1), s(0), s(0)]).is_none());
    }

    #[test]
    fn inverse_with_phases() {
        let p = Scalar::phase(&ScalarExponent::constant("a"));
        let m = Matrix::from_rows(2, vec![vec![p.clone(), s(1)], vec![s(1), p.clone()]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(2, vec![vec![p.clone(), s(1)], vec![&p * &p, p]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(Matrix::zeros(0, 3).rank(), 0);
        assert_eq!(Matrix::zeros(2, 0).nullspace().0.len(), 0);
        assert_eq!(Matrix::zeros(0, 2).nullspace().0.len(), 2);
    }
}
