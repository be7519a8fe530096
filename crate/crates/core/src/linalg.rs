//! Householder QR for tall dense matrices, used by the least-squares solver.

use crate::Scalar;

/// Compact Householder factorization. Column `j` of `factors` holds the
/// Householder vector below the diagonal and the strict upper part of R above
/// it; the diagonal of R is kept separately.
pub(crate) struct HouseholderQr<T> {
    rows: usize,
    factors: Vec<Vec<T>>,
    r_diag: Vec<T>,
}

impl<T: Scalar> HouseholderQr<T> {
    /// Factors the matrix given as a list of columns of equal length.
    pub(crate) fn new(mut columns: Vec<Vec<T>>) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut r_diag = vec![T::zero(); cols];
        for k in 0..cols {
            let mut nrm = T::zero();
            for i in k..rows {
                nrm = nrm.hypot(columns[k][i]);
            }
            if nrm != T::zero() {
                if columns[k][k] < T::zero() {
                    nrm = -nrm;
                }
                for i in k..rows {
                    columns[k][i] = columns[k][i] / nrm;
                }
                columns[k][k] = columns[k][k] + T::one();
                let (head, tail) = columns.split_at_mut(k + 1);
                let v = &head[k];
                for col in tail.iter_mut() {
                    let mut s = T::zero();
                    for i in k..rows {
                        s = s + v[i] * col[i];
                    }
                    s = -s / v[k];
                    for i in k..rows {
                        col[i] = col[i] + s * v[i];
                    }
                }
            }
            r_diag[k] = -nrm;
        }
        Self { rows, factors: columns, r_diag }
    }

    pub(crate) fn r_diagonal(&self) -> &[T] {
        &self.r_diag
    }

    fn r(&self, i: usize, j: usize) -> T {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.factors[j][i],
            std::cmp::Ordering::Equal => self.r_diag[i],
            std::cmp::Ordering::Greater => T::zero(),
        }
    }

    /// Least-squares solution of `A x = b`. Assumes full column rank.
    pub(crate) fn solve(&self, b: &[T]) -> Vec<T> {
        let cols = self.factors.len();
        let mut qtb = b.to_vec();
        for k in 0..cols {
            let v = &self.factors[k];
            if v[k] == T::zero() {
                continue;
            }
            let mut s = T::zero();
            for i in k..self.rows {
                s = s + v[i] * qtb[i];
            }
            s = -s / v[k];
            for i in k..self.rows {
                qtb[i] = qtb[i] + s * v[i];
            }
        }
        let mut x = vec![T::zero(); cols];
        for k in (0..cols).rev() {
            let mut acc = qtb[k];
            for j in k + 1..cols {
                acc = acc - self.r(k, j) * x[j];
            }
            x[k] = acc / self.r_diag[k];
        }
        x
    }

    /// Diagonal of `(A^T A)^{-1} = R^{-1} R^{-T}`.
    pub(crate) fn inverse_gram_diagonal(&self) -> Vec<T> {
        let cols = self.factors.len();
        // Column-wise inverse of the upper-triangular R.
        let mut inv = vec![vec![T::zero(); cols]; cols];
        for j in 0..cols {
            inv[j][j] = self.r_diag[j].recip();
            for i in (0..j).rev() {
                let mut acc = T::zero();
                for l in i + 1..=j {
                    acc = acc + self.r(i, l) * inv[l][j];
                }
                inv[i][j] = -acc / self.r_diag[i];
            }
        }
        (0..cols)
            .map(|i| (i..cols).map(|j| inv[i][j] * inv[i][j]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_square_system() {
        // [[2, 1], [1, 3]] x = [3, 5] -> x = [0.8, 1.4]
        let qr = HouseholderQr::new(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = qr.solve(&[3.0, 5.0]);
        assert_relative_eq!(x[0], 0.8, epsilon = 1e-14);
        assert_relative_eq!(x[1], 1.4, epsilon = 1e-14);
        // (A^T A)^{-1} = A^{-1} A^{-T}; A^{-1} = [[0.6, -0.2], [-0.2, 0.4]]
        let d = qr.inverse_gram_diagonal();
        assert_relative_eq!(d[0], 0.36 + 0.04, epsilon = 1e-14);
        assert_relative_eq!(d[1], 0.04 + 0.16, epsilon = 1e-14);
    }

    #[test]
    fn dependent_column_has_tiny_pivot() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let qr = HouseholderQr::new(vec![a, b]);
        let d = qr.r_diagonal();
        assert!(d[1].abs() < 1e-12 * d[0].abs());
    }
}
