//! Exact linear algebra over `Q`: determinant, rank, kernel functionals.
//!
//! Rank and determinant run fraction-free (Bareiss) after clearing row
//! denominators, which keeps intermediate entries as minors of the scaled
//! integer matrix instead of letting naive elimination blow up. The pivot is
//! always the first nonzero entry of the current column, so runs are
//! deterministic and reproducible.

use crate::rational::{lcm_denoms, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> QMatrix {
        assert!(!rows.is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(cols > 0, "empty rows");
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        QMatrix::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut rows = vec![vec![Rational::zero(); self.rows]; self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                rows[j][i] = self.at(i, j).clone();
            }
        }
        QMatrix::from_rows(rows)
    }

    /// Integer matrix with the same row space: each row scaled by the lcm of
    /// its denominators. Returns the matrix and the row scale factors.
    fn cleared(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut m = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row: Vec<Rational> = (0..self.cols).map(|j| self.at(i, j).clone()).collect();
            let l = lcm_denoms(&row);
            let irow: Vec<BigInt> = row.iter().map(|c| c.numer() * (&l / c.denom())).collect();
            m.push(irow);
            scales.push(l);
        }
        (m, scales)
    }

    /// Exact determinant. For an integer matrix the result is an integer.
    pub fn exact_det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let (mut m, scales) = self.cleared();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for r in 0..n {
            let pivot = (r..n).find(|&i| !m[i][r].is_zero());
            let Some(p) = pivot else {
                return Rational::zero();
            };
            if p != r {
                m.swap(p, r);
                sign = -sign;
            }
            for i in r + 1..n {
                for j in r + 1..n {
                    let v = (&m[r][r] * &m[i][j] - &m[i][r] * &m[r][j]) / &prev;
                    debug_assert!(
                        (&m[r][r] * &m[i][j] - &m[i][r] * &m[r][j]) % &prev == BigInt::zero()
                    );
                    m[i][j] = v;
                }
                m[i][r] = BigInt::zero();
            }
            prev = m[r][r].clone();
        }
        let mut scale = BigInt::one();
        for s in scales {
            scale *= s;
        }
        Rational::new(sign * m[n - 1][n - 1].clone(), scale)
    }

    /// Exact rank over `Q`, via fraction-free elimination with column skips.
    pub fn exact_rank(&self) -> usize {
        let (mut m, _) = self.cleared();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..cols {
            let pivot = (rank..rows).find(|&i| !m[i][c].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(p, rank);
            for i in rank + 1..rows {
                for j in c + 1..cols {
                    let num = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                    debug_assert!(&num % &prev == BigInt::zero());
                    m[i][j] = num / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[rank][c].clone();
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// One nonzero row vector `w` with `w * M = 0`, or `None` if the rows are
    /// linearly independent. Deterministic: the first free row of the
    /// transposed system is set to one.
    pub fn left_kernel_vector(&self) -> Option<Vec<Rational>> {
        // Solve M^T w = 0 by rational Gauss-Jordan.
        let t = self.transpose();
        let (rows, cols) = (t.rows, t.cols);
        let mut m: Vec<Vec<Rational>> = (0..rows)
            .map(|i| (0..cols).map(|j| t.at(i, j).clone()).collect())
            .collect();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            let pivot = (r..rows).find(|&i| !m[i][c].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(p, r);
            let inv = m[r][c].clone();
            for j in c..cols {
                let v = &m[r][j] / &inv;
                m[r][j] = v;
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..cols {
                        let v = &m[i][j] - &f * &m[r][j];
                        m[i][j] = v;
                    }
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        // Free columns are those without a pivot.
        let free = (0..cols).find(|c| !pivot_col_of_row.contains(c))?;
        let mut w = vec![Rational::zero(); cols];
        w[free] = Rational::one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            w[pc] = -m[row][free].clone();
        }
        Some(w)
    }
}

/// Scale a rational vector to a jointly primitive integer vector with the
/// first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_denoms(v);
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = crate::rational::gcd_all(&ints);
    if g > BigInt::one() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m(rows: Vec<Vec<i64>>) -> QMatrix {
        QMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
    }

    #[test]
    fn det_identity() {
        for n in 1..=5 {
            assert_eq!(QMatrix::identity(n).exact_det(), rat_int(1));
        }
    }

    #[test]
    fn det_repeated_column_is_zero() {
        let a = m(vec![vec![1, 1, 2], vec![3, 3, 5], vec![7, 7, 11]]);
        assert_eq!(a.exact_det(), rat_int(0));
    }

    #[test]
    fn det_known_value() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(a.exact_det(), rat_int(-2));
    }

    #[test]
    fn det_parabola_points_nonzero() {
        // columns (1, r_i) for r_1=(0,0), r_2=(1/2,1/4), r_3=(1/3,1/9)
        let a = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(1)],
            vec![rat_int(0), rat(1, 2), rat(1, 3)],
            vec![rat_int(0), rat(1, 4), rat(1, 9)],
        ]);
        // cofactor expansion by hand: 1/18 - 1/12 = -1/36
        assert_eq!(a.exact_det(), rat(-1, 36));
        assert_eq!(a.exact_rank(), 3);
    }

    #[test]
    fn rank_proportional_rows() {
        let a = m(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(a.exact_rank(), 1);
    }

    #[test]
    fn rank_rectangular() {
        let a = m(vec![vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(a.exact_rank(), 2);
        assert_eq!(a.transpose().exact_rank(), 2);
    }

    #[test]
    fn det_upper_triangular_is_diagonal_product() {
        let a = QMatrix::from_rows(vec![
            vec![rat(1, 2), rat_int(5), rat_int(7)],
            vec![rat_int(0), rat(2, 3), rat_int(11)],
            vec![rat_int(0), rat_int(0), rat(3, 5)],
        ]);
        assert_eq!(a.exact_det(), rat(1, 2) * rat(2, 3) * rat(3, 5));
    }

    #[test]
    fn kernel_single_point_column() {
        // columns (1, 0, 0): kernel picks w = (0, 1, 0)
        let a = QMatrix::from_rows(vec![vec![rat_int(1)], vec![rat_int(0)], vec![rat_int(0)]]);
        let w = a.left_kernel_vector().unwrap();
        assert_eq!(w, vec![rat_int(0), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn kernel_annihilates_columns() {
        let a = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(1)],
            vec![rat_int(0), rat(1, 2), rat_int(1)],
            vec![rat_int(0), rat(1, 4), rat_int(1)],
        ]);
        // three collinear-in-some-hyperplane test: rank of this is 3 so None
        assert!(a.left_kernel_vector().is_none() || a.exact_rank() < 3);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![rat(-2, 4), rat(1, 4), rat_int(0)];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)]
        );
    }
}
