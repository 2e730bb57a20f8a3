//! Dense linear algebra for the small systems assembled by interpolation
//! and least-squares fitting.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Real;

/// Relative pivot threshold below which a system is reported singular.
pub const DEFAULT_PIVOT_THRESHOLD: f64 = 1e-13;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows have different lengths"));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |s, (a, b)| s + *a * *b))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for (i, &a) in row.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (j, &b) in row.iter().enumerate() {
                    g[(i, j)] += a * b;
                }
            }
        }
        g
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
///
/// One factorization serves any number of right-hand sides.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        Self::factor_with_threshold(a, T::lit(DEFAULT_PIVOT_THRESHOLD))
    }

    /// A pivot is rejected when it falls below `threshold` times the largest
    /// absolute entry of its original row.
    pub fn factor_with_threshold(a: &Matrix<T>, threshold: T) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::invalid(format!(
                "linear solve needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let scale: Vec<T> =
            (0..n).map(|i| a.row(i).iter().fold(T::zero(), |m, v| m.max(v.abs()))).collect();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > threshold * scale[perm[p]]) || !best.is_finite() {
                return Err(Error::Singular { index: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= f * ukj;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        self.solve_generic(b)
    }

    /// Solves for point-valued right-hand sides, one coordinate at a time in effect.
    pub fn solve_points<const D: usize>(&self, b: &[Point<T, D>]) -> Vec<Point<T, D>> {
        self.solve_generic(b)
    }

    fn solve_generic<V>(&self, b: &[V]) -> Vec<V>
    where
        V: Copy + std::ops::Sub<Output = V> + std::ops::Mul<T, Output = V>,
    {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x: Vec<V> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - x[j] * self.lu[(i, j)];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - x[j] * self.lu[(i, j)];
            }
            x[i] = s * (T::one() / self.lu[(i, i)]);
        }
        x
    }
}

/// Solves `A x = b` by LU decomposition with partial pivoting.
pub fn solve_linear<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    if b.len() != a.rows() {
        return Err(Error::invalid(format!(
            "right-hand side has {} entries for a {}-row matrix",
            b.len(),
            a.rows()
        )));
    }
    Ok(Lu::factor(a)?.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(solve_linear(&Matrix::<f64>::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn permutation_needs_pivoting() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(solve_linear(&a, &[3.0, 7.0]).unwrap(), vec![7.0, 3.0]);
    }

    #[test]
    fn singular_reports_pivot_index() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(solve_linear(&a, &[1.0, 2.0]), Err(Error::Singular { index: 1 }));
    }

    #[test]
    fn non_square_is_rejected() {
        let a = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(Lu::factor(&a), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_diagonally_dominant_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 20;
            let mut a = Matrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = rng.gen_range(-1.0..1.0);
                }
                a[(i, i)] += n as f64;
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let x = solve_linear(&a, &b).unwrap();
            let ax = a.mul_vec(&x);
            let bmax = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let res = ax.iter().zip(&b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            assert!(res <= 1e-9 * (1.0 + bmax), "residual {res}");
        }
    }

    #[test]
    fn point_rhs_matches_scalar_solves() {
        let a = Matrix::from_rows(&[vec![4.0, 1.0], vec![2.0, 3.0]]).unwrap();
        let lu = Lu::factor(&a).unwrap();
        let pts = [Point([1.0, 2.0]), Point([3.0, 4.0])];
        let sol = lu.solve_points(&pts);
        let xs = lu.solve(&[1.0, 3.0]);
        let ys = lu.solve(&[2.0, 4.0]);
        assert_eq!(sol[0].0, [xs[0], ys[0]]);
        assert_eq!(sol[1].0, [xs[1], ys[1]]);
    }
}
