//! Dense complex-matrix foundation shared by every other module: products,
//! adjoints, traces, Kronecker products, matrix exponentials, linear solves,
//! and Hermitian eigendecomposition.
//!
//! Matrices are row-major and double precision. Every operation returns a
//! fresh value, so concurrent use on shared inputs is safe.

use alloc::{format, vec, vec::Vec};
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result, CONDITION_CAP};

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Shorthand real-valued complex constructor.
#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// All-zero matrix. Both dimensions must be positive.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![C64::ZERO; rows * cols] }
    }

    /// n x n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::ONE;
        }
        m
    }

    /// Build a matrix entry by entry from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for col in 0..cols {
                m.data[r * cols + col] = f(r, col);
            }
        }
        m
    }

    /// Build from a row-major entry vector. The entry count must equal
    /// rows * cols.
    pub fn from_data(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build a square matrix from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, rows[0].len(), |r, col| cr(rows[r][col]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).conj())
    }

    /// Sum of diagonal entries. Panics on non-square input.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Multiply every entry by a complex scalar.
    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Maximum absolute row sum (operator infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum (operator 1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c).norm()).sum())
            .fold(0.0, f64::max)
    }

    /// max |A - A†|, evaluated entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square(), "Hermiticity is defined for square matrices");
        let mut defect = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                defect = defect.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        defect
    }

    /// True iff max |A - A†| <= tol.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Matrix-vector product. Panics when the length does not match.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix addition dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix subtraction dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(cr(-1.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == C64::ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: f64) -> ComplexMatrix {
        self.scale(cr(s))
    }
}

/// Largest entrywise difference between two equally sized matrices.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "comparison dimension mismatch");
    a.data
        .iter()
        .zip(&b.data)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Kronecker product; output dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.get(i, j);
            if aij == C64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

const EXP_MAX_TERMS: usize = 48;

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// core. The argument is scaled until its infinity norm is at most 1/2, so
/// the series converges far below the 1e-12 target before the term cap.
pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential requires a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let norm = a.norm_inf();
    let squarings = if norm > 0.5 {
        libm::ceil(libm::log2(norm / 0.5)) as u32
    } else {
        0
    };
    let b = a.scale(cr(libm::exp2(-(squarings as f64))));

    let n = a.rows;
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=EXP_MAX_TERMS {
        term = &(&term * &b) * cr(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= 1e-16 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

fn lu_decompose(a: &ComplexMatrix) -> Result<LuFactors> {
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pivot_row, mut pivot_mag) = (k, lu.get(k, k).norm());
        for r in k + 1..n {
            let mag = lu.get(r, k).norm();
            if mag > pivot_mag {
                pivot_row = r;
                pivot_mag = mag;
            }
        }
        if pivot_mag == 0.0 {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        if pivot_row != k {
            perm.swap(k, pivot_row);
            for c in 0..n {
                let tmp = lu.get(k, c);
                lu.set(k, c, lu.get(pivot_row, c));
                lu.set(pivot_row, c, tmp);
            }
        }
        let pivot = lu.get(k, k);
        for r in k + 1..n {
            let factor = lu.get(r, k) / pivot;
            lu.set(r, k, factor);
            for c in k + 1..n {
                let v = lu.get(r, c) - factor * lu.get(k, c);
                lu.set(r, c, v);
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.rows;
        let mut x = ComplexMatrix::zeros(n, b.cols);
        for col in 0..b.cols {
            // forward substitution on the permuted right-hand side
            let mut y = vec![C64::ZERO; n];
            for r in 0..n {
                let mut acc = b.get(self.perm[r], col);
                for (k, &yk) in y.iter().enumerate().take(r) {
                    acc -= self.lu.get(r, k) * yk;
                }
                y[r] = acc;
            }
            // back substitution
            for r in (0..n).rev() {
                let mut acc = y[r];
                for k in r + 1..n {
                    acc -= self.lu.get(r, k) * x.get(k, col);
                }
                x.set(r, col, acc / self.lu.get(r, r));
            }
        }
        x
    }
}

/// Solve AX = B for X with partial pivoting and one step of iterative
/// refinement. Fails with a [`Error::Singular`] carrying the 1-norm
/// condition estimate when A is singular or its condition number exceeds
/// [`CONDITION_CAP`].
pub fn solve_linear(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "linear solve requires a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if a.rows != b.rows {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {}",
            b.rows, a.rows
        )));
    }
    let factors = lu_decompose(a)?;

    let inv = factors.solve(&ComplexMatrix::identity(a.rows));
    let condition = a.norm_one() * inv.norm_one();
    if condition > CONDITION_CAP {
        return Err(Error::Singular { condition });
    }

    let x0 = factors.solve(b);
    let residual = b - &(a * &x0);
    let correction = factors.solve(&residual);
    Ok(&x0 + &correction)
}

/// Inverse via [`solve_linear`] against the identity.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "inverse requires a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    solve_linear(a, &ComplexMatrix::identity(a.rows))
}

const EIGH_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m.get(r, c).norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized as (A + A†)/2 before iterating; callers are
/// expected to have validated Hermiticity at their own tolerance. Returns
/// the eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut m = &(a + &a.adjoint()) * cr(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.fro_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let target = 1e-14 * scale;
    let skip = 1e-18 * scale;

    let mut converged = false;
    for _ in 0..EIGH_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.norm() <= skip {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let delta = 0.5 * (app - aqq);
                let shift = libm::sqrt(delta * delta + apq.norm_sqr());
                // displacement of the eigenvalue closer to app, written in
                // the cancellation-free form (mu - app) = ±r^2/(|delta| + shift)
                let displacement = if delta >= 0.0 {
                    apq.norm_sqr() / (delta + shift)
                } else {
                    -apq.norm_sqr() / (shift - delta)
                };
                let w1 = apq;
                let w2 = cr(displacement);
                let inv_norm = 1.0 / libm::sqrt(w1.norm_sqr() + w2.norm_sqr());
                let c1 = w1 * inv_norm;
                let c2 = w2 * inv_norm;

                // right-multiply columns p, q of m and v by the 2x2 unitary
                // [[c1, -conj(c2)], [c2, conj(c1)]]
                for row in 0..n {
                    let mp = m.get(row, p);
                    let mq = m.get(row, q);
                    m.set(row, p, mp * c1 + mq * c2);
                    m.set(row, q, mp * (-c2.conj()) + mq * c1.conj());
                    let vp = v.get(row, p);
                    let vq = v.get(row, q);
                    v.set(row, p, vp * c1 + vq * c2);
                    v.set(row, q, vp * (-c2.conj()) + vq * c1.conj());
                }
                // left-multiply rows p, q of m by the adjoint
                for col in 0..n {
                    let mp = m.get(p, col);
                    let mq = m.get(q, col);
                    m.set(p, col, c1.conj() * mp + c2.conj() * mq);
                    m.set(q, col, -c2 * mp + c1 * mq);
                }
                m.set(p, q, C64::ZERO);
                m.set(q, p, C64::ZERO);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > target {
        return Err(Error::Validation(format!(
            "Hermitian eigensolve did not converge in {EIGH_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.get(i, i).re.partial_cmp(&m.get(j, j).re).expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    let (values, _) = eigh(a)?;
    Ok(values[0])
}

/// True iff every eigenvalue of the (Hermitian) input is at least -tol.
pub fn is_positive_semidefinite(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(a)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, SplitMix64};

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    /// Truncated Taylor series at fixed order, independent of the
    /// scaling-and-squaring path in `mat_exp`.
    fn taylor_exp_oracle(a: &ComplexMatrix, order: usize) -> ComplexMatrix {
        let n = a.rows();
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=order {
            term = &(&term * a) * cr(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(2, 2);
        let e = mat_exp(&z).unwrap();
        assert!(max_abs_diff(&e, &ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal_exponentiates_entries() {
        let a = ComplexMatrix::from_fn(2, 2, |r, col| {
            if r == col {
                if r == 0 { c(0.3, -0.2) } else { c(-1.1, 0.7) }
            } else {
                C64::ZERO
            }
        });
        let e = mat_exp(&a).unwrap();
        assert!((e.get(0, 0) - c(0.3, -0.2).exp()).norm() < 1e-14);
        assert!((e.get(1, 1) - c(-1.1, 0.7).exp()).norm() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-15);
        assert!(e.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn exp_of_pauli_rotation_matches_taylor_oracle() {
        // exp(-i (pi/2) X) = -i X
        let a = sigma_x().scale(c(0.0, -core::f64::consts::FRAC_PI_2));
        let e = mat_exp(&a).unwrap();
        let oracle = taylor_exp_oracle(&a, 40);
        assert!(max_abs_diff(&e, &oracle) < 1e-13);
        let expected = sigma_x().scale(c(0.0, -1.0));
        assert!(max_abs_diff(&e, &expected) < 1e-13);
    }

    #[test]
    fn exp_inverse_property() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..5 {
            let a = random_hermitian(3, rng.next_u64()).scale(c(0.4, 0.3));
            let e = mat_exp(&a).unwrap();
            let e_neg = mat_exp(&a.scale(cr(-1.0))).unwrap();
            assert!(max_abs_diff(&(&e * &e_neg), &ComplexMatrix::identity(3)) < 1e-9);
        }
    }

    #[test]
    fn exp_of_skew_hermitian_is_unitary() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..5 {
            let h = random_hermitian(4, rng.next_u64());
            let u = mat_exp(&h.scale(c(0.0, -1.0))).unwrap();
            let gram = &u.adjoint() * &u;
            assert!(max_abs_diff(&gram, &ComplexMatrix::identity(4)) < 1e-9);
        }
    }

    #[test]
    fn exp_rejects_non_square() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(mat_exp(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert!(max_abs_diff(&kron(&i2, &i2), &ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = sigma_x();
        let b = sigma_z();
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let expected = a.get(i, j) * b.get(p, q);
                        assert_eq!(k.get(2 * i + p, 2 * j + q), expected);
                    }
                }
            }
        }
        // anti-diagonal sign-block structure of sigma_x (x) sigma_z
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ]);
        assert!(max_abs_diff(&k, &expected) < 1e-15);
    }

    #[test]
    fn kron_trace_factorizes_and_associates() {
        let mut rng = SplitMix64::new(37);
        for _ in 0..5 {
            let a = random_hermitian(2, rng.next_u64());
            let b = random_hermitian(2, rng.next_u64());
            let d = random_hermitian(2, rng.next_u64());
            let lhs = kron(&a, &b).trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() < 1e-12);
            let assoc_l = kron(&kron(&a, &b), &d);
            let assoc_r = kron(&a, &kron(&b, &d));
            assert!(max_abs_diff(&assoc_l, &assoc_r) < 1e-12);
        }
    }

    #[test]
    fn solve_identity_and_scalar_cases() {
        let b = random_hermitian(3, 5);
        let x = solve_linear(&ComplexMatrix::identity(3), &b).unwrap();
        assert!(max_abs_diff(&x, &b) < 1e-14);

        let two_i = ComplexMatrix::identity(2).scale(cr(2.0));
        let x = solve_linear(&two_i, &ComplexMatrix::identity(2)).unwrap();
        assert!(max_abs_diff(&x, &ComplexMatrix::identity(2).scale(cr(0.5))) < 1e-14);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let mut rng = SplitMix64::new(101);
        for _ in 0..5 {
            // shifted Hermitian stays well conditioned
            let a = &random_hermitian(4, rng.next_u64()) + &ComplexMatrix::identity(4).scale(cr(5.0));
            let x0 = random_hermitian(4, rng.next_u64());
            let b = &a * &x0;
            let x = solve_linear(&a, &b).unwrap();
            assert!(max_abs_diff(&x, &x0) < 1e-10);
            let residual = &b - &(&a * &x);
            assert!(residual.max_abs() <= 1e-10 * b.max_abs().max(1.0));
        }
    }

    #[test]
    fn solve_reports_singularity() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match solve_linear(&a, &ComplexMatrix::identity(2)) {
            Err(Error::Singular { condition }) => assert!(condition > CONDITION_CAP),
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn eigh_diagonalizes_paulis() {
        let (vals, vecs) = eigh(&sigma_z()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        // columns are eigenvectors
        let (vals, vecs_x) = eigh(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        for (k, &val) in vals.iter().enumerate() {
            let col: Vec<C64> = (0..2).map(|r| vecs_x.get(r, k)).collect();
            let image = sigma_x().mul_vec(&col);
            for r in 0..2 {
                assert!((image[r] - col[r] * cr(val)).norm() < 1e-13);
            }
        }
        let _ = vecs;
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..5 {
            let a = random_hermitian(5, rng.next_u64());
            let (vals, v) = eigh(&a).unwrap();
            let lambda = ComplexMatrix::from_fn(5, 5, |r, c| {
                if r == c { cr(vals[r]) } else { C64::ZERO }
            });
            let rebuilt = &(&v * &lambda) * &v.adjoint();
            assert!(max_abs_diff(&rebuilt, &a) < 1e-10);
            let gram = &v.adjoint() * &v;
            assert!(max_abs_diff(&gram, &ComplexMatrix::identity(5)) < 1e-11);
            // ascending order
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
        }
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut a = sigma_x();
        assert!(a.is_hermitian(1e-14));
        a.set(0, 1, c(0.0, 1e-3));
        assert!(!a.is_hermitian(1e-6));
    }
}
