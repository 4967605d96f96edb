//! Dense complex matrices and the tolerance-aware primitives the inverse
//! routines are built on.
//!
//! Storage is a column-major [`nalgebra::DMatrix`]; every public constructor
//! and accessor speaks row-major, which is also the order used by the file
//! formats in [`crate::format`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Thresholds for rank decisions and approximate equality.
///
/// A singular value counts towards the rank when it exceeds
/// `max(atol, rtol * sigma_max)`. Two matrices are equal when
/// `|A - B|_F <= atol + rtol * max(|A|_F, |B|_F)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        let ok = atol.is_finite() && rtol.is_finite() && atol >= 0.0 && rtol >= 0.0;
        if !ok || (atol == 0.0 && rtol == 0.0) {
            return Err(Error::InvalidTolerance { atol, rtol });
        }
        Ok(Self { atol, rtol })
    }

    /// Rank-only tolerance scaled to the working precision of an `m x n`
    /// matrix.
    pub fn for_rank(m: usize, n: usize) -> Self {
        Self {
            atol: 0.0,
            rtol: m.max(n).max(1) as f64 * f64::EPSILON * 64.0,
        }
    }

    /// Threshold applied to residuals that are already normalized to be
    /// scale free.
    pub fn threshold(&self) -> f64 {
        self.atol + self.rtol
    }

    pub fn accepts(&self, normalized_residual: f64) -> bool {
        normalized_residual <= self.threshold()
    }

    /// True when a normalized residual sits within a factor of ten of the
    /// acceptance threshold, on either side.
    pub fn is_borderline(&self, normalized_residual: f64) -> bool {
        let t = self.threshold();
        normalized_residual > t / 10.0 && normalized_residual < t * 10.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-9,
        }
    }
}

/// `A = F * G` with `F` of full column rank and `G` of full row rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankFactorization {
    pub f: ComplexMatrix,
    pub g: ComplexMatrix,
    pub rank: usize,
}

impl RankFactorization {
    pub fn product(&self) -> ComplexMatrix {
        &self.f * &self.g
    }
}

/// Singular value decomposition with the singular values sorted in
/// descending order. `u` is `m x k`, `v` is `n x k` with `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above the tolerance threshold.
    pub fn rank(&self, tol: Tolerance) -> usize {
        let cut = rank_cutoff(&self.sigma, tol);
        self.sigma.iter().take_while(|&&s| s > cut).count()
    }

    /// Whether some singular value lies within a factor of ten of the rank
    /// cutoff, making the rank decision numerically fragile.
    pub fn rank_is_borderline(&self, tol: Tolerance) -> bool {
        let cut = rank_cutoff(&self.sigma, tol);
        cut > 0.0 && self.sigma.iter().any(|&s| s > cut / 10.0 && s < cut * 10.0)
    }
}

fn rank_cutoff(sigma: &[f64], tol: Tolerance) -> f64 {
    let smax = sigma.first().copied().unwrap_or(0.0);
    tol.atol.max(tol.rtol * smax)
}

/// Dense `rows x cols` complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadLength {
                rows,
                cols,
                got: entries.len(),
            });
        }
        if let Some(k) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self {
            data: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Row-major real entries; panics on a length mismatch or non-finite
    /// input. Intended for literals.
    pub fn real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
            .expect("invalid real matrix literal")
    }

    /// Row-major complex entries; panics like [`ComplexMatrix::real`].
    pub fn complex(rows: usize, cols: usize, entries: &[C64]) -> Self {
        Self::new(rows, cols, entries.to_vec()).expect("invalid complex matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &z) in d.iter().enumerate() {
            m.data[(i, i)] = z;
        }
        m
    }

    pub fn real_diag(d: &[f64]) -> Self {
        Self::diag(&d.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub(crate) fn from_dmatrix(data: DMatrix<C64>) -> Self {
        Self { data }
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[(i, j)] = z;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<C64> {
        let (m, n) = self.shape();
        let mut out = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    /// Conjugate transpose. Exact: applying it twice returns the input
    /// bit for bit.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            data: &self.data * &rhs.data,
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape("add", rhs)?;
        Ok(Self {
            data: &self.data + &rhs.data,
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape("sub", rhs)?;
        Ok(Self {
            data: &self.data - &rhs.data,
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            data: &self.data * z,
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    fn same_shape(&self, op: &'static str, rhs: &Self) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    /// `I - self` for a square matrix.
    pub fn complement(&self) -> Self {
        &Self::identity(self.rows()) - self
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut result = Self::identity(self.rows());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Frobenius norm, scaled by the largest modulus so that it neither
    /// overflows nor underflows for finite entries.
    pub fn norm_fro(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        m * self.data.iter().map(|z| (z / m).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn svd(&self) -> Svd {
        let (m, n) = self.shape();
        let k = m.min(n);
        if k == 0 {
            return Svd {
                u: Self::zeros(m, 0),
                sigma: Vec::new(),
                v: Self::zeros(n, 0),
            };
        }
        let a = faer::Mat::<C64>::from_fn(m, n, |i, j| self.data[(i, j)]);
        match a.thin_svd() {
            Ok(svd) => {
                let (u, s, v) = (svd.U(), svd.S(), svd.V());
                Svd {
                    u: Self::from_dmatrix(DMatrix::from_fn(m, k, |i, j| u[(i, j)])),
                    sigma: (0..k).map(|i| s[i].re).collect(),
                    v: Self::from_dmatrix(DMatrix::from_fn(n, k, |i, j| v[(i, j)])),
                }
            }
            // no convergence: fall back to nalgebra's bidiagonal SVD
            Err(_) => {
                let svd = self.data.clone().svd(true, true);
                Svd {
                    u: Self::from_dmatrix(svd.u.expect("u requested")),
                    sigma: svd.singular_values.iter().copied().collect(),
                    v: Self::from_dmatrix(svd.v_t.expect("v requested").adjoint()),
                }
            }
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows().min(self.cols()) == 0 {
            return Vec::new();
        }
        self.svd().sigma
    }

    /// Number of singular values above `max(atol, rtol * sigma_max)`.
    pub fn rank(&self, tol: Tolerance) -> usize {
        let sigma = self.singular_values();
        let cut = rank_cutoff(&sigma, tol);
        sigma.iter().take_while(|&&s| s > cut).count()
    }

    /// Rank factorization from the SVD: `F = U_r * Sigma_r`, `G = V_r^*`.
    pub fn rank_factorization(&self, tol: Tolerance) -> RankFactorization {
        let svd = self.svd();
        let r = svd.rank(tol);
        let (m, n) = self.shape();
        let mut f = Self::zeros(m, r);
        let mut g = Self::zeros(r, n);
        for k in 0..r {
            for i in 0..m {
                f.set(i, k, svd.u.get(i, k) * svd.sigma[k]);
            }
            for j in 0..n {
                g.set(k, j, svd.v.get(j, k).conj());
            }
        }
        RankFactorization { f, g, rank: r }
    }

    /// Ordinary inverse; fails with [`Error::Singular`] when the rank at
    /// `tol` is below the dimension.
    pub fn inverse(&self, tol: Tolerance) -> Result<Self> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(self.clone());
        }
        let rank = self.rank(tol);
        if rank < n {
            return Err(Error::Singular { rank, n });
        }
        self.data
            .clone()
            .try_inverse()
            .map(Self::from_dmatrix)
            .ok_or(Error::Singular { rank, n })
    }

    /// `|A - B|_F <= atol + rtol * max(|A|_F, |B|_F)`.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        self.same_shape("approx_eq", other)?;
        let diff = (&self.data - &other.data).norm();
        let scale = self.norm_fro().max(other.norm_fro());
        Ok(diff <= tol.atol + tol.rtol * scale)
    }

    /// Relative Frobenius distance `|A - B| / max(|A|, |B|, 1)`.
    pub fn rel_dist(&self, other: &Self) -> f64 {
        let diff = (self - other).norm_fro();
        diff / self.norm_fro().max(other.norm_fro()).max(1.0)
    }

    /// Column-space equality: `rank([A | B]) = rank(A) = rank(B)`.
    pub fn range_equal(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                op: "range_equal",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let ra = self.rank(tol);
        let rb = other.rank(tol);
        if ra != rb {
            return Ok(false);
        }
        Ok(self.hstack(other).rank(tol) == ra)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows(), other.rows(), "hstack row mismatch");
        let (m, n1) = self.shape();
        let n2 = other.cols();
        let mut out = Self::zeros(m, n1 + n2);
        out.data.view_mut((0, 0), (m, n1)).copy_from(&self.data);
        out.data.view_mut((0, n1), (m, n2)).copy_from(&other.data);
        out
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows(), b.rows(), "block row mismatch");
        assert_eq!(c.rows(), d.rows(), "block row mismatch");
        assert_eq!(a.cols(), c.cols(), "block col mismatch");
        assert_eq!(b.cols(), d.cols(), "block col mismatch");
        let (m1, n1) = a.shape();
        let (m2, n2) = d.shape();
        let mut out = Self::zeros(m1 + m2, n1 + n2);
        out.data.view_mut((0, 0), (m1, n1)).copy_from(&a.data);
        out.data.view_mut((0, n1), (m1, n2)).copy_from(&b.data);
        out.data.view_mut((m1, 0), (m2, n1)).copy_from(&c.data);
        out.data.view_mut((m1, n1), (m2, n2)).copy_from(&d.data);
        out
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let b = Self::zeros(self.rows(), other.cols());
        let c = Self::zeros(other.rows(), self.cols());
        Self::from_blocks(self, &b, &c, other)
    }

    /// Copy of the `rows x cols` block starting at `(i, j)`.
    pub fn block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Self {
        Self::from_dmatrix(self.data.view((i, j), (rows, cols)).into_owned())
    }

    pub fn columns(&self, start: usize, count: usize) -> Self {
        self.block(0, start, self.rows(), count)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "[")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

// Operator impls panic on shape mismatch, as nalgebra does; the checked
// variants above return errors instead.

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matmul dimension mismatch");
        ComplexMatrix::from_dmatrix(&self.data * &rhs.data)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix::from_dmatrix(&self.data + &rhs.data)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix::from_dmatrix(&self.data - &rhs.data)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix(-&self.data)
    }
}

/// Product of a chain of conformable matrices.
pub fn chain(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("empty product chain");
    rest.iter().fold((*first).clone(), |acc, m| &acc * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = ZERO;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn adjoint_examples() {
        let a = ComplexMatrix::complex(1, 1, &[I]);
        assert_eq!(a.adjoint(), ComplexMatrix::complex(1, 1, &[-I]));

        let b = ComplexMatrix::real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(b.adjoint(), ComplexMatrix::real(2, 2, &[1.0, 3.0, 2.0, 4.0]));

        let c = ComplexMatrix::complex(2, 2, &[ZERO, C64::new(1.0, 1.0), ZERO, ZERO]);
        let want = ComplexMatrix::complex(2, 2, &[ZERO, ZERO, C64::new(1.0, -1.0), ZERO]);
        assert_eq!(c.adjoint(), want);
    }

    #[test]
    fn matmul_examples() {
        let a = ComplexMatrix::real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(ComplexMatrix::identity(2).matmul(&a).unwrap(), a);

        let n = ComplexMatrix::real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(n.matmul(&n).unwrap(), ComplexMatrix::zeros(2, 2));

        let x = ComplexMatrix::real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let y = ComplexMatrix::real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let want = ComplexMatrix::real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(naive_product(&x, &y), want);
        assert_eq!(x.matmul(&y).unwrap(), want);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&a),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(a.try_add(&ComplexMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn construction_rejects_non_finite() {
        let err = ComplexMatrix::new(1, 2, vec![ONE, C64::new(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        let err = ComplexMatrix::new(1, 1, vec![C64::new(0.0, f64::INFINITY)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ONE; 3]),
            Err(Error::BadLength { .. })
        ));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1e-9).is_err());
        assert!(Tolerance::new(0.0, f64::NAN).is_err());
        assert!(Tolerance::new(0.0, 1e-9).is_ok());
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerance::default();
        assert_eq!(ComplexMatrix::identity(2).rank(tol), 2);
        assert_eq!(ComplexMatrix::real(2, 2, &[1.0; 4]).rank(tol), 1);
        assert_eq!(ComplexMatrix::zeros(3, 3).rank(tol), 0);
    }

    #[test]
    fn rank_factorization_examples() {
        let tol = Tolerance::default();
        let rf = ComplexMatrix::identity(2).rank_factorization(tol);
        assert_eq!(rf.rank, 2);
        assert!(rf.product().approx_eq(&ComplexMatrix::identity(2), tol).unwrap());

        let rf = ComplexMatrix::zeros(2, 2).rank_factorization(tol);
        assert_eq!((rf.rank, rf.f.shape(), rf.g.shape()), (0, (2, 0), (0, 2)));
        assert_eq!(rf.product(), ComplexMatrix::zeros(2, 2));

        let ones = ComplexMatrix::real(2, 2, &[1.0; 4]);
        let rf = ones.rank_factorization(tol);
        assert_eq!(rf.rank, 1);
        assert!(rf.product().approx_eq(&ones, tol).unwrap());
        assert_eq!(rf.f.rank(tol), 1);
        assert_eq!(rf.g.rank(tol), 1);
    }

    #[test]
    fn inverse_examples() {
        let tol = Tolerance::default();
        let inv = ComplexMatrix::real(1, 1, &[2.0]).inverse(tol).unwrap();
        assert!(inv.approx_eq(&ComplexMatrix::real(1, 1, &[0.5]), tol).unwrap());

        let u = ComplexMatrix::real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let want = ComplexMatrix::real(2, 2, &[1.0, -1.0, 0.0, 1.0]);
        assert!(u.inverse(tol).unwrap().approx_eq(&want, tol).unwrap());

        let err = ComplexMatrix::real(2, 2, &[1.0; 4]).inverse(tol).unwrap_err();
        assert_eq!(err, Error::Singular { rank: 1, n: 2 });
        assert!(matches!(
            ComplexMatrix::zeros(2, 3).inverse(tol),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn approx_eq_examples() {
        let tol = Tolerance::default();
        let id = ComplexMatrix::identity(2);
        assert!(id.approx_eq(&id, tol).unwrap());
        assert!(!id.approx_eq(&ComplexMatrix::zeros(2, 2), tol).unwrap());

        let a = ComplexMatrix::real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let e = ComplexMatrix::real(2, 2, &[1e-14; 4]);
        let loose = Tolerance::new(0.0, 1e-9).unwrap();
        assert!(a.approx_eq(&(&a + &e), loose).unwrap());
        assert!(a.approx_eq(&ComplexMatrix::zeros(3, 3), tol).is_err());
    }

    #[test]
    fn range_equal_examples() {
        let tol = Tolerance::default();
        let e1 = ComplexMatrix::real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e1x2 = ComplexMatrix::real(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let e2 = ComplexMatrix::real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        assert!(e1.range_equal(&e1x2, tol).unwrap());
        assert!(!e1.range_equal(&e2, tol).unwrap());
    }

    #[test]
    fn block_helpers() {
        let a = ComplexMatrix::real(1, 1, &[1.0]);
        let b = ComplexMatrix::real(1, 1, &[2.0]);
        let c = ComplexMatrix::real(1, 1, &[3.0]);
        let d = ComplexMatrix::real(1, 1, &[4.0]);
        let m = ComplexMatrix::from_blocks(&a, &b, &c, &d);
        assert_eq!(m, ComplexMatrix::real(2, 2, &[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(m.block(1, 0, 1, 1), c);
        assert_eq!(a.direct_sum(&d), ComplexMatrix::real_diag(&[1.0, 4.0]));
        assert_eq!(m.pow(0), ComplexMatrix::identity(2));
        assert_eq!(m.pow(3), chain(&[&m, &m, &m]));
    }
}
