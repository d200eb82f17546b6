//! Dense complex linear algebra: Hermitian eigensystems, the polar absolute
//! value, functional calculus on positive semidefinite matrices, and
//! subspace algebra (attainment sets, kernels, intersections).
//!
//! Matrices are small and dense. Everything here is a pure function of its
//! inputs and is backed by `nalgebra`'s decompositions.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;

const MAX_ITERS: usize = 10_000;
const HERMITIAN_TOL: f64 = 1e-10;
const SUBSPACE_ORTHO_TOL: f64 = 1e-10;
/// Singular-value threshold used to detect common vectors of subspaces.
pub const INTERSECTION_THRESHOLD: f64 = 1e-8;
/// Default relative multiplicity tolerance for top eigenspaces.
pub const DEFAULT_EIGENSPACE_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::DimensionError("matrix must be at least 1x1".into()));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ParseError("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Unchecked wrap for matrices derived from valid ones.
    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionError("matrix must be at least 1x1".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds a real matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let d: Vec<Complex64> = d.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `T* T`
    pub fn gram(&self) -> Self {
        Self(self.0.adjoint() * &self.0).hermitian_part()
    }

    /// `T T*`
    pub fn co_gram(&self) -> Self {
        Self(&self.0 * self.0.adjoint()).hermitian_part()
    }

    /// `(M + M*) / 2`; removes round-off asymmetry from nominally Hermitian products.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * c(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            out = &out * &self.0;
        }
        Self(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.0 * x
    }

    /// `<T x, x>` for the inner product linear in the first slot.
    pub fn quadratic_form(&self, x: &CVector) -> Complex64 {
        x.dotc(&(&self.0 * x))
    }

    /// Frobenius norm of `M - M*`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol * (1.0 + self.frobenius_norm())
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Compression `V* T V` onto the span of the orthonormal columns of `V`.
    pub fn compress(&self, v: &Subspace) -> Self {
        Self(v.basis.adjoint() * &self.0 * &v.basis)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Eigen-decomposition `H = U diag(λ) U*` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl HermitianEigensystem {
    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn top_vector(&self) -> CVector {
        self.eigenvectors.column(self.eigenvalues.len() - 1).into_owned()
    }

    pub fn bottom_vector(&self) -> CVector {
        self.eigenvectors.column(0).into_owned()
    }

    /// `U diag(f(λ)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_eigenvalues(&values)
    }

    /// `U diag(values) U*`.
    pub fn with_eigenvalues(&self, values: &[f64]) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (j, &s) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(s);
        }
        ComplexMatrix::wrap(&scaled * self.eigenvectors.adjoint()).hermitian_part()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let residual = h.hermitian_residual();
    if residual <= HERMITIAN_TOL * (1.0 + h.frobenius_norm()) {
        Ok(())
    } else {
        Err(Error::NonHermitianInput { residual })
    }
}

pub(crate) fn eigh_unchecked(m: &DMatrix<Complex64>) -> Result<HermitianEigensystem> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_ITERS)
        .ok_or(Error::ConvergenceFailure("Hermitian eigensolver"))?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest eigenvalue of a matrix assumed exactly Hermitian.
pub(crate) fn lambda_max_unchecked(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].re;
    }
    m.symmetric_eigenvalues().max()
}

pub(crate) fn lambda_min_unchecked(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].re;
    }
    m.symmetric_eigenvalues().min()
}

pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    check_hermitian(h)?;
    eigh_unchecked(h.hermitian_part().matrix())
}

/// Largest eigenvalue of a Hermitian matrix. For PSD input this is the operator norm.
pub fn lambda_max(h: &ComplexMatrix) -> Result<f64> {
    check_hermitian(h)?;
    Ok(lambda_max_unchecked(h.hermitian_part().matrix()))
}

pub fn lambda_min(h: &ComplexMatrix) -> Result<f64> {
    check_hermitian(h)?;
    Ok(lambda_min_unchecked(h.hermitian_part().matrix()))
}

/// Singular values in descending order together with the right singular vectors
/// as columns of `V`.
pub(crate) fn svd_right(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let svd = SVD::try_new(m.clone(), false, true, f64::EPSILON, MAX_ITERS)
        .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
    let v = svd
        .v_t
        .as_ref()
        .expect("right singular vectors requested")
        .adjoint();
    Ok((svd.singular_values.iter().copied().collect(), v))
}

/// Complete right singular basis, padding the thin SVD of a wide matrix.
fn full_right_basis(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.ncols();
    if m.nrows() >= n {
        return svd_right(m);
    }
    // Wide input: pad with zero rows so the decomposition yields all n directions.
    let mut padded = DMatrix::zeros(n, n);
    padded.rows_mut(0, m.nrows()).copy_from(m);
    svd_right(&padded)
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd_right(m.matrix())?.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if m.dim() == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let n = m.dim();
    let diag = |a: DMatrix<Complex64>| Schur::try_new(a, f64::EPSILON, MAX_ITERS).map(|s| s.unpack().1.diagonal());
    if let Some(d) = diag(m.matrix().clone()) {
        return Ok(d.iter().copied().collect());
    }
    // The QR iteration can stall on exactly deflated input such as the zero
    // matrix; a real shift of the spectrum avoids it.
    let shift = c(1.0 + m.frobenius_norm(), 0.0);
    let shifted = m.matrix() + DMatrix::identity(n, n) * shift;
    let d = diag(shifted).ok_or(Error::ConvergenceFailure("Schur decomposition"))?;
    Ok(d.iter().map(|z| z - shift).collect())
}

/// The positive square root `|T| = (T*T)^{1/2}`, computed from the SVD of `T`.
pub fn polar_abs(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (sv, v) = svd_right(t.matrix())?;
    let mut scaled = v.clone();
    for (j, s) in sv.iter().enumerate() {
        scaled.column_mut(j).scale_mut(s.max(0.0));
    }
    Ok(ComplexMatrix::wrap(&scaled * v.adjoint()).hermitian_part())
}

/// `Re(T) = (T + T*)/2`.
pub fn real_part(t: &ComplexMatrix) -> ComplexMatrix {
    t.hermitian_part()
}

/// `Im(T) = (T - T*)/(2i)`.
pub fn imag_part(t: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::wrap((t.matrix() - t.matrix().adjoint()) * c(0.0, -0.5))
}

/// Piecewise-linear nondecreasing function given by sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneTable {
    points: Vec<(f64, f64)>,
}

impl MonotoneTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParams("table needs at least two points".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 {
                return Err(Error::InvalidParams(
                    "table must be strictly increasing in t and nondecreasing in value".into(),
                ));
            }
        }
        if points.iter().any(|p| p.1 < 0.0 || !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidParams("table values must be finite and nonnegative".into()));
        }
        Ok(Self { points })
    }

    fn eval(&self, t: f64) -> Option<f64> {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if t < first.0 || t > last.0 {
            return None;
        }
        let k = self.points.partition_point(|p| p.0 <= t).clamp(1, self.points.len() - 1);
        let (t0, y0) = self.points[k - 1];
        let (t1, y1) = self.points[k];
        Some(y0 + (y1 - y0) * (t - t0) / (t1 - t0))
    }
}

/// A nonnegative scalar function on `[0, ∞)` applied through functional calculus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarFunction {
    /// `t^γ`, `γ > 0`.
    Power { gamma: f64 },
    Sqrt,
    Identity,
    Table(MonotoneTable),
}

impl ScalarFunction {
    pub fn power(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma.is_finite() {
            Ok(Self::Power { gamma })
        } else {
            Err(Error::InvalidParams(format!("power exponent must be positive, got {gamma}")))
        }
    }

    /// The pair `f(t) = t^γ`, `g(t) = t^{1-γ}` with `f g = id`.
    pub fn complementary_pair(gamma: f64) -> Result<(Self, Self)> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParams(format!("gamma must lie in (0,1), got {gamma}")));
        }
        Ok((Self::Power { gamma }, Self::Power { gamma: 1.0 - gamma }))
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        if t < 0.0 {
            return None;
        }
        let y = match self {
            ScalarFunction::Power { gamma } => t.powf(*gamma),
            ScalarFunction::Sqrt => t.sqrt(),
            ScalarFunction::Identity => t,
            ScalarFunction::Table(table) => table.eval(t)?,
        };
        y.is_finite().then_some(y)
    }
}

/// `f(P)` for a Hermitian positive semidefinite `P`. Negative round-off
/// eigenvalues are clamped to zero before `f` is applied.
pub fn psd_function(p: &ComplexMatrix, f: &ScalarFunction) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem(p)?;
    let mut mapped = Vec::with_capacity(eig.eigenvalues.len());
    for &lambda in &eig.eigenvalues {
        let t = lambda.max(0.0);
        mapped.push(f.eval(t).ok_or_else(|| Error::DomainError(format!("t = {t}")))?);
    }
    Ok(eig.with_eigenvalues(&mapped))
}

/// `P^γ` for PSD `P`.
pub fn psd_power(p: &ComplexMatrix, gamma: f64) -> Result<ComplexMatrix> {
    if gamma == 1.0 {
        return Ok(p.hermitian_part());
    }
    psd_function(p, &ScalarFunction::power(gamma)?)
}

/// A subspace of `C^n` stored as an orthonormal basis (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<Complex64>,
}

impl Subspace {
    pub fn trivial(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: DMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: DMatrix::identity(n, n),
        }
    }

    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(basis: DMatrix<Complex64>) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let residual = (gram - DMatrix::<Complex64>::identity(k, k)).norm();
        if residual > SUBSPACE_ORTHO_TOL {
            return Err(Error::InvalidParams(format!(
                "basis is not orthonormal (residual {residual:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    /// Orthonormal basis for the span of arbitrary vectors.
    pub fn span(n: usize, vectors: &[CVector]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::trivial(n));
        }
        for v in vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let m = DMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
        let svd = SVD::try_new(m, true, false, f64::EPSILON, MAX_ITERS)
            .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
        let u = svd.u.expect("left singular vectors requested");
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-10 * (1.0 + smax))
            .count();
        Ok(Self {
            ambient_dim: n,
            basis: u.columns(0, rank).into_owned(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn vector(&self, j: usize) -> CVector {
        self.basis.column(j).into_owned()
    }

    /// Orthogonal projector `V V*`.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.basis * self.basis.adjoint()
    }

    /// Distance from `v` to the subspace, relative to `‖v‖`.
    pub fn relative_residual(&self, v: &CVector) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (v - self.projector() * v).norm() / norm
    }

    pub fn contains(&self, v: &CVector, tol: f64) -> bool {
        self.relative_residual(v) <= tol
    }

    /// Principal angles (radians, ascending) between two subspaces of equal dimension.
    pub fn principal_angles(&self, other: &Self) -> Result<Vec<f64>> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Vec::new());
        }
        let m = self.basis.adjoint() * &other.basis;
        let svd = SVD::try_new(m, false, false, f64::EPSILON, MAX_ITERS)
            .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
        Ok(svd
            .singular_values
            .iter()
            .map(|&s| s.clamp(0.0, 1.0).acos())
            .collect())
    }

    /// True when both subspaces have the same dimension and all principal angles are within `tol`.
    pub fn same_span(&self, other: &Self, tol: f64) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        Ok(self.principal_angles(other)?.iter().all(|&a| a <= tol))
    }
}

/// Eigenvectors of `H` whose eigenvalues are within `tol·(1+|λ_max|)` of `λ_max`.
pub fn top_eigenspace(h: &ComplexMatrix, tol: f64) -> Result<Subspace> {
    let eig = hermitian_eigensystem(h)?;
    let top = eig.max();
    let cutoff = top - tol * (1.0 + top.abs());
    let first = eig.eigenvalues.partition_point(|&l| l < cutoff);
    let n = h.dim();
    Ok(Subspace {
        ambient_dim: n,
        basis: eig.eigenvectors.columns(first, n - first).into_owned(),
    })
}

/// Right singular vectors with `σ ≤ tol·(1+σ_max)`.
pub fn kernel(m: &ComplexMatrix, tol: f64) -> Result<Subspace> {
    let (sv, v) = svd_right(m.matrix())?;
    let cutoff = tol * (1.0 + sv[0]);
    let first = sv.partition_point(|&s| s > cutoff);
    let n = m.dim();
    Ok(Subspace {
        ambient_dim: n,
        basis: v.columns(first, n - first).into_owned(),
    })
}

/// Intersection of subspaces as the null space of the stacked complement
/// projectors `[I - P_1; I - P_2; ...]`.
pub fn intersect_subspaces(subspaces: &[Subspace]) -> Result<Subspace> {
    let first = subspaces
        .first()
        .ok_or_else(|| Error::InvalidParams("no subspaces to intersect".into()))?;
    let n = first.ambient_dim;
    for s in subspaces {
        if s.ambient_dim != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.ambient_dim,
            });
        }
    }
    if subspaces.iter().any(Subspace::is_trivial) {
        return Ok(Subspace::trivial(n));
    }
    let identity = DMatrix::<Complex64>::identity(n, n);
    let mut stacked = DMatrix::zeros(n * subspaces.len(), n);
    for (k, s) in subspaces.iter().enumerate() {
        stacked
            .rows_mut(k * n, n)
            .copy_from(&(&identity - s.projector()));
    }
    let (sv, v) = full_right_basis(&stacked)?;
    let first_null = sv.partition_point(|&s| s > INTERSECTION_THRESHOLD);
    Ok(Subspace {
        ambient_dim: n,
        basis: v.columns(first_null, n - first_null).into_owned(),
    })
}

/// Rotates `x` so that its first non-negligible coordinate is real and nonnegative.
pub fn fix_phase(x: &mut CVector) {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(z) = x.iter().find(|z| z.norm() > 1e-8 * scale.max(f64::MIN_POSITIVE)).copied() {
        let phase = z.conj() / z.norm();
        for v in x.iter_mut() {
            *v *= phase;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn e3() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0., 0., 0.], &[2., 0., 0.], &[0., 1., 0.]]).unwrap()
    }

    fn e5() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1., 1., 0.], &[0., 0., 0.], &[0., 0., 1.]]).unwrap()
    }

    fn unit(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            ComplexMatrix::new(DMatrix::zeros(0, 0)),
            Err(Error::DimensionError(_))
        ));
        assert!(ComplexMatrix::new(DMatrix::zeros(2, 3)).is_err());
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(ComplexMatrix::new(m).is_err());
    }

    #[test]
    fn eigensystem_of_diagonal() {
        let eig = hermitian_eigensystem(&ComplexMatrix::from_real_diagonal(&[4., 1., 0.])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0, 1.0, 4.0]);
        // columns are the permuted identity (up to phase)
        for (col, idx) in [(0, 2), (1, 1), (2, 0)] {
            assert_close(eig.eigenvectors[(idx, col)].norm(), 1.0, 1e-14);
        }
    }

    #[test]
    fn eigensystem_of_swap() {
        let h = ComplexMatrix::from_real_rows(&[&[0., 0.5], &[0.5, 0.]]).unwrap();
        let eig = hermitian_eigensystem(&h).unwrap();
        assert_close(eig.eigenvalues[0], -0.5, 1e-15);
        assert_close(eig.eigenvalues[1], 0.5, 1e-15);
    }

    #[test]
    fn eigensystem_of_e5_sum() {
        let t = e5();
        let s = &t.gram() + &t.co_gram();
        let eig = hermitian_eigensystem(&s).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in eig.eigenvalues.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert_close(*got, want, 1e-13);
        }
        let n = 3.0;
        assert!(eig.reconstruct().distance(&s) <= 1e-12 * n * (1.0 + 4.0));
        let ortho = eig.eigenvectors.adjoint() * &eig.eigenvectors - DMatrix::identity(3, 3);
        assert!(ortho.norm() <= 1e-12 * n);
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let t = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&t),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn polar_abs_examples() {
        let t = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        assert!(polar_abs(&t).unwrap().distance(&ComplexMatrix::from_real_diagonal(&[0., 1.])) < 1e-14);
        assert!(polar_abs(&e3()).unwrap().distance(&ComplexMatrix::from_real_diagonal(&[2., 1., 0.])) < 1e-14);
        assert!(polar_abs(&ComplexMatrix::zeros(3)).unwrap().frobenius_norm() == 0.0);
    }

    #[test]
    fn psd_function_examples() {
        let p = ComplexMatrix::from_real_diagonal(&[4., 1., 0.]);
        let r = psd_function(&p, &ScalarFunction::Sqrt).unwrap();
        assert!(r.distance(&ComplexMatrix::from_real_diagonal(&[2., 1., 0.])) < 1e-14);
        let id = psd_function(&p, &ScalarFunction::Identity).unwrap();
        assert!(id.distance(&p) < 1e-14);
        let half = ScalarFunction::power(0.5).unwrap();
        let once = psd_function(&ComplexMatrix::from_real_diagonal(&[9.]), &half).unwrap();
        assert_close(once.get(0, 0).re, 3.0, 1e-15);
        let twice = psd_function(&once, &half).unwrap();
        assert_close(twice.get(0, 0).re, 3f64.sqrt(), 1e-15);
    }

    #[test]
    fn psd_function_table_and_domain() {
        let table = MonotoneTable::new(vec![(0.0, 0.0), (2.0, 1.0)]).unwrap();
        let f = ScalarFunction::Table(table);
        let out = psd_function(&ComplexMatrix::from_real_diagonal(&[1., 2.]), &f).unwrap();
        assert_close(out.get(0, 0).re, 0.5, 1e-15);
        assert!(matches!(
            psd_function(&ComplexMatrix::from_real_diagonal(&[3.]), &f),
            Err(Error::DomainError(_))
        ));
        assert!(MonotoneTable::new(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(ScalarFunction::power(0.0).is_err());
        assert!(ScalarFunction::complementary_pair(1.0).is_err());
    }

    #[test]
    fn real_imag_parts() {
        let t = ComplexMatrix::from_diagonal(&[c(1., 0.), c(0., 1.)]);
        assert!(real_part(&t).distance(&ComplexMatrix::from_real_diagonal(&[1., 0.])) == 0.0);
        assert!(imag_part(&t).distance(&ComplexMatrix::from_real_diagonal(&[0., 1.])) == 0.0);

        let h = ComplexMatrix::from_rows(&[vec![c(2., 0.), c(1., 1.)], vec![c(1., -1.), c(0., 0.)]]).unwrap();
        assert!(real_part(&h).distance(&h) == 0.0);
        assert!(imag_part(&h).frobenius_norm() == 0.0);

        let n = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        let re = real_part(&n);
        let im = imag_part(&n);
        assert!(re.distance(&ComplexMatrix::from_real_rows(&[&[0., 0.5], &[0.5, 0.]]).unwrap()) == 0.0);
        let expected_im =
            ComplexMatrix::from_rows(&[vec![c(0., 0.), c(0., -0.5)], vec![c(0., 0.5), c(0., 0.)]]).unwrap();
        assert!(im.distance(&expected_im) == 0.0);
        let recombined = &re + &im.scale_complex(c(0., 1.));
        assert!(recombined.distance(&n) <= 1e-15);
    }

    #[test]
    fn top_eigenspace_examples() {
        let s = top_eigenspace(&ComplexMatrix::from_real_diagonal(&[4., 1., 0.]), 1e-9).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&unit(3, 0), 1e-12));

        let s = top_eigenspace(&ComplexMatrix::from_real_diagonal(&[32. / 5., 32. / 5., 3. / 5.]), 1e-9).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&unit(3, 0), 1e-12) && s.contains(&unit(3, 1), 1e-12));

        assert_eq!(top_eigenspace(&ComplexMatrix::identity(3), 1e-9).unwrap().dim(), 3);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&ComplexMatrix::from_real_diagonal(&[2., 0., -2.]), 1e-9).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&unit(3, 1), 1e-12));
        let inv = ComplexMatrix::from_real_rows(&[&[1., 2.], &[3., 4.]]).unwrap();
        assert!(kernel(&inv, 1e-9).unwrap().is_trivial());
        assert_eq!(kernel(&ComplexMatrix::zeros(3), 1e-9).unwrap().dim(), 3);
    }

    #[test]
    fn intersection_examples() {
        let e2 = Subspace::span(3, &[unit(3, 1)]).unwrap();
        let e23 = Subspace::span(3, &[unit(3, 1), unit(3, 2)]).unwrap();
        let meet = intersect_subspaces(&[e2.clone(), e23.clone(), e2.clone()]).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&unit(3, 1), 1e-10));

        let e1 = Subspace::span(3, &[unit(3, 0)]).unwrap();
        assert!(intersect_subspaces(&[e1, e2.clone()]).unwrap().is_trivial());

        let meet = intersect_subspaces(&[Subspace::full(3), e23.clone()]).unwrap();
        assert!(meet.same_span(&e23, 1e-7).unwrap());

        assert!(matches!(
            intersect_subspaces(&[Subspace::full(2), e23]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn power_pair_multiplies_to_identity_function() {
        for gamma in [0.25, 0.5, 0.75] {
            let (f, g) = ScalarFunction::complementary_pair(gamma).unwrap();
            for k in 0..=200 {
                let t = k as f64 * 0.37;
                let prod = f.eval(t).unwrap() * g.eval(t).unwrap();
                assert!((prod - t).abs() <= 1e-12 * (1.0 + t));
            }
        }
    }

    #[test]
    fn eigenvalues_of_degenerate_matrices() {
        for n in 1..6 {
            assert!(eigenvalues(&ComplexMatrix::zeros(n)).unwrap().iter().all(|z| z.norm() < 1e-12));
        }
        let shift = ComplexMatrix::from_real_rows(&[&[0., 2., 0.], &[0., 0., 2.], &[0., 0., 0.]]).unwrap();
        assert!(eigenvalues(&shift).unwrap().iter().all(|z| z.norm() < 1e-6));
        let mut ev = eigenvalues(&ComplexMatrix::from_diagonal(&[c(1., 0.), c(0., 1.)])).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(0., 1.)).norm() < 1e-14 && (ev[1] - c(1., 0.)).norm() < 1e-14);
    }

    #[test]
    fn fixes_phase_of_first_coordinate() {
        let mut x = CVector::from_vec(vec![c(0., 1.), c(1., 0.)]);
        fix_phase(&mut x);
        assert_close(x[0].im, 0.0, 1e-15);
        assert!(x[0].re > 0.0);
        assert_close(x[1].im, -1.0, 1e-15);
    }
}
