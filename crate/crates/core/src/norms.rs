//! Classical scalar quantities of a matrix: operator norm, spectral radius,
//! numerical radius, Crawford number, the support function of the numerical
//! range, attainment subspaces and restricted norms.
//!
//! The numerical radius and the Crawford number are computed from the support
//! function `θ ↦ λ_max(Re(e^{iθ}T))` of the numerical range: a uniform sweep
//! over `[0, 2π)` followed by golden-section refinement around the best grid
//! point. The sweep result is always a lower estimate of `w(T)`, since every
//! reported value is attained by an explicit unit vector.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_le, Error, Result};
use crate::linalg::{
    c, eigenvalues, eigh_unchecked, fix_phase, imag_part, lambda_max_unchecked, lambda_min_unchecked, real_part,
    svd_right, CVector, ComplexMatrix, Subspace,
};
use crate::optimize::golden_section_max;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Eigen,
    ThetaSweep,
    SphereAscent,
    OracleGrid,
}

/// A computed extremal value with a unit vector that attains it.
#[derive(Clone, Debug)]
pub struct NormCertificate {
    pub value: f64,
    pub witness: CVector,
    pub method: Method,
    pub iterations: usize,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            grid_points: 720,
            refine_tol: 1e-12,
        }
    }
}

const SANDWICH_TOL: f64 = 1e-9;

/// Largest singular value, with the corresponding right singular vector.
pub fn operator_norm(t: &ComplexMatrix) -> Result<NormCertificate> {
    let (sv, v) = svd_right(t.matrix())?;
    let mut witness = v.column(0).into_owned();
    fix_phase(&mut witness);
    Ok(NormCertificate {
        value: sv[0],
        witness,
        method: Method::Eigen,
        iterations: 1,
        tol: f64::EPSILON * (1.0 + sv[0]),
    })
}

pub fn spectral_radius(t: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(t)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// The pencil `θ ↦ Re(e^{iθ}T) = cos θ Re(T) - sin θ Im(T)`.
pub(crate) struct RotationPencil {
    re: DMatrix<Complex64>,
    im: DMatrix<Complex64>,
}

impl RotationPencil {
    pub(crate) fn new(t: &ComplexMatrix) -> Self {
        Self {
            re: real_part(t).into_inner(),
            im: imag_part(t).into_inner(),
        }
    }

    pub(crate) fn at(&self, theta: f64) -> DMatrix<Complex64> {
        let (s, co) = theta.sin_cos();
        &self.re * c(co, 0.0) - &self.im * c(s, 0.0)
    }

    fn sweep(
        &self,
        opts: &SweepOptions,
        objective: impl Fn(&DMatrix<Complex64>) -> f64,
    ) -> (f64, f64, usize) {
        let n = opts.grid_points;
        let step = 2.0 * PI / n as f64;
        let (mut best_theta, mut best) = (0.0, f64::NEG_INFINITY);
        for k in 0..n {
            let theta = k as f64 * step;
            let v = objective(&self.at(theta));
            if v > best {
                best = v;
                best_theta = theta;
            }
        }
        let (theta, refined, evals) = golden_section_max(
            |th| objective(&self.at(th)),
            best_theta - step,
            best_theta + step,
            opts.refine_tol,
        );
        if refined >= best {
            (theta, refined, n + evals)
        } else {
            (best_theta, best, n + evals)
        }
    }
}

/// `λ_max(Re(e^{iθ}T))`, the support function of the numerical range in direction `e^{-iθ}`.
pub fn support_function(t: &ComplexMatrix, theta: f64) -> Result<f64> {
    Ok(lambda_max_unchecked(&RotationPencil::new(t).at(theta)))
}

fn check_sweep_options(opts: &SweepOptions) -> Result<()> {
    if opts.grid_points < 8 {
        return Err(Error::InvalidParams(format!(
            "grid_points must be at least 8, got {}",
            opts.grid_points
        )));
    }
    if !(opts.refine_tol > 0.0) {
        return Err(Error::InvalidParams("refine_tol must be positive".into()));
    }
    Ok(())
}

/// Sweep-based numerical radius without the sandwich post-checks.
pub(crate) fn numerical_radius_raw(t: &ComplexMatrix, opts: &SweepOptions) -> Result<NormCertificate> {
    check_sweep_options(opts)?;
    if t.dim() == 1 {
        return Ok(NormCertificate {
            value: t.get(0, 0).norm(),
            witness: CVector::from_element(1, c(1.0, 0.0)),
            method: Method::Eigen,
            iterations: 1,
            tol: 0.0,
        });
    }
    let pencil = RotationPencil::new(t);
    let (theta, support, iterations) = pencil.sweep(opts, lambda_max_unchecked);
    let eig = eigh_unchecked(&pencil.at(theta))?;
    let mut witness = eig.top_vector();
    fix_phase(&mut witness);
    let attained = t.quadratic_form(&witness).norm();
    Ok(NormCertificate {
        value: attained.max(support),
        witness,
        method: Method::ThetaSweep,
        iterations,
        tol: opts.refine_tol.max(1e-12) * (1.0 + attained),
    })
}

/// `w(T) = sup_θ λ_max(Re(e^{iθ}T))`.
///
/// The result is a certified lower estimate and is checked against
/// `‖T‖/2 ≤ w(T) ≤ ‖T‖` and `r(T) ≤ w(T)`.
pub fn numerical_radius(t: &ComplexMatrix, opts: &SweepOptions) -> Result<NormCertificate> {
    let cert = numerical_radius_raw(t, opts)?;
    let norm = operator_norm(t)?.value;
    let tol = SANDWICH_TOL * (1.0 + norm);
    ensure_le("‖T‖/2 ≤ w(T)", 0.5 * norm, cert.value, tol)?;
    ensure_le("w(T) ≤ ‖T‖", cert.value, norm, tol)?;
    ensure_le("r(T) ≤ w(T)", spectral_radius(t)?, cert.value, tol)?;
    Ok(cert)
}

/// `c(T) = max(0, sup_θ λ_min(Re(e^{iθ}T)))`, the distance from the origin to `W(T)`.
pub fn crawford_number(t: &ComplexMatrix, opts: &SweepOptions) -> Result<NormCertificate> {
    check_sweep_options(opts)?;
    if t.dim() == 1 {
        return Ok(NormCertificate {
            value: t.get(0, 0).norm(),
            witness: CVector::from_element(1, c(1.0, 0.0)),
            method: Method::Eigen,
            iterations: 1,
            tol: 0.0,
        });
    }
    let pencil = RotationPencil::new(t);
    let (theta, support, iterations) = pencil.sweep(opts, lambda_min_unchecked);
    let mut witness = if support > 0.0 {
        nearest_point_witness(t, &pencil.at(theta), theta)?
    } else {
        origin_witness(t, &pencil, opts)?
    };
    fix_phase(&mut witness);
    let value = support.max(0.0);
    Ok(NormCertificate {
        value,
        witness,
        method: Method::ThetaSweep,
        iterations,
        tol: opts.refine_tol.max(1e-12) * (1.0 + value),
    })
}

/// Unit vector whose Rayleigh quotient is the point of `W(T)` nearest the origin,
/// given the optimal supporting direction `θ`.
fn nearest_point_witness(t: &ComplexMatrix, h: &DMatrix<Complex64>, theta: f64) -> Result<CVector> {
    let eig = eigh_unchecked(h)?;
    let scale = 1.0 + eig.max().abs().max(eig.min().abs());
    let k = eig
        .eigenvalues
        .iter()
        .take_while(|&&l| l <= eig.min() + 1e-9 * scale)
        .count();
    if k == 1 {
        return Ok(eig.bottom_vector());
    }
    // Degenerate bottom eigenspace: W(T) has a flat edge on the supporting line.
    // Points on it are c + i<Ky, y> (after rotation), K the imaginary part of the
    // rotated compression.
    let basis = eig.eigenvectors.columns(0, k).into_owned();
    let rotated = ComplexMatrix::wrap(basis.adjoint() * t.matrix() * &basis).scale_complex(Complex64::from_polar(1.0, theta));
    let k_eig = eigh_unchecked(imag_part(&rotated).matrix())?;
    let (lo, hi) = (k_eig.min(), k_eig.max());
    let y = if lo >= 0.0 {
        k_eig.bottom_vector()
    } else if hi <= 0.0 {
        k_eig.top_vector()
    } else {
        let a = hi / (hi - lo);
        k_eig.bottom_vector() * c(a.sqrt(), 0.0) + k_eig.top_vector() * c((1.0 - a).sqrt(), 0.0)
    };
    Ok(&basis * y)
}

/// Best-effort witness when `0 ∈ W(T)`: the sampled extreme eigenvector with the smallest `|<Tx,x>|`.
fn origin_witness(t: &ComplexMatrix, pencil: &RotationPencil, opts: &SweepOptions) -> Result<CVector> {
    let samples = (opts.grid_points / 10).max(8);
    let mut best: Option<(f64, CVector)> = None;
    for k in 0..samples {
        let eig = eigh_unchecked(&pencil.at(2.0 * PI * k as f64 / samples as f64))?;
        let (u, v) = (eig.bottom_vector(), eig.top_vector());
        let mut candidates = vec![u.clone(), v.clone()];
        // Rayleigh quotients of u and v straddle zero along the rotated real axis;
        // mixing them moves the quotient across the origin.
        for s in 1..8 {
            let a = s as f64 / 8.0;
            candidates.push(&u * c(a.sqrt(), 0.0) + &v * c((1.0 - a).sqrt(), 0.0));
        }
        for x in candidates {
            let x = x.normalize();
            let q = t.quadratic_form(&x).norm();
            if best.as_ref().map_or(true, |(b, _)| q < *b) {
                best = Some((q, x));
            }
        }
    }
    Ok(best.expect("at least one sample").1)
}

/// `sup{‖Bx‖ : x ∈ L, ‖x‖ = 1}`.
pub fn restricted_norm(b: &ComplexMatrix, l: &Subspace) -> Result<f64> {
    if l.ambient_dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: l.ambient_dim(),
        });
    }
    if l.is_trivial() {
        return Err(Error::EmptySubspace);
    }
    let restricted = b.matrix() * l.basis();
    let svd = nalgebra::SVD::try_new(restricted, false, false, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
    Ok(svd.singular_values.max())
}

/// Span of the right singular vectors with `σ ≥ σ_max - tol·(1+σ_max)`, i.e. of `M_T`.
pub fn norm_attainment_subspace(t: &ComplexMatrix, tol: f64) -> Result<Subspace> {
    let (sv, v) = svd_right(t.matrix())?;
    let cutoff = sv[0] - tol * (1.0 + sv[0]);
    let k = sv.iter().take_while(|&&s| s >= cutoff).count();
    Subspace::from_orthonormal(v.columns(0, k).into_owned())
}

/// `|w(T) - ‖T‖| ≤ tol·(1+‖T‖)`.
pub fn is_normaloid(t: &ComplexMatrix, tol: f64) -> Result<bool> {
    let norm = operator_norm(t)?.value;
    let w = numerical_radius(t, &SweepOptions::default())?.value;
    Ok((w - norm).abs() <= tol * (1.0 + norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn e3() -> ComplexMatrix {
        real(&[&[0., 0., 0.], &[2., 0., 0.], &[0., 1., 0.]])
    }

    fn e4() -> ComplexMatrix {
        real(&[&[0., 2., 0.], &[0., 0., 2.], &[0., 0., 0.]])
    }

    fn e5() -> ComplexMatrix {
        real(&[&[1., 1., 0.], &[0., 0., 0.], &[0., 0., 1.]])
    }

    fn jordan() -> ComplexMatrix {
        real(&[&[0., 1.], &[0., 0.]])
    }

    fn diag_1_i() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c(1., 0.), c(0., 1.)])
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn opts() -> SweepOptions {
        SweepOptions::default()
    }

    #[test]
    fn operator_norm_examples() {
        close(operator_norm(&e4()).unwrap().value, 2.0, 1e-14);
        close(operator_norm(&ComplexMatrix::identity(3)).unwrap().value, 1.0, 1e-15);
        let cert = operator_norm(&e3()).unwrap();
        close(cert.value, 2.0, 1e-14);
        close(e3().apply(&cert.witness).norm(), 2.0, 1e-14);
    }

    #[test]
    fn spectral_radius_examples() {
        assert!(spectral_radius(&e4()).unwrap() < 1e-5);
        close(spectral_radius(&diag_1_i()).unwrap(), 1.0, 1e-15);
        close(spectral_radius(&e5()).unwrap(), 1.0, 1e-14);
    }

    #[test]
    fn support_function_examples() {
        let h = real(&[&[2., 1.], &[1., -1.]]);
        let top = crate::linalg::lambda_max(&h).unwrap();
        close(support_function(&h, 0.0).unwrap(), top, 1e-14);
        for theta in [0.0, 0.3, 1.7, 4.0] {
            close(support_function(&jordan(), theta).unwrap(), 0.5, 1e-14);
        }
        close(support_function(&diag_1_i(), 0.0).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn numerical_radius_examples() {
        close(numerical_radius(&e4(), &opts()).unwrap().value, 2f64.sqrt(), 1e-10);
        close(numerical_radius(&jordan(), &opts()).unwrap().value, 0.5, 1e-12);
        close(numerical_radius(&diag_1_i(), &opts()).unwrap().value, 1.0, 1e-12);
        let w = numerical_radius(&e5(), &opts()).unwrap();
        close(w.value, (1.0 + 2f64.sqrt()) / 2.0, 1e-10);
        assert!(e5().quadratic_form(&w.witness).norm() >= w.value - w.tol);
        close(w.witness.norm(), 1.0, 1e-12);
    }

    #[test]
    fn numerical_radius_rejects_coarse_grid() {
        let bad = SweepOptions {
            grid_points: 4,
            refine_tol: 1e-12,
        };
        assert!(matches!(numerical_radius(&e4(), &bad), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn crawford_examples() {
        close(crawford_number(&ComplexMatrix::identity(3), &opts()).unwrap().value, 1.0, 1e-12);
        close(crawford_number(&jordan(), &opts()).unwrap().value, 0.0, 1e-15);
        let cert = crawford_number(&diag_1_i(), &opts()).unwrap();
        close(cert.value, 0.5f64.sqrt(), 1e-10);
        close(diag_1_i().quadratic_form(&cert.witness).norm(), 0.5f64.sqrt(), 1e-8);
    }

    #[test]
    fn crawford_degenerate_edge() {
        // W(T) is the segment [1 - i, 1 + i]; the nearest point to 0 is 1.
        let t = ComplexMatrix::from_diagonal(&[c(1., -1.), c(1., 1.), c(1., 1.)]);
        let cert = crawford_number(&t, &opts()).unwrap();
        close(cert.value, 1.0, 1e-10);
        close(t.quadratic_form(&cert.witness).norm(), 1.0, 1e-8);
    }

    #[test]
    fn crawford_witness_when_origin_inside() {
        let t = ComplexMatrix::from_diagonal(&[c(1., 0.), c(-1., 0.)]);
        let cert = crawford_number(&t, &opts()).unwrap();
        assert_eq!(cert.value, 0.0);
        assert!(t.quadratic_form(&cert.witness).norm() < 0.05);
    }

    #[test]
    fn crawford_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3] {
            for _ in 0..3 {
                let m = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                // shift away from the origin so c(T) > 0 sometimes
                let shift = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let t = ComplexMatrix::new(m + DMatrix::identity(n, n) * shift).unwrap();
                let value = crawford_number(&t, &opts()).unwrap().value;
                let mut sampled = f64::INFINITY;
                for _ in 0..200_000 {
                    let x = CVector::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).normalize();
                    sampled = sampled.min(t.quadratic_form(&x).norm());
                }
                assert!(sampled >= value - 1e-9, "sampled {sampled} below {value}");
                assert!(sampled <= value + 2e-2, "sampled {sampled} far above {value}");
            }
        }
    }

    #[test]
    fn restricted_norm_examples() {
        let b = ComplexMatrix::from_real_diagonal(&[4., 1., 0.]);
        let mut e1 = CVector::zeros(3);
        e1[0] = c(1., 0.);
        let mut e2 = CVector::zeros(3);
        e2[1] = c(1., 0.);
        let mut e3v = CVector::zeros(3);
        e3v[2] = c(1., 0.);
        let l = Subspace::span(3, &[e1, e2]).unwrap();
        close(restricted_norm(&b, &l).unwrap(), 4.0, 1e-14);
        close(restricted_norm(&b, &Subspace::full(3)).unwrap(), 4.0, 1e-14);
        close(restricted_norm(&b, &Subspace::span(3, &[e3v]).unwrap()).unwrap(), 0.0, 1e-14);
        assert!(matches!(restricted_norm(&b, &Subspace::trivial(3)), Err(Error::EmptySubspace)));
    }

    #[test]
    fn attainment_subspace_examples() {
        let m = norm_attainment_subspace(&ComplexMatrix::from_real_diagonal(&[16., 16., 3.]), 1e-9).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(
            norm_attainment_subspace(&ComplexMatrix::from_real_diagonal(&[4., 1., 0.]), 1e-9)
                .unwrap()
                .dim(),
            1
        );
        assert_eq!(norm_attainment_subspace(&ComplexMatrix::identity(3), 1e-9).unwrap().dim(), 3);
    }

    #[test]
    fn normaloid_examples() {
        assert!(is_normaloid(&diag_1_i(), 1e-8).unwrap());
        assert!(!is_normaloid(&e4(), 1e-8).unwrap());
        assert!(is_normaloid(&ComplexMatrix::zeros(2), 1e-8).unwrap());
    }
}
