//! The weighted norm `‖T‖_{α,β} = sup_{‖x‖=1} sqrt(α|<Tx,x>|² + β‖Tx‖²)`.
//!
//! The supremum is a nonconvex problem on the complex unit sphere. It is
//! solved by multi-start projected gradient ascent with backtracking; the
//! start set always contains the operator-norm and numerical-radius witnesses,
//! which are optimal at the `(0, 1)` and `(1, 0)` extremes. The result is a
//! lower estimate, bracketed by `sqrt(α+β)·w(T) ≤ ‖T‖_{α,β} ≤ sqrt(α w(T)² + β ‖T‖²)`.
//!
//! [`alpha_beta_norm_oracle`] is an independent brute-force evaluation for
//! `n ∈ {2, 3}` that shares no code with the ascent.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_le, Error, Result};
use crate::linalg::{c, fix_phase, CVector, ComplexMatrix};
use crate::norms::{self, Method, NormCertificate, SweepOptions};
use crate::rng;

/// Nonnegative weights `(α, β) ≠ (0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights")]
pub struct Weights {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawWeights {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawWeights> for Weights {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        Weights::new(raw.alpha, raw.beta)
    }
}

impl Weights {
    pub const NUMERICAL_RADIUS: Weights = Weights { alpha: 1.0, beta: 0.0 };
    pub const OPERATOR_NORM: Weights = Weights { alpha: 0.0, beta: 1.0 };
    pub const DAVIS_WIELANDT: Weights = Weights { alpha: 1.0, beta: 1.0 };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let valid = alpha.is_finite() && beta.is_finite() && alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0;
        if valid {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidWeights { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `(cα, cβ)` for `c > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.alpha * factor, self.beta * factor)
    }

    /// Normalizes to `α + β = 1`.
    pub fn normalized(&self) -> Self {
        let s = self.sum();
        Self {
            alpha: self.alpha / s,
            beta: self.beta / s,
        }
    }

    pub fn mix(&self) -> MixRatio {
        MixRatio(self.alpha / self.sum())
    }

    pub fn both_positive(&self) -> bool {
        self.alpha > 0.0 && self.beta > 0.0
    }
}

impl std::fmt::Display for Weights {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// `t = α/(α+β) ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MixRatio(f64);

impl MixRatio {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::InvalidParams(format!("mix ratio must lie in [0,1], got {t}")))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// `(t, 1 - t)`.
    pub fn weights(&self) -> Weights {
        Weights {
            alpha: self.0,
            beta: 1.0 - self.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub value_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 5000,
            step_tol: 1e-12,
            value_tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerOptions {
    fn validate(&self) -> Result<()> {
        let ok = self.restarts >= 1
            && self.max_iters >= 1
            && self.step_tol > 0.0
            && self.value_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams("optimizer options must be positive".into()))
        }
    }
}

/// `g(x) = α|<Tx,x>|² + β‖Tx‖²` and its Euclidean gradient on `C^n ≅ R^{2n}`.
struct SphereObjective<'a> {
    t: &'a DMatrix<Complex64>,
    t_adj: DMatrix<Complex64>,
    alpha: f64,
    beta: f64,
}

impl<'a> SphereObjective<'a> {
    fn new(t: &'a ComplexMatrix, w: Weights) -> Self {
        Self {
            t: t.matrix(),
            t_adj: t.matrix().adjoint(),
            alpha: w.alpha,
            beta: w.beta,
        }
    }

    fn value(&self, x: &CVector) -> f64 {
        let tx = self.t * x;
        let phi = x.dotc(&tx);
        self.alpha * phi.norm_sqr() + self.beta * tx.norm_squared()
    }

    /// `2(α(φ̄ Tx + φ T*x) + β T*Tx)` with `φ = <Tx, x>`.
    fn value_and_gradient(&self, x: &CVector) -> (f64, CVector) {
        let tx = self.t * x;
        let phi = x.dotc(&tx);
        let value = self.alpha * phi.norm_sqr() + self.beta * tx.norm_squared();
        let adj_x = &self.t_adj * x;
        let gram_x = &self.t_adj * &tx;
        let grad = (&tx * (phi.conj() * self.alpha) + adj_x * (phi * self.alpha) + gram_x * c(self.beta, 0.0)) * c(2.0, 0.0);
        (value, grad)
    }
}

struct AscentResult {
    value: f64,
    x: CVector,
    iterations: usize,
}

/// Projected gradient ascent on the unit sphere with Armijo backtracking and
/// renormalization.
fn ascend(obj: &SphereObjective<'_>, start: CVector, scale: f64, opts: &OptimizerOptions) -> AscentResult {
    let mut x = start.normalize();
    let (mut g, mut grad) = obj.value_and_gradient(&x);
    let mut step = 1.0 / (1.0 + scale);
    let mut stalls = 0;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let radial = x.dotc(&grad).re;
        let tangent = &grad - &x * c(radial, 0.0);
        let slope = tangent.norm_squared();
        if slope.sqrt() <= f64::EPSILON * (1.0 + scale) {
            break;
        }
        let mut s = 2.0 * step;
        let accepted = loop {
            let candidate = (&x + &tangent * c(s, 0.0)).normalize();
            let value = obj.value(&candidate);
            if value >= g + 1e-4 * s * slope {
                break Some((candidate, value));
            }
            s *= 0.5;
            if s < opts.step_tol / (1.0 + scale) {
                break None;
            }
        };
        let Some((candidate, value)) = accepted else {
            break;
        };
        let gain = value - g;
        x = candidate;
        step = s;
        let (v, gr) = obj.value_and_gradient(&x);
        g = v;
        grad = gr;
        if gain <= opts.value_tol * (1.0 + g) {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    AscentResult { value: g, x, iterations }
}

/// Multi-start maximization given precomputed `w(T)` and `‖T‖` certificates.
pub(crate) fn alpha_beta_norm_with(
    t: &ComplexMatrix,
    weights: Weights,
    opts: &OptimizerOptions,
    w_cert: &NormCertificate,
    norm_cert: &NormCertificate,
) -> Result<NormCertificate> {
    opts.validate()?;
    let n = t.dim();
    let obj = SphereObjective::new(t, weights);
    let norm = norm_cert.value;
    let scale = weights.sum() * norm * norm;

    let mut best: Option<AscentResult> = None;
    let mut total_iters = 0;
    for restart in 0..opts.restarts {
        let start = match restart {
            0 => norm_cert.witness.clone(),
            1 => w_cert.witness.clone(),
            _ => rng::unit_vector(&mut rng::stream(opts.seed, restart as u64), n),
        };
        let result = ascend(&obj, start, scale, opts);
        total_iters += result.iterations;
        if best.as_ref().map_or(true, |b| result.value > b.value) {
            best = Some(result);
        }
    }
    let best = best.expect("at least one restart");
    let value = best.value.max(0.0).sqrt();
    let mut witness = best.x;
    fix_phase(&mut witness);

    let w = w_cert.value;
    let tol = 1e-8 * (1.0 + norm);
    ensure_le("sqrt(α+β) w(T) ≤ ‖T‖_{α,β}", weights.sum().sqrt() * w, value, tol)?;
    ensure_le(
        "‖T‖_{α,β} ≤ sqrt(α w² + β ‖T‖²)",
        value,
        (weights.alpha * w * w + weights.beta * norm * norm).sqrt(),
        tol,
    )?;
    Ok(NormCertificate {
        value,
        witness,
        method: Method::SphereAscent,
        iterations: total_iters,
        tol,
    })
}

/// `‖T‖_{α,β}` by multi-start projected gradient ascent.
pub fn alpha_beta_norm(t: &ComplexMatrix, weights: Weights, opts: &OptimizerOptions) -> Result<NormCertificate> {
    let w_cert = norms::numerical_radius(t, &SweepOptions::default())?;
    let norm_cert = norms::operator_norm(t)?;
    alpha_beta_norm_with(t, weights, opts, &w_cert, &norm_cert)
}

/// The modified Davis-Wielandt radius, `‖T‖_{1,1}`.
pub fn modified_davis_wielandt(t: &ComplexMatrix, opts: &OptimizerOptions) -> Result<NormCertificate> {
    alpha_beta_norm(t, Weights::DAVIS_WIELANDT, opts)
}

const ORACLE_SAMPLES_3D: usize = 1_000_000;
const ORACLE_POLISHED_3D: usize = 32;
const ORACLE_SEED: u64 = 0x0AC1_E5EE_D000_0003;

fn objective_direct(t: &DMatrix<Complex64>, x: &[Complex64], w: Weights) -> f64 {
    let n = x.len();
    let mut phi = Complex64::new(0.0, 0.0);
    let mut tx_sq = 0.0;
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += t[(i, j)] * x[j];
        }
        phi += x[i].conj() * row;
        tx_sq += row.norm_sqr();
    }
    w.alpha * phi.norm_sqr() + w.beta * tx_sq
}

/// Derivative-free coordinate (compass) search maximizing `f` from `start`.
fn compass_max(f: impl Fn(&[f64]) -> f64, start: Vec<f64>, initial_step: f64) -> f64 {
    let mut x = start;
    let mut best = f(&x);
    let mut step = initial_step;
    while step > 1e-11 {
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] += dir * step;
                let v = f(&y);
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

fn point_2d(s: f64, phi: f64) -> [Complex64; 2] {
    [c(s.cos(), 0.0), Complex64::from_polar(s.sin(), phi)]
}

fn point_3d(a: &[f64]) -> [Complex64; 3] {
    let (sa, ca) = a[0].sin_cos();
    let (sb, cb) = a[1].sin_cos();
    [
        c(ca, 0.0),
        Complex64::from_polar(sa * cb, a[2]),
        Complex64::from_polar(sa * sb, a[3]),
    ]
}

/// Brute-force `‖T‖_{α,β}` for `n ∈ {2, 3}`.
///
/// For `n = 2` the sphere (modulo global phase) is parameterized as
/// `x = (cos s, e^{iφ} sin s)` and sampled on a `grid × grid` lattice, then the best
/// lattice point is polished by compass search. For `n = 3`, a fixed set of
/// 10⁶ seeded random unit vectors is evaluated and the best 32 are polished by
/// compass search in hyperspherical angles.
pub fn alpha_beta_norm_oracle(t: &ComplexMatrix, weights: Weights, grid: usize) -> Result<f64> {
    if grid < 100 {
        return Err(Error::InvalidParams(format!("oracle grid must be at least 100, got {grid}")));
    }
    let m = t.matrix();
    let best = match t.dim() {
        2 => {
            let f = |p: &[f64]| objective_direct(m, &point_2d(p[0], p[1]), weights);
            let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
            for i in 0..grid {
                let s = FRAC_PI_2 * i as f64 / (grid - 1) as f64;
                for j in 0..grid {
                    let phi = 2.0 * PI * j as f64 / grid as f64;
                    let v = f(&[s, phi]);
                    if v > best.0 {
                        best = (v, s, phi);
                    }
                }
            }
            compass_max(f, vec![best.1, best.2], PI / grid as f64).max(best.0)
        }
        3 => {
            let mut rng = rng::stream(ORACLE_SEED, 0);
            let mut top: Vec<(f64, CVector)> = Vec::with_capacity(ORACLE_POLISHED_3D + 1);
            for _ in 0..ORACLE_SAMPLES_3D {
                let x = rng::unit_vector(&mut rng, 3);
                let v = objective_direct(m, x.as_slice(), weights);
                if top.len() < ORACLE_POLISHED_3D || v > top[top.len() - 1].0 {
                    let pos = top.partition_point(|(u, _)| *u >= v);
                    top.insert(pos, (v, x));
                    top.truncate(ORACLE_POLISHED_3D);
                }
            }
            let f = |p: &[f64]| objective_direct(m, &point_3d(p), weights);
            top.iter()
                .map(|(v, x)| {
                    let r0 = x[0].norm().min(1.0);
                    let a = r0.acos();
                    let b = x[2].norm().atan2(x[1].norm());
                    // remove the global phase carried by the first coordinate
                    let p0 = x[0].arg();
                    let start = vec![a, b, x[1].arg() - p0, x[2].arg() - p0];
                    compass_max(f, start, 0.05).max(*v)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
        n => return Err(Error::UnsupportedDimension(n)),
    };
    Ok(best.max(0.0).sqrt())
}

/// Which equality conditions of the norm bounds hold for `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityDiagnostics {
    /// `‖T‖²_{α,β} = α w(T)² + β ‖T‖²`
    pub attains_decomposed: bool,
    /// `w(T) = ‖T‖`
    pub normaloid: bool,
    /// `‖T‖_{α,β} = sqrt(α + 4β) w(T)`, which forces `T = 0`.
    pub forces_zero: bool,
}

pub fn equality_diagnostics(
    t: &ComplexMatrix,
    weights: Weights,
    tol: f64,
    opts: &OptimizerOptions,
) -> Result<EqualityDiagnostics> {
    if !weights.both_positive() {
        return Err(Error::InvalidWeights {
            alpha: weights.alpha,
            beta: weights.beta,
        });
    }
    let w_cert = norms::numerical_radius(t, &SweepOptions::default())?;
    let norm_cert = norms::operator_norm(t)?;
    let value = alpha_beta_norm_with(t, weights, opts, &w_cert, &norm_cert)?.value;
    diagnose(weights, value, w_cert.value, norm_cert.value, tol)
}

/// [`equality_diagnostics`] from already computed `‖T‖_{α,β}`, `w(T)` and `‖T‖`.
pub(crate) fn diagnose(weights: Weights, value: f64, w: f64, norm: f64, tol: f64) -> Result<EqualityDiagnostics> {
    if !weights.both_positive() {
        return Err(Error::InvalidWeights {
            alpha: weights.alpha,
            beta: weights.beta,
        });
    }
    let decomposed = weights.alpha * w * w + weights.beta * norm * norm;
    let attains_decomposed = (value * value - decomposed).abs() <= tol * (1.0 + decomposed);
    let normaloid = (w - norm).abs() <= tol * (1.0 + norm);
    let upper = (weights.alpha + 4.0 * weights.beta).sqrt() * w;
    let forces_zero = (value - upper).abs() <= tol * (1.0 + upper);
    if forces_zero {
        ensure_le("‖T‖_{α,β} = sqrt(α+4β) w(T) implies T = 0", norm, 0.0, tol)?;
    }
    Ok(EqualityDiagnostics {
        attains_decomposed,
        normaloid,
        forces_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap()
    }

    fn diag_1_i() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c(1., 0.), c(0., 1.)])
    }

    /// `max_{u ∈ [0,1]} αu(1-u) + βu` for the 2x2 Jordan block, in closed form.
    fn jordan_closed_form(alpha: f64, beta: f64) -> f64 {
        if beta <= alpha {
            (alpha + beta) / (2.0 * alpha.sqrt())
        } else {
            beta.sqrt()
        }
    }

    fn opts() -> OptimizerOptions {
        OptimizerOptions::default()
    }

    #[test]
    fn weights_validation() {
        assert!(Weights::new(0.0, 0.0).is_err());
        assert!(Weights::new(-1.0, 1.0).is_err());
        assert!(Weights::new(f64::NAN, 1.0).is_err());
        let w = Weights::new(2.0, 6.0).unwrap();
        assert_eq!(w.mix().value(), 0.25);
        assert_eq!(w.normalized(), Weights::new(0.25, 0.75).unwrap());
        assert!(MixRatio::new(1.5).is_err());
        let parsed: std::result::Result<Weights, _> = serde_json::from_str(r#"{"alpha":0,"beta":0}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn identity_norm() {
        for (a, b) in [(1.0, 0.0), (0.0, 1.0), (2.0, 3.0)] {
            let v = alpha_beta_norm(&ComplexMatrix::identity(3), Weights::new(a, b).unwrap(), &opts())
                .unwrap()
                .value;
            assert!((v - (a + b).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_block_matches_closed_form() {
        for (a, b) in [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (3.0, 1.0), (1.0, 3.0), (2.0, 2.0)] {
            let v = alpha_beta_norm(&jordan(), Weights::new(a, b).unwrap(), &opts()).unwrap().value;
            assert!((v - jordan_closed_form(a, b)).abs() < 1e-8, "({a},{b}): {v}");
        }
    }

    #[test]
    fn numerical_radius_weights_reproduce_w() {
        let t = ComplexMatrix::from_real_rows(&[&[1., 1., 0.], &[0., 0., 0.], &[0., 0., 1.]]).unwrap();
        let w = norms::numerical_radius(&t, &SweepOptions::default()).unwrap().value;
        let v = alpha_beta_norm(&t, Weights::NUMERICAL_RADIUS, &opts()).unwrap().value;
        assert!((v - w).abs() < 1e-8);
    }

    #[test]
    fn davis_wielandt_examples() {
        let v = modified_davis_wielandt(&diag_1_i(), &opts()).unwrap().value;
        assert!((v - 2f64.sqrt()).abs() < 1e-10);
        let v = modified_davis_wielandt(&jordan(), &opts()).unwrap().value;
        assert!((v - 1.0).abs() < 1e-10);
        assert_eq!(modified_davis_wielandt(&ComplexMatrix::zeros(2), &opts()).unwrap().value, 0.0);
    }

    #[test]
    fn witness_reproduces_value() {
        let t = ComplexMatrix::from_real_rows(&[&[0., 2., 0.], &[0., 0., 2.], &[0., 0., 0.]]).unwrap();
        let w = Weights::new(2.0, 3.0).unwrap();
        let cert = alpha_beta_norm(&t, w, &opts()).unwrap();
        let x = &cert.witness;
        let g = SphereObjective::new(&t, w).value(x);
        assert!((g.sqrt() - cert.value).abs() < 1e-12);
        assert!((x.norm() - 1.0).abs() < 1e-12);
        assert!(x.iter().find(|z| z.norm() > 1e-6).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let w11 = Weights::DAVIS_WIELANDT;
        assert!((alpha_beta_norm_oracle(&jordan(), w11, 2000).unwrap() - 1.0).abs() < 1e-6);
        assert!((alpha_beta_norm_oracle(&diag_1_i(), w11, 2000).unwrap() - 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(alpha_beta_norm_oracle(&ComplexMatrix::zeros(2), w11, 200).unwrap(), 0.0);
        assert!(matches!(
            alpha_beta_norm_oracle(&ComplexMatrix::zeros(4), w11, 200),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(alpha_beta_norm_oracle(&jordan(), w11, 10).is_err());
    }

    #[test]
    fn equality_diagnostics_examples() {
        let d = equality_diagnostics(&diag_1_i(), Weights::DAVIS_WIELANDT, 1e-8, &opts()).unwrap();
        assert!(d.attains_decomposed && d.normaloid && !d.forces_zero);
        let d = equality_diagnostics(&jordan(), Weights::DAVIS_WIELANDT, 1e-8, &opts()).unwrap();
        assert!(!d.attains_decomposed && !d.normaloid && !d.forces_zero);
        let d = equality_diagnostics(&ComplexMatrix::zeros(3), Weights::DAVIS_WIELANDT, 1e-8, &opts()).unwrap();
        assert!(d.forces_zero);
        assert!(matches!(
            equality_diagnostics(&jordan(), Weights::NUMERICAL_RADIUS, 1e-8, &opts()),
            Err(Error::InvalidWeights { .. })
        ));
    }
}
