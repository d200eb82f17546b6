//! Closed-form upper and lower bounds on `‖T‖_{α,β}` and `w(T)`, product
//! bounds, infimum-over-weights reductions, and the sharpness and equality
//! conditions that accompany them.
//!
//! Every bound is evaluated through an [`OperatorProfile`], which caches the
//! derived matrices (`|T|`, `|T*|`, `T*T`, ...) and scalar quantities shared
//! between bounds. The free functions are thin wrappers that build a
//! throwaway profile.

use std::cell::{OnceCell, RefCell};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::alphabeta::{alpha_beta_norm_with, MixRatio, OptimizerOptions, Weights};
use crate::error::{ensure_le, Error, Result};
use crate::linalg::{
    fix_phase, imag_part, intersect_subspaces, kernel, lambda_max, polar_abs, psd_power, real_part,
    top_eigenspace, CVector, ComplexMatrix, Subspace, DEFAULT_EIGENSPACE_TOL,
};
use crate::norms::{self, NormCertificate, SweepOptions};
use crate::optimize::golden_section_min;

const STRICT_MARGIN: f64 = 1e-12;
const PRODUCT_SLACK: f64 = 1e-6;
const NORM_SLACK: f64 = 1e-7;
const COMMUTING_TOL: f64 = 1e-10;
const FG_TOL: f64 = 1e-8;
const CHAIN_TOL: f64 = 1e-8;

/// The quantity a bound controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundTarget {
    /// `‖T‖_{α,β}`
    AlphaBetaNorm,
    /// `‖AB‖_{α,β}`
    ProductNorm,
    /// `w(T)`
    NumericalRadius,
    /// `w(T)²`
    NumericalRadiusSquared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Upper,
    Lower,
}

/// Exponents of the power-Young family: `1/n + 1/m = 1`, `p ≥ 1`,
/// `pn ≥ 2`, `pm ≥ 2`, and `γ ∈ (0,1)` for `f(t) = t^γ`, `g(t) = t^{1-γ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchattenParams {
    pub n_exp: f64,
    pub m_exp: f64,
    pub p: f64,
    pub gamma: f64,
}

impl SchattenParams {
    pub fn new(n_exp: f64, m_exp: f64, p: f64, gamma: f64) -> Result<Self> {
        let sp = Self { n_exp, m_exp, p, gamma };
        sp.validate()?;
        Ok(sp)
    }

    /// `n = m = 2`, `p = 1`, `γ = 1/2`.
    pub fn symmetric() -> Self {
        Self {
            n_exp: 2.0,
            m_exp: 2.0,
            p: 1.0,
            gamma: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let Self { n_exp, m_exp, p, gamma } = *self;
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if !(n_exp > 1.0 && m_exp > 1.0 && n_exp.is_finite() && m_exp.is_finite()) {
            return fail(format!("n and m must exceed 1, got n = {n_exp}, m = {m_exp}"));
        }
        if (1.0 / n_exp + 1.0 / m_exp - 1.0).abs() > 1e-12 {
            return fail(format!("1/n + 1/m must equal 1, got n = {n_exp}, m = {m_exp}"));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return fail(format!("p must be at least 1, got {p}"));
        }
        if p * n_exp < 2.0 || p * m_exp < 2.0 {
            return fail(format!("pn and pm must be at least 2, got p = {p}, n = {n_exp}, m = {m_exp}"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return fail(format!("gamma must lie in (0,1), got {gamma}"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schatten: Option<SchattenParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mix: Option<MixRatio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// A named bound value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub target: BoundTarget,
    pub side: Side,
    pub params: BoundParams,
    pub compared_to: Option<f64>,
    pub strict_improvement: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(name: &str, value: f64, target: BoundTarget, side: Side) -> Self {
        Self {
            name: name.to_string(),
            value,
            target,
            side,
            params: BoundParams::default(),
            compared_to: None,
            strict_improvement: None,
            notes: Vec::new(),
        }
    }

    fn with_weights(mut self, w: Weights) -> Self {
        self.params.weights = Some(w);
        self
    }

    /// Records `baseline` and whether this bound is strictly better than it.
    pub fn compared_with(mut self, baseline: f64) -> Self {
        self.compared_to = Some(baseline);
        self.strict_improvement = Some(match self.side {
            Side::Upper => self.value < baseline - STRICT_MARGIN,
            Side::Lower => self.value > baseline + STRICT_MARGIN,
        });
        self
    }

    /// The bound this report implies for `w(T)`.
    ///
    /// A bound on `‖T‖_{α,β}` is divided by `sqrt(α+β)`, which makes it
    /// invariant under rescaling of the weights. Lower bounds on `‖T‖_{α,β}` do
    /// not bound `w(T)` from below, but the normalized value is still the
    /// scale-free quantity.
    pub fn normalized(&self) -> f64 {
        match self.target {
            BoundTarget::NumericalRadius => self.value,
            BoundTarget::NumericalRadiusSquared => self.value.sqrt(),
            BoundTarget::AlphaBetaNorm | BoundTarget::ProductNorm => match self.params.weights {
                Some(w) => self.value / w.sum().sqrt(),
                None => self.value,
            },
        }
    }
}

/// Cached derived quantities of one matrix.
pub struct OperatorProfile {
    t: ComplexMatrix,
    sweep: SweepOptions,
    optimizer: OptimizerOptions,
    abs: OnceCell<ComplexMatrix>,
    abs_adj: OnceCell<ComplexMatrix>,
    gram: OnceCell<ComplexMatrix>,
    co_gram: OnceCell<ComplexMatrix>,
    gram_sum: OnceCell<ComplexMatrix>,
    re_im_abs: OnceCell<ComplexMatrix>,
    w_cert: OnceCell<NormCertificate>,
    norm_cert: OnceCell<NormCertificate>,
    crawford: OnceCell<f64>,
    w_square: OnceCell<f64>,
    alpha_beta: RefCell<Vec<(Weights, NormCertificate)>>,
}

fn cached<'a, T>(cell: &'a OnceCell<T>, f: impl FnOnce() -> Result<T>) -> Result<&'a T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

/// `λ_max` of a nominally Hermitian product, after symmetrization.
fn top(m: &ComplexMatrix) -> Result<f64> {
    lambda_max(&m.hermitian_part())
}

fn square(m: &ComplexMatrix) -> ComplexMatrix {
    (m * m).hermitian_part()
}

fn tolerance(scale: f64) -> f64 {
    NORM_SLACK * (1.0 + scale)
}

impl OperatorProfile {
    pub fn new(t: &ComplexMatrix) -> Self {
        Self::with_options(t, SweepOptions::default(), OptimizerOptions::default())
    }

    pub fn with_options(t: &ComplexMatrix, sweep: SweepOptions, optimizer: OptimizerOptions) -> Self {
        Self {
            t: t.clone(),
            sweep,
            optimizer,
            abs: OnceCell::new(),
            abs_adj: OnceCell::new(),
            gram: OnceCell::new(),
            co_gram: OnceCell::new(),
            gram_sum: OnceCell::new(),
            re_im_abs: OnceCell::new(),
            w_cert: OnceCell::new(),
            norm_cert: OnceCell::new(),
            crawford: OnceCell::new(),
            w_square: OnceCell::new(),
            alpha_beta: RefCell::new(Vec::new()),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    /// Profile with `w(T)` and `‖T‖` already known, e.g. transported from a
    /// unitarily similar matrix.
    pub(crate) fn with_certificates(
        t: &ComplexMatrix,
        optimizer: OptimizerOptions,
        w_cert: NormCertificate,
        norm_cert: NormCertificate,
    ) -> Self {
        let profile = Self::with_options(t, SweepOptions::default(), optimizer);
        let _ = profile.w_cert.set(w_cert);
        let _ = profile.norm_cert.set(norm_cert);
        profile
    }

    pub fn optimizer(&self) -> &OptimizerOptions {
        &self.optimizer
    }

    /// `|T|`
    pub fn abs(&self) -> Result<&ComplexMatrix> {
        cached(&self.abs, || polar_abs(&self.t))
    }

    /// `|T*|`
    pub fn abs_adjoint(&self) -> Result<&ComplexMatrix> {
        cached(&self.abs_adj, || polar_abs(&self.t.adjoint()))
    }

    /// `T*T`
    pub fn gram(&self) -> &ComplexMatrix {
        self.gram.get_or_init(|| self.t.gram())
    }

    /// `TT*`
    pub fn co_gram(&self) -> &ComplexMatrix {
        self.co_gram.get_or_init(|| self.t.co_gram())
    }

    /// `S = T*T + TT*`
    pub fn gram_sum(&self) -> &ComplexMatrix {
        self.gram_sum.get_or_init(|| self.gram() + self.co_gram())
    }

    /// `|Re T| + |Im T|`
    pub fn re_im_abs_sum(&self) -> Result<&ComplexMatrix> {
        cached(&self.re_im_abs, || {
            Ok(&polar_abs(&real_part(&self.t))? + &polar_abs(&imag_part(&self.t))?)
        })
    }

    /// `|T| + |T*|`
    pub fn abs_sum(&self) -> Result<ComplexMatrix> {
        Ok(self.abs()? + self.abs_adjoint()?)
    }

    pub fn w_certificate(&self) -> Result<&NormCertificate> {
        cached(&self.w_cert, || norms::numerical_radius(&self.t, &self.sweep))
    }

    pub fn norm_certificate(&self) -> Result<&NormCertificate> {
        cached(&self.norm_cert, || norms::operator_norm(&self.t))
    }

    /// `w(T)`
    pub fn w(&self) -> Result<f64> {
        Ok(self.w_certificate()?.value)
    }

    /// `‖T‖`
    pub fn norm(&self) -> Result<f64> {
        Ok(self.norm_certificate()?.value)
    }

    /// `c(T)`
    pub fn crawford(&self) -> Result<f64> {
        cached(&self.crawford, || Ok(norms::crawford_number(&self.t, &self.sweep)?.value)).copied()
    }

    /// `w(T²)`
    pub fn w_of_square(&self) -> Result<f64> {
        cached(&self.w_square, || Ok(norms::numerical_radius(&self.t.pow(2), &self.sweep)?.value)).copied()
    }

    /// `‖T‖_{α,β}`, computed once per weight ratio; rescaled weights reuse the
    /// normalized result since the norm is homogeneous of degree 1/2 in `(α, β)`.
    pub fn alpha_beta(&self, w: Weights) -> Result<NormCertificate> {
        let unit = w.normalized();
        let scale = w.sum().sqrt();
        let rescale = |mut cert: NormCertificate| {
            cert.value *= scale;
            cert.tol *= scale;
            cert
        };
        if let Some((_, cert)) = self.alpha_beta.borrow().iter().find(|(k, _)| *k == unit) {
            return Ok(rescale(cert.clone()));
        }
        let cert = alpha_beta_norm_with(&self.t, unit, &self.optimizer, self.w_certificate()?, self.norm_certificate()?)?;
        self.alpha_beta.borrow_mut().push((unit, cert.clone()));
        Ok(rescale(cert))
    }

    fn check_upper(&self, check: &str, w: Weights, bound: f64) -> Result<()> {
        let value = self.alpha_beta(w)?.value;
        ensure_le(check, value, bound, PRODUCT_SLACK)
    }

    /// `sqrt(α+β) w`, `sqrt(α+4β) w`, `max{sqrt(α+β)/2, sqrt(β)} ‖T‖`, `sqrt(α+β) ‖T‖`.
    pub fn equivalence_bounds(&self, w: Weights) -> Result<Vec<BoundReport>> {
        let (wt, norm) = (self.w()?, self.norm()?);
        let (a, b) = (w.alpha(), w.beta());
        let t = BoundTarget::AlphaBetaNorm;
        Ok(vec![
            BoundReport::new("norm-lower-w", (a + b).sqrt() * wt, t, Side::Lower).with_weights(w),
            BoundReport::new("norm-upper-w", (a + 4.0 * b).sqrt() * wt, t, Side::Upper).with_weights(w),
            BoundReport::new("norm-lower-op", ((a + b).sqrt() / 2.0).max(b.sqrt()) * norm, t, Side::Lower)
                .with_weights(w),
            BoundReport::new("norm-upper-op", (a + b).sqrt() * norm, t, Side::Upper).with_weights(w),
        ])
    }

    /// Lower bound from `w(T)`, `c(T)`, `‖T‖` and `λ_min(T*T)`.
    pub fn lower_bound_est2a(&self, w: Weights) -> Result<BoundReport> {
        let (a, b) = (w.alpha(), w.beta());
        let (wt, ct, norm) = (self.w()?, self.crawford()?, self.norm()?);
        let c_gram = crate::linalg::lambda_min(self.gram())?.max(0.0);
        let cross = 2.0 * (a * b).sqrt();
        let sq = [
            a * wt * wt + b * c_gram,
            a * ct * ct + b * norm * norm,
            cross * wt * c_gram.sqrt(),
            cross * ct * norm,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let value = sq.sqrt();
        let actual = self.alpha_beta(w)?.value;
        ensure_le("est2a ≤ ‖T‖_{α,β}", value, actual, tolerance(actual))?;
        Ok(BoundReport::new("est2a", value, BoundTarget::AlphaBetaNorm, Side::Lower).with_weights(w))
    }

    /// `‖(α/4)(f²(|T|) + g²(|T*|))² + β T*T‖^{1/2}` with `f = t^γ`, `g = t^{1-γ}`.
    pub fn bound_est4(&self, w: Weights, gamma: f64) -> Result<BoundReport> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParams(format!("gamma must lie in (0,1), got {gamma}")));
        }
        let inner = &psd_power(self.abs()?, 2.0 * gamma)? + &psd_power(self.abs_adjoint()?, 2.0 * (1.0 - gamma))?;
        let m = &square(&inner).scale(w.alpha() / 4.0) + &self.gram().scale(w.beta());
        let value = top(&m)?.max(0.0).sqrt();
        self.check_upper("‖T‖_{α,β} ≤ est4", w, value)?;
        ensure_le("w(T) ≤ est4/sqrt(α+β)", self.w()?, value / w.sum().sqrt(), 1e-9)?;
        let mut report = BoundReport::new("est4", value, BoundTarget::AlphaBetaNorm, Side::Upper).with_weights(w);
        report.params.gamma = Some(gamma);
        Ok(report)
    }

    /// Lower pair and upper bound built from `(T*T + TT*)`.
    pub fn bounds_est5(&self, w: Weights) -> Result<Vec<BoundReport>> {
        let (a, b) = (w.alpha(), w.beta());
        let s = self.gram_sum();
        let g = self.gram();
        let lower1 = (0.5 * top(&(&s.scale(a / 4.0) + &g.scale(b)))?).max(0.0).sqrt();
        let upper_sq = top(&(&s.scale(a / 2.0) + &g.scale(b)))?.max(0.0);
        let lower2 = (upper_sq / 3.0).sqrt();
        let upper = upper_sq.sqrt();
        let actual = self.alpha_beta(w)?.value;
        ensure_le("est5 lower ≤ ‖T‖_{α,β}", lower1.max(lower2), actual, tolerance(actual))?;
        ensure_le("‖T‖_{α,β} ≤ est5 upper", actual, upper, tolerance(upper))?;
        let t = BoundTarget::AlphaBetaNorm;
        Ok(vec![
            BoundReport::new("est5-lower-1", lower1, t, Side::Lower).with_weights(w),
            BoundReport::new("est5-lower-2", lower2, t, Side::Lower).with_weights(w),
            BoundReport::new("est5-upper", upper, t, Side::Upper).with_weights(w),
        ])
    }

    /// `((α/2) w(T²) + ‖(α/4)(T*T+TT*) + β T*T‖)^{1/2}`.
    pub fn bound_buzano(&self, w: Weights) -> Result<BoundReport> {
        let (a, b) = (w.alpha(), w.beta());
        let m = &self.gram_sum().scale(a / 4.0) + &self.gram().scale(b);
        let value = (0.5 * a * self.w_of_square()? + top(&m)?.max(0.0)).sqrt();
        self.check_upper("‖T‖_{α,β} ≤ buzano", w, value)?;
        Ok(BoundReport::new("buzano", value, BoundTarget::AlphaBetaNorm, Side::Upper).with_weights(w))
    }

    /// `‖α(|Re T| + |Im T|)² + β T*T‖^{1/2}`.
    pub fn bound_re_im(&self, w: Weights) -> Result<BoundReport> {
        let m = &square(self.re_im_abs_sum()?).scale(w.alpha()) + &self.gram().scale(w.beta());
        let value = top(&m)?.max(0.0).sqrt();
        self.check_upper("‖T‖_{α,β} ≤ reim", w, value)?;
        Ok(BoundReport::new("reim", value, BoundTarget::AlphaBetaNorm, Side::Upper).with_weights(w))
    }

    /// The affine pencil `t ↦ (P, Q, offset)` with `h(t) = λ_max(tP + (1-t)Q) + t·offset`.
    fn mix_pencil(&self, kind: MixKind) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
        let g = self.gram().clone();
        Ok(match kind {
            MixKind::Est4 => (square(&self.abs_sum()?).scale(0.25), g, 0.0),
            MixKind::Est5 => (self.gram_sum().scale(0.5), g, 0.0),
            MixKind::Buzano => (self.gram_sum().scale(0.25), g, 0.5 * self.w_of_square()?),
            MixKind::ReIm => (square(self.re_im_abs_sum()?), g, 0.0),
        })
    }

    /// `h(t)` for the given kind, evaluated on the supplied points.
    pub fn mix_curve(&self, kind: MixKind, ts: &[f64]) -> Result<Vec<f64>> {
        let (p, q, offset) = self.mix_pencil(kind)?;
        ts.iter()
            .map(|&t| Ok(mix_value(&p, &q, offset, t)))
            .collect()
    }

    /// `inf_{α,β} (α+β)^{-1} (bound at (α,β))²`, reduced to `t = α/(α+β)`.
    pub fn infimum_mix(&self, kind: MixKind, tol: f64) -> Result<BoundReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
        }
        let (p, q, offset) = self.mix_pencil(kind)?;
        let h = |t: f64| mix_value(&p, &q, offset, t);
        let (t_gs, h_gs, _) = golden_section_min(h, 0.0, 1.0, tol);
        let (h0, h1) = (h(0.0), h(1.0));
        let (t_best, h_best) = [(t_gs, h_gs), (0.0, h0), (1.0, h1)]
            .into_iter()
            .fold((t_gs, h_gs), |acc, cand| if cand.1 < acc.1 { cand } else { acc });
        let value = h_best.max(0.0).sqrt();
        let baseline = h1.max(0.0).sqrt();
        let wt = self.w()?;
        ensure_le("w(T) ≤ infimum", wt, value, tolerance(value))?;
        ensure_le("infimum ≤ baseline", value, baseline, 1e-9)?;
        let mut report =
            BoundReport::new(kind.report_name(), value, BoundTarget::NumericalRadius, Side::Upper).compared_with(baseline);
        report.params.mix = Some(MixRatio::new(t_best.clamp(0.0, 1.0))?);
        Ok(report)
    }

    /// The five classical comparison values.
    pub fn baseline_bounds(&self) -> Result<Vec<BoundReport>> {
        let norm = self.norm()?;
        let s_norm = top(self.gram_sum())?.max(0.0);
        let square_norm = norms::operator_norm(&self.t.pow(2))?.value;
        let abs_sum_norm = top(&self.abs_sum()?)?.max(0.0);
        let w = BoundTarget::NumericalRadius;
        let w2 = BoundTarget::NumericalRadiusSquared;
        Ok(vec![
            BoundReport::new("half-abs-sum", 0.5 * abs_sum_norm, w, Side::Upper),
            BoundReport::new("norm-square-mean", 0.5 * norm + 0.5 * square_norm.sqrt(), w, Side::Upper),
            BoundReport::new("half-gram-sum", 0.5 * s_norm, w2, Side::Upper),
            BoundReport::new("quarter-gram-sum", 0.25 * s_norm, w2, Side::Lower),
            BoundReport::new("buzano-classical", 0.5 * self.w_of_square()? + 0.25 * s_norm, w2, Side::Upper),
        ])
    }

    /// Lower bound for `w(T)²` from the top eigenspace of `T*T + TT*`.
    pub fn refined_lower_bound(&self, tol: f64) -> Result<RefinedLowerBound> {
        let n = self.t.dim();
        let s = self.gram_sum();
        let s_norm = top(s)?.max(0.0);
        if s_norm == 0.0 {
            return Ok(RefinedLowerBound {
                value: 0.0,
                q: 0.0,
                quarter_s: 0.0,
                h0: Subspace::full(n),
                invariant_under_t: true,
            });
        }
        let h0 = top_eigenspace(s, DEFAULT_EIGENSPACE_TOL)?;
        let q = norms::numerical_radius(&self.t.compress(&h0), &self.sweep)?.value;
        let quarter_s = 0.25 * s_norm;
        let value = (q * q).max(quarter_s);
        let v = h0.basis();
        let tv = self.t.matrix() * v;
        let residual = &tv - v * (v.adjoint() * &tv);
        let leak = crate::linalg::spectral_norm(&ComplexMatrix::wrap(square_pad(&residual)))?;
        let wt = self.w()?;
        ensure_le("refined ≤ w(T)²", value, wt * wt, tolerance(wt * wt))?;
        Ok(RefinedLowerBound {
            value,
            q,
            quarter_s,
            h0,
            invariant_under_t: leak <= tol,
        })
    }

    /// Tests `‖B‖_L < ‖A‖` for `L = span M_{αA+βB}`.
    pub fn condition_sharper(&self, w: Weights, variant: SharpVariant, tol: f64) -> Result<SharpnessCondition> {
        if !w.both_positive() {
            return Err(Error::InvalidWeights {
                alpha: w.alpha(),
                beta: w.beta(),
            });
        }
        let b = self.gram();
        let a = match variant {
            SharpVariant::Less1 => self.gram_sum().scale(0.5),
            SharpVariant::Less2 => square(&self.abs_sum()?).scale(0.25),
            SharpVariant::Less3 => self.gram_sum().scale(0.25),
        };
        let combined = (&a.scale(w.alpha()) + &b.scale(w.beta())).hermitian_part();
        let l = norms::norm_attainment_subspace(&combined, DEFAULT_EIGENSPACE_TOL)?;
        let norm_b_l = norms::restricted_norm(b, &l)?;
        let norm_a = top(&a)?.max(0.0);
        let applicable = norm_b_l < norm_a - tol;

        let combined_norm = top(&combined)?.max(0.0);
        let (bound, baseline) = match variant {
            SharpVariant::Less1 => (combined_norm / w.sum(), norm_a),
            SharpVariant::Less2 => ((combined_norm / w.sum()).sqrt(), norm_a.sqrt()),
            SharpVariant::Less3 => {
                let ws = 0.5 * self.w_of_square()?;
                ((w.alpha() * ws + combined_norm) / w.sum(), ws + norm_a)
            }
        };
        if applicable && bound >= baseline - STRICT_MARGIN {
            return Err(Error::PostCheckViolation {
                check: format!("{} strict improvement", variant.name()),
                lhs: bound,
                rhs: baseline,
            });
        }
        Ok(SharpnessCondition {
            applicable,
            norm_b_l,
            norm_a,
            l,
            bound,
            baseline,
        })
    }

    /// Tests `M_A ∩ M_B ∩ ker C ≠ {0}` and, when it holds, the equality chain.
    pub fn condition_equality(&self, variant: EqualityVariant, tol: f64) -> Result<EqualityCondition> {
        let (a, b, c_mat, chain_p, chain_q) = match variant {
            EqualityVariant::Eql1 => {
                let s = self.gram_sum();
                (s.scale(0.5), self.gram().clone(), self.gram() - self.co_gram(), s.scale(0.5), self.gram().clone())
            }
            EqualityVariant::Eql2 => {
                let abs = self.abs()?.clone();
                let sum = self.abs_sum()?;
                let c_mat = &abs - self.abs_adjoint()?;
                (sum.scale(0.5), abs.clone(), c_mat, square(&sum).scale(0.25), square(&abs))
            }
        };
        let spaces = [
            top_eigenspace(&a.hermitian_part(), tol)?,
            top_eigenspace(&b.hermitian_part(), tol)?,
            kernel(&c_mat, tol)?,
        ];
        let meet = intersect_subspaces(&spaces)?;
        if meet.is_trivial() {
            return Ok(EqualityCondition {
                holds: false,
                witness: None,
            });
        }
        let mut witness = meet.vector(0);
        fix_phase(&mut witness);

        let norm_sq = self.norm()?.powi(2);
        let middle = top(&chain_p)?;
        ensure_le("equality chain: middle = ‖T‖²", (middle - norm_sq).abs(), 0.0, CHAIN_TOL * (1.0 + norm_sq))?;
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let h = mix_value(&chain_p, &chain_q, 0.0, t);
            ensure_le("equality chain at every mix", (h - norm_sq).abs(), 0.0, CHAIN_TOL * (1.0 + norm_sq))?;
        }
        Ok(EqualityCondition {
            holds: true,
            witness: Some(witness),
        })
    }
}

/// Pads a tall `n×k` block to `n×n` with zero columns so its spectral norm is unchanged.
fn square_pad(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    out.columns_mut(0, m.ncols()).copy_from(m);
    out
}

fn mix_value(p: &ComplexMatrix, q: &ComplexMatrix, offset: f64, t: f64) -> f64 {
    let m = (&p.scale(t) + &q.scale(1.0 - t)).hermitian_part();
    crate::linalg::lambda_max_unchecked(m.matrix()) + t * offset
}

/// Which infimum-over-weights bound to minimize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixKind {
    Est4,
    Est5,
    Buzano,
    ReIm,
}

impl MixKind {
    pub const ALL: [MixKind; 4] = [MixKind::Est4, MixKind::Est5, MixKind::Buzano, MixKind::ReIm];

    pub fn name(&self) -> &'static str {
        match self {
            MixKind::Est4 => "est4",
            MixKind::Est5 => "est5",
            MixKind::Buzano => "buzano",
            MixKind::ReIm => "reim",
        }
    }

    fn report_name(&self) -> &'static str {
        match self {
            MixKind::Est4 => "est4-inf",
            MixKind::Est5 => "est5-inf",
            MixKind::Buzano => "buzano-inf",
            MixKind::ReIm => "reim-inf",
        }
    }
}

impl std::str::FromStr for MixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MixKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown kind `{s}` (expected est4, est5, buzano or reim)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SharpVariant {
    Less1,
    Less2,
    Less3,
}

impl SharpVariant {
    pub fn name(&self) -> &'static str {
        match self {
            SharpVariant::Less1 => "less1",
            SharpVariant::Less2 => "less2",
            SharpVariant::Less3 => "less3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityVariant {
    Eql1,
    Eql2,
}

#[derive(Clone, Debug)]
pub struct RefinedLowerBound {
    /// `max(q², ¼‖S‖)`
    pub value: f64,
    /// `sup{|<Tx,x>| : x ∈ H₀, ‖x‖ = 1}`
    pub q: f64,
    pub quarter_s: f64,
    /// Top eigenspace of `S = T*T + TT*`.
    pub h0: Subspace,
    pub invariant_under_t: bool,
}

#[derive(Clone, Debug)]
pub struct SharpnessCondition {
    pub applicable: bool,
    pub norm_b_l: f64,
    pub norm_a: f64,
    pub l: Subspace,
    /// The weighted bound at the given weights, on the scale of its baseline.
    pub bound: f64,
    pub baseline: f64,
}

#[derive(Clone, Debug)]
pub struct EqualityCondition {
    pub holds: bool,
    pub witness: Option<CVector>,
}

/// Variants of the commuting product bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutingVariant {
    GeneralCommuting,
    Isometry,
    DoublyCommuting,
}

/// Variants of the product bound through `f(|A|)`, `g(|A*|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FgVariant {
    #[serde(rename = "est3a")]
    Est3a,
    #[serde(rename = "est3")]
    Est3,
    #[serde(rename = "cor-k-03")]
    CorK03,
}

impl FgVariant {
    pub fn name(&self) -> &'static str {
        match self {
            FgVariant::Est3a => "est3a",
            FgVariant::Est3 => "est3",
            FgVariant::CorK03 => "cor-k-03",
        }
    }
}

/// `‖AB‖_{α,β}`, `‖A‖_{α,β}`, `‖B‖_{α,β}` for a pair.
struct PairNorms {
    product: f64,
    a: f64,
    b: f64,
    w_product: f64,
}

fn pair_norms(a: &ComplexMatrix, b: &ComplexMatrix, w: Weights, opts: &OptimizerOptions) -> Result<PairNorms> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let ab = a * b;
    let pa = OperatorProfile::with_options(a, SweepOptions::default(), *opts);
    let pb = OperatorProfile::with_options(b, SweepOptions::default(), *opts);
    let pab = OperatorProfile::with_options(&ab, SweepOptions::default(), *opts);
    Ok(PairNorms {
        product: pab.alpha_beta(w)?.value,
        a: pa.alpha_beta(w)?.value,
        b: pb.alpha_beta(w)?.value,
        w_product: pab.w()?,
    })
}

fn hypothesis(name: &str, residual: f64, scale: f64, tol: f64) -> Result<()> {
    if residual <= tol * scale {
        Ok(())
    } else {
        Err(Error::HypothesisViolated {
            hypothesis: name.to_string(),
            residual,
        })
    }
}

fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    crate::linalg::spectral_norm(m)
}

fn require_beta(w: Weights) -> Result<()> {
    if w.beta() > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeights {
            alpha: w.alpha(),
            beta: w.beta(),
        })
    }
}

fn require_unit_sum(w: Weights) -> Result<()> {
    if (w.sum() - 1.0).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(Error::InvalidWeights {
            alpha: w.alpha(),
            beta: w.beta(),
        })
    }
}

fn product_report(name: &str, value: f64, w: Weights, norms: &PairNorms) -> Result<BoundReport> {
    ensure_le(&format!("‖AB‖_{{α,β}} ≤ {name}"), norms.product, value, PRODUCT_SLACK)?;
    Ok(BoundReport::new(name, value, BoundTarget::ProductNorm, Side::Upper).with_weights(w))
}

/// `‖AB‖_{α,β} ≤ sqrt(min{4/β, (α+β)/β², 16/(α+β)}) ‖A‖_{α,β} ‖B‖_{α,β}`; the
/// first two branches need `β > 0`.
pub fn product_factor_general(w: Weights) -> f64 {
    let (a, b) = (w.alpha(), w.beta());
    let mut best = 16.0 / (a + b);
    if b > 0.0 {
        best = best.min(4.0 / b).min((a + b) / (b * b));
    }
    best.sqrt()
}

pub fn product_bound_general(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    w: Weights,
    opts: &OptimizerOptions,
) -> Result<BoundReport> {
    let norms = pair_norms(a, b, w, opts)?;
    product_report("product-general", product_factor_general(w) * norms.a * norms.b, w, &norms)
}

pub fn product_bound_commuting(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    w: Weights,
    variant: CommutingVariant,
    opts: &OptimizerOptions,
) -> Result<BoundReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let scale = op_norm(a)? * op_norm(b)?;
    hypothesis("AB = BA", op_norm(&a.commutator(b))?, scale, COMMUTING_TOL)?;
    let (al, be) = (w.alpha(), w.beta());
    let s = al + be;
    match variant {
        CommutingVariant::GeneralCommuting => require_beta(w)?,
        CommutingVariant::Isometry => {
            let defect = op_norm(&(&a.gram() - &ComplexMatrix::identity(a.dim())))?;
            hypothesis("A*A = I", defect, 1.0, COMMUTING_TOL)?;
        }
        CommutingVariant::DoublyCommuting => {
            require_beta(w)?;
            hypothesis("AB* = B*A", op_norm(&a.commutator(&b.adjoint()))?, scale, COMMUTING_TOL)?;
        }
    }
    let norms = pair_norms(a, b, w, opts)?;
    let (name, value) = match variant {
        CommutingVariant::GeneralCommuting => (
            "product-commuting",
            (4.0 * al / (s * s) + 1.0 / be).sqrt() * norms.a * norms.b,
        ),
        CommutingVariant::Isometry => ("product-isometry", (al / s + 1.0).sqrt() * norms.b),
        CommutingVariant::DoublyCommuting => (
            "product-doubly-commuting",
            (al / s + 1.0).sqrt() * (2.0 / s.sqrt()).min(1.0 / be.sqrt()) * norms.a * norms.b,
        ),
    };
    product_report(name, value, w, &norms)
}

/// `(2 w([[0, X], [Y, 0]]))^{1/(2p)}` with
/// `X = (α(AA*)^{pn} + β(A*A)^{pn})/n` and `Y = (B*B)^{pm}/m`.
///
/// For PSD `X`, `Y` the block value is compared against `‖X + Y‖`; a
/// disagreement is reported in the notes, not as an error.
pub fn product_bound_block(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    sp: SchattenParams,
    w: Weights,
    opts: &OptimizerOptions,
) -> Result<BoundReport> {
    sp.validate()?;
    require_unit_sum(w)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let scale = op_norm(a)? * op_norm(b)?;
    hypothesis("AB = BA", op_norm(&a.commutator(b))?, scale, COMMUTING_TOL)?;
    hypothesis("A*B = BA*", op_norm(&a.adjoint().commutator(b))?, scale, COMMUTING_TOL)?;

    let n = a.dim();
    let pn = sp.p * sp.n_exp;
    let pm = sp.p * sp.m_exp;
    let x = (&psd_power(&a.co_gram(), pn)?.scale(w.alpha()) + &psd_power(&a.gram(), pn)?.scale(w.beta()))
        .scale(1.0 / sp.n_exp);
    let y = psd_power(&b.gram(), pm)?.scale(1.0 / sp.m_exp);
    let mut block = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    block.view_mut((0, n), (n, n)).copy_from(x.matrix());
    block.view_mut((n, 0), (n, n)).copy_from(y.matrix());
    let block_w = norms::numerical_radius(&ComplexMatrix::wrap(block), &SweepOptions::default())?.value;
    let value = (2.0 * block_w).max(0.0).powf(1.0 / (2.0 * sp.p));

    let sum_norm = top(&(&x + &y))?;
    let norms = pair_norms(a, b, w, opts)?;
    let mut report = product_report("est2", value, w, &norms)?;
    report.params.schatten = Some(sp);
    if (2.0 * block_w - sum_norm).abs() > 1e-8 * (1.0 + sum_norm) {
        report
            .notes
            .push(format!("2·w(block) = {} differs from ‖X+Y‖ = {}", 2.0 * block_w, sum_norm));
    }
    Ok(report)
}

/// Product bounds through `f(|A|)`, `g(|A*|)` with `f = t^γ`, `g = t^{1-γ}`.
pub fn product_bound_fg(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    sp: SchattenParams,
    w: Weights,
    variant: FgVariant,
    opts: &OptimizerOptions,
) -> Result<BoundReport> {
    sp.validate()?;
    require_unit_sum(w)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let scale = op_norm(a)? * op_norm(b)?;
    let abs_a = polar_abs(a)?;
    let abs_a_adj = polar_abs(&a.adjoint())?;
    hypothesis("|A|B = B*|A|", op_norm(&(&(&abs_a * b) - &(&b.adjoint() * &abs_a)))?, scale, FG_TOL)?;
    if variant != FgVariant::Est3a {
        hypothesis("AB = BA", op_norm(&a.commutator(b))?, scale, FG_TOL)?;
        hypothesis("AB* = B*A", op_norm(&a.commutator(&b.adjoint()))?, scale, FG_TOL)?;
    }
    let (al, be) = (w.alpha(), w.beta());
    let r_b = norms::spectral_radius(b)?;
    let (n_exp, m_exp, p, gamma) = (sp.n_exp, sp.m_exp, sp.p, sp.gamma);
    let fg_sum = |f_arg: &ComplexMatrix, g_arg: &ComplexMatrix| -> Result<ComplexMatrix> {
        Ok(&psd_power(f_arg, gamma * n_exp * p)?.scale(1.0 / n_exp)
            + &psd_power(g_arg, (1.0 - gamma) * m_exp * p)?.scale(1.0 / m_exp))
    };
    let (value, sp_used) = match variant {
        FgVariant::Est3a => {
            let x = fg_sum(&abs_a, &abs_a_adj)?;
            let ab = a * b;
            let m = &square(&x).scale(al * r_b.powf(2.0 * p)) + &psd_power(&ab.gram(), p)?.scale(be);
            (top(&m)?.max(0.0).powf(1.0 / (2.0 * p)), sp)
        }
        FgVariant::Est3 => {
            let x = fg_sum(&abs_a, &abs_a_adj)?;
            let gram = a.gram();
            let abs_gram = polar_abs(&gram)?;
            let y = fg_sum(&abs_gram, &abs_gram)?;
            let r_gram = norms::spectral_radius(&b.gram())?;
            let m = &square(&x).scale(al * r_b.powf(2.0 * p)) + &y.scale(be * r_gram.powf(p));
            (top(&m)?.max(0.0).powf(1.0 / (2.0 * p)), sp)
        }
        FgVariant::CorK03 => {
            let r_gram = norms::spectral_radius(&b.gram())?;
            let m = &square(&(&abs_a + &abs_a_adj)).scale(al / 4.0 * r_b * r_b) + &a.gram().scale(be * r_gram);
            (top(&m)?.max(0.0).sqrt(), SchattenParams::symmetric())
        }
    };
    let norms = pair_norms(a, b, w, opts)?;
    ensure_le(&format!("w(AB) ≤ {}", variant.name()), norms.w_product, value, PRODUCT_SLACK)?;
    let mut report = product_report(variant.name(), value, w, &norms)?;
    report.params.schatten = Some(sp_used);
    Ok(report)
}

pub fn equivalence_bounds(t: &ComplexMatrix, w: Weights) -> Result<Vec<BoundReport>> {
    OperatorProfile::new(t).equivalence_bounds(w)
}

pub fn lower_bound_est2a(t: &ComplexMatrix, w: Weights) -> Result<BoundReport> {
    OperatorProfile::new(t).lower_bound_est2a(w)
}

pub fn bound_est4(t: &ComplexMatrix, w: Weights, gamma: f64) -> Result<BoundReport> {
    OperatorProfile::new(t).bound_est4(w, gamma)
}

pub fn infimum_mix(t: &ComplexMatrix, kind: MixKind, tol: f64) -> Result<BoundReport> {
    OperatorProfile::new(t).infimum_mix(kind, tol)
}

pub fn bounds_est5(t: &ComplexMatrix, w: Weights) -> Result<Vec<BoundReport>> {
    OperatorProfile::new(t).bounds_est5(w)
}

pub fn bound_buzano(t: &ComplexMatrix, w: Weights) -> Result<BoundReport> {
    OperatorProfile::new(t).bound_buzano(w)
}

pub fn bound_re_im(t: &ComplexMatrix, w: Weights) -> Result<BoundReport> {
    OperatorProfile::new(t).bound_re_im(w)
}

pub fn refined_lower_bound(t: &ComplexMatrix, tol: f64) -> Result<RefinedLowerBound> {
    OperatorProfile::new(t).refined_lower_bound(tol)
}

pub fn condition_sharper(t: &ComplexMatrix, w: Weights, variant: SharpVariant, tol: f64) -> Result<SharpnessCondition> {
    OperatorProfile::new(t).condition_sharper(w, variant, tol)
}

pub fn condition_equality(t: &ComplexMatrix, variant: EqualityVariant, tol: f64) -> Result<EqualityCondition> {
    OperatorProfile::new(t).condition_equality(variant, tol)
}

pub fn baseline_bounds(t: &ComplexMatrix) -> Result<Vec<BoundReport>> {
    OperatorProfile::new(t).baseline_bounds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

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

    fn wts(a: f64, b: f64) -> Weights {
        Weights::new(a, b).unwrap()
    }

    fn opts() -> OptimizerOptions {
        OptimizerOptions::default()
    }

    #[test]
    fn schatten_validation() {
        assert!(SchattenParams::new(2.0, 2.0, 1.0, 0.5).is_ok());
        assert!(SchattenParams::new(3.0, 1.5, 1.0, 0.5).is_err());
        assert!(SchattenParams::new(3.0, 1.5, 2.0, 0.5).is_ok());
        assert!(SchattenParams::new(2.0, 3.0, 1.0, 0.5).is_err());
        assert!(SchattenParams::new(2.0, 2.0, 0.5, 0.5).is_err());
        assert!(SchattenParams::new(2.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn strict_improvement_flag() {
        let r = BoundReport::new("x", 1.0, BoundTarget::NumericalRadius, Side::Upper);
        assert_eq!(r.clone().compared_with(1.0).strict_improvement, Some(false));
        assert_eq!(r.clone().compared_with(1.0 + 1e-13).strict_improvement, Some(false));
        assert_eq!(r.compared_with(1.1).strict_improvement, Some(true));
    }

    #[test]
    fn equivalence_examples() {
        let r = equivalence_bounds(&ComplexMatrix::identity(2), Weights::DAVIS_WIELANDT).unwrap();
        close(r[0].value, SQRT2, 1e-12);
        close(r[1].value, 5f64.sqrt(), 1e-12);
        let r = equivalence_bounds(&jordan(), Weights::DAVIS_WIELANDT).unwrap();
        assert!(r[0].value <= 1.0 && r[1].value >= 1.0);
        close(r[0].value, SQRT2 / 2.0, 1e-9);
        let r = equivalence_bounds(&e3(), Weights::NUMERICAL_RADIUS).unwrap();
        close(r[2].value, 1.0, 1e-12);
        close(r[3].value, 2.0, 1e-12);
    }

    #[test]
    fn est2a_examples() {
        close(lower_bound_est2a(&ComplexMatrix::identity(3), Weights::DAVIS_WIELANDT).unwrap().value, SQRT2, 1e-9);
        close(lower_bound_est2a(&jordan(), Weights::DAVIS_WIELANDT).unwrap().value, 1.0, 1e-9);
        close(lower_bound_est2a(&diag_1_i(), Weights::NUMERICAL_RADIUS).unwrap().value, 1.0, 1e-9);
    }

    #[test]
    fn est4_examples() {
        let r = bound_est4(&e3(), wts(12.0 / 5.0, 1.0), 0.5).unwrap();
        close(r.normalized(), (32.0f64 / 17.0).sqrt(), 1e-9);
        close(bound_est4(&e3(), Weights::NUMERICAL_RADIUS, 0.5).unwrap().value, 1.5, 1e-9);
        let h = real(&[&[2., 1.], &[1., -3.]]);
        let norm = norms::operator_norm(&h).unwrap().value;
        close(bound_est4(&h, Weights::NUMERICAL_RADIUS, 0.5).unwrap().value, norm, 1e-9);
    }

    #[test]
    fn est5_examples() {
        let r = bounds_est5(&ComplexMatrix::identity(2), Weights::DAVIS_WIELANDT).unwrap();
        close(r[2].value, SQRT2, 1e-12);
        let r = bounds_est5(&e3(), wts(6.0, 1.0)).unwrap();
        close(r[2].value * r[2].value, 16.0, 1e-9);
        close(r[2].normalized().powi(2), 16.0 / 7.0, 1e-9);
        assert!(bounds_est5(&ComplexMatrix::zeros(3), wts(2.0, 3.0)).unwrap().iter().all(|b| b.value == 0.0));
    }

    #[test]
    fn buzano_examples() {
        close(bound_buzano(&e3(), Weights::NUMERICAL_RADIUS).unwrap().value.powi(2), 1.75, 1e-9);
        close(bound_buzano(&jordan(), Weights::NUMERICAL_RADIUS).unwrap().value, 0.5, 1e-9);
        let r = bound_buzano(&e3(), wts(12.0, 1.0)).unwrap();
        close(r.normalized().powi(2), 22.0 / 13.0, 1e-9);
        assert!(r.normalized().powi(2) < 1.75);
        assert_eq!(bound_buzano(&ComplexMatrix::zeros(2), Weights::DAVIS_WIELANDT).unwrap().value, 0.0);
    }

    #[test]
    fn re_im_examples() {
        close(bound_re_im(&diag_1_i(), Weights::NUMERICAL_RADIUS).unwrap().value, 1.0, 1e-9);
        close(bound_re_im(&ComplexMatrix::identity(3), Weights::OPERATOR_NORM).unwrap().value, 1.0, 1e-12);
        let h = real(&[&[1., 2.], &[2., -1.]]);
        close(bound_re_im(&h, Weights::NUMERICAL_RADIUS).unwrap().value, 5f64.sqrt(), 1e-9);
    }

    #[test]
    fn infimum_examples() {
        let r = infimum_mix(&e3(), MixKind::Est5, 1e-10).unwrap();
        assert!(r.value * r.value <= 16.0 / 7.0 + 1e-9);
        assert_eq!(r.strict_improvement, Some(true));
        close(r.compared_to.unwrap().powi(2), 2.5, 1e-9);
        let r = infimum_mix(&diag_1_i(), MixKind::ReIm, 1e-10).unwrap();
        close(r.value, 1.0, 1e-9);
        let d = ComplexMatrix::from_diagonal(&[c(2., 1.), c(-1., 0.), c(0., 0.5)]);
        let r = infimum_mix(&d, MixKind::Est4, 1e-10).unwrap();
        close(r.value, 5f64.sqrt(), 1e-9);
        assert_eq!(r.strict_improvement, Some(false));
    }

    #[test]
    fn baseline_examples() {
        let b = baseline_bounds(&e3()).unwrap();
        close(b[0].value, 1.5, 1e-9);
        close(b[1].value, (2.0 + SQRT2) / 2.0, 1e-9);
        close(b[2].value, 2.5, 1e-9);
        close(b[4].value, 1.75, 1e-9);
        let h = real(&[&[2., 1.], &[1., -3.]]);
        let norm = norms::operator_norm(&h).unwrap().value;
        let b = baseline_bounds(&h).unwrap();
        close(b[0].value, norm, 1e-9);
        close(b[1].value, norm, 1e-9);
        close(b[2].value.sqrt(), norm, 1e-9);
        close(b[4].value.sqrt(), norm, 1e-9);
    }

    #[test]
    fn refined_examples() {
        let r = refined_lower_bound(&e5(), 1e-9).unwrap();
        close(r.q * r.q, (3.0 + 2.0 * SQRT2) / 4.0, 1e-9);
        let printed = ((4.0 + 3.0 * SQRT2) / (4.0 + 2.0 * SQRT2)).powi(2);
        close(r.q * r.q, printed, 1e-9);
        close(r.quarter_s, (2.0 + SQRT2) / 4.0, 1e-12);
        assert!(r.value > r.quarter_s && !r.invariant_under_t);

        let r = refined_lower_bound(&ComplexMatrix::from_real_diagonal(&[2.0, 1.0]), 1e-9).unwrap();
        close(r.value, 4.0, 1e-9);
        close(r.quarter_s, 2.0, 1e-12);
        assert_eq!(r.h0.dim(), 1);
        assert!(r.invariant_under_t);

        let r = refined_lower_bound(&jordan(), 1e-9).unwrap();
        close(r.value, 0.25, 1e-9);
        assert_eq!(r.h0.dim(), 2);

        let r = refined_lower_bound(&ComplexMatrix::zeros(3), 1e-9).unwrap();
        assert_eq!((r.value, r.q, r.quarter_s), (0.0, 0.0, 0.0));
    }

    #[test]
    fn sharpness_examples() {
        let r = condition_sharper(&e3(), wts(12.0 / 5.0, 1.0), SharpVariant::Less2, 1e-9).unwrap();
        close(r.norm_b_l, 4.0, 1e-9);
        close(r.norm_a, 2.25, 1e-9);
        assert!(!r.applicable);
        assert!(r.bound < r.baseline);
        let r = condition_sharper(&e3(), wts(6.0, 1.0), SharpVariant::Less1, 1e-9).unwrap();
        close(r.norm_b_l, 4.0, 1e-9);
        close(r.norm_a, 2.5, 1e-9);
        assert!(!r.applicable);
        close(r.bound, 16.0 / 7.0, 1e-9);
        let r = condition_sharper(&e3(), wts(12.0, 1.0), SharpVariant::Less3, 1e-9).unwrap();
        close(r.norm_b_l, 4.0, 1e-9);
        close(r.norm_a, 1.25, 1e-9);
        assert!(!r.applicable);
        assert!(condition_sharper(&e3(), Weights::NUMERICAL_RADIUS, SharpVariant::Less1, 1e-9).is_err());
    }

    #[test]
    fn equality_examples() {
        for variant in [EqualityVariant::Eql1, EqualityVariant::Eql2] {
            let r = condition_equality(&e4(), variant, 1e-9).unwrap();
            assert!(r.holds);
            let x = r.witness.unwrap();
            close(x[1].re, 1.0, 1e-9);
            close(x[0].norm() + x[2].norm(), 0.0, 1e-9);
        }
        let r = condition_equality(&ComplexMatrix::from_real_diagonal(&[1.0, 0.5]), EqualityVariant::Eql1, 1e-9).unwrap();
        assert!(r.holds);
        assert!(!condition_equality(&e3(), EqualityVariant::Eql1, 1e-9).unwrap().holds);
    }

    #[test]
    fn product_general_factor() {
        close(product_factor_general(Weights::OPERATOR_NORM), 1.0, 1e-15);
        close(product_factor_general(Weights::DAVIS_WIELANDT), SQRT2, 1e-15);
        close(product_factor_general(Weights::NUMERICAL_RADIUS), 4.0, 1e-15);
        let i = ComplexMatrix::identity(2);
        let r = product_bound_general(&i, &i, Weights::DAVIS_WIELANDT, &opts()).unwrap();
        close(r.value, 2.0 * SQRT2, 1e-9);
    }

    #[test]
    fn product_commuting_examples() {
        let i = ComplexMatrix::identity(2);
        let b = real(&[&[1., 2.], &[0., -1.]]);
        let r = product_bound_commuting(&i, &b, Weights::DAVIS_WIELANDT, CommutingVariant::Isometry, &opts()).unwrap();
        let nb = crate::alphabeta::alpha_beta_norm(&b, Weights::DAVIS_WIELANDT, &opts()).unwrap().value;
        close(r.value, 1.5f64.sqrt() * nb, 1e-9);

        let d = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        let r = product_bound_commuting(&d, &d, Weights::DAVIS_WIELANDT, CommutingVariant::GeneralCommuting, &opts())
            .unwrap();
        close(r.value, SQRT2 * 2.0, 1e-9);

        let u = ComplexMatrix::from_diagonal(&[Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4), c(1., 0.)]);
        let p = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let r = product_bound_commuting(&u, &p, Weights::OPERATOR_NORM, CommutingVariant::Isometry, &opts()).unwrap();
        close(r.value, 1.0, 1e-9);

        let err = product_bound_commuting(&jordan(), &jordan().adjoint(), Weights::DAVIS_WIELANDT, CommutingVariant::GeneralCommuting, &opts());
        assert!(matches!(err, Err(Error::HypothesisViolated { .. })));
        let err = product_bound_commuting(&d, &d, Weights::DAVIS_WIELANDT, CommutingVariant::Isometry, &opts());
        assert!(matches!(err, Err(Error::HypothesisViolated { .. })));
        let err = product_bound_commuting(&d, &d, Weights::NUMERICAL_RADIUS, CommutingVariant::DoublyCommuting, &opts());
        assert!(matches!(err, Err(Error::InvalidWeights { .. })));
    }

    #[test]
    fn product_block_examples() {
        let half = wts(0.5, 0.5);
        let sp = SchattenParams::symmetric();
        let z = ComplexMatrix::zeros(2);
        close(product_bound_block(&z, &z, sp, half, &opts()).unwrap().value, 0.0, 1e-12);
        let i = ComplexMatrix::identity(2);
        let r = product_bound_block(&i, &i, sp, half, &opts()).unwrap();
        close(r.value, 1.0, 1e-9);
        assert!(r.notes.is_empty());
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 1.0]);
        let r = product_bound_block(&a, &i, sp, half, &opts()).unwrap();
        // X = diag(8, 1/2), Y = I/2, so ‖X + Y‖ = 17/2.
        close(r.value, 8.5f64.sqrt(), 1e-9);
        assert!(r.notes.is_empty());
        assert!(matches!(product_bound_block(&i, &i, sp, Weights::DAVIS_WIELANDT, &opts()), Err(Error::InvalidWeights { .. })));
        assert!(matches!(
            product_bound_block(&jordan(), &jordan().adjoint(), sp, half, &opts()),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn product_fg_examples() {
        let sp = SchattenParams::symmetric();
        let h = real(&[&[1., 2.], &[2., -1.]]);
        let cst = 1.5;
        let a = ComplexMatrix::identity(2).scale(cst);
        let r_h = 5f64.sqrt();
        for (al, be) in [(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)] {
            let w = wts(al, be);
            let r = product_bound_fg(&a, &h, sp, w, FgVariant::Est3a, &opts()).unwrap();
            let expected = top(&(&ComplexMatrix::identity(2).scale(al * r_h * r_h * cst * cst) + &square(&h).scale(be * cst * cst)))
                .unwrap()
                .sqrt();
            close(r.value, expected, 1e-9);
            assert!(r.value >= cst * r_h - 1e-9);
        }
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 1.0]);
        let i = ComplexMatrix::identity(2);
        for variant in [FgVariant::CorK03, FgVariant::Est3] {
            let r = product_bound_fg(&a, &i, sp, wts(0.3, 0.7), variant, &opts()).unwrap();
            close(r.value, 2.0, 1e-9);
        }
        let z = ComplexMatrix::zeros(2);
        close(product_bound_fg(&z, &z, sp, wts(0.5, 0.5), FgVariant::Est3a, &opts()).unwrap().value, 0.0, 1e-12);
        assert!(matches!(
            product_bound_fg(&jordan(), &real(&[&[0., 1.], &[1., 0.]]), sp, wts(0.5, 0.5), FgVariant::Est3a, &opts()),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn weight_scaling_leaves_normalized_bounds_unchanged() {
        let t = real(&[&[0.3, 1.2, -0.4], &[0.0, -0.7, 2.0], &[1.1, 0.2, 0.5]]);
        let p = OperatorProfile::new(&t);
        let w = wts(2.0, 3.0);
        let w10 = w.scaled(10.0).unwrap();
        close(p.bound_est4(w, 0.5).unwrap().normalized(), p.bound_est4(w10, 0.5).unwrap().normalized(), 1e-10);
        close(p.bound_buzano(w).unwrap().normalized(), p.bound_buzano(w10).unwrap().normalized(), 1e-10);
        close(p.bound_re_im(w).unwrap().normalized(), p.bound_re_im(w10).unwrap().normalized(), 1e-10);
    }
}
