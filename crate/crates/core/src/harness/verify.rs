//! Per-matrix verification of the full bound catalog.
//!
//! Every check is recorded as `lhs` vs `rhs` with a signed slack; failures,
//! including errors raised by post-checks, are recorded rather than returned.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabeta::{diagnose, OptimizerOptions, Weights};
use crate::bounds::{EqualityVariant, MixKind, OperatorProfile, SharpVariant, Side};
use crate::error::{Error, Result};
use crate::harness::generators::{haar_unitary, random_matrix, GeneratorKind, GeneratorSpec};
use crate::linalg::ComplexMatrix;
use crate::norms::{NormCertificate, SweepOptions};
use crate::rng;

/// Relative slack for inequalities.
pub const INEQUALITY_TOL: f64 = 1e-7;
/// Absolute tolerance for `T*` and `U*TU` invariance.
pub const INVARIANCE_TOL: f64 = 1e-6;
/// Tolerance for invariance of bounds under `(α, β) → (cα, cβ)`.
pub const HOMOGENEITY_TOL: f64 = 1e-10;
const HOMOGENEITY_FACTOR: f64 = 10.0;
const INFIMUM_TOL: f64 = 1e-10;
const CONVEXITY_TOL: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, `-|lhs - rhs|` for equalities.
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn from_slack(name: String, lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        Self {
            name,
            lhs,
            rhs,
            slack,
            tol,
            pass: slack >= -tol,
            error: None,
        }
    }

    /// `lhs ≤ rhs` up to `tol`.
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::from_slack(name.into(), lhs, rhs, rhs - lhs, tol)
    }

    /// `lhs ≤ rhs` up to `tol · (1 + |rhs|)`.
    pub fn le_rel(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::le(name, lhs, rhs, tol * (1.0 + rhs.abs()))
    }

    /// `|lhs - rhs| ≤ tol`.
    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::from_slack(name.into(), lhs, rhs, -(lhs - rhs).abs(), tol)
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        let mut check = Self::from_slack(name.into(), 0.0, 0.0, 0.0, 0.0);
        check.pass = ok;
        check
    }

    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        let mut check = Self::holds(name, false);
        check.error = Some(err.to_string());
        check
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub matrix_id: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    /// Wall-clock seconds; left empty unless timing is requested so that
    /// reports stay byte-identical across runs.
    #[serde(default)]
    pub elapsed: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub weights: Vec<Weights>,
    /// Relative slack for inequality checks.
    pub tol: f64,
    pub optimizer: OptimizerOptions,
    /// Record wall-clock time in each report.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            weights: default_weights(),
            tol: INEQUALITY_TOL,
            optimizer: OptimizerOptions::default(),
            timing: false,
        }
    }
}

/// `(1,0)`, `(0,1)`, `(1,1)`, `(2,3)`, `(1/2,5)`.
pub fn default_weights() -> Vec<Weights> {
    [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 3.0), (0.5, 5.0)]
        .into_iter()
        .map(|(a, b)| Weights::new(a, b).expect("valid weights"))
        .collect()
}

struct Recorder {
    checks: Vec<Check>,
    tol: f64,
}

impl Recorder {
    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn le(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.checks.push(Check::le_rel(name, lhs, rhs, self.tol));
    }

    /// Records a failed check if `r` is an error, otherwise hands the value on.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks.push(Check::failed(name, &e));
                None
            }
        }
    }
}

fn transported(cert: &NormCertificate, witness: crate::linalg::CVector) -> NormCertificate {
    NormCertificate {
        witness,
        ..cert.clone()
    }
}

/// Runs every applicable check on `t`.
///
/// `seed` drives the auxiliary random matrices (the unitary for the
/// invariance check and the second summand of the triangle inequality).
pub fn verify_matrix(t: &ComplexMatrix, matrix_id: &str, seed: u64, opts: &VerifyOptions) -> VerificationReport {
    let start = std::time::Instant::now();
    let mut rec = Recorder {
        checks: Vec::new(),
        tol: opts.tol,
    };
    check_matrix(t, seed, opts, &mut rec);
    VerificationReport {
        matrix_id: matrix_id.to_string(),
        checks: rec.checks,
        seed,
        elapsed: opts.timing.then(|| start.elapsed().as_secs_f64()),
    }
}

fn check_matrix(t: &ComplexMatrix, seed: u64, opts: &VerifyOptions, rec: &mut Recorder) {
    let n = t.dim();
    let profile = OperatorProfile::with_options(t, SweepOptions::default(), opts.optimizer);
    let (Some(w_cert), Some(norm_cert)) = (
        rec.attempt("w(T)", profile.w_certificate().cloned()),
        rec.attempt("‖T‖", profile.norm_certificate().cloned()),
    ) else {
        return;
    };
    let (w, norm) = (w_cert.value, norm_cert.value);

    rec.le("‖T‖/2 ≤ w(T)", 0.5 * norm, w);
    rec.le("w(T) ≤ ‖T‖", w, norm);
    check_baselines(&profile, w, rec);
    check_infima(&profile, seed, rec);
    if let Some(r) = rec.attempt("refined", profile.refined_lower_bound(1e-9)) {
        rec.le("¼‖S‖ ≤ refined", r.quarter_s, r.value);
        rec.le("refined ≤ w(T)²", r.value, w * w);
    }
    for variant in [EqualityVariant::Eql1, EqualityVariant::Eql2] {
        let name = format!("{variant:?} chain").to_lowercase();
        if let Some(cond) = rec.attempt(&name, profile.condition_equality(variant, EQUALITY_TOL)) {
            if let Some(x) = cond.witness {
                let tx = t.apply(&x).norm();
                rec.push(Check::eq(format!("{name} witness attains ‖T‖"), tx, norm, EQUALITY_TOL * (1.0 + norm)));
            }
        }
    }

    let mut aux = rng::stream(seed, 1);
    let u = ComplexMatrix::wrap(haar_unitary(&mut aux, n));
    let adjoint = OperatorProfile::with_certificates(
        &t.adjoint(),
        opts.optimizer,
        transported(&w_cert, w_cert.witness.clone()),
        transported(&norm_cert, t.apply(&norm_cert.witness) / num_complex::Complex64::new(norm.max(f64::MIN_POSITIVE), 0.0)),
    );
    let u_adj = u.adjoint();
    let rotated = OperatorProfile::with_certificates(
        &(&(&u_adj * t) * &u),
        opts.optimizer,
        transported(&w_cert, u_adj.apply(&w_cert.witness)),
        transported(&norm_cert, u_adj.apply(&norm_cert.witness)),
    );
    let s = ComplexMatrix::wrap(rng::ginibre(&mut aux, n)).scale(1.0 + norm);
    let phase = num_complex::Complex64::from_polar(2.5, 1.0);
    let summand = OperatorProfile::with_options(&s, SweepOptions::default(), opts.optimizer);
    let sum = OperatorProfile::with_options(&(t + &s), SweepOptions::default(), opts.optimizer);
    let scaled = OperatorProfile::with_certificates(
        &t.scale_complex(phase),
        opts.optimizer,
        NormCertificate {
            value: w * phase.norm(),
            ..w_cert.clone()
        },
        NormCertificate {
            value: norm * phase.norm(),
            ..norm_cert.clone()
        },
    );

    for &wt in &opts.weights {
        let ctx = Aux {
            adjoint: &adjoint,
            rotated: &rotated,
            summand: &summand,
            sum: &sum,
            scaled: &scaled,
            phase: phase.norm(),
        };
        check_weights(&profile, wt, w, norm, &ctx, rec);
    }
}

struct Aux<'a> {
    adjoint: &'a OperatorProfile,
    rotated: &'a OperatorProfile,
    summand: &'a OperatorProfile,
    sum: &'a OperatorProfile,
    scaled: &'a OperatorProfile,
    phase: f64,
}

fn check_baselines(profile: &OperatorProfile, w: f64, rec: &mut Recorder) {
    let Some(base) = rec.attempt("baselines", profile.baseline_bounds()) else {
        return;
    };
    let value = |name: &str| base.iter().find(|b| b.name == name).map(|b| b.value).unwrap_or(f64::NAN);
    let w2 = w * w;
    rec.le("w(T) ≤ half-abs-sum", w, value("half-abs-sum"));
    rec.le("half-abs-sum ≤ norm-square-mean", value("half-abs-sum"), value("norm-square-mean"));
    rec.le("quarter-gram-sum ≤ w(T)²", value("quarter-gram-sum"), w2);
    rec.le("w(T)² ≤ buzano-classical", w2, value("buzano-classical"));
    rec.le("buzano-classical ≤ half-gram-sum", value("buzano-classical"), value("half-gram-sum"));
}

fn check_infima(profile: &OperatorProfile, seed: u64, rec: &mut Recorder) {
    let mut rng = rng::stream(seed, 2);
    for kind in MixKind::ALL {
        let name = format!("{}-inf", kind.name());
        let Some(report) = rec.attempt(&name, profile.infimum_mix(kind, INFIMUM_TOL)) else {
            continue;
        };
        let w = profile.w().unwrap_or(f64::NAN);
        rec.le(format!("w(T) ≤ {name}"), w, report.value);
        rec.le(format!("{name} ≤ baseline"), report.value, report.compared_to.unwrap_or(f64::NAN));

        let (a, b): (f64, f64) = (rand::Rng::gen(&mut rng), rand::Rng::gen(&mut rng));
        let (lo, hi) = (a.min(b), a.max(b));
        let mid = 0.5 * (lo + hi);
        if let Some(h) = rec.attempt(&format!("{name} curve"), profile.mix_curve(kind, &[lo, mid, hi])) {
            rec.push(Check::le(
                format!("{name} convex on [{lo:.6}, {hi:.6}]"),
                h[1],
                0.5 * (h[0] + h[2]),
                CONVEXITY_TOL * (1.0 + h[0].abs() + h[2].abs()),
            ));
            let floor = report.value * report.value;
            let grid_min = h.iter().copied().fold(f64::INFINITY, f64::min);
            rec.push(Check::le(format!("{name} ≤ curve"), floor, grid_min, INFIMUM_TOL.sqrt() * (1.0 + floor)));
        }
    }
}

fn check_weights(profile: &OperatorProfile, wt: Weights, w: f64, norm: f64, ctx: &Aux<'_>, rec: &mut Recorder) {
    let tag = format!("@{wt}");
    let Some(value) = rec.attempt(&format!("‖T‖{tag}"), profile.alpha_beta(wt).map(|c| c.value)) else {
        return;
    };

    if let Some(eqv) = rec.attempt(&format!("sandwich{tag}"), profile.equivalence_bounds(wt)) {
        for b in eqv {
            match b.side {
                Side::Lower => rec.le(format!("{} ≤ ‖T‖{tag}", b.name), b.value, value),
                Side::Upper => rec.le(format!("‖T‖{tag} ≤ {}", b.name), value, b.value),
            }
        }
    }
    if let Some(b) = rec.attempt(&format!("est2a{tag}"), profile.lower_bound_est2a(wt)) {
        rec.le(format!("est2a ≤ ‖T‖{tag}"), b.value, value);
    }

    let mut upper = Vec::new();
    if let Some(b) = rec.attempt(&format!("est4{tag}"), profile.bound_est4(wt, 0.5)) {
        upper.push((MixKind::Est4, b));
    }
    if let Some(bs) = rec.attempt(&format!("est5{tag}"), profile.bounds_est5(wt)) {
        for b in bs {
            if b.side == Side::Lower {
                rec.le(format!("{} ≤ ‖T‖{tag}", b.name), b.value, value);
            } else {
                upper.push((MixKind::Est5, b));
            }
        }
    }
    if let Some(b) = rec.attempt(&format!("buzano{tag}"), profile.bound_buzano(wt)) {
        upper.push((MixKind::Buzano, b));
    }
    if let Some(b) = rec.attempt(&format!("reim{tag}"), profile.bound_re_im(wt)) {
        upper.push((MixKind::ReIm, b));
    }
    for (kind, b) in &upper {
        rec.le(format!("‖T‖{tag} ≤ {}", b.name), value, b.value);
        rec.le(format!("w(T) ≤ {}/sqrt(α+β){tag}", b.name), w, b.normalized());
        if let Ok(inf) = profile.infimum_mix(*kind, INFIMUM_TOL) {
            rec.le(format!("{}-inf ≤ {}{tag}", kind.name(), b.name), inf.value, b.normalized());
        }
    }

    if let Ok(scaled_w) = wt.scaled(HOMOGENEITY_FACTOR) {
        check_homogeneity(profile, wt, scaled_w, &tag, rec);
    }

    if let Some(adj) = rec.attempt(&format!("‖T*‖{tag}"), ctx.adjoint.alpha_beta(wt)) {
        rec.push(Check::eq(format!("‖T*‖ = ‖T‖{tag}"), adj.value, value, INVARIANCE_TOL));
    }
    if let Some(rot) = rec.attempt(&format!("‖U*TU‖{tag}"), ctx.rotated.alpha_beta(wt)) {
        rec.push(Check::eq(format!("‖U*TU‖ = ‖T‖{tag}"), rot.value, value, INVARIANCE_TOL));
    }
    if let Some(sc) = rec.attempt(&format!("‖cT‖{tag}"), ctx.scaled.alpha_beta(wt)) {
        rec.push(Check::eq(
            format!("‖cT‖ = |c| ‖T‖{tag}"),
            sc.value,
            ctx.phase * value,
            INVARIANCE_TOL * (1.0 + ctx.phase * value),
        ));
    }
    if let (Some(s), Some(ts)) = (
        rec.attempt(&format!("‖S‖{tag}"), ctx.summand.alpha_beta(wt)),
        rec.attempt(&format!("‖T+S‖{tag}"), ctx.sum.alpha_beta(wt)),
    ) {
        rec.le(format!("‖T+S‖ ≤ ‖T‖ + ‖S‖{tag}"), ts.value, value + s.value);
    }

    if wt.both_positive() {
        if let Some(d) = rec.attempt(&format!("equality diagnostics{tag}"), diagnose(wt, value, w, norm, EQUALITY_TOL)) {
            rec.push(Check::holds(format!("normaloid ⇒ decomposed{tag}"), !d.normaloid || d.attains_decomposed));
        }
        for variant in [SharpVariant::Less1, SharpVariant::Less2, SharpVariant::Less3] {
            let name = format!("{}{tag}", variant.name());
            if let Some(c) = rec.attempt(&name, profile.condition_sharper(wt, variant, 1e-9)).filter(|c| c.applicable) {
                rec.le(format!("{} bound ≤ baseline{tag}", variant.name()), c.bound, c.baseline);
            }
        }
    }
}

/// Bound values at `(α, β)` and `(cα, cβ)` must agree after normalization.
fn check_homogeneity(profile: &OperatorProfile, wt: Weights, scaled: Weights, tag: &str, rec: &mut Recorder) {
    let pairs: [(&str, Result<(f64, f64)>); 4] = [
        ("est4", profile.bound_est4(wt, 0.5).and_then(|a| Ok((a.normalized(), profile.bound_est4(scaled, 0.5)?.normalized())))),
        (
            "est5-upper",
            profile.bounds_est5(wt).and_then(|a| Ok((a[2].normalized(), profile.bounds_est5(scaled)?[2].normalized()))),
        ),
        ("buzano", profile.bound_buzano(wt).and_then(|a| Ok((a.normalized(), profile.bound_buzano(scaled)?.normalized())))),
        ("reim", profile.bound_re_im(wt).and_then(|a| Ok((a.normalized(), profile.bound_re_im(scaled)?.normalized())))),
    ];
    for (name, r) in pairs {
        if let Some((x, y)) = rec.attempt(&format!("{name} homogeneity{tag}"), r) {
            rec.push(Check::eq(format!("{name} degree-0 homogeneity{tag}"), y, x, HOMOGENEITY_TOL * (1.0 + x)));
        }
    }
}

/// Summary of a verification campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub count: usize,
    pub kind: String,
    pub total_checks: usize,
    pub failed_checks: usize,
    pub reports: Vec<VerificationReport>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failed_checks == 0
    }
}

/// Seed for case `index` of dimension `dim` in a campaign with base `seed`.
pub fn case_seed(seed: u64, dim: usize, index: usize) -> u64 {
    rng::stream_key(rng::stream_key(seed, dim as u64), index as u64)
}

/// Verifies `count` random matrices of each dimension. Cases run in
/// parallel; reports are ordered by dimension, then case index.
pub fn verify_campaign(
    dims: &[usize],
    count: usize,
    seed: u64,
    kind: &GeneratorKind,
    opts: &VerifyOptions,
) -> Result<CampaignReport> {
    let cases: Vec<(usize, usize)> = dims.iter().flat_map(|&n| (0..count).map(move |i| (n, i))).collect();
    let reports = cases
        .par_iter()
        .map(|&(n, i)| {
            let case = case_seed(seed, n, i);
            let t = random_matrix(&GeneratorSpec::new(kind.clone(), n, case))?;
            Ok(verify_matrix(&t, &format!("{}-n{n}-{i}", kind.name()), case, opts))
        })
        .collect::<Result<Vec<_>>>()?;
    let total_checks = reports.iter().map(|r| r.checks.len()).sum();
    let failed_checks = reports.iter().map(|r| r.failures().count()).sum();
    Ok(CampaignReport {
        seed,
        dims: dims.to_vec(),
        count,
        kind: kind.name().to_string(),
        total_checks,
        failed_checks,
        reports,
    })
}
