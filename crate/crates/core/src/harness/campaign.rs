//! Randomized campaigns: how often the weighted bounds improve on their
//! classical baselines, and product bounds on pairs built to satisfy their
//! hypotheses.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabeta::{alpha_beta_norm, OptimizerOptions, Weights};
use crate::bounds::{
    product_bound_block, product_bound_commuting, product_bound_fg, product_bound_general, CommutingVariant,
    FgVariant, MixKind, OperatorProfile, SchattenParams,
};
use crate::error::{Error, Result};
use crate::harness::generators::{random_matrix, random_pair, GeneratorKind, GeneratorSpec};
use crate::harness::verify::case_seed;
use crate::linalg::ComplexMatrix;
use crate::norms::SweepOptions;
use crate::rng;

const INFIMUM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundStats {
    pub evaluated: usize,
    pub improved: usize,
    pub tied: usize,
    /// Mean of `|bound - baseline| / baseline` over evaluated cases.
    pub mean_gap: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSummary {
    pub per_bound: BTreeMap<String, BoundStats>,
}

struct Outcome {
    name: String,
    improved: bool,
    tied: bool,
    gap: f64,
}

fn outcome(name: &str, value: f64, baseline: f64, improved: bool, tol: f64) -> Outcome {
    let gap = if baseline > 0.0 { (value - baseline).abs() / baseline } else { 0.0 };
    Outcome {
        name: name.to_string(),
        improved,
        tied: (value - baseline).abs() <= tol * (1.0 + baseline.abs()),
        gap,
    }
}

fn sharpness_case(t: &ComplexMatrix, tol: f64) -> Result<Vec<Outcome>> {
    let profile = OperatorProfile::new(t);
    let mut out = Vec::new();
    for kind in MixKind::ALL {
        let r = profile.infimum_mix(kind, INFIMUM_TOL)?;
        let baseline = r.compared_to.unwrap_or(r.value);
        out.push(outcome(kind.name(), r.value, baseline, r.value < baseline - tol * (1.0 + baseline), tol));
    }
    let r = profile.refined_lower_bound(1e-9)?;
    out.push(outcome("refined", r.value, r.quarter_s, r.value > r.quarter_s + tol * (1.0 + r.quarter_s), tol));
    Ok(out)
}

/// Compares each infimum bound with its `t = 1` baseline and the refined lower
/// bound with `¼‖T*T + TT*‖` on `count` matrices per dimension.
pub fn sharpness_campaign(
    dims: &[usize],
    count: usize,
    seed: u64,
    kind: &GeneratorKind,
    tol: f64,
) -> Result<SharpnessSummary> {
    let cases: Vec<(usize, usize)> = dims.iter().flat_map(|&n| (0..count).map(move |i| (n, i))).collect();
    let results = cases
        .par_iter()
        .map(|&(n, i)| {
            let t = random_matrix(&GeneratorSpec::new(kind.clone(), n, case_seed(seed, n, i)))?;
            sharpness_case(&t, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SharpnessSummary::default();
    for o in results.into_iter().flatten() {
        let stats = summary.per_bound.entry(o.name).or_default();
        stats.evaluated += 1;
        stats.improved += usize::from(o.improved);
        stats.tied += usize::from(o.tied);
        stats.mean_gap += o.gap;
    }
    for stats in summary.per_bound.values_mut() {
        stats.mean_gap /= stats.evaluated as f64;
    }
    Ok(summary)
}

/// Product bounds and the pair generator each one is exercised on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductVariant {
    General,
    Commuting,
    Isometry,
    DoublyCommuting,
    Est2,
    Est3a,
    Est3,
    CorK03,
}

impl ProductVariant {
    pub const ALL: [ProductVariant; 8] = [
        ProductVariant::General,
        ProductVariant::Commuting,
        ProductVariant::Isometry,
        ProductVariant::DoublyCommuting,
        ProductVariant::Est2,
        ProductVariant::Est3a,
        ProductVariant::Est3,
        ProductVariant::CorK03,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProductVariant::General => "general",
            ProductVariant::Commuting => "commuting",
            ProductVariant::Isometry => "isometry",
            ProductVariant::DoublyCommuting => "doubly-commuting",
            ProductVariant::Est2 => "est2",
            ProductVariant::Est3a => "est3a",
            ProductVariant::Est3 => "est3",
            ProductVariant::CorK03 => "cor-k-03",
        }
    }

    fn generator(&self) -> Option<GeneratorKind> {
        match self {
            ProductVariant::General => None,
            ProductVariant::Commuting => Some(GeneratorKind::CommutingPair { normal_base: false }),
            ProductVariant::Isometry => Some(GeneratorKind::IsometryPair),
            ProductVariant::DoublyCommuting => Some(GeneratorKind::DoublyCommutingPair),
            ProductVariant::Est2 => Some(GeneratorKind::CommutingPair { normal_base: true }),
            ProductVariant::Est3a | ProductVariant::Est3 | ProductVariant::CorK03 => {
                Some(GeneratorKind::ScalarHermitianPair)
            }
        }
    }

    fn needs_unit_sum(&self) -> bool {
        matches!(
            self,
            ProductVariant::Est2 | ProductVariant::Est3a | ProductVariant::Est3 | ProductVariant::CorK03
        )
    }

    fn needs_beta(&self) -> bool {
        matches!(self, ProductVariant::Commuting | ProductVariant::DoublyCommuting)
    }

    pub fn bound(
        &self,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        sp: SchattenParams,
        w: Weights,
        opts: &OptimizerOptions,
    ) -> Result<f64> {
        let report = match self {
            ProductVariant::General => product_bound_general(a, b, w, opts),
            ProductVariant::Commuting => product_bound_commuting(a, b, w, CommutingVariant::GeneralCommuting, opts),
            ProductVariant::Isometry => product_bound_commuting(a, b, w, CommutingVariant::Isometry, opts),
            ProductVariant::DoublyCommuting => {
                product_bound_commuting(a, b, w, CommutingVariant::DoublyCommuting, opts)
            }
            ProductVariant::Est2 => product_bound_block(a, b, sp, w, opts),
            ProductVariant::Est3a => product_bound_fg(a, b, sp, w, FgVariant::Est3a, opts),
            ProductVariant::Est3 => product_bound_fg(a, b, sp, w, FgVariant::Est3, opts),
            ProductVariant::CorK03 => product_bound_fg(a, b, sp, w, FgVariant::CorK03, opts),
        }?;
        Ok(report.value)
    }
}

impl std::str::FromStr for ProductVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProductVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown product variant `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSummary {
    pub variant: ProductVariant,
    pub evaluated: usize,
    /// Cases with `bound - ‖AB‖_{α,β} ≥ -tol`.
    pub held: usize,
    pub min_slack: f64,
    /// Perturbed pairs that break the hypothesis.
    pub perturbed: usize,
    /// Perturbed pairs rejected with a hypothesis error.
    pub rejected: usize,
    /// First error other than a bound violation, if any.
    pub errors: Vec<String>,
}

/// Random Schatten-type parameters with `1/n + 1/m = 1`, `pn, pm ≥ 2`.
pub fn random_schatten(rng: &mut impl Rng) -> SchattenParams {
    let n_exp: f64 = rng.gen_range(1.25..5.0);
    let m_exp = n_exp / (n_exp - 1.0);
    let p_min = (2.0 / n_exp).max(2.0 / m_exp).max(1.0);
    let p = p_min + rng.gen_range(0.0..1.5);
    let gamma = rng.gen_range(0.1..0.9);
    SchattenParams::new(n_exp, m_exp, p, gamma).unwrap_or(SchattenParams::symmetric())
}

fn random_weights(rng: &mut impl Rng, variant: ProductVariant) -> Weights {
    let alpha: f64 = rng.gen_range(0.0..3.0);
    let beta: f64 = if variant.needs_beta() || rng.gen_bool(0.8) { rng.gen_range(0.1..3.0) } else { 0.0 };
    let w = Weights::new(alpha, beta).expect("positive weights");
    if variant.needs_unit_sum() {
        w.normalized()
    } else {
        w
    }
}

/// A perturbation of `b` that breaks every hypothesis on the pair.
fn perturb(b: &ComplexMatrix, rng: &mut impl Rng) -> ComplexMatrix {
    let n = b.dim();
    let e = ComplexMatrix::wrap(rng::ginibre(rng, n));
    b + &e.scale(1e-2 * (1.0 + b.frobenius_norm()))
}

/// Evaluates `variant` on `count` generated pairs, cycling through
/// dimensions 2, 3 and 4.
pub fn product_campaign(variant: ProductVariant, count: usize, seed: u64, tol: f64) -> Result<ProductSummary> {
    let opts = OptimizerOptions::default();
    let cases: Vec<Result<(f64, Option<bool>)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 3;
            let case = case_seed(seed, n, i);
            let mut rng = rng::stream(case, 1);
            let (a, b) = match variant.generator() {
                Some(kind) => random_pair(&GeneratorSpec::new(kind, n, case))?,
                None => (
                    random_matrix(&GeneratorSpec::new(GeneratorKind::Ginibre, n, case))?,
                    random_matrix(&GeneratorSpec::new(GeneratorKind::Ginibre, n, rng::stream_key(case, 1)))?,
                ),
            };
            let w = random_weights(&mut rng, variant);
            let sp = random_schatten(&mut rng);
            let bound = variant.bound(&a, &b, sp, w, &opts)?;
            let product = alpha_beta_norm(&(&a * &b), w, &opts)?.value;
            let slack = bound - product;
            let rejected = match variant {
                ProductVariant::General => None,
                _ => {
                    let b2 = perturb(&b, &mut rng);
                    let mut a2 = a.clone();
                    if variant == ProductVariant::Isometry || variant.needs_unit_sum() {
                        a2 = perturb(&a, &mut rng);
                    }
                    Some(matches!(
                        variant.bound(&a2, &b2, sp, w, &opts),
                        Err(Error::HypothesisViolated { .. })
                    ))
                }
            };
            Ok((slack, rejected))
        })
        .collect();

    let mut summary = ProductSummary {
        variant,
        evaluated: 0,
        held: 0,
        min_slack: f64::INFINITY,
        perturbed: 0,
        rejected: 0,
        errors: Vec::new(),
    };
    for case in cases {
        match case {
            Ok((slack, rejected)) => {
                summary.evaluated += 1;
                summary.held += usize::from(slack >= -tol);
                summary.min_slack = summary.min_slack.min(slack);
                if let Some(r) = rejected {
                    summary.perturbed += 1;
                    summary.rejected += usize::from(r);
                }
            }
            Err(e) => {
                summary.evaluated += 1;
                summary.errors.push(e.to_string());
            }
        }
    }
    Ok(summary)
}

/// `h(t)` on the uniform grid of `steps` points in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub h: f64,
    pub sqrt_h: f64,
}

pub fn sweep_mix(t: &ComplexMatrix, kind: MixKind, steps: usize) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::InvalidParams(format!("steps must be at least 2, got {steps}")));
    }
    let ts: Vec<f64> = (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect();
    let profile = OperatorProfile::with_options(t, SweepOptions::default(), OptimizerOptions::default());
    let hs = profile.mix_curve(kind, &ts)?;
    Ok(ts
        .into_iter()
        .zip(hs)
        .map(|(t, h)| SweepRow {
            t,
            h,
            sqrt_h: h.max(0.0).sqrt(),
        })
        .collect())
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::reference::e3;

    #[test]
    fn empty_campaign_is_empty() {
        let s = sharpness_campaign(&[3], 0, 1, &GeneratorKind::Ginibre, 1e-9).unwrap();
        assert!(s.per_bound.is_empty());
    }

    #[test]
    fn shifts_improve_est5() {
        let kind = GeneratorKind::NilpotentShift {
            weights: None,
            upper: false,
        };
        let s = sharpness_campaign(&[3], 20, 7, &kind, 1e-9).unwrap();
        assert!(s.per_bound["est5"].improved > 0);
        assert_eq!(s.per_bound["est5"].evaluated, 20);
    }

    #[test]
    fn normal_matrices_tie() {
        let s = sharpness_campaign(&[2, 3], 10, 7, &GeneratorKind::Normal, 1e-6).unwrap();
        for name in ["est4", "est5"] {
            let stats = &s.per_bound[name];
            assert_eq!(stats.tied, stats.evaluated, "{name}");
            assert_eq!(stats.improved, 0, "{name}");
        }
    }

    #[test]
    fn products_hold_on_small_batches() {
        for variant in ProductVariant::ALL {
            let s = product_campaign(variant, 6, 3, 1e-6).unwrap();
            assert!(s.errors.is_empty(), "{variant:?}: {:?}", s.errors);
            assert_eq!(s.held, s.evaluated, "{variant:?}");
            assert_eq!(s.rejected, s.perturbed, "{variant:?}");
        }
    }

    #[test]
    fn schatten_samples_are_valid() {
        let mut rng = rng::stream(5, 0);
        for _ in 0..200 {
            random_schatten(&mut rng).validate().unwrap();
        }
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep_mix(&e3(), MixKind::Est5, 8).unwrap();
        let min = rows.iter().map(|r| r.h).fold(f64::INFINITY, f64::min);
        assert!(min >= 16.0 / 7.0 - 1e-9);
        let rows = sweep_mix(&e3(), MixKind::Est5, 2).unwrap();
        assert_eq!(rows.iter().map(|r| r.t).collect::<Vec<_>>(), vec![0.0, 1.0]);
        assert!((rows[1].h - 2.5).abs() < 1e-12);
        assert!(sweep_mix(&ComplexMatrix::zeros(3), MixKind::Buzano, 5).unwrap().iter().all(|r| r.h == 0.0));
        assert!(matches!(sweep_mix(&e3(), MixKind::Est4, 1), Err(Error::InvalidParams(_))));
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,h,sqrt_h\n"));
    }
}
