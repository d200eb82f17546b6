//! Demonstrations that `‖·‖_{α,β}` is not submultiplicative and does not
//! satisfy the power inequality in either direction.
//!
//! Each demonstration pairs a fixed witness with a bounded random search.
//! A random candidate counts only if it is certified: the side that must be
//! larger is a value attained at an explicit unit vector, and the side that
//! must be smaller is a closed-form upper bound. A search that finds nothing
//! reports "not found", which proves nothing.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabeta::{alpha_beta_norm, OptimizerOptions, Weights};
use crate::error::Result;
use crate::harness::generators::{random_matrix, GeneratorKind, GeneratorSpec};
use crate::harness::io::matrix_to_json;
use crate::linalg::ComplexMatrix;
use crate::norms::{self, SweepOptions};
use crate::rng;

/// Default number of random trials per search.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Relative margin between the certified sides.
const MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoWitness {
    pub a: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    pub weights: Weights,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub name: String,
    /// Witness known in closed form.
    pub fixed: DemoWitness,
    pub fixed_holds: bool,
    pub trials: usize,
    /// `"found"` or `"not found"` for the random search.
    pub status: String,
    pub found: Option<DemoWitness>,
}

/// `min{sqrt(α+β) ‖T‖, sqrt(α+4β) w(T)}`, an upper bound on `‖T‖_{α,β}`.
fn upper(t: &ComplexMatrix, w: Weights) -> Result<f64> {
    let norm = norms::operator_norm(t)?.value;
    let radius = norms::numerical_radius(t, &SweepOptions::default())?.value;
    Ok(((w.sum()).sqrt() * norm).min((w.alpha() + 4.0 * w.beta()).sqrt() * radius * (1.0 + MARGIN)))
}

/// A value of the objective at an explicit unit vector.
fn lower(t: &ComplexMatrix, w: Weights, opts: &OptimizerOptions) -> Result<f64> {
    Ok(alpha_beta_norm(t, w, opts)?.value)
}

fn random_candidate(rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let n = rng.gen_range(2..=3);
    let kind = if rng.gen_bool(0.5) {
        GeneratorKind::Ginibre
    } else {
        GeneratorKind::NilpotentShift {
            weights: None,
            upper: rng.gen_bool(0.5),
        }
    };
    random_matrix(&GeneratorSpec::new(kind, n, rng.gen()))
}

fn random_weights(rng: &mut ChaCha8Rng) -> Weights {
    loop {
        if let Ok(w) = Weights::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)) {
            return w;
        }
    }
}

fn witness(a: &ComplexMatrix, b: Option<&ComplexMatrix>, w: Weights, power: Option<u32>, lhs: f64, rhs: f64) -> DemoWitness {
    DemoWitness {
        a: matrix_to_json(a),
        b: b.map(matrix_to_json),
        weights: w,
        power,
        lhs,
        rhs,
    }
}

fn report(name: &str, fixed: DemoWitness, fixed_holds: bool, trials: usize, found: Option<DemoWitness>) -> DemoReport {
    DemoReport {
        name: name.into(),
        fixed,
        fixed_holds,
        trials,
        status: if found.is_some() { "found" } else { "not found" }.into(),
        found,
    }
}

/// `‖AB‖_{α,β} > ‖A‖_{α,β} ‖B‖_{α,β}`.
pub fn not_submultiplicative(seed: u64, budget: usize) -> Result<DemoReport> {
    let opts = OptimizerOptions::default();
    let a = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]])?;
    let b = a.adjoint();
    let w = Weights::NUMERICAL_RADIUS;
    let (lhs, rhs) = (lower(&(&a * &b), w, &opts)?, upper(&a, w)? * upper(&b, w)?);
    let fixed = witness(&a, Some(&b), w, None, lhs, rhs);

    let mut rng = rng::stream(seed, 0);
    let mut found = None;
    let mut trials = 0;
    while trials < budget && found.is_none() {
        trials += 1;
        let (a, b, w) = (random_candidate(&mut rng)?, random_candidate(&mut rng)?, random_weights(&mut rng));
        if a.dim() != b.dim() {
            continue;
        }
        let lhs = lower(&(&a * &b), w, &opts)?;
        let rhs = upper(&a, w)? * upper(&b, w)?;
        if lhs > rhs * (1.0 + MARGIN) {
            found = Some(witness(&a, Some(&b), w, None, lhs, rhs));
        }
    }
    Ok(report("not-submultiplicative", fixed, lhs > rhs * (1.0 + MARGIN), trials, found))
}

/// `‖Tⁿ‖_{α,β} < ‖T‖ⁿ_{α,β}` when `decrease`, else `‖Tⁿ‖_{α,β} > ‖T‖ⁿ_{α,β}`.
pub fn power_inequality(seed: u64, budget: usize, decrease: bool) -> Result<DemoReport> {
    let opts = OptimizerOptions::default();
    // The Jordan block squares to zero; the identity is idempotent while
    // ‖I‖_{α,β} = sqrt(α+β) < 1 when α+β < 1.
    let (t, w) = if decrease {
        (ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]])?, Weights::DAVIS_WIELANDT)
    } else {
        (ComplexMatrix::identity(2), Weights::new(0.25, 0.25)?)
    };
    let certify = |t: &ComplexMatrix, w: Weights, n: u32| -> Result<(f64, f64, bool)> {
        let power = t.pow(n);
        Ok(if decrease {
            let (lhs, rhs) = (upper(&power, w)?, lower(t, w, &opts)?.powi(n as i32));
            (lhs, rhs, lhs * (1.0 + MARGIN) < rhs)
        } else {
            let (lhs, rhs) = (lower(&power, w, &opts)?, upper(t, w)?.powi(n as i32));
            (lhs, rhs, lhs > rhs * (1.0 + MARGIN))
        })
    };
    let (lhs, rhs, holds) = certify(&t, w, 2)?;
    let fixed = witness(&t, None, w, Some(2), lhs, rhs);

    let mut rng = rng::stream(seed, u64::from(decrease) + 1);
    let mut found = None;
    let mut trials = 0;
    while trials < budget && found.is_none() {
        trials += 1;
        let (t, w, n) = (random_candidate(&mut rng)?, random_weights(&mut rng), rng.gen_range(2..=3));
        let (lhs, rhs, ok) = certify(&t, w, n)?;
        if ok {
            found = Some(witness(&t, None, w, Some(n), lhs, rhs));
        }
    }
    let name = if decrease { "power-decrease" } else { "power-increase" };
    Ok(report(name, fixed, holds, trials, found))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_witnesses_hold() {
        let r = not_submultiplicative(1, 0).unwrap();
        assert!(r.fixed_holds);
        assert!((r.fixed.lhs - 1.0).abs() < 1e-9);
        assert!((r.fixed.rhs - 0.25).abs() < 1e-6);
        assert_eq!(r.status, "not found");
        assert!(power_inequality(1, 0, true).unwrap().fixed_holds);
        assert!(power_inequality(1, 0, false).unwrap().fixed_holds);
    }

    #[test]
    fn searches_find_certified_examples() {
        for r in [
            not_submultiplicative(3, 200).unwrap(),
            power_inequality(3, 200, true).unwrap(),
            power_inequality(3, 200, false).unwrap(),
        ] {
            assert_eq!(r.status, "found", "{}", r.name);
            let f = r.found.unwrap();
            assert!(f.lhs != f.rhs);
        }
    }
}
