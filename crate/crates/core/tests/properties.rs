use abnorm::alphabeta::{alpha_beta_norm, OptimizerOptions, Weights};
use abnorm::bounds::{MixKind, OperatorProfile};
use abnorm::norms::{numerical_radius, operator_norm, SweepOptions};
use abnorm::ComplexMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-7;

fn matrix() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
            let rows: Vec<Vec<Complex64>> = v.chunks(n).map(|r| r.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).collect();
            ComplexMatrix::from_rows(&rows).unwrap()
        })
    })
}

fn weights() -> impl Strategy<Value = Weights> {
    (0.0f64..4.0, 0.0f64..4.0)
        .prop_filter("nonzero", |(a, b)| a + b > 1e-3)
        .prop_map(|(a, b)| Weights::new(a, b).unwrap())
}

fn opts() -> OptimizerOptions {
    OptimizerOptions {
        restarts: 12,
        ..OptimizerOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_sandwich(t in matrix(), w in weights()) {
        let w_t = numerical_radius(&t, &SweepOptions::default()).unwrap().value;
        let n_t = operator_norm(&t).unwrap().value;
        let v = alpha_beta_norm(&t, w, &opts()).unwrap().value;
        let scale = 1.0 + n_t;
        prop_assert!(w.sum().sqrt() * w_t <= v + TOL * scale);
        prop_assert!(v <= (w.alpha() * w_t * w_t + w.beta() * n_t * n_t).sqrt() + TOL * scale);
        prop_assert!(v <= (w.alpha() + 4.0 * w.beta()).sqrt() * w_t + TOL * scale);
    }

    #[test]
    fn adjoint_and_scalar(t in matrix(), w in weights(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let v = alpha_beta_norm(&t, w, &opts()).unwrap().value;
        let va = alpha_beta_norm(&t.adjoint(), w, &opts()).unwrap().value;
        prop_assert!((v - va).abs() <= 1e-6 * (1.0 + v));
        let c = Complex64::new(re, im);
        let vc = alpha_beta_norm(&t.scale_complex(c), w, &opts()).unwrap().value;
        prop_assert!((vc - c.norm() * v).abs() <= 1e-6 * (1.0 + vc));
    }

    #[test]
    fn triangle(t in matrix(), w in weights(), seed in 0u64..1000) {
        let n = t.dim();
        let s = t.adjoint().scale_complex(Complex64::new(0.0, 1.0 + seed as f64 / 1000.0));
        prop_assume!(s.dim() == n);
        let lhs = alpha_beta_norm(&(&t + &s), w, &opts()).unwrap().value;
        let rhs = alpha_beta_norm(&t, w, &opts()).unwrap().value + alpha_beta_norm(&s, w, &opts()).unwrap().value;
        prop_assert!(lhs <= rhs + TOL * (1.0 + rhs));
    }

    #[test]
    fn weight_scaling(t in matrix(), w in weights(), k in 0.1f64..10.0) {
        let scaled = Weights::new(k * w.alpha(), k * w.beta()).unwrap();
        let v = alpha_beta_norm(&t, w, &opts()).unwrap().value;
        let vs = alpha_beta_norm(&t, scaled, &opts()).unwrap().value;
        prop_assert!((vs - k.sqrt() * v).abs() <= 1e-6 * (1.0 + vs));
    }

    #[test]
    fn infima_between_w_and_baseline(t in matrix()) {
        let p = OperatorProfile::new(&t);
        let w_t = p.w().unwrap();
        for kind in MixKind::ALL {
            let r = p.infimum_mix(kind, 1e-10).unwrap();
            prop_assert!(w_t <= r.value + TOL * (1.0 + r.value));
            prop_assert!(r.value <= r.compared_to.unwrap() + TOL);
        }
        let refined = p.refined_lower_bound(1e-9).unwrap();
        prop_assert!(refined.value <= w_t * w_t + TOL * (1.0 + w_t * w_t));
        prop_assert!(refined.quarter_s <= refined.value + TOL);
    }
}
