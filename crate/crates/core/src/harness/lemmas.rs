//! Random instances of the auxiliary inequalities: Buzano's inequality,
//! `<Ax,x>^p ≤ <A^p x,x>` for `A ≥ 0`, `|<Tx,x>| ≤ <|T|x,x>` for Hermitian
//! `T`, and the product inequalities for `w(AB)`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::harness::generators::{random_matrix, random_pair, GeneratorKind, GeneratorSpec};
use crate::harness::verify::{Check, VerificationReport};
use crate::linalg::{polar_abs, psd_power, CVector, ComplexMatrix};
use crate::norms::{self, SweepOptions};
use crate::rng;

/// Slack tolerance, relative to `1 + |rhs|`.
pub const LEMMA_TOL: f64 = 1e-10;
const DIM: usize = 3;

fn le(name: String, lhs: f64, rhs: f64) -> Check {
    Check::le_rel(name, lhs, rhs, LEMMA_TOL)
}

fn inner(a: &CVector, b: &CVector) -> Complex64 {
    b.dotc(a)
}

fn real_form(m: &ComplexMatrix, x: &CVector) -> f64 {
    m.quadratic_form(x).re
}

fn buzano(a: &CVector, b: &CVector, e: &CVector) -> (f64, f64) {
    let lhs = (inner(a, e) * inner(e, b)).norm();
    let rhs = 0.5 * (a.norm() * b.norm() + inner(a, b).norm());
    (lhs, rhs)
}

fn power_mean(a: &ComplexMatrix, x: &CVector, p: f64) -> Result<(f64, f64)> {
    let lhs = real_form(a, x).max(0.0).powf(p);
    let rhs = real_form(&psd_power(a, p)?, x);
    Ok((lhs, rhs))
}

fn w(m: &ComplexMatrix) -> Result<f64> {
    Ok(norms::numerical_radius(m, &SweepOptions::default())?.value)
}

fn product_radius(case: u64, part: usize) -> Result<(String, f64, f64)> {
    let spec = |kind| GeneratorSpec::new(kind, DIM, case);
    Ok(match part {
        0 => {
            let a = random_matrix(&spec(GeneratorKind::Ginibre))?;
            let b = random_matrix(&GeneratorSpec::new(GeneratorKind::Ginibre, DIM, rng::stream_key(case, 1)))?;
            ("w(AB) ≤ 4w(A)w(B)".into(), w(&(&a * &b))?, 4.0 * w(&a)? * w(&b)?)
        }
        1 => {
            let (a, b) = random_pair(&spec(GeneratorKind::CommutingPair { normal_base: false }))?;
            ("w(AB) ≤ 2w(A)w(B), AB = BA".into(), w(&(&a * &b))?, 2.0 * w(&a)? * w(&b)?)
        }
        2 => {
            let (a, b) = random_pair(&spec(GeneratorKind::IsometryPair))?;
            ("w(AB) ≤ w(B), A isometry".into(), w(&(&a * &b))?, w(&b)?)
        }
        _ => {
            let (a, b) = random_pair(&spec(GeneratorKind::DoublyCommutingPair))?;
            let norm_a = norms::operator_norm(&a)?.value;
            ("w(AB) ≤ w(B)‖A‖, doubly commuting".into(), w(&(&a * &b))?, w(&b)? * norm_a)
        }
    })
}

fn record(checks: &mut Vec<Check>, name: String, r: Result<(f64, f64)>) {
    checks.push(match r {
        Ok((lhs, rhs)) => le(name, lhs, rhs),
        Err(e) => Check::failed(name, &e),
    });
}

/// `count` random instances of each inequality. Case `i` draws from the
/// stream `(seed, i)`; the product inequality cycles through its four parts.
pub fn lemma_checks(seed: u64, count: usize) -> VerificationReport {
    let mut checks = Vec::new();

    let e = CVector::from_fn(DIM, |i, _| Complex64::new(f64::from(u8::from(i == 0)), 0.0));
    let (lhs, rhs) = buzano(&e, &e, &e);
    checks.push(Check::eq("buzano a = b = e", lhs, rhs, LEMMA_TOL));
    let identity = ComplexMatrix::identity(DIM);
    for p in [1.0, 2.5, 7.0] {
        let name = format!("power mean A = I, p = {p}");
        match power_mean(&identity, &e, p) {
            Ok((lhs, rhs)) => checks.push(Check::eq(name, lhs, rhs, LEMMA_TOL)),
            Err(err) => checks.push(Check::failed(name, &err)),
        }
    }

    for i in 0..count {
        let case = rng::stream_key(seed, i as u64);
        let mut rng = rng::stream(seed, i as u64);
        let a = CVector::from_fn(DIM, |_, _| rng::complex_normal(&mut rng));
        let b = CVector::from_fn(DIM, |_, _| rng::complex_normal(&mut rng));
        let e = rng::unit_vector(&mut rng, DIM);
        let (lhs, rhs) = buzano(&a, &b, &e);
        checks.push(le(format!("buzano #{i}"), lhs, rhs));

        let g = ComplexMatrix::wrap(rng::ginibre(&mut rng, DIM));
        let psd = g.gram().hermitian_part();
        let x = rng::unit_vector(&mut rng, DIM);
        let p: f64 = rng.gen_range(1.0..4.0);
        record(&mut checks, format!("power mean #{i} (p = {p:.4})"), power_mean(&psd, &x, p));

        let h = ComplexMatrix::wrap(rng::ginibre(&mut rng, DIM)).hermitian_part();
        let y = CVector::from_fn(DIM, |_, _| rng::complex_normal(&mut rng));
        record(
            &mut checks,
            format!("mixed Schwarz #{i}"),
            polar_abs(&h).map(|abs| (h.quadratic_form(&y).norm(), real_form(&abs, &y))),
        );

        match product_radius(case, i % 4) {
            Ok((name, lhs, rhs)) => checks.push(le(format!("{name} #{i}"), lhs, rhs)),
            Err(err) => checks.push(Check::failed(format!("product radius #{i}"), &err)),
        }
    }

    VerificationReport {
        matrix_id: "lemmas".into(),
        checks,
        seed,
        elapsed: None,
    }
}
