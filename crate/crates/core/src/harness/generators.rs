//! Seeded random matrices and pairs satisfying product-bound hypotheses.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    Ginibre,
    /// `U diag(z) U*` with a Haar unitary `U`.
    Normal,
    Hermitian,
    Unitary,
    /// Weighted shift. Without explicit weights they are drawn from `[0.1, 3)`.
    NilpotentShift {
        #[serde(default)]
        weights: Option<Vec<f64>>,
        /// Place the weights on the super-diagonal instead of the sub-diagonal.
        #[serde(default)]
        upper: bool,
    },
    /// `(p(M), q(M))` for random polynomials of degree at most 2.
    CommutingPair {
        #[serde(default)]
        normal_base: bool,
    },
    /// `(cI, H)` with `c > 0` and `H` Hermitian.
    ScalarHermitianPair,
    /// A unitary `A` and a `B` commuting with it.
    IsometryPair,
    /// `AB = BA` and `AB* = B*A`.
    DoublyCommutingPair,
}

impl GeneratorKind {
    pub fn is_pair(&self) -> bool {
        matches!(
            self,
            GeneratorKind::CommutingPair { .. }
                | GeneratorKind::ScalarHermitianPair
                | GeneratorKind::IsometryPair
                | GeneratorKind::DoublyCommutingPair
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Ginibre => "ginibre",
            GeneratorKind::Normal => "normal",
            GeneratorKind::Hermitian => "hermitian",
            GeneratorKind::Unitary => "unitary",
            GeneratorKind::NilpotentShift { .. } => "nilpotent-shift",
            GeneratorKind::CommutingPair { .. } => "commuting-pair",
            GeneratorKind::ScalarHermitianPair => "scalar-hermitian-pair",
            GeneratorKind::IsometryPair => "isometry-pair",
            GeneratorKind::DoublyCommutingPair => "doubly-commuting-pair",
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ginibre" => GeneratorKind::Ginibre,
            "normal" => GeneratorKind::Normal,
            "hermitian" => GeneratorKind::Hermitian,
            "unitary" => GeneratorKind::Unitary,
            "nilpotent-shift" => GeneratorKind::NilpotentShift {
                weights: None,
                upper: false,
            },
            "commuting-pair" => GeneratorKind::CommutingPair { normal_base: false },
            "scalar-hermitian-pair" => GeneratorKind::ScalarHermitianPair,
            "isometry-pair" => GeneratorKind::IsometryPair,
            "doubly-commuting-pair" => GeneratorKind::DoublyCommutingPair,
            other => return Err(Error::InvalidSpec(format!("unknown generator kind `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        if let GeneratorKind::NilpotentShift { weights: Some(w), .. } = &self.kind {
            if w.len() + 1 != self.dim {
                return Err(Error::InvalidSpec(format!(
                    "{} shift weights do not fit dimension {}",
                    w.len(),
                    self.dim
                )));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSpec("shift weights must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let qr = rng::ginibre(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let g = rng::ginibre(rng, n);
    (&g + g.adjoint()).scale(0.5)
}

fn conjugate(u: &DMatrix<Complex64>, d: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::wrap(u * d * u.adjoint())
}

fn random_poly(rng: &mut ChaCha8Rng, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let coeffs: Vec<Complex64> = (0..3).map(|_| rng::complex_normal(rng)).collect();
    let m2 = m * m;
    DMatrix::identity(n, n) * coeffs[0] + m * coeffs[1] + m2 * (coeffs[2] * 0.5)
}

/// Block sizes `(k, n-k)` with `k ≥ 1`; the second block is empty when `n = 1`.
fn split(rng: &mut ChaCha8Rng, n: usize) -> usize {
    if n == 1 {
        1
    } else {
        rng.gen_range(1..n)
    }
}

fn embed(n: usize, k: usize, top: &DMatrix<Complex64>, bottom: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(n, n);
    out.view_mut((0, 0), (k, k)).copy_from(top);
    if k < n {
        out.view_mut((k, k), (n - k, n - k)).copy_from(bottom);
    }
    out
}

fn single(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = spec.dim;
    match &spec.kind {
        GeneratorKind::Ginibre => ComplexMatrix::wrap(rng::ginibre(rng, n)),
        GeneratorKind::Normal => {
            let u = haar_unitary(rng, n);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| rng::complex_normal(rng)));
            conjugate(&u, &d)
        }
        GeneratorKind::Hermitian => ComplexMatrix::wrap(random_hermitian(rng, n)),
        GeneratorKind::Unitary => ComplexMatrix::wrap(haar_unitary(rng, n)),
        GeneratorKind::NilpotentShift { weights, upper } => {
            let w: Vec<f64> = match weights {
                Some(w) => w.clone(),
                None => (1..n).map(|_| rng.gen_range(0.1..3.0)).collect(),
            };
            let mut m = DMatrix::zeros(n, n);
            for (k, &x) in w.iter().enumerate() {
                let (i, j) = if *upper { (k, k + 1) } else { (k + 1, k) };
                m[(i, j)] = Complex64::new(x, 0.0);
            }
            ComplexMatrix::wrap(m)
        }
        _ => unreachable!("pair kinds are handled by random_pair"),
    }
}

fn pair(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> (ComplexMatrix, ComplexMatrix) {
    let n = spec.dim;
    match &spec.kind {
        GeneratorKind::CommutingPair { normal_base } => {
            let m = if *normal_base {
                single(&GeneratorSpec::new(GeneratorKind::Normal, n, spec.seed), rng).into_inner()
            } else {
                rng::ginibre(rng, n)
            };
            let a = random_poly(rng, &m);
            let b = random_poly(rng, &m);
            (ComplexMatrix::wrap(a), ComplexMatrix::wrap(b))
        }
        GeneratorKind::ScalarHermitianPair => {
            let c: f64 = rng.gen_range(0.25..2.0);
            (
                ComplexMatrix::identity(n).scale(c),
                ComplexMatrix::wrap(random_hermitian(rng, n)),
            )
        }
        GeneratorKind::IsometryPair => {
            let u = haar_unitary(rng, n);
            let k = split(rng, n);
            let phase = |rng: &mut ChaCha8Rng| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let (p1, p2) = (phase(rng), phase(rng));
            let a = embed(n, k, &DMatrix::from_diagonal_element(k, k, p1), &DMatrix::from_diagonal_element(n - k, n - k, p2));
            let b = embed(n, k, &rng::ginibre(rng, k), &rng::ginibre(rng, n - k));
            (conjugate(&u, &a), conjugate(&u, &b))
        }
        GeneratorKind::DoublyCommutingPair => {
            let u = haar_unitary(rng, n);
            let k = split(rng, n);
            let (c1, c2) = (rng::complex_normal(rng), rng::complex_normal(rng));
            let a = embed(n, k, &DMatrix::from_diagonal_element(k, k, c1), &rng::ginibre(rng, n - k));
            let b = embed(n, k, &rng::ginibre(rng, k), &DMatrix::from_diagonal_element(n - k, n - k, c2));
            (conjugate(&u, &a), conjugate(&u, &b))
        }
        _ => unreachable!("single kinds are handled by random_matrix"),
    }
}

pub fn random_matrix(spec: &GeneratorSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    if spec.kind.is_pair() {
        return Err(Error::InvalidSpec(format!("`{}` generates a pair", spec.kind.name())));
    }
    Ok(single(spec, &mut rng::stream(spec.seed, 0)))
}

pub fn random_pair(spec: &GeneratorSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    spec.validate()?;
    if !spec.kind.is_pair() {
        return Err(Error::InvalidSpec(format!("`{}` generates a single matrix", spec.kind.name())));
    }
    Ok(pair(spec, &mut rng::stream(spec.seed, 0)))
}
