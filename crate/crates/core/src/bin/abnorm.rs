use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use abnorm::alphabeta::{alpha_beta_norm, alpha_beta_norm_oracle, OptimizerOptions, Weights};
use abnorm::bounds::{BoundReport, MixKind, OperatorProfile};
use abnorm::harness::campaign::{product_campaign, sharpness_campaign, sweep_mix, write_sweep_csv, ProductVariant};
use abnorm::harness::demos::{not_submultiplicative, power_inequality, DEFAULT_BUDGET};
use abnorm::harness::generators::GeneratorKind;
use abnorm::harness::io::load_matrix;
use abnorm::harness::lemmas::lemma_checks;
use abnorm::harness::reference::paper_examples;
use abnorm::harness::verify::{verify_campaign, VerifyOptions, INEQUALITY_TOL};
use abnorm::linalg::DEFAULT_EIGENSPACE_TOL;
use abnorm::norms::{self, SweepOptions};
use abnorm::{ComplexMatrix, Error};

#[derive(Parser)]
#[command(name = "abnorm", version, about = "Weighted (alpha, beta) norms and numerical radius bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm, numerical radius, Crawford number and spectral radius.
    Norms {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = DEFAULT_EIGENSPACE_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// The (alpha, beta)-norm with its maximizing vector.
    Alphabeta {
        #[arg(long)]
        input: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the brute-force search (n = 2 or 3 only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Every upper and lower bound at the given weights.
    Bounds {
        #[arg(long)]
        input: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long)]
        json: bool,
    },
    /// Infimum of a weighted bound over all weights.
    Infimum {
        #[arg(long)]
        input: String,
        #[arg(long)]
        kind: MixKind,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Verification campaign over seeded random matrices.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = INEQUALITY_TOL)]
        tol: f64,
        #[arg(long, default_value = "ginibre")]
        kind: GeneratorKind,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Write the full JSON report to a file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time per matrix (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
    /// Reference values of the worked examples.
    PaperExamples {
        #[arg(long)]
        json: bool,
    },
    /// h(t) on a uniform grid, as CSV.
    Sweep {
        #[arg(long)]
        input: String,
        #[arg(long)]
        kind: MixKind,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random instances of the auxiliary inequalities.
    Lemmas {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// How often infimum bounds improve on their baselines.
    Sharpness {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3, 4])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value = "ginibre")]
        kind: GeneratorKind,
    },
    /// Product bounds on pairs satisfying their hypotheses.
    Products {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Restrict to one variant.
        #[arg(long)]
        variant: Option<ProductVariant>,
    },
    /// Failure of submultiplicativity and of the power inequality.
    Demos {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

/// Outcome of a command: whether every check passed.
type Outcome = Result<bool, Error>;

fn is_input_error(e: &Error) -> bool {
    !matches!(e, Error::PostCheckViolation { .. } | Error::ConvergenceFailure(_))
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    serde_json::to_writer_pretty(&mut lock, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(lock)?;
    Ok(true)
}

fn weights(alpha: f64, beta: f64) -> Result<Weights, Error> {
    Weights::new(alpha, beta)
}

fn load(input: &str) -> Result<ComplexMatrix, Error> {
    load_matrix(input)
}

#[derive(Serialize)]
struct NormsOutput {
    n: usize,
    operator_norm: f64,
    numerical_radius: f64,
    crawford_number: f64,
    spectral_radius: f64,
    normaloid: bool,
    attainment_dim: usize,
}

fn cmd_norms(input: &str, tol: f64, json: bool) -> Outcome {
    let t = load(input)?;
    let sweep = SweepOptions::default();
    let out = NormsOutput {
        n: t.dim(),
        operator_norm: norms::operator_norm(&t)?.value,
        numerical_radius: norms::numerical_radius(&t, &sweep)?.value,
        crawford_number: norms::crawford_number(&t, &sweep)?.value,
        spectral_radius: norms::spectral_radius(&t)?,
        normaloid: norms::is_normaloid(&t, 1e-9)?,
        attainment_dim: norms::norm_attainment_subspace(&t, tol)?.dim(),
    };
    if json {
        return print_json(&out);
    }
    println!("n                  {}", out.n);
    println!("operator norm      {:.12}", out.operator_norm);
    println!("numerical radius   {:.12}", out.numerical_radius);
    println!("crawford number    {:.12}", out.crawford_number);
    println!("spectral radius    {:.12}", out.spectral_radius);
    println!("normaloid          {}", out.normaloid);
    println!("dim M_T            {}", out.attainment_dim);
    Ok(true)
}

#[derive(Serialize)]
struct AlphaBetaOutput {
    weights: Weights,
    value: f64,
    witness: Vec<[f64; 2]>,
    iterations: usize,
    oracle: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_alphabeta(input: &str, alpha: f64, beta: f64, restarts: usize, seed: u64, oracle: bool, grid: usize, json: bool) -> Outcome {
    let t = load(input)?;
    let w = weights(alpha, beta)?;
    let opts = OptimizerOptions {
        restarts,
        seed,
        ..OptimizerOptions::default()
    };
    let cert = alpha_beta_norm(&t, w, &opts)?;
    let oracle = if oracle { Some(alpha_beta_norm_oracle(&t, w, grid)?) } else { None };
    let out = AlphaBetaOutput {
        weights: w,
        value: cert.value,
        witness: cert.witness.iter().map(|z| [z.re, z.im]).collect(),
        iterations: cert.iterations,
        oracle,
    };
    if json {
        return print_json(&out);
    }
    println!("‖T‖_{{α,β}} at {w}  {:.12}", out.value);
    let x: Vec<String> = out.witness.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
    println!("witness            [{}]", x.join(", "));
    if let Some(o) = out.oracle {
        println!("oracle             {o:.12}  (difference {:.3e})", (o - out.value).abs());
    }
    Ok(true)
}

fn print_reports(reports: &[BoundReport]) {
    println!("{:<22} {:>16} {:>16} {:<8} {:<26}", "bound", "value", "for w(T)", "side", "target");
    for r in reports {
        let target = serde_json::to_string(&r.target).unwrap_or_default();
        let side = serde_json::to_string(&r.side).unwrap_or_default();
        let mut line = format!(
            "{:<22} {:>16.12} {:>16.12} {:<8} {:<26}",
            r.name,
            r.value,
            r.normalized(),
            side.trim_matches('"'),
            target.trim_matches('"')
        );
        if let (Some(b), Some(s)) = (r.compared_to, r.strict_improvement) {
            line.push_str(&format!(" baseline {b:.12}{}", if s { " (improved)" } else { "" }));
        }
        println!("{line}");
        for note in &r.notes {
            println!("    note: {note}");
        }
    }
}

fn cmd_bounds(input: &str, alpha: f64, beta: f64, gamma: f64, json: bool) -> Outcome {
    let t = load(input)?;
    let w = weights(alpha, beta)?;
    let p = OperatorProfile::new(&t);
    let mut reports = p.equivalence_bounds(w)?;
    reports.push(p.lower_bound_est2a(w)?);
    reports.push(p.bound_est4(w, gamma)?);
    reports.extend(p.bounds_est5(w)?);
    reports.push(p.bound_buzano(w)?);
    reports.push(p.bound_re_im(w)?);
    for kind in MixKind::ALL {
        reports.push(p.infimum_mix(kind, 1e-10)?);
    }
    reports.extend(p.baseline_bounds()?);
    if json {
        return print_json(&reports);
    }
    println!("‖T‖_{{α,β}} at {w} = {:.12}", p.alpha_beta(w)?.value);
    print_reports(&reports);
    let r = p.refined_lower_bound(1e-9)?;
    println!(
        "refined lower bound for w(T)²: {:.12} (q² = {:.12}, ¼‖S‖ = {:.12}, H₀ invariant: {})",
        r.value,
        r.q * r.q,
        r.quarter_s,
        r.invariant_under_t
    );
    Ok(true)
}

fn cmd_infimum(input: &str, kind: MixKind, tol: f64, json: bool) -> Outcome {
    let t = load(input)?;
    let r = OperatorProfile::new(&t).infimum_mix(kind, tol)?;
    if json {
        return print_json(&r);
    }
    print_reports(std::slice::from_ref(&r));
    if let Some(mix) = r.params.mix {
        println!("attained at t = α/(α+β) = {:.10}", mix.value());
    }
    Ok(true)
}

fn write_output<T: Serialize>(value: &T, out: Option<&PathBuf>, json: bool) -> Result<(), Error> {
    if let Some(path) = out {
        let mut file = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut file, value).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(file)?;
        file.flush()?;
    }
    if json {
        print_json(value)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(dims: &[usize], count: usize, seed: u64, tol: f64, kind: &GeneratorKind, json: bool, out: Option<&PathBuf>, timing: bool) -> Outcome {
    if dims.contains(&0) {
        return Err(Error::DimensionError("dimensions must be at least 1".into()));
    }
    let opts = VerifyOptions {
        tol,
        timing,
        ..VerifyOptions::default()
    };
    let report = verify_campaign(dims, count, seed, kind, &opts)?;
    write_output(&report, out, json)?;
    if !json {
        println!(
            "{} matrices ({} per dimension, dims {:?}, kind {}, seed {}): {} checks, {} failed",
            report.reports.len(),
            count,
            dims,
            report.kind,
            seed,
            report.total_checks,
            report.failed_checks
        );
        for r in &report.reports {
            for c in r.failures() {
                println!(
                    "FAIL {} {}: lhs {} rhs {} slack {:.3e}{}",
                    r.matrix_id,
                    c.name,
                    c.lhs,
                    c.rhs,
                    c.slack,
                    c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
                );
            }
        }
    }
    Ok(report.passed())
}

fn cmd_paper_examples(json: bool) -> Outcome {
    let rows = paper_examples()?;
    let pass = rows.iter().all(|r| r.pass);
    if json {
        print_json(&rows)?;
        return Ok(pass);
    }
    println!(
        "{:<38} {:>18} {:>18} {:<8} {:<10} {:>10} {:<6} {}",
        "case", "computed", "expected", "relation", "source", "tol", "pass", "erratum"
    );
    for r in &rows {
        let relation = serde_json::to_string(&r.relation).unwrap_or_default();
        let source = serde_json::to_string(&r.source).unwrap_or_default();
        println!(
            "{:<38} {:>18.12} {:>18.12} {:<8} {:<10} {:>10.1e} {:<6} {}",
            r.case,
            r.computed,
            r.expected,
            relation.trim_matches('"'),
            source.trim_matches('"'),
            r.tol,
            if r.pass { "pass" } else { "FAIL" },
            r.erratum.map(|e| format!("printed {e:.8}, not matched")).unwrap_or_default()
        );
    }
    Ok(pass)
}

fn cmd_sweep(input: &str, kind: MixKind, steps: usize, out: Option<&PathBuf>) -> Outcome {
    let t = load(input)?;
    let rows = sweep_mix(&t, kind, steps)?;
    match out {
        Some(path) => write_sweep_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => write_sweep_csv(&rows, io::stdout().lock())?,
    }
    Ok(true)
}

fn cmd_lemmas(seed: u64, count: usize, json: bool) -> Outcome {
    let report = lemma_checks(seed, count);
    let pass = report.passed();
    if json {
        print_json(&report)?;
        return Ok(pass);
    }
    let min_slack = report.checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
    println!("{} checks, {} failed, minimum slack {min_slack:.3e}", report.checks.len(), report.failures().count());
    for c in report.failures() {
        println!("FAIL {}: lhs {} rhs {} slack {:.3e}", c.name, c.lhs, c.rhs, c.slack);
    }
    Ok(pass)
}

fn cmd_sharpness(dims: &[usize], count: usize, seed: u64, tol: f64, kind: &GeneratorKind) -> Outcome {
    let summary = sharpness_campaign(dims, count, seed, kind, tol)?;
    println!("{:<10} {:>10} {:>10} {:>10} {:>12}", "bound", "evaluated", "improved", "tied", "mean gap");
    for (name, s) in &summary.per_bound {
        println!("{name:<10} {:>10} {:>10} {:>10} {:>12.4e}", s.evaluated, s.improved, s.tied, s.mean_gap);
    }
    Ok(true)
}

fn cmd_products(count: usize, seed: u64, tol: f64, variant: Option<ProductVariant>) -> Outcome {
    let variants = variant.map(|v| vec![v]).unwrap_or_else(|| ProductVariant::ALL.to_vec());
    let mut pass = true;
    println!("{:<18} {:>10} {:>8} {:>12} {:>10} {:>10}", "variant", "evaluated", "held", "min slack", "perturbed", "rejected");
    for v in variants {
        let s = product_campaign(v, count, seed, tol)?;
        pass &= s.held == s.evaluated && s.rejected == s.perturbed && s.errors.is_empty();
        println!(
            "{:<18} {:>10} {:>8} {:>12.3e} {:>10} {:>10}",
            v.name(),
            s.evaluated,
            s.held,
            s.min_slack,
            s.perturbed,
            s.rejected
        );
        for e in &s.errors {
            println!("    error: {e}");
        }
    }
    Ok(pass)
}

fn cmd_demos(seed: u64, budget: usize) -> Outcome {
    let reports = [
        not_submultiplicative(seed, budget)?,
        power_inequality(seed, budget, true)?,
        power_inequality(seed, budget, false)?,
    ];
    for r in &reports {
        println!(
            "{:<24} fixed witness: lhs {:.10} rhs {:.10} ({}); random search: {} after {} trials",
            r.name,
            r.fixed.lhs,
            r.fixed.rhs,
            if r.fixed_holds { "holds" } else { "does not hold" },
            r.status,
            r.trials
        );
        if let Some(f) = &r.found {
            println!("    weights {}  lhs {:.10}  rhs {:.10}", f.weights, f.lhs, f.rhs);
            println!("    A = {}", f.a);
            if let Some(b) = &f.b {
                println!("    B = {b}");
            }
        }
    }
    Ok(reports.iter().all(|r| r.fixed_holds))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Norms { input, tol, json } => cmd_norms(&input, tol, json),
        Command::Alphabeta {
            input,
            alpha,
            beta,
            restarts,
            seed,
            oracle,
            grid,
            json,
        } => cmd_alphabeta(&input, alpha, beta, restarts, seed, oracle, grid, json),
        Command::Bounds {
            input,
            alpha,
            beta,
            gamma,
            json,
        } => cmd_bounds(&input, alpha, beta, gamma, json),
        Command::Infimum { input, kind, tol, json } => cmd_infimum(&input, kind, tol, json),
        Command::Verify {
            dims,
            count,
            seed,
            tol,
            kind,
            json,
            out,
            timing,
        } => cmd_verify(&dims, count, seed, tol, &kind, json, out.as_ref(), timing),
        Command::PaperExamples { json } => cmd_paper_examples(json),
        Command::Sweep { input, kind, steps, out } => cmd_sweep(&input, kind, steps, out.as_ref()),
        Command::Lemmas { seed, count, json } => cmd_lemmas(seed, count, json),
        Command::Sharpness {
            dims,
            count,
            seed,
            tol,
            kind,
        } => cmd_sharpness(&dims, count, seed, tol, &kind),
        Command::Products {
            count,
            seed,
            tol,
            variant,
        } => cmd_products(count, seed, tol, variant),
        Command::Demos { seed, budget } => cmd_demos(seed, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}
