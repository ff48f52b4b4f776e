//! Report assembly for the `tarry` binary: every subcommand produces one
//! JSON document under the `tarry-report/1` schema (or a plain-text
//! projection of the same numbers) plus a process exit code.
//!
//! Exit codes: 0 success, 2 input error, 3 check failure (a failed
//! verification or an estimate that contradicts the certificates).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tarry_core::criteria::{self, ConvergenceReport};
use tarry_core::lemmas;
use tarry_core::order;
use tarry_core::quad::{self, Agreement, EstimateConfig, QuadConfig};
use tarry_core::shape::PolynomialShape;
use tarry_core::structure;
use tarry_core::ExponentVector;

pub const SCHEMA: &str = "tarry-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Certificates and desk-scale estimation for the special integral of the
/// multidimensional Tarry problem, driven by a polynomial's monomial support.
#[derive(Debug, Parser)]
#[command(name = "tarry", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format: a JSON report or its plain-text projection.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shape, exponent matrix, rank, block structure, decomposability,
    /// senior-form support, and the maximal completeness level.
    Analyze(PolyArg),
    /// Monomials in increasing degree-then-lexicographic order.
    Order(PolyArg),
    /// Convergence/divergence certificates and real thresholds.
    Bounds(PolyArg),
    /// Monte Carlo shell estimation of one even moment, cross-checked
    /// against the certificates.
    Estimate(EstimateArgs),
    /// Randomized and exact verification of the rank and determinant
    /// identities behind the certificates.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PolyArg {
    /// Path to a polynomial-spec document {"r": ..., "monomials": [[...]]}.
    #[arg(long)]
    pub poly: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// Even moment order 2k of the estimated integral.
    #[arg(long = "two-k")]
    pub two_k: u64,
    /// Outer truncation radius of the doubling shell schedule.
    #[arg(long = "a-max")]
    pub a_max: Option<f64>,
    /// Number of doubling shells (alternative to --a-max; a-max = 2^shells).
    #[arg(long)]
    pub shells: Option<u32>,
    /// Monte Carlo samples per shell.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Ratio tolerance of the decay classification.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Shape input, required by --prop3 and --singular.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Randomized full-rank check of the assembled single-point blocks.
    #[arg(long)]
    pub prop3: bool,
    /// Grid structure check for parameters n m.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub lemma1: Option<Vec<u32>>,
    /// Hessian determinant identity for the given exponents.
    #[arg(long)]
    pub lemma2: bool,
    /// Exponents for --lemma2, comma separated (e.g. 2,1).
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<u32>>,
    /// Sampled fraction of the regular region (needs --lambda).
    #[arg(long)]
    pub singular: bool,
    /// Gram-determinant floor defining the regular region.
    #[arg(long, default_value_t = 1e-12)]
    pub lambda: f64,
    /// Point count k of the connected system used by --singular.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Lower edge of all sampling cubes.
    #[arg(long, default_value_t = 0.0625)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// A rendered report plus the process exit code.
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn input_error(format: Format, message: &str) -> Outcome {
    let output = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "schema": SCHEMA,
            "error": { "kind": "input", "message": message },
        }))
        .expect("error object serializes"),
        Format::Text => format!("error: {message}"),
    };
    Outcome {
        output,
        code: EXIT_INPUT,
    }
}

fn load_shape(path: &PathBuf) -> Result<PolynomialShape, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    PolynomialShape::from_json_str(&text).map_err(|e| e.to_string())
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// Runs one parsed invocation and renders its report.
pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze(arg) => run_analyze(arg, cli.format),
        Command::Order(arg) => run_order(arg, cli.format),
        Command::Bounds(arg) => run_bounds(arg, cli.format),
        Command::Estimate(args) => run_estimate(args, cli.format),
        Command::Verify(args) => run_verify(args, cli.format),
    }
}

fn render(format: Format, report: &Value, text: String, code: i32) -> Outcome {
    match format {
        Format::Json => Outcome {
            output: serde_json::to_string_pretty(report).expect("reports serialize"),
            code,
        },
        Format::Text => Outcome { output: text, code },
    }
}

fn monomial_rows(p: &PolynomialShape) -> Vec<Vec<u32>> {
    p.monomials()
        .iter()
        .map(|m| m.exponents().to_vec())
        .collect()
}

fn run_analyze(arg: &PolyArg, format: Format) -> Outcome {
    let p = match load_shape(&arg.poly) {
        Ok(p) => p,
        Err(msg) => return input_error(format, &msg),
    };
    let matrix = p.exponent_matrix();
    let decomposition = match structure::structure_decompose(&matrix) {
        Ok(d) => d,
        Err(e) => return input_error(format, &e.to_string()),
    };
    let completeness = match criteria::max_v(&p) {
        Ok(c) => c,
        Err(e) => return input_error(format, &e.to_string()),
    };
    let decomposability = p.decomposability();
    let senior: Vec<usize> = p.senior_form_support().into_iter().collect();
    let report = json!({
        "schema": SCHEMA,
        "command": "analyze",
        "config": { "poly": arg.poly.display().to_string() },
        "shape": {
            "r": p.r(),
            "n": p.n(),
            "max_degree": p.max_degree(),
            "exponent_sum": p.exponent_sum(),
            "monomials": monomial_rows(&p),
        },
        "exponent_matrix": monomial_rows(&p),
        "rank": matrix.rank(),
        "structure": to_value(&decomposition),
        "senior_form": { "support": senior, "full": p.senior_form_full() },
        "decomposability": to_value(&decomposability),
        "completeness": to_value(&completeness),
    });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "shape: r = {}, n = {}, max degree = {}",
        p.r(),
        p.n(),
        p.max_degree()
    );
    let _ = writeln!(text, "exponent sum: {}", p.exponent_sum());
    let _ = writeln!(text, "rank: {}", matrix.rank());
    let _ = writeln!(
        text,
        "structure: {:?} (q = {})",
        decomposition.blocks, decomposition.q
    );
    let _ = writeln!(
        text,
        "senior form support: {:?} (full: {})",
        p.senior_form_support(),
        p.senior_form_full()
    );
    let _ = writeln!(
        text,
        "decomposable: {} (components: {:?}, unused: {:?})",
        decomposability.decomposable, decomposability.components, decomposability.unused_variables
    );
    let _ = writeln!(
        text,
        "max complete v: {} (witness: {:?})",
        completeness.v, completeness.witness_subset
    );
    render(format, &report, text, EXIT_OK)
}

fn run_order(arg: &PolyArg, format: Format) -> Outcome {
    let p = match load_shape(&arg.poly) {
        Ok(p) => p,
        Err(msg) => return input_error(format, &msg),
    };
    let sorted = order::nl_sort(&p);
    let rows = monomial_rows(&sorted);
    let high = order::high_member(&p);
    let report = json!({
        "schema": SCHEMA,
        "command": "order",
        "config": { "poly": arg.poly.display().to_string() },
        "monomials": rows,
        "high_member": high.exponents(),
    });
    let mut text = String::new();
    for row in monomial_rows(&sorted) {
        let _ = writeln!(text, "{row:?}");
    }
    let _ = writeln!(text, "high member: {:?}", high.exponents());
    render(format, &report, text, EXIT_OK)
}

fn bound_text(bound: &Option<criteria::RationalBound>) -> String {
    match bound {
        Some(b) => format!("{}/{} = {} (via {:?})", b.num, b.den, b.value, b.sources),
        None => "undefined".to_string(),
    }
}

fn bounds_text(p: &PolynomialShape, report: &ConvergenceReport) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "shape: r = {}, n = {}, exponent sum = {}",
        p.r(),
        p.n(),
        report.exponent_sum
    );
    let _ = writeln!(
        text,
        "rank = {}, structure = {:?}, q = {}, v_max = {}",
        report.rank, report.structure, report.q, report.v_max
    );
    let _ = writeln!(
        text,
        "hypotheses: senior form full = {}, indecomposable = {}, uniform structure = {}",
        report.hypotheses.senior_form_full,
        report.hypotheses.indecomposable,
        report.hypotheses.uniform_structure
    );
    for cert in &report.divergent {
        let _ = writeln!(
            text,
            "divergent: 2k = {} (k = {}) via {:?}",
            cert.two_k, cert.k, cert.theorems
        );
    }
    match &report.convergent {
        Some(c) => {
            let _ = writeln!(
                text,
                "convergent: 2k >= {} (k >= {}) via {:?}",
                c.two_k, c.k, c.theorem
            );
        }
        None => {
            let _ = writeln!(text, "convergent: no applicable criterion");
        }
    }
    let _ = writeln!(text, "gamma_low  = {}", bound_text(&report.gamma_low));
    let _ = writeln!(text, "gamma_high = {}", bound_text(&report.gamma_high));
    let _ = writeln!(text, "exact exponent: {}", report.exact_exponent);
    let _ = writeln!(text, "unknown 2k: {:?}", report.unknown_two_k);
    for note in &report.notes {
        let _ = writeln!(text, "note: {note}");
    }
    text
}

fn run_bounds(arg: &PolyArg, format: Format) -> Outcome {
    let p = match load_shape(&arg.poly) {
        Ok(p) => p,
        Err(msg) => return input_error(format, &msg),
    };
    let report = match criteria::convergence_report(&p) {
        Ok(r) => r,
        Err(e) => return input_error(format, &e.to_string()),
    };
    let doc = json!({
        "schema": SCHEMA,
        "command": "bounds",
        "config": { "poly": arg.poly.display().to_string() },
        "report": to_value(&report),
    });
    render(format, &doc, bounds_text(&p, &report), EXIT_OK)
}

fn resolve_a_max(args: &EstimateArgs) -> Result<f64, String> {
    match (args.a_max, args.shells) {
        (None, None) => Ok(64.0),
        (Some(a), None) => Ok(a),
        (None, Some(s)) => Ok((2.0f64).powi(s as i32)),
        (Some(a), Some(s)) => {
            let from_shells = (2.0f64).powi(s as i32);
            if a == from_shells {
                Ok(a)
            } else {
                Err(format!(
                    "--a-max {a} conflicts with --shells {s} (which implies a-max = {from_shells})"
                ))
            }
        }
    }
}

fn run_estimate(args: &EstimateArgs, format: Format) -> Outcome {
    let p = match load_shape(&args.poly) {
        Ok(p) => p,
        Err(msg) => return input_error(format, &msg),
    };
    let a_max = match resolve_a_max(args) {
        Ok(a) => a,
        Err(msg) => return input_error(format, &msg),
    };
    let config = EstimateConfig {
        a_max,
        samples_per_shell: args.samples,
        seed: args.seed,
        epsilon: args.eps,
        quad: QuadConfig::default(),
    };
    let report = match quad::classify_empirical(&p, args.two_k, &config) {
        Ok(r) => r,
        Err(e) => return input_error(format, &e.to_string()),
    };
    let code = match report.agreement {
        Agreement::Disagrees => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    };
    let doc = json!({
        "schema": SCHEMA,
        "command": "estimate",
        "seed": args.seed,
        "config": {
            "poly": args.poly.display().to_string(),
            "two_k": args.two_k,
            "a_max": a_max,
            "samples": args.samples,
            "seed": args.seed,
            "eps": args.eps,
        },
        "two_k": report.two_k,
        "central": to_value(&report.central),
        "shells": to_value(&report.shells),
        "slope": report.fit.slope,
        "classification": to_value(&report.fit.classification),
        "theta_estimate": report.theta_estimate,
        "certified": to_value(&report.certified),
        "agreement_with_bounds": to_value(&report.agreement),
    });
    let mut text = String::new();
    let _ = writeln!(text, "seed: {}", args.seed);
    let _ = writeln!(
        text,
        "central box [-{a}, {a}]^N: mass {m:.6e} (stderr {se:.2e}, {s} samples)",
        a = report.central.a_hi,
        m = report.central.mass,
        se = report.central.std_error,
        s = report.central.samples
    );
    for shell in &report.shells {
        let _ = writeln!(
            text,
            "shell [{lo}, {hi}): mass {m:.6e} (stderr {se:.2e}, {s} samples)",
            lo = shell.a_lo,
            hi = shell.a_hi,
            m = shell.mass,
            se = shell.std_error,
            s = shell.samples
        );
    }
    let _ = writeln!(text, "slope: {:?}", report.fit.slope);
    let _ = writeln!(text, "classification: {:?}", report.fit.classification);
    let _ = writeln!(text, "theta estimate: {:?}", report.theta_estimate);
    let _ = writeln!(
        text,
        "certified: {:?} via {:?}",
        report.certified.kind, report.certified.theorems
    );
    let _ = writeln!(text, "agreement with bounds: {:?}", report.agreement);
    render(format, &doc, text, code)
}

fn run_verify(args: &VerifyArgs, format: Format) -> Outcome {
    let mut checks: Vec<Value> = Vec::new();
    let mut texts: Vec<String> = Vec::new();
    let mut all_pass = true;
    let mut any = false;

    let shape = match &args.poly {
        Some(path) => match load_shape(path) {
            Ok(p) => Some(p),
            Err(msg) => return input_error(format, &msg),
        },
        None => None,
    };

    if args.prop3 {
        any = true;
        let Some(p) = &shape else {
            return input_error(format, "--prop3 requires --poly");
        };
        match structure::prop3_rank_check(p, args.trials, args.seed) {
            Ok(rep) => {
                let pass = rep.fraction >= 0.99;
                all_pass &= pass;
                checks.push(json!({
                    "check": "prop3",
                    "trials": rep.trials,
                    "passes": rep.passes,
                    "fraction": rep.fraction,
                    "n": rep.n,
                    "q": rep.q,
                    "pass": pass,
                }));
                texts.push(format!(
                    "prop3: {}/{} full-rank samples (fraction {:.4}) -> {}",
                    rep.passes,
                    rep.trials,
                    rep.fraction,
                    if pass { "pass" } else { "FAIL" }
                ));
            }
            Err(e) => return input_error(format, &e.to_string()),
        }
    }

    if let Some(nm) = &args.lemma1 {
        any = true;
        match lemmas::verify_lemma1(nm[0], nm[1]) {
            Ok(rep) => {
                all_pass &= rep.pass;
                texts.push(format!(
                    "lemma1 (n = {}, m = {}): structure {:?} -> {}",
                    rep.n,
                    rep.m,
                    rep.structure,
                    if rep.pass { "pass" } else { "FAIL" }
                ));
                checks.push(json!({
                    "check": "lemma1",
                    "n": rep.n,
                    "m": rep.m,
                    "rows": rep.rows,
                    "structure": rep.structure,
                    "blocks": to_value(&rep.blocks),
                    "pass": rep.pass,
                }));
            }
            Err(e) => return input_error(format, &e.to_string()),
        }
    }

    if args.lemma2 {
        any = true;
        let Some(exps) = &args.exponents else {
            return input_error(format, "--lemma2 requires --exponents");
        };
        let kvec = match ExponentVector::new(exps.clone()) {
            Ok(v) => v,
            Err(e) => return input_error(format, &e.to_string()),
        };
        match lemmas::verify_lemma2(&kvec, args.trials, args.seed, args.delta) {
            Ok(rep) => {
                all_pass &= rep.pass;
                texts.push(format!(
                    "lemma2 {:?}: max relative error {:.3e}, sign exact {} -> {}",
                    rep.exponents,
                    rep.max_relative_error,
                    rep.sign_exact,
                    if rep.pass { "pass" } else { "FAIL" }
                ));
                checks.push(json!({
                    "check": "lemma2",
                    "exponents": rep.exponents,
                    "trials": rep.trials,
                    "max_rel_err": rep.max_relative_error,
                    "closed_form_factor": rep.closed_form_factor,
                    "sign_exact": rep.sign_exact,
                    "pass": rep.pass,
                }));
            }
            Err(e) => return input_error(format, &e.to_string()),
        }
    }

    if args.singular {
        any = true;
        let Some(p) = &shape else {
            return input_error(format, "--singular requires --poly");
        };
        match structure::singular_fraction(
            p,
            args.k,
            args.lambda,
            args.trials,
            args.seed,
            args.delta,
        ) {
            Ok(rep) => {
                let pass = rep.fraction >= 0.99 || rep.lambda.is_infinite();
                all_pass &= pass;
                texts.push(format!(
                    "singular (lambda = {:e}): {}/{} inside the regular region (fraction {:.4}) -> {}",
                    rep.lambda,
                    rep.in_d_lambda,
                    rep.trials,
                    rep.fraction,
                    if pass { "pass" } else { "FAIL" }
                ));
                checks.push(json!({
                    "check": "singular",
                    "lambda": rep.lambda,
                    "trials": rep.trials,
                    "passes": rep.in_d_lambda,
                    "fraction": rep.fraction,
                    "levels": rep.levels,
                    "delta": rep.delta,
                    "pass": pass,
                }));
            }
            Err(e) => return input_error(format, &e.to_string()),
        }
    }

    if !any {
        return input_error(
            format,
            "verify needs at least one of --prop3, --lemma1, --lemma2, --singular",
        );
    }

    let doc = json!({
        "schema": SCHEMA,
        "command": "verify",
        "seed": args.seed,
        "config": {
            "poly": args.poly.as_ref().map(|p| p.display().to_string()),
            "trials": args.trials,
            "seed": args.seed,
            "lambda": args.lambda,
            "delta": args.delta,
            "k": args.k,
        },
        "checks": checks,
        "pass": all_pass,
    });
    let mut text = String::new();
    let _ = writeln!(text, "seed: {}", args.seed);
    for t in texts {
        let _ = writeln!(text, "{t}");
    }
    let _ = writeln!(text, "overall: {}", if all_pass { "pass" } else { "FAIL" });
    render(
        format,
        &doc,
        text,
        if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    )
}
