//! Command-line front end: parse a rational-map expression, classify the
//! composition operator it induces, and cross-check with the quadrature
//! oracle. Reports go to stdout (JSON with `--json`), diagnostics to
//! stderr.

mod expr;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use halfplane_iso_core::classify::{classify, NagyBound, Verdict, Witness};
use halfplane_iso_core::conformal::{
    boundary_unimodular_measure, conjugate_symbol, is_finite_blaschke, is_inner_halfplane,
    weight, InnerTest,
};
use halfplane_iso_core::oracle::{
    default_battery, equivalence_residual, measure_preservation_check, nagy_probe, OracleReport,
    QuadratureSettings, TestFunction,
};
use halfplane_iso_core::ratfunc::{PointValue, RationalMap};
use halfplane_iso_core::{Config, Error as CoreError};

use expr::{lower, parse_expr, print_map, LowerError};
use report::{to_json, Envelope, SettingsEcho};

const EXIT_OK: u8 = 0;
const EXIT_INVALID_SYMBOL: u8 = 2;
const EXIT_INPUT_ERROR: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "halfplane-iso",
    version,
    about = "Classify rational composition operators on Hardy spaces of the upper half-plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the JSON report envelope instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Omit wall-time so identical invocations emit identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Path to a key=value config file overriding the default tolerances.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the composition operator is (similar to) an isometry.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Override the realness/classification tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Residuals of the invariant-integral identity over a test battery.
    OracleMeasure {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "standard")]
        battery: String,
    },
    /// Norm-orbit table against the two-sided power bound [1/k, k].
    OracleNagy {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "standard")]
        battery: String,
    },
    /// Residual of the unitary transfer to the disc-side weighted operator.
    OracleEquiv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "standard")]
        battery: String,
    },
    /// Print the disc-side symbol and transfer weight at sample points.
    Transfer {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Disc-side innerness: finite-Blaschke test and boundary measure.
    Blaschke {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

fn battery_by_name(name: &str) -> Result<Vec<TestFunction>, String> {
    match name {
        "standard" => Ok(default_battery()),
        "poisson" => Ok(vec![
            TestFunction::Poisson { a: 0.0, b: 1.0 },
            TestFunction::Poisson { a: 2.0, b: 0.5 },
            TestFunction::Poisson { a: -1.0, b: 2.0 },
        ]),
        "kernels" => Ok(vec![
            TestFunction::HpKernel { w: Complex64::new(0.0, 1.0), m: 1 },
            TestFunction::HpKernel { w: Complex64::new(1.0, 2.0), m: 2 },
            TestFunction::HpKernel { w: Complex64::new(-2.0, 0.5), m: 2 },
        ]),
        "gaussian" => Ok(vec![
            TestFunction::Gaussian { a: 0.0, sigma: 1.0 },
            TestFunction::Gaussian { a: 1.0, sigma: 0.5 },
        ]),
        other => Err(format!(
            "unknown battery `{other}` (expected standard, poisson, kernels, or gaussian)"
        )),
    }
}

fn core_exit(e: &CoreError) -> u8 {
    match e {
        CoreError::DegreeCap { .. }
        | CoreError::ZeroDenominator
        | CoreError::Precondition { .. }
        | CoreError::Config { .. } => EXIT_INPUT_ERROR,
        _ => EXIT_NUMERICAL,
    }
}

struct Ctx {
    cfg: Config,
    json: bool,
    deterministic: bool,
    started: Instant,
}

impl Ctx {
    #[allow(clippy::too_many_arguments)]
    fn emit<T: Serialize>(
        &self,
        command: &str,
        expression: &str,
        map: Option<&RationalMap>,
        mut settings: SettingsEcho,
        fill: impl FnOnce(&mut SettingsEcho),
        result: T,
        human: String,
        code: u8,
    ) -> u8 {
        fill(&mut settings);
        if self.json {
            let envelope = Envelope {
                tool_version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                input_expression: expression.to_string(),
                parsed_num: map.map(|r| r.num().coeffs().to_vec()).unwrap_or_default(),
                parsed_den: map.map(|r| r.den().coeffs().to_vec()).unwrap_or_default(),
                settings,
                result,
                wall_time_ms: (!self.deterministic)
                    .then(|| self.started.elapsed().as_secs_f64() * 1e3),
            };
            println!("{}", to_json(&envelope));
        } else {
            println!("{human}");
        }
        code
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

fn parse_and_lower(text: &str, cfg: &Config) -> Result<RationalMap, (u8, String)> {
    let ast = parse_expr(text).map_err(|e| (EXIT_INPUT_ERROR, format!("parse error {e}")))?;
    lower(&ast, cfg).map_err(|e| match e {
        LowerError::DivisionByZeroMap => (EXIT_INPUT_ERROR, e.to_string()),
        LowerError::Core(ref core) => (core_exit(core), e.to_string()),
    })
}

#[derive(Serialize)]
struct MeasureResult {
    inner: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    not_inner_probe: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    not_inner_imag: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

#[derive(Serialize)]
struct EquivResult {
    self_map: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

#[derive(Serialize)]
struct WeightSample {
    z: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<Complex64>,
}

#[derive(Serialize)]
struct TransferResult {
    disc_symbol_num: Vec<Complex64>,
    disc_symbol_den: Vec<Complex64>,
    weight_samples: Vec<WeightSample>,
}

#[derive(Serialize)]
struct BlaschkeResult {
    is_blaschke: bool,
    coeff_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_pole_modulus: Option<f64>,
    boundary_unimodular_measure: f64,
}

fn run() -> u8 {
    // Argument errors belong to the input-error exit code; help and
    // version keep clap's conventional success exit.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            return EXIT_INPUT_ERROR;
        }
    };

    let mut cfg = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match Config::from_kv_text(&text) {
                Ok(cfg) => cfg,
                Err(e) => return fail(EXIT_INPUT_ERROR, e),
            },
            Err(e) => return fail(EXIT_INPUT_ERROR, format!("cannot read config: {e}")),
        },
        None => Config::default(),
    };
    if let Err(e) = cfg.apply_env() {
        return fail(EXIT_INPUT_ERROR, e);
    }

    let quad = QuadratureSettings::default();
    let ctx = Ctx {
        cfg: cfg.clone(),
        json: cli.json,
        deterministic: cli.deterministic,
        started: Instant::now(),
    };
    let echo = SettingsEcho::new(&ctx.cfg, ctx.deterministic);

    match &cli.command {
        Command::Classify { expr, p, tol } => {
            let mut cfg = ctx.cfg.clone();
            if let Some(t) = tol {
                cfg.tau_real = *t;
            }
            let r = match parse_and_lower(expr, &cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let report = match classify(&r, *p, &cfg) {
                Ok(rep) => rep,
                Err(e) => return fail(core_exit(&e), e),
            };
            let code = if report.verdict == Verdict::InvalidSymbol {
                EXIT_INVALID_SYMBOL
            } else {
                EXIT_OK
            };
            let human = format_classification(&r, &report);
            let p = *p;
            ctx.emit(
                "classify",
                expr,
                Some(&r),
                echo,
                |s| s.p = Some(p),
                report,
                human,
                code,
            )
        }
        Command::OracleMeasure { expr, battery } => {
            let r = match parse_and_lower(expr, &ctx.cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let fs = match battery_by_name(battery) {
                Ok(fs) => fs,
                Err(msg) => return fail(EXIT_INPUT_ERROR, msg),
            };
            match is_inner_halfplane(&r, ctx.cfg.tau_real) {
                InnerTest::Inner { realified } => {
                    let oracle = match measure_preservation_check(&realified, &fs, &quad, &ctx.cfg)
                    {
                        Ok(rep) => rep,
                        Err(e) => return fail(core_exit(&e), e),
                    };
                    let human = format!(
                        "inner symbol; max invariant-integral residual = {:.3e}",
                        oracle.max_residual.unwrap_or(0.0)
                    );
                    let battery = battery.clone();
                    ctx.emit(
                        "oracle-measure",
                        expr,
                        Some(&r),
                        echo,
                        |s| s.battery = Some(battery),
                        MeasureResult {
                            inner: true,
                            not_inner_probe: None,
                            not_inner_imag: None,
                            oracle: Some(oracle),
                        },
                        human,
                        EXIT_OK,
                    )
                }
                InnerTest::NotInner { probe, imag } => {
                    let human = format!(
                        "symbol is not inner: Im r({probe}) = {imag}; \
                         invariant integrals are not defined"
                    );
                    let battery = battery.clone();
                    ctx.emit(
                        "oracle-measure",
                        expr,
                        Some(&r),
                        echo,
                        |s| s.battery = Some(battery),
                        MeasureResult {
                            inner: false,
                            not_inner_probe: Some(probe),
                            not_inner_imag: Some(imag),
                            oracle: None,
                        },
                        human,
                        EXIT_INVALID_SYMBOL,
                    )
                }
            }
        }
        Command::OracleNagy { expr, n, k, p, battery } => {
            let r = match parse_and_lower(expr, &ctx.cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let fs = match battery_by_name(battery) {
                Ok(fs) => fs,
                Err(msg) => return fail(EXIT_INPUT_ERROR, msg),
            };
            let bound = match NagyBound::new(*k) {
                Ok(b) => b,
                Err(e) => return fail(EXIT_INPUT_ERROR, e),
            };
            let oracle = match nagy_probe(&r, *p, &fs, *n, bound, &quad, &ctx.cfg) {
                Ok(rep) => rep,
                Err(e) => return fail(core_exit(&e), e),
            };
            let assessment = oracle.nagy.as_ref().expect("probe fills assessment");
            let human = format!(
                "power-bound probe ({}): {} over n ≤ {n}, k = {k}",
                assessment.evidence,
                if assessment.pass { "PASS" } else { "FAIL" },
            );
            let (p, n, k) = (*p, *n, *k);
            let battery = battery.clone();
            ctx.emit(
                "oracle-nagy",
                expr,
                Some(&r),
                echo,
                |s| {
                    s.p = Some(p);
                    s.n = Some(n);
                    s.k = Some(k);
                    s.battery = Some(battery);
                },
                oracle,
                human,
                EXIT_OK,
            )
        }
        Command::OracleEquiv { expr, p, battery } => {
            let r = match parse_and_lower(expr, &ctx.cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let fs = match battery_by_name(battery) {
                Ok(fs) => fs,
                Err(msg) => return fail(EXIT_INPUT_ERROR, msg),
            };
            let self_check = match halfplane_iso_core::classify::is_self_map(&r, &ctx.cfg) {
                Ok(c) => c,
                Err(e) => return fail(core_exit(&e), e),
            };
            if !self_check.is_self_map {
                let human = "symbol is not a self-map of the upper half-plane".to_string();
                let p = *p;
                return ctx.emit(
                    "oracle-equiv",
                    expr,
                    Some(&r),
                    echo,
                    |s| s.p = Some(p),
                    EquivResult {
                        self_map: false,
                        witness: self_check.witness,
                        oracle: None,
                    },
                    human,
                    EXIT_INVALID_SYMBOL,
                );
            }
            let oracle = match equivalence_residual(&r, *p, &fs, &quad, &ctx.cfg) {
                Ok(rep) => rep,
                Err(e) => return fail(core_exit(&e), e),
            };
            let human = format!(
                "max transfer residual = {:.3e}",
                oracle.max_residual.unwrap_or(0.0)
            );
            let p = *p;
            let battery = battery.clone();
            ctx.emit(
                "oracle-equiv",
                expr,
                Some(&r),
                echo,
                |s| {
                    s.p = Some(p);
                    s.battery = Some(battery);
                },
                EquivResult {
                    self_map: true,
                    witness: None,
                    oracle: Some(oracle),
                },
                human,
                EXIT_OK,
            )
        }
        Command::Transfer { expr, p } => {
            let r = match parse_and_lower(expr, &ctx.cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let disc = match conjugate_symbol(&r, &ctx.cfg) {
                Ok(d) => d,
                Err(e) => return fail(core_exit(&e), e),
            };
            let sample_points = [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.4, 0.0),
                Complex64::new(-0.4, 0.0),
                Complex64::new(0.0, 0.4),
                Complex64::new(0.0, -0.4),
                Complex64::new(0.5, 0.3),
                Complex64::new(-0.3, -0.5),
            ];
            let weight_samples: Vec<WeightSample> = sample_points
                .iter()
                .map(|&z| WeightSample {
                    z,
                    weight: match weight(&disc, *p, z) {
                        PointValue::Finite(w) => Some(w),
                        PointValue::Infinite => None,
                    },
                })
                .collect();
            let human = format!(
                "disc symbol: {}\nweight at 0: {:?}",
                print_map(&disc),
                weight_samples[0].weight
            );
            let result = TransferResult {
                disc_symbol_num: disc.num().coeffs().to_vec(),
                disc_symbol_den: disc.den().coeffs().to_vec(),
                weight_samples,
            };
            let p = *p;
            ctx.emit(
                "transfer",
                expr,
                Some(&r),
                echo,
                |s| s.p = Some(p),
                result,
                human,
                EXIT_OK,
            )
        }
        Command::Blaschke { expr } => {
            let phi = match parse_and_lower(expr, &ctx.cfg) {
                Ok(r) => r,
                Err((code, msg)) => return fail(code, msg),
            };
            let test = match is_finite_blaschke(&phi, ctx.cfg.tau_boundary, &ctx.cfg) {
                Ok(t) => t,
                Err(e) => return fail(core_exit(&e), e),
            };
            let measure = boundary_unimodular_measure(&phi, 4096, ctx.cfg.tau_boundary);
            let human = format!(
                "finite Blaschke product: {}; coefficient residual {:.3e}; \
                 boundary unimodular measure {:.6}",
                test.is_blaschke, test.coeff_residual, measure
            );
            ctx.emit(
                "blaschke",
                expr,
                Some(&phi),
                echo,
                |_| {},
                BlaschkeResult {
                    is_blaschke: test.is_blaschke,
                    coeff_residual: test.coeff_residual,
                    min_pole_modulus: test.min_pole_modulus,
                    boundary_unimodular_measure: measure,
                },
                human,
                EXIT_OK,
            )
        }
    }
}

fn format_classification(
    r: &RationalMap,
    report: &halfplane_iso_core::classify::ClassificationReport,
) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "symbol: {}", print_map(r));
    let _ = writeln!(out, "verdict: {:?}", report.verdict);
    let _ = writeln!(
        out,
        "inner: {}, self-map: {}, slope: {:?}",
        report.inner, report.self_map, report.slope
    );
    if let Some(cond) = &report.failed_condition {
        let _ = writeln!(out, "failed condition: {cond}");
    }
    if let Some(cert) = &report.certificate {
        let _ = writeln!(
            out,
            "certificate: sign {:+}, alpha {}, {} pole term(s), all residues negative",
            cert.sign,
            cert.alpha,
            cert.terms.len()
        );
    }
    if let Some(witness) = &report.witness {
        match witness {
            Witness::Point { z, im_r } => {
                let _ = writeln!(out, "witness: z = {z} with Im r(z) = {im_r}");
            }
            Witness::Reason { code } => {
                let _ = writeln!(out, "witness reason: {code}");
            }
        }
    }
    let _ = write!(out, "norm on H^p: {:?}", report.norm_p);
    out
}

fn main() -> ExitCode {
    ExitCode::from(run())
}
