//! `frobkit`: verification reports for rational Landau-Ginzburg Frobenius manifolds.

mod output;
mod parse;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobkit::canonical::{canonical_frame, LameChoice};
use frobkit::eulertop::{integrate_rk4, EulerTopState};
use frobkit::painleve::{pvi_residual, sample_exact, HitchinKind};
use frobkit::{Error, LabeledValue, Model, VerificationReport, C64};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "frobkit", version, about = "Residual checks for Frobenius manifolds of rational potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// nm11, nm02 or custom:n,m
    #[arg(long, default_value = "nm11")]
    model: String,
    /// Comma-separated coordinates, each `re` or `re:im`
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Overrides the tolerance of every reported check
    #[arg(long)]
    tol: Option<f64>,
    /// Write output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for random evaluation points
    #[arg(long)]
    seed: Option<u64>,
    /// Search the six index relabelings where the labeling is implicit
    #[arg(long, default_value = "on", value_name = "on|off", action = clap::ArgAction::Set, value_parser = parse::on_off)]
    perm_search: bool,
    /// json (default) or csv; sweeps default to csv
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full identity suite at a point (or at --random N seeded points)
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "N")]
        random: Option<usize>,
    },
    /// Dump the canonical frame at a point
    Frame {
        #[command(flatten)]
        common: Common,
    },
    /// Verify suite over a grid in one coordinate; CSV by default
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Coordinate label (x1, x2, ...) or 1-based index
        #[arg(long)]
        param: String,
        /// start:end:count
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
    /// Painlevé VI residual scan along a polygon solution
    Pvi {
        #[command(flatten)]
        common: Common,
        /// k3, k6, k3-omega or k6-omega
        #[arg(long, default_value = "k3")]
        solution: String,
        /// start:end:count of the solution parameter
        #[arg(long, default_value = "1.5:3.0:50", allow_hyphen_values = true)]
        x_range: String,
    },
    /// Tau-function checks (nm11)
    Tau {
        #[command(flatten)]
        common: Common,
    },
    /// Euler top: RK4 Casimir drift for --omega, otherwise the model's closed-form curve
    Top {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "2:0.5", allow_hyphen_values = true)]
        s0: String,
        #[arg(long, default_value = "3:0.5", allow_hyphen_values = true)]
        s1: String,
        /// Initial (omega1, omega2, omega3)
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn model_of(c: &Common) -> Result<Model, Failure> {
    c.model.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn point_of(c: &Common, model: &Model) -> Result<Vec<C64>, Failure> {
    match &c.point {
        Some(p) => parse::point(p).map_err(Failure::Usage),
        None => suite::default_point(model)
            .ok_or_else(|| Failure::Usage(format!("model {model} has no default point; pass --point"))),
    }
}

fn finish(c: &Common, reports: Vec<VerificationReport>) -> Outcome {
    let reports: Vec<_> = match c.tol {
        Some(t) => reports.into_iter().map(|r| r.with_tolerance(t)).collect(),
        None => reports,
    };
    let text = match c.format() {
        Format::Json => output::json(&reports),
        Format::Csv => output::reports_csv(&reports)?,
    };
    output::emit(c.out.as_deref(), &text)?;
    Ok(reports.iter().all(|r| r.passed))
}

fn verify(c: &Common, random: Option<usize>) -> Outcome {
    let model = model_of(c)?;
    let mut reports = Vec::new();
    match random {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0));
            for _ in 0..n {
                let x = suite::random_point(&model, &mut rng);
                reports.extend(suite::verify_suite(&model, &x, c.perm_search)?);
            }
        }
        None => reports = suite::verify_suite(&model, &point_of(c, &model)?, c.perm_search)?,
    }
    finish(c, reports)
}

fn frame(c: &Common) -> Outcome {
    let model = model_of(c)?;
    let x = point_of(c, &model)?;
    suite::check_dimension(&model, &x)?;
    if c.format() == Format::Csv {
        return Err(Failure::Usage("frame output is JSON only".into()));
    }
    let f = canonical_frame(&model, &x, LameChoice::Metric)?;
    output::emit(c.out.as_deref(), &output::json(&output::FrameDump::new(&f)))?;
    Ok(true)
}

#[derive(Serialize)]
struct SweepRow {
    param: f64,
    error: Option<String>,
    reports: Vec<VerificationReport>,
}

fn sweep(c: &Common, param: &str, range: &str) -> Outcome {
    let model = model_of(c)?;
    let base = point_of(c, &model)?;
    suite::check_dimension(&model, &base)?;
    let labels = model.coordinate_labels();
    let index = match labels.iter().position(|l| l == param) {
        Some(i) => i,
        None => match param.parse::<usize>() {
            Ok(k) if (1..=labels.len()).contains(&k) => k - 1,
            _ => return Err(Failure::Usage(format!("unknown parameter '{param}'; expected one of {}", labels.join(", ")))),
        },
    };
    let grid = parse::range(range).map_err(Failure::Usage)?;
    let results: Vec<(f64, frobkit::Result<Vec<VerificationReport>>)> = grid
        .par_iter()
        .map(|&v| {
            let mut x = base.clone();
            x[index] = C64::new(v, 0.0);
            let reports = suite::verify_suite(&model, &x, c.perm_search).map(|rs| match c.tol {
                Some(t) => rs.into_iter().map(|r| r.with_tolerance(t)).collect(),
                None => rs,
            });
            (v, reports)
        })
        .collect();
    let mut degenerate = None;
    let mut passed = true;
    let mut rows = Vec::with_capacity(results.len());
    for (v, r) in results {
        match r {
            Ok(rs) => {
                passed &= rs.iter().all(|r| r.passed);
                rows.push((v, Some(rs)));
            }
            Err(e) if e.is_numerical() => {
                degenerate.get_or_insert(e);
                rows.push((v, None));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => output::sweep_csv(&rows)?,
        Format::Json => {
            let json: Vec<SweepRow> = rows
                .into_iter()
                .map(|(param, rs)| SweepRow {
                    param,
                    error: rs.is_none().then(|| "degenerate".to_string()),
                    reports: rs.unwrap_or_default(),
                })
                .collect();
            output::json(&json)
        }
    };
    output::emit(c.out.as_deref(), &text)?;
    match degenerate {
        Some(e) => Err(e.into()),
        None => Ok(passed),
    }
}

#[derive(Serialize)]
struct PviRow {
    x: f64,
    s: [f64; 2],
    y: [f64; 2],
    residual: f64,
}

fn pvi(c: &Common, solution: &str, x_range: &str) -> Outcome {
    let kind: HitchinKind = solution.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let grid = parse::range(x_range).map_err(Failure::Usage)?;
    let mut rows = Vec::new();
    let mut rejected = 0usize;
    let mut first_error = None;
    for &x in &grid {
        let sample = sample_exact(kind, C64::new(x, 0.0)).and_then(|s| pvi_residual(&s).map(|r| (s, r)));
        match sample {
            Ok((s, r)) => rows.push(PviRow {
                x,
                s: [s.s.re, s.s.im],
                y: [s.y.re, s.y.im],
                residual: r.norm(),
            }),
            Err(e) if e.is_numerical() => {
                rejected += 1;
                first_error.get_or_insert(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() {
        return Err(first_error.map(Failure::Core).unwrap_or_else(|| Failure::Usage("empty range".into())));
    }
    let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.residual));
    let tol = c.tol.unwrap_or(1e-8);
    if c.format() == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            w.serialize((r.x, r.s[0], r.s[1], r.y[0], r.y[1], r.residual))?;
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8");
        output::emit(c.out.as_deref(), &format!("x,s_re,s_im,y_re,y_im,residual\n{body}"))?;
        return Ok(worst <= tol);
    }
    let point = vec![
        LabeledValue::new("x-start", C64::new(grid[0], 0.0)),
        LabeledValue::new("x-end", C64::new(grid[grid.len() - 1], 0.0)),
    ];
    let report = VerificationReport::new("pvi-residual", format!("pvi-{kind}"), point, worst, tol)
        .with_meta("samples", rows.len())
        .with_meta("rejected", rejected);
    finish(c, vec![report])
}

fn tau(c: &Common) -> Outcome {
    let model = model_of(c)?;
    let x = point_of(c, &model)?;
    finish(c, suite::tau_suite(&model, &x)?)
}

fn top(c: &Common, s0: &str, s1: &str, omega: Option<&str>, steps: usize) -> Outcome {
    let reports = match omega {
        Some(w) => {
            let w = parse::point(w).map_err(Failure::Usage)?;
            let [w1, w2, w3] = w.as_slice() else {
                return Err(Failure::Usage("--omega takes three values".into()));
            };
            let s0 = parse::complex(s0).map_err(Failure::Usage)?;
            let s1 = parse::complex(s1).map_err(Failure::Usage)?;
            let out = integrate_rk4(&EulerTopState::new(s0, [*w1, *w2, *w3]), s1, steps)?;
            let point = vec![
                LabeledValue::new("s0", s0),
                LabeledValue::new("s1", s1),
                LabeledValue::new("omega1", *w1),
                LabeledValue::new("omega2", *w2),
                LabeledValue::new("omega3", *w3),
            ];
            vec![VerificationReport::new("rk4-casimir-drift", "euler-top", point, out.casimir_drift, 1e-10)
                .with_meta("steps", steps)
                .with_meta("drift_constant", format!("{:e}", out.drift_constant))]
        }
        None => {
            let model = model_of(c)?;
            let x = match model {
                Model::Nm11 => Vec::new(),
                _ => point_of(c, &model)?,
            };
            suite::top_curve_suite(&model, &x, c.perm_search)?
        }
    };
    finish(c, reports)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Verify { common, random } => verify(common, *random),
        Command::Frame { common } => frame(common),
        Command::Sweep { common, param, range } => sweep(common, param, range),
        Command::Pvi {
            common,
            solution,
            x_range,
        } => pvi(common, solution, x_range),
        Command::Tau { common } => tau(common),
        Command::Top {
            common,
            s0,
            s1,
            omega,
            steps,
        } => top(common, s0, s1, omega.as_deref(), *steps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) if e.is_numerical() => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
