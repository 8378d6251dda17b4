//! `nf`: convergence studies for projection discretizations of the neural
//! field equation.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nfield::harness::{
    emit_csv, emit_euler_csv, euler_split_study, parse_f64_list, parse_n_values, parse_problems,
    run_study, run_suite, summarize_orders, write_csv, write_euler_csv, EulerSplitConfig,
    SchemeChoice, Stepper, StudyConfig, Suite, Variant,
};
use nfield::problems::ProblemId;
use nfield::schemes::SchemeKind;
use nfield::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "nf", version, about = "Neural field projection-method convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one problem and report its C(J,X) error for each n.
    Run {
        #[arg(long)]
        problem: ProblemId,
        #[command(flatten)]
        study: StudyArgs,
    },
    /// Convergence table over several problems and n values.
    Converge {
        /// Comma-separated problem ids, e.g. P1,P2,P3.
        #[arg(long)]
        problems: String,
        #[command(flatten)]
        study: StudyArgs,
    },
    /// Forward-Euler temporal/spatial error split.
    Euler {
        #[arg(long)]
        problem: ProblemId,
        /// Fixed fine n for the temporal sweep.
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Comma-separated Euler step sizes.
        #[arg(long, default_value = "0.02,0.01,0.005,0.0025")]
        ht: String,
        /// n values for the spatial sweep.
        #[arg(long, default_value = "16,32,64")]
        spatial_n: String,
        /// Euler step for the spatial sweep.
        #[arg(long, default_value_t = 1e-4)]
        spatial_ht: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 2048)]
        eval_points: usize,
        #[arg(long, default_value_t = 51)]
        checkpoints: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite; exits non-zero on any failure.
    Check {
        /// quadrature, projection, timestep, residual, sandwich or unit.
        #[arg(long)]
        suite: Suite,
    },
}

#[derive(Args, Debug)]
struct StudyArgs {
    /// fe-collocation, cheb-collocation, fe-galerkin or spectral-galerkin.
    #[arg(long)]
    scheme: SchemeKind,
    /// Quadrature for cheb-collocation: trapezium, cc or reference.
    #[arg(long)]
    quadrature: Option<Variant>,
    /// Variant for fe-galerkin: lumped or gauss2.
    #[arg(long)]
    variant: Option<Variant>,
    /// Comma-separated, strictly increasing discretization sizes.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    horizon: f64,
    /// rk54 or euler.
    #[arg(long, default_value = "rk54")]
    stepper: String,
    #[arg(long, default_value_t = 1e-6)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-9)]
    atol: f64,
    /// Euler step size, required with --stepper euler.
    #[arg(long)]
    ht: Option<f64>,
    #[arg(long, default_value_t = 2048)]
    eval_points: usize,
    #[arg(long, default_value_t = 51)]
    checkpoints: usize,
    /// Reserved; every run is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl StudyArgs {
    fn config(&self, problems: Vec<ProblemId>) -> Result<StudyConfig, Error> {
        let variant = match (self.quadrature, self.variant) {
            (Some(q), Some(v)) if q != v => {
                return Err(Error::InvalidArgument(
                    "--quadrature and --variant disagree".into(),
                ))
            }
            (q, v) => q.or(v),
        };
        let scheme = SchemeChoice::new(self.scheme, variant)?;
        let stepper = match self.stepper.to_ascii_lowercase().as_str() {
            "rk54" => Stepper::rk54(self.rtol, self.atol),
            "euler" => Stepper::Euler {
                step: self.ht.ok_or_else(|| {
                    Error::InvalidArgument("--stepper euler needs --ht".into())
                })?,
            },
            other => return Err(Error::Parse(format!("unknown stepper '{other}'"))),
        };
        let mut cfg = StudyConfig::new(problems, scheme, parse_n_values(&self.n)?);
        cfg.t0 = self.t0;
        cfg.horizon = self.horizon;
        cfg.stepper = stepper;
        cfg.eval_points = self.eval_points;
        cfg.checkpoints = self.checkpoints;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn study(cfg: &StudyConfig, out: Option<&PathBuf>) -> Result<(), Error> {
    let records = run_study(cfg)?;
    match out {
        Some(path) => emit_csv(&records, path)?,
        None => write_csv(&records, io::stdout().lock()).map_err(|source| Error::Csv {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if records.len() > 1 {
        for s in summarize_orders(cfg, &records)? {
            let order = s.order.map_or("n/a".to_string(), |p| format!("{p:.3}"));
            eprintln!(
                "{}: fitted order {order} over {} points above 10x floor {:.2e}",
                s.problem, s.points_used, s.floor
            );
        }
    }
    Ok(())
}

fn check(suite: Suite) -> Result<bool, Error> {
    let report = run_suite(suite);
    let mut stdout = io::stdout().lock();
    for c in &report.checks {
        let line = format!(
            "[{}] {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        writeln!(stdout, "{line}").map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        })?;
    }
    Ok(report.pass())
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { problem, study: args } => {
            study(&args.config(vec![problem])?, args.out.as_ref())?;
        }
        Command::Converge {
            problems,
            study: args,
        } => {
            study(&args.config(parse_problems(&problems)?)?, args.out.as_ref())?;
        }
        Command::Euler {
            problem,
            n,
            ht,
            spatial_n,
            spatial_ht,
            t0,
            horizon,
            eval_points,
            checkpoints,
            out,
        } => {
            let mut cfg = EulerSplitConfig::new(problem);
            cfg.n_fixed = n;
            cfg.h_values = parse_f64_list(&ht)?;
            cfg.spatial_n = parse_n_values(&spatial_n)?;
            cfg.spatial_h_t = spatial_ht;
            cfg.t0 = t0;
            cfg.horizon = horizon;
            cfg.eval_points = eval_points;
            cfg.checkpoints = checkpoints;
            let result = euler_split_study(&cfg)?;
            match out {
                Some(path) => emit_euler_csv(&result.records, &path)?,
                None => write_euler_csv(&result.records, io::stdout().lock()).map_err(|source| {
                    Error::Csv {
                        path: "<stdout>".into(),
                        source,
                    }
                })?,
            }
            let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |p| format!("{p:.3}"));
            eprintln!(
                "temporal order {}, spatial order {}",
                fmt(result.temporal_order),
                fmt(result.spatial_order)
            );
            if let Some(fit) = result.fit {
                eprintln!(
                    "fit e = {:.3e} h_t + {:.3e} h_x^2, max relative residual {:.1}%",
                    fit.a,
                    fit.b,
                    100.0 * fit.max_relative_residual
                );
            }
        }
        Command::Check { suite } => {
            if !check(suite)? {
                return Ok(ExitCode::from(EXIT_NUMERICAL));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() {
                EXIT_IO
            } else if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_NUMERICAL
            })
        }
    }
}
