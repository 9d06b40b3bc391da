//! Command-line front end: weight-constant estimation, maximal-function
//! profiles, Lorentz norms, closed-form bounds, and delta-sweeps.
//!
//! Exit codes: 0 = success and all verdicts pass, 2 = a verdict failed,
//! 1 = execution error.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use weightlab::error::Result;
use weightlab::funcspace::{Interval, PiecewisePower};
use weightlab::lab::{run_sweep, SweepConfig, SweepReport};
use weightlab::lorentz::{lorentz_norm, weak_norm, LorentzParams};
use weightlab::maximal::{maximal_at_in, maximal_profile, GridSpec};
use weightlab::theory::{
    buckley_bound, dual_bound, main_theorem_bound, mixed_bound_lorentz, strong_bound, BoundInputs,
};
use weightlab::weights::{ainfty_fujii_wilson, ap_constant, SearchConfig};

#[derive(Parser)]
#[command(
    name = "weightlab",
    about = "Numerical laboratory for maximal operators, Muckenhoupt constants and weighted Lorentz norms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DomainArgs {
    /// left end of the search/truncation domain
    #[arg(long, default_value_t = -1e4, allow_hyphen_values = true)]
    lo: f64,
    /// right end of the search/truncation domain
    #[arg(long, default_value_t = 1e4)]
    hi: f64,
    /// geometric grid depth
    #[arg(long, default_value_t = 48)]
    levels: u32,
}

impl DomainArgs {
    fn interval(&self) -> Result<Interval> {
        Interval::new(self.lo, self.hi)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Estimate A_p and Fujii-Wilson A_infty constants of a weight.
    /// CSV output: constant,p,value,argmax_lo,argmax_hi,K
    Constants {
        /// weight descriptor file (`lo hi c a` lines)
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Evaluate the uncentered maximal function.
    /// CSV output: x,value
    Maximal {
        /// function descriptor file
        #[arg(long)]
        function: PathBuf,
        /// single evaluation point; omit for a full grid profile
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[command(flatten)]
        domain: DomainArgs,
        /// optional CSV output path (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted Lorentz quasi-norm of a descriptor function.
    /// CSV output: p,q,norm_lo,norm_hi
    Norm {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        p: f64,
        /// secondary exponent; `inf` selects the weak norm
        #[arg(long)]
        q: String,
    },
    /// Evaluate a closed-form bound; prints JSON with inputs and value.
    Bound {
        /// one of: buckley, mixed, main, strong, dual
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "2")]
        q: String,
        /// interpolation exponent for the main theorem
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        apc: f64,
        #[arg(long, default_value_t = 1.0)]
        ainfty_sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        ainfty_w: f64,
        #[arg(long, default_value_t = 1.0)]
        a1_vw: f64,
        #[arg(long, default_value_t = 1.0)]
        a1_w: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        cn: f64,
        /// sublinear-operator constant A
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// weak-type norm placeholder for the main theorem
        #[arg(long, default_value_t = 1.0)]
        weak_norm: f64,
    },
    /// Run a delta-sweep described by a JSON config.
    Sweep {
        /// JSON config: {family,p,q,deltas[],domain:{lo,hi},grid_levels,cn,tolerance}
        #[arg(long)]
        config: PathBuf,
        /// persistence root for the JSON/CSV artifacts
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a previously persisted sweep report.
    Report {
        /// path to a sweep JSON record
        #[arg(long)]
        input: PathBuf,
    },
}

fn read_function(path: &PathBuf) -> Result<PiecewisePower> {
    let text = std::fs::read_to_string(path)?;
    PiecewisePower::from_descriptor(&text)
}

fn parse_q(q: &str) -> Result<f64> {
    if q.eq_ignore_ascii_case("inf") || q.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    q.parse::<f64>()
        .map_err(|e| weightlab::error::Error::Parse(format!("bad q {q:?}: {e}")))
}

/// true = all verdicts pass, false = a verdict failed
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Constants { weight, p, domain } => {
            let w = read_function(&weight)?;
            let cfg = SearchConfig::new(domain.interval()?).with_levels(domain.levels);
            let ap = ap_constant(&w, p, &cfg)?;
            let ai_w = ainfty_fujii_wilson(&w, &cfg)?;
            let sigma = w.power(1.0 - p / (p - 1.0))?;
            let ai_s = ainfty_fujii_wilson(&sigma, &cfg)?;
            println!("constant,p,value,argmax_lo,argmax_hi,K");
            for (name, est) in [("ap", &ap), ("ainfty_w", &ai_w), ("ainfty_sigma", &ai_s)] {
                println!(
                    "{name},{p},{},{},{},{}",
                    est.value, est.argmax.0, est.argmax.1, domain.levels
                );
            }
            Ok(true)
        }
        Command::Maximal { function, x, domain, out } => {
            let f = read_function(&function)?;
            let iv = domain.interval()?;
            let mut csv = String::from("x,value\n");
            if let Some(x) = x {
                csv.push_str(&format!("{x},{}\n", maximal_at_in(&f, x, &iv)?));
            } else {
                let grid = GridSpec::new(iv, domain.levels);
                let profile = maximal_profile(&f, &grid)?;
                for (x, v) in profile.nodes.iter().zip(&profile.values) {
                    csv.push_str(&format!("{x},{v}\n"));
                }
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Command::Norm { function, weight, p, q } => {
            let f = read_function(&function)?;
            let w = read_function(&weight)?;
            let q = parse_q(&q)?;
            let value = if q.is_infinite() {
                weak_norm(&f, &w, p)?
            } else {
                lorentz_norm(&f, &w, &LorentzParams::new(p, q)?)?
            };
            println!("p,q,norm_lo,norm_hi");
            println!("{p},{q},{value},{value}");
            Ok(true)
        }
        Command::Bound {
            formula,
            p,
            q,
            r,
            apc,
            ainfty_sigma,
            ainfty_w,
            a1_vw,
            a1_w,
            n,
            cn,
            a,
            weak_norm,
        } => {
            let q = parse_q(&q)?;
            let inputs = BoundInputs::new(p, q)?
                .with_apc(apc)
                .with_ainfty_sigma(ainfty_sigma)
                .with_ainfty_w(ainfty_w)
                .with_a1(a1_vw, a1_w)
                .with_dimension(n)
                .with_cn(cn)
                .with_operator_constant(a);
            let value = match formula.as_str() {
                "buckley" => buckley_bound(p, apc)?,
                "mixed" => mixed_bound_lorentz(&inputs)?,
                "main" => {
                    let r = r.ok_or_else(|| {
                        weightlab::error::Error::Unsupported("main bound needs --r".into())
                    })?;
                    main_theorem_bound(p, q, r, a, weak_norm)?
                }
                "strong" => strong_bound(&inputs)?,
                "dual" => dual_bound(&inputs)?,
                other => {
                    return Err(weightlab::error::Error::Unsupported(format!(
                        "unknown formula {other:?} (expected buckley|mixed|main|strong|dual)"
                    )))
                }
            };
            let record = json!({
                "formula": formula,
                "inputs": {
                    "p": p, "q": q, "r": r, "apc": apc,
                    "ainfty_sigma": ainfty_sigma, "ainfty_w": ainfty_w,
                    "a1_vw": a1_vw, "a1_w": a1_w, "n": n, "cn": cn, "a": a,
                    "weak_norm": weak_norm,
                },
                "value": value,
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
            Ok(true)
        }
        Command::Sweep { config, out } => {
            let cfg = SweepConfig::from_json_file(&config)?;
            let report = run_sweep(&cfg)?;
            if let Some(dir) = out {
                let (jp, cp) = report.persist(&dir)?;
                eprintln!("wrote {} and {}", jp.display(), cp.display());
            }
            print!("{}", report.summary());
            Ok(report.verdict)
        }
        Command::Report { input } => {
            let report = SweepReport::from_json_file(&input)?;
            print!("{}", report.summary());
            Ok(report.verdict)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
