use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use moglib::estimation::{gof_marginal, BivariateModel, FitConfig, MarginalModel};
use moglib::experiments::{self, cmd_eval, cmd_fit, cmd_reproduce_uefa, cmd_simulate, EvalFunction, EvalRequest};
use moglib::{BegledParams, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_FIT: u8 = 3;
const EXIT_PIPELINE: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(name = "moglib", version, about = "EGLE and bivariate EGLE lifetime models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FitFlags {
    /// Number of optimizer starts
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refine the simplex optimum with a gradient step
    #[arg(long)]
    polish: bool,
}

impl FitFlags {
    fn config(&self) -> FitConfig {
        FitConfig {
            starts: self.starts,
            seed: self.seed,
            polish: self.polish,
            ..FitConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a bivariate model
    Fit {
        /// CSV path with header x1,x2, or `uefa`
        #[arg(long, default_value = "uefa")]
        data: String,
        /// begled, bglfr or bvge
        #[arg(long, default_value = "begled")]
        model: String,
        /// Pairs with |x1 - x2| <= tol count as ties
        #[arg(long = "tol-tie", default_value_t = 0.0)]
        tol_tie: f64,
        /// Write JSON here instead of stdout
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        flags: FitFlags,
    },
    /// Fit a univariate family to one margin and report A* and W*
    Gof {
        #[arg(long, default_value = "uefa")]
        data: String,
        #[arg(long, default_value_t = 1)]
        margin: usize,
        /// e, ge, glfr, egle or all
        #[arg(long, default_value = "all")]
        model: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        flags: FitFlags,
    },
    /// Run the full UEFA analysis against the published values
    ReproduceUefa {
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        flags: FitFlags,
    },
    /// Monte Carlo recovery study
    Simulate {
        /// alpha a b theta1 theta2 theta3
        #[arg(long, num_args = 6, default_values_t = [1.5, 0.5, 0.7, 0.8, 1.2, 1.3])]
        truth: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [30, 50, 100, 200])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a distribution or reliability function
    Eval(EvalArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Function name, e.g. cdf, joint-pdf, stress-strength, vector-mrl
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// One value for univariate functions, three for bivariate ones
    #[arg(long, num_args = 1..=3, default_values_t = [1.0])]
    theta: Vec<f64>,
    #[arg(long, num_args = 1..)]
    x: Vec<f64>,
    #[arg(long)]
    x1: Option<f64>,
    #[arg(long)]
    x2: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    t2: Option<f64>,
    /// Moment order
    #[arg(long, default_value_t = 1)]
    order: u32,
    #[arg(long, num_args = 1..)]
    prob: Vec<f64>,
    /// Use the printed closed forms for vector-hazard
    #[arg(long)]
    paper_form: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::Data(_) => EXIT_IO,
        Error::Fit(_) | Error::Boundary(_) => EXIT_FIT,
        Error::Study(_) | Error::NonConvergence { .. } | Error::NonFinite(_) => EXIT_PIPELINE,
        _ => EXIT_USAGE,
    }
}

/// Writes `json` to `path` and `table` to stdout, or `json` to stdout and `table` to stderr.
fn emit(json: &str, table: &str, path: Option<&PathBuf>) -> Result<(), Error> {
    match path {
        Some(p) => {
            std::fs::write(p, format!("{json}\n"))?;
            print!("{table}");
        }
        None => {
            println!("{json}");
            eprint!("{table}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Fit {
            data,
            model,
            tol_tie,
            json,
            flags,
        } => {
            let model: BivariateModel = model.parse()?;
            let dataset = experiments::resolve(&data)?;
            let (_, report) = cmd_fit(&dataset, model, tol_tie, &flags.config()).map_err(|e| match e {
                Error::Argument(_) | Error::InvalidParams(_) => e,
                other => Error::Fit(other.to_string()),
            })?;
            emit(&report.to_json(), &report.table(), json.as_ref())?;
            Ok(0)
        }
        Command::Gof {
            data,
            margin,
            model,
            json,
            flags,
        } => {
            if margin != 1 && margin != 2 {
                return Err(Error::Argument(format!("--margin must be 1 or 2, got {margin}")));
            }
            let models: Vec<MarginalModel> = if model.eq_ignore_ascii_case("all") {
                MarginalModel::ALL.to_vec()
            } else {
                vec![model.parse()?]
            };
            let dataset = experiments::resolve(&data)?;
            let xs = dataset.column(margin);
            let mut rows = Vec::new();
            let mut table = String::new();
            for m in models {
                let g = gof_marginal(&xs, m, &flags.config()).map_err(|e| Error::Fit(e.to_string()))?;
                let params: Vec<String> = g.fit.free_params().iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
                table.push_str(&format!(
                    "{:<5} -L={:>10.4} A*={:>8.4} W*={:>8.4}  {}\n",
                    m.name(),
                    g.neg_log_lik,
                    g.a_star,
                    g.w_star,
                    params.join(" ")
                ));
                rows.push(serde_json::json!({
                    "model": m.name(),
                    "params": experiments::NamedValues(
                        g.fit.free_params().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
                    ),
                    "neg_log_lik": g.neg_log_lik,
                    "a_star": g.a_star,
                    "w_star": g.w_star,
                    "converged": g.fit.converged,
                    "clamped": g.clamped,
                }));
            }
            let json_text = serde_json::to_string_pretty(&rows).expect("values serialize");
            emit(&json_text, &table, json.as_ref())?;
            Ok(0)
        }
        Command::ReproduceUefa { json, flags } => {
            let report = cmd_reproduce_uefa(&flags.config());
            let json_text = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&json_text, &report.text(), json.as_ref())?;
            Ok(if report.failure.is_some() { EXIT_PIPELINE } else { 0 })
        }
        Command::Simulate {
            truth,
            n,
            reps,
            seed,
            starts,
            json,
        } => {
            let truth = BegledParams::from_array([truth[0], truth[1], truth[2], truth[3], truth[4], truth[5]])?;
            let cfg = FitConfig {
                starts,
                ..FitConfig::default()
            };
            let report = cmd_simulate(&truth, &n, reps, seed, &cfg)?;
            let json_text = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&json_text, &report.text(), json.as_ref())?;
            Ok(0)
        }
        Command::Eval(args) => {
            let function: EvalFunction = args.function.parse()?;
            let req = EvalRequest {
                alpha: args.alpha,
                a: args.a,
                b: args.b,
                theta: args.theta,
                x: args.x,
                x1: args.x1,
                x2: args.x2,
                t1: args.t1,
                t2: args.t2,
                order: args.order,
                prob: args.prob,
                paper_form: args.paper_form,
            };
            let value = cmd_eval(function, &req)?;
            println!("{value}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
