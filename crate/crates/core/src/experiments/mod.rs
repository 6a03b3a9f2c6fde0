//! Data ingestion and the command implementations behind the CLI.

pub mod data;
pub mod eval;
pub mod fit_cmd;
pub mod simulate;
pub mod uefa;

pub use data::{load_csv, parse_csv, resolve, uefa, Dataset};
pub use eval::{cmd_eval, EvalFunction, EvalRequest};
pub use fit_cmd::{cmd_fit, FitReport, NamedValues};
pub use simulate::{cmd_simulate, worker_count, ParamSummary, SampleSizeSummary, SimulationReport, FAILURE_BUDGET, THREADS_ENV};
pub use uefa::{cmd_reproduce_uefa, Check, Tolerance, UefaReport};
