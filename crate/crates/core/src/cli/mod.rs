//! Problem files, query dispatch and rendering for the `tkindex` binary.

pub mod args;
pub mod eval;
pub mod problem;
pub mod run;
pub mod schema;

pub use args::{run_cli, CliOutput};
pub use problem::{load_problem, parse_problem, Problem};
pub use run::{render, run_queries, Answer, Format, QueryOutcome, RunOptions};
