//! Experiment driver: suites, fits and CSV/JSON/SVG output.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{geometric_schedule, ExperimentConfig};
pub use report::{fit_window, local_slopes, FitResult, OutputFormat, Row, SuiteReport};
pub use suites::{
    closed_form_rows, off_locus_point, run_all, run_character_suite, run_decay_suite, run_diag_convergence,
    run_dim_growth, run_gaussian_profile, run_suite, separated_partner, SUITES,
};

use crate::error::{Error, ErrorClass};

/// Exit codes: 0 all pass, 2 numerical failure, 3 precondition failure,
/// 4 configuration error.
pub fn exit_code(outcome: &Result<SuiteReport, Error>) -> i32 {
    match outcome {
        Ok(r) if r.pass => 0,
        Ok(_) => 2,
        Err(e) => match e.class() {
            ErrorClass::Numerical => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Config => 4,
        },
    }
}
