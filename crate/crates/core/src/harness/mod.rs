//! Built-in examples, convergence studies and run manifests.

mod convergence;
mod examples;
mod table;

use serde::{Deserialize, Serialize};

use crate::measures::GridSpec;
use crate::stepper::{Diagnostics, SchemeConfig};

pub use convergence::{
    doubling_levels, exact_reference, run_convergence, run_convergence_with, run_level,
    ConvergenceOptions, ConvergenceRow, SelfComparison,
};
pub use examples::{
    all_examples, example1, example2, example3, example4, example_by_name, example_names,
    ExactDensityFn, ExactIntegralFn, ExactSolution, ExampleDef, ExampleInfo,
};
pub use table::{emit_table, format_error, format_order, read_table, TableFormat};

/// JSON record written next to every run's output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub problem: String,
    pub x_max: f64,
    pub cells: usize,
    pub dx: f64,
    pub steps: usize,
    pub config: SchemeConfig,
    pub cfl_bound: f64,
    pub min_mass: f64,
    pub first_moment_drift: f64,
    pub wall_time_seconds: f64,
    pub notes: Vec<String>,
    pub diagnostics: Diagnostics,
}

impl RunManifest {
    pub fn new(
        problem: impl Into<String>,
        grid: &GridSpec,
        config: &SchemeConfig,
        diagnostics: Diagnostics,
        wall_time_seconds: f64,
        notes: Vec<String>,
    ) -> Self {
        Self {
            problem: problem.into(),
            x_max: grid.x_max(),
            cells: grid.cells(),
            dx: grid.dx(),
            steps: diagnostics.steps,
            config: config.clone(),
            cfl_bound: diagnostics.cfl_bound,
            min_mass: diagnostics.min_mass,
            first_moment_drift: diagnostics.first_moment_drift,
            wall_time_seconds,
            notes,
            diagnostics,
        }
    }
}
