//! Grid-refinement studies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::DiscreteKernels;
use crate::error::{Error, Result};
use crate::measures::{flat_distance, project_initial, GridMeasure, GridSpec};
use crate::stepper::{close_boundary, solve, Limiter, SchemeConfig, Storage, TimeOrder, Variant};

use super::examples::ExampleDef;

/// One line of a convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "Nx")]
    pub nx: usize,
    #[serde(rename = "Nt")]
    pub nt: usize,
    pub error: f64,
    pub order: Option<f64>,
}

/// How successive levels are compared when no exact solution exists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfComparison {
    /// Restrict the finer state onto the coarser grid, then compare.
    #[default]
    Restrict,
    /// Compare the two atomic measures on their own sites.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOptions {
    pub time_order: TimeOrder,
    pub limiter: Limiter,
    pub comparison: SelfComparison,
    /// Run the levels concurrently.
    pub parallel_levels: bool,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self {
            time_order: TimeOrder::Second,
            limiter: Limiter::Standard,
            comparison: SelfComparison::Restrict,
            parallel_levels: true,
        }
    }
}

/// `(Nx, Nt)` doubled `count - 1` times from `base`.
pub fn doubling_levels(base: (usize, usize), count: usize) -> Vec<(usize, usize)> {
    (0..count).map(|k| (base.0 << k, base.1 << k)).collect()
}

fn check_levels(levels: &[(usize, usize)]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Config("no refinement levels given".into()));
    }
    for w in levels.windows(2) {
        if w[1].0 != 2 * w[0].0 || w[1].1 != 2 * w[0].1 {
            return Err(Error::Config(format!(
                "levels must double: {:?} -> {:?}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Final state of `ex` on `nx` cells with `nt` steps.
pub fn run_level(
    ex: &ExampleDef,
    variant: Variant,
    nx: usize,
    nt: usize,
    opts: &ConvergenceOptions,
) -> Result<GridMeasure> {
    let grid = GridSpec::new(ex.x_max, nx)?;
    let mu0 = project_initial(&ex.initial, &grid)?;
    let kernels = DiscreteKernels::build(&ex.spec, &grid)?;
    let config = SchemeConfig::with_steps(variant, nt, ex.t_final)?
        .time_order(opts.time_order)
        .limiter(opts.limiter)
        .cfl_policy(ex.cfl_policy)
        .storage(Storage::FinalOnly);
    let trajectory = solve(&mu0, &ex.spec, &kernels, &config)?;
    Ok(trajectory.final_state().clone())
}

/// Projection of the exact solution at `T`, with the boundary cell closed like the scheme's.
pub fn exact_reference(ex: &ExampleDef, grid: &GridSpec) -> Result<Option<GridMeasure>> {
    let Some(exact) = &ex.exact else {
        return Ok(None);
    };
    let projected = project_initial(&exact.at(ex.t_final), grid)?;
    close_boundary(&ex.spec, grid, projected.into_masses(), ex.t_final).map(Some)
}

fn orders(errors: Vec<(usize, usize, f64)>) -> Vec<ConvergenceRow> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(errors.len());
    for (nx, nt, error) in errors {
        let order = rows.last().map(|prev| (prev.error / error).log2());
        rows.push(ConvergenceRow { nx, nt, error, order });
    }
    rows
}

pub fn run_convergence(
    ex: &ExampleDef,
    variant: Variant,
    levels: &[(usize, usize)],
) -> Result<Vec<ConvergenceRow>> {
    run_convergence_with(ex, variant, levels, &ConvergenceOptions::default())
}

/// Errors and observed orders over doubling levels.
///
/// With an exact solution each level is measured against it. Otherwise each
/// row after the first level holds the distance between that level and the
/// previous one, so `n` levels yield `n - 1` rows.
pub fn run_convergence_with(
    ex: &ExampleDef,
    variant: Variant,
    levels: &[(usize, usize)],
    opts: &ConvergenceOptions,
) -> Result<Vec<ConvergenceRow>> {
    check_levels(levels)?;
    if ex.exact.is_none() && levels.len() < 2 {
        return Err(Error::Config(
            "self-convergence needs at least two levels".into(),
        ));
    }
    let run = |&(nx, nt): &(usize, usize)| run_level(ex, variant, nx, nt, opts);
    let states: Vec<GridMeasure> = if opts.parallel_levels {
        levels.par_iter().map(run).collect::<Result<_>>()?
    } else {
        levels.iter().map(run).collect::<Result<_>>()?
    };

    let mut errors = Vec::new();
    if ex.exact.is_some() {
        for (state, &(nx, nt)) in states.iter().zip(levels) {
            let reference = exact_reference(ex, state.grid())?.expect("exact solution present");
            errors.push((nx, nt, flat_distance(&state.to_atomic(), &reference.to_atomic())));
        }
    } else {
        for (pair, &(nx, nt)) in states.windows(2).zip(&levels[1..]) {
            let (coarse, fine) = (&pair[0], &pair[1]);
            let error = match opts.comparison {
                SelfComparison::Direct => flat_distance(&coarse.to_atomic(), &fine.to_atomic()),
                SelfComparison::Restrict => {
                    let restricted = fine.restrict_to(coarse.grid())?;
                    let restricted = close_boundary(
                        &ex.spec,
                        coarse.grid(),
                        restricted.into_masses(),
                        ex.t_final,
                    )?;
                    flat_distance(&coarse.to_atomic(), &restricted.to_atomic())
                }
            };
            errors.push((nx, nt, error));
        }
    }
    Ok(orders(errors))
}
