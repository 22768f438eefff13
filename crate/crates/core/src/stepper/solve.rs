use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::discretize::{cfl_max_dt, resolve_bounds, Bounds, DiscreteKernels};
use crate::error::{Error, Result};
use crate::measures::{format_decimal, GridMeasure, Measure};
use crate::problem::ProblemSpec;

use super::step::{close_boundary, Stepper};
use super::{CflPolicy, SchemeConfig, Storage};

/// Relative threshold below which a negative mass is reported.
const NEGATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub cfl_bound: f64,
    pub dt: f64,
    pub steps: usize,
    pub cfl_violated: bool,
    pub bounds: Bounds,
    /// Smallest interior mass seen over the run.
    pub min_mass: f64,
    /// Steps after which some mass fell below `-1e-12 TV`.
    pub negative_steps: Vec<usize>,
    pub tv_initial: f64,
    pub tv_max: f64,
    pub first_moment_initial: f64,
    pub first_moment_final: f64,
    pub first_moment_drift: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridMeasure>,
    pub dt: f64,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn final_state(&self) -> &GridMeasure {
        self.states.last().expect("trajectory holds at least one state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least one time")
    }

    /// Piecewise-linear interpolant in time of the stored states.
    pub fn at(&self, t: f64) -> Result<GridMeasure> {
        let first = self.times[0];
        let last = self.final_time();
        let slack = 1e-12 * last.abs().max(1.0);
        if t < first - slack || t > last + slack {
            return Err(Error::Domain(format!("time {t} outside [{first}, {last}]")));
        }
        let k = self.times.partition_point(|&s| s <= t);
        if k == 0 {
            return Ok(self.states[0].clone());
        }
        if k == self.times.len() {
            return Ok(self.final_state().clone());
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        let (a, b) = (&self.states[k - 1], &self.states[k]);
        let masses = a
            .masses()
            .iter()
            .zip(b.masses())
            .map(|(u, v)| (1.0 - w) * u + w * v)
            .collect();
        GridMeasure::new(a.grid().clone(), masses)
    }

    /// Write every stored state as `t,x,mass` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "x", "mass"])?;
        for (t, state) in self.times.iter().zip(&self.states) {
            write_state_rows(&mut w, *t, state)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Write one state as `t,x,mass` rows with a header.
pub fn write_state_csv<W: Write>(writer: W, t: f64, state: &GridMeasure) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "x", "mass"])?;
    write_state_rows(&mut w, t, state)?;
    w.flush()?;
    Ok(())
}

fn write_state_rows<W: Write>(w: &mut csv::Writer<W>, t: f64, state: &GridMeasure) -> Result<()> {
    let t = format_decimal(t);
    for (x, m) in state.atoms() {
        w.write_record([t.as_str(), &format_decimal(x), &format_decimal(m)])?;
    }
    Ok(())
}

/// Run the configured scheme from `mu0` to `config.t_final`.
///
/// The boundary mass of `mu0` is replaced by the closure value at `t = 0`.
pub fn solve(
    mu0: &GridMeasure,
    spec: &ProblemSpec,
    kernels: &DiscreteKernels,
    config: &SchemeConfig,
) -> Result<Trajectory> {
    let steps = config.steps()?;
    let dt = if steps == 0 { 0.0 } else { config.dt };
    spec.validate(mu0)?;
    let grid = mu0.grid();
    if kernels.frag_rate.len() != grid.len() {
        return Err(Error::Config(format!(
            "discrete coefficients built for {} cells, state has {}",
            kernels.frag_rate.len().saturating_sub(1),
            grid.cells()
        )));
    }

    let tv0 = mu0.total_variation();
    let bounds = resolve_bounds(spec, kernels, mu0);
    let cap = config.t_final.max(config.dt);
    let cfl_bound = cfl_max_dt(&bounds, grid, config.variant, config.t_final, tv0, cap);
    let cfl_violated = steps > 0 && dt > cfl_bound * (1.0 + 1e-12);
    if cfl_violated {
        match config.cfl_policy {
            CflPolicy::Enforce => {
                return Err(Error::Cfl { dt, bound: cfl_bound }.at_step(0));
            }
            CflPolicy::Warn => {
                log::warn!("dt = {dt:e} exceeds the CFL bound {cfl_bound:e}; continuing");
            }
        }
    }

    let mut state = close_boundary(spec, grid, mu0.masses().to_vec(), 0.0).map_err(|e| e.at_step(0))?;
    let tv_initial = state.total_variation();
    let first_moment_initial = state.moment(1);
    let mut diagnostics = Diagnostics {
        cfl_bound,
        dt,
        steps,
        cfl_violated,
        bounds,
        min_mass: state.min_interior(),
        negative_steps: Vec::new(),
        tv_initial,
        tv_max: tv_initial,
        first_moment_initial,
        first_moment_final: first_moment_initial,
        first_moment_drift: 0.0,
    };

    let keep_all = config.storage == Storage::AllSteps;
    let mut times = vec![0.0];
    let mut states = Vec::new();
    if keep_all {
        states.reserve(steps + 1);
        states.push(state.clone());
    }

    let mut stepper = Stepper::new(spec, kernels, config.limiter).parallel(config.parallel);
    for k in 0..steps {
        let t = k as f64 * dt;
        state = stepper
            .advance(config.variant, config.time_order, &state, t, dt)
            .map_err(|e| e.at_step(k + 1))?;
        let tv = state.total_variation();
        let low = state.min_interior();
        diagnostics.tv_max = diagnostics.tv_max.max(tv);
        diagnostics.min_mass = diagnostics.min_mass.min(low);
        if low < -NEGATIVE_TOLERANCE * tv {
            diagnostics.negative_steps.push(k + 1);
        }
        if keep_all {
            times.push((k + 1) as f64 * dt);
            states.push(state.clone());
        }
    }
    if !keep_all {
        times = vec![steps as f64 * dt];
        states.push(state);
    }

    let last = states.last().expect("at least one state");
    diagnostics.first_moment_final = last.moment(1);
    diagnostics.first_moment_drift = if first_moment_initial != 0.0 {
        (diagnostics.first_moment_final - first_moment_initial).abs() / first_moment_initial.abs()
    } else {
        diagnostics.first_moment_final.abs()
    };
    Ok(Trajectory {
        times,
        states,
        dt,
        diagnostics,
    })
}
