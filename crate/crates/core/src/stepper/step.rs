use crate::discretize::DiscreteKernels;
use crate::error::Result;
use crate::measures::{GridMeasure, GridSpec};
use crate::problem::ProblemSpec;

use super::flux::{boundary_mass, compute_fluxes_into, Limiter};
use super::terms::{coag_explicit_into, coag_gain, coag_loss_rate, frag_term_into};
use super::{TimeOrder, Variant};

/// Scratch arrays for one step, sized to `J + 1`.
#[derive(Clone, Debug)]
pub struct StepWorkspace {
    growth: Vec<f64>,
    death: Vec<f64>,
    birth: Vec<f64>,
    flux: Vec<f64>,
    frag: Vec<f64>,
    coag: Vec<f64>,
}

impl StepWorkspace {
    pub fn new(len: usize) -> Self {
        Self {
            growth: vec![0.0; len],
            death: vec![0.0; len],
            birth: vec![0.0; len],
            flux: vec![0.0; len],
            frag: vec![0.0; len],
            coag: vec![0.0; len],
        }
    }

    fn ensure(&mut self, len: usize) {
        if self.flux.len() != len {
            *self = Self::new(len);
        }
    }
}

/// Set `m_0` of `masses` from the renewal closure at time `t`.
pub fn close_boundary(spec: &ProblemSpec, grid: &GridSpec, masses: Vec<f64>, t: f64) -> Result<GridMeasure> {
    let mut ws = StepWorkspace::new(grid.len());
    close_with(spec, grid, masses, t, &mut ws)
}

fn close_with(
    spec: &ProblemSpec,
    grid: &GridSpec,
    masses: Vec<f64>,
    t: f64,
    ws: &mut StepWorkspace,
) -> Result<GridMeasure> {
    let mut mu = GridMeasure::new(grid.clone(), masses)?;
    let m0 = if spec.growth.is_zero() {
        0.0
    } else {
        spec.growth.eval_into(t, &mu, &mut ws.growth);
        spec.birth.eval_into(t, &mu, &mut ws.birth);
        boundary_mass(&ws.growth, &ws.birth, mu.masses(), grid.dx())?
    };
    mu.masses_mut()[0] = m0;
    Ok(mu)
}

/// One-step maps bound to a problem and its discrete coefficients.
pub struct Stepper<'a> {
    spec: &'a ProblemSpec,
    kernels: &'a DiscreteKernels,
    limiter: Limiter,
    parallel: bool,
    ws: StepWorkspace,
}

impl<'a> Stepper<'a> {
    pub fn new(spec: &'a ProblemSpec, kernels: &'a DiscreteKernels, limiter: Limiter) -> Self {
        Self {
            spec,
            kernels,
            limiter,
            parallel: false,
            ws: StepWorkspace::new(kernels.frag_rate.len()),
        }
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    /// Transport, death and fragmentation part of the update, shared by both variants.
    fn linear_part(&mut self, state: &GridMeasure, t: f64, dt: f64) -> Vec<f64> {
        let grid = state.grid();
        let m = state.masses();
        let ws = &mut self.ws;
        ws.ensure(m.len());
        self.spec.growth.eval_into(t, state, &mut ws.growth);
        self.spec.death.eval_into(t, state, &mut ws.death);
        compute_fluxes_into(&ws.growth, m, self.limiter, &mut ws.flux);
        if self.spec.frag_rate.is_some() {
            frag_term_into(
                &self.kernels.frag_rate,
                &self.kernels.daughters,
                m,
                &mut ws.frag,
                self.parallel,
            );
        } else {
            ws.frag.fill(0.0);
        }
        let ratio = dt / grid.dx();
        let mut next = vec![0.0; m.len()];
        next[0] = m[0];
        for j in 1..m.len() {
            next[j] = m[j] - ratio * (ws.flux[j] - ws.flux[j - 1]) - dt * ws.death[j] * m[j]
                + dt * ws.frag[j];
        }
        next
    }

    /// Fully explicit step.
    pub fn explicit(&mut self, state: &GridMeasure, t: f64, dt: f64) -> Result<GridMeasure> {
        let mut next = self.linear_part(state, t, dt);
        if let Some(kappa) = &self.kernels.kernel {
            coag_explicit_into(kappa, state.masses(), &mut self.ws.coag, self.parallel);
            for j in 1..next.len() {
                next[j] += dt * self.ws.coag[j];
            }
        }
        close_with(self.spec, state.grid(), next, t + dt, &mut self.ws)
    }

    /// Semi-implicit step: ascending forward sweep of the triangular coagulation system.
    pub fn semi_implicit(&mut self, state: &GridMeasure, t: f64, dt: f64) -> Result<GridMeasure> {
        let mut next = self.linear_part(state, t, dt);
        if let Some(kappa) = &self.kernels.kernel {
            let m = state.masses();
            for j in 1..next.len() {
                let gain = dt * coag_gain(kappa, j, &next, m);
                let diagonal = 1.0 + dt * coag_loss_rate(kappa, j, m);
                next[j] = (next[j] + gain) / diagonal;
            }
        }
        close_with(self.spec, state.grid(), next, t + dt, &mut self.ws)
    }

    /// SSP-RK2 (Heun) lift of the explicit step.
    pub fn rk2(&mut self, state: &GridMeasure, t: f64, dt: f64) -> Result<GridMeasure> {
        let stage1 = self.explicit(state, t, dt)?;
        let stage2 = self.explicit(&stage1, t + dt, dt)?;
        let mut out: Vec<f64> = state
            .masses()
            .iter()
            .zip(stage2.masses())
            .map(|(u, v)| 0.5 * u + 0.5 * v)
            .collect();
        out[0] = 0.0;
        close_with(self.spec, state.grid(), out, t + dt, &mut self.ws)
    }

    /// Per-step Richardson extrapolation `2 (half, half) - full` of the semi-implicit step.
    pub fn richardson(&mut self, state: &GridMeasure, t: f64, dt: f64) -> Result<GridMeasure> {
        let full = self.semi_implicit(state, t, dt)?;
        let half = self.semi_implicit(state, t, 0.5 * dt)?;
        let half = self.semi_implicit(&half, t + 0.5 * dt, 0.5 * dt)?;
        let mut out: Vec<f64> = half
            .masses()
            .iter()
            .zip(full.masses())
            .map(|(h, f)| 2.0 * h - f)
            .collect();
        out[0] = 0.0;
        close_with(self.spec, state.grid(), out, t + dt, &mut self.ws)
    }

    /// Dispatch on `(variant, order)`.
    pub fn advance(
        &mut self,
        variant: Variant,
        order: TimeOrder,
        state: &GridMeasure,
        t: f64,
        dt: f64,
    ) -> Result<GridMeasure> {
        match (variant, order) {
            (Variant::Explicit, TimeOrder::First) => self.explicit(state, t, dt),
            (Variant::Explicit, TimeOrder::Second) => self.rk2(state, t, dt),
            (Variant::SemiImplicit, TimeOrder::First) => self.semi_implicit(state, t, dt),
            (Variant::SemiImplicit, TimeOrder::Second) => self.richardson(state, t, dt),
        }
    }
}

pub fn step_explicit(
    state: &GridMeasure,
    t: f64,
    spec: &ProblemSpec,
    kernels: &DiscreteKernels,
    dt: f64,
    limiter: Limiter,
) -> Result<GridMeasure> {
    Stepper::new(spec, kernels, limiter).explicit(state, t, dt)
}

pub fn step_semi_implicit(
    state: &GridMeasure,
    t: f64,
    spec: &ProblemSpec,
    kernels: &DiscreteKernels,
    dt: f64,
    limiter: Limiter,
) -> Result<GridMeasure> {
    Stepper::new(spec, kernels, limiter).semi_implicit(state, t, dt)
}

pub fn step_rk2(
    state: &GridMeasure,
    t: f64,
    spec: &ProblemSpec,
    kernels: &DiscreteKernels,
    dt: f64,
    limiter: Limiter,
) -> Result<GridMeasure> {
    Stepper::new(spec, kernels, limiter).rk2(state, t, dt)
}

pub fn step_richardson(
    state: &GridMeasure,
    t: f64,
    spec: &ProblemSpec,
    kernels: &DiscreteKernels,
    dt: f64,
    limiter: Limiter,
) -> Result<GridMeasure> {
    Stepper::new(spec, kernels, limiter).richardson(state, t, dt)
}
