//! Time steppers for the high-resolution schemes.
//!
//! Both variants share the flux-limited transport, death and fragmentation
//! updates and differ only in the coagulation term: the explicit scheme
//! evaluates it at the old level, the semi-implicit scheme treats the loss
//! and the new-level factor of the gain implicitly, which leaves a
//! lower-triangular system solved in one ascending sweep. Second order in
//! time comes from SSP-RK2 (explicit) or per-step Richardson extrapolation
//! (semi-implicit).

mod flux;
mod solve;
mod step;
mod terms;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use flux::{boundary_mass, compute_fluxes, compute_fluxes_into, minmod, Limiter};
pub use solve::{solve, write_state_csv, Diagnostics, Trajectory};
pub use step::{
    close_boundary, step_explicit, step_richardson, step_rk2, step_semi_implicit, StepWorkspace,
    Stepper,
};
pub use terms::{coag_explicit, coag_explicit_into, frag_term, frag_term_into};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Explicit,
    SemiImplicit,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Variant::Explicit),
            "semi-implicit" | "semi_implicit" | "semiimplicit" => Ok(Variant::SemiImplicit),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected explicit or semi-implicit)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Explicit => "explicit",
            Variant::SemiImplicit => "semi-implicit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeOrder {
    First,
    Second,
}

impl TimeOrder {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(TimeOrder::First),
            2 => Ok(TimeOrder::Second),
            other => Err(Error::Config(format!("time order must be 1 or 2, got {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CflPolicy {
    #[default]
    Enforce,
    Warn,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Storage {
    #[default]
    AllSteps,
    FinalOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub variant: Variant,
    pub time_order: TimeOrder,
    pub limiter: Limiter,
    pub cfl_policy: CflPolicy,
    pub dt: f64,
    pub t_final: f64,
    pub storage: Storage,
    /// Split the per-cell loops of explicit terms across threads.
    pub parallel: bool,
}

impl SchemeConfig {
    pub fn new(variant: Variant, dt: f64, t_final: f64) -> Self {
        Self {
            variant,
            time_order: TimeOrder::Second,
            limiter: Limiter::Standard,
            cfl_policy: CflPolicy::Enforce,
            dt,
            t_final,
            storage: Storage::AllSteps,
            parallel: false,
        }
    }

    /// `steps` uniform steps up to `t_final`.
    pub fn with_steps(variant: Variant, steps: usize, t_final: f64) -> Result<Self> {
        if steps == 0 {
            if t_final == 0.0 {
                return Ok(Self::new(variant, 1.0, 0.0));
            }
            return Err(Error::Config("step count must be positive".into()));
        }
        Ok(Self::new(variant, t_final / steps as f64, t_final))
    }

    pub fn time_order(mut self, order: TimeOrder) -> Self {
        self.time_order = order;
        self
    }

    pub fn limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    pub fn cfl_policy(mut self, policy: CflPolicy) -> Self {
        self.cfl_policy = policy;
        self
    }

    pub fn storage(mut self, storage: Storage) -> Self {
        self.storage = storage;
        self
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    /// Number of steps `T / dt`, which must be an integer to 1e-9 relative.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!(
                "final time must be nonnegative, got {}",
                self.t_final
            )));
        }
        let ratio = self.t_final / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Config(format!(
                "T / dt = {ratio} is not an integer step count"
            )));
        }
        Ok(steps as usize)
    }
}
