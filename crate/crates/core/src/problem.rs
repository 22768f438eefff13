//! Continuous model ingredients.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::GridMeasure;

/// Rate of the form `(t, x) -> value`.
pub type PointRateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Rate depending on the whole state; returns one value per grid midpoint.
pub type StateRateFn = Arc<dyn Fn(f64, &GridMeasure) -> Vec<f64> + Send + Sync>;
pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SizeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Growth, death or birth rate.
#[derive(Clone, Default)]
pub enum Rate {
    #[default]
    Zero,
    Pointwise(PointRateFn),
    State(StateRateFn),
}

impl Rate {
    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Rate::Zero
        } else {
            Rate::Pointwise(Arc::new(move |_, _| c))
        }
    }

    pub fn of_size(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Rate::Pointwise(Arc::new(move |_, x| f(x)))
    }

    pub fn of_time_and_size(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Rate::Pointwise(Arc::new(f))
    }

    pub fn of_state(f: impl Fn(f64, &GridMeasure) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Rate::State(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rate::Zero)
    }

    /// Values at every midpoint of `mu`'s grid at time `t`.
    pub fn eval_into(&self, t: f64, mu: &GridMeasure, out: &mut [f64]) {
        let grid = mu.grid();
        match self {
            Rate::Zero => out.fill(0.0),
            Rate::Pointwise(f) => {
                for (j, v) in out.iter_mut().enumerate() {
                    *v = f(t, grid.midpoint(j));
                }
            }
            Rate::State(f) => {
                let vals = f(t, mu);
                assert_eq!(vals.len(), out.len(), "state rate returned wrong length");
                out.copy_from_slice(&vals);
            }
        }
    }

    pub fn eval(&self, t: f64, mu: &GridMeasure) -> Vec<f64> {
        let mut out = vec![0.0; mu.grid().len()];
        self.eval_into(t, mu, &mut out);
        out
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rate::Zero => "Rate::Zero",
            Rate::Pointwise(_) => "Rate::Pointwise(..)",
            Rate::State(_) => "Rate::State(..)",
        })
    }
}

/// A daughter point mass at a fixed size, with weight depending on the parent size.
#[derive(Clone)]
pub struct DaughterAtom {
    pub position: f64,
    pub weight: SizeFn,
}

/// Daughter distribution `b(y, .)`: fixed-position atoms plus a density
/// `b_c(y, x)` supported on `[density_start, y]`.
///
/// Atoms whose position exceeds the parent size do not contribute.
#[derive(Clone, Default)]
pub struct DaughterDistribution {
    pub atoms: Vec<DaughterAtom>,
    pub density: Option<KernelFn>,
    pub density_start: f64,
}

impl DaughterDistribution {
    pub fn density(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            density: Some(Arc::new(f)),
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none()
    }
}

impl fmt::Debug for DaughterDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DaughterDistribution")
            .field(
                "atoms",
                &self.atoms.iter().map(|a| a.position).collect::<Vec<_>>(),
            )
            .field("density", &self.density.is_some())
            .field("density_start", &self.density_start)
            .finish()
    }
}

/// Caller-supplied bounding constants; missing entries are estimated on the grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelBounds {
    /// Bound on the W^{1,inf} norms of growth, death and birth.
    pub zeta: Option<f64>,
    pub c_kappa: Option<f64>,
    /// `sup a`.
    pub c_a: Option<f64>,
    /// Bound on the total daughter count `b(y, R+)`.
    pub c_b: Option<f64>,
    /// `||a||_{W^{1,inf}}`, entering the semi-implicit bound through `max(zeta, .)`.
    pub a_lipschitz_norm: Option<f64>,
}

/// Size-structured coagulation-fragmentation model on `[0, x_max]`.
#[derive(Clone, Default)]
pub struct ProblemSpec {
    pub growth: Rate,
    pub death: Rate,
    pub birth: Rate,
    pub kernel: Option<KernelFn>,
    /// Zero the discrete kernel whenever `i + j > J`.
    pub truncate_k2: bool,
    pub frag_rate: Option<SizeFn>,
    /// Cell 0's rate average starts at this fraction of `dx` (for rates singular at 0).
    pub frag_rate_cutoff: f64,
    pub daughters: DaughterDistribution,
    pub bounds: ModelBounds,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("growth", &self.growth)
            .field("death", &self.death)
            .field("birth", &self.birth)
            .field("kernel", &self.kernel.is_some())
            .field("truncate_k2", &self.truncate_k2)
            .field("frag_rate", &self.frag_rate.is_some())
            .field("frag_rate_cutoff", &self.frag_rate_cutoff)
            .field("daughters", &self.daughters)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl ProblemSpec {
    pub fn has_coagulation(&self) -> bool {
        self.kernel.is_some()
    }

    pub fn has_fragmentation(&self) -> bool {
        self.frag_rate.is_some()
    }

    /// Check the structural assumptions at the grid midpoints of `mu`.
    pub fn validate(&self, mu: &GridMeasure) -> Result<()> {
        let grid = mu.grid();
        let xs = grid.midpoints();
        let n = xs.len();
        let scale = |v: &[f64]| v.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1.0);

        if !self.growth.is_zero() {
            let g = self.growth.eval(0.0, mu);
            if g[0] <= 0.0 {
                return Err(Error::Validation(format!(
                    "growth must be positive at the origin, got {}",
                    g[0]
                )));
            }
            if g[n - 1].abs() > 1e-12 * scale(&g) {
                return Err(Error::Validation(format!(
                    "growth must vanish at x_max, got {:e}",
                    g[n - 1]
                )));
            }
        }
        for (name, rate) in [("death", &self.death), ("birth", &self.birth)] {
            let v = rate.eval(0.0, mu);
            if let Some(j) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("{name} rate not finite in cell {j}")));
            }
        }
        if let Some(kernel) = &self.kernel {
            let stride = (n / 64).max(1);
            for i in (0..n).step_by(stride) {
                for j in (i..n).step_by(stride) {
                    let (kij, kji) = (kernel(xs[i], xs[j]), kernel(xs[j], xs[i]));
                    if !(kij >= 0.0) {
                        return Err(Error::Validation(format!(
                            "coagulation kernel is {kij} at ({}, {})",
                            xs[i], xs[j]
                        )));
                    }
                    if (kij - kji).abs() > 1e-12 * kij.abs().max(1.0) {
                        return Err(Error::Validation(format!(
                            "coagulation kernel not symmetric at ({}, {})",
                            xs[i], xs[j]
                        )));
                    }
                }
            }
        }
        if let Some(a) = &self.frag_rate {
            for &x in &xs[1..] {
                let v = a(x);
                if !(v >= 0.0) {
                    return Err(Error::Validation(format!(
                        "fragmentation rate is {v} at x = {x}"
                    )));
                }
            }
        }
        for atom in &self.daughters.atoms {
            if atom.position < 0.0 {
                return Err(Error::Validation(format!(
                    "daughter atom at negative size {}",
                    atom.position
                )));
            }
        }
        Ok(())
    }
}
