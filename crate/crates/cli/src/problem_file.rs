//! JSON problem files.
//!
//! ```json
//! {
//!   "name": "binary-fragmentation",
//!   "x_max": 20, "t_final": 0.5,
//!   "frag_rate": "x",
//!   "daughters": { "density": "2/y" },
//!   "initial": { "density": "exp(-x)" },
//!   "exact": "(1+t)^2 * exp(-(1+t)*x)",
//!   "bounds": { "zeta": 0, "c_kappa": 0, "c_a": 20, "c_b": 2, "a_lipschitz_norm": 21 }
//! }
//! ```
//!
//! Growth, death and birth are expressions in `x` and `t`; the kernel is in
//! `x` and `y`; `frag_rate` is in `x`; the daughter density takes the parent
//! size as `y` and the daughter size as `x`; daughter atom weights are in `y`;
//! the exact solution is in `t` and `x`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use coagfrag::harness::{ExactSolution, ExampleDef};
use coagfrag::measures::InitialData;
use coagfrag::problem::{DaughterAtom, DaughterDistribution, ModelBounds, ProblemSpec, Rate};
use coagfrag::stepper::CflPolicy;
use serde::Deserialize;

use crate::expr::{Expr, Var};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default)]
    pub summary: String,
    pub x_max: f64,
    pub t_final: f64,
    pub growth: Option<String>,
    pub death: Option<String>,
    pub birth: Option<String>,
    pub kernel: Option<String>,
    #[serde(default)]
    pub truncate_kernel: bool,
    pub frag_rate: Option<String>,
    #[serde(default)]
    pub frag_rate_cutoff: f64,
    #[serde(default)]
    pub daughters: DaughterFile,
    pub initial: InitialFile,
    pub exact: Option<String>,
    #[serde(default)]
    pub bounds: ModelBounds,
    #[serde(default)]
    pub cfl_policy: CflPolicy,
    pub base_level: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaughterFile {
    pub density: Option<String>,
    #[serde(default)]
    pub density_start: f64,
    #[serde(default)]
    pub atoms: Vec<AtomFile>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub position: f64,
    pub weight: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFile {
    pub density: Option<String>,
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
}

fn parse(field: &str, text: &str, allowed: &[Var]) -> Result<Expr> {
    let e = Expr::parse(text).with_context(|| format!("in `{field}`"))?;
    for (var, name) in [(Var::X, "x"), (Var::Y, "y"), (Var::T, "t")] {
        if e.uses(var) && !allowed.contains(&var) {
            bail!("`{field}` may not depend on `{name}`");
        }
    }
    Ok(e)
}

fn rate(field: &str, text: Option<&str>) -> Result<Rate> {
    let Some(text) = text else {
        return Ok(Rate::Zero);
    };
    let e = parse(field, text, &[Var::X, Var::T])?;
    if let Some(c) = e.as_constant() {
        return Ok(Rate::constant(c));
    }
    Ok(Rate::of_time_and_size(move |t, x| e.eval(x, 0.0, t)))
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading problem file {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing problem file {}", path.display()))
    }

    pub fn into_example(self) -> Result<ExampleDef> {
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            bail!("x_max must be positive, got {}", self.x_max);
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            bail!("t_final must be nonnegative, got {}", self.t_final);
        }

        let kernel = match &self.kernel {
            Some(text) => {
                let e = parse("kernel", text, &[Var::X, Var::Y])?;
                Some(Arc::new(move |x: f64, y: f64| e.eval(x, y, 0.0)) as _)
            }
            None => None,
        };
        let frag_rate = match &self.frag_rate {
            Some(text) => {
                let e = parse("frag_rate", text, &[Var::X])?;
                Some(Arc::new(move |x: f64| e.eval(x, 0.0, 0.0)) as _)
            }
            None => None,
        };
        let density = match &self.daughters.density {
            Some(text) => {
                let e = parse("daughters.density", text, &[Var::X, Var::Y])?;
                Some(Arc::new(move |y: f64, x: f64| e.eval(x, y, 0.0)) as _)
            }
            None => None,
        };
        let atoms = self
            .daughters
            .atoms
            .iter()
            .map(|a| {
                let e = parse("daughters.atoms.weight", &a.weight, &[Var::Y])?;
                Ok(DaughterAtom {
                    position: a.position,
                    weight: Arc::new(move |y: f64| e.eval(0.0, y, 0.0)),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let spec = ProblemSpec {
            growth: rate("growth", self.growth.as_deref())?,
            death: rate("death", self.death.as_deref())?,
            birth: rate("birth", self.birth.as_deref())?,
            kernel,
            truncate_k2: self.truncate_kernel,
            frag_rate,
            frag_rate_cutoff: self.frag_rate_cutoff,
            daughters: DaughterDistribution {
                atoms,
                density,
                density_start: self.daughters.density_start,
            },
            bounds: self.bounds,
        };

        let mut initial = match &self.initial.density {
            Some(text) => {
                let e = parse("initial.density", text, &[Var::X])?;
                InitialData::density(move |x| e.eval(x, 0.0, 0.0))
            }
            None => InitialData::default(),
        };
        initial = initial.with_atoms(self.initial.atoms);

        let exact = match &self.exact {
            Some(text) => {
                let e = parse("exact", text, &[Var::X, Var::T])?;
                Some(ExactSolution {
                    density: Arc::new(move |t, x| e.eval(x, 0.0, t)),
                    cell_integral: None,
                })
            }
            None => None,
        };

        Ok(ExampleDef {
            name: self.name,
            summary: self.summary,
            reproduces: "user problem file".into(),
            x_max: self.x_max,
            t_final: self.t_final,
            spec,
            initial,
            exact,
            cfl_policy: self.cfl_policy,
            base_level: self.base_level.unwrap_or((100, 250)),
            notes: vec![],
        })
    }
}
