//! Built-in benchmark problems.

use std::sync::Arc;

use serde::Serialize;

use crate::measures::InitialData;
use crate::problem::{DaughterAtom, DaughterDistribution, ModelBounds, ProblemSpec, Rate};
use crate::stepper::CflPolicy;

/// Density `(t, x) -> value`.
pub type ExactDensityFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Closed-form integral `(t, a, b) -> int_a^b density(t, x) dx`.
pub type ExactIntegralFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ExactSolution {
    pub density: ExactDensityFn,
    pub cell_integral: Option<ExactIntegralFn>,
}

impl ExactSolution {
    /// The exact solution frozen at time `t`, as initial data for projection.
    pub fn at(&self, t: f64) -> InitialData {
        let density = self.density.clone();
        let mut data = InitialData::density(move |x| density(t, x));
        if let Some(integral) = &self.cell_integral {
            let integral = integral.clone();
            data = data.with_cell_integral(move |a, b| integral(t, a, b));
        }
        data
    }
}

/// A named benchmark: domain, model, initial data and (optionally) the exact solution.
#[derive(Clone)]
pub struct ExampleDef {
    pub name: String,
    pub summary: String,
    /// Which published result the example reproduces.
    pub reproduces: String,
    pub x_max: f64,
    pub t_final: f64,
    pub spec: ProblemSpec,
    pub initial: InitialData,
    pub exact: Option<ExactSolution>,
    pub cfl_policy: CflPolicy,
    /// Default `(Nx, Nt)` for single runs and the base of convergence studies.
    pub base_level: (usize, usize),
    pub notes: Vec<String>,
}

impl std::fmt::Debug for ExampleDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExampleDef")
            .field("name", &self.name)
            .field("x_max", &self.x_max)
            .field("t_final", &self.t_final)
            .field("spec", &self.spec)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// Listing entry for the built-ins.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ExampleInfo {
    pub name: String,
    pub summary: String,
    pub reproduces: String,
    pub x_max: f64,
    pub t_final: f64,
    pub exact_solution: bool,
}

impl ExampleDef {
    pub fn info(&self) -> ExampleInfo {
        ExampleInfo {
            name: self.name.clone(),
            summary: self.summary.clone(),
            reproduces: self.reproduces.clone(),
            x_max: self.x_max,
            t_final: self.t_final,
            exact_solution: self.exact.is_some(),
        }
    }
}

fn exp_decay_integral(rate: f64, a: f64, b: f64) -> f64 {
    // int_a^b rate^2 e^{-rate x} dx
    rate * ((-rate * a).exp() - (-rate * b).exp())
}

fn unit_exponential() -> InitialData {
    InitialData::density(|x| (-x).exp()).with_cell_integral(|a, b| (-a).exp() - (-b).exp())
}

fn binary_daughters() -> DaughterDistribution {
    DaughterDistribution::density(|y, _| 2.0 / y)
}

/// Pure coagulation with `kappa = 1`.
pub fn example1() -> ExampleDef {
    let c = |t: f64| 2.0 / (2.0 + t);
    ExampleDef {
        name: "example1".into(),
        summary: "pure coagulation, constant kernel, exact solution".into(),
        reproduces: "Table 1".into(),
        x_max: 20.0,
        t_final: 0.5,
        spec: ProblemSpec {
            kernel: Some(Arc::new(|_, _| 1.0)),
            bounds: ModelBounds {
                zeta: Some(0.0),
                c_kappa: Some(1.0),
                c_a: Some(0.0),
                c_b: Some(0.0),
                a_lipschitz_norm: Some(0.0),
            },
            ..Default::default()
        },
        initial: unit_exponential(),
        exact: Some(ExactSolution {
            density: Arc::new(move |t, x| c(t) * c(t) * (-c(t) * x).exp()),
            cell_integral: Some(Arc::new(move |t, a, b| exp_decay_integral(c(t), a, b))),
        }),
        cfl_policy: CflPolicy::Enforce,
        base_level: (100, 250),
        notes: vec![],
    }
}

/// Pure binary fragmentation with `a(x) = x`.
pub fn example2() -> ExampleDef {
    ExampleDef {
        name: "example2".into(),
        summary: "pure fragmentation, a(x) = x, b(y, .) = 2/y, exact solution".into(),
        reproduces: "Table 2".into(),
        x_max: 20.0,
        t_final: 0.5,
        spec: ProblemSpec {
            frag_rate: Some(Arc::new(|x| x)),
            daughters: binary_daughters(),
            bounds: ModelBounds {
                zeta: Some(0.0),
                c_kappa: Some(0.0),
                c_a: Some(20.0),
                c_b: Some(2.0),
                a_lipschitz_norm: Some(21.0),
            },
            ..Default::default()
        },
        initial: unit_exponential(),
        exact: Some(ExactSolution {
            density: Arc::new(|t, x| (1.0 + t) * (1.0 + t) * (-x * (1.0 + t)).exp()),
            cell_integral: Some(Arc::new(|t, a, b| exp_decay_integral(1.0 + t, a, b))),
        }),
        cfl_policy: CflPolicy::Enforce,
        base_level: (100, 250),
        notes: vec![],
    }
}

fn example3_growth(x: f64) -> f64 {
    2.0 - 2.0 * (x - 20.0).exp()
}

/// `sup |f| + sup |f'|` on `[0, x_max]` from a dense sample.
fn sampled_w1inf(f: impl Fn(f64) -> f64, x_max: f64) -> f64 {
    let n = 20_000;
    let h = x_max / n as f64;
    let values: Vec<f64> = (0..=n).map(|k| f(k as f64 * h)).collect();
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slope = values
        .windows(2)
        .map(|w| ((w[1] - w[0]) / h).abs())
        .fold(0.0f64, f64::max);
    sup + slope
}

/// Full model: growth, death, births, coagulation and fragmentation.
pub fn example3() -> ExampleDef {
    let zeta = sampled_w1inf(example3_growth, 20.0).max(2.0).max(1.0);
    ExampleDef {
        name: "example3".into(),
        summary: "full model with growth, death, births, coagulation and fragmentation".into(),
        reproduces: "Table 3".into(),
        x_max: 20.0,
        t_final: 0.5,
        spec: ProblemSpec {
            growth: Rate::of_size(example3_growth),
            death: Rate::constant(1.0),
            birth: Rate::constant(2.0),
            kernel: Some(Arc::new(|_, _| 1.0)),
            frag_rate: Some(Arc::new(|x| x)),
            daughters: binary_daughters(),
            bounds: ModelBounds {
                zeta: Some(zeta),
                c_kappa: Some(1.0),
                c_a: Some(20.0),
                c_b: Some(2.0),
                a_lipschitz_norm: Some(21.0),
            },
            ..Default::default()
        },
        initial: unit_exponential(),
        exact: None,
        // The explicit bound carries exp((zeta + C_b C_a) T) and is far below any practical dt.
        cfl_policy: CflPolicy::Warn,
        base_level: (100, 250),
        notes: vec![],
    }
}

/// Mixed discrete and continuous fragmentation with `a(x) = 1/x`.
pub fn example4() -> ExampleDef {
    let atoms = (1..=5)
        .map(|i| DaughterAtom {
            position: i as f64,
            weight: Arc::new(|y: f64| 2.0 / y),
        })
        .collect();
    let boxcar = |a: f64, b: f64| (b.min(15.0) - a.max(5.0)).max(0.0);
    ExampleDef {
        name: "example4".into(),
        summary: "mixed discrete/continuous fragmentation, a(x) = 1/x, atoms at 1..5".into(),
        reproduces: "Figure (structure at T = 4)".into(),
        x_max: 20.0,
        t_final: 4.0,
        spec: ProblemSpec {
            frag_rate: Some(Arc::new(|x| 1.0 / x)),
            frag_rate_cutoff: 0.01,
            daughters: DaughterDistribution {
                atoms,
                density: Some(Arc::new(|y, _| 2.0 / y)),
                density_start: 5.0,
            },
            ..Default::default()
        },
        initial: InitialData::density(|x| if (5.0..=15.0).contains(&x) { 1.0 } else { 0.0 })
            .with_cell_integral(boxcar)
            .with_atoms((1..=5).map(|i| (i as f64, 1.0)).collect()),
        exact: None,
        cfl_policy: CflPolicy::Warn,
        base_level: (200, 800),
        notes: vec!["a_0 averaged over [dx/100, dx/2] (rate singular at the origin)".into()],
    }
}

pub fn all_examples() -> Vec<ExampleDef> {
    vec![example1(), example2(), example3(), example4()]
}

pub fn example_names() -> Vec<&'static str> {
    vec!["example1", "example2", "example3", "example4"]
}

/// Look up a built-in by name; `1` and `ex1` are accepted for `example1`.
pub fn example_by_name(name: &str) -> Option<ExampleDef> {
    let key = name.trim().to_ascii_lowercase();
    let key = key
        .strip_prefix("example")
        .or_else(|| key.strip_prefix("ex"))
        .unwrap_or(&key);
    match key {
        "1" => Some(example1()),
        "2" => Some(example2()),
        "3" => Some(example3()),
        "4" => Some(example4()),
        _ => None,
    }
}
