//! Cell-averaged model coefficients, bounding constants and CFL time steps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{GridMeasure, GridSpec};
use crate::problem::{DaughterDistribution, KernelFn, ProblemSpec, Rate, SizeFn};
use crate::quadrature::{simpson, simpson_2d, SUBINTERVALS_PER_CELL};
use crate::stepper::Variant;

/// Safety factor applied to every estimated constant.
pub const ESTIMATE_SAFETY: f64 = 1.1;

/// Symmetric `(J+1) x (J+1)` coagulation matrix.
///
/// Besides the dense rows, the anti-diagonals `kappa_{i, j-i}` (`i = 1..j-1`)
/// are stored contiguously per `j` for the gain sums.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    values: Vec<f64>,
    gain: Vec<f64>,
}

impl KernelMatrix {
    /// Build from a dense row-major symmetric matrix.
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Validation(format!(
                "kernel matrix needs {} entries, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (values[i * n + j], values[j * n + i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Validation(format!(
                        "kernel matrix not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        let mut gain = Vec::with_capacity(n * n / 2);
        for j in 1..n {
            for i in 1..j {
                gain.push(values[i * n + (j - i)]);
            }
        }
        Ok(Self { n, values, gain })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row `j`, equal to column `j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    /// `kappa_{i, j-i}` for `i = 1..j-1`.
    pub fn gain_row(&self, j: usize) -> &[f64] {
        if j < 2 {
            return &[];
        }
        let start = (j - 1) * (j - 2) / 2;
        &self.gain[start..start + (j - 1)]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_triples(writer, (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))), |i, j| {
            self.get(i, j)
        })
    }
}

/// Lower-triangular daughter matrix `b_{i,j} = b(x_i, cell_j)`, `j <= i`,
/// stored by column so the fragmentation gain for cell `j` is one slice.
#[derive(Clone, Debug, PartialEq)]
pub struct DaughterMatrix {
    n: usize,
    cols: Vec<f64>,
}

impl DaughterMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cols: vec![0.0; n * (n + 1) / 2],
        }
    }

    fn col_start(&self, j: usize) -> usize {
        j * self.n - j * (j.saturating_sub(1)) / 2
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `b_{i,j}`; zero above the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.cols[self.col_start(j) + (i - j)]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.col_start(j) + (i - j);
        self.cols[k] = v;
    }

    /// `b_{i,j}` for `i = j..=J`.
    pub fn column(&self, j: usize) -> &[f64] {
        let start = self.col_start(j);
        &self.cols[start..start + (self.n - j)]
    }

    /// Total daughter count `sum_{j <= i} b_{i,j}` of parent cell `i`.
    pub fn row_sum(&self, i: usize) -> f64 {
        (0..=i).map(|j| self.get(i, j)).sum()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_triples(writer, (0..self.n).flat_map(|i| (0..=i).map(move |j| (i, j))), |i, j| {
            self.get(i, j)
        })
    }
}

fn write_triples<W: Write>(
    writer: W,
    indices: impl Iterator<Item = (usize, usize)>,
    value: impl Fn(usize, usize) -> f64,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["i", "j", "value"])?;
    for (i, j) in indices {
        w.write_record([i.to_string(), j.to_string(), format!("{:e}", value(i, j))])?;
    }
    w.flush()?;
    Ok(())
}

/// Everything the one-step maps need from the coefficients.
#[derive(Clone, Debug)]
pub struct DiscreteKernels {
    /// `a_i`, zero when fragmentation is off.
    pub frag_rate: Vec<f64>,
    pub kernel: Option<KernelMatrix>,
    pub daughters: DaughterMatrix,
}

impl DiscreteKernels {
    pub fn build(spec: &ProblemSpec, grid: &GridSpec) -> Result<Self> {
        let frag_rate = match &spec.frag_rate {
            Some(a) => discretize_frag_rate(a, grid, spec.frag_rate_cutoff)?,
            None => vec![0.0; grid.len()],
        };
        let kernel = spec
            .kernel
            .as_ref()
            .map(|k| discretize_coag_kernel(k, grid, spec.truncate_k2))
            .transpose()?;
        let daughters = if spec.frag_rate.is_some() {
            discretize_daughter(&spec.daughters, grid)?
        } else {
            DaughterMatrix::zeros(grid.len())
        };
        Ok(Self {
            frag_rate,
            kernel,
            daughters,
        })
    }
}

fn cell_average<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    simpson(f, lo, hi, SUBINTERVALS_PER_CELL) / (hi - lo)
}

/// `a_i`: average of `a` over each cell (the half cell carries `2/dx`).
///
/// `cutoff` (fraction of `dx`) moves the left end of cell 0 away from the
/// origin for rates with an integrable singularity there.
pub fn discretize_frag_rate(a: &SizeFn, grid: &GridSpec, cutoff: f64) -> Result<Vec<f64>> {
    let dx = grid.dx();
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let (mut lo, hi) = grid.cell(j);
        if j == 0 {
            lo = cutoff * dx;
        }
        let v = cell_average(|x| a(x), lo, hi);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Validation(format!(
                "fragmentation rate average is {v} on cell {j}"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// `kappa_{i,j}`: tensor-product cell averages.
pub fn discretize_coag_kernel(
    kernel: &KernelFn,
    grid: &GridSpec,
    truncate_k2: bool,
) -> Result<KernelMatrix> {
    let n = grid.len();
    let cells: Vec<(f64, f64)> = (0..n).map(|j| grid.cell(j)).collect();
    let average = |i: usize, j: usize| {
        let (ci, cj) = (cells[i], cells[j]);
        let area = (ci.1 - ci.0) * (cj.1 - cj.0);
        simpson_2d(|x, y| kernel(x, y), ci, cj, SUBINTERVALS_PER_CELL) / area
    };

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| average(i, j)).collect())
        .collect();

    // Asymmetry check on a strided subset of the transposed averages.
    let stride = (n / 48).max(1);
    for i in (0..n).step_by(stride) {
        for j in ((i + 1)..n).step_by(stride) {
            let (a, b) = (upper[i][j - i], average(j, i));
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::Validation(format!(
                    "coagulation kernel averages differ on cells ({i}, {j}): {a} vs {b}"
                )));
            }
        }
    }

    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut v = upper[i][j - i];
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "coagulation kernel average is {v} on cells ({i}, {j})"
                )));
            }
            if truncate_k2 && i + j > grid.cells() {
                v = 0.0;
            }
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    KernelMatrix::from_dense(n, values)
}

/// `b_{i,j}`: daughter count of parent `x_i` landing in cell `j`.
pub fn discretize_daughter(b: &DaughterDistribution, grid: &GridSpec) -> Result<DaughterMatrix> {
    let n = grid.len();
    let mut out = DaughterMatrix::zeros(n);
    for i in 0..n {
        let parent = grid.midpoint(i);
        if let Some(density) = &b.density {
            for j in 0..=i {
                let (lo, hi) = grid.cell(j);
                let (lo, hi) = (lo.max(b.density_start), hi.min(parent));
                if hi > lo {
                    let v = simpson(|x| density(parent, x), lo, hi, SUBINTERVALS_PER_CELL);
                    out.set(i, j, v);
                }
            }
        }
        for atom in &b.atoms {
            if atom.position > parent * (1.0 + 1e-12) {
                continue;
            }
            if let Some(j) = grid.cell_index(atom.position) {
                let w = (atom.weight)(parent);
                let j = j.min(i);
                out.set(i, j, out.get(i, j) + w);
            }
        }
        for j in 0..=i {
            let v = out.get(i, j);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "daughter weight {v} for parent cell {i}, daughter cell {j}"
                )));
            }
        }
    }
    Ok(out)
}

/// Bounding constants actually used for CFL bounds and diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub zeta: f64,
    pub zeta_bar: f64,
    pub c_kappa: f64,
    pub c_a: f64,
    pub c_b: f64,
    /// Names of the constants estimated from grid samples.
    pub estimated: Vec<String>,
}

impl Bounds {
    /// Total-variation ceiling `tv0 exp((zeta + C_b C_a) T)`.
    pub fn tv_ceiling(&self, tv0: f64, t_final: f64) -> f64 {
        tv0 * ((self.zeta + self.c_b * self.c_a) * t_final).exp()
    }

    /// Per-step flat-distance Lipschitz constant
    /// `(3.5 zeta + C_a + C_b C_a + 1.5 C_kappa C*) C*` with `C*` the TV ceiling.
    pub fn time_lipschitz(&self, tv0: f64, t_final: f64) -> f64 {
        let c_star = self.tv_ceiling(tv0, t_final);
        let coag = if self.c_kappa > 0.0 { 1.5 * self.c_kappa * c_star } else { 0.0 };
        (3.5 * self.zeta + self.c_a + self.c_b * self.c_a + coag) * c_star
    }
}

/// `(sup |f|, sup |slope|)` of sampled midpoint values.
fn sup_and_slope(values: &[f64], xs: &[f64]) -> (f64, f64) {
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slope = values
        .windows(2)
        .zip(xs.windows(2))
        .map(|(v, x)| ((v[1] - v[0]) / (x[1] - x[0])).abs())
        .fold(0.0f64, f64::max);
    (sup, slope)
}

fn rate_norm(rate: &Rate, mu: &GridMeasure, xs: &[f64]) -> f64 {
    if rate.is_zero() {
        return 0.0;
    }
    let (sup, slope) = sup_and_slope(&rate.eval(0.0, mu), xs);
    sup + slope
}

/// Fill in the constants the caller did not supply from samples at `mu0`.
pub fn resolve_bounds(spec: &ProblemSpec, kernels: &DiscreteKernels, mu0: &GridMeasure) -> Bounds {
    let xs = mu0.grid().midpoints();
    let mut estimated = Vec::new();
    let mut pick = |name: &str, given: Option<f64>, present: bool, estimate: &dyn Fn() -> f64| {
        given.unwrap_or_else(|| {
            if !present {
                return 0.0;
            }
            estimated.push(name.to_string());
            ESTIMATE_SAFETY * estimate()
        })
    };
    let b = &spec.bounds;
    let rates_present = !(spec.growth.is_zero() && spec.death.is_zero() && spec.birth.is_zero());
    let zeta = pick("zeta", b.zeta, rates_present, &|| {
        [&spec.growth, &spec.death, &spec.birth]
            .iter()
            .map(|r| rate_norm(r, mu0, &xs))
            .sum()
    });
    let c_kappa = pick("c_kappa", b.c_kappa, spec.kernel.is_some(), &|| {
        kernels.kernel.as_ref().map_or(0.0, KernelMatrix::max)
    });
    let frag = spec.frag_rate.is_some();
    let c_a = pick("c_a", b.c_a, frag, &|| {
        // Cell 0 takes no part in fragmentation.
        kernels.frag_rate[1..].iter().copied().fold(0.0, f64::max)
    });
    let c_b = pick("c_b", b.c_b, frag, &|| {
        (0..kernels.daughters.size())
            .map(|i| kernels.daughters.row_sum(i))
            .fold(0.0, f64::max)
    });
    let a_norm = pick("a_lipschitz_norm", b.a_lipschitz_norm, frag, &|| {
        let (sup, slope) = sup_and_slope(&kernels.frag_rate[1..], &xs[1..]);
        sup + slope
    });
    Bounds {
        zeta,
        zeta_bar: zeta.max(a_norm),
        c_kappa,
        c_a,
        c_b,
        estimated,
    }
}

/// Largest `dt` satisfying the CFL condition of `variant`; `cap` when unbounded.
///
/// Explicit: `dt (C_k tv0 e^{(zeta + C_b C_a) T} + C_a max(1, C_b) + (1 + 3/(2 dx)) zeta) <= 1`.
/// Semi-implicit: `zeta_bar (2 + 3/(2 dx)) dt <= 1`.
pub fn cfl_max_dt(
    bounds: &Bounds,
    grid: &GridSpec,
    variant: Variant,
    t_final: f64,
    tv0: f64,
    cap: f64,
) -> f64 {
    let dx = grid.dx();
    let rate = match variant {
        Variant::Explicit => {
            let coag = if bounds.c_kappa > 0.0 {
                bounds.c_kappa * bounds.tv_ceiling(tv0, t_final)
            } else {
                0.0
            };
            coag + bounds.c_a * bounds.c_b.max(1.0)
                + (1.0 + 1.5 / dx) * bounds.zeta
        }
        Variant::SemiImplicit => bounds.zeta_bar * (2.0 + 1.5 / dx),
    };
    if rate > 0.0 {
        (1.0 / rate).min(cap)
    } else {
        cap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::DaughterAtom;
    use std::sync::Arc;

    fn grid(x_max: f64, j: usize) -> GridSpec {
        GridSpec::new(x_max, j).unwrap()
    }

    fn bounds(zeta: f64, zeta_bar: f64, c_kappa: f64, c_a: f64, c_b: f64) -> Bounds {
        Bounds {
            zeta,
            zeta_bar,
            c_kappa,
            c_a,
            c_b,
            estimated: vec![],
        }
    }

    #[test]
    fn frag_rate_averages() {
        let g = grid(2.0, 10);
        let a: SizeFn = Arc::new(|x| x);
        let v = discretize_frag_rate(&a, &g, 0.0).unwrap();
        for (j, &ai) in v.iter().enumerate() {
            assert!((ai - g.midpoint(j)).abs() < 1e-14, "cell {j}");
        }
        let one: SizeFn = Arc::new(|_| 1.0);
        assert!(discretize_frag_rate(&one, &g, 0.0)
            .unwrap()
            .iter()
            .all(|&v| (v - 1.0).abs() < 1e-14));
        let sq: SizeFn = Arc::new(|x| x * x);
        let v = discretize_frag_rate(&sq, &grid(4.0, 4), 0.0).unwrap();
        assert!((v[1] - 13.0 / 12.0).abs() < 1e-14);
        let neg: SizeFn = Arc::new(|x| -x);
        assert!(discretize_frag_rate(&neg, &g, 0.0).is_err());
    }

    #[test]
    fn coag_kernel_averages() {
        let one: KernelFn = Arc::new(|_, _| 1.0);
        let k = discretize_coag_kernel(&one, &grid(2.0, 8), false).unwrap();
        assert!((0..9).all(|i| (0..9).all(|j| (k.get(i, j) - 1.0).abs() < 1e-14)));

        let k = discretize_coag_kernel(&one, &grid(2.0, 4), true).unwrap();
        assert_eq!(k.get(2, 3), 0.0);
        assert!((k.get(1, 3) - 1.0).abs() < 1e-14);

        let sum: KernelFn = Arc::new(|x, y| x + y);
        let g = grid(4.0, 4);
        let k = discretize_coag_kernel(&sum, &g, false).unwrap();
        assert!((k.get(1, 1) - 2.0).abs() < 1e-14);
        for i in 0..5 {
            for j in 0..5 {
                assert!((k.get(i, j) - (g.midpoint(i) + g.midpoint(j))).abs() < 1e-13);
            }
        }
        let skew: KernelFn = Arc::new(|x, y| 1.0 + x - 0.5 * y);
        assert!(matches!(
            discretize_coag_kernel(&skew, &g, false),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn gain_rows_follow_anti_diagonals() {
        let prod: KernelFn = Arc::new(|x, y| x * y + 1.0);
        let k = discretize_coag_kernel(&prod, &grid(3.0, 6), false).unwrap();
        for j in 0..7 {
            let row = k.gain_row(j);
            assert_eq!(row.len(), j.saturating_sub(1));
            for (idx, &v) in row.iter().enumerate() {
                assert_eq!(v, k.get(idx + 1, j - idx - 1));
            }
        }
    }

    #[test]
    fn uniform_daughters() {
        let g = grid(20.0, 100);
        let b = DaughterDistribution::density(|y, _| 2.0 / y);
        let m = discretize_daughter(&b, &g).unwrap();
        let i = 40;
        let xi = g.midpoint(i);
        for j in 1..i {
            assert!((m.get(i, j) - 2.0 * g.dx() / xi).abs() < 1e-13);
        }
        for i in 1..=100 {
            assert!((m.row_sum(i) - 2.0).abs() < 1e-12, "row {i}");
        }
        assert_eq!(m.get(3, 7), 0.0);
        assert_eq!(m.column(7).len(), 101 - 7);
        assert_eq!(m.column(7)[3], m.get(10, 7));
    }

    #[test]
    fn mixed_daughters_for_parent_ten() {
        let g = grid(20.0, 20);
        let b = DaughterDistribution {
            atoms: (1..=5)
                .map(|i| DaughterAtom {
                    position: i as f64,
                    weight: Arc::new(|y| 2.0 / y),
                })
                .collect(),
            density: Some(Arc::new(|y, _| 2.0 / y)),
            density_start: 5.0,
        };
        let m = discretize_daughter(&b, &g).unwrap();
        let parent = 10;
        assert_eq!(g.midpoint(parent), 10.0);
        for site in 1..=4 {
            assert!((m.get(parent, site) - 0.2).abs() < 1e-14);
        }
        // Cell 5 = [4.5, 5.5): the atom plus the density on [5, 5.5).
        assert!((m.get(parent, 5) - (0.2 + 0.5 * 0.2)).abs() < 1e-14);
        assert!((m.row_sum(parent) - 2.0).abs() < 1e-12);
        for y in 5..=20 {
            assert!((m.row_sum(y) - 2.0).abs() < 1e-12, "parent {y}");
        }
        // Parent 3 only sees atoms 1..3.
        assert!((m.row_sum(3) - 3.0 * 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn cfl_bounds() {
        let g = grid(1.0, 10);
        let b = bounds(0.0, 2.0, 0.0, 0.0, 0.0);
        let dt = cfl_max_dt(&b, &g, Variant::SemiImplicit, 1.0, 1.0, 10.0);
        assert!((dt - 1.0 / 34.0).abs() < 1e-15);

        let g = grid(20.0, 100);
        let b = bounds(0.0, 0.0, 1.0, 0.0, 0.0);
        assert!((cfl_max_dt(&b, &g, Variant::Explicit, 0.5, 1.0, 10.0) - 1.0).abs() < 1e-15);
        assert_eq!(cfl_max_dt(&b, &g, Variant::SemiImplicit, 0.5, 1.0, 10.0), 10.0);
        let zero = bounds(0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(cfl_max_dt(&zero, &g, Variant::Explicit, 0.5, 1.0, 0.25), 0.25);
        // Overflowing TV ceiling with no coagulation.
        let frag = bounds(0.0, 0.0, 0.0, 100.0, 2.0);
        assert!(frag.tv_ceiling(15.0, 4.0).is_infinite());
        assert!((cfl_max_dt(&frag, &g, Variant::Explicit, 4.0, 15.0, 4.0) - 1.0 / 200.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_csv_has_triples() {
        let one: KernelFn = Arc::new(|_, _| 1.0);
        let k = discretize_coag_kernel(&one, &grid(1.0, 4), false).unwrap();
        let mut buf = Vec::new();
        k.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("i,j,value\n"));
        assert_eq!(text.lines().count(), 1 + 25);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn semi_implicit_bound_is_looser(
                zeta in 0.0f64..5.0,
                c_kappa in 0.0f64..3.0,
                c_a in 0.0f64..3.0,
                c_b in 0.0f64..3.0,
                tv0 in 0.0f64..3.0,
                cells in 4usize..400,
            ) {
                let b = bounds(zeta, zeta, c_kappa, c_a, c_b);
                let t = 0.5;
                prop_assume!(b.c_kappa * b.tv_ceiling(tv0, t) + c_a * c_b.max(1.0) >= zeta);
                let g = GridSpec::new(20.0, cells).unwrap();
                let e = cfl_max_dt(&b, &g, Variant::Explicit, t, tv0, 1e6);
                let s = cfl_max_dt(&b, &g, Variant::SemiImplicit, t, tv0, 1e6);
                prop_assert!(s >= e * (1.0 - 1e-12));
            }

            #[test]
            fn affine_averages_are_midpoint_values(
                c0 in -2.0f64..2.0, c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, cells in 4usize..40,
            ) {
                let g = GridSpec::new(3.0, cells).unwrap();
                let off = c0.abs() + 1.0;
                let a: SizeFn = Arc::new(move |x| off + c1 * x);
                let v = discretize_frag_rate(&a, &g, 0.0).unwrap();
                for (j, &ai) in v.iter().enumerate() {
                    prop_assert!((ai - (off + c1 * g.midpoint(j))).abs() < 1e-12);
                }
                let k: KernelFn = Arc::new(move |x, y| off + c2 * (x + y));
                let m = discretize_coag_kernel(&k, &g, false).unwrap();
                for i in 0..g.len() {
                    for j in 0..g.len() {
                        let expect = off + c2 * (g.midpoint(i) + g.midpoint(j));
                        prop_assert!((m.get(i, j) - expect).abs() < 1e-12);
                    }
                }
            }

            #[test]
            fn daughter_rows_never_exceed_count(cells in 4usize..120, p in 0i32..=3) {
                // b_c(y, x) = (p + 1) x^p / y^{p+1} integrates to 1 over [0, y].
                let g = GridSpec::new(10.0, cells).unwrap();
                let q = p as f64 + 1.0;
                let b = DaughterDistribution::density(move |y, x| q * x.powi(p) / y.powi(p + 1));
                let m = discretize_daughter(&b, &g).unwrap();
                for i in 0..g.len() {
                    prop_assert!(m.row_sum(i) <= 1.0 + 1e-9);
                }
            }
        }
    }
}
