//! Atomic measures on the size axis.
//!
//! The state of every scheme is a [`GridMeasure`]: one atom per grid cell,
//! placed at the cell midpoint. Comparisons between measures living on
//! different grids go through [`AtomicMeasure`] and [`flat_distance`], the
//! exact bounded-Lipschitz distance between finitely supported measures.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{simpson_nodes, SUBINTERVALS_PER_CELL};

/// Uniform grid over `[0, x_max]` with a half-width boundary cell.
///
/// Cell `0` is `[0, dx/2)` with midpoint `dx/4`; cell `j >= 1` is
/// `[(j - 1/2) dx, (j + 1/2) dx)` with midpoint `j dx`. The cells partition
/// `[0, x_max + dx/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    x_max: f64,
    cells: usize,
}

impl GridSpec {
    /// Smallest cell count for which every branch of the flux stencil is defined.
    pub const MIN_CELLS: usize = 4;

    pub fn new(x_max: f64, cells: usize) -> Result<Self> {
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::Domain(format!("x_max must be positive, got {x_max}")));
        }
        if cells < Self::MIN_CELLS {
            return Err(Error::Domain(format!(
                "grid needs at least {} cells, got {cells}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self { x_max, cells })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Number of full cells `J`; masses are indexed `0..=J`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Length of the mass vector, `J + 1`.
    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.x_max / self.cells as f64
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        if j == 0 {
            0.25 * self.dx()
        } else {
            j as f64 * self.dx()
        }
    }

    pub fn midpoints(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.midpoint(j)).collect()
    }

    /// Half-open cell `[lo, hi)`.
    pub fn cell(&self, j: usize) -> (f64, f64) {
        let dx = self.dx();
        if j == 0 {
            (0.0, 0.5 * dx)
        } else {
            ((j as f64 - 0.5) * dx, (j as f64 + 0.5) * dx)
        }
    }

    /// Right end of the covered interval, `x_max + dx/2`.
    pub fn domain_end(&self) -> f64 {
        self.cell(self.cells).1
    }

    /// Index of the cell containing `x`, if any.
    pub fn cell_index(&self, x: f64) -> Option<usize> {
        if !(x >= 0.0 && x < self.domain_end()) {
            return None;
        }
        let mut j = ((x / self.dx()) + 0.5).floor().max(0.0) as usize;
        j = j.min(self.cells);
        // Floor of a rounded quotient can land one cell off at an edge.
        while j > 0 && x < self.cell(j).0 {
            j -= 1;
        }
        while j < self.cells && x >= self.cell(j).1 {
            j += 1;
        }
        Some(j)
    }
}

/// Anything that can be viewed as a finite list of weighted sites.
pub trait Measure {
    fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_;

    /// Sum of absolute weights.
    fn total_variation(&self) -> f64 {
        self.atoms().map(|(_, w)| w.abs()).sum()
    }

    /// `sum_j x_j^p m_j` for `p` in {0, 1}.
    fn moment(&self, order: u32) -> f64 {
        self.atoms().map(|(x, w)| x.powi(order as i32) * w).sum()
    }
}

pub fn total_variation<M: Measure>(mu: &M) -> f64 {
    mu.total_variation()
}

pub fn moment<M: Measure>(mu: &M, order: u32) -> f64 {
    mu.moment(order)
}

/// Atomic measure `sum_j m_j delta_{x_j}` on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeasure {
    grid: GridSpec,
    masses: Vec<f64>,
}

impl GridMeasure {
    pub fn new(grid: GridSpec, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != grid.len() {
            return Err(Error::Validation(format!(
                "expected {} masses, got {}",
                grid.len(),
                masses.len()
            )));
        }
        if let Some(j) = masses.iter().position(|m| !m.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite mass {} in cell {j}",
                masses[j]
            )));
        }
        Ok(Self { grid, masses })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let masses = vec![0.0; grid.len()];
        Self { grid, masses }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn masses_mut(&mut self) -> &mut [f64] {
        &mut self.masses
    }

    pub fn into_masses(self) -> Vec<f64> {
        self.masses
    }

    /// Smallest mass among the interior cells `1..=J`.
    pub fn min_interior(&self) -> f64 {
        self.masses[1..].iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn to_atomic(&self) -> AtomicMeasure {
        AtomicMeasure {
            sites: self.grid.midpoints(),
            weights: self.masses.clone(),
        }
    }

    /// Redistribute the masses onto a coarser grid over the same interval.
    ///
    /// Each cell's mass is treated as spread uniformly over the cell and
    /// split between the target cells in proportion to their overlap.
    pub fn restrict_to(&self, target: &GridSpec) -> Result<GridMeasure> {
        if (target.x_max() - self.grid.x_max()).abs() > 1e-12 * self.grid.x_max() {
            return Err(Error::Config(format!(
                "cannot restrict a grid on [0, {}] to one on [0, {}]",
                self.grid.x_max(),
                target.x_max()
            )));
        }
        let mut out = vec![0.0; target.len()];
        for (j, &m) in self.masses.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let (lo, hi) = self.grid.cell(j);
            let width = hi - lo;
            let first = target.cell_index(lo).unwrap_or(0);
            for (k, slot) in out.iter_mut().enumerate().skip(first) {
                let (tlo, thi) = target.cell(k);
                if tlo >= hi {
                    break;
                }
                let overlap = hi.min(thi) - lo.max(tlo);
                if overlap > 0.0 {
                    *slot += m * overlap / width;
                }
            }
        }
        GridMeasure::new(target.clone(), out)
    }
}

impl Measure for GridMeasure {
    fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(|(j, &m)| (self.grid.midpoint(j), m))
    }
}

/// Finitely supported signed measure with strictly increasing sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    sites: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(sites: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if sites.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} sites but {} weights",
                sites.len(),
                weights.len()
            )));
        }
        if sites.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite site or weight".into()));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation("sites must be strictly increasing".into()));
        }
        Ok(Self { sites, weights })
    }

    /// Build from unordered pairs, summing weights that share a site.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut sites: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (s, w) in pairs {
            if sites.last() == Some(&s) {
                *weights.last_mut().unwrap() += w;
            } else {
                sites.push(s);
                weights.push(w);
            }
        }
        Self::new(sites, weights)
    }

    pub fn sites(&self) -> &[f64] {
        &self.sites
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Signed difference `self - other` on the merged site set.
    pub fn difference(&self, other: &AtomicMeasure) -> AtomicMeasure {
        let (a, b) = (self, other);
        let mut sites = Vec::with_capacity(a.len() + b.len());
        let mut diffs = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() || k < b.len() {
            let take_a = k >= b.len() || (i < a.len() && a.sites[i] <= b.sites[k]);
            let take_b = i >= a.len() || (k < b.len() && b.sites[k] <= a.sites[i]);
            let (s, mut d) = if take_a {
                (a.sites[i], a.weights[i])
            } else {
                (b.sites[k], 0.0)
            };
            if take_a {
                i += 1;
            }
            if take_b {
                d -= b.weights[k];
                k += 1;
            }
            sites.push(s);
            diffs.push(d);
        }
        AtomicMeasure {
            sites,
            weights: diffs,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["site", "weight"])?;
        for (s, m) in self.sites.iter().zip(&self.weights) {
            w.write_record([format_decimal(*s), format_decimal(*m)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["site", "weight"] {
            return Err(Error::Parse(format!(
                "expected header `site,weight`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut sites = Vec::new();
        let mut weights = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number `{s}`: {e}")))
            };
            sites.push(parse(&rec[0])?);
            weights.push(parse(&rec[1])?);
        }
        Self::new(sites, weights)
    }
}

impl Measure for AtomicMeasure {
    fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.sites.iter().copied().zip(self.weights.iter().copied())
    }
}

impl From<&GridMeasure> for AtomicMeasure {
    fn from(m: &GridMeasure) -> Self {
        m.to_atomic()
    }
}

/// Plain decimal rendering carrying 17 significant digits.
pub(crate) fn format_decimal(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.16}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).clamp(0, 400) as usize;
    format!("{v:.decimals$}")
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Closed-form integral of a density over `[a, b]`.
pub type CellIntegralFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Initial data: an optional density plus point masses.
#[derive(Clone, Default)]
pub struct InitialData {
    pub density: Option<DensityFn>,
    /// Exact cell integrals of `density`; replaces quadrature when present.
    pub cell_integral: Option<CellIntegralFn>,
    pub atoms: Vec<(f64, f64)>,
}

impl InitialData {
    pub fn density(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            density: Some(Arc::new(f)),
            ..Self::default()
        }
    }

    pub fn with_cell_integral(
        mut self,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.cell_integral = Some(Arc::new(f));
        self
    }

    pub fn with_atoms(mut self, atoms: Vec<(f64, f64)>) -> Self {
        self.atoms = atoms;
        self
    }
}

impl std::fmt::Debug for InitialData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InitialData")
            .field("density", &self.density.is_some())
            .field("cell_integral", &self.cell_integral.is_some())
            .field("atoms", &self.atoms)
            .finish()
    }
}

/// Project initial data onto the grid: `m_j = mu_0(cell_j)`.
pub fn project_initial(data: &InitialData, grid: &GridSpec) -> Result<GridMeasure> {
    let mut masses = vec![0.0; grid.len()];
    if let Some(integral) = &data.cell_integral {
        for (j, m) in masses.iter_mut().enumerate() {
            let (lo, hi) = grid.cell(j);
            *m = integral(lo, hi);
        }
    } else if let Some(density) = &data.density {
        for (j, m) in masses.iter_mut().enumerate() {
            let (lo, hi) = grid.cell(j);
            let mut acc = 0.0;
            for (x, w) in simpson_nodes(lo, hi, SUBINTERVALS_PER_CELL) {
                let v = density(x);
                if v < 0.0 || !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "initial density is {v} at x = {x}"
                    )));
                }
                acc += w * v;
            }
            *m = acc;
        }
    }
    for &(x, w) in &data.atoms {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::Validation(format!("atom at {x} has weight {w}")));
        }
        let j = grid.cell_index(x).ok_or_else(|| {
            Error::Domain(format!(
                "atom at {x} lies outside [0, {})",
                grid.domain_end()
            ))
        })?;
        masses[j] += w;
    }
    GridMeasure::new(grid.clone(), masses)
}

#[derive(Clone, Copy, Debug)]
struct Knot {
    pos: f64,
    weight: f64,
}

impl PartialEq for Knot {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Knot {}

impl PartialOrd for Knot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Knot {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pos.total_cmp(&other.pos)
    }
}

/// Bounded-Lipschitz norm of a signed atomic measure given as sorted sites
/// and signed weights:
///
/// ```text
/// sup { sum_i phi_i d_i : |phi_i| <= 1, |phi_{i+1} - phi_i| <= s_{i+1} - s_i }
/// ```
///
/// Forward sweep over the sites carrying the concave value function of the
/// last test value as a convex piecewise-linear function `F` on `[-1, 1]`,
/// stored as hinge knots in two heaps (slope-trick). Each site applies a
/// window minimum (shift knots outward by the gap) and adds a linear term.
/// `O(n log n)`.
pub fn flat_norm(sites: &[f64], weights: &[f64]) -> f64 {
    assert_eq!(sites.len(), weights.len());
    // F(x) = floor + sum_L w max(0, p - x) + sum_R w max(0, x - p), min F = floor.
    let mut left: BinaryHeap<Knot> = BinaryHeap::new();
    let mut right: BinaryHeap<Reverse<Knot>> = BinaryHeap::new();
    let (mut shift_left, mut shift_right) = (0.0f64, 0.0f64);
    let mut floor = 0.0f64;

    for (i, (&s, &d)) in sites.iter().zip(weights).enumerate() {
        if i > 0 {
            let gap = s - sites[i - 1];
            shift_left -= gap;
            shift_right += gap;
        }
        let mut c = -d;
        if c > 0.0 {
            while c > 0.0 {
                match left.peek().copied() {
                    Some(k) if k.pos + shift_left >= -1.0 => {
                        left.pop();
                        let p = k.pos + shift_left;
                        let t = k.weight.min(c);
                        if k.weight > t {
                            left.push(Knot {
                                pos: k.pos,
                                weight: k.weight - t,
                            });
                        }
                        right.push(Reverse(Knot {
                            pos: p - shift_right,
                            weight: t,
                        }));
                        floor += t * p;
                        c -= t;
                    }
                    // Knots left of -1 vanish on the domain; the top being stale means all are.
                    Some(_) => left.clear(),
                    None => {
                        right.push(Reverse(Knot {
                            pos: -1.0 - shift_right,
                            weight: c,
                        }));
                        floor -= c;
                        c = 0.0;
                    }
                }
            }
        } else if c < 0.0 {
            c = -c;
            while c > 0.0 {
                match right.peek().copied() {
                    Some(Reverse(k)) if k.pos + shift_right <= 1.0 => {
                        right.pop();
                        let p = k.pos + shift_right;
                        let t = k.weight.min(c);
                        if k.weight > t {
                            right.push(Reverse(Knot {
                                pos: k.pos,
                                weight: k.weight - t,
                            }));
                        }
                        left.push(Knot {
                            pos: p - shift_left,
                            weight: t,
                        });
                        floor -= t * p;
                        c -= t;
                    }
                    Some(_) => right.clear(),
                    None => {
                        left.push(Knot {
                            pos: 1.0 - shift_left,
                            weight: c,
                        });
                        floor -= c;
                        c = 0.0;
                    }
                }
            }
        }
    }
    (-floor).max(0.0)
}

/// Exact bounded-Lipschitz (flat) distance between two atomic measures.
pub fn flat_distance(mu: &AtomicMeasure, nu: &AtomicMeasure) -> f64 {
    let diff = mu.difference(nu);
    flat_norm(&diff.sites, &diff.weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(x_max: f64, j: usize) -> GridSpec {
        GridSpec::new(x_max, j).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = grid(1.0, 4);
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.midpoint(0), 0.0625);
        assert_eq!(g.cell(0), (0.0, 0.125));
        assert_eq!(g.cell(4), (0.875, 1.125));
        assert_eq!(g.domain_end(), 1.125);
        for j in 0..g.len() {
            let (lo, hi) = g.cell(j);
            assert!(lo <= g.midpoint(j) && g.midpoint(j) < hi);
            assert_eq!(g.cell_index(g.midpoint(j)), Some(j));
            assert_eq!(g.cell_index(lo), Some(j));
        }
        assert_eq!(g.cell_index(1.125), None);
        assert_eq!(g.cell_index(-1e-300), None);
        assert!(GridSpec::new(1.0, 3).is_err());
        assert!(GridSpec::new(0.0, 10).is_err());
    }

    #[test]
    fn cell_index_at_decimal_edges() {
        let g = grid(20.0, 100);
        for j in 1..=100 {
            let (lo, _) = g.cell(j);
            assert_eq!(g.cell_index(lo), Some(j));
        }
        for i in 1..=5 {
            assert_eq!(g.cell_index(i as f64), Some(5 * i));
        }
    }

    #[test]
    fn projects_exponential_density() {
        let g = grid(20.0, 100);
        let mu = project_initial(&InitialData::density(|x| (-x).exp()), &g).unwrap();
        let exact = (-0.1f64).exp() - (-0.3f64).exp();
        assert!((mu.masses()[1] - exact).abs() < 1e-10);
    }

    #[test]
    fn projects_total_mass() {
        // Oracle: a much finer composite rule over the whole covered interval.
        let g = grid(20.0, 100);
        let mu = project_initial(&InitialData::density(|x| (-x).exp()), &g).unwrap();
        let fine = crate::quadrature::simpson(|x| (-x).exp(), 0.0, 20.1, 200_000);
        assert!((fine - (1.0 - (-20.1f64).exp())).abs() < 1e-12);
        assert!((mu.moment(0) - fine).abs() < 1e-8);
    }

    #[test]
    fn first_moment_of_projected_exponential() {
        let g = grid(20.0, 400);
        let mu = project_initial(&InitialData::density(|x| (-x).exp()), &g).unwrap();
        assert!((mu.moment(1) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn projects_atom_into_its_cell() {
        let g = grid(2.0, 4);
        let data = InitialData::default().with_atoms(vec![(1.0, 1.0)]);
        let mu = project_initial(&data, &g).unwrap();
        assert_eq!(mu.masses(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_initial_data() {
        let g = grid(2.0, 4);
        let outside = InitialData::default().with_atoms(vec![(2.25, 1.0)]);
        assert!(matches!(project_initial(&outside, &g), Err(Error::Domain(_))));
        let negative = InitialData::density(|x| x - 1.0);
        assert!(matches!(
            project_initial(&negative, &g),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn total_variation_and_moments() {
        let g = grid(2.0, 4);
        assert_eq!(GridMeasure::zeros(g.clone()).total_variation(), 0.0);
        let a = AtomicMeasure::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(total_variation(&a), 6.0);
        let b = AtomicMeasure::new(vec![0.0, 1.0, 2.0], vec![1.0, -2.0, 3.0]).unwrap();
        assert_eq!(b.total_variation(), 6.0);
        let c = AtomicMeasure::new(vec![2.0], vec![3.0]).unwrap();
        assert_eq!(moment(&c, 1), 6.0);
        assert_eq!(a.moment(0), a.total_variation());
    }

    #[test]
    fn atomic_measure_rejects_unsorted_sites() {
        assert!(AtomicMeasure::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(AtomicMeasure::new(vec![1.0], vec![f64::NAN]).is_err());
        let merged = AtomicMeasure::from_pairs(vec![(2.0, 1.0), (1.0, 1.0), (2.0, 0.5)]).unwrap();
        assert_eq!(merged.sites(), &[1.0, 2.0]);
        assert_eq!(merged.weights(), &[1.0, 1.5]);
    }

    #[test]
    fn flat_distance_elementary_cases() {
        let d = |x: f64| AtomicMeasure::new(vec![x], vec![1.0]).unwrap();
        assert_eq!(flat_distance(&d(1.0), &d(1.0)), 0.0);
        for (x, y) in [(0.0f64, 0.3f64), (1.0, 2.5), (0.0, 2.0), (0.0, 7.0), (3.0, 0.5)] {
            let expect = f64::min((x - y).abs(), 2.0);
            assert!((flat_distance(&d(x), &d(y)) - expect).abs() < 1e-14, "{x} {y}");
        }
        let a = AtomicMeasure::new(vec![1.0], vec![0.3]).unwrap();
        let b = AtomicMeasure::new(vec![1.0], vec![-1.2]).unwrap();
        assert!((flat_distance(&a, &b) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn flat_norm_of_a_dipole_chain() {
        // +1, -1, +1 at unit spacing: phi = (1, 0, 1) gives 2; nothing beats it.
        let v = flat_norm(&[0.0, 1.0, 2.0], &[1.0, -1.0, 1.0]);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn csv_round_trip() {
        let a = AtomicMeasure::new(vec![0.05, 1.0 / 3.0, 7.0], vec![1e-9, -2.0 / 7.0, 0.0]).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("site,weight\n"));
        assert!(!text.lines().skip(1).any(|l| l.contains('e')));
        assert_eq!(AtomicMeasure::read_csv(&buf[..]).unwrap(), a);
    }

    #[test]
    fn restriction_preserves_mass_and_uniform_density() {
        let fine = grid(10.0, 40);
        let coarse = grid(10.0, 20);
        let mu = project_initial(&InitialData::density(|_| 1.0), &fine).unwrap();
        let r = mu.restrict_to(&coarse).unwrap();
        assert!((r.moment(0) - mu.moment(0)).abs() < 1e-12);
        let direct = project_initial(&InitialData::density(|_| 1.0), &coarse).unwrap();
        // The last cells differ: each grid's top cell reaches half its own width past x_max.
        for (a, b) in r.masses().iter().zip(direct.masses()).take(20) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(mu.restrict_to(&grid(5.0, 20)).is_err());
    }
}
