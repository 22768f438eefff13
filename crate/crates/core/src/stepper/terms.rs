//! Fragmentation and coagulation source terms.
//!
//! Outputs are indexed like the masses; entry 0 is unused and left at zero
//! because the boundary cell takes no part in either process.

use rayon::prelude::*;

use crate::discretize::{DaughterMatrix, KernelMatrix};

/// `F_j = sum_{i=j}^{J} b_{i,j} a_i m_i - a_j m_j` for `j = 1..=J`.
pub fn frag_term_into(a: &[f64], b: &DaughterMatrix, m: &[f64], out: &mut [f64], parallel: bool) {
    let cell = |j: usize| {
        let col = b.column(j);
        let mut gain = 0.0;
        for (offset, &bij) in col.iter().enumerate() {
            let i = j + offset;
            gain += bij * a[i] * m[i];
        }
        gain - a[j] * m[j]
    };
    out[0] = 0.0;
    if parallel {
        out[1..]
            .par_iter_mut()
            .enumerate()
            .for_each(|(k, v)| *v = cell(k + 1));
    } else {
        for (k, v) in out[1..].iter_mut().enumerate() {
            *v = cell(k + 1);
        }
    }
}

pub fn frag_term(a: &[f64], b: &DaughterMatrix, m: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.len()];
    frag_term_into(a, b, m, &mut out, false);
    out
}

/// `(1/2) sum_{i=1}^{j-1} kappa_{i,j-i} u_i v_{j-i}`.
#[inline]
pub(crate) fn coag_gain(kappa: &KernelMatrix, j: usize, u: &[f64], v: &[f64]) -> f64 {
    let row = kappa.gain_row(j);
    let mut acc = 0.0;
    for (idx, &k) in row.iter().enumerate() {
        let i = idx + 1;
        acc += k * u[i] * v[j - i];
    }
    0.5 * acc
}

/// `sum_{i=1}^{J} kappa_{i,j} m_i`.
#[inline]
pub(crate) fn coag_loss_rate(kappa: &KernelMatrix, j: usize, m: &[f64]) -> f64 {
    let row = kappa.row(j);
    let mut acc = 0.0;
    for i in 1..m.len() {
        acc += row[i] * m[i];
    }
    acc
}

/// Explicit coagulation term `C_j` for `j = 1..=J`.
pub fn coag_explicit_into(kappa: &KernelMatrix, m: &[f64], out: &mut [f64], parallel: bool) {
    let cell = |j: usize| coag_gain(kappa, j, m, m) - coag_loss_rate(kappa, j, m) * m[j];
    out[0] = 0.0;
    if parallel {
        out[1..]
            .par_iter_mut()
            .enumerate()
            .for_each(|(k, v)| *v = cell(k + 1));
    } else {
        for (k, v) in out[1..].iter_mut().enumerate() {
            *v = cell(k + 1);
        }
    }
}

pub fn coag_explicit(kappa: &KernelMatrix, m: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.len()];
    coag_explicit_into(kappa, m, &mut out, false);
    out
}
