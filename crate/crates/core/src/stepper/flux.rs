//! Transport fluxes and the renewal boundary closure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flux limiter selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limiter {
    /// `((sign p + sign q)/2) min(|p|, |q|)`.
    #[default]
    Standard,
    /// Same sign rule with `max` in place of `min`.
    PaperLiteral,
    /// First-order upwind everywhere.
    Off,
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn minmod(p: f64, q: f64, limiter: Limiter) -> f64 {
    let s = 0.5 * (sign(p) + sign(q));
    if s == 0.0 {
        return 0.0;
    }
    match limiter {
        Limiter::PaperLiteral => s * p.abs().max(q.abs()),
        Limiter::Standard | Limiter::Off => s * p.abs().min(q.abs()),
    }
}

/// Fluxes `f_{j+1/2}` for `j = 0..=J` into `out`.
///
/// Cells `0, 1, J-1, J` (and every cell with the limiter off) use the upwind
/// flux `g_j m_j`; cells `2..=J-2` add the second-order correction
/// `(g_{j+1} - g_j) m_j / 2 + g_j mm(m_{j+1} - m_j, m_j - m_{j-1}) / 2`.
pub fn compute_fluxes_into(g: &[f64], m: &[f64], limiter: Limiter, out: &mut [f64]) {
    let n = m.len();
    debug_assert!(g.len() == n && out.len() == n && n >= 5);
    let last = n - 1;
    for j in 0..n {
        let upwind = g[j] * m[j];
        out[j] = if limiter == Limiter::Off || j < 2 || j + 1 >= last {
            upwind
        } else {
            let correction = 0.5 * (g[j + 1] - g[j]) * m[j]
                + 0.5 * g[j] * minmod(m[j + 1] - m[j], m[j] - m[j - 1], limiter);
            upwind + correction
        };
    }
}

pub fn compute_fluxes(g: &[f64], m: &[f64], limiter: Limiter) -> Vec<f64> {
    let mut out = vec![0.0; m.len()];
    compute_fluxes_into(g, m, limiter, &mut out);
    out
}

/// Renewal closure `g_0 m_0 = dx (3/2 b_1 m_1 + 1/2 b_J m_J + sum_{j=2}^{J-1} b_j m_j)`.
///
/// Returns 0 when the growth rate vanishes identically.
pub fn boundary_mass(g: &[f64], beta: &[f64], m: &[f64], dx: f64) -> Result<f64> {
    let last = m.len() - 1;
    let weighted: f64 = 1.5 * beta[1] * m[1]
        + 0.5 * beta[last] * m[last]
        + (2..last).map(|j| beta[j] * m[j]).sum::<f64>();
    if g.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let g0 = g[0];
    if g0 <= 0.0 {
        if (1..=last).any(|j| beta[j] * m[j] > 0.0) {
            return Err(Error::Boundary(format!(
                "growth at the origin is {g0} while births are positive"
            )));
        }
        return Ok(0.0);
    }
    Ok(dx * weighted / g0)
}
