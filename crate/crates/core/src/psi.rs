//! Grid checks for the proof-internal lemmas about `psi(t) = |x + t d|^p / c_h^p`.
//!
//! `psi'` is computed analytically through the gradient of `|.|^p`
//! (`psi'(t) = phi'(x + t d) d / c_h^p`), never by finite differences, so the
//! checks do not inherit finite-difference error. A negative worst slack
//! signals either an implementation bug or a stored `c_h` that is too small.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::math;
use crate::space::SpaceDescriptor;

/// Outcome of one lemma check: the worst (smallest) slack `rhs - lhs` over
/// the grid, where the lemma asserts `lhs <= rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaSlack {
    pub name: String,
    pub worst_slack: f64,
    pub applicable: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiReport {
    pub checks: Vec<LemmaSlack>,
}

impl PsiReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verify the four `psi` lemmas on a uniform grid `t in [0, 1]`.
///
/// 1. `|psi'(t)| <= p psi(t)^(1-1/p) |d|`
/// 2. `|psi'(t) - psi'(s)| <= |t-s|^(p-1) |d|^p` over all grid pairs
/// 3. `|psi(t) - psi(0) - t psi'(0)| <= |t d|^p / p`
/// 4. when `|d|^p <= q/2`: `psi(0) + psi'(0) t + q >= max(psi(0)/2, q/2)`
pub fn check_psi_lemmas(
    space: &SpaceDescriptor,
    x: &[f64],
    d: &[f64],
    q: f64,
    t_grid: usize,
) -> Result<PsiReport> {
    if t_grid < 2 {
        return Err(invalid("t_grid must be >= 2"));
    }
    if q < 0.0 {
        return Err(invalid("q must be nonnegative"));
    }
    let p = space.p;
    let chp = math::pow(space.c_h, p);
    space.norm(x)?;
    let nd = space.norm(d)?;
    let ndp = math::pow(nd, p);

    let ts: Vec<f64> = (0..t_grid)
        .map(|i| i as f64 / (t_grid - 1) as f64)
        .collect();
    let mut psis = Vec::with_capacity(t_grid);
    let mut dpsis = Vec::with_capacity(t_grid);
    let mut pt = Vec::with_capacity(x.len());
    for &t in &ts {
        pt.clear();
        pt.extend(x.iter().zip(d).map(|(&xi, &di)| xi + t * di));
        let psi = math::pow(space.norm_unchecked(&pt), p) / chp;
        let dpsi = space.phi_gradient(&pt)?.apply(d) / chp;
        psis.push(psi);
        dpsis.push(dpsi);
    }

    // Roundoff floor: the lemmas hold with equality in places, so tiny
    // negative slacks are attributed to floating point.
    let scale = 1.0 + ndp + q + psis.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-10 * scale;

    // 1. size bound on psi'.
    let mut s1 = f64::INFINITY;
    for i in 0..t_grid {
        let rhs = p * math::pow(psis[i], 1.0 - 1.0 / p) * nd;
        s1 = s1.min(rhs - math::abs(dpsis[i]));
    }

    // 2. Hölder continuity of psi' over all grid pairs.
    let mut s2 = f64::INFINITY;
    for i in 0..t_grid {
        for j in (i + 1)..t_grid {
            let rhs = math::pow(ts[j] - ts[i], p - 1.0) * ndp;
            s2 = s2.min(rhs - math::abs(dpsis[j] - dpsis[i]));
        }
    }

    // 3. linear approximation error.
    let mut s3 = f64::INFINITY;
    for i in 0..t_grid {
        let lhs = math::abs(psis[i] - psis[0] - ts[i] * dpsis[0]);
        let rhs = math::pow(ts[i] * nd, p) / p;
        s3 = s3.min(rhs - lhs);
    }

    // 4. lower bound on the linearization, only when |d|^p <= q/2.
    let applicable = ndp <= q / 2.0;
    let mut s4 = f64::INFINITY;
    if applicable {
        for i in 0..t_grid {
            let lhs = f64::max(psis[0] / 2.0, q / 2.0);
            let rhs = psis[0] + dpsis[0] * ts[i] + q;
            s4 = s4.min(rhs - lhs);
        }
    }

    let mk = |name: &str, slack: f64, applicable: bool| LemmaSlack {
        name: String::from(name),
        worst_slack: slack,
        applicable,
        pass: !applicable || slack >= -tol,
    };
    Ok(PsiReport {
        checks: alloc::vec![
            mk("psi_prime_size", s1, true),
            mk("psi_prime_holder", s2, true),
            mk("psi_linear_approx", s3, true),
            mk("psi_linearization_lower", s4, applicable),
        ],
    })
}
