//! Exact verification of the weighted and unweighted inequalities on finite
//! dyadic instances, and the telescoping (supermartingale) mechanics of the
//! Bellman proofs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::bellman::{
    gap_max, gap_plain, BellmanConstants, MaxPoint, Perturbation, PlainPoint,
};
use crate::conditions::Variant;
use crate::dyadic::{
    conditional_square_function, lr_norm, maximal_process, norm_process, pair_expectation,
    p_variation, variation_sums, weight_processes, Martingale, ScalarProcess, VectorProcess,
};
use crate::error::{invalid, violation, Result};
use crate::math;
use crate::space::SpaceDescriptor;

/// Outcome of checking `lhs <= bound * rhs` on one instance.
///
/// `satisfied` allows a `1e-12`-of-scale slack for roundoff; `ratio` is
/// `lhs / rhs`, reported as 0 when `rhs = 0` (which forces `lhs = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub bound: f64,
    pub satisfied: bool,
}

impl RatioReport {
    fn new(lhs: f64, rhs: f64, bound: f64) -> Self {
        let scale = 1.0 + lhs + bound * rhs;
        RatioReport {
            lhs,
            rhs,
            ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
            bound,
            satisfied: lhs <= bound * rhs + 1e-12 * scale,
        }
    }
}

/// `21 p' c_h` — the sharper constant of the weighted maximal inequality.
pub fn bound_maximal_ch(space: &SpaceDescriptor) -> f64 {
    21.0 * space.p_conj() * space.c_h
}

/// `84 p' c_sm` — the smoothness-constant form of the same bound.
pub fn bound_maximal_sm(space: &SpaceDescriptor) -> f64 {
    84.0 * space.p_conj() * space.c_sm
}

/// `9 c_h` — the non-maximal bound (no explicit `p` dependence).
pub fn bound_nonmaximal(space: &SpaceDescriptor) -> f64 {
    9.0 * space.c_h
}

/// Check `E(f* w) <= 21 p' c_h E(S_p f w*)` (and the weaker `84 p' c_sm`
/// form) exactly; the report carries the sharper bound.
pub fn verify_maximal_weighted(
    space: &SpaceDescriptor,
    mart: &Martingale,
    w: &[f64],
) -> Result<RatioReport> {
    let tree = mart.tree();
    let wt = weight_processes(&tree, w)?;
    let f_star = maximal_process(space, mart.process())?;
    let s_p = p_variation(space, mart.process(), space.p, true)?;
    let lhs = pair_expectation(&tree, f_star.leaf_values(), w)?;
    let rhs = pair_expectation(&tree, &s_p, wt.w_star())?;
    let sharper = RatioReport::new(lhs, rhs, bound_maximal_ch(space));
    let weaker = RatioReport::new(lhs, rhs, bound_maximal_sm(space));
    if !weaker.satisfied {
        return Ok(weaker);
    }
    Ok(sharper)
}

/// Check the non-maximal estimate `E(|f_N| w) <= 9 c_h E(S_p f w*)` exactly.
pub fn verify_nonmaximal_weighted(
    space: &SpaceDescriptor,
    mart: &Martingale,
    w: &[f64],
) -> Result<RatioReport> {
    let tree = mart.tree();
    let wt = weight_processes(&tree, w)?;
    let norms = norm_process(space, mart.process())?;
    let s_p = p_variation(space, mart.process(), space.p, true)?;
    let lhs = pair_expectation(&tree, norms.leaf_values(), w)?;
    let rhs = pair_expectation(&tree, &s_p, wt.w_star())?;
    Ok(RatioReport::new(lhs, rhs, bound_nonmaximal(space)))
}

/// Check the extrapolated moment bound `||f*||_r <= 21 p' c_h r ||S_p f||_r`.
pub fn verify_lr(space: &SpaceDescriptor, mart: &Martingale, r: f64) -> Result<RatioReport> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(invalid("Lr exponent must lie in (1, infinity)"));
    }
    let tree = mart.tree();
    let f_star = maximal_process(space, mart.process())?;
    let s_p = p_variation(space, mart.process(), space.p, true)?;
    let lhs = lr_norm(&tree, f_star.leaf_values(), r)?;
    let rhs = lr_norm(&tree, &s_p, r)?;
    Ok(RatioReport::new(lhs, rhs, bound_maximal_ch(space) * r))
}

/// Reports for the multiplier-triple process checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TripleReport {
    pub weighted: RatioReport,
    pub lr: RatioReport,
}

/// Build the triple `(g, f, ~f)` from an adapted multiplier `lambda` with
/// values in `[0, 1]` (`~f_n = lambda_n f_n`, `f_n = ~f_{n-1} + g_n - g_{n-1}`,
/// `f_0 = 0`) and check `E(f* w) <= 84 p' c_sm E(S_p g w*)` together with the
/// `L^r` consequence with constant `84 p' c_sm r`.
pub fn verify_triple_process(
    space: &SpaceDescriptor,
    g: &Martingale,
    lambda: &ScalarProcess,
    w: &[f64],
    r: f64,
) -> Result<TripleReport> {
    if space.norm(g.value(0, 0))? != 0.0 {
        return Err(violation("the triple construction requires g_0 = 0"));
    }
    if lambda.depth != g.depth() {
        return Err(invalid("lambda depth must match the martingale"));
    }
    if lambda
        .levels
        .iter()
        .any(|lv| lv.iter().any(|&l| !(0.0..=1.0).contains(&l)))
    {
        return Err(invalid("lambda must take values in [0, 1]"));
    }
    if !(r > 1.0 && r.is_finite()) {
        return Err(invalid("Lr exponent must lie in (1, infinity)"));
    }
    let tree = g.tree();
    let dim = g.dim();
    let depth = g.depth();

    // f_0 = 0; f_n = lambda_{n-1} f_{n-1} + (g_n - g_{n-1}).
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(depth + 1);
    levels.push(alloc::vec![0.0; dim]);
    for n in 1..=depth {
        let mut cur = Vec::with_capacity((1 << n) * dim);
        for i in 0..(1 << n) {
            let parent = i / 2;
            let lam = lambda.value(n - 1, parent);
            let f_prev = &levels[n - 1][parent * dim..(parent + 1) * dim];
            let g_cur = g.value(n, i);
            let g_prev = g.value(n - 1, parent);
            for c in 0..dim {
                cur.push(lam * f_prev[c] + (g_cur[c] - g_prev[c]));
            }
        }
        levels.push(cur);
    }
    let f = VectorProcess::from_levels(depth, dim, levels)?;

    let wt = weight_processes(&tree, w)?;
    let f_star = maximal_process(space, &f)?;
    let s_p_g = p_variation(space, g.process(), space.p, true)?;
    let bound = bound_maximal_sm(space);

    let lhs_w = pair_expectation(&tree, f_star.leaf_values(), w)?;
    let rhs_w = pair_expectation(&tree, &s_p_g, wt.w_star())?;
    let weighted = RatioReport::new(lhs_w, rhs_w, bound);

    let lhs_r = lr_norm(&tree, f_star.leaf_values(), r)?;
    let rhs_r = lr_norm(&tree, &s_p_g, r)?;
    let lr = RatioReport::new(lhs_r, rhs_r, bound * r);

    Ok(TripleReport { weighted, lr })
}

/// Check `||sg||_r <= sqrt(r/2) ||S_2 g||_r` for `r >= 2` exactly.
pub fn verify_sg_comparison(
    space: &SpaceDescriptor,
    g: &Martingale,
    r: f64,
) -> Result<RatioReport> {
    if !(r >= 2.0) {
        return Err(invalid("the conditional square function comparison requires r >= 2"));
    }
    let tree = g.tree();
    let sg = conditional_square_function(space, g)?;
    let s2 = p_variation(space, g.process(), 2.0, true)?;
    let lhs = lr_norm(&tree, &sg, r)?;
    let rhs = lr_norm(&tree, &s2, r)?;
    Ok(RatioReport::new(lhs, rhs, math::sqrt(r / 2.0)))
}

/// Result of running the telescoping (supermartingale) argument node by node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepReport {
    pub variant: Variant,
    pub nodes_checked: usize,
    /// Smallest pointwise concavity gap over all (node, child) pairs,
    /// normalized by the gap's own scale.
    pub min_gap_normalized: f64,
    /// Smallest slack of `E(B_{n+1} | F_n) <= B_n`, normalized.
    pub min_conditional_slack_normalized: f64,
    /// `E(B_n)` per level.
    pub expected_b: Vec<f64>,
    pub b0: f64,
    pub monotone_ok: bool,
    /// Slack of the final chain inequality (nonnegative when it holds).
    pub final_chain_slack: f64,
    pub ok: bool,
    pub first_failure: Option<String>,
}

const NODE_TOL: f64 = 1e-9;

/// Run the Bellman telescoping argument on an instance: evaluate the Bellman
/// process `B_n = U(f_n, [f*_n,] q_n, w_n, w*_n)`, check the pointwise
/// concavity gap at every node against the realized child perturbations,
/// the one-step conditional decrease, the monotonicity of `n -> E(B_n)` with
/// `E(B_0) <= 0`, and the final chain inequality that yields the weighted
/// estimate.
pub fn verify_telescoping(
    space: &SpaceDescriptor,
    mart: &Martingale,
    w: &[f64],
    variant: Variant,
    k: &BellmanConstants,
) -> Result<StepReport> {
    let tree = mart.tree();
    let depth = mart.depth();
    let dim = mart.dim();
    let wt = weight_processes(&tree, w)?;
    let q_n = variation_sums(space, mart.process(), space.p, true)?;
    let f_star = maximal_process(space, mart.process())?;

    let eval = |n: usize, i: usize| -> Result<f64> {
        let x = mart.value(n, i).to_vec();
        let q = q_n.value(n, i);
        let u = wt.w_n.value(n, i);
        let v = wt.w_star_n.value(n, i);
        match variant {
            Variant::Plain => u_plain_point(space, x, q, u, v, k),
            Variant::Maximal => {
                let m = f_star.value(n, i);
                crate::bellman::u_max(space, &MaxPoint { x, m, q, u, v }, k)
            }
        }
    };

    let mut b_levels: Vec<Vec<f64>> = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let row: Result<Vec<f64>> = (0..(1 << n)).map(|i| eval(n, i)).collect();
        b_levels.push(row?);
    }

    let mut min_gap = f64::INFINITY;
    let mut min_cond = f64::INFINITY;
    let mut first_failure = None;
    let mut nodes_checked = 0usize;

    let mut d = alloc::vec![0.0f64; dim];
    for n in 0..depth {
        for i in 0..(1 << n) {
            nodes_checked += 1;
            let x = mart.value(n, i);
            let q = q_n.value(n, i);
            let u = wt.w_n.value(n, i);
            let v = wt.w_star_n.value(n, i);
            let mut child_sum = 0.0;
            for child in [2 * i, 2 * i + 1] {
                let cx = mart.value(n + 1, child);
                for c in 0..dim {
                    d[c] = cx[c] - x[c];
                }
                let e = wt.w_n.value(n + 1, child) - u;
                let pert = Perturbation { d: d.clone(), e };
                let gap = match variant {
                    Variant::Plain => gap_plain(
                        space,
                        &PlainPoint {
                            x: x.to_vec(),
                            q,
                            u,
                            v,
                        },
                        &pert,
                        k,
                    )?,
                    Variant::Maximal => gap_max(
                        space,
                        &MaxPoint {
                            x: x.to_vec(),
                            m: f_star.value(n, i),
                            q,
                            u,
                            v,
                        },
                        &pert,
                        k,
                    )?,
                };
                let normalized = gap.value / gap.scale;
                if normalized < min_gap {
                    min_gap = normalized;
                    if normalized < -NODE_TOL && first_failure.is_none() {
                        first_failure = Some(format!(
                            "pointwise gap {normalized:e} at node ({n},{i}) child {child}"
                        ));
                    }
                }
                child_sum += b_levels[n + 1][child];
            }
            let b = b_levels[n][i];
            let cond_scale = 1.0 + math::abs(b) + 0.5 * math::abs(child_sum);
            let slack = (b - 0.5 * child_sum) / cond_scale;
            if slack < min_cond {
                min_cond = slack;
                if slack < -NODE_TOL && first_failure.is_none() {
                    first_failure =
                        Some(format!("conditional decrease fails at node ({n},{i})"));
                }
            }
        }
    }

    let expected_b: Vec<f64> = b_levels
        .iter()
        .map(|lv| lv.iter().sum::<f64>() / lv.len() as f64)
        .collect();
    let level_scale = 1.0
        + expected_b
            .iter()
            .map(|&v| math::abs(v))
            .fold(0.0, f64::max);
    let monotone_ok = expected_b
        .windows(2)
        .all(|pair| pair[1] <= pair[0] + NODE_TOL * level_scale);
    let b0 = expected_b[0];

    // Final chain: the Bellman value at the horizon dominates the target
    // combination, so E(target) <= E(B_N) <= E(B_0) <= 0.
    let q_root: Vec<f64> = q_n
        .leaf_values()
        .iter()
        .map(|&q| math::root(q, space.p))
        .collect();
    let target = match variant {
        Variant::Plain => {
            let norms = norm_process(space, mart.process())?;
            let lhs = pair_expectation(&tree, wt.w_n.leaf_values(), norms.leaf_values())?
                / space.c_h;
            let rhs = pair_expectation(&tree, wt.w_star(), &q_root)?;
            lhs - k.c * rhs
        }
        Variant::Maximal => {
            let lhs = pair_expectation(&tree, wt.w_n.leaf_values(), f_star.leaf_values())?
                / (space.p_conj() * space.c_h);
            let rhs = pair_expectation(&tree, wt.w_star(), &q_root)?;
            lhs - k.c * rhs
        }
    };
    let e_b_n = expected_b[depth];
    let final_chain_slack = e_b_n - target;

    let ok = min_gap >= -NODE_TOL
        && min_cond >= -NODE_TOL
        && monotone_ok
        && b0 <= NODE_TOL * level_scale
        && final_chain_slack >= -NODE_TOL * level_scale;
    if !ok && first_failure.is_none() {
        first_failure = Some(String::from("aggregate telescoping check failed"));
    }

    Ok(StepReport {
        variant,
        nodes_checked,
        min_gap_normalized: min_gap,
        min_conditional_slack_normalized: min_cond,
        expected_b,
        b0,
        monotone_ok,
        final_chain_slack,
        ok,
        first_failure,
    })
}

fn u_plain_point(
    space: &SpaceDescriptor,
    x: Vec<f64>,
    q: f64,
    u: f64,
    v: f64,
    k: &BellmanConstants,
) -> Result<f64> {
    crate::bellman::u_plain(space, &PlainPoint { x, q, u, v }, k)
}
