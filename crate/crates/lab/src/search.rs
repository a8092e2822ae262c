//! Adversarial ratio search: coordinate-perturbation hill climbing over
//! terminal values and leaf weights, maximizing `E(f* w) / E(S_p f w*)`.
//!
//! Accept-if-improved with a geometric step decay; no gradients (the
//! objective is only piecewise smooth because of the maxima involved). Runs
//! are single-threaded and fully determined by the seed, so the best ratio
//! can be frozen as a regression fixture.

use bdg_core::dyadic::{
    maximal_process, pair_expectation, p_variation, weight_processes, FiltrationTree, Martingale,
};
use bdg_core::error::Result;
use bdg_core::verify::bound_maximal_ch;
use bdg_core::SpaceDescriptor;
use serde::{Deserialize, Serialize};

use crate::rng::Rng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub space: SpaceDescriptor,
    pub depth: usize,
    pub iterations: u64,
    pub seed: u64,
    pub initial_step: f64,
    pub decay: f64,
    pub step_floor: f64,
}

impl SearchConfig {
    pub fn new(space: SpaceDescriptor, depth: usize, iterations: u64, seed: u64) -> Self {
        SearchConfig {
            space,
            depth,
            iterations,
            seed,
            initial_step: 0.5,
            decay: 0.9995,
            step_floor: 1e-4,
        }
    }
}

/// A frozen instance: enough to rebuild the martingale and weight exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFixture {
    pub space: SpaceDescriptor,
    pub depth: usize,
    pub generator: String,
    pub seed: u64,
    pub leaf_values: Vec<f64>,
    pub weights: Vec<f64>,
    pub expected_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: u32,
    pub iterations: u64,
    pub seed: u64,
    pub best_ratio: f64,
    /// Proven upper bound `21 p' c_h`; the search must stay below it.
    pub bound: f64,
    pub within_bound: bool,
    /// `(iteration, ratio)` at every improvement.
    pub trajectory: Vec<(u64, f64)>,
    pub fixture: InstanceFixture,
}

fn objective(
    space: &SpaceDescriptor,
    tree: &FiltrationTree,
    terminal: &[f64],
    weights: &[f64],
) -> Result<f64> {
    let mart = Martingale::from_terminal(tree, space.dim(), terminal)?;
    let wt = weight_processes(tree, weights)?;
    let f_star = maximal_process(space, mart.process())?;
    let s_p = p_variation(space, mart.process(), space.p, true)?;
    let lhs = pair_expectation(tree, f_star.leaf_values(), weights)?;
    let rhs = pair_expectation(tree, &s_p, wt.w_star())?;
    Ok(if rhs > 0.0 { lhs / rhs } else { 0.0 })
}

/// Run the search from the ratio-1 start (constant martingale, unit weight).
pub fn run_search(cfg: &SearchConfig) -> Result<SearchReport> {
    let tree = FiltrationTree::new(cfg.depth)?;
    let dim = cfg.space.dim();
    let leaves = tree.leaves();
    let mut rng = Rng::seeded(cfg.seed);

    // constant martingale with |c| = 1 in the first coordinate, unit weight
    let mut terminal = vec![0.0; leaves * dim];
    for leaf in 0..leaves {
        terminal[leaf * dim] = 1.0;
    }
    let mut weights = vec![1.0; leaves];
    let mut best = objective(&cfg.space, &tree, &terminal, &weights)?;
    let mut trajectory = vec![(0u64, best)];
    let mut step = cfg.initial_step;

    let n_coords = leaves * dim + leaves;
    for iter in 1..=cfg.iterations {
        let coord = rng.index(n_coords);
        let delta = step * (2.0 * rng.u01() - 1.0);
        let (old, is_weight) = if coord < leaves * dim {
            (terminal[coord], false)
        } else {
            (weights[coord - leaves * dim], true)
        };
        let proposed = if is_weight {
            f64::max(0.0, old + delta)
        } else {
            old + delta
        };
        if is_weight {
            weights[coord - leaves * dim] = proposed;
        } else {
            terminal[coord] = proposed;
        }
        let val = objective(&cfg.space, &tree, &terminal, &weights)?;
        if val > best {
            best = val;
            trajectory.push((iter, best));
        } else {
            // revert
            if is_weight {
                weights[coord - leaves * dim] = old;
            } else {
                terminal[coord] = old;
            }
        }
        step = f64::max(cfg.step_floor, step * cfg.decay);
    }

    let bound = bound_maximal_ch(&cfg.space);
    Ok(SearchReport {
        schema: 1,
        iterations: cfg.iterations,
        seed: cfg.seed,
        best_ratio: best,
        bound,
        within_bound: best < bound,
        trajectory,
        fixture: InstanceFixture {
            space: cfg.space.clone(),
            depth: cfg.depth,
            generator: String::from("adversarial-seeded"),
            seed: cfg.seed,
            leaf_values: terminal,
            weights,
            expected_ratio: best,
        },
    })
}
