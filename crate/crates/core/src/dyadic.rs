//! Finite dyadic filtered probability spaces with exact expectations.
//!
//! The filtration is the uniform dyadic one on a depth-`N` binary tree:
//! node `(n, i)` has children `(n+1, 2i)` and `(n+1, 2i+1)`, every leaf is an
//! atom of measure `2^-N`, and all expectations are exact sums over leaves.
//! Randomness never enters this module; it lives only in instance generation.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, violation, Error, Result};
use crate::math;
use crate::space::SpaceDescriptor;

/// Exact-enumeration bound on the tree depth (2^20 leaves).
pub const MAX_DEPTH: usize = 20;

/// A depth-`N` binary tree carrying the uniform dyadic filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationTree {
    depth: usize,
}

impl FiltrationTree {
    pub fn new(depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(invalid("tree depth exceeds the exact enumeration bound"));
        }
        Ok(FiltrationTree { depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaves(&self) -> usize {
        1 << self.depth
    }

    pub fn nodes_at(&self, level: usize) -> usize {
        1 << level
    }

    /// Ancestor at `level` of the leaf with index `leaf`.
    #[inline]
    pub fn ancestor(&self, leaf: usize, level: usize) -> usize {
        leaf >> (self.depth - level)
    }
}

/// A per-node scalar process on a tree (one value for each node of each level).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarProcess {
    pub depth: usize,
    /// `levels[n]` has length `2^n`.
    pub levels: Vec<Vec<f64>>,
}

impl ScalarProcess {
    pub fn value(&self, level: usize, index: usize) -> f64 {
        self.levels[level][index]
    }

    pub fn leaf_values(&self) -> &[f64] {
        &self.levels[self.depth]
    }
}

/// A per-node vector-valued process; `levels[n]` stores `2^n` blocks of `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorProcess {
    pub depth: usize,
    pub dim: usize,
    pub levels: Vec<Vec<f64>>,
}

impl VectorProcess {
    pub fn from_levels(depth: usize, dim: usize, levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.len() != depth + 1 {
            return Err(invalid("levels count must equal depth + 1"));
        }
        for (n, lv) in levels.iter().enumerate() {
            if lv.len() != (1 << n) * dim {
                return Err(Error::DimensionMismatch {
                    expected: (1 << n) * dim,
                    got: lv.len(),
                });
            }
        }
        Ok(VectorProcess { depth, dim, levels })
    }

    #[inline]
    pub fn value(&self, level: usize, index: usize) -> &[f64] {
        &self.levels[level][index * self.dim..(index + 1) * self.dim]
    }
}

/// A martingale: every node value is the mean of its two children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Martingale {
    process: VectorProcess,
}

impl Martingale {
    /// Close a terminal variable: `f_n = E(f_N | F_n)` by repeated averaging.
    /// `terminal` is the flat leaf array, `leaves * dim` long.
    pub fn from_terminal(tree: &FiltrationTree, dim: usize, terminal: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        if terminal.len() != tree.leaves() * dim {
            return Err(Error::DimensionMismatch {
                expected: tree.leaves() * dim,
                got: terminal.len(),
            });
        }
        let mut levels = vec![Vec::new(); tree.depth() + 1];
        levels[tree.depth()] = terminal.to_vec();
        for n in (0..tree.depth()).rev() {
            let child = &levels[n + 1];
            let mut cur = Vec::with_capacity((1 << n) * dim);
            for i in 0..(1 << n) {
                for c in 0..dim {
                    cur.push(0.5 * (child[2 * i * dim + c] + child[(2 * i + 1) * dim + c]));
                }
            }
            levels[n] = cur;
        }
        Ok(Martingale {
            process: VectorProcess {
                depth: tree.depth(),
                dim,
                levels,
            },
        })
    }

    /// Wrap an existing adapted process, checking the martingale property
    /// (each node equals the mean of its children, 1e-12 relative).
    pub fn from_process(process: VectorProcess) -> Result<Self> {
        for n in 0..process.depth {
            for i in 0..(1 << n) {
                let v = process.value(n, i);
                let l = process.value(n + 1, 2 * i);
                let r = process.value(n + 1, 2 * i + 1);
                for c in 0..process.dim {
                    let mean = 0.5 * (l[c] + r[c]);
                    let scale = 1.0 + math::abs(l[c]) + math::abs(r[c]);
                    if math::abs(v[c] - mean) > 1e-12 * scale {
                        return Err(violation("node value is not the mean of its children"));
                    }
                }
            }
        }
        Ok(Martingale { process })
    }

    pub fn depth(&self) -> usize {
        self.process.depth
    }

    pub fn dim(&self) -> usize {
        self.process.dim
    }

    pub fn tree(&self) -> FiltrationTree {
        FiltrationTree {
            depth: self.process.depth,
        }
    }

    #[inline]
    pub fn value(&self, level: usize, index: usize) -> &[f64] {
        self.process.value(level, index)
    }

    pub fn process(&self) -> &VectorProcess {
        &self.process
    }

    /// Terminal (leaf-level) values, flat.
    pub fn terminal(&self) -> &[f64] {
        &self.process.levels[self.process.depth]
    }
}

/// A weight together with its conditional expectations and running maxima:
/// `w_n = E(w | F_n)` and `w*_n = max_{m <= n} w_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub w: Vec<f64>,
    pub w_n: ScalarProcess,
    pub w_star_n: ScalarProcess,
}

impl WeightTriple {
    /// Per-leaf maximal weight `w* = w*_N`.
    pub fn w_star(&self) -> &[f64] {
        self.w_star_n.leaf_values()
    }
}

/// Conditional expectations of a leaf variable at every level:
/// each node's value is the average of the leaf values below it.
pub fn conditional_expectation(tree: &FiltrationTree, leaf_values: &[f64]) -> Result<ScalarProcess> {
    if leaf_values.len() != tree.leaves() {
        return Err(Error::DimensionMismatch {
            expected: tree.leaves(),
            got: leaf_values.len(),
        });
    }
    let mut levels = vec![Vec::new(); tree.depth() + 1];
    levels[tree.depth()] = leaf_values.to_vec();
    for n in (0..tree.depth()).rev() {
        let child = &levels[n + 1];
        levels[n] = (0..(1 << n))
            .map(|i| 0.5 * (child[2 * i] + child[2 * i + 1]))
            .collect();
    }
    Ok(ScalarProcess {
        depth: tree.depth(),
        levels,
    })
}

/// The weight processes of Doob type for a nonnegative leaf weight.
pub fn weight_processes(tree: &FiltrationTree, w: &[f64]) -> Result<WeightTriple> {
    if w.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(invalid("weights must be nonnegative and finite"));
    }
    let w_n = conditional_expectation(tree, w)?;
    let w_star_n = running_max(&w_n);
    Ok(WeightTriple {
        w: w.to_vec(),
        w_n,
        w_star_n,
    })
}

fn running_max(p: &ScalarProcess) -> ScalarProcess {
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(p.depth + 1);
    levels.push(p.levels[0].clone());
    for n in 1..=p.depth {
        let prev = &levels[n - 1];
        let cur: Vec<f64> = (0..(1 << n))
            .map(|i| f64::max(prev[i / 2], p.levels[n][i]))
            .collect();
        levels.push(cur);
    }
    ScalarProcess {
        depth: p.depth,
        levels,
    }
}

/// The maximal process `f*_n = max_{m <= n} |f_m|` of any adapted
/// vector-valued process (per node), plus the per-leaf `f* = f*_N`.
pub fn maximal_process(space: &SpaceDescriptor, process: &VectorProcess) -> Result<ScalarProcess> {
    let norms = norm_process(space, process)?;
    Ok(running_max(&norms))
}

/// Per-node norms `|f_n|`.
pub fn norm_process(space: &SpaceDescriptor, process: &VectorProcess) -> Result<ScalarProcess> {
    if space.dim() != process.dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: process.dim,
        });
    }
    let levels = (0..=process.depth)
        .map(|n| {
            (0..(1 << n))
                .map(|i| space.norm_unchecked(process.value(n, i)))
                .collect()
        })
        .collect();
    Ok(ScalarProcess {
        depth: process.depth,
        levels,
    })
}

/// Per-node increment-sum process `q_n = [|f_0|^p +] sum_{m<=n} |f_m - f_{m-1}|^p`
/// (the `p`-th power of the running `p`-variation along each path).
pub fn variation_sums(
    space: &SpaceDescriptor,
    process: &VectorProcess,
    p: f64,
    include_initial: bool,
) -> Result<ScalarProcess> {
    if space.dim() != process.dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: process.dim,
        });
    }
    if !(1.0..=2.0).contains(&p) {
        return Err(invalid("variation exponent p must lie in [1, 2]"));
    }
    let dim = process.dim;
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(process.depth + 1);
    let q0 = if include_initial {
        math::pow(space.norm_unchecked(process.value(0, 0)), p)
    } else {
        0.0
    };
    levels.push(vec![q0]);
    let mut diff = vec![0.0; dim];
    for n in 1..=process.depth {
        let mut cur = Vec::with_capacity(1 << n);
        for i in 0..(1 << n) {
            let parent = process.value(n - 1, i / 2);
            let child = process.value(n, i);
            for c in 0..dim {
                diff[c] = child[c] - parent[c];
            }
            let inc = math::pow(space.norm_unchecked(&diff), p);
            cur.push(levels[n - 1][i / 2] + inc);
        }
        levels.push(cur);
    }
    Ok(ScalarProcess {
        depth: process.depth,
        levels,
    })
}

/// Per-leaf `p`-variation `S_p f = q_N^(1/p)` (initial term included by default).
pub fn p_variation(
    space: &SpaceDescriptor,
    process: &VectorProcess,
    p: f64,
    include_initial: bool,
) -> Result<Vec<f64>> {
    let sums = variation_sums(space, process, p, include_initial)?;
    Ok(sums
        .leaf_values()
        .iter()
        .map(|&s| math::root(s, p))
        .collect())
}

/// Per-leaf conditional square function
/// `sg = (sum_{n>=1} E(|g_n - g_{n-1}|^2 | F_{n-1}))^(1/2)`.
pub fn conditional_square_function(
    space: &SpaceDescriptor,
    mart: &Martingale,
) -> Result<Vec<f64>> {
    let process = mart.process();
    if space.dim() != process.dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: process.dim,
        });
    }
    let depth = process.depth;
    let dim = process.dim;
    // accumulate per-node partial sums down the tree
    let mut acc = vec![0.0f64];
    let mut diff = vec![0.0; dim];
    for n in 1..=depth {
        // conditional expectation of |increment|^2 at each parent node
        let mut cond = Vec::with_capacity(1 << (n - 1));
        for i in 0..(1 << (n - 1)) {
            let parent = process.value(n - 1, i);
            let mut s = 0.0;
            for child in [2 * i, 2 * i + 1] {
                let cv = process.value(n, child);
                for c in 0..dim {
                    diff[c] = cv[c] - parent[c];
                }
                let nrm = space.norm_unchecked(&diff);
                s += 0.5 * nrm * nrm;
            }
            cond.push(s);
        }
        acc = (0..(1 << n)).map(|i| acc[i / 2] + cond[i / 2]).collect();
    }
    Ok(acc.iter().map(|&s| math::sqrt(s)).collect())
}

/// `L^r` norm of a leaf variable under the uniform measure.
pub fn lr_norm(tree: &FiltrationTree, leaf_values: &[f64], r: f64) -> Result<f64> {
    if leaf_values.len() != tree.leaves() {
        return Err(Error::DimensionMismatch {
            expected: tree.leaves(),
            got: leaf_values.len(),
        });
    }
    if r < 1.0 {
        return Err(invalid("Lr exponent must satisfy r >= 1"));
    }
    let mean: f64 = leaf_values
        .iter()
        .map(|&v| math::pow(math::abs(v), r))
        .sum::<f64>()
        / tree.leaves() as f64;
    Ok(math::root(mean, r))
}

/// `E(a b)` of two leaf variables.
pub fn pair_expectation(tree: &FiltrationTree, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != tree.leaves() || b.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: tree.leaves(),
            got: if a.len() != tree.leaves() { a.len() } else { b.len() },
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| x * y).sum::<f64>() / tree.leaves() as f64)
}
