//! Finite-dimensional uniformly smooth normed spaces.
//!
//! A space is described by its norm family (`scalar`, `euclidean`, or `lq`),
//! a smoothness exponent `p` in `(1, 2]`, and two constants:
//!
//! * `c_sm` — the smoothness constant: `(|x+y|^p + |x-y|^p)/2 <= |x|^p + c_sm^p |y|^p`,
//! * `c_h` — the gradient Hölder constant of `phi(x) = |x|^p`:
//!   `|phi'(x) - phi'(y)|_* <= c_h^p |x-y|^(p-1)`.
//!
//! The two are equivalent up to fixed factors: `c_sm^p <= c_h^p / p` and
//! `c_h^p <= 2^(p+1) c_sm^p`, and always `c_h^p >= p`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::math;

/// Norm family of a space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    /// The real line with the absolute value.
    Scalar,
    /// `R^dim` with the Euclidean norm.
    Euclidean { dim: usize },
    /// `R^dim` with the `l^q` norm, `q >= 1`.
    Lq { q: f64, dim: usize },
}

impl SpaceKind {
    pub fn dim(&self) -> usize {
        match *self {
            SpaceKind::Scalar => 1,
            SpaceKind::Euclidean { dim } | SpaceKind::Lq { dim, .. } => dim,
        }
    }

    /// The norm exponent: 1 for scalar (absolute value), 2 for Euclidean, q for `l^q`.
    fn q(&self) -> f64 {
        match *self {
            SpaceKind::Scalar => 2.0,
            SpaceKind::Euclidean { .. } => 2.0,
            SpaceKind::Lq { q, .. } => q,
        }
    }
}

/// A finite-dimensional `(p, c_sm)`-smooth normed space with stored constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    pub kind: SpaceKind,
    pub p: f64,
    pub c_h: f64,
    pub c_sm: f64,
}

/// Result of checking the three stored-constant relations.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RelationChecks {
    /// `c_h^p >= p`
    pub chp_ge_p: bool,
    /// `c_sm^p <= c_h^p / p`
    pub csm_le_ch: bool,
    /// `c_h^p <= 2^(p+1) c_sm^p`
    pub ch_le_csm: bool,
}

impl RelationChecks {
    pub fn all(&self) -> bool {
        self.chp_ge_p && self.csm_le_ch && self.ch_le_csm
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(invalid("smoothness exponent p must lie in (1, 2]"));
    }
    Ok(())
}

impl SpaceDescriptor {
    /// The real line with default constants: `c_sm = 1`,
    /// `c_h = sqrt(2)` at `p = 2` and `c_h = 2^((p+1)/p)` otherwise.
    pub fn scalar(p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(SpaceDescriptor {
            kind: SpaceKind::Scalar,
            p,
            c_h: hilbert_like_ch(p),
            c_sm: 1.0,
        })
    }

    /// Euclidean `R^dim`; same default constants as the scalar case
    /// (a Hilbert space is `(2,1)`-smooth, and `(p,1)`-smooth for `p < 2`).
    pub fn euclidean(dim: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        if dim == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        Ok(SpaceDescriptor {
            kind: SpaceKind::Euclidean { dim },
            p,
            c_h: hilbert_like_ch(p),
            c_sm: 1.0,
        })
    }

    /// `l^q` space with default constants.
    ///
    /// For `q >= 2`: `c_sm = sqrt(q-1)` and, at `p = 2`, `c_h = sqrt(2(q-1))`
    /// (both classical); for `p < 2` the conservative `c_h = 2^((p+1)/p) c_sm`.
    /// For `q in (1, 2]` with `p <= q`: `c_sm = 1`, `c_h = 2^((p+1)/p)`.
    pub fn lq(q: f64, dim: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        if dim == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        if q < 1.0 {
            return Err(invalid("lq exponent must satisfy q >= 1"));
        }
        let (c_sm, c_h) = if q >= 2.0 {
            let c_sm = math::sqrt(q - 1.0);
            let c_h = if p == 2.0 {
                math::sqrt(2.0 * (q - 1.0))
            } else {
                math::pow(2.0, (p + 1.0) / p) * c_sm
            };
            (c_sm, c_h)
        } else {
            if p > q {
                return Err(invalid("lq with q < 2 requires p <= q"));
            }
            (1.0, math::pow(2.0, (p + 1.0) / p))
        };
        Ok(SpaceDescriptor {
            kind: SpaceKind::Lq { q, dim },
            p,
            c_h,
            c_sm,
        })
    }

    /// Override the stored constants (they are estimator-checked defaults,
    /// not ground truth).
    pub fn with_constants(mut self, c_h: f64, c_sm: f64) -> Result<Self> {
        if !(c_h > 0.0 && c_sm > 0.0) {
            return Err(invalid("constants must be positive"));
        }
        self.c_h = c_h;
        self.c_sm = c_sm;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Hölder conjugate of the smoothness exponent.
    pub fn p_conj(&self) -> f64 {
        math::conjugate(self.p)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// The space norm. Exactly 0 iff `x = 0`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Scalar => math::abs(x[0]),
            SpaceKind::Euclidean { .. } => scaled_q_norm(x, 2.0),
            SpaceKind::Lq { q, .. } => {
                if q == 1.0 {
                    x.iter().map(|&v| math::abs(v)).sum()
                } else {
                    scaled_q_norm(x, q)
                }
            }
        }
    }

    /// `phi(x) = |x|^p`.
    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        Ok(math::pow(self.norm(x)?, self.p))
    }

    /// Fréchet derivative of `phi(x) = |x|^p` as a dual vector.
    ///
    /// For `l^q`: `phi'(x) h = p |x|^(p-q) sum_i |x_i|^(q-1) sign(x_i) h_i`;
    /// the zero functional at `x = 0`. Its dual norm equals `p |x|^(p-1)`.
    pub fn phi_gradient(&self, x: &[f64]) -> Result<DualVector> {
        self.check_dim(x)?;
        let p = self.p;
        let nx = self.norm_unchecked(x);
        if nx == 0.0 {
            return Ok(DualVector {
                coords: vec![0.0; x.len()],
                dual_norm: 0.0,
            });
        }
        let q = self.kind.q();
        // p * |x|^(p-q) * |x_i|^(q-1) * sign(x_i); for q = 2 this is p |x|^(p-2) x_i.
        let coords: Vec<f64> = if q == 2.0 {
            let scale = p * math::pow(nx, p - 2.0);
            x.iter().map(|&v| scale * v).collect()
        } else {
            let scale = p * math::pow(nx, p - q);
            x.iter()
                .map(|&v| {
                    if v == 0.0 {
                        0.0
                    } else {
                        scale * math::pow(math::abs(v), q - 1.0) * sign(v)
                    }
                })
                .collect()
        };
        let dual_norm = self.dual_norm_of(&coords);
        Ok(DualVector { coords, dual_norm })
    }

    /// Dual norm of a coordinate functional: the `l^(q')` norm of its coords.
    pub fn dual_norm_of(&self, coords: &[f64]) -> f64 {
        let q = self.kind.q();
        if q == 1.0 {
            return coords.iter().map(|&v| math::abs(v)).fold(0.0, f64::max);
        }
        let qp = math::conjugate(q);
        if qp == 2.0 {
            let s: f64 = coords.iter().map(|&v| v * v).sum();
            math::sqrt(s)
        } else {
            let s: f64 = coords.iter().map(|&v| math::pow(math::abs(v), qp)).sum();
            math::root(s, qp)
        }
    }

    /// Check the three relations between the stored constants.
    pub fn relation_checks(&self) -> RelationChecks {
        let p = self.p;
        let chp = math::pow(self.c_h, p);
        let csmp = math::pow(self.c_sm, p);
        let tol = 1e-12 * (1.0 + chp + csmp);
        RelationChecks {
            chp_ge_p: chp >= p - tol,
            csm_le_ch: csmp <= chp / p + tol,
            ch_le_csm: chp <= math::pow(2.0, p + 1.0) * csmp + tol,
        }
    }

    /// Human-readable kind tag used in reports.
    pub fn kind_name(&self) -> String {
        match self.kind {
            SpaceKind::Scalar => String::from("scalar"),
            SpaceKind::Euclidean { .. } => String::from("euclidean"),
            SpaceKind::Lq { .. } => String::from("lq"),
        }
    }
}

// Rescale by the largest coordinate before powering so the norm neither
// underflows nor overflows: it is exactly 0 iff x = 0.
fn scaled_q_norm(x: &[f64], q: f64) -> f64 {
    let m = x.iter().map(|&v| math::abs(v)).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = if q == 2.0 {
        x.iter()
            .map(|&v| {
                let t = v / m;
                t * t
            })
            .sum()
    } else {
        x.iter()
            .filter(|&&v| v != 0.0)
            .map(|&v| math::pow(math::abs(v) / m, q))
            .sum()
    };
    m * math::root(s, q)
}

fn hilbert_like_ch(p: f64) -> f64 {
    if p == 2.0 {
        math::sqrt(2.0)
    } else {
        math::pow(2.0, (p + 1.0) / p)
    }
}

#[inline]
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A linear functional given by coordinate pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualVector {
    pub coords: Vec<f64>,
    pub dual_norm: f64,
}

impl DualVector {
    pub fn zero(dim: usize) -> Self {
        DualVector {
            coords: vec![0.0; dim],
            dual_norm: 0.0,
        }
    }

    pub fn apply(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(self.coords.len(), y.len());
        self.coords.iter().zip(y).map(|(&c, &v)| c * v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }
}
