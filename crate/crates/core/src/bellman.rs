//! The two explicit Bellman functions and their concavity gaps.
//!
//! The plain function of the non-maximal estimate:
//!
//! ```text
//! U(x,q,u,v) = u (|x|^p/c_h^p + q)^(1/p) - C v q^(1/p) + Ct v q^(1/p) ln(1 + u/v)
//! ```
//!
//! and the maximal-function variant, which replaces `|x|` by the running
//! maximum `m` in the leading root and adds a correction that keeps the
//! left-hand side of the concavity inequality differentiable in the
//! perturbation:
//!
//! ```text
//! U(x,m,q,u,v) = u (m^p/c_h^p + q)^(1/p)
//!                - (u/p) (m^p - |x|^p)/c_h^p / (m^p/c_h^p + q)^(1-1/p)
//!                - C v q^(1/p) + Ct v q^(1/p) ln(1 + u/v).
//! ```
//!
//! Both are 1-homogeneous in `(x, q^(1/p) [, m])` and in `(u, v)` separately.
//! The concavity gap of a perturbation `(d, e)` is
//! `U + U_x d + U_u e - U(x + d, [m v |x+d|,] q + |d|^p, u + e, (u+e) v v)`,
//! nonnegative for the certified constants.
//!
//! Conventions at the degenerate strata: `v = 0` forces `u = 0` and the
//! `v ln(1+u/v)` term is 0 while the `u`-derivative keeps the limit value
//! `Ct q^(1/p)`; at `|x|^p/c_h^p + q = 0` (resp. `m^p/c_h^p + q = 0`) the
//! `x`-derivative is the zero functional.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, violation, Result};
use crate::math;
use crate::space::{DualVector, SpaceDescriptor};

/// The pair `(C, Ct)` of the Bellman functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellmanConstants {
    pub c: f64,
    pub c_tilde: f64,
}

impl BellmanConstants {
    pub fn new(c: f64, c_tilde: f64) -> Result<Self> {
        if !(c > 0.0 && c_tilde > 0.0) {
            return Err(invalid("Bellman constants must be positive"));
        }
        Ok(BellmanConstants { c, c_tilde })
    }

    /// `C = 9`, `Ct = 4 sqrt(2)`: certified for the plain concavity property.
    pub fn plain() -> Self {
        BellmanConstants {
            c: 9.0,
            c_tilde: 4.0 * math::sqrt(2.0),
        }
    }

    /// `C = 21`, `Ct = 4 sqrt(2)`: certified for the maximal concavity property.
    pub fn maximal() -> Self {
        BellmanConstants {
            c: 21.0,
            c_tilde: 4.0 * math::sqrt(2.0),
        }
    }

    /// `C > Ct ln 2`, required for the case analyses behind the certified
    /// constants to be meaningful. Deliberately not enforced by `new`, so
    /// that negative controls can probe inadmissible constants.
    pub fn admissible(&self) -> bool {
        self.c > self.c_tilde * math::ln(2.0)
    }
}

/// Argument tuple of the plain Bellman function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlainPoint {
    pub x: Vec<f64>,
    pub q: f64,
    pub u: f64,
    pub v: f64,
}

/// Argument tuple of the maximal-variant Bellman function (`|x| <= m`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxPoint {
    pub x: Vec<f64>,
    pub m: f64,
    pub q: f64,
    pub u: f64,
    pub v: f64,
}

/// A perturbation `(d, e)` of a Bellman point; `u + e >= 0` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub d: Vec<f64>,
    pub e: f64,
}

/// A concavity-gap evaluation together with the magnitude of the terms that
/// entered it. `value` is `rhs - lhs` of the concavity inequality; `scale`
/// bounds every intermediate quantity, so a genuine violation satisfies
/// `value < -tol * scale` while smaller negatives are roundoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEval {
    pub value: f64,
    pub scale: f64,
}

fn check_weights(u: f64, v: f64) -> Result<()> {
    if !(u >= 0.0) || !(v >= 0.0) {
        return Err(violation("u and v must be nonnegative"));
    }
    if u > v {
        return Err(violation("u <= v is required"));
    }
    if v == 0.0 && u != 0.0 {
        return Err(violation("v = 0 requires u = 0"));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 0.0) {
        return Err(violation("q must be nonnegative"));
    }
    Ok(())
}

/// `v q^(1/p) ln(1 + u/v)` with the `v = 0` convention.
#[inline]
fn log_term(qp: f64, u: f64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * qp * math::ln_1p(u / v)
    }
}

/// `1 / (1 + u/v)` with the `v = 0` (hence `u = 0`) convention of 1.
#[inline]
fn log_term_slope(u: f64, v: f64) -> f64 {
    if v == 0.0 {
        1.0
    } else {
        1.0 / (1.0 + u / v)
    }
}

/// The plain Bellman function `U(x, q, u, v)`.
pub fn u_plain(space: &SpaceDescriptor, pt: &PlainPoint, k: &BellmanConstants) -> Result<f64> {
    check_q(pt.q)?;
    check_weights(pt.u, pt.v)?;
    let nx = space.norm(&pt.x)?;
    Ok(u_plain_raw(space, nx, pt.q, pt.u, pt.v, k))
}

fn u_plain_raw(
    space: &SpaceDescriptor,
    nx: f64,
    q: f64,
    u: f64,
    v: f64,
    k: &BellmanConstants,
) -> f64 {
    let p = space.p;
    let chp = math::pow(space.c_h, p);
    let big_x = math::pow(nx, p) / chp;
    let rp = math::root(big_x + q, p);
    let qp = math::root(q, p);
    // same term grouping as the maximal variant, so the two agree exactly
    // at m = |x| (where the correction term is identically zero)
    let tail = -k.c * v * qp + k.c_tilde * log_term(qp, u, v);
    u * rp + tail
}

/// Partial derivatives `(U_x, U_u)` of the plain Bellman function.
pub fn u_plain_derivatives(
    space: &SpaceDescriptor,
    pt: &PlainPoint,
    k: &BellmanConstants,
) -> Result<(DualVector, f64)> {
    check_q(pt.q)?;
    check_weights(pt.u, pt.v)?;
    let p = space.p;
    let chp = math::pow(space.c_h, p);
    let nx = space.norm(&pt.x)?;
    let big_x = math::pow(nx, p) / chp;
    let r = big_x + pt.q;
    let rp = math::root(r, p);
    let qp = math::root(pt.q, p);

    let u_x = if r == 0.0 {
        DualVector::zero(space.dim())
    } else {
        let grad = space.phi_gradient(&pt.x)?;
        let r1 = r / rp; // R^(1 - 1/p)
        scale_dual(space, grad, pt.u / (p * chp * r1))
    };
    let u_u = rp + k.c_tilde * qp * log_term_slope(pt.u, pt.v);
    Ok((u_x, u_u))
}

/// The maximal-variant Bellman function `U(x, m, q, u, v)`.
///
/// Both displayed algebraic forms are evaluated and must agree to `1e-10`
/// relative to the magnitude of the constituent terms; the first form is
/// returned (its correction term vanishes identically at `m = |x|`, making
/// agreement with [`u_plain`] exact there).
pub fn u_max(space: &SpaceDescriptor, pt: &MaxPoint, k: &BellmanConstants) -> Result<f64> {
    check_q(pt.q)?;
    check_weights(pt.u, pt.v)?;
    let nx = space.norm(&pt.x)?;
    if nx > pt.m {
        return Err(violation("|x| <= m is required"));
    }
    u_max_raw(space, nx, pt.m, pt.q, pt.u, pt.v, k)
}

fn u_max_raw(
    space: &SpaceDescriptor,
    nx: f64,
    m: f64,
    q: f64,
    u: f64,
    v: f64,
    k: &BellmanConstants,
) -> Result<f64> {
    let p = space.p;
    let chp = math::pow(space.c_h, p);
    let big_m = math::pow(m, p) / chp;
    let big_x = math::pow(nx, p) / chp;
    let r = big_m + q;
    let qp = math::root(q, p);
    let tail = -k.c * v * qp + k.c_tilde * log_term(qp, u, v);
    if r == 0.0 {
        return Ok(tail); // m = 0 and q = 0: only the (vanishing) tail remains
    }
    let rp = math::root(r, p);
    let r1 = r / rp; // R^(1 - 1/p)
    let form1 = u * rp - (u / p) * (big_m - big_x) / r1 + tail;
    let form2 = (u / space.p_conj()) * rp + (u / p) * (q + big_x) / r1 + tail;
    let scale = 1.0 + u * rp + k.c * v * qp + math::abs(tail);
    if math::abs(form1 - form2) > 1e-10 * scale {
        return Err(violation("the two algebraic forms of the Bellman function disagree"));
    }
    Ok(form1)
}

/// Partial derivatives `(U_x, U_u)` of the maximal-variant Bellman function.
pub fn u_max_derivatives(
    space: &SpaceDescriptor,
    pt: &MaxPoint,
    k: &BellmanConstants,
) -> Result<(DualVector, f64)> {
    check_q(pt.q)?;
    check_weights(pt.u, pt.v)?;
    let p = space.p;
    let chp = math::pow(space.c_h, p);
    let nx = space.norm(&pt.x)?;
    if nx > pt.m {
        return Err(violation("|x| <= m is required"));
    }
    let big_m = math::pow(pt.m, p) / chp;
    let big_x = math::pow(nx, p) / chp;
    let r = big_m + pt.q;
    let qp = math::root(pt.q, p);

    let (u_x, head) = if r == 0.0 {
        (DualVector::zero(space.dim()), 0.0)
    } else {
        let rp = math::root(r, p);
        let r1 = r / rp;
        let grad = space.phi_gradient(&pt.x)?;
        let u_x = scale_dual(space, grad, pt.u / (p * chp * r1));
        let head = rp / space.p_conj() + (pt.q + big_x) / (p * r1);
        (u_x, head)
    };
    let u_u = head + k.c_tilde * qp * log_term_slope(pt.u, pt.v);
    Ok((u_x, u_u))
}

fn scale_dual(space: &SpaceDescriptor, grad: DualVector, factor: f64) -> DualVector {
    let coords: Vec<f64> = grad.coords.iter().map(|&c| c * factor).collect();
    let dual_norm = space.dual_norm_of(&coords);
    DualVector { coords, dual_norm }
}

/// Concavity gap of the plain Bellman function:
/// `U + U_x d + U_u e - U(x+d, q+|d|^p, u+e, (u+e) v v)`.
///
/// Nonnegative (up to roundoff at the `scale` of the evaluation) whenever the
/// constants satisfy the certified conditions, e.g. `(9, 4 sqrt 2)`.
pub fn gap_plain(
    space: &SpaceDescriptor,
    pt: &PlainPoint,
    pert: &Perturbation,
    k: &BellmanConstants,
) -> Result<GapEval> {
    let u_new = pt.u + pert.e;
    if !(u_new >= 0.0) {
        return Err(violation("u + e must be nonnegative"));
    }
    let base = u_plain(space, pt, k)?;
    let (u_x, u_u) = u_plain_derivatives(space, pt, k)?;
    let nd = space.norm(&pert.d)?;
    let x_new: Vec<f64> = pt.x.iter().zip(&pert.d).map(|(&a, &b)| a + b).collect();
    let q_new = pt.q + math::pow(nd, p_of(space));
    let v_new = f64::max(u_new, pt.v);
    let lhs = u_plain(
        space,
        &PlainPoint {
            x: x_new,
            q: q_new,
            u: u_new,
            v: v_new,
        },
        k,
    )?;
    let lin_x = u_x.apply(&pert.d);
    let lin_u = u_u * pert.e;
    Ok(GapEval {
        value: base + lin_x + lin_u - lhs,
        scale: 1.0 + math::abs(base) + math::abs(lhs) + math::abs(lin_x) + math::abs(lin_u),
    })
}

/// Concavity gap of the maximal-variant Bellman function:
/// `U + U_x d + U_u e - U(x+d, m v |x+d|, q+|d|^p, u+e, (u+e) v v)`.
pub fn gap_max(
    space: &SpaceDescriptor,
    pt: &MaxPoint,
    pert: &Perturbation,
    k: &BellmanConstants,
) -> Result<GapEval> {
    let u_new = pt.u + pert.e;
    if !(u_new >= 0.0) {
        return Err(violation("u + e must be nonnegative"));
    }
    let base = u_max(space, pt, k)?;
    let (u_x, u_u) = u_max_derivatives(space, pt, k)?;
    let nd = space.norm(&pert.d)?;
    let x_new: Vec<f64> = pt.x.iter().zip(&pert.d).map(|(&a, &b)| a + b).collect();
    let nx_new = space.norm_unchecked(&x_new);
    let m_new = f64::max(pt.m, nx_new);
    let q_new = pt.q + math::pow(nd, p_of(space));
    let v_new = f64::max(u_new, pt.v);
    let lhs = u_max(
        space,
        &MaxPoint {
            x: x_new,
            m: m_new,
            q: q_new,
            u: u_new,
            v: v_new,
        },
        k,
    )?;
    let lin_x = u_x.apply(&pert.d);
    let lin_u = u_u * pert.e;
    Ok(GapEval {
        value: base + lin_x + lin_u - lhs,
        scale: 1.0 + math::abs(base) + math::abs(lhs) + math::abs(lin_x) + math::abs(lin_u),
    })
}

#[inline]
fn p_of(space: &SpaceDescriptor) -> f64 {
    space.p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar() -> SpaceDescriptor {
        SpaceDescriptor::scalar(2.0).unwrap()
    }

    #[test]
    fn plain_vanishes_at_origin() {
        let s = scalar();
        let k = BellmanConstants::plain();
        for (u, v) in [(0.0, 0.0), (0.5, 1.0), (2.0, 2.0)] {
            let pt = PlainPoint {
                x: alloc::vec![0.0],
                q: 0.0,
                u,
                v,
            };
            assert_eq!(u_plain(&s, &pt, &k).unwrap(), 0.0);
        }
    }

    #[test]
    fn plain_invariants_enforced() {
        let s = scalar();
        let k = BellmanConstants::plain();
        let bad = PlainPoint {
            x: alloc::vec![1.0],
            q: 1.0,
            u: 2.0,
            v: 1.0,
        };
        assert!(u_plain(&s, &bad, &k).is_err());
        let neg_q = PlainPoint {
            x: alloc::vec![1.0],
            q: -1.0,
            u: 0.5,
            v: 1.0,
        };
        assert!(u_plain(&s, &neg_q, &k).is_err());
        let v0 = PlainPoint {
            x: alloc::vec![1.0],
            q: 1.0,
            u: 0.5,
            v: 0.0,
        };
        assert!(u_plain(&s, &v0, &k).is_err());
    }

    #[test]
    fn max_requires_x_below_m() {
        let s = scalar();
        let k = BellmanConstants::maximal();
        let bad = MaxPoint {
            x: alloc::vec![2.0],
            m: 1.0,
            q: 1.0,
            u: 1.0,
            v: 1.0,
        };
        assert!(u_max(&s, &bad, &k).is_err());
    }

    #[test]
    fn gap_zero_perturbation_is_exactly_zero() {
        let s = scalar();
        let k = BellmanConstants::plain();
        let pt = PlainPoint {
            x: alloc::vec![0.7],
            q: 1.3,
            u: 0.4,
            v: 0.9,
        };
        let z = Perturbation {
            d: alloc::vec![0.0],
            e: 0.0,
        };
        assert_eq!(gap_plain(&s, &pt, &z, &k).unwrap().value, 0.0);

        let km = BellmanConstants::maximal();
        for m in [0.7, 1.5] {
            let mpt = MaxPoint {
                x: alloc::vec![0.7],
                m,
                q: 1.3,
                u: 0.4,
                v: 0.9,
            };
            assert_eq!(gap_max(&s, &mpt, &z, &km).unwrap().value, 0.0);
        }
    }

    #[test]
    fn max_agrees_with_plain_at_m_equal_x() {
        let s = scalar();
        let k = BellmanConstants::plain();
        let pt = PlainPoint {
            x: alloc::vec![1.7],
            q: 2.3,
            u: 0.6,
            v: 1.1,
        };
        let mpt = MaxPoint {
            x: alloc::vec![1.7],
            m: 1.7,
            q: 2.3,
            u: 0.6,
            v: 1.1,
        };
        assert_eq!(u_plain(&s, &pt, &k).unwrap(), u_max(&s, &mpt, &k).unwrap());
    }

    #[test]
    fn perturbation_must_keep_u_nonnegative() {
        let s = scalar();
        let k = BellmanConstants::plain();
        let pt = PlainPoint {
            x: alloc::vec![1.0],
            q: 1.0,
            u: 0.5,
            v: 1.0,
        };
        let pert = Perturbation {
            d: alloc::vec![0.0],
            e: -0.6,
        };
        assert!(gap_plain(&s, &pt, &pert, &k).is_err());
    }
}
