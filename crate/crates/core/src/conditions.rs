//! Closed-form evaluation of the numbered constant conditions behind the two
//! concavity proofs, and the minimal certified constant as a function of `p`.
//!
//! Each component condition is a lower bound on one of the split constants
//! (`C`, or a summand of a splitting `C = C_i + C_j`); the three aggregates
//! collect them into a single curve in `p`:
//!
//! * `cond0_tC(p)            = max(2, 2^(4-1/p)/p')` — the `Ct` requirement,
//! * `cond0_C(p, Ct)` — smallest certified `C` for the plain function,
//! * `cond_C(p, Ct)`  — smallest certified `C` for the maximal variant.
//!
//! The certified reference values are `Ct = 4 sqrt 2`, `C = 9` (plain) and
//! `C = 21` (maximal); the curves show how much slack those round numbers
//! carry. Grid evaluation replaces plotting: everything here is closed-form
//! arithmetic, deterministic, and trivially parallel over the grid.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::math;

pub const LN2: f64 = core::f64::consts::LN_2;

/// Which proof a sweep or minimal-constant query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Plain,
    Maximal,
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(invalid("p must lie in (1, 2]"));
    }
    Ok(())
}

// Component conditions. Two-sided conditions contribute their `C`-side bound
// here; their `Ct`-side requirements are collected by `cond0_tc` (and the
// `Ct >= 8/p'` compatibility is exposed as `cond6_ct`).

/// `C6 >= 2^(1-1/p) (1 + 1/p) + Ct ln 2`
pub fn cond1(p: f64, ct: f64) -> f64 {
    math::pow(2.0, 1.0 - 1.0 / p) * (1.0 + 1.0 / p) + ct * LN2
}

/// `C5 >= 3^(2-1/p) / p`
pub fn cond2(p: f64) -> f64 {
    math::pow(3.0, 2.0 - 1.0 / p) / p
}

/// `Ct >= 2^(4-1/p) / p'` (the second half of the `C5` condition)
pub fn cond2_ct(p: f64) -> f64 {
    math::pow(2.0, 4.0 - 1.0 / p) / math::conjugate(p)
}

/// `C >= 3^(1-1/p) (1 + 2^(1/p)) + Ct ln 2`
pub fn cond3(p: f64, ct: f64) -> f64 {
    math::pow(3.0, 1.0 - 1.0 / p) * (1.0 + math::pow(2.0, 1.0 / p)) + ct * LN2
}

/// `C >= 2 + Ct ln 2` (and `Ct >= 2`, collected by `cond0_tc`)
pub fn cond4(ct: f64) -> f64 {
    2.0 + ct * LN2
}

/// `C2 >= 2 + Ct ln 2`
pub fn cond5(ct: f64) -> f64 {
    2.0 + ct * LN2
}

/// `C1 >= 2 (3/2)^(2-1/p) / p`
pub fn cond6(p: f64) -> f64 {
    2.0 * math::pow(1.5, 2.0 - 1.0 / p) / p
}

/// `Ct >= 2^3 / p'` (the second half of the `C1` condition)
pub fn cond6_ct(p: f64) -> f64 {
    8.0 / math::conjugate(p)
}

/// `C >= 1/p + (1 + (1/p + 1/p^2)^p)^(1/p) + Ct ln 2`
pub fn cond7(p: f64, ct: f64) -> f64 {
    1.0 / p + math::pow(1.0 + math::pow(1.0 / p + 1.0 / (p * p), p), 1.0 / p) + ct * LN2
}

/// `C >= 3^(1-1/p) (1 + (1 + (1/p')^p)^(1/p)) + Ct ln 2`
pub fn cond8(p: f64, ct: f64) -> f64 {
    let pc = math::conjugate(p);
    math::pow(3.0, 1.0 - 1.0 / p) * (1.0 + math::pow(1.0 + math::pow(1.0 / pc, p), 1.0 / p))
        + ct * LN2
}

/// `C3 = 9` (the plain-variant constant, re-used inside the maximal proof)
pub fn cond9() -> f64 {
    9.0
}

/// `C4 >= 3 (p-1) p (3/2)^(1-1/p)`
pub fn cond10(p: f64) -> f64 {
    3.0 * (p - 1.0) * p * math::pow(1.5, 1.0 - 1.0 / p)
}

/// `C >= 3^(1-1/p) (1 + 2^(1/p)) + Ct ln 2` (same bound as `cond3`)
pub fn cond11(p: f64, ct: f64) -> f64 {
    cond3(p, ct)
}

/// Aggregate requirement on `Ct`: `max(2, 2^(4-1/p)/p')`.
pub fn cond0_tc(p: f64) -> f64 {
    f64::max(2.0, cond2_ct(p))
}

/// Aggregate requirement on `C` for the plain function:
/// `max(2, cond3-part, cond2 + cond1-part) + Ct ln 2`.
pub fn cond0_c(p: f64, ct: f64) -> f64 {
    let a = 2.0f64;
    let b = math::pow(3.0, 1.0 - 1.0 / p) * (1.0 + math::pow(2.0, 1.0 / p));
    let c = cond2(p) + math::pow(2.0, 1.0 - 1.0 / p) * (1.0 + 1.0 / p);
    a.max(b).max(c) + ct * LN2
}

/// Aggregate requirement on `C` for the maximal variant:
/// `max(cond6 + 2, cond7-part, cond8-part, 9 + cond10, cond11-part) + Ct ln 2`.
pub fn cond_c(p: f64, ct: f64) -> f64 {
    let pc = math::conjugate(p);
    let a = cond6(p) + 2.0;
    let b = 1.0 / p + math::pow(1.0 + math::pow(1.0 / p + 1.0 / (p * p), p), 1.0 / p);
    let c = math::pow(3.0, 1.0 - 1.0 / p)
        * (1.0 + math::pow(1.0 + math::pow(1.0 / pc, p), 1.0 / p));
    let d = 9.0 + cond10(p);
    let e = math::pow(3.0, 1.0 - 1.0 / p) * (1.0 + math::pow(2.0, 1.0 / p));
    a.max(b).max(c).max(d).max(e) + ct * LN2
}

/// Evaluate a condition by name (component or aggregate).
pub fn cond_value(name: &str, p: f64, c_tilde: f64) -> Result<f64> {
    check_p(p)?;
    Ok(match name {
        "cond1" => cond1(p, c_tilde),
        "cond2" => cond2(p),
        "cond3" => cond3(p, c_tilde),
        "cond4" => cond4(c_tilde),
        "cond5" => cond5(c_tilde),
        "cond6" => cond6(p),
        "cond7" => cond7(p, c_tilde),
        "cond8" => cond8(p, c_tilde),
        "cond9" => cond9(),
        "cond10" => cond10(p),
        "cond11" => cond11(p, c_tilde),
        "cond0_tC" => cond0_tc(p),
        "cond0_C" => cond0_c(p, c_tilde),
        "cond_C" => cond_c(p, c_tilde),
        _ => return Err(invalid("unknown condition name")),
    })
}

/// The smallest `C` the case analysis certifies at this `p` (with `Ct` given).
pub fn minimal_admissible(variant: Variant, p: f64, c_tilde: f64) -> Result<f64> {
    check_p(p)?;
    Ok(match variant {
        Variant::Plain => cond0_c(p, c_tilde),
        Variant::Maximal => cond_c(p, c_tilde),
    })
}

/// Analytic `p -> 1+` limits of the three aggregates (the open endpoint is
/// excluded from sweeps and reported separately through this function).
pub fn limit_at_one(c_tilde: f64) -> (f64, f64, f64) {
    // At p = 1: p' = inf, so 1/p' = 0 and the p'-weighted terms vanish;
    // IEEE semantics of the component formulas realize exactly that.
    (cond0_tc(1.0), cond0_c(1.0, c_tilde), cond_c(1.0, c_tilde))
}

/// One grid row of every condition value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    pub cond0_tc: f64,
    pub cond0_c: f64,
    pub cond_c: f64,
    pub components: [f64; 11],
}

/// Per-`p` values of the constant conditions on a uniform grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionCurve {
    pub variant: Variant,
    pub c_tilde: f64,
    pub rows: Vec<CurveRow>,
}

/// Supremum and argmax of one aggregate over the grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurveSup {
    pub sup: f64,
    pub argmax_p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSummary {
    pub sup_cond0_tc: CurveSup,
    pub sup_cond0_c: CurveSup,
    pub sup_cond_c: CurveSup,
}

impl ConditionCurve {
    pub fn summary(&self) -> CurveSummary {
        let pick = |f: &dyn Fn(&CurveRow) -> f64| {
            let mut best = CurveSup {
                sup: f64::NEG_INFINITY,
                argmax_p: f64::NAN,
            };
            for row in &self.rows {
                let v = f(row);
                if v > best.sup {
                    best = CurveSup {
                        sup: v,
                        argmax_p: row.p,
                    };
                }
            }
            best
        };
        CurveSummary {
            sup_cond0_tc: pick(&|r| r.cond0_tc),
            sup_cond0_c: pick(&|r| r.cond0_c),
            sup_cond_c: pick(&|r| r.cond_c),
        }
    }
}

pub const CSV_HEADER: &str =
    "p,cond0_tC,cond0_C,cond_C,cond1,cond2,cond3,cond4,cond5,cond6,cond7,cond8,cond9,cond10,cond11";

/// Evaluate every condition on a uniform `p`-grid.
pub fn sweep(
    variant: Variant,
    p_min: f64,
    p_max: f64,
    grid_count: usize,
    c_tilde: f64,
) -> Result<ConditionCurve> {
    if !(p_min > 1.0 && p_min <= p_max && p_max <= 2.0) {
        return Err(invalid("the grid must satisfy 1 < p_min <= p_max <= 2"));
    }
    if grid_count < 2 {
        return Err(invalid("grid_count must be >= 2"));
    }
    let rows = (0..grid_count)
        .map(|i| {
            let t = i as f64 / (grid_count - 1) as f64;
            let p = p_min + t * (p_max - p_min);
            CurveRow {
                p,
                cond0_tc: cond0_tc(p),
                cond0_c: cond0_c(p, c_tilde),
                cond_c: cond_c(p, c_tilde),
                components: [
                    cond1(p, c_tilde),
                    cond2(p),
                    cond3(p, c_tilde),
                    cond4(c_tilde),
                    cond5(c_tilde),
                    cond6(p),
                    cond7(p, c_tilde),
                    cond8(p, c_tilde),
                    cond9(),
                    cond10(p),
                    cond11(p, c_tilde),
                ],
            }
        })
        .collect();
    Ok(ConditionCurve {
        variant,
        c_tilde,
        rows,
    })
}

/// The certified reference constants.
pub fn reference_c_tilde() -> f64 {
    4.0 * math::sqrt(2.0)
}

/// Name list accepted by [`cond_value`].
pub fn condition_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=11).map(|i| alloc::format!("cond{i}")).collect();
    names.push(String::from("cond0_tC"));
    names.push(String::from("cond0_C"));
    names.push(String::from("cond_C"));
    names
}
