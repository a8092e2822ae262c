//! Report formatting: significant-digit float printing and the conditions CSV.

use bdg_core::conditions::{ConditionCurve, CSV_HEADER};
use serde::Serialize;

/// Format with 15 significant digits (scientific), locale-free.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.14e}")
}

/// Serialize a report as stable pretty JSON (field order fixed by the struct).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    s.push('\n');
    s
}

/// The conditions CSV: one row per grid point, 15 significant digits.
pub fn curve_csv(curve: &ConditionCurve) -> String {
    let mut out = String::with_capacity(curve.rows.len() * 256);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &curve.rows {
        out.push_str(&fmt_sig(row.p));
        for v in [row.cond0_tc, row.cond0_c, row.cond_c] {
            out.push(',');
            out.push_str(&fmt_sig(v));
        }
        for v in row.components {
            out.push(',');
            out.push_str(&fmt_sig(v));
        }
        out.push('\n');
    }
    out
}
