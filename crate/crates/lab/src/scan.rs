//! Sampled verification of the two concavity propositions.
//!
//! The domain is swept with wide log-uniform magnitudes (a numerical
//! robustness test; the gap is 1-homogeneous in both argument groups, so the
//! magnitude sweep is mathematically redundant) plus forced boundary strata
//! where the case analysis of the proofs is tightest: `d = 0`, `e = -u`,
//! `q = 0`, `x = 0`, `u = v`, `u = 0`, `m = |x|`, the `|d|^p = q/2` shell,
//! and the `u + e = v` shell.
//!
//! A sample counts as a violation when its gap is below `-1e-9` times the
//! magnitude of the terms that entered the gap evaluation; smaller negative
//! values are attributed to roundoff (the inequality is tight at `d = e = 0`,
//! so an absolute-zero threshold would false-positive).

use bdg_core::bellman::{
    gap_max, gap_plain, BellmanConstants, GapEval, MaxPoint, Perturbation, PlainPoint,
};
use bdg_core::conditions::Variant;
use bdg_core::math;
use bdg_core::SpaceDescriptor;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::Rng;

pub const VIOLATION_TOL: f64 = 1e-9;

const CHUNK: u64 = 1 << 14;
const MAG_LO: f64 = 1e-4;
const MAG_HI: f64 = 1e4;

const PLAIN_STRATA: [&str; 8] = [
    "d_zero", "e_neg_u", "q_zero", "x_zero", "u_eq_v", "u_zero", "d_shell", "ue_shell",
];
const MAX_STRATA: [&str; 9] = [
    "d_zero", "e_neg_u", "q_zero", "x_zero", "u_eq_v", "u_zero", "d_shell", "ue_shell", "m_eq_x",
];

// Proof-case partitions: the plain proof splits on (|d|^p vs q/2, u+e vs v),
// the maximal proof additionally on |x+d| vs m.
const PLAIN_CASES: [&str; 3] = ["case1", "case2", "case3"];
const MAX_CASES: [&str; 5] = ["case1a", "case1b", "case1c", "case2a", "case2b"];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    pub space: SpaceDescriptor,
    pub variant: Variant,
    pub constants: BellmanConstants,
    pub samples: u64,
    pub seed: u64,
}

/// The argument tuple achieving the minimum normalized gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArgMin {
    pub x: Vec<f64>,
    pub m: Option<f64>,
    pub q: f64,
    pub u: f64,
    pub v: f64,
    pub d: Vec<f64>,
    pub e: f64,
    pub gap: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumStat {
    pub name: String,
    pub samples: u64,
    /// Minimum of `gap / scale` over the stratum.
    pub min_gap: f64,
    pub violations: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub variant: Variant,
    pub space: SpaceDescriptor,
    pub p: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub samples: u64,
    pub seed: u64,
    /// Minimum of `gap / scale` over all samples.
    pub min_gap: f64,
    pub argmin: Option<ArgMin>,
    pub violations: u64,
    pub strata: Vec<StratumStat>,
    /// Per-proof-case statistics (cases of the corresponding concavity proof).
    pub cases: Vec<StratumStat>,
}

struct SamplePoint {
    x: Vec<f64>,
    m: Option<f64>,
    q: f64,
    u: f64,
    v: f64,
    d: Vec<f64>,
    e: f64,
}

fn strata_of(variant: Variant) -> &'static [&'static str] {
    match variant {
        Variant::Plain => &PLAIN_STRATA,
        Variant::Maximal => &MAX_STRATA,
    }
}

fn cases_of(variant: Variant) -> &'static [&'static str] {
    match variant {
        Variant::Plain => &PLAIN_CASES,
        Variant::Maximal => &MAX_CASES,
    }
}

fn classify(space: &SpaceDescriptor, variant: Variant, pt: &SamplePoint) -> usize {
    let p = space.p;
    let ndp = math::pow(space.norm(&pt.d).unwrap(), p);
    let small_d = ndp <= pt.q / 2.0;
    let below_v = pt.u + pt.e <= pt.v;
    match variant {
        Variant::Plain => {
            if !below_v {
                2
            } else if small_d {
                0
            } else {
                1
            }
        }
        Variant::Maximal => {
            let x_new: Vec<f64> = pt.x.iter().zip(&pt.d).map(|(&a, &b)| a + b).collect();
            let inside = space.norm(&x_new).unwrap() <= pt.m.unwrap();
            match (inside, small_d, below_v) {
                (true, true, true) => 0,   // 1a
                (true, true, false) => 1,  // 1b
                (true, false, _) => 2,     // 1c
                (false, true, _) => 3,     // 2a
                (false, false, _) => 4,    // 2b
            }
        }
    }
}

/// Draw one sample; `stratum` 0 is the unforced interior, `1 + i` forces
/// boundary stratum `i`.
fn draw(rng: &mut Rng, space: &SpaceDescriptor, variant: Variant, stratum: usize) -> SamplePoint {
    let p = space.p;
    let names = strata_of(variant);
    let forced = if stratum == 0 { None } else { Some(names[stratum - 1]) };

    let mut q = rng.log_uniform(MAG_LO, MAG_HI);
    let mut nx = rng.log_uniform(MAG_LO, MAG_HI);
    let mut nd = rng.log_uniform(MAG_LO, MAG_HI);
    let v = rng.log_uniform(MAG_LO, MAG_HI);
    let mut s = rng.u01();
    let mut tau = if rng.u01() < 0.25 {
        0.0
    } else {
        rng.log_uniform(1e-4, 1e2)
    };
    let xdir = rng.direction(space);
    let ddir = rng.direction(space);
    let t_raw = rng.u01();

    match forced {
        Some("q_zero") => q = 0.0,
        Some("x_zero") => nx = 0.0,
        Some("u_eq_v") => s = 1.0,
        Some("u_zero") => s = 0.0,
        Some("m_eq_x") => tau = 0.0,
        Some("d_shell") => nd = math::root(q / 2.0, p),
        Some("d_zero") => nd = 0.0,
        _ => {}
    }

    let u = s * v;
    // e = t v with t uniform on [-s, 4]
    let mut e = (-s + (4.0 + s) * t_raw) * v;
    match forced {
        Some("e_neg_u") => e = -u,
        Some("ue_shell") => e = v - u,
        _ => {
            if u + e < 0.0 {
                e = -u;
            }
        }
    }

    let x: Vec<f64> = xdir.iter().map(|&c| c * nx).collect();
    let d: Vec<f64> = ddir.iter().map(|&c| c * nd).collect();
    let m = match variant {
        Variant::Plain => None,
        Variant::Maximal => Some(space.norm(&x).unwrap() * (1.0 + tau)),
    };
    SamplePoint { x, m, q, u, v, d, e }
}

fn eval(
    space: &SpaceDescriptor,
    k: &BellmanConstants,
    variant: Variant,
    pt: &SamplePoint,
) -> GapEval {
    let pert = Perturbation {
        d: pt.d.clone(),
        e: pt.e,
    };
    match variant {
        Variant::Plain => gap_plain(
            space,
            &PlainPoint {
                x: pt.x.clone(),
                q: pt.q,
                u: pt.u,
                v: pt.v,
            },
            &pert,
            k,
        )
        .expect("sampled point satisfies the domain invariants"),
        Variant::Maximal => gap_max(
            space,
            &MaxPoint {
                x: pt.x.clone(),
                m: pt.m.unwrap(),
                q: pt.q,
                u: pt.u,
                v: pt.v,
            },
            &pert,
            k,
        )
        .expect("sampled point satisfies the domain invariants"),
    }
}

#[derive(Clone)]
struct ChunkState {
    min_gap: f64,
    violations: u64,
    best: Option<(f64, u64, u64, ArgMin)>, // (normalized gap, chunk, idx, detail)
    strata: Vec<(u64, f64, u64)>,          // (samples, min normalized gap, violations)
    cases: Vec<(u64, f64, u64)>,
}

fn merge_slots(mine: &mut [(u64, f64, u64)], theirs: Vec<(u64, f64, u64)>) {
    for (m, t) in mine.iter_mut().zip(theirs) {
        m.0 += t.0;
        m.1 = m.1.min(t.1);
        m.2 += t.2;
    }
}

impl ChunkState {
    fn empty(n_strata: usize, n_cases: usize) -> Self {
        ChunkState {
            min_gap: f64::INFINITY,
            violations: 0,
            best: None,
            strata: vec![(0, f64::INFINITY, 0); n_strata + 1],
            cases: vec![(0, f64::INFINITY, 0); n_cases],
        }
    }

    fn merge(mut self, other: ChunkState) -> Self {
        self.min_gap = self.min_gap.min(other.min_gap);
        self.violations += other.violations;
        self.best = match (self.best.take(), other.best) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => {
                // lexicographic tie-break keeps the merge order-independent
                if (a.0, a.1, a.2) <= (b.0, b.1, b.2) {
                    Some(a)
                } else {
                    Some(b)
                }
            }
        };
        merge_slots(&mut self.strata, other.strata);
        merge_slots(&mut self.cases, other.cases);
        self
    }
}

/// Run one concavity scan.
pub fn concavity_scan(cfg: &ScanConfig) -> ScanReport {
    assert!(cfg.samples >= 1, "sample_count must be >= 1");
    let names = strata_of(cfg.variant);
    let case_names = cases_of(cfg.variant);
    let n_strata = names.len();
    let n_cases = case_names.len();
    let chunks = cfg.samples.div_ceil(CHUNK);

    let state = (0..chunks)
        .into_par_iter()
        .map(|ck| {
            let mut rng = Rng::stream(cfg.seed, ck);
            let count = CHUNK.min(cfg.samples - ck * CHUNK);
            let mut st = ChunkState::empty(n_strata, n_cases);
            for idx in 0..count {
                let sel = rng.u01();
                let stratum = if sel < 0.8 {
                    0
                } else {
                    1 + (((sel - 0.8) / 0.2 * n_strata as f64) as usize).min(n_strata - 1)
                };
                let pt = draw(&mut rng, &cfg.space, cfg.variant, stratum);
                let gap = eval(&cfg.space, &cfg.constants, cfg.variant, &pt);
                let normalized = gap.value / gap.scale;
                let violating = gap.value < -VIOLATION_TOL * gap.scale;
                if violating {
                    st.violations += 1;
                }
                let slot = &mut st.strata[stratum];
                slot.0 += 1;
                slot.1 = slot.1.min(normalized);
                if violating {
                    slot.2 += 1;
                }
                let case = classify(&cfg.space, cfg.variant, &pt);
                let cslot = &mut st.cases[case];
                cslot.0 += 1;
                cslot.1 = cslot.1.min(normalized);
                if violating {
                    cslot.2 += 1;
                }
                if normalized < st.min_gap {
                    st.min_gap = normalized;
                }
                let better = match &st.best {
                    None => true,
                    Some(b) => (normalized, ck, idx) < (b.0, b.1, b.2),
                };
                if better {
                    st.best = Some((
                        normalized,
                        ck,
                        idx,
                        ArgMin {
                            x: pt.x.clone(),
                            m: pt.m,
                            q: pt.q,
                            u: pt.u,
                            v: pt.v,
                            d: pt.d.clone(),
                            e: pt.e,
                            gap: gap.value,
                            scale: gap.scale,
                        },
                    ));
                }
            }
            st
        })
        .reduce(|| ChunkState::empty(n_strata, n_cases), ChunkState::merge);

    let collect = |slots: &[(u64, f64, u64)], label: &dyn Fn(usize) -> &'static str| {
        slots
            .iter()
            .enumerate()
            .map(|(i, &(samples, min_gap, violations))| StratumStat {
                name: label(i).to_string(),
                samples,
                min_gap: if samples == 0 { f64::INFINITY } else { min_gap },
                violations,
            })
            .collect::<Vec<_>>()
    };
    let strata = collect(&state.strata, &|i| if i == 0 { "interior" } else { names[i - 1] });
    let cases = collect(&state.cases, &|i| case_names[i]);

    ScanReport {
        schema: 1,
        variant: cfg.variant,
        space: cfg.space.clone(),
        p: cfg.space.p,
        c: cfg.constants.c,
        c_tilde: cfg.constants.c_tilde,
        samples: cfg.samples,
        seed: cfg.seed,
        min_gap: state.min_gap,
        argmin: state.best.map(|b| b.3),
        violations: state.violations,
        strata,
        cases,
    }
}
