//! Sampling estimators for the two smoothness constants.
//!
//! Both estimators are sampled suprema, i.e. lower bounds for the true
//! constants. To keep the lower-bound property honest under floating point,
//! each sample subtracts a roundoff allowance proportional to the magnitude
//! of the quantities that entered the cancellation, so a sampled value never
//! exceeds the true constant by roundoff alone.
//!
//! Directions are uniform on the unit sphere of the space, magnitudes
//! log-uniform over `[1e-3, 1e3]`; by homogeneity the magnitude sweep is
//! redundant mathematically and serves as a floating-point scale check.
//! Scans are chunked with independent seed streams and merged by max, so
//! results do not depend on the worker count.

use bdg_core::math;
use bdg_core::space::RelationChecks;
use bdg_core::SpaceDescriptor;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng::Rng;

const CHUNK: u64 = 1 << 16;
const MAG_LO: f64 = 1e-3;
const MAG_HI: f64 = 1e3;
const EPS: f64 = f64::EPSILON;

fn chunked_max(samples: u64, seed: u64, per_sample: impl Fn(&mut Rng) -> f64 + Sync) -> f64 {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = Rng::stream(seed, k);
            let count = CHUNK.min(samples - k * CHUNK);
            let mut best = 0.0f64;
            for _ in 0..count {
                best = best.max(per_sample(&mut rng));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Sampled lower bound for the smoothness constant `c_sm`:
/// `sup ((.5(|x+y|^p + |x-y|^p) - |x|^p) / |y|^p)^(1/p)`.
pub fn estimate_csm(space: &SpaceDescriptor, samples: u64, seed: u64) -> f64 {
    assert!(samples >= 1, "sample_count must be >= 1");
    let p = space.p;
    chunked_max(samples, seed, |rng| {
        let dx = rng.direction(space);
        let dy = rng.direction(space);
        let rx = rng.log_uniform(MAG_LO, MAG_HI);
        let ry = rng.log_uniform(MAG_LO, MAG_HI);
        let x: Vec<f64> = dx.iter().map(|&c| c * rx).collect();
        let y: Vec<f64> = dy.iter().map(|&c| c * ry).collect();
        let xp = math::pow(space.norm(&x).unwrap(), p);
        let yp = math::pow(space.norm(&y).unwrap(), p);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a + b).collect();
        let dif: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a - b).collect();
        let sp = math::pow(space.norm(&sum).unwrap(), p);
        let dp = math::pow(space.norm(&dif).unwrap(), p);
        let num = 0.5 * (sp + dp) - xp;
        let allowance = 8.0 * EPS * (sp + dp + xp + yp);
        let clamped = f64::max(0.0, num - allowance);
        math::root(clamped / yp, p)
    })
}

/// Sampled lower bound for the gradient Hölder constant `c_h`:
/// `sup (|phi'(x) - phi'(y)|_* / |x-y|^(p-1))^(1/p)`.
pub fn estimate_ch(space: &SpaceDescriptor, samples: u64, seed: u64) -> f64 {
    assert!(samples >= 1, "sample_count must be >= 1");
    let p = space.p;
    chunked_max(samples, seed, |rng| {
        let dx = rng.direction(space);
        let dy = rng.direction(space);
        let rx = rng.log_uniform(MAG_LO, MAG_HI);
        let ry = rng.log_uniform(MAG_LO, MAG_HI);
        let x: Vec<f64> = dx.iter().map(|&c| c * rx).collect();
        let y: Vec<f64> = dy.iter().map(|&c| c * ry).collect();
        let dif: Vec<f64> = x.iter().zip(&y).map(|(&a, &b)| a - b).collect();
        let nd = space.norm(&dif).unwrap();
        if nd == 0.0 {
            return 0.0;
        }
        let gx = space.phi_gradient(&x).unwrap();
        let gy = space.phi_gradient(&y).unwrap();
        let gd: Vec<f64> = gx.coords.iter().zip(&gy.coords).map(|(&a, &b)| a - b).collect();
        let num = space.dual_norm_of(&gd);
        let allowance = 8.0 * EPS * (gx.dual_norm + gy.dual_norm);
        let clamped = f64::max(0.0, num - allowance);
        math::root(clamped / math::pow(nd, p - 1.0), p)
    })
}

/// Report of one smoothness-estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub schema: u32,
    pub space: SpaceDescriptor,
    pub samples: u64,
    pub seed: u64,
    pub c_sm_est: f64,
    pub c_h_est: f64,
    pub relation_checks: RelationChecks,
    /// Estimates stay below the stored constants (no sampled violation).
    pub stored_ok: bool,
}

pub fn smoothness_report(space: &SpaceDescriptor, samples: u64, seed: u64) -> SmoothnessReport {
    let c_sm_est = estimate_csm(space, samples, seed);
    let c_h_est = estimate_ch(space, samples, seed.wrapping_add(1));
    let relation_checks = space.relation_checks();
    SmoothnessReport {
        schema: 1,
        space: space.clone(),
        samples,
        seed,
        c_sm_est,
        c_h_est,
        relation_checks,
        stored_ok: c_sm_est <= space.c_sm && c_h_est <= space.c_h,
    }
}
