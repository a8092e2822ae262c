//! Fleet runner: verify every inequality on batches of seeded instances.

use bdg_core::bellman::BellmanConstants;
use bdg_core::conditions::Variant;
use bdg_core::error::Result;
use bdg_core::verify::{
    verify_lr, verify_maximal_weighted, verify_nonmaximal_weighted, verify_sg_comparison,
    verify_telescoping, verify_triple_process,
};
use bdg_core::SpaceDescriptor;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::instances::{build_instance, build_triple_inputs, Generator, InstanceConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FleetConfig {
    pub space: SpaceDescriptor,
    pub depths: Vec<usize>,
    pub generators: Vec<Generator>,
    pub trials: u64,
    pub seed: u64,
    pub r_values: Vec<f64>,
    pub telescoping: bool,
}

impl FleetConfig {
    pub fn new(space: SpaceDescriptor, depth: usize, trials: u64, seed: u64) -> Self {
        FleetConfig {
            space,
            depths: vec![depth],
            generators: Generator::ALL.to_vec(),
            trials,
            seed,
            r_values: vec![2.0, 3.0, 4.0],
            telescoping: true,
        }
    }
}

/// Worst observed ratio of one check across the fleet.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CheckStat {
    pub max_ratio: f64,
    pub bound: f64,
    pub violations: u64,
}

impl CheckStat {
    fn empty() -> Self {
        CheckStat {
            max_ratio: 0.0,
            bound: 0.0,
            violations: 0,
        }
    }

    fn absorb(&mut self, rep: &bdg_core::verify::RatioReport) {
        self.max_ratio = self.max_ratio.max(rep.ratio);
        self.bound = rep.bound;
        if !rep.satisfied {
            self.violations += 1;
        }
    }

    fn merge(mut self, other: CheckStat) -> Self {
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        self.bound = self.bound.max(other.bound);
        self.violations += other.violations;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FleetReport {
    pub schema: u32,
    pub instances: u64,
    pub violations: u64,
    pub maximal_weighted: CheckStat,
    pub nonmaximal_weighted: CheckStat,
    pub lr: CheckStat,
    pub triple_weighted: CheckStat,
    pub triple_lr: CheckStat,
    pub sg_comparison: CheckStat,
    pub telescoping_failures: u64,
    /// Worst normalized node gap seen across all telescoping runs.
    pub telescoping_min_gap: f64,
}

#[derive(Clone)]
struct Acc {
    instances: u64,
    maximal: CheckStat,
    nonmaximal: CheckStat,
    lr: CheckStat,
    triple_w: CheckStat,
    triple_lr: CheckStat,
    sg: CheckStat,
    tele_failures: u64,
    tele_min_gap: f64,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            instances: 0,
            maximal: CheckStat::empty(),
            nonmaximal: CheckStat::empty(),
            lr: CheckStat::empty(),
            triple_w: CheckStat::empty(),
            triple_lr: CheckStat::empty(),
            sg: CheckStat::empty(),
            tele_failures: 0,
            tele_min_gap: f64::INFINITY,
        }
    }

    fn merge(mut self, o: Acc) -> Self {
        self.instances += o.instances;
        self.maximal = self.maximal.merge(o.maximal);
        self.nonmaximal = self.nonmaximal.merge(o.nonmaximal);
        self.lr = self.lr.merge(o.lr);
        self.triple_w = self.triple_w.merge(o.triple_w);
        self.triple_lr = self.triple_lr.merge(o.triple_lr);
        self.sg = self.sg.merge(o.sg);
        self.tele_failures += o.tele_failures;
        self.tele_min_gap = self.tele_min_gap.min(o.tele_min_gap);
        self
    }
}

fn run_one(cfg: &FleetConfig, depth: usize, generator: Generator, trial: u64) -> Result<Acc> {
    let seed = cfg
        .seed
        .wrapping_add(trial)
        .wrapping_add((depth as u64) << 32)
        .wrapping_add((generator as u64) << 48);
    let instance = build_instance(&InstanceConfig {
        space: cfg.space.clone(),
        depth,
        generator,
        seed,
    })?;
    let mut acc = Acc::empty();
    acc.instances = 1;

    acc.maximal
        .absorb(&verify_maximal_weighted(&cfg.space, &instance.mart, &instance.weights)?);
    acc.nonmaximal.absorb(&verify_nonmaximal_weighted(
        &cfg.space,
        &instance.mart,
        &instance.weights,
    )?);
    for &r in &cfg.r_values {
        acc.lr.absorb(&verify_lr(&cfg.space, &instance.mart, r)?);
    }

    let (g, lambda) = build_triple_inputs(&cfg.space, depth, seed ^ 0x5bd1_e995)?;
    for &r in &cfg.r_values {
        let triple = verify_triple_process(&cfg.space, &g, &lambda, &instance.weights, r)?;
        if r == cfg.r_values[0] {
            acc.triple_w.absorb(&triple.weighted);
        }
        acc.triple_lr.absorb(&triple.lr);
    }
    for &r in &cfg.r_values {
        if r >= 2.0 {
            acc.sg.absorb(&verify_sg_comparison(&cfg.space, &g, r)?);
        }
    }

    if cfg.telescoping {
        for (variant, k) in [
            (Variant::Plain, BellmanConstants::plain()),
            (Variant::Maximal, BellmanConstants::maximal()),
        ] {
            let step =
                verify_telescoping(&cfg.space, &instance.mart, &instance.weights, variant, &k)?;
            if !step.ok {
                acc.tele_failures += 1;
            }
            acc.tele_min_gap = acc.tele_min_gap.min(step.min_gap_normalized);
        }
    }
    Ok(acc)
}

/// Run the fleet; parallel across instances, merged order-independently.
pub fn run_fleet(cfg: &FleetConfig) -> Result<FleetReport> {
    let mut jobs = Vec::new();
    for &depth in &cfg.depths {
        for &generator in &cfg.generators {
            for trial in 0..cfg.trials {
                jobs.push((depth, generator, trial));
            }
        }
    }
    let acc = jobs
        .par_iter()
        .map(|&(depth, generator, trial)| run_one(cfg, depth, generator, trial))
        .try_reduce(Acc::empty, |a, b| Ok(a.merge(b)))?;

    let violations = acc.maximal.violations
        + acc.nonmaximal.violations
        + acc.lr.violations
        + acc.triple_w.violations
        + acc.triple_lr.violations
        + acc.sg.violations
        + acc.tele_failures;
    Ok(FleetReport {
        schema: 1,
        instances: acc.instances,
        violations,
        maximal_weighted: acc.maximal,
        nonmaximal_weighted: acc.nonmaximal,
        lr: acc.lr,
        triple_weighted: acc.triple_w,
        triple_lr: acc.triple_lr,
        sg_comparison: acc.sg,
        telescoping_failures: acc.tele_failures,
        telescoping_min_gap: acc.tele_min_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fleet_is_clean_and_deterministic() {
        let cfg = FleetConfig {
            space: SpaceDescriptor::scalar(2.0).unwrap(),
            depths: vec![3],
            generators: Generator::ALL.to_vec(),
            trials: 4,
            seed: 17,
            r_values: vec![2.0, 3.0],
            telescoping: true,
        };
        let a = run_fleet(&cfg).unwrap();
        assert_eq!(a.violations, 0);
        assert_eq!(a.instances, 12);
        let b = run_fleet(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
