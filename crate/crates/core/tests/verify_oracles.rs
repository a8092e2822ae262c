//! Leaf-enumeration oracles for the instance-level inequality checks.
//!
//! Expected values come from enumerating the (tiny) trees by hand; the
//! arithmetic is re-derived in each test.

use bdg_core::bellman::{u_max, BellmanConstants, MaxPoint};
use bdg_core::conditions::Variant;
use bdg_core::dyadic::{FiltrationTree, Martingale, ScalarProcess};
use bdg_core::math;
use bdg_core::verify::{
    bound_maximal_ch, bound_maximal_sm, verify_lr, verify_maximal_weighted,
    verify_nonmaximal_weighted, verify_sg_comparison, verify_telescoping, verify_triple_process,
};
use bdg_core::SpaceDescriptor;

fn scalar() -> SpaceDescriptor {
    SpaceDescriptor::scalar(2.0).unwrap()
}

/// N = 2 terminal (4, 0, 2, 2): f1 = (2, 2), f0 = 2; f* = (4, 2, 2, 2);
/// S_2 f = (sqrt8, sqrt8, 2, 2).
fn standard_instance() -> Martingale {
    let t = FiltrationTree::new(2).unwrap();
    Martingale::from_terminal(&t, 1, &[4.0, 0.0, 2.0, 2.0]).unwrap()
}

#[test]
fn maximal_weighted_enumeration() {
    let s = scalar();
    let m = standard_instance();
    let rep = verify_maximal_weighted(&s, &m, &[1.0; 4]).unwrap();
    // lhs = (4+2+2+2)/4 = 2.5; rhs = (2 sqrt8 + 4)/4.
    let rhs = (2.0 * math::sqrt(8.0) + 4.0) / 4.0;
    assert!((rep.lhs - 2.5).abs() < 1e-14);
    assert!((rep.rhs - rhs).abs() < 1e-14);
    assert!((rep.ratio - 2.5 / rhs).abs() < 1e-14);
    assert!((rep.ratio - 1.0355339059327378).abs() < 1e-12);
    // the sharper bound is reported: 21 p' c_h = 42 sqrt 2
    assert!((rep.bound - bound_maximal_ch(&s)).abs() < 1e-12);
    assert!(bound_maximal_ch(&s) <= bound_maximal_sm(&s));
    assert!(rep.satisfied);
}

#[test]
fn lr_enumeration() {
    let s = scalar();
    let m = standard_instance();
    let rep = verify_lr(&s, &m, 2.0).unwrap();
    // ||f*||_2 = sqrt(28/4) = sqrt 7; ||S_2 f||_2 = sqrt(24/4) = sqrt 6.
    assert!((rep.lhs - math::sqrt(7.0)).abs() < 1e-14);
    assert!((rep.rhs - math::sqrt(6.0)).abs() < 1e-14);
    assert!(rep.satisfied);

    // scaling the terminal leaves the ratio unchanged
    let t = FiltrationTree::new(2).unwrap();
    let m2 = Martingale::from_terminal(&t, 1, &[40.0, 0.0, 20.0, 20.0]).unwrap();
    let rep2 = verify_lr(&s, &m2, 2.0).unwrap();
    assert!((rep2.ratio - rep.ratio).abs() < 1e-12);

    assert!(verify_lr(&s, &m, 1.0).is_err());
}

#[test]
fn sg_comparison_enumeration() {
    let s = scalar();
    let m = standard_instance();
    let rep = verify_sg_comparison(&s, &m, 2.0).unwrap();
    // sg = (2, 2, 0, 0): ||sg||_2 = sqrt 2; ||S_2 f||_2 = sqrt 6.
    assert!((rep.lhs - math::sqrt(2.0)).abs() < 1e-14);
    assert!((rep.rhs - math::sqrt(6.0)).abs() < 1e-14);
    assert!((rep.ratio - math::sqrt(2.0 / 6.0)).abs() < 1e-13);
    assert!(rep.satisfied);
}

#[test]
fn sg_equals_s2_for_deterministic_sign_tree() {
    // g_n = sum of +-1 increments, one sign flip per level: sg = S_2 g,
    // ratio 1 <= sqrt(r/2).
    let s = scalar();
    let mut levels = vec![vec![0.0f64]];
    for n in 1..=3usize {
        let prev = levels[n - 1].clone();
        let mut cur = Vec::with_capacity(1 << n);
        for &p in &prev {
            cur.push(p + 1.0);
            cur.push(p - 1.0);
        }
        levels.push(cur);
    }
    let m = Martingale::from_process(
        bdg_core::dyadic::VectorProcess::from_levels(3, 1, levels).unwrap(),
    )
    .unwrap();
    for r in [2.0, 3.0, 4.0] {
        let rep = verify_sg_comparison(&s, &m, r).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-13, "r={r} ratio={}", rep.ratio);
        assert!(rep.satisfied);
    }
}

#[test]
fn telescoping_zero_martingale_is_identically_zero() {
    let s = scalar();
    let t = FiltrationTree::new(3).unwrap();
    let m = Martingale::from_terminal(&t, 1, &[0.0; 8]).unwrap();
    for (variant, k) in [
        (Variant::Plain, BellmanConstants::plain()),
        (Variant::Maximal, BellmanConstants::maximal()),
    ] {
        let rep = verify_telescoping(&s, &m, &[0.7, 0.0, 1.3, 2.0, 0.1, 0.4, 0.9, 1.1], variant, &k)
            .unwrap();
        assert!(rep.ok, "{rep:?}");
        assert!(rep.expected_b.iter().all(|&b| b.abs() < 1e-14));
    }
}

#[test]
fn telescoping_standard_instance() {
    let s = scalar();
    let m = standard_instance();
    let k = BellmanConstants::maximal();
    let rep = verify_telescoping(&s, &m, &[1.0; 4], Variant::Maximal, &k).unwrap();
    assert!(rep.ok, "{rep:?}");
    // E(B_0) = U(2, 2, 4, 1, 1) with the maximal-variant function.
    let b0 = u_max(
        &s,
        &MaxPoint {
            x: vec![2.0],
            m: 2.0,
            q: 4.0,
            u: 1.0,
            v: 1.0,
        },
        &k,
    )
    .unwrap();
    assert!((rep.b0 - b0).abs() < 1e-12);
    assert!(rep.b0 <= 0.0);
    let longhand = math::sqrt(6.0) - 42.0 + 4.0 * math::sqrt(2.0) * 2.0 * core::f64::consts::LN_2;
    assert!((b0 - longhand).abs() < 1e-12);
    assert!((b0 - (-31.708445109468443)).abs() < 1e-9);
    // E(B_n) nonincreasing
    for w in rep.expected_b.windows(2) {
        assert!(w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()));
    }
}

#[test]
fn triple_with_unit_multiplier_reduces_to_the_martingale() {
    let s = scalar();
    let t = FiltrationTree::new(3).unwrap();
    // g with g_0 = 0
    let g = Martingale::from_terminal(&t, 1, &[1.0, -1.0, 3.0, -3.0, 2.0, -2.0, 0.5, -0.5])
        .unwrap();
    assert_eq!(g.value(0, 0), &[0.0]);
    let lambda_one = ScalarProcess {
        depth: 3,
        levels: (0..=3).map(|n| vec![1.0; 1 << n]).collect(),
    };
    let w = [0.3, 1.0, 0.0, 2.0, 0.7, 0.2, 1.5, 0.9];
    let rep = verify_triple_process(&s, &g, &lambda_one, &w, 2.0).unwrap();
    let direct = verify_maximal_weighted(&s, &g, &w).unwrap();
    // with lambda = 1 the triple process is the martingale itself
    assert!((rep.weighted.lhs - direct.lhs).abs() < 1e-12);
    assert!((rep.weighted.rhs - direct.rhs).abs() < 1e-12);
    assert!(rep.weighted.satisfied && rep.lr.satisfied);
}

#[test]
fn triple_with_zero_multiplier_is_dominated() {
    // lambda = 0: f_n = g_n - g_{n-1}, so f* <= S_p g pointwise; with w = 1
    // the ratio is at most 1.
    let s = scalar();
    let t = FiltrationTree::new(3).unwrap();
    let g = Martingale::from_terminal(&t, 1, &[2.0, -1.0, 0.5, -3.0, 1.0, -1.0, 2.5, -0.5])
        .unwrap();
    let g0 = g.value(0, 0)[0];
    // shift so g_0 = 0 exactly
    let levels: Vec<Vec<f64>> = (0..=3)
        .map(|n| {
            (0..(1 << n))
                .map(|i| g.value(n, i)[0] - g0)
                .collect()
        })
        .collect();
    let g = Martingale::from_process(
        bdg_core::dyadic::VectorProcess::from_levels(3, 1, levels).unwrap(),
    )
    .unwrap();
    let lambda_zero = ScalarProcess {
        depth: 3,
        levels: (0..=3).map(|n| vec![0.0; 1 << n]).collect(),
    };
    let rep = verify_triple_process(&s, &g, &lambda_zero, &[1.0; 8], 2.0).unwrap();
    assert!(rep.weighted.ratio <= 1.0 + 1e-12, "ratio = {}", rep.weighted.ratio);
    assert!(rep.weighted.satisfied);
}

#[test]
fn nonmaximal_constant_martingale_ratio_one() {
    let s = scalar();
    let t = FiltrationTree::new(2).unwrap();
    let m = Martingale::from_terminal(&t, 1, &[3.0; 4]).unwrap();
    let rep = verify_nonmaximal_weighted(&s, &m, &[1.0; 4]).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-14);
    assert!(rep.bound >= 9.0 * s.c_h - 1e-12);
    assert!(rep.satisfied);
}

#[test]
fn nonmaximal_lhs_dominated_by_maximal_lhs() {
    let s = scalar();
    let m = standard_instance();
    let w = [0.5, 2.0, 0.0, 1.0];
    let non = verify_nonmaximal_weighted(&s, &m, &w).unwrap();
    let max = verify_maximal_weighted(&s, &m, &w).unwrap();
    assert!(non.lhs <= max.lhs + 1e-14);
    assert_eq!(non.rhs, max.rhs);
}
