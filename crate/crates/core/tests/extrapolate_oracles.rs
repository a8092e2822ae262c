//! Oracles for the extrapolation chain and the vector-valued check.

use bdg_core::dyadic::{FiltrationTree, Martingale};
use bdg_core::extrapolate::{
    lr_x_norm, maximal_and_square_fields, verify_extrapolation_chain, verify_vector_bdg, BiField,
};
use bdg_core::funspace::FunctionSpaceDescriptor;
use bdg_core::verify::verify_lr;
use bdg_core::SpaceDescriptor;

#[test]
fn chain_with_equal_fields_and_unit_constant() {
    // f = g, A = 1: the hypothesis holds because w* >= w pointwise, and the
    // chain concludes ||f|| <= M ||f||.
    let tree = FiltrationTree::new(3).unwrap();
    let fs = FunctionSpaceDescriptor::new(3.0, 2).unwrap();
    let values: Vec<f64> = (0..16).map(|i| 0.25 + (i % 5) as f64 * 0.5).collect();
    let f = BiField::new(8, 2, values).unwrap();
    let rep = verify_extrapolation_chain(&tree, &f, &f, 1.0, 2.0, &fs).unwrap();
    assert!(rep.hypothesis_ok, "{:?}", rep.step_slacks);
    assert!(rep.satisfied);
    assert!(rep.m_measured >= 1.0 - 1e-12);
    assert!((rep.lhs - rep.rhs).abs() < 1e-12);
    for step in &rep.step_slacks {
        assert!(step.slack >= -1e-9, "step {} slack {}", step.name, step.slack);
    }
}

#[test]
fn chain_homogeneity() {
    // scaling f and g jointly leaves the effective constant unchanged
    let tree = FiltrationTree::new(2).unwrap();
    let fs = FunctionSpaceDescriptor::new(2.0, 3).unwrap();
    let fv: Vec<f64> = (0..12).map(|i| 0.1 + (i % 7) as f64 * 0.3).collect();
    let gv: Vec<f64> = (0..12).map(|i| 0.2 + (i % 4) as f64 * 0.4).collect();
    let f = BiField::new(4, 3, fv.clone()).unwrap();
    let g = BiField::new(4, 3, gv.clone()).unwrap();
    let a = verify_extrapolation_chain(&tree, &f, &g, 5.0, 2.5, &fs).unwrap();
    let lam = 17.0;
    let f2 = BiField::new(4, 3, fv.iter().map(|&v| lam * v).collect()).unwrap();
    let g2 = BiField::new(4, 3, gv.iter().map(|&v| lam * v).collect()).unwrap();
    let b = verify_extrapolation_chain(&tree, &f2, &g2, 5.0, 2.5, &fs).unwrap();
    assert!(
        (a.effective_constant - b.effective_constant).abs()
            < 1e-10 * (1.0 + a.effective_constant),
        "a={} b={}",
        a.effective_constant,
        b.effective_constant
    );
}

#[test]
fn single_coordinate_reduces_to_scalar_lr() {
    // d = 1: the vector check degenerates to the scalar L^r comparison at p=2.
    let tree = FiltrationTree::new(4).unwrap();
    let terminal: Vec<f64> = (0..16).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
    let m = Martingale::from_terminal(&tree, 1, &terminal).unwrap();
    let fs = FunctionSpaceDescriptor::new(2.0, 1).unwrap();
    let rep = verify_vector_bdg(&m, &fs, 2.0).unwrap();
    let s = SpaceDescriptor::scalar(2.0).unwrap();
    let lr = verify_lr(&s, &m, 2.0).unwrap();
    assert!((rep.ratio.lhs - lr.lhs).abs() < 1e-12);
    assert!((rep.ratio.rhs - lr.rhs).abs() < 1e-12);
    assert!(rep.ratio.satisfied);
}

#[test]
fn field_construction_matches_definitions() {
    let tree = FiltrationTree::new(2).unwrap();
    let m = Martingale::from_terminal(&tree, 1, &[4.0, 0.0, 2.0, 2.0]).unwrap();
    let (sup, sq) = maximal_and_square_fields(&m);
    assert_eq!(sup.values, vec![4.0, 2.0, 2.0, 2.0]);
    // per-leaf S_2 with the initial term: (sqrt8, sqrt8, 2, 2)
    let r8 = bdg_core::math::sqrt(8.0);
    for (got, want) in sq.values.iter().zip([r8, r8, 2.0, 2.0]) {
        assert!((got - want).abs() < 1e-14);
    }
    // and the L^r(X) norm over a 1-dim function space is the plain L^r norm
    let fs = FunctionSpaceDescriptor::new(2.0, 1).unwrap();
    let n = lr_x_norm(&fs, &sup, 2.0).unwrap();
    assert!((n - bdg_core::math::sqrt(7.0)).abs() < 1e-14);
}
