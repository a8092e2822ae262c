//! Regression fixture for the vector-valued square-function check on a field
//! of independent +-1-increment martingales (ratio frozen after first run).

use bdg_core::extrapolate::verify_vector_bdg;
use bdg_core::funspace::FunctionSpaceDescriptor;
use bdg_lab::instances::build_sign_increment_field;

#[test]
fn sign_increment_field_ratio_pinned() {
    let field = build_sign_increment_field(6, 4, 11).unwrap();
    let fs = FunctionSpaceDescriptor::new(3.0, 4).unwrap();
    let rep = verify_vector_bdg(&field, &fs, 2.0).unwrap();
    assert!(rep.ratio.satisfied);
    assert!(rep.chain.hypothesis_ok);
    // the ratio stays below the chain-derived constant
    assert!(rep.ratio.ratio <= rep.chain.effective_constant);
    // frozen after the first run
    assert!(
        (rep.ratio.ratio - 1.2523933222688339).abs() < 1e-12,
        "ratio = {:.17}",
        rep.ratio.ratio
    );
    assert!(
        (rep.chain.m_measured - 1.3545684089234271).abs() < 1e-12,
        "M = {:.17}",
        rep.chain.m_measured
    );
}
