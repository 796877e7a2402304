//! Shared inputs for the criterion benches.

use curvlab::{fundamental_data, jet2, FundamentalData, ImmersionSpec};

/// Catalog specs with a label, from cheap to expensive.
pub fn specs() -> Vec<(&'static str, ImmersionSpec)> {
    vec![
        ("sphere2", ImmersionSpec::sphere(2, 1.0)),
        ("clifford2", ImmersionSpec::clifford(2)),
        ("clifford4", ImmersionSpec::clifford(4)),
        ("veronese2", ImmersionSpec::veronese(2)),
        ("veronese3", ImmersionSpec::veronese(3)),
    ]
}

/// Second-order data at the first landmark of `spec`.
pub fn landmark_data(spec: &ImmersionSpec) -> FundamentalData {
    let u = spec.landmark_parameters().swap_remove(0);
    fundamental_data(&jet2(spec, &u).expect("catalog jet")).expect("catalog data")
}
