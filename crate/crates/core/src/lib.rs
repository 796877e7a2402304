//! Immersions of small normal curvature: a catalog of explicit examples, a
//! second-fundamental-form engine, degree-4 spherical designs, discrete curve
//! inequalities, and closed-form curvature bounds.

pub mod bounds;
pub mod curvature;
pub mod curves;
pub mod designs;
pub mod error;
pub mod exact;
pub mod immersions;
pub mod rng;

pub use curvature::{
    curv_dir, fundamental_data, mean_curvature, normal_curvature_at, normal_curvature_global, petrunin_pi,
    CurvatureOptions, FundamentalData, GlobalCurvature, PointCurvature, Sampler,
};
pub use error::{Error, Result};
pub use exact::Rational;
pub use immersions::{evaluate, jet2, jet2_fd, ImmersionSpec, Jet2, TorusLinear};
pub use designs::{Design, RationalDesign};
pub use curves::{PolyCurve, SampledCurve};
