//! Normal approximations: rate-distortion and tilted information, the
//! disjoint and hybrid second-order conditions, and the quantile of the
//! maximum of equicorrelated Gaussians.
//!
//! All logarithms are base 2.

mod conditions;
mod gaussian_max;
mod normal;
mod quadrature;
mod rate_distortion;

pub use conditions::{
    disjoint_condition, hybrid_condition, hybrid_spec, ConditionParams, ConditionResult,
    SecondOrderQuantities,
};
pub use gaussian_max::{gaussian_max_cdf, gaussian_max_quantile, GaussianMaxSpec};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, q_inv};
pub use quadrature::integrate;
pub use rate_distortion::{
    d_tilted_information, rate_distortion, RateDistortionSolution, DEFAULT_TOL,
};
