//! One-shot broadcast joint source-channel coding with codebook diversity.
//!
//! A single encoder broadcasts to `K` decoders over independent copies of a
//! channel; decoding succeeds if at least one decoder reconstructs the
//! source within distortion `D`. This crate provides
//!
//! - [`prob`]: finite-alphabet pmfs, channels, information density and
//!   dispersion;
//! - [`bounds`]: exact evaluation of the disjoint, baseline, hybrid and
//!   side-information achievability bounds, plus the BSC closed forms;
//! - [`sim`]: exact Monte-Carlo simulation of the Poisson-process codebooks
//!   (two independent backends) and the list matching-lemma harnesses;
//! - [`second_order`]: rate-distortion, tilted information and the normal
//!   (dispersion) approximations, including the Gaussian-max quantile;
//! - [`rate_search`]: achievable rates over the BSC and the scheme sweep.
//!
//! The exact evaluators are generic over [`Real`]; the aliases below fix
//! the scalar to `f64` (or `f32`).

// `!(x >= 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod prob;
pub mod rate_search;
pub mod scalar;
pub mod second_order;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Pmf64 = prob::Pmf<f64>;
pub type Kernel64 = prob::Kernel<f64>;
pub type DistortionMatrix64 = prob::DistortionMatrix<f64>;
pub type InfoDensityTable64 = prob::InfoDensityTable<f64>;
pub type JsccInstance64 = bounds::JsccInstance<f64>;
pub type WzInstance64 = bounds::WzInstance<f64>;

pub type Pmf32 = prob::Pmf<f32>;
pub type Kernel32 = prob::Kernel<f32>;
pub type DistortionMatrix32 = prob::DistortionMatrix<f32>;
pub type JsccInstance32 = bounds::JsccInstance<f32>;
