//! Exact evaluation of the one-shot achievability bounds.
//!
//! General finite instances are evaluated by enumeration
//! ([`theorem1_bound`], [`hybrid_bound`], [`theorem2_wz_bound`], ...);
//! [`bsc_bound`] and [`psi_pmf`] give the near-lossless closed forms over
//! `BSC(delta)^n`.

mod bsc;
mod general;
mod instance;

pub use bsc::{baseline_limit, binomial_pmf, bsc_bound, psi_pmf};
pub use general::{
    baseline_bound, corollary1_lossless_bound, corollary1_slepian_wolf_bound, hybrid_bound,
    theorem1_bound, theorem2_wz_bound,
};
pub use instance::{JsccInstance, SchemeDescriptor, SchemeKind, WzInstance};
