//! Exact Monte-Carlo simulation of the labelled Poisson-process codebooks.
//!
//! Every trial draws its randomness from [`rng_spawn`]`(seed, trial)` and
//! results are merged in trial order, so a run is bit-for-bit reproducible
//! for any number of worker threads.

mod codebook;
mod lemmas;
mod result;
mod rng;
mod runner;
mod schemes;

pub use codebook::{stream_select, ArrivalTable, Backend, Codebook, Selection, StreamCodebook};
pub use lemmas::{simulate_conditional_list_pml, simulate_list_pml, ConditionalPmlInstance};
pub use result::{two_sample_z, MismatchCell, MismatchReport, TrialBatchResult};
pub use rng::{rng_spawn, TrialRng};
pub use runner::RunConfig;
pub use schemes::{simulate_disjoint_nested, simulate_scheme, simulate_wz_scheme, JsccSimulator};
