//! Finite-alphabet probability primitives.
//!
//! All information quantities are in bits. Types are immutable once built
//! and validated.

mod density;
mod distortion;
mod kernel;
mod pmf;

pub use density::{
    channel_dispersion, information_density, mutual_information, posterior, Dispersion,
    InfoDensityTable, Posterior,
};
pub use distortion::{distortion_ball_mass, DistortionMatrix};
pub use kernel::{product_channel, Kernel, DEFAULT_CELL_BUDGET};
pub use pmf::Pmf;
