//! A three-state spin model of a market.
//!
//! Agents sit on a periodic square lattice and hold a spin in {-1, 0, +1}
//! (sell, inactive, buy). Each agent follows its four neighbours plus a
//! Gaussian private opinion, but only acts when that signal clears a threshold
//! proportional to the absolute magnetization. The magnetization drives the
//! log price, so returns are magnetization differences.
//!
//! - [`dynamics`]: lattice update rule and the simulation protocol.
//! - [`pricing`]: prices and lagged log returns.
//! - [`statistics`]: moments, histograms, autocorrelation and decay fits.

pub mod dynamics;
mod error;
pub mod lattice;
pub mod params;
pub mod pricing;
pub mod series;
mod spin;
pub mod statistics;

pub use dynamics::{run_simulation, Simulation};
pub use error::{Error, Result};
pub use lattice::SpinLattice;
pub use params::{ModelParams, ThresholdMode};
pub use pricing::PriceParams;
pub use series::Series;
pub use spin::Spin;
