//! Simulation and analysis of the random-copying consumer choice model:
//! long-tailed sales with turnover, power-law exponent fits, best-seller
//! list turnover, and optimal inventory size under turnover costs.

pub mod analysis;
pub mod experiments;
pub mod inventory;
pub mod model;

pub use analysis::{PowerLawFit, TopYSeries, TurnoverStats, LogLogFit};
pub use inventory::{InventoryParams, InventoryResult};
pub use model::{ProductId, SimConfig, SimState, Simulation};
