//! Steady-state bifurcations of homogeneous feedforward coupled-cell networks.
//!
//! [`network`] and [`linear`] describe the network and the linearization at
//! the origin. [`predictor`] lists every branch of steady states with its
//! leading-order growth, and [`dynamics`] checks those predictions against the
//! full nonlinear system.

pub mod cellset;
pub mod dynamics;
pub mod exec;
pub mod linear;
pub mod network;
pub mod predictor;
pub mod presets;
pub mod report;

pub use cellset::CellSet;
pub use exec::Execution;
pub use linear::{Criticality, Matrix, Scenario, SystemParams};
pub use network::Network;
