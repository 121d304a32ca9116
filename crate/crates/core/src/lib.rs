//! Distributed-element transmission-line networks as quantum gates.
//!
//! * [`line`] and [`network`] describe wires and the graphs they form.
//! * [`scattering`] solves the Kirchhoff system of a network at fixed `k`.
//! * [`gates`] and [`unitary`] turn solved networks into gate unitaries and
//!   compose them.
//! * [`dirac`] integrates the telegrapher equations in time.
//! * [`shor`] runs period finding for small moduli, including the compiled
//!   three-qubit circuit for `N = 15`.

pub mod dirac;
pub mod error;
pub mod gates;
pub mod line;
pub mod linalg;
pub mod network;
pub mod scattering;
pub mod shor;
pub mod statevector;
pub mod unitary;

pub use error::{GateError, ModelError, ShorError, SimulationError, SolverError};
pub use line::LineParameters;
pub use network::{NetworkGraph, Port, PortRole, Segment};
pub use scattering::{ScatteringSolution, SMatrix};
pub use statevector::Statevector;
pub use unitary::GateUnitary;
