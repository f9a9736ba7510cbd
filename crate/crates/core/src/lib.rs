//! Tau-functions of Joyce structures.
//!
//! Two concrete families are covered: uncoupled BPS structures, where the
//! tau-function is built from the modified gamma function, and the A2
//! quiver, where it is assembled from elliptic periods, Fock–Goncharov
//! coordinates of the deformed cubic oscillator and the Painlevé I
//! Hamiltonian flow.

pub mod a2;
pub mod bps;
pub mod elliptic;
pub mod error;
pub mod forms;
pub mod ode;
pub mod oscillator;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
