//! Generalized coherent states from deformed Heisenberg / su(1,1) algebras,
//! quantum Fisher information and Cramér-Rao bounds for a Mach-Zehnder
//! interferometer, and phase sensitivity under three detection schemes,
//! cross-validated against an exact truncated two-mode Fock-space oracle.
//!
//! The crate is organized around the measurement chain:
//!
//! * [`algebra`] — deformed energy spectrum and ladder-coefficient sequences.
//! * [`states`] — normalized coherent states and single-mode moments.
//! * [`mixing`] — linear two-mode operator transformations and the
//!   product-state observable statistics every closed form reduces to.
//! * [`fisher`] — QFIM elements, the three scenario QFIs, and QCRBs.
//! * [`detection`] — difference-intensity, single-mode-intensity, and
//!   balanced-homodyne sensitivities, with the detection-efficiency model.
//! * [`oracle`] — dense two-mode Fock-space reference implementation.
//! * [`sweep`] — parameter sweeps, working-point optimization, and the
//!   analytic-vs-oracle validation grid.

pub mod algebra;
pub mod detection;
pub mod fisher;
pub mod mixing;
pub mod oracle;
pub mod states;
pub mod sweep;

mod error;

pub use error::{Error, Result};
