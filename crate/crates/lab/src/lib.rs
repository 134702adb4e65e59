//! Grid-based laboratory for modulated Ginzburg-Landau wave trains: spectral
//! fields and norms, time steppers for the CGL equation, its modulation
//! systems and the KdV equation, the long-wave ansatz and its residual, and
//! the scaling experiments built on them.

pub mod ansatz;
pub mod cli;
pub mod cgl;
pub mod error;
pub mod field;
pub mod grid;
pub mod hierarchy;
pub mod io;
pub mod kdv;
pub mod modulation;
pub mod multiplier;
pub mod norms;
pub mod stepper;
pub mod transforms;
pub mod validation;

pub use error::{LabError, Result};
pub use field::SpectralField;
pub use grid::SpectralGrid;
