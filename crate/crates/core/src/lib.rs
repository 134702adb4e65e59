//! Linear theory for modulated wave trains of the complex Ginzburg-Landau
//! equation
//!
//! ```text
//! ∂T Ψ = (1 + iα) ∂X² Ψ + Ψ − (1 + iβ) Ψ |Ψ|²
//! ```
//!
//! near the Eckhaus boundary. Everything in this crate is a pure function of
//! parameter values and a single wavenumber: the Fourier symbols of the
//! modulation operators, the spectral curves λ±(k), their Taylor
//! coefficients, the sideband threshold, the (α, β) region classifier and
//! the slaving coefficients of the KdV long-wave ansatz.
//!
//! The crate is `no_std`; transcendental functions come from `libm`.
//! Grid-based machinery (fields, transforms, solvers) lives in `eckhaus-lab`.
#![cfg_attr(not(test), no_std)]

pub mod bounds;
pub mod coefficients;
mod error;
pub mod expansion;
pub mod mat2;
pub mod params;
pub mod region;
pub mod symbol;
pub mod transforms;

pub use bounds::{check_spectral_bounds, BoundKind, BoundViolation, SpectralBoundsReport};
pub use coefficients::AnsatzCoefficients;
pub use error::Error;
pub use expansion::{expansion_coeffs, ExpansionCoefficients};
pub use mat2::Mat2;
pub use params::CglParams;
pub use region::{classify_region, r_of_z, sideband_threshold, Region, RegionVerdict, BOUNDARY_TOL};
pub use symbol::{eval_dispersion, eval_symbol, DispersionSample};

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
