//! Bound-state spectra, wavefunctions and spectral phase diagrams for the
//! deformed Morse-like potential
//!
//! ```text
//! V(x) = A (e^{lx} + q)^-2 + B (e^{lx} + q)^-1 + C e^{lx} - (A + qB) / q^2
//! ```
//!
//! in atomic units (`hbar = m = 1`). Three independent solvers are provided:
//!
//! * [`pps`] scans trial energies, reads off the values of `B` that make each
//!   trial energy exact in a Jacobi basis and inverts the fitted curves.
//! * [`nhd`] diagonalizes the Hamiltonian in a Laguerre basis, treating
//!   `C e^{lx}` exactly and the rest by Gauss quadrature.
//! * [`fdm`] is a finite-difference oracle on a truncated interval.
//!
//! For `C = 0` the spectrum is known in closed form ([`tra::diag_spectrum`]).
//! [`potential`] classifies a configuration by the extrema of `V`.
//!
//! The `examples/` directory has one runnable program per capability:
//!
//! * `classify_configurations` - extrema and spectral class of a few configurations
//! * `phase_diagram` - class grids and boundary curves for several `q`
//! * `nhd_spectrum` - Laguerre-basis spectra
//! * `pps_spectrum` - parameter-spectrum scan and fit
//! * `fdm_oracle` - finite differences with Richardson extrapolation
//! * `closed_form_morse` - the `C = 0` spectrum against finite differences
//! * `wavefunctions` - sampled eigenfunctions and their node counts
//! * `plateau_of_stability` - choosing the Laguerre parameter
//! * `special_functions` - Jacobi, Laguerre and H-bar evaluations
//!
//! ```
//! use morsekit::{nhd, PotentialParams};
//!
//! let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
//! let spectrum = nhd::nhd_spectrum(&p, &nhd::NhdConfig::new(200, 2.0)).unwrap();
//! assert_eq!(spectrum.levels.len(), 5);
//! assert!((spectrum.energies()[0] + 6.725966329).abs() < 1e-8);
//! ```

pub mod cli;
pub mod error;
pub mod fdm;
pub mod linalg;
pub mod nhd;
pub mod polys;
pub mod potential;
pub mod pps;
pub mod tra;

mod spectrum;

pub use error::{Error, Result};
pub use linalg::{EigenResult, SymTridiag};
pub use potential::{PotentialParams, SpectralClass, UParams};
pub use spectrum::{Diagnostic, Level, Method, Spectrum};
