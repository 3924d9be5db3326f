//! Finite-dimensional and sampled-line verification of the identities of
//! Gabor analysis: time-frequency shifts, the STFT, symplectic Fourier
//! transforms, Poisson summation over lattice/adjoint-lattice pairs, the
//! fundamental identity (FIGA), Janssen's representation and Wexler-Raz
//! biorthogonality, together with discrete modulation and Wiener amalgam
//! norms.

pub mod config;
pub mod error;
pub mod figa;
pub mod frames;
pub mod group;
pub mod lattice;
pub mod norms;
pub mod report;
pub mod runner;
pub mod sampled;
mod serde_ext;
pub mod signal;
pub mod tfrepr;
pub mod transform;

pub use error::{Error, Result};
pub use group::{GroupParams, PhaseSpacePoint, C64};
pub use lattice::Lattice;
pub use signal::{PhaseSpaceFunction, Signal};
