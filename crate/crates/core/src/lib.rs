//! Forward and inverse Steklov spectra of warped-product cylinders
//! `[0, 1] x S^{n-1}` with metric `f(x) (dx^2 + g_S)`.
//!
//! The forward path separates variables into a family of Sturm-Liouville
//! problems, evaluates the characteristic and Weyl-Titchmarsh functions by
//! scaled shooting, and diagonalises one 2x2 Dirichlet-to-Neumann block per
//! transversal mode. The inverse path reads boundary data back off the two
//! asymptotically affine eigenvalue branches.

pub mod asymptotics;
pub mod chebyshev;
pub mod cli;
pub mod dn_map;
pub mod error;
pub mod inverse;
pub mod ode;
pub mod regression;
pub mod scaled;
pub mod sturm_liouville;
pub mod transversal;
pub mod warping;

pub use dn_map::{Branch, DNBlock, SpectrumEntry, SteklovSpectrum};
pub use error::{Error, Result};
pub use scaled::ScaledValue;
pub use warping::{Potential, WarpingProfile};
