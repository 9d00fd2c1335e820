//! Exact symbolic-numeric analysis of necessary integrability conditions for
//! natural Hamiltonian systems with homogeneous potentials, specialized to
//! degree zero.
//!
//! The exact layer works over the Gaussian rationals Q(i); numeric layers are
//! only used for root isolation, multistart searches, and cross-validation,
//! and every certificate that decides a verdict is confirmed exactly or
//! flagged indeterminate.

pub mod analyze;
pub mod darboux;
pub mod family;
pub mod first_integrals;
pub mod gcd;
pub mod hermite;
pub mod matrix;
pub mod multipoly;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod rational;
pub mod ratfunc;
pub mod report;
pub mod spectral;
pub mod table;
pub mod unipoly;
pub mod variational;

pub use num::complex::Complex64;
pub use rational::GaussianRational;
