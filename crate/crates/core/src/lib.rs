//! Two-mode squeezed states of bosons and fermions.
//!
//! - [`boson`]: truncated two-mode Fock space, squeezing by dense
//!   exponential, disentangled (BCH) product and closed-form Fock sum,
//!   displacement and Bogoliubov maps.
//! - [`entanglement`]: reduced densities, von Neumann entropy, Gibbs
//!   densities, the entropy gap curve and the maximum-entropy check.
//! - [`grassmann`]: an exact Grassmann algebra with Berezin integration and
//!   operators on one or two fermion modes with Grassmann coefficients.
//! - [`fermion`]: fermionic coherent states, two-mode fermionic squeezing and
//!   its reduced density.
//! - [`table`]: CSV tables of the curves.
//!
//! Numeric routines are generic over [`scalar::Real`] (`f32`, `f64`); the
//! Grassmann algebra over [`scalar::Coefficient`], which includes exact
//! complex rationals. The aliases below fix the common choices.

use num_complex::Complex;

pub mod boson;
pub mod entanglement;
pub mod error;
pub mod fermion;
pub mod grassmann;
pub mod linalg;
pub mod scalar;
pub mod table;

pub use error::{Error, Result};

/// Exact complex-rational Grassmann coefficients.
pub type Exact = grassmann::relations::Exact;

pub type TwoModeState64 = boson::TwoModeState<f64>;
pub type TwoModeState32 = boson::TwoModeState<f32>;
pub type ModeOperator64 = boson::ModeOperator<f64>;
pub type ModeOperator32 = boson::ModeOperator<f32>;
pub type DensityMatrix64 = entanglement::DensityMatrix<f64>;
pub type DensityMatrix32 = entanglement::DensityMatrix<f32>;

pub type GrassmannElement64 = grassmann::GrassmannElement<Complex<f64>>;
pub type ExactGrassmann = grassmann::GrassmannElement<Exact>;
pub type SuperOperator64 = grassmann::SuperOperator<Complex<f64>>;
pub type ExactSuperOperator = grassmann::SuperOperator<Exact>;
pub type FermionState64 = fermion::FermionState<Complex<f64>>;
pub type ExactFermionState = fermion::FermionState<Exact>;
