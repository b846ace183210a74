//! Moyal deformation quantization toolkit.
//!
//! Exact star products on polynomial phase-space observables, star
//! exponentials with their ħ-expansion, a banded finite-difference spectral
//! side with Weyl symbol reconstruction, harmonic-oscillator closed forms,
//! and small-σ heat coefficient expansions.

pub mod banded;
pub mod config;
pub mod error;
pub mod figures;
pub mod fit;
pub mod jet;
pub mod ledger;
pub mod oscillator;
pub mod parse;
pub mod phasepoly;
pub mod potential;
pub mod quad;
pub mod sdw;
pub mod sigma;
pub mod spectral;
pub mod weyl;
pub mod zeta;
pub mod starexp;

pub use error::{Error, Result};
pub use phasepoly::{moyal_bracket, omega2_tilde, omega_k, star, star_power};
pub use phasepoly::{CRat, Monomial, PhasePoly, Rat, StarContext, DEGREE_CAP};
pub use sigma::SigmaSeries;
