//! Reflectionless Schrödinger potentials built from spectral data.
//!
//! Given bound-state parameters `κ_1 > κ_2 > … > 0` and positive right
//! norming constants `m_j`, the crate evaluates the potential
//! `q = 2Q'`, `Q(x) = κᵀ(A²e^{2xK} + Γ)⁻¹κ`, its Jost solutions and
//! scattering coefficient, the KdV soliton field obtained by evolving the
//! norming constants, and the three-spectra / Herglotz machinery relating
//! norming constants to Dirichlet half-line spectra.
//!
//! [`oracle`] is an independent direct-scattering verifier: it integrates
//! the Schrödinger equation numerically and never touches the closed forms.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod blaschke;
pub mod error;
pub mod gram;
pub mod kdv;
pub mod ode;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod spectral_data;

mod linalg;

pub use error::{Error, Result};
pub use spectral_data::{NormingRule, Preset, Side, SpectralData, TailPolicy, ThreeSpectra};
