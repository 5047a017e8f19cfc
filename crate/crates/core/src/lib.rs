//! Weakly driven cavity QED: one two-level atom in a lossy, coherently driven
//! cavity mode.
//!
//! Two independent routes to the same observables live here:
//!
//! * [`lindblad`] builds the full master-equation superoperator on a truncated
//!   atom ⊗ cavity space, solves for the steady state and integrates the
//!   dynamics. [`correlations`] turns those states into g²(0), g²(τ), ⟨n⟩ and
//!   the l1-norm coherence of the atom.
//! * [`analytic`] is the two-excitation amplitude model: closed-form steady
//!   amplitudes, g²(0) ≈ xy/z and the coherence 2gη/√x.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is off.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod analytic;
pub mod correlations;
pub mod error;
pub mod extrema;
pub mod lindblad;
pub mod operators;
pub mod params;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use params::{HilbertConfig, SystemParams};
