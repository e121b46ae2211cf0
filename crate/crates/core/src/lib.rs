//! Path-integral treatment of the generalized Morse potential and its
//! complexified variants.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: complex log-gamma, Laguerre, modified Bessel and the
//!   Hille–Hardy generating function.
//! - [`model`]: the four potential families, the PT-symmetry test and the
//!   reduction to an effective radial oscillator.
//! - [`analytic`]: closed-form spectra and wavefunctions, evaluated either
//!   from the literal closed-form level formulas or from the Green's-function
//!   pole condition.
//! - [`oracle`]: finite-difference eigensolvers, Richardson extrapolation and
//!   ODE residuals used as independent ground truth.
//! - [`propagator`]: the radial-oscillator kernel in closed, spectral and
//!   time-sliced form.
//!
//! Sweeps over parameters and levels go through [`exec::Execution`], which
//! runs on rayon when the `parallel` feature is enabled and sequentially
//! otherwise.

// `!(x > y)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod exec;
pub mod model;
pub mod oracle;
pub mod propagator;
pub mod specfun;

pub use specfun::Complex;
