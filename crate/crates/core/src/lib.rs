//! Two-step QND preparation of spin cat states.
//!
//! A collective spin near the equator is mapped to a single bosonic mode
//! with quadratures `x` and `p`. A first QND measurement of `p` leaves a
//! squeezed state; a second, number-resolving QND measurement with coupling
//! `beta` and outcome `p_R` collapses it into a superposition of two
//! displaced wave packets at `p = ±sqrt(2 mu)`.
//!
//! Modules, bottom up:
//! - [`hermite`], [`state`], [`quadrature`]: number-basis states and their
//!   quadrature representations.
//! - [`protocol`]: the two measurement steps, outcome densities and sampling.
//! - [`cat`]: analytic cat forms, peak and fringe analysis.
//! - [`trajectory`]: Monte Carlo over outcomes.
//! - [`feasibility`]: experimental parameter chain.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cat;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod hermite;
pub mod io;
pub mod protocol;
pub mod quadrature;
pub mod rng;
pub mod state;
pub mod trajectory;

pub use error::{Error, Result};
pub use protocol::{CatPreparation, SqueezeParams};
pub use quadrature::{Basis, QuadratureGrid, QuadratureWavefunction};
pub use rng::RandomSource;
pub use state::NumberState;
