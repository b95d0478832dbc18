//! Representations of the quantum algebra su_q(2) on the plane.
//!
//! The crate covers both parameter domains, positive real `q` and generic
//! `q = e^{iτ}` on the unit circle:
//!
//! - [`qcore`]: half-integer labels, q-numbers and q-factorials;
//! - [`qspecial`]: R-polynomials, the function `Q_{Jq}` in its three
//!   constructions, the `L_q` integral, basis functions Ψ and q-Vilenkin
//!   functions;
//! - [`qops`]: the generators as q-dilation stencils on plane functions and
//!   the finite-dimensional matrix irreps;
//! - [`quadrature`]: polar-coordinate integration on the plane;
//! - [`qinner`]: the classical and deformed scalar products, Gram matrices
//!   and adjointness residuals;
//! - [`verify`]: the verification suites behind the `suq2 verify` command.

pub mod error;
pub mod qcore;
pub mod qinner;
pub mod qops;
pub mod qspecial;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use qcore::{HalfInt, QParam, Regime, Triple};
