//! Exact computation in free exponential polynomial rings `K[x]^E`.
//!
//! * [`epoly`]: canonical forms, arithmetic and the expression grammar.
//! * [`laurent`]: exponent lattices, the Laurent encoding of a finite
//!   stage, and Gröbner-based ideal membership.
//! * [`eideal`]: E-ideal presentations, bounded saturation and replayable
//!   membership certificates.
//! * [`radical`]: Horn-clause closure, the prime-split radical operator and
//!   its certificates, refutation of E-radicality, and checkable primality
//!   conditions.
//! * [`experiments`]: scripted reproductions with structured reports.
//! * [`selftest`]: seeded property suites and independent oracles.

pub mod base;
pub mod eideal;
pub mod epoly;
pub mod error;
pub mod experiments;
pub mod laurent;
pub mod radical;
pub mod selftest;

pub use base::{BaseCoeff, Rational};
pub use epoly::{format_epoly, parse_epoly, parse_list, EPoly, GMonomial, Vars};
pub use error::{Error, Result};

pub const ENGINE_VERSION: &str = concat!("expoly ", env!("CARGO_PKG_VERSION"));
