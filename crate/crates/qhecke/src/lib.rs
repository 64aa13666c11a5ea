//! Exact q-series engine.
//!
//! Truncated Laurent-series arithmetic over the rationals, with builders for
//! the classical objects of q-series work and a data-driven catalog of
//! identities that can be verified coefficient-by-coefficient to any order:
//!
//! - [`series`]: exact Laurent arithmetic, monomials, base substitutions
//! - [`theta`]: Jacobi triple products `j(x;q)` and the `J`/`J-bar` shorthands
//! - [`appell`]: the Appell-Lerch sum `m(x,q,z)`
//! - [`hecke`]: Hecke-Rogers double sums `f_{a,b,c}`/`g_{a,b,c}`, their
//!   flip/shift transformation laws, and false theta building blocks
//! - [`eulerian`]: q-hypergeometric series (phi, sigma, V0, Delta, and the
//!   Andrews-Warnaar left-hand sides)
//! - [`dsl`]: a small expression language so identities are data, not code
//! - [`catalog`]: the identity registry and the verification driver

pub mod appell;
pub mod catalog;
pub mod dsl;
pub mod eulerian;
pub mod hecke;
pub mod series;
pub(crate) mod support;
pub mod theta;

pub use series::{LaurentSeries, Monomial, Rational, SeriesError, SignedPower};
