//! Exact arithmetic for discriminant forms, the Weil representation and
//! reflective automorphic products of singular weight.
//!
//! The crate is organised around a small tower of exact scalar types
//! ([`exact`]), finite quadratic modules with their genus symbols ([`fqm`]),
//! the Weil representation over those scalars ([`weil`]), even lattices and
//! their short-vector machinery ([`lattice`]), the combinatorics of
//! `Gamma_0(N)` together with an eta/Eisenstein expansion engine
//! ([`modcurve`]), Eisenstein obstruction theory ([`obstruct`]), the
//! construction of the eleven singular-weight forms ([`construct`]) and the
//! classification of one-dimensional type-0 cusps ([`cusp`]).
//!
//! Every computation is exact: scalars are cyclotomic numbers times square
//! roots of rationals, series are truncated Puiseux series over those
//! scalars, and all reported tables are produced without floating point.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and `reflective::cli::run` for the thin command line front end.

pub mod catalog;
pub mod cli;
pub mod construct;
pub mod cusp;
pub mod exact;
pub mod fqm;
pub mod lattice;
pub mod modcurve;
pub mod obstruct;
pub mod verify;
pub mod weil;
