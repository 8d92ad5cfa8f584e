//! Finite quadratic modules (discriminant forms), Jordan and genus symbols,
//! the strata of `D` used by the obstruction theory, and genus enumeration.

pub mod genus;
pub mod module;
pub mod strata;
pub mod symbol;

pub use module::{Block, Elem, Fqm, FqmError};
pub use symbol::{parse_genus, parse_local, GenusSymbol, JordanComponent};
