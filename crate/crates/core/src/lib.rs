//! Kazhdan-Lusztig cells, Lusztig's asymptotic ring and the identification
//! of cell 2-representations for finite Coxeter groups.

pub mod acceptance;
pub mod action;
pub mod asymptotic;
pub mod budget;
pub mod cache;
pub mod cells;
pub mod classify;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;

pub use asymptotic::{FusionGraph, FusionRing};
pub use budget::Budget;
pub use cells::{Block, CellAnalysis, CellDecomposition, CellHTable, CellMatrix, Check, GammaTensor, HBlock, Report, TwoSidedCell};
pub use coxeter::{BruhatTable, CoxeterSystem, CoxeterType, ElemId, Element, Family, GenSet};
pub use error::{Error, Result};
pub use hecke::{h_constants, HTable, KlBasisElement, KlTable, WGraph};
pub use laurent::{Coeff, Laurent};

/// Laurent polynomial with checked `i64` coefficients.
pub type LaurentPoly = Laurent<i64>;
/// Laurent polynomial with arbitrary-precision coefficients.
pub type BigLaurentPoly = Laurent<num_bigint::BigInt>;
