//! Exact computations with ramification invariants of ℓ-adic sheaves:
//! slope decompositions and conductors, conductor divisors, the Betti
//! bound polynomials `b_n` and their certificates, Euler characteristic
//! formulas on curves, and the coherent-sheaf bounding ledger.
//!
//! Everything is generic over [`exactmath::Scalar`]; the aliases below fix
//! the scalar to exact rationals.

pub mod bettibounds;
pub mod conductor;
pub mod curves;
mod error;
pub mod exactmath;
pub mod geometry;
mod json;
pub mod oracles;
pub mod verify;

use num_rational::BigRational;

pub use error::{Error, Result};

pub type Rat = BigRational;
pub type Poly = exactmath::Polynomial<Rat>;
pub type SlopeDecomposition = conductor::Slopes<Rat>;
pub type GaloisModuleData = conductor::GaloisModule<Rat>;
pub type QWeilDivisor = geometry::WeilDivisor<Rat>;
pub type CoherentToken = geometry::Token<Rat>;
pub type CoherentCombo = geometry::Combo<Rat>;
pub type BoundFamily = bettibounds::Family<Rat>;
pub type CurveSheafData = curves::CurveData<Rat>;
