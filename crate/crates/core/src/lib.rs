//! Exact engine for birational, rational and topological zeta functions of
//! singularity data given as weighted dual complexes.

pub mod coeffring;
pub mod complex;
pub mod error;
pub mod generators;
pub mod planecurve;
pub mod ratfunc;
pub mod truncation;

pub use coeffring::{BirElement, ClassLabel, FracExp, Specialization, Symbol};
pub use error::{Error, Result};
pub use complex::{StratumComponent, VertexData, VertexId, VertexKind, WeightedDualComplex};
pub use ratfunc::{DenFactor, NormalForm, Pole, TopZeta, ZetaExpr, ZetaTerm};
pub use truncation::DltValuation;
