pub mod cli;
pub mod continuity;
pub mod enriched;
pub mod error;
pub mod harness;
pub mod quantale;
pub mod relation;
pub mod topology;

pub use error::{Error, Result};
pub use quantale::{Ext, QValue, Quantale, Rational, StepFunction, TNorm};
pub use relation::{CellBoundary, FiniteSet, GraphKind, SetMap, Side, VRel};
pub use enriched::{CanonicalTarget, Direction, HomTarget, VCat, VProf, Variance};
