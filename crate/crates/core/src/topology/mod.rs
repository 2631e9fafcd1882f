//! Monadic topology over finite carriers: the powerset and ultrafilter
//! monads, their lax extensions, and structures `TA ⇸ A`.

mod canonical;
mod modular;
pub mod powerset;
mod scott;
mod space;

pub use canonical::CanonicalSpace;
pub use modular::{cocomplete_check, modularity_check, normalise, CocompleteReport, ModularSpace, ModularityReport, Structure};
pub use powerset::{eps_rel, powerset, powerset_extend, powerset_map, ultra_extend, DEFAULT_POWERSET_CAP};
pub use scott::{minimax_check, scott_structure, ScottTopology};
pub use space::{to_closure, to_convergence, PAxioms, PFlags, PSpace, UAxioms, UFlags, USpace};

use crate::error::Result;
use crate::quantale::Quantale;
use crate::relation::{FiniteSet, SetMap, VRel};

/// The two monads, each extended to relations.
///
/// `P` uses the extension `(PJ)(S,T) = ⋀_{t∈T} ⋁_{s∈S} J(s,t)`. On finite
/// carriers `U` is the identity: `UA = A`, `UJ = J`, unit and multiplication
/// are identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monad {
    P,
    U,
}

impl Monad {
    pub fn carrier(&self, set: &FiniteSet, cap: usize) -> Result<FiniteSet> {
        match self {
            Monad::P => powerset(set, cap),
            Monad::U => Ok(set.clone()),
        }
    }

    pub fn extend(&self, j: &VRel, cap: usize) -> Result<VRel> {
        match self {
            Monad::P => powerset_extend(j, cap),
            Monad::U => Ok(j.clone()),
        }
    }

    /// Like [`Monad::extend`] but evaluates the ultrafilter formula instead
    /// of using the identification.
    pub fn extend_checked(&self, j: &VRel, cap: usize) -> Result<VRel> {
        match self {
            Monad::P => powerset_extend(j, cap),
            Monad::U => ultra_extend(j, cap),
        }
    }

    pub fn map(&self, f: &SetMap, cap: usize) -> Result<SetMap> {
        match self {
            Monad::P => powerset_map(f, cap),
            Monad::U => Ok(f.clone()),
        }
    }

    /// The unit `A → TA`.
    pub fn unit(&self, set: &FiniteSet, cap: usize) -> Result<SetMap> {
        match self {
            Monad::P => powerset::singleton_map(set, cap),
            Monad::U => Ok(SetMap::identity(set)),
        }
    }

    /// `ε_A : TA ⇸ A` restricted to how the monad sees points.
    pub fn eps(&self, set: &FiniteSet, q: Quantale, cap: usize) -> Result<VRel> {
        match self {
            Monad::P => eps_rel(set, q, cap),
            Monad::U => Ok(VRel::identity(q, set)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Monad::P => "P",
            Monad::U => "U",
        }
    }
}

impl std::fmt::Display for Monad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Monad {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "P" | "p" | "powerset" => Ok(Monad::P),
            "U" | "u" | "ultrafilter" => Ok(Monad::U),
            other => Err(crate::Error::Unsupported(format!("unknown monad `{other}`"))),
        }
    }
}
