//! The quantale itself as a space, and its finite full subspaces.

use super::modular::{ModularSpace, Structure};
use super::powerset::{members, powerset, DEFAULT_POWERSET_CAP};
use super::space::{PSpace, USpace};
use super::Monad;
use crate::enriched::{CanonicalTarget, HomTarget, VCat, Variance};
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{FiniteSet, VRel};

/// `V` with hom `V_⊸` (`Lhom`) or `V_⟜` (`Rhom`) and the convergence
/// `ν(ιy, x) = V(y, x)` it induces.
///
/// For `[0,∞]` with `Lhom` the point-set distance is `x ⊖ max S`, with
/// `Rhom` it is `min S ⊖ x`; the empty set is at distance `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalSpace {
    pub quantale: Quantale,
    pub variance: Variance,
}

impl CanonicalSpace {
    pub fn new(quantale: Quantale, variance: Variance) -> Self {
        CanonicalSpace { quantale, variance }
    }

    pub fn target(&self) -> CanonicalTarget {
        CanonicalTarget::new(self.quantale, self.variance)
    }

    /// `ν(ιy, x)`.
    pub fn convergence(&self, y: &QValue, x: &QValue) -> Result<QValue> {
        self.quantale.check(y)?;
        self.quantale.check(x)?;
        Ok(self.target().hom(y, x))
    }

    /// `δ(S, x) = ⋁_{y∈S} ν(ιy, x)` for a finite `S`.
    pub fn point_set(&self, s: &[QValue], x: &QValue) -> Result<QValue> {
        let vs = s.iter().map(|y| self.convergence(y, x)).collect::<Result<Vec<_>>>()?;
        Ok(self.quantale.join_all_raw(&vs))
    }

    /// The point representing `ν(ιy, ·)`: `y` itself.
    pub fn generic_point(&self, y: &QValue) -> QValue {
        y.clone()
    }

    fn carrier(&self, values: &[QValue]) -> Result<(FiniteSet, Vec<QValue>)> {
        let mut vs: Vec<QValue> = Vec::new();
        for v in values {
            self.quantale.check(v)?;
            if !vs.contains(v) {
                vs.push(v.clone());
            }
        }
        let set = FiniteSet::new("V", vs.iter().map(|v| v.to_string()))?;
        Ok((set, vs))
    }

    fn hom_on(&self, set: &FiniteSet, vs: &[QValue]) -> VCat {
        let t = self.target();
        let hom = VRel::from_fn_raw(self.quantale, set, set, |a, b| t.hom(&vs[a], &vs[b]));
        VCat::new(hom).expect("square")
    }

    /// Full subspace on finitely many values with the restricted structure.
    /// The values are returned in carrier order.
    pub fn subspace(&self, values: &[QValue], monad: Monad) -> Result<(ModularSpace, Vec<QValue>)> {
        let (set, vs) = self.carrier(values)?;
        let cat = self.hom_on(&set, &vs);
        let q = self.quantale;
        let structure = match monad {
            Monad::U => Structure::Convergence(USpace::new(cat.hom().clone())?),
            Monad::P => Structure::Closure(PSpace::from_fn(q, &set, DEFAULT_POWERSET_CAP, |s, x| {
                q.join_all_raw(members(s).map(|y| cat.get(y, x)))
            })?),
        };
        Ok((ModularSpace::new(cat, structure)?, vs))
    }

    /// Full subspace carrying the algebra structure `δ(S,x) = V(aS, x)`,
    /// where `a` is the meet (`Lhom`) or join (`Rhom`). The values must be
    /// closed under `a`.
    pub fn algebra_subspace(&self, values: &[QValue], monad: Monad) -> Result<(ModularSpace, Vec<QValue>)> {
        let (set, vs) = self.carrier(values)?;
        let cat = self.hom_on(&set, &vs);
        let q = self.quantale;
        let structure = match monad {
            Monad::U => Structure::Convergence(USpace::new(cat.hom().clone())?),
            Monad::P => {
                let pa = powerset(&set, DEFAULT_POWERSET_CAP)?;
                let mut alg = Vec::with_capacity(pa.len());
                for s in 0..pa.len() {
                    let picked = members(s).map(|i| &vs[i]);
                    let v = match self.variance {
                        Variance::Lhom => q.meet_all_raw(picked),
                        Variance::Rhom => q.join_all_raw(picked),
                    };
                    let idx = vs
                        .iter()
                        .position(|w| *w == v)
                        .ok_or_else(|| Error::NotLawful(format!("value set is not closed: missing {v}")))?;
                    alg.push(idx);
                }
                Structure::Closure(PSpace::from_fn(q, &set, DEFAULT_POWERSET_CAP, |s, x| cat.get(alg[s], x).clone())?)
            }
        };
        Ok((ModularSpace::new(cat, structure)?, vs))
    }
}

