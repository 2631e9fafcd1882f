//! Structures compatible with a `V`-category on the same carrier.

use super::powerset::DEFAULT_POWERSET_CAP;
use super::space::{PSpace, USpace};
use super::Monad;
use crate::enriched::VCat;
use crate::error::{Error, Result};
use crate::quantale::Quantale;
use crate::relation::{FiniteSet, SetMap, VRel};

/// A structure `TA ⇸ A` for one of the two monads.
#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    Closure(PSpace),
    Convergence(USpace),
}

impl Structure {
    pub fn monad(&self) -> Monad {
        match self {
            Structure::Closure(_) => Monad::P,
            Structure::Convergence(_) => Monad::U,
        }
    }

    pub fn rel(&self) -> &VRel {
        match self {
            Structure::Closure(p) => p.rel(),
            Structure::Convergence(u) => u.rel(),
        }
    }

    pub fn carrier(&self) -> &FiniteSet {
        match self {
            Structure::Closure(p) => p.carrier(),
            Structure::Convergence(u) => u.carrier(),
        }
    }

    pub fn quantale(&self) -> Quantale {
        self.rel().quantale()
    }

    pub fn is_reflexive(&self) -> bool {
        match self {
            Structure::Closure(p) => p.flags().reflexive,
            Structure::Convergence(u) => u.flags().reflexive,
        }
    }

    pub fn is_category(&self) -> bool {
        match self {
            Structure::Closure(p) => p.flags().is_category(),
            Structure::Convergence(u) => u.flags().is_category(),
        }
    }

    /// `α(ι x, y)`: the structure seen on points.
    pub fn on_points(&self) -> Result<VRel> {
        let set = self.carrier();
        let iota = self.monad().unit(set, DEFAULT_POWERSET_CAP)?;
        self.rel().restrict(&iota, &SetMap::identity(set))
    }
}

/// Outcome of the modularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularityReport {
    /// `TĀ∘α∘Ā ≤ α`.
    pub modular: bool,
    /// `(t, t', x, y)` with `TĀ(t,t') ⊗ α(t',x) ⊗ A(x,y) ≰ α(t,y)`.
    pub witness: Option<(usize, usize, usize, usize)>,
    /// `A(x,y) ≤ α(ιx, y)`.
    pub unit_below: bool,
}

pub fn modularity_check(cat: &VCat, s: &Structure) -> Result<ModularityReport> {
    if cat.carrier() != s.carrier() {
        return Err(Error::Shape("category and structure live on different carriers".into()));
    }
    let q = cat.quantale();
    let alpha = s.rel();
    let ta = s.monad().extend(cat.hom(), DEFAULT_POWERSET_CAP)?;
    let lhs = ta.compose(alpha)?.compose(cat.hom())?;
    let witness = match lhs.le_witness(alpha)? {
        None => None,
        Some((t, y)) => {
            let n = cat.carrier().len();
            let mut found = None;
            'w: for t2 in 0..ta.target().len() {
                for x in 0..n {
                    let v = q.tensor_raw(&q.tensor_raw(ta.get(t, t2), alpha.get(t2, x)), cat.get(x, y));
                    if !q.le_raw(&v, alpha.get(t, y)) {
                        found = Some((t, t2, x, y));
                        break 'w;
                    }
                }
            }
            Some(found.ok_or_else(|| Error::SelfCheck("modularity failure without a single witness".into()))?)
        }
    };
    let unit_below = cat.hom().le(&s.on_points()?)?;
    if s.is_category() && witness.is_none() != unit_below {
        return Err(Error::SelfCheck("modularity and its pointwise form disagree on a category".into()));
    }
    Ok(ModularityReport { modular: witness.is_none(), witness, unit_below })
}

/// A `V`-category with a compatible reflexive structure.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularSpace {
    cat: VCat,
    structure: Structure,
}

impl ModularSpace {
    /// Validates reflexivity and modularity.
    pub fn new(cat: VCat, structure: Structure) -> Result<Self> {
        if !cat.check().holds() {
            return Err(Error::NotLawful("hom is not a V-category".into()));
        }
        if !structure.is_reflexive() {
            return Err(Error::NotLawful("structure is not reflexive".into()));
        }
        let r = modularity_check(&cat, &structure)?;
        if let Some(w) = r.witness {
            return Err(Error::NotLawful(format!("structure is not modular at {w:?}")));
        }
        Ok(ModularSpace { cat, structure })
    }

    pub fn cat(&self) -> &VCat {
        &self.cat
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn monad(&self) -> Monad {
        self.structure.monad()
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.cat.carrier()
    }

    pub fn quantale(&self) -> Quantale {
        self.cat.quantale()
    }

    /// The structure relation `TA ⇸ A`.
    pub fn rel(&self) -> &VRel {
        self.structure.rel()
    }
}

/// The modular space whose hom is read off the structure at points:
/// `A(x,y) = α(ιx, y)`.
pub fn normalise(s: &Structure) -> Result<ModularSpace> {
    if !s.is_category() {
        return Err(Error::NotLawful("only categories can be normalised".into()));
    }
    let hom = s.on_points()?;
    let cat = VCat::lawful(hom).map_err(|e| Error::SelfCheck(format!("normalised hom: {e}")))?;
    ModularSpace::new(cat, s.clone()).map_err(|e| Error::SelfCheck(format!("normalised space: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocompleteReport {
    pub cocomplete: bool,
    /// For each `t ∈ TA`, a point `x0` with `α(t,·) = A(x0,·)`.
    pub algebra: Vec<Option<usize>>,
    /// First `t` without such a point.
    pub witness: Option<usize>,
}

/// Whether every `α(t,·)` is representable as `A(x0,·)`. When it is, the
/// chosen map `TA → A` is checked to be a homomorphism.
pub fn cocomplete_check(m: &ModularSpace) -> Result<CocompleteReport> {
    let alpha = m.rel();
    let n = m.carrier().len();
    let algebra: Vec<Option<usize>> =
        (0..alpha.source().len()).map(|t| (0..n).find(|&x| alpha.row(t) == m.cat.hom().row(x))).collect();
    let witness = algebra.iter().position(Option::is_none);
    if witness.is_none() {
        let a = SetMap::new(alpha.source().clone(), m.carrier().clone(), algebra.iter().map(|x| x.unwrap()).collect())?;
        let ta = m.monad().extend(m.cat.hom(), DEFAULT_POWERSET_CAP)?;
        if !ta.le(&m.cat.hom().restrict(&a, &a)?)? {
            return Err(Error::SelfCheck("representing map is not a homomorphism".into()));
        }
    }
    Ok(CocompleteReport { cocomplete: witness.is_none(), algebra, witness })
}
