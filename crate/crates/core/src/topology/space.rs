//! Closure-style structures `δ : PA ⇸ A` and convergence structures
//! `α : UA ⇸ A` on finite carriers.
//!
//! Every ultrafilter on a finite set is principal, so `UA` is identified with
//! `A` and a convergence structure is stored as an endorelation.

use std::sync::OnceLock;

use super::powerset::{check_cap, contains, eps_rel, members, powerset};
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{FiniteSet, Side, VRel};

/// Axioms of a closure-style structure, with the first failure of each.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PAxioms {
    /// `x` with `k ≰ δ({x},x)`.
    pub reflexive: Option<usize>,
    /// `(S, T, x)` with `S ⊆ T` and `δ(S,x) ≰ δ(T,x)`.
    pub extensional: Option<(usize, usize, usize)>,
    /// `(S, S^(v), x)` with `v ⊗ δ(S^(v),x) ≰ δ(S,x)`.
    pub transitive: Option<(usize, usize, usize)>,
    /// `(S, x)` with `δ(S,x) ≠ ⋁_{s∈S} δ({s},x)`.
    pub finite_joins: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PFlags {
    pub reflexive: bool,
    pub extensional: bool,
    pub transitive: bool,
    pub finite_join_preserving: bool,
}

impl PFlags {
    /// Reflexive, extensional and transitive.
    pub fn is_category(&self) -> bool {
        self.reflexive && self.extensional && self.transitive
    }

    pub fn is_pretopological(&self) -> bool {
        self.reflexive && self.finite_join_preserving
    }

    pub fn is_topological(&self) -> bool {
        self.is_category() && self.finite_join_preserving
    }
}

impl PAxioms {
    pub fn flags(&self) -> PFlags {
        PFlags {
            reflexive: self.reflexive.is_none(),
            extensional: self.extensional.is_none(),
            transitive: self.transitive.is_none(),
            finite_join_preserving: self.finite_joins.is_none(),
        }
    }
}

/// A `V`-valued closure-style structure `δ : PA ⇸ A`.
#[derive(Debug)]
pub struct PSpace {
    carrier: FiniteSet,
    delta: VRel,
    flags: OnceLock<PAxioms>,
}

impl Clone for PSpace {
    fn clone(&self) -> Self {
        PSpace { carrier: self.carrier.clone(), delta: self.delta.clone(), flags: self.flags.clone() }
    }
}

impl PartialEq for PSpace {
    fn eq(&self, other: &Self) -> bool {
        self.delta == other.delta
    }
}

impl PSpace {
    /// `delta` must be a relation `PA ⇸ A` over the given carrier.
    pub fn new(carrier: &FiniteSet, delta: VRel) -> Result<Self> {
        check_cap(carrier.len(), 31)?;
        if delta.target() != carrier || delta.source().len() != 1usize << carrier.len() {
            return Err(Error::Shape(format!("a closure structure on {} must be a relation P{0} ⇸ {0}", carrier.name())));
        }
        Ok(PSpace { carrier: carrier.clone(), delta, flags: OnceLock::new() })
    }

    pub fn from_fn(q: Quantale, carrier: &FiniteSet, cap: usize, f: impl Fn(usize, usize) -> QValue) -> Result<Self> {
        let pa = powerset(carrier, cap)?;
        Self::new(carrier, VRel::from_fn(q, &pa, carrier, f)?)
    }

    /// `δ(S,x) = k` iff `x ∈ S`.
    pub fn discrete(q: Quantale, carrier: &FiniteSet, cap: usize) -> Result<Self> {
        Self::new(carrier, eps_rel(carrier, q, cap)?)
    }

    /// Boolean closure from a closure operator given on subsets.
    pub fn from_closure(carrier: &FiniteSet, cap: usize, cl: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_fn(Quantale::Bool2, carrier, cap, |s, x| QValue::Bool(contains(cl(s), x)))
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn quantale(&self) -> Quantale {
        self.delta.quantale()
    }

    pub fn rel(&self) -> &VRel {
        &self.delta
    }

    pub fn get(&self, s: usize, x: usize) -> &QValue {
        self.delta.get(s, x)
    }

    /// For Boolean structures, the closure of `S` as a bitmask.
    pub fn closure_of(&self, s: usize) -> usize {
        (0..self.carrier.len()).filter(|&x| *self.get(s, x) == QValue::Bool(true)).fold(0, |m, x| m | 1 << x)
    }

    pub fn axioms(&self) -> &PAxioms {
        self.flags.get_or_init(|| self.compute_axioms())
    }

    pub fn flags(&self) -> PFlags {
        self.axioms().flags()
    }

    fn compute_axioms(&self) -> PAxioms {
        let q = self.quantale();
        let n = self.carrier.len();
        let full = 1usize << n;
        let k = q.unit();
        let reflexive = (0..n).find(|&x| !q.le_raw(&k, self.get(1 << x, x)));
        let mut extensional = None;
        'e: for s in 0..full {
            for t in (0..n).filter(|t| !contains(s, *t)) {
                for x in 0..n {
                    if !q.le_raw(self.get(s, x), self.get(s | 1 << t, x)) {
                        extensional = Some((s, s | 1 << t, x));
                        break 'e;
                    }
                }
            }
        }
        let mut transitive = None;
        't: for s in 0..full {
            let row = self.delta.row(s);
            for v in transitivity_probes(q, row) {
                let sv = (0..n).filter(|&y| q.le_raw(&v, &row[y])).fold(0usize, |m, y| m | 1 << y);
                for (x, here) in row.iter().enumerate() {
                    if !q.le_raw(&q.tensor_raw(&v, self.get(sv, x)), here) {
                        transitive = Some((s, sv, x));
                        break 't;
                    }
                }
            }
        }
        let mut finite_joins = None;
        'j: for s in 0..full {
            for x in 0..n {
                let sup = q.join_all_raw(members(s).map(|m| self.get(1 << m, x)));
                if sup != *self.get(s, x) {
                    finite_joins = Some((s, x));
                    break 'j;
                }
            }
        }
        PAxioms { reflexive, extensional, transitive, finite_joins }
    }
}

/// Values `v` at which the transitivity axiom has to be tested for one row
/// `δ(S,·)`. On chains the row's values and `⊤` suffice; otherwise the meets
/// of all subfamilies of the row do.
fn transitivity_probes(q: Quantale, row: &[QValue]) -> Vec<QValue> {
    let mut out: Vec<QValue> = Vec::new();
    let mut push = |v: QValue| {
        if !out.contains(&v) {
            out.push(v)
        }
    };
    if q.is_chain() {
        row.iter().cloned().for_each(&mut push);
        push(q.top());
    } else {
        for w in 0..1usize << row.len() {
            push(q.meet_all_raw(members(w).map(|i| &row[i])));
        }
    }
    out
}

/// Axioms of a convergence structure on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UAxioms {
    /// `x` with `k ≰ α(x,x)`.
    pub reflexive: Option<usize>,
    /// Pair where one of the unitarity cells fails.
    pub unitary: Option<(usize, usize)>,
    /// Pair where `α∘α ≤ α` fails.
    pub transitive: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct UFlags {
    pub reflexive: bool,
    pub unitary: bool,
    pub transitive: bool,
}

impl UFlags {
    pub fn is_category(&self) -> bool {
        self.reflexive && self.unitary && self.transitive
    }
}

/// A `V`-valued convergence structure, stored as `α(x,y) = α(ιx,y)`.
#[derive(Debug)]
pub struct USpace {
    alpha: VRel,
    flags: OnceLock<UAxioms>,
}

impl Clone for USpace {
    fn clone(&self) -> Self {
        USpace { alpha: self.alpha.clone(), flags: self.flags.clone() }
    }
}

impl PartialEq for USpace {
    fn eq(&self, other: &Self) -> bool {
        self.alpha == other.alpha
    }
}

impl USpace {
    pub fn new(alpha: VRel) -> Result<Self> {
        if !alpha.is_square() {
            return Err(Error::Shape("a convergence structure must be an endorelation".into()));
        }
        Ok(USpace { alpha, flags: OnceLock::new() })
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.alpha.source()
    }

    pub fn quantale(&self) -> Quantale {
        self.alpha.quantale()
    }

    pub fn rel(&self) -> &VRel {
        &self.alpha
    }

    pub fn get(&self, x: usize, y: usize) -> &QValue {
        self.alpha.get(x, y)
    }

    pub fn axioms(&self) -> &UAxioms {
        self.flags.get_or_init(|| {
            let q = self.quantale();
            let set = self.carrier();
            let id = VRel::identity(q, set);
            let k = q.unit();
            let reflexive = (0..set.len()).find(|&x| !q.le_raw(&k, self.get(x, x)));
            // With U the identity on finite carriers the unitarity cells read
            // `1∘α ≤ α` and `α ≤ α`.
            let unitary = id.compose(&self.alpha).and_then(|a| a.le_witness(&self.alpha)).ok().flatten();
            let transitive = self.alpha.compose(&self.alpha).and_then(|a| a.le_witness(&self.alpha)).ok().flatten();
            UAxioms { reflexive, unitary, transitive }
        })
    }

    pub fn flags(&self) -> UFlags {
        let a = self.axioms();
        UFlags { reflexive: a.reflexive.is_none(), unitary: a.unitary.is_none(), transitive: a.transitive.is_none() }
    }
}

/// `δ = ε∘α`, so `δ(S,x) = ⋁_{s∈S} α(s,x)`.
pub fn to_closure(u: &USpace, cap: usize) -> Result<PSpace> {
    let eps = eps_rel(u.carrier(), u.quantale(), cap)?;
    PSpace::new(u.carrier(), eps.compose(u.rel())?)
}

/// `α = ε ⊸ δ`, so `α(x,y) = ⋀_{S∋x} δ(S,y)`.
pub fn to_convergence(p: &PSpace, cap: usize) -> Result<USpace> {
    let q = p.quantale();
    let eps = eps_rel(p.carrier(), q, cap)?;
    let alpha = eps.residuate(Side::Left, p.rel())?;
    let n = p.carrier().len();
    let direct = VRel::from_fn_raw(q, p.carrier(), p.carrier(), |x, y| {
        q.meet_all_raw((0..1usize << n).filter(|s| contains(*s, x)).map(|s| p.get(s, y)))
    });
    if direct != alpha {
        return Err(Error::SelfCheck("residual and direct convergence disagree".into()));
    }
    USpace::new(alpha)
}
