//! Openness, closedness and compactness of relations and maps between
//! structured carriers.

use crate::enriched::VCat;
use crate::error::{Error, Result};
use crate::quantale::{Ext, QValue, Quantale};
use crate::relation::{FiniteSet, SetMap, VRel};
use crate::topology::powerset::{members, DEFAULT_POWERSET_CAP};
use crate::topology::{to_closure, Monad, ModularSpace, PSpace, Structure, USpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenClosedReport {
    pub holds: bool,
    /// `(t, y)` with `t ∈ TA` where the inequality fails.
    pub witness: Option<(usize, usize)>,
    /// Verdict of the pointwise form for discrete relations between
    /// closure structures, when it applies.
    pub discrete_form: Option<bool>,
}

fn same_monad(a: &Structure, b: &Structure) -> Result<Monad> {
    if a.monad() != b.monad() {
        return Err(Error::Unsupported("structures for different monads".into()));
    }
    Ok(a.monad())
}

/// Open: `α∘J ≤ TJ∘β`. Closed: `TJ∘β ≤ α∘J`.
pub fn open_closed_check(kind: Kind, j: &VRel, alpha: &Structure, beta: &Structure) -> Result<OpenClosedReport> {
    let t = same_monad(alpha, beta)?;
    if j.source() != alpha.carrier() || j.target() != beta.carrier() {
        return Err(Error::Shape("relation does not connect the structured carriers".into()));
    }
    let direct = alpha.rel().compose(j)?;
    let lifted = t.extend(j, DEFAULT_POWERSET_CAP)?.compose(beta.rel())?;
    let witness = match kind {
        Kind::Open => direct.le_witness(&lifted)?,
        Kind::Closed => lifted.le_witness(&direct)?,
    };
    let q = j.quantale();
    let discrete_form = match (alpha, beta) {
        (Structure::Closure(a), Structure::Closure(b))
            if j.is_discrete() && q.is_integral() && b.flags().reflexive && b.flags().extensional =>
        {
            let v = discrete_form(kind, j, a, b);
            if v != witness.is_none() {
                return Err(Error::SelfCheck("pointwise open/closed form disagrees".into()));
            }
            Some(v)
        }
        _ => None,
    };
    Ok(OpenClosedReport { holds: witness.is_none(), witness, discrete_form })
}

/// `J_k S` as a bitmask.
fn image_k(j: &VRel, s: usize) -> usize {
    let k = j.quantale().unit();
    (0..j.target().len())
        .filter(|&y| members(s).any(|x| j.quantale().le_raw(&k, j.get(x, y))))
        .fold(0, |m, y| m | 1 << y)
}

/// Open: `δ(S,x) ⊗ J(x,y) ≤ ζ(J_k S, y)`. Closed: `ζ(J_k S, y) ≤ ⋁_{z∈J_k⁻y} δ(S,z)`.
fn discrete_form(kind: Kind, j: &VRel, a: &PSpace, b: &PSpace) -> bool {
    let q = j.quantale();
    let k = q.unit();
    let (n, m) = (j.source().len(), j.target().len());
    (0..1usize << n).all(|s| {
        let js = image_k(j, s);
        (0..m).all(|y| match kind {
            Kind::Open => (0..n).all(|x| q.le_raw(&q.tensor_raw(a.get(s, x), j.get(x, y)), b.get(js, y))),
            Kind::Closed => {
                let fiber = (0..n).filter(|&z| q.le_raw(&k, j.get(z, y))).map(|z| a.get(s, z));
                q.le_raw(b.get(js, y), &q.join_all_raw(fiber))
            }
        })
    })
}

/// `UJ(id, ι) ≤ α∘J`, read on points as `J ≤ α∘J`.
pub fn u_compact_check(j: &VRel, alpha: &USpace) -> Result<Option<(usize, usize)>> {
    let w = j.le_witness(&alpha.rel().compose(j)?)?;
    // The fibre reading needs a genuine space: without reflexivity a point
    // need not converge to itself.
    if alpha.quantale() == Quantale::Bool2 && j.is_discrete() && alpha.flags().reflexive {
        let p = to_closure(alpha, DEFAULT_POWERSET_CAP)?;
        let fibers_compact = (0..j.target().len()).all(|y| {
            let fiber = (0..j.source().len()).filter(|&x| *j.get(x, y) == QValue::Bool(true)).fold(0, |m, x| m | 1 << x);
            is_compact(&p, fiber).unwrap_or(false)
        });
        if fibers_compact != w.is_none() {
            return Err(Error::SelfCheck("compactness of fibers disagrees with the relational form".into()));
        }
    }
    Ok(w)
}

/// Closed sets of a Boolean closure structure.
pub fn closed_sets(p: &PSpace) -> Vec<usize> {
    (0..1usize << p.carrier().len()).filter(|&s| p.closure_of(s) == s).collect()
}

/// Open sets: complements of closed sets.
pub fn open_sets(p: &PSpace) -> Vec<usize> {
    let full = (1usize << p.carrier().len()) - 1;
    let mut v: Vec<usize> = closed_sets(p).into_iter().map(|c| full & !c).collect();
    v.sort();
    v
}

/// Compactness of `s` in a Boolean closure structure: every family of closed
/// sets whose finite subfamilies all meet `s` has an intersection meeting `s`.
/// Such a family generates a filter in the lattice of traces `C ∩ s`, with the
/// same intersection. Filters of a finite lattice are principal, so the
/// principal ones are checked.
pub fn is_compact(p: &PSpace, s: usize) -> Result<bool> {
    if p.quantale() != Quantale::Bool2 {
        return Err(Error::Unsupported("compactness is defined here for Boolean closure".into()));
    }
    let mut traces: Vec<usize> = closed_sets(p).into_iter().map(|c| c & s).collect();
    traces.sort();
    traces.dedup();
    let by_filters = traces.iter().all(|&t| {
        let filter: Vec<usize> = traces.iter().copied().filter(|u| t & !u == 0).collect();
        let fip = filter.iter().all(|&u| u != 0);
        let meet = filter.iter().fold(s, |m, u| m & u);
        !fip || meet != 0
    });
    // Small trace lattices are also checked over every family.
    if traces.len() <= 16 {
        let fams = 1usize << traces.len();
        let mut inter = vec![s; fams];
        let mut fip = vec![s != 0; fams];
        for f in 1..fams {
            let low = f.trailing_zeros() as usize;
            inter[f] = inter[f & (f - 1)] & traces[low];
            fip[f] = inter[f] != 0 && members(f).all(|b| fip[f & !(1 << b)]);
        }
        let by_families = (0..fams).all(|f| !fip[f] || inter[f] != 0);
        if by_families != by_filters {
            return Err(Error::SelfCheck("compactness differs between families and filters".into()));
        }
    }
    Ok(by_filters)
}

/// Vertical open: `γ(id, f) ≤ (TC̄)(id, Tf) ∘ α`. Vertical closed:
/// `γ(Tf, id) ≤ α ∘ C̄(f, id)`.
pub fn vertical_check(kind: Kind, f: &SetMap, a: &ModularSpace, c: &ModularSpace) -> Result<Option<(usize, usize)>> {
    let t = same_monad(a.structure(), c.structure())?;
    if f.source() != a.carrier() || f.target() != c.carrier() {
        return Err(Error::Shape("map does not connect the spaces".into()));
    }
    let tf = t.map(f, DEFAULT_POWERSET_CAP)?;
    let (alpha, gamma) = (a.rel(), c.rel());
    match kind {
        Kind::Open => {
            let lhs = gamma.restrict(&SetMap::identity(gamma.source()), f)?;
            let conj = t.extend(c.cat().hom(), DEFAULT_POWERSET_CAP)?.restrict(&SetMap::identity(gamma.source()), &tf)?;
            lhs.le_witness(&conj.compose(alpha)?)
        }
        Kind::Closed => {
            let lhs = gamma.restrict(&tf, &SetMap::identity(c.carrier()))?;
            let comp = c.cat().hom().restrict(f, &SetMap::identity(c.carrier()))?;
            lhs.le_witness(&alpha.compose(&comp)?)
        }
    }
}

/// The three classical descriptions of openness for a Boolean relation
/// between closure spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalOpen {
    /// `δ∘J ≤ PJ∘ζ`.
    pub lifted: bool,
    /// `J(cl S) ⊆ cl(J S)` for all `S`.
    pub image_closure: bool,
    /// `J⁻O` is open for every open `O`.
    pub preimage_open: bool,
}

impl ClassicalOpen {
    pub fn agree(&self) -> bool {
        self.lifted == self.image_closure && self.image_closure == self.preimage_open
    }
}

fn image(j: &VRel, s: usize) -> usize {
    (0..j.target().len())
        .filter(|&y| members(s).any(|x| *j.get(x, y) == QValue::Bool(true)))
        .fold(0, |m, y| m | 1 << y)
}

fn preimage(j: &VRel, o: usize) -> usize {
    (0..j.source().len())
        .filter(|&x| members(o).any(|y| *j.get(x, y) == QValue::Bool(true)))
        .fold(0, |m, x| m | 1 << x)
}

pub fn classical_open_equiv(j: &VRel, a: &PSpace, b: &PSpace) -> Result<ClassicalOpen> {
    if j.quantale() != Quantale::Bool2 || !a.flags().is_category() || !b.flags().is_category() {
        return Err(Error::Unsupported("needs a Boolean relation between closure spaces".into()));
    }
    let lifted = open_closed_check(Kind::Open, j, &Structure::Closure(a.clone()), &Structure::Closure(b.clone()))?.holds;
    let image_closure =
        (0..1usize << a.carrier().len()).all(|s| image(j, a.closure_of(s)) & !b.closure_of(image(j, s)) == 0);
    let opens_a = open_sets(a);
    let preimage_open = open_sets(b).into_iter().all(|o| opens_a.contains(&preimage(j, o)));
    Ok(ClassicalOpen { lifted, image_closure, preimage_open })
}

/// Status of one implication between properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Implication {
    Held,
    Vacuous,
    Violated,
}

impl Implication {
    fn of(premise: bool, conclusion: bool) -> Self {
        match (premise, conclusion) {
            (false, _) => Implication::Vacuous,
            (true, true) => Implication::Held,
            (true, false) => Implication::Violated,
        }
    }
}

/// Properties of a relation between convergence spaces and of the same
/// relation between the induced closure spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuTransfer {
    pub u_open: bool,
    pub u_closed: bool,
    pub u_compact: bool,
    pub p_open: bool,
    pub p_closed: bool,
    /// U-open implies P-open.
    pub open_down: Implication,
    /// U-closed implies U-compact and P-closed.
    pub closed_down: Implication,
    /// P-open implies U-open (target unitary, relation U-strict).
    pub open_up: Implication,
    /// U-compact and P-closed imply U-closed (source a category).
    pub closed_up: Implication,
}

impl PuTransfer {
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (name, i) in [
            ("U-open implies P-open", self.open_down),
            ("U-closed implies U-compact and P-closed", self.closed_down),
            ("P-open implies U-open", self.open_up),
            ("U-compact and P-closed imply U-closed", self.closed_up),
        ] {
            if i == Implication::Violated {
                v.push(name);
            }
        }
        v
    }
}

pub fn pu_transfer_check(j: &VRel, a: &USpace, b: &USpace) -> Result<PuTransfer> {
    let (ua, ub) = (Structure::Convergence(a.clone()), Structure::Convergence(b.clone()));
    let pa = Structure::Closure(to_closure(a, DEFAULT_POWERSET_CAP)?);
    let pb = Structure::Closure(to_closure(b, DEFAULT_POWERSET_CAP)?);
    let u_open = open_closed_check(Kind::Open, j, &ua, &ub)?.holds;
    let u_closed = open_closed_check(Kind::Closed, j, &ua, &ub)?.holds;
    let u_compact = u_compact_check(j, a)?.is_none();
    let p_open = open_closed_check(Kind::Open, j, &pa, &pb)?.holds;
    let p_closed = open_closed_check(Kind::Closed, j, &pa, &pb)?.holds;
    // Every relation between finite carriers is U-strict.
    let strict = true;
    Ok(PuTransfer {
        u_open,
        u_closed,
        u_compact,
        p_open,
        p_closed,
        open_down: Implication::of(u_open, p_open),
        closed_down: Implication::of(u_closed, u_compact && p_closed),
        open_up: Implication::of(b.flags().unitary && strict && p_open, u_open),
        closed_up: Implication::of(a.flags().is_category() && strict && u_compact && p_closed, u_closed),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semicontinuity {
    Lower,
    Upper,
}

/// Lower: `{x : f x > v}` is open for all `v`. Upper: `{x : f x < v}` is open.
/// Only values of `f` and the infinities need to be tried.
pub fn semicontinuity_check(mode: Semicontinuity, f: &[Ext], space: &PSpace) -> Result<bool> {
    if f.len() != space.carrier().len() {
        return Err(Error::Shape("function and space differ in size".into()));
    }
    let opens = open_sets(space);
    let mut cuts: Vec<Ext> = f.to_vec();
    cuts.push(match mode {
        Semicontinuity::Lower => Ext::NegInf,
        Semicontinuity::Upper => Ext::PosInf,
    });
    Ok(cuts.iter().all(|v| {
        let set = (0..f.len())
            .filter(|&x| match mode {
                Semicontinuity::Lower => f[x] > *v,
                Semicontinuity::Upper => f[x] < *v,
            })
            .fold(0, |m, x| m | 1 << x);
        opens.contains(&set)
    }))
}

pub fn is_continuous(f: &[Ext], space: &PSpace) -> Result<bool> {
    Ok(semicontinuity_check(Semicontinuity::Lower, f, space)? && semicontinuity_check(Semicontinuity::Upper, f, space)?)
}

/// Boolean closure space from a family of closed sets; the family is closed
/// under intersections first.
pub fn closure_from_closed(carrier: &FiniteSet, closed: &[usize]) -> Result<PSpace> {
    let full = (1usize << carrier.len()) - 1;
    let mut fam: Vec<usize> = closed.to_vec();
    fam.push(full);
    loop {
        let mut grew = false;
        for i in 0..fam.len() {
            for j in 0..fam.len() {
                let c = fam[i] & fam[j];
                if !fam.contains(&c) {
                    fam.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    PSpace::from_closure(carrier, DEFAULT_POWERSET_CAP, |s| {
        fam.iter().copied().filter(|c| s & !c == 0).fold(full, |m, c| m & c)
    })
}

/// Boolean closure of a finite topological space given by its specialisation
/// relation: `y ∈ cl S` iff `hom(s,y)` for some `s ∈ S`.
pub fn closure_from_preorder(order: &VCat) -> Result<PSpace> {
    let q = order.quantale();
    if q != Quantale::Bool2 {
        return Err(Error::Unsupported("preorder must be Boolean".into()));
    }
    PSpace::from_fn(q, order.carrier(), DEFAULT_POWERSET_CAP, |s, y| {
        QValue::Bool(members(s).any(|x| *order.get(x, y) == QValue::Bool(true)))
    })
}


/// Why a map fails to be a morphism of structured spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismFailure {
    /// `A(x,y) ≰ C(fx, fy)`.
    Functor(usize, usize),
    /// `α(t,x) ≰ γ(Tf t, fx)`.
    Structure(usize, usize),
}

/// Checks that `f` is a functor and `α ≤ γ(Tf, f)`.
pub fn morphism_witness(f: &SetMap, a: &ModularSpace, c: &ModularSpace) -> Result<Option<MorphismFailure>> {
    let t = same_monad(a.structure(), c.structure())?;
    if let Some((x, y)) = crate::enriched::functor_witness(f, a.cat(), c.cat())? {
        return Ok(Some(MorphismFailure::Functor(x, y)));
    }
    let tf = t.map(f, DEFAULT_POWERSET_CAP)?;
    let pulled = c.rel().restrict(&tf, f)?;
    Ok(a.rel().le_witness(&pulled)?.map(|(s, x)| MorphismFailure::Structure(s, x)))
}

pub fn is_morphism(f: &SetMap, a: &ModularSpace, c: &ModularSpace) -> Result<bool> {
    Ok(morphism_witness(f, a, c)?.is_none())
}

/// Morphism check for a map into the quantale itself with its canonical
/// structure, evaluated without materialising `TV`.
pub fn canonical_morphism_witness(
    d: &[QValue],
    a: &ModularSpace,
    space: &crate::topology::CanonicalSpace,
) -> Result<Option<MorphismFailure>> {
    let q = a.quantale();
    if q != space.quantale || d.len() != a.carrier().len() {
        return Err(Error::Shape("map does not fit the space".into()));
    }
    if let Some((x, y)) = crate::enriched::functor_into_witness(d, a.cat(), &space.target()) {
        return Ok(Some(MorphismFailure::Functor(x, y)));
    }
    let alpha = a.rel();
    let n = a.carrier().len();
    for t in 0..alpha.source().len() {
        for x in 0..n {
            let bound = match a.monad() {
                Monad::U => space.convergence(&d[t], &d[x])?,
                Monad::P => {
                    let img: Vec<QValue> = members(t).map(|s| d[s].clone()).collect();
                    space.point_set(&img, &d[x])?
                }
            };
            if !q.le_raw(alpha.get(t, x), &bound) {
                return Ok(Some(MorphismFailure::Structure(t, x)));
            }
        }
    }
    Ok(None)
}
