//! Enriched categories, profunctors, Kan extensions and the Beck–Chevalley
//! condition.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{CellBoundary, FiniteSet, GraphKind, SetMap, VRel};

/// A `V`-category: a finite set with a hom relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCat {
    hom: VRel,
}

/// Outcome of checking the category axioms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VCatReport {
    /// An object `x` with `k ≰ A(x,x)`.
    pub unit_witness: Option<usize>,
    /// A triple with `A(x,y) ⊗ A(y,z) ≰ A(x,z)`.
    pub assoc_witness: Option<(usize, usize, usize)>,
}

impl VCatReport {
    pub fn holds(&self) -> bool {
        self.unit_witness.is_none() && self.assoc_witness.is_none()
    }
}

impl VCat {
    /// Wraps a square relation. Lawfulness is reported by [`VCat::check`].
    pub fn new(hom: VRel) -> Result<Self> {
        if !hom.is_square() {
            return Err(Error::Shape("a hom relation must be an endorelation".into()));
        }
        Ok(VCat { hom })
    }

    /// Like [`VCat::new`] but rejects relations that fail the axioms.
    pub fn lawful(hom: VRel) -> Result<Self> {
        let c = Self::new(hom)?;
        let r = c.check();
        if let Some(x) = r.unit_witness {
            return Err(Error::NotLawful(format!("k is not below A({0},{0})", c.carrier().element(x))));
        }
        if let Some((x, y, z)) = r.assoc_witness {
            let s = c.carrier();
            return Err(Error::NotLawful(format!(
                "A({0},{1}) ⊗ A({1},{2}) is not below A({0},{2})",
                s.element(x),
                s.element(y),
                s.element(z)
            )));
        }
        Ok(c)
    }

    /// The identity relation as hom.
    pub fn discrete(q: Quantale, set: &FiniteSet) -> Self {
        VCat { hom: VRel::identity(q, set) }
    }

    /// Smallest `V`-category containing the relation: joins in the identity
    /// and composes until stable.
    pub fn generated_by(rel: &VRel) -> Result<Self> {
        if !rel.is_square() {
            return Err(Error::Shape("a hom relation must be an endorelation".into()));
        }
        let q = rel.quantale();
        let mut h = rel.join(&VRel::identity(q, rel.source()))?;
        for _ in 0..=rel.source().len() + 1 {
            let next = h.join(&h.compose(&h)?)?;
            if next == h {
                return Ok(VCat { hom: h });
            }
            h = next;
        }
        Err(Error::Unsupported("transitive closure did not stabilise".into()))
    }

    pub fn quantale(&self) -> Quantale {
        self.hom.quantale()
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.hom.source()
    }

    pub fn hom(&self) -> &VRel {
        &self.hom
    }

    pub fn get(&self, x: usize, y: usize) -> &QValue {
        self.hom.get(x, y)
    }

    pub fn check(&self) -> VCatReport {
        let q = self.quantale();
        let n = self.carrier().len();
        let k = q.unit();
        let unit_witness = (0..n).find(|&x| !q.le_raw(&k, self.get(x, x)));
        let mut assoc_witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let t = q.tensor_raw(self.get(x, y), self.get(y, z));
                    if !q.le_raw(&t, self.get(x, z)) {
                        assoc_witness = Some((x, y, z));
                        break 'outer;
                    }
                }
            }
        }
        VCatReport { unit_witness, assoc_witness }
    }
}

/// First pair with `A(x,y) ≰ C(fx,fy)`, if any.
pub fn functor_witness(f: &SetMap, a: &VCat, c: &VCat) -> Result<Option<(usize, usize)>> {
    if f.source() != a.carrier() || f.target() != c.carrier() {
        return Err(Error::Shape("map does not match the categories".into()));
    }
    a.hom().le_witness(&c.hom().restrict(f, f)?)
}

pub fn is_functor(f: &SetMap, a: &VCat, c: &VCat) -> Result<bool> {
    Ok(functor_witness(f, a, c)?.is_none())
}

/// A relation between the carriers of two `V`-categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VProf {
    pub rel: VRel,
    pub source: VCat,
    pub target: VCat,
}

impl VProf {
    pub fn new(rel: VRel, source: VCat, target: VCat) -> Result<Self> {
        if rel.source() != source.carrier() || rel.target() != target.carrier() {
            return Err(Error::Shape("relation does not connect the given categories".into()));
        }
        Ok(VProf { rel, source, target })
    }

    /// Like [`VProf::new`] but replaces the relation by `Ā∘J∘B̄`.
    pub fn repaired(rel: VRel, source: VCat, target: VCat) -> Result<Self> {
        let fixed = source.hom().compose(&rel)?.compose(target.hom())?;
        Self::new(fixed, source, target)
    }

    pub fn quantale(&self) -> Quantale {
        self.rel.quantale()
    }

    pub fn get(&self, x: usize, y: usize) -> &QValue {
        self.rel.get(x, y)
    }

    /// A quadruple with `A(x,x') ⊗ J(x',y') ⊗ B(y',y) ≰ J(x,y)`.
    pub fn bimodule_witness(&self) -> Option<(usize, usize, usize, usize)> {
        let q = self.quantale();
        let (n, m) = (self.source.carrier().len(), self.target.carrier().len());
        for x in 0..n {
            for y in 0..m {
                for x2 in 0..n {
                    let left = self.source.get(x, x2);
                    if *left == q.bottom() {
                        continue;
                    }
                    for y2 in 0..m {
                        let t = q.tensor_raw(&q.tensor_raw(left, self.get(x2, y2)), self.target.get(y2, y));
                        if !q.le_raw(&t, self.get(x, y)) {
                            return Some((x, x2, y2, y));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_bimodule(&self) -> bool {
        self.bimodule_witness().is_none()
    }
}

/// Which internal hom of `V` serves as the target category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    /// `V_⊸(x,y) = x ⊸ y`.
    Lhom,
    /// `V_⟜(x,y) = x ⟜ y`.
    Rhom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// Something that has homs valued in `V`: a finite category or `V` itself.
pub trait HomTarget {
    type Obj: Clone + PartialEq + Debug;
    fn quantale(&self) -> Quantale;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> QValue;
    /// Objects at which defining equations are evaluated.
    fn probes(&self, hints: &[Self::Obj]) -> Vec<Self::Obj>;
}

impl HomTarget for VCat {
    type Obj = usize;

    fn quantale(&self) -> Quantale {
        VCat::quantale(self)
    }

    fn hom(&self, a: &usize, b: &usize) -> QValue {
        self.get(*a, *b).clone()
    }

    fn probes(&self, _hints: &[usize]) -> Vec<usize> {
        (0..self.carrier().len()).collect()
    }
}

/// `V` as a category over itself through one of its internal homs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalTarget {
    pub quantale: Quantale,
    pub variance: Variance,
}

impl CanonicalTarget {
    pub fn new(quantale: Quantale, variance: Variance) -> Self {
        CanonicalTarget { quantale, variance }
    }
}

impl HomTarget for CanonicalTarget {
    type Obj = QValue;

    fn quantale(&self) -> Quantale {
        self.quantale
    }

    fn hom(&self, a: &QValue, b: &QValue) -> QValue {
        match self.variance {
            Variance::Lhom => self.quantale.lhom_raw(a, b),
            Variance::Rhom => self.quantale.rhom_raw(a, b),
        }
    }

    fn probes(&self, hints: &[QValue]) -> Vec<QValue> {
        let q = self.quantale;
        let mut out: Vec<QValue> = Vec::new();
        for v in hints.iter().cloned().chain([q.bottom(), q.top(), q.unit()]) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}

/// First pair with `A(x,y) ≰ M(dx, dy)` for a family `d` of objects of `M`.
pub fn functor_into_witness<T: HomTarget>(d: &[T::Obj], a: &VCat, m: &T) -> Option<(usize, usize)> {
    let q = m.quantale();
    let n = a.carrier().len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| !q.le_raw(a.get(x, y), &m.hom(&d[x], &d[y])))
}

fn check_values(q: Quantale, d: &[QValue]) -> Result<()> {
    d.iter().try_for_each(|v| q.check(v))
}

/// Domain and codomain categories of the functor being extended and of its extension.
fn kan_sides(dir: Direction, j: &VProf) -> (&VCat, &VCat) {
    match dir {
        Direction::Left => (&j.source, &j.target),
        Direction::Right => (&j.target, &j.source),
    }
}

fn check_kan_input<T: HomTarget>(dir: Direction, d: &[T::Obj], j: &VProf, m: &T) -> Result<()> {
    if m.quantale() != j.quantale() {
        return Err(Error::Mismatch { quantale: j.quantale().to_string(), value: m.quantale().to_string() });
    }
    let (dom, _) = kan_sides(dir, j);
    if d.len() != dom.carrier().len() {
        return Err(Error::Shape(format!("functor has {} values, expected {}", d.len(), dom.carrier().len())));
    }
    if let Some(w) = j.bimodule_witness() {
        return Err(Error::NotLawful(format!("relation is not a profunctor at {w:?}")));
    }
    if let Some(w) = functor_into_witness(d, dom, m) {
        return Err(Error::NotLawful(format!("map is not a V-functor at {w:?}")));
    }
    Ok(())
}

/// Closed-form Kan extension into `V_⊸` or `V_⟜`.
///
/// Left along `J : A ⇸ B` of `d : A → V`: `ly = ⋁_x dx ⊗ J(x,y)` (`Lhom`) or
/// `ly = ⋀_x dx ⟜ J(x,y)` (`Rhom`). Right of `e : B → V`:
/// `rx = ⋀_y J(x,y) ⊸ ey` (`Lhom`) or `rx = ⋁_y J(x,y) ⊗ ey` (`Rhom`).
pub fn kan_into_canonical(dir: Direction, variance: Variance, d: &[QValue], j: &VProf) -> Result<Vec<QValue>> {
    let q = j.quantale();
    if !q.is_commutative() {
        return Err(Error::Unsupported(format!("this variance needs a commutative quantale, {q} is not")));
    }
    check_values(q, d)?;
    let target = CanonicalTarget::new(q, variance);
    check_kan_input(dir, d, j, &target)?;
    let out = closed_form(dir, variance, d, j);
    let (_, cod) = kan_sides(dir, j);
    if let Some(w) = functor_into_witness(&out, cod, &target) {
        return Err(Error::SelfCheck(format!("extension is not a V-functor at {w:?}")));
    }
    Ok(out)
}

fn closed_form(dir: Direction, variance: Variance, d: &[QValue], j: &VProf) -> Vec<QValue> {
    let q = j.quantale();
    let (n, m) = (j.source.carrier().len(), j.target.carrier().len());
    match (dir, variance) {
        (Direction::Left, Variance::Lhom) => (0..m)
            .map(|y| q.join_all_raw(&(0..n).map(|x| q.tensor_raw(&d[x], j.get(x, y))).collect::<Vec<_>>()))
            .collect(),
        (Direction::Left, Variance::Rhom) => (0..m)
            .map(|y| q.meet_all_raw(&(0..n).map(|x| q.rhom_raw(&d[x], j.get(x, y))).collect::<Vec<_>>()))
            .collect(),
        (Direction::Right, Variance::Lhom) => (0..n)
            .map(|x| q.meet_all_raw(&(0..m).map(|y| q.lhom_raw(j.get(x, y), &d[y])).collect::<Vec<_>>()))
            .collect(),
        (Direction::Right, Variance::Rhom) => (0..n)
            .map(|x| q.join_all_raw(&(0..m).map(|y| q.tensor_raw(j.get(x, y), &d[y])).collect::<Vec<_>>()))
            .collect(),
    }
}

/// Probe objects for equations on a canonical target: every value involved,
/// including the closed-form extension.
fn canonical_probes(t: &CanonicalTarget, dir: Direction, cand: &[QValue], d: &[QValue], j: &VProf) -> Vec<QValue> {
    let mut hints: Vec<QValue> = cand.iter().chain(d).cloned().collect();
    hints.extend(closed_form(dir, t.variance, d, j));
    t.probes(&hints)
}

/// A point where the defining equation of a Kan extension fails.
#[derive(Clone, Debug, PartialEq)]
pub struct KanWitness<O> {
    /// Index into the extension's domain.
    pub at: usize,
    pub probe: O,
    pub lhs: QValue,
    pub rhs: QValue,
}

/// Value of the right-hand side of the defining equation at `(i, z)`.
///
/// Left: `⋀_x J(x,i) ⊸ M(dx,z)`, which must equal `M(l i, z)`.
/// Right: `⋀_y M(z,ey) ⟜ J(i,y)`, which must equal `M(z, r i)`.
fn kan_rhs<T: HomTarget>(dir: Direction, i: usize, z: &T::Obj, d: &[T::Obj], j: &VProf, m: &T) -> QValue {
    let q = m.quantale();
    match dir {
        Direction::Left => {
            let terms: Vec<QValue> =
                (0..d.len()).map(|x| q.lhom_raw(j.get(x, i), &m.hom(&d[x], z))).collect();
            q.meet_all_raw(&terms)
        }
        Direction::Right => {
            let terms: Vec<QValue> =
                (0..d.len()).map(|y| q.rhom_raw(&m.hom(z, &d[y]), j.get(i, y))).collect();
            q.meet_all_raw(&terms)
        }
    }
}

fn kan_lhs<T: HomTarget>(dir: Direction, cand: &T::Obj, z: &T::Obj, m: &T) -> QValue {
    match dir {
        Direction::Left => m.hom(cand, z),
        Direction::Right => m.hom(z, cand),
    }
}

fn verify_with_probes<T: HomTarget>(
    dir: Direction,
    cand: &[T::Obj],
    d: &[T::Obj],
    j: &VProf,
    m: &T,
    probes: &[T::Obj],
) -> Option<KanWitness<T::Obj>> {
    for (i, c) in cand.iter().enumerate() {
        for z in probes {
            let lhs = kan_lhs(dir, c, z, m);
            let rhs = kan_rhs(dir, i, z, d, j, m);
            if lhs != rhs {
                return Some(KanWitness { at: i, probe: z.clone(), lhs, rhs });
            }
        }
    }
    None
}

/// Checks the defining equation of a left or right Kan extension in a finite target.
pub fn kan_verify(
    dir: Direction,
    candidate: &[usize],
    d: &[usize],
    j: &VProf,
    m: &VCat,
) -> Result<Option<KanWitness<usize>>> {
    check_kan_input(dir, d, j, m)?;
    let (_, cod) = kan_sides(dir, j);
    if candidate.len() != cod.carrier().len() {
        return Err(Error::Shape("candidate has the wrong number of values".into()));
    }
    let probes = m.probes(&[]);
    Ok(verify_with_probes(dir, candidate, d, j, m, &probes))
}

/// Checks the defining equation of a Kan extension into `V_⊸` or `V_⟜`.
pub fn kan_verify_canonical(
    dir: Direction,
    candidate: &[QValue],
    d: &[QValue],
    j: &VProf,
    target: &CanonicalTarget,
) -> Result<Option<KanWitness<QValue>>> {
    check_values(target.quantale, candidate)?;
    check_values(target.quantale, d)?;
    check_kan_input(dir, d, j, target)?;
    let probes = canonical_probes(target, dir, candidate, d, j);
    Ok(verify_with_probes(dir, candidate, d, j, target, &probes))
}

/// Brute-force search for a Kan extension in a finite target.
pub fn kan_finite_search(dir: Direction, d: &[usize], j: &VProf, m: &VCat) -> Result<Option<Vec<usize>>> {
    check_kan_input(dir, d, j, m)?;
    let (_, cod) = kan_sides(dir, j);
    let objs: Vec<usize> = (0..m.carrier().len()).collect();
    let mut out = Vec::with_capacity(cod.carrier().len());
    for i in 0..cod.carrier().len() {
        let profile: Vec<QValue> = objs.iter().map(|z| kan_rhs(dir, i, z, d, j, m)).collect();
        let hits: Vec<usize> = objs
            .iter()
            .copied()
            .filter(|&c| objs.iter().zip(&profile).all(|(z, p)| kan_lhs(dir, &c, z, m) == *p))
            .collect();
        match hits.first() {
            None => return Ok(None),
            Some(&c) => {
                // Any two solutions share their hom profile by the equation itself.
                for &other in &hits[1..] {
                    let same = objs.iter().all(|z| kan_lhs(dir, &c, z, m) == kan_lhs(dir, &other, z, m));
                    if !same {
                        return Err(Error::SelfCheck("Kan solutions with different profiles".into()));
                    }
                }
                out.push(c);
            }
        }
    }
    Ok(Some(out))
}

/// Result of a Beck–Chevalley check.
#[derive(Clone, Debug, PartialEq)]
pub struct BcReport {
    pub holds: bool,
    /// Left: `⋁_x M(ly,dx) ⊗ J(x,y)` per `y`. Right: `⋁_y J(x,y) ⊗ M(ey,rx)` per `x`.
    pub gaps: Vec<QValue>,
    /// First index whose gap is not above `k`.
    pub witness: Option<usize>,
}

fn bc_generic<T: HomTarget>(
    dir: Direction,
    ext: &[T::Obj],
    d: &[T::Obj],
    j: &VProf,
    m: &T,
    probes: &[T::Obj],
) -> Result<BcReport> {
    let q = m.quantale();
    let k = q.unit();
    let gaps: Vec<QValue> = ext
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let terms: Vec<QValue> = match dir {
                Direction::Left => (0..d.len()).map(|x| q.tensor_raw(&m.hom(e, &d[x]), j.get(x, i))).collect(),
                Direction::Right => (0..d.len()).map(|y| q.tensor_raw(j.get(i, y), &m.hom(&d[y], e))).collect(),
            };
            q.join_all_raw(&terms)
        })
        .collect();
    let witness = gaps.iter().position(|g| !q.le_raw(&k, g));
    // Relation form: left `d^*∘J = l^*`, right `J∘e_* = r_*`, on the probes.
    let mut relation_holds = true;
    'outer: for (i, e) in ext.iter().enumerate() {
        for z in probes {
            let (lhs, rhs) = match dir {
                Direction::Left => {
                    let t: Vec<QValue> =
                        (0..d.len()).map(|x| q.tensor_raw(&m.hom(z, &d[x]), j.get(x, i))).collect();
                    (q.join_all_raw(&t), m.hom(z, e))
                }
                Direction::Right => {
                    let t: Vec<QValue> =
                        (0..d.len()).map(|y| q.tensor_raw(j.get(i, y), &m.hom(&d[y], z))).collect();
                    (q.join_all_raw(&t), m.hom(e, z))
                }
            };
            if lhs != rhs {
                relation_holds = false;
                break 'outer;
            }
        }
    }
    if relation_holds != witness.is_none() {
        return Err(Error::SelfCheck("scalar and relational Beck–Chevalley verdicts disagree".into()));
    }
    Ok(BcReport { holds: relation_holds, gaps, witness })
}

/// Beck–Chevalley condition for a Kan extension in a finite target.
pub fn bc_check(dir: Direction, ext: &[usize], d: &[usize], j: &VProf, m: &VCat) -> Result<BcReport> {
    if let Some(w) = kan_verify(dir, ext, d, j, m)? {
        return Err(Error::NotLawful(format!("not a Kan extension at index {}", w.at)));
    }
    bc_generic(dir, ext, d, j, m, &m.probes(&[]))
}

/// Beck–Chevalley condition for a Kan extension into `V_⊸` or `V_⟜`.
pub fn bc_check_canonical(
    dir: Direction,
    ext: &[QValue],
    d: &[QValue],
    j: &VProf,
    target: &CanonicalTarget,
) -> Result<BcReport> {
    if let Some(w) = kan_verify_canonical(dir, ext, d, j, target)? {
        return Err(Error::NotLawful(format!("not a Kan extension at index {}", w.at)));
    }
    let probes = canonical_probes(target, dir, ext, d, j);
    bc_generic(dir, ext, d, j, target, &probes)
}

/// Beck–Chevalley for a cell `J ≤ K(f,g)`: left `f^*∘J = K(id,g)`,
/// right `J∘g_* = K(f,id)`. Returns the first differing pair.
pub fn cell_bc_witness(dir: Direction, cell: &CellBoundary) -> Result<Option<(usize, usize)>> {
    let q = cell.top.quantale();
    let (j, f, g, k) = (&cell.top, &cell.left, &cell.right, &cell.bottom);
    match dir {
        Direction::Left => {
            let lhs = VRel::graph(q, f, GraphKind::Conjoint).compose(j)?;
            lhs.eq_witness(&k.restrict(&SetMap::identity(k.source()), g)?)
        }
        Direction::Right => {
            let lhs = j.compose(&VRel::graph(q, g, GraphKind::Companion))?;
            lhs.eq_witness(&k.restrict(f, &SetMap::identity(k.target()))?)
        }
    }
}

pub fn cell_bc(dir: Direction, cell: &CellBoundary) -> Result<bool> {
    Ok(cell_bc_witness(dir, cell)?.is_none())
}
