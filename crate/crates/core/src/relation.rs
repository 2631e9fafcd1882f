//! Finite sets, maps and quantale-valued relations.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};

#[derive(Debug, PartialEq, Eq, Hash)]
struct SetInner {
    name: String,
    elements: Vec<String>,
}

/// A named finite set with named elements. Cloning is cheap.
#[derive(Clone, Debug, Eq)]
pub struct FiniteSet(Arc<SetInner>);

impl std::hash::Hash for FiniteSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl FiniteSet {
    pub fn new<S: Into<String>>(name: impl Into<String>, elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut sorted = elements.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Shape(format!("duplicate element `{}` in set {name}", w[0])));
        }
        Ok(FiniteSet(Arc::new(SetInner { name, elements })))
    }

    /// `{x0, ..., x(n-1)}`.
    pub fn range(name: impl Into<String>, n: usize) -> Self {
        Self::new(name, (0..n).map(|i| format!("x{i}"))).expect("distinct names")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.0.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.0.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.elements.iter().position(|e| e == name)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{{}}}", self.name(), self.elements().join(", "))
    }
}

/// A function between finite sets, stored as a table of target indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetMap {
    source: FiniteSet,
    target: FiniteSet,
    table: Vec<usize>,
}

impl SetMap {
    pub fn new(source: FiniteSet, target: FiniteSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::Shape(format!(
                "map table has {} entries, source {} has {}",
                table.len(),
                source.name(),
                source.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&t| t >= target.len()) {
            return Err(Error::Shape(format!("map value {bad} outside {}", target.name())));
        }
        Ok(SetMap { source, target, table })
    }

    pub fn identity(set: &FiniteSet) -> Self {
        SetMap { source: set.clone(), target: set.clone(), table: (0..set.len()).collect() }
    }

    pub fn constant(source: &FiniteSet, target: &FiniteSet, value: usize) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![value; source.len()])
    }

    pub fn source(&self) -> &FiniteSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteSet {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Diagrammatic composite: first `self`, then `other`.
    pub fn then(&self, other: &SetMap) -> Result<SetMap> {
        if self.target != other.source {
            return Err(Error::Shape("maps are not composable".into()));
        }
        Ok(SetMap {
            source: self.source.clone(),
            target: other.target.clone(),
            table: self.table.iter().map(|&y| other.table[y]).collect(),
        })
    }
}

/// Which graph of a map to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// `f_* : A ⇸ B`, `f_*(x,y) = k` iff `f x = y`.
    Companion,
    /// `f^* : B ⇸ A`, `f^*(y,x) = k` iff `f x = y`.
    Conjoint,
}

/// Which residual of relations to form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A `V`-relation `A ⇸ B`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRel {
    q: Quantale,
    source: FiniteSet,
    target: FiniteSet,
    entries: Vec<QValue>,
}

const PARALLEL_WORK: usize = 1 << 15;

impl VRel {
    pub fn new(q: Quantale, source: FiniteSet, target: FiniteSet, entries: Vec<QValue>) -> Result<Self> {
        if entries.len() != source.len() * target.len() {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} relation",
                entries.len(),
                source.len(),
                target.len()
            )));
        }
        for e in &entries {
            q.check(e)?;
        }
        Ok(VRel { q, source, target, entries })
    }

    pub fn from_fn(
        q: Quantale,
        source: &FiniteSet,
        target: &FiniteSet,
        f: impl Fn(usize, usize) -> QValue,
    ) -> Result<Self> {
        let rel = Self::from_fn_raw(q, source, target, f);
        for e in &rel.entries {
            q.check(e)?;
        }
        Ok(rel)
    }

    pub(crate) fn from_fn_raw(
        q: Quantale,
        source: &FiniteSet,
        target: &FiniteSet,
        f: impl Fn(usize, usize) -> QValue,
    ) -> Self {
        let m = target.len();
        let entries = (0..source.len() * m).map(|i| f(i / m, i % m)).collect();
        VRel { q, source: source.clone(), target: target.clone(), entries }
    }

    pub fn constant(q: Quantale, source: &FiniteSet, target: &FiniteSet, v: QValue) -> Result<Self> {
        q.check(&v)?;
        Ok(Self::from_fn_raw(q, source, target, |_, _| v.clone()))
    }

    pub fn bottom(q: Quantale, source: &FiniteSet, target: &FiniteSet) -> Self {
        Self::from_fn_raw(q, source, target, |_, _| q.bottom())
    }

    /// The identity relation: `k` on the diagonal, `⊥` elsewhere.
    pub fn identity(q: Quantale, set: &FiniteSet) -> Self {
        Self::from_fn_raw(q, set, set, |x, y| if x == y { q.unit() } else { q.bottom() })
    }

    /// Companion or conjoint of a map.
    pub fn graph(q: Quantale, f: &SetMap, kind: GraphKind) -> Self {
        let hit = |x: usize, y: usize| if f.apply(x) == y { q.unit() } else { q.bottom() };
        match kind {
            GraphKind::Companion => Self::from_fn_raw(q, f.source(), f.target(), hit),
            GraphKind::Conjoint => Self::from_fn_raw(q, f.target(), f.source(), |y, x| hit(x, y)),
        }
    }

    /// Lifts a Boolean relation: true becomes `k`, false becomes `⊥`.
    pub fn from_bool(b: &VRel, q: Quantale) -> Result<Self> {
        if b.q != Quantale::Bool2 {
            return Err(Error::Mismatch { quantale: "bool".into(), value: b.q.to_string() });
        }
        Ok(Self::from_fn_raw(q, &b.source, &b.target, |x, y| {
            if *b.get(x, y) == QValue::Bool(true) {
                q.unit()
            } else {
                q.bottom()
            }
        }))
    }

    pub fn quantale(&self) -> Quantale {
        self.q
    }

    pub fn source(&self) -> &FiniteSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteSet {
        &self.target
    }

    pub fn entries(&self) -> &[QValue] {
        &self.entries
    }

    pub fn get(&self, x: usize, y: usize) -> &QValue {
        &self.entries[x * self.target.len() + y]
    }

    pub fn row(&self, x: usize) -> &[QValue] {
        let m = self.target.len();
        &self.entries[x * m..(x + 1) * m]
    }

    pub fn set(&mut self, x: usize, y: usize, v: QValue) -> Result<()> {
        self.q.check(&v)?;
        let m = self.target.len();
        self.entries[x * m + y] = v;
        Ok(())
    }

    fn same_quantale(&self, other: &VRel) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Mismatch { quantale: self.q.to_string(), value: other.q.to_string() });
        }
        Ok(())
    }

    fn same_shape(&self, other: &VRel) -> Result<()> {
        self.same_quantale(other)?;
        if self.source != other.source || self.target != other.target {
            return Err(Error::Shape(format!(
                "{}⇸{} versus {}⇸{}",
                self.source.name(),
                self.target.name(),
                other.source.name(),
                other.target.name()
            )));
        }
        Ok(())
    }

    /// `(J∘H)(x,z) = ⋁_y J(x,y) ⊗ H(y,z)` for `J = self : A ⇸ B`, `H : B ⇸ C`.
    pub fn compose(&self, h: &VRel) -> Result<VRel> {
        self.same_quantale(h)?;
        if self.target != h.source {
            return Err(Error::Shape(format!(
                "cannot compose {}⇸{} with {}⇸{}",
                self.source.name(),
                self.target.name(),
                h.source.name(),
                h.target.name()
            )));
        }
        let q = self.q;
        let (n, p) = (self.source.len(), h.target.len());
        let bottom = q.bottom();
        let row = |x: usize| -> Vec<QValue> {
            let jr = self.row(x);
            (0..p)
                .map(|z| {
                    let mut acc = bottom.clone();
                    for (y, jxy) in jr.iter().enumerate() {
                        if *jxy == bottom {
                            continue;
                        }
                        let hyz = h.get(y, z);
                        if *hyz == bottom {
                            continue;
                        }
                        q.join_assign(&mut acc, q.tensor_raw(jxy, hyz));
                    }
                    acc
                })
                .collect()
        };
        let rows: Vec<Vec<QValue>> = if n * p * self.target.len() >= PARALLEL_WORK {
            (0..n).into_par_iter().map(row).collect()
        } else {
            (0..n).map(row).collect()
        };
        Ok(VRel {
            q,
            source: self.source.clone(),
            target: h.target.clone(),
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// First entry where `self ≤ other` fails.
    pub fn le_witness(&self, other: &VRel) -> Result<Option<(usize, usize)>> {
        self.same_shape(other)?;
        let m = self.target.len();
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| !self.q.le_raw(a, b))
            .map(|i| (i / m, i % m)))
    }

    pub fn le(&self, other: &VRel) -> Result<bool> {
        Ok(self.le_witness(other)?.is_none())
    }

    /// First entry where the two relations differ.
    pub fn eq_witness(&self, other: &VRel) -> Result<Option<(usize, usize)>> {
        self.same_shape(other)?;
        let m = self.target.len();
        Ok(self.entries.iter().zip(&other.entries).position(|(a, b)| a != b).map(|i| (i / m, i % m)))
    }

    pub fn join(&self, other: &VRel) -> Result<VRel> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.q.join_raw(a, b)))
    }

    pub fn meet(&self, other: &VRel) -> Result<VRel> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.q.meet_raw(a, b)))
    }

    fn zip_with(&self, other: &VRel, f: impl Fn(&QValue, &QValue) -> QValue) -> VRel {
        VRel {
            q: self.q,
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `J° : B ⇸ A`.
    pub fn reverse(&self) -> VRel {
        Self::from_fn_raw(self.q, &self.target, &self.source, |y, x| self.get(x, y).clone())
    }

    /// `K(f,g)(x,y) = K(f x, g y)` for `K = self : C ⇸ D`.
    pub fn restrict(&self, f: &SetMap, g: &SetMap) -> Result<VRel> {
        if *f.target() != self.source || *g.target() != self.target {
            return Err(Error::Shape("restriction maps do not land in the relation's sets".into()));
        }
        Ok(Self::from_fn_raw(self.q, f.source(), g.source(), |x, y| {
            self.get(f.apply(x), g.apply(y)).clone()
        }))
    }

    /// Left: `(J ⊸ K)(y,z) = ⋀_x J(x,y) ⊸ K(x,z)` for `J = self : A ⇸ B`, `K : A ⇸ E`.
    /// Right: `(K ⟜ H)(x,y) = ⋀_z K(x,z) ⟜ H(y,z)` for `K = self : A ⇸ E`, `H : B ⇸ E`.
    pub fn residuate(&self, side: Side, other: &VRel) -> Result<VRel> {
        self.same_quantale(other)?;
        let q = self.q;
        match side {
            Side::Left => {
                if self.source != other.source {
                    return Err(Error::Shape("left residual needs relations with a common source".into()));
                }
                Ok(Self::from_fn_raw(q, &self.target, &other.target, |y, z| {
                    let mut acc = q.top();
                    for x in 0..self.source.len() {
                        acc = q.meet_raw(&acc, &q.lhom_raw(self.get(x, y), other.get(x, z)));
                    }
                    acc
                }))
            }
            Side::Right => {
                if self.target != other.target {
                    return Err(Error::Shape("right residual needs relations with a common target".into()));
                }
                Ok(Self::from_fn_raw(q, &self.source, &other.source, |x, y| {
                    let mut acc = q.top();
                    for z in 0..self.target.len() {
                        acc = q.meet_raw(&acc, &q.rhom_raw(self.get(x, z), other.get(y, z)));
                    }
                    acc
                }))
            }
        }
    }

    /// The Boolean relation `x J_v y` iff `v ≤ J(x,y)`.
    pub fn threshold(&self, v: &QValue) -> Result<VRel> {
        self.q.check(v)?;
        Ok(Self::from_fn_raw(Quantale::Bool2, &self.source, &self.target, |x, y| {
            QValue::Bool(self.q.le_raw(v, self.get(x, y)))
        }))
    }

    /// True when every entry is `⊥` or `k`.
    pub fn is_discrete(&self) -> bool {
        let (b, k) = (self.q.bottom(), self.q.unit());
        self.entries.iter().all(|e| *e == b || *e == k)
    }

    pub fn is_square(&self) -> bool {
        self.source == self.target
    }
}

impl fmt::Display for VRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.source.len() {
            let cells: Vec<String> = self.row(x).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// The boundary of a candidate cell: top `J : A ⇸ B`, vertical maps
/// `f : A → C`, `g : B → D`, bottom `K : C ⇸ D`.
#[derive(Clone, Debug)]
pub struct CellBoundary {
    pub top: VRel,
    pub left: SetMap,
    pub right: SetMap,
    pub bottom: VRel,
}

impl CellBoundary {
    /// A cell exists iff `J ≤ K(f,g)`; returns the first failing pair.
    pub fn witness(&self) -> Result<Option<(usize, usize)>> {
        if *self.left.source() != *self.top.source() || *self.right.source() != *self.top.target() {
            return Err(Error::Shape("cell maps do not start at the top relation's sets".into()));
        }
        self.top.le_witness(&self.bottom.restrict(&self.left, &self.right)?)
    }

    pub fn exists(&self) -> Result<bool> {
        Ok(self.witness()?.is_none())
    }
}
