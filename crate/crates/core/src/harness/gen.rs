//! Seeded random instances. Every trial draws from its own ChaCha stream
//! `(seed, trial)`, so a trial can be replayed in isolation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enriched::{VCat, VProf};
use crate::error::{Error, Result};
use crate::quantale::{Ext, QValue, Quantale, Rational, StepFunction, TNorm};
use crate::relation::{FiniteSet, SetMap, VRel};
use crate::topology::powerset::{members, DEFAULT_POWERSET_CAP};
use crate::topology::{ModularSpace, Monad, PSpace, Structure, USpace};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Generator settings shared by all suites.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub quantales: Vec<Quantale>,
    /// Largest carrier for `A` and `B`.
    pub max_size: usize,
    /// Largest finite target.
    pub max_target: usize,
    pub trials: u64,
    pub seed: u64,
}

/// The quantales of the maximum-theorem campaigns.
pub fn default_quantales() -> Vec<Quantale> {
    vec![
        Quantale::Bool2,
        Quantale::Lawvere,
        Quantale::UnitInterval(TNorm::Product),
        Quantale::UnitInterval(TNorm::Minimum),
        Quantale::UnitInterval(TNorm::Lukasiewicz),
    ]
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { quantales: default_quantales(), max_size: 4, max_target: 4, trials: 1000, seed: 0 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.quantales.is_empty() {
            return Err(Error::Range("no quantales selected".into()));
        }
        if !(1..=5).contains(&self.max_size) || !(1..=5).contains(&self.max_target) {
            return Err(Error::Range("sizes must lie in 1..=5".into()));
        }
        Ok(())
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Finite value set sampled from for a quantale.
pub fn palette(q: Quantale) -> Vec<QValue> {
    match q {
        Quantale::Bool2 => vec![QValue::Bool(false), QValue::Bool(true)],
        Quantale::Lawvere => {
            let mut v: Vec<QValue> = [(0, 1), (1, 2), (1, 1), (2, 1), (3, 1)].iter().map(|&(n, d)| QValue::Real(Ext::ratio(n, d))).collect();
            v.push(QValue::inf());
            v
        }
        Quantale::ExtendedReal => {
            let mut v = vec![QValue::Real(Ext::NegInf)];
            v.extend([(-1, 1), (0, 1), (1, 2), (2, 1)].iter().map(|&(n, d)| QValue::Real(Ext::ratio(n, d))));
            v.push(QValue::Real(Ext::PosInf));
            v
        }
        Quantale::UnitInterval(_) => [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)].iter().map(|&(n, d)| QValue::unit(n, d)).collect(),
        Quantale::Delta(_) => {
            let steps = [
                StepFunction::bottom(),
                StepFunction::unit(),
                StepFunction::pi(r(1, 1), r(1, 2)).unwrap(),
                StepFunction::pi(r(1, 2), r(1, 4)).unwrap(),
                StepFunction::normalize([(r(0, 1), r(1, 2)), (r(1, 1), r(1, 1))]).unwrap(),
                StepFunction::pi(r(2, 1), r(1, 1)).unwrap(),
            ];
            steps.into_iter().map(QValue::Step).collect()
        }
    }
}

pub fn pick(rng: &mut impl Rng, pal: &[QValue]) -> QValue {
    pal.choose(rng).expect("nonempty palette").clone()
}

/// `⊥` with probability `sparsity`, otherwise a palette value.
pub fn pick_sparse(rng: &mut impl Rng, q: Quantale, pal: &[QValue], sparsity: f64) -> QValue {
    if rng.gen_bool(sparsity) {
        q.bottom()
    } else {
        pick(rng, pal)
    }
}

/// `⊥` or `k` only.
pub fn pick_discrete(rng: &mut impl Rng, q: Quantale) -> QValue {
    if rng.gen_bool(0.5) {
        q.unit()
    } else {
        q.bottom()
    }
}

pub fn random_rel(rng: &mut impl Rng, q: Quantale, a: &FiniteSet, b: &FiniteSet, sparsity: f64) -> VRel {
    let pal = palette(q);
    let entries: Vec<QValue> = (0..a.len() * b.len()).map(|_| pick_sparse(rng, q, &pal, sparsity)).collect();
    VRel::new(q, a.clone(), b.clone(), entries).expect("palette values are valid")
}

pub fn random_discrete_rel(rng: &mut impl Rng, q: Quantale, a: &FiniteSet, b: &FiniteSet) -> VRel {
    let entries: Vec<QValue> = (0..a.len() * b.len()).map(|_| pick_discrete(rng, q)).collect();
    VRel::new(q, a.clone(), b.clone(), entries).expect("valid")
}

pub fn random_map(rng: &mut impl Rng, a: &FiniteSet, b: &FiniteSet) -> SetMap {
    let table = (0..a.len()).map(|_| rng.gen_range(0..b.len())).collect();
    SetMap::new(a.clone(), b.clone(), table).expect("in range")
}

pub fn random_carrier(rng: &mut impl Rng, name: &str, max: usize) -> FiniteSet {
    FiniteSet::range(name, rng.gen_range(1..=max))
}

/// Category generated by a sparse random relation.
pub fn random_vcat(rng: &mut impl Rng, q: Quantale, set: &FiniteSet) -> VCat {
    let sparsity = rng.gen_range(0.5..0.95);
    VCat::generated_by(&random_rel(rng, q, set, set, sparsity)).expect("square")
}

/// Pointwise meet of two homs; again a category.
pub fn meet_cat(a: &VCat, b: &VRel) -> VCat {
    VCat::new(a.hom().meet(b).expect("same shape")).expect("square")
}

/// A reflexive modular structure on `cat`: `TĀ∘(R ∨ ε)∘Ā` for sparse random `R`.
pub fn random_structure(rng: &mut impl Rng, cat: &VCat, monad: Monad) -> Result<Structure> {
    let q = cat.quantale();
    let set = cat.carrier();
    let tset = monad.carrier(set, DEFAULT_POWERSET_CAP)?;
    let sparsity = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(0.7..0.98) };
    let raw = random_rel(rng, q, &tset, set, sparsity).join(&monad.eps(set, q, DEFAULT_POWERSET_CAP)?)?;
    let ta = monad.extend(cat.hom(), DEFAULT_POWERSET_CAP)?;
    let rel = ta.compose(&raw)?.compose(cat.hom())?;
    wrap(monad, set, rel)
}

pub fn wrap(monad: Monad, set: &FiniteSet, rel: VRel) -> Result<Structure> {
    Ok(match monad {
        Monad::P => Structure::Closure(PSpace::new(set, rel)?),
        Monad::U => Structure::Convergence(USpace::new(rel)?),
    })
}

/// Meets a structure with the pullback `γ(Tf, f)` of the target's structure,
/// which makes `f` a morphism.
pub fn pull_back(s: &Structure, f: &SetMap, target: &ModularSpace) -> Result<Structure> {
    let monad = s.monad();
    let tf = monad.map(f, DEFAULT_POWERSET_CAP)?;
    let pulled = target.rel().restrict(&tf, f)?;
    wrap(monad, s.carrier(), s.rel().meet(&pulled)?)
}

/// Random modular space of the given monad.
pub fn random_modular(rng: &mut impl Rng, q: Quantale, monad: Monad, set: &FiniteSet) -> Result<ModularSpace> {
    let cat = random_vcat(rng, q, set);
    let s = random_structure(rng, &cat, monad)?;
    ModularSpace::new(cat, s)
}

/// Random profunctor between two categories, repaired to `Ā∘J∘B̄`.
pub fn random_prof(rng: &mut impl Rng, a: &VCat, b: &VCat, discrete: bool) -> Result<VProf> {
    let q = a.quantale();
    let raw = if discrete {
        random_discrete_rel(rng, q, a.carrier(), b.carrier())
    } else {
        let sparsity = rng.gen_range(0.2..0.8);
        random_rel(rng, q, a.carrier(), b.carrier(), sparsity)
    };
    VProf::repaired(raw, a.clone(), b.clone())
}

/// Boolean closure space whose closed sets are generated (under
/// intersection) by `extra` random sets and the given ones.
pub fn random_closed_family(rng: &mut impl Rng, n: usize, extra: usize) -> Vec<usize> {
    let full = (1usize << n) - 1;
    (0..extra).map(|_| rng.gen_range(0..=full)).collect()
}

/// Topology: closed sets closed under finite unions and intersections.
pub fn random_topology(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let full = (1usize << n) - 1;
    let mut fam = vec![0, full];
    for _ in 0..rng.gen_range(0..=3) {
        fam.push(rng.gen_range(0..=full));
    }
    loop {
        let mut grew = false;
        let snapshot = fam.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                for c in [a & b, a | b] {
                    if !fam.contains(&c) {
                        fam.push(c);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    fam.sort();
    fam
}

/// Upward closure of a set under a Boolean preorder.
pub fn up_closure(order: &VCat, s: usize) -> usize {
    (0..order.carrier().len())
        .filter(|&y| members(s).any(|x| *order.get(x, y) == QValue::Bool(true)))
        .fold(0, |m, y| m | 1 << y)
}
