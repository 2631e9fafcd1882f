//! The four maximum theorems, checked instance by instance.

use rand::Rng;

use super::gen::{meet_cat, palette, pick, pull_back, random_carrier, random_map, random_modular, random_prof, random_structure, random_vcat, trial_rng, wrap, GeneratorConfig};
use super::report::{Secondary, VerificationReport};
use crate::continuity::{is_morphism, morphism_witness, open_closed_check, vertical_check, Kind};
use crate::enriched::{kan_finite_search, kan_into_canonical, kan_verify, bc_check, Direction, HomTarget, VCat, VProf, Variance};
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{FiniteSet, SetMap, VRel};
use crate::topology::{cocomplete_check, CanonicalSpace, ModularSpace, Monad, DEFAULT_POWERSET_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    RightCocomplete,
    RightBc,
    LeftCocomplete,
    LeftBc,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::RightCocomplete, Variant::RightBc, Variant::LeftCocomplete, Variant::LeftBc];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::RightCocomplete => "right_cocomplete",
            Variant::RightBc => "right_bc",
            Variant::LeftCocomplete => "left_cocomplete",
            Variant::LeftBc => "left_bc",
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Variant::RightCocomplete | Variant::RightBc => Direction::Right,
            Variant::LeftCocomplete | Variant::LeftBc => Direction::Left,
        }
    }

    fn cocomplete(&self) -> bool {
        matches!(self, Variant::RightCocomplete | Variant::LeftCocomplete)
    }

    fn salt(&self) -> u64 {
        *self as u64 + 1
    }
}

/// Data of one maximum-theorem instance: `J : A ⇸ B` and a map into `M`,
/// from `B` for right extensions and from `A` for left ones.
#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub variant: Variant,
    pub seed: u64,
    pub trial: u64,
    pub quantale: Quantale,
    pub monad: Monad,
    pub a: ModularSpace,
    pub b: ModularSpace,
    pub j: VProf,
    pub map: SetMap,
    pub m: ModularSpace,
    /// Values of `V` behind the points of `M`, when `M` is a full piece of `V`.
    pub labels: Option<(Variance, Vec<QValue>)>,
}

fn hom_pullback<T: HomTarget<Obj = QValue>>(target: &T, set: &FiniteSet, vals: &[QValue]) -> VRel {
    VRel::from_fn(target.quantale(), set, set, |x, y| target.hom(&vals[x], &vals[y])).expect("valid values")
}

/// Closes a finite set of values under binary meets (`Lhom`) or joins
/// (`Rhom`) and adds the empty one.
fn algebra_closure(q: Quantale, variance: Variance, values: &mut Vec<QValue>) {
    let empty = match variance {
        Variance::Lhom => q.top(),
        Variance::Rhom => q.bottom(),
    };
    if !values.contains(&empty) {
        values.push(empty);
    }
    loop {
        let mut fresh = Vec::new();
        for a in values.iter() {
            for b in values.iter() {
                let c = match variance {
                    Variance::Lhom => q.meet_raw(a, b),
                    Variance::Rhom => q.join_raw(a, b),
                };
                if !values.contains(&c) && !fresh.contains(&c) {
                    fresh.push(c);
                }
            }
        }
        if fresh.is_empty() {
            return;
        }
        values.extend(fresh);
    }
}

fn dedup(values: &[QValue]) -> Vec<QValue> {
    let mut out: Vec<QValue> = Vec::new();
    for v in values {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Largest finite target for powerset instances.
const MAX_P_TARGET: usize = 7;

pub fn gen_max_instance(cfg: &GeneratorConfig, variant: Variant, trial: u64) -> Result<TheoremInstance> {
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed.wrapping_mul(31).wrapping_add(variant.salt()), trial);
    let q = cfg.quantales[rng.gen_range(0..cfg.quantales.len())];
    let monad = if rng.gen_bool(0.5) { Monad::P } else { Monad::U };
    let dir = variant.direction();
    // Finite random targets are cocomplete only for U with the hom as structure.
    let canonical = match (variant.cocomplete(), monad) {
        (true, Monad::P) => true,
        _ => rng.gen_bool(0.5),
    };
    let max = if monad == Monad::P && canonical { cfg.max_size.min(3) } else { cfg.max_size };
    let aset = random_carrier(&mut rng, "a", max);
    let bset = random_carrier(&mut rng, "b", max);
    // The carrier the map starts from.
    let dom_set = if dir == Direction::Right { bset.clone() } else { aset.clone() };
    let discrete_j = rng.gen_bool(0.3);

    let (dom_cat, other_cat, map, m, labels) = if canonical {
        let variance = if rng.gen_bool(0.5) { Variance::Lhom } else { Variance::Rhom };
        let space = CanonicalSpace::new(q, variance);
        let target = space.target();
        let pal = palette(q);
        let vals: Vec<QValue> = (0..dom_set.len()).map(|_| pick(&mut rng, &pal)).collect();
        let dom_cat = meet_cat(&random_vcat(&mut rng, q, &dom_set), &hom_pullback(&target, &dom_set, &vals));
        let other_set = if dir == Direction::Right { &aset } else { &bset };
        let other_cat = random_vcat(&mut rng, q, other_set);
        let j = match dir {
            Direction::Right => random_prof(&mut rng, &other_cat, &dom_cat, discrete_j)?,
            Direction::Left => random_prof(&mut rng, &dom_cat, &other_cat, discrete_j)?,
        };
        let ext = kan_into_canonical(dir, variance, &vals, &j)?;
        let mut values = dedup(&vals.iter().chain(&ext).cloned().collect::<Vec<_>>());
        if variant.cocomplete() {
            algebra_closure(q, variance, &mut values);
        }
        if monad == Monad::P && values.len() > MAX_P_TARGET {
            return Err(Error::SizeCap { size: values.len(), cap: MAX_P_TARGET });
        }
        let (m, labels) = if variant.cocomplete() {
            space.algebra_subspace(&values, monad)?
        } else {
            space.subspace(&values, monad)?
        };
        let table = vals.iter().map(|v| labels.iter().position(|w| w == v).expect("value kept")).collect();
        let map = SetMap::new(dom_set.clone(), m.carrier().clone(), table)?;
        return finish(&mut rng, cfg, variant, trial, q, monad, j, map, m, Some((variance, labels)));
    } else {
        let mset = random_carrier(&mut rng, "m", cfg.max_target);
        let m = if variant.cocomplete() {
            let cat = random_vcat(&mut rng, q, &mset);
            let s = wrap(Monad::U, &mset, cat.hom().clone())?;
            ModularSpace::new(cat, s)?
        } else {
            random_modular(&mut rng, q, monad, &mset)?
        };
        let map = random_map(&mut rng, &dom_set, &mset);
        let dom_cat = meet_cat(&random_vcat(&mut rng, q, &dom_set), &m.cat().hom().restrict(&map, &map)?);
        let other_set = if dir == Direction::Right { &aset } else { &bset };
        let other_cat = random_vcat(&mut rng, q, other_set);
        (dom_cat, other_cat, map, m, None::<(Variance, Vec<QValue>)>)
    };
    let j = match dir {
        Direction::Right => random_prof(&mut rng, &other_cat, &dom_cat, discrete_j)?,
        Direction::Left => random_prof(&mut rng, &dom_cat, &other_cat, discrete_j)?,
    };
    finish(&mut rng, cfg, variant, trial, q, monad, j, map, m, labels)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    rng: &mut impl Rng,
    cfg: &GeneratorConfig,
    variant: Variant,
    trial: u64,
    q: Quantale,
    monad: Monad,
    j: VProf,
    map: SetMap,
    m: ModularSpace,
    labels: Option<(Variance, Vec<QValue>)>,
) -> Result<TheoremInstance> {
    let (acat, bcat) = (j.source.clone(), j.target.clone());
    let mut sa = random_structure(rng, &acat, monad)?;
    let mut sb = random_structure(rng, &bcat, monad)?;
    match variant.direction() {
        Direction::Right => sb = pull_back(&sb, &map, &m)?,
        Direction::Left => sa = pull_back(&sa, &map, &m)?,
    }
    let a = ModularSpace::new(acat, sa)?;
    let b = ModularSpace::new(bcat, sb)?;
    Ok(TheoremInstance { variant, seed: cfg.seed, trial, quantale: q, monad, a, b, j, map, m, labels })
}

fn ext(monad: Monad, rel: &VRel) -> Result<VRel> {
    monad.extend(rel, DEFAULT_POWERSET_CAP)
}

fn morphism_conclusion(r: &mut VerificationReport, f: &SetMap, src: &ModularSpace, inst: &TheoremInstance) -> Result<()> {
    let w = morphism_witness(f, src, &inst.m)?;
    r.conclude(w.is_none(), || format!("extension {:?} is not a morphism: {:?}", f.table(), w));
    Ok(())
}

/// Cross-checks a found extension against the closed form in `V`.
fn check_labels(inst: &TheoremInstance, found: &[usize]) -> Result<()> {
    if let Some((variance, labels)) = &inst.labels {
        let d: Vec<QValue> = inst.map.table().iter().map(|&i| labels[i].clone()).collect();
        let closed = kan_into_canonical(inst.variant.direction(), *variance, &d, &inst.j)?;
        let got: Vec<QValue> = found.iter().map(|&i| labels[i].clone()).collect();
        if got != closed {
            return Err(Error::SelfCheck("finite search disagrees with the closed form".into()));
        }
    }
    Ok(())
}

fn run(inst: &TheoremInstance, r: &mut VerificationReport) -> Result<()> {
    let (a, b, m, j) = (&inst.a, &inst.b, &inst.m, &inst.j);
    let t = inst.monad;
    let mt = inst.map.table().to_vec();
    match inst.variant {
        Variant::RightCocomplete | Variant::RightBc => {
            if !r.hypothesis("J T-open", open_closed_check(Kind::Open, &j.rel, a.structure(), b.structure())?.holds) {
                return Ok(());
            }
            if !r.hypothesis("e T-morphism", is_morphism(&inst.map, b, m)?) {
                return Ok(());
            }
            if inst.variant == Variant::RightCocomplete && !r.hypothesis("M T-cocomplete", cocomplete_check(m)?.cocomplete) {
                return Ok(());
            }
            let Some(rt) = kan_finite_search(Direction::Right, &mt, j, m.cat())? else {
                r.skip("no right Kan extension");
                return Ok(());
            };
            check_labels(inst, &rt)?;
            if inst.variant == Variant::RightBc
                && !r.hypothesis("right Beck-Chevalley", bc_check(Direction::Right, &rt, &mt, j, m.cat())?.holds)
            {
                return Ok(());
            }
            let rmap = SetMap::new(a.carrier().clone(), m.carrier().clone(), rt)?;
            morphism_conclusion(r, &rmap, a, inst)?;
            if inst.variant == Variant::RightBc {
                let e_closed = vertical_check(Kind::Closed, &inst.map, b, m)?.is_none();
                let j_closed = open_closed_check(Kind::Closed, &j.rel, a.structure(), b.structure())?.holds;
                let e_comp = m.cat().hom().restrict(&inst.map, &SetMap::identity(m.carrier()))?;
                let strict = ext(t, &j.rel)?.compose(&ext(t, &e_comp)?)? == ext(t, &j.rel.compose(&e_comp)?)?;
                r.secondary = if !e_closed {
                    Secondary::Skip("e not T-closed".into())
                } else if !j_closed {
                    Secondary::Skip("J not T-closed".into())
                } else if !strict {
                    Secondary::Skip("TJ∘T(e_*) ≠ T(J∘e_*)".into())
                } else {
                    match vertical_check(Kind::Closed, &rmap, a, m)? {
                        None => Secondary::Pass,
                        Some(w) => Secondary::Fail(format!("r not T-closed at {w:?}")),
                    }
                };
            }
        }
        Variant::LeftCocomplete | Variant::LeftBc => {
            if !r.hypothesis("J T-closed", open_closed_check(Kind::Closed, &j.rel, a.structure(), b.structure())?.holds) {
                return Ok(());
            }
            if !r.hypothesis("d T-morphism", is_morphism(&inst.map, a, m)?) {
                return Ok(());
            }
            let algebra = if inst.variant == Variant::LeftCocomplete {
                let c = cocomplete_check(m)?;
                if !r.hypothesis("M T-cocomplete", c.cocomplete) {
                    return Ok(());
                }
                Some(c.algebra.into_iter().map(|x| x.expect("cocomplete")).collect::<Vec<usize>>())
            } else {
                None
            };
            let Some(lt) = kan_finite_search(Direction::Left, &mt, j, m.cat())? else {
                r.skip("no left Kan extension");
                return Ok(());
            };
            check_labels(inst, &lt)?;
            let lmap = SetMap::new(b.carrier().clone(), m.carrier().clone(), lt.clone())?;
            if let Some(alg) = algebra {
                // m∘Tl must be the left extension of m∘Td along TJ.
                let ta = VCat::new(ext(t, a.cat().hom())?)?;
                let tb = VCat::new(ext(t, b.cat().hom())?)?;
                let tj = VProf::new(ext(t, &j.rel)?, ta, tb)?;
                let tl = t.map(&lmap, DEFAULT_POWERSET_CAP)?;
                let td = t.map(&inst.map, DEFAULT_POWERSET_CAP)?;
                let cand: Vec<usize> = tl.table().iter().map(|&s| alg[s]).collect();
                let dd: Vec<usize> = td.table().iter().map(|&s| alg[s]).collect();
                let holds = kan_verify(Direction::Left, &cand, &dd, &tj, m.cat())?.is_none();
                if !r.hypothesis("m∘Tl is the left Kan extension of m∘Td along TJ", holds) {
                    return Ok(());
                }
            } else {
                if !r.hypothesis("left Beck-Chevalley", bc_check(Direction::Left, &lt, &mt, j, m.cat())?.holds) {
                    return Ok(());
                }
                let d_conj = m.cat().hom().restrict(&SetMap::identity(m.carrier()), &inst.map)?;
                let strict = ext(t, &d_conj)?.compose(&ext(t, &j.rel)?)? == ext(t, &d_conj.compose(&j.rel)?)?;
                if !r.hypothesis("T(d^*)∘TJ = T(d^*∘J)", strict) {
                    return Ok(());
                }
            }
            morphism_conclusion(r, &lmap, b, inst)?;
            if inst.variant == Variant::LeftBc {
                let d_open = vertical_check(Kind::Open, &inst.map, a, m)?.is_none();
                let j_open = open_closed_check(Kind::Open, &j.rel, a.structure(), b.structure())?.holds;
                r.secondary = if !d_open {
                    Secondary::Skip("d not T-open".into())
                } else if !j_open {
                    Secondary::Skip("J not T-open".into())
                } else {
                    match vertical_check(Kind::Open, &lmap, b, m)? {
                        None => Secondary::Pass,
                        Some(w) => Secondary::Fail(format!("l not T-open at {w:?}")),
                    }
                };
            }
        }
    }
    Ok(())
}

pub fn verify_max_theorem(inst: &TheoremInstance) -> VerificationReport {
    let mut r = VerificationReport::new(
        inst.variant.name(),
        inst.seed,
        inst.trial,
        inst.quantale.to_string(),
        Some(inst.monad.to_string()),
    );
    if let Err(e) = run(inst, &mut r) {
        r.error(&e);
    }
    r
}

/// Generates and verifies one trial. Instances too large for the powerset
/// cap are reported as skips.
pub fn max_trial(cfg: &GeneratorConfig, variant: Variant, trial: u64) -> VerificationReport {
    match gen_max_instance(cfg, variant, trial) {
        Ok(inst) => verify_max_theorem(&inst),
        Err(Error::SizeCap { .. }) => {
            let mut r = VerificationReport::new(variant.name(), cfg.seed, trial, "-".into(), None);
            r.skip("target over size cap");
            r
        }
        Err(e) => {
            let mut r = VerificationReport::new(variant.name(), cfg.seed, trial, "-".into(), None);
            r.error(&e);
            r
        }
    }
}
