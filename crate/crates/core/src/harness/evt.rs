//! Extreme-value theorems, the condition on `Δ`, and the two built-in
//! counterexamples.

use rand::Rng;

use super::gen::{meet_cat, palette, pick, random_carrier, random_closed_family, random_discrete_rel, random_map, random_rel, random_vcat, trial_rng, up_closure, GeneratorConfig};
use super::report::VerificationReport;
use crate::continuity::{canonical_morphism_witness, closure_from_closed, is_compact, is_morphism, u_compact_check};
use crate::enriched::{bc_check, bc_check_canonical, functor_into_witness, kan_finite_search, kan_into_canonical, BcReport, Direction, HomTarget, VCat, VProf, Variance};
use crate::error::{Error, Result};
use crate::quantale::{Ext, QValue, Quantale, Rational, StepFunction, TNorm};
use crate::relation::{FiniteSet, SetMap, VRel};
use crate::topology::powerset::{members, DEFAULT_POWERSET_CAP};
use crate::topology::{normalise, to_convergence, CanonicalSpace, ModularSpace, PSpace, Structure, USpace};

/// Quantales used by the quantale-valued extreme-value suite.
pub fn evt_quantales() -> Vec<Quantale> {
    let mut v = super::gen::default_quantales();
    v.extend(TNorm::ALL.iter().map(|&t| Quantale::Delta(t)));
    v
}

/// Whether a finite family is up-directed for the order `le`: nonempty, and
/// any two members have an upper bound among the members.
pub fn up_directed<T>(family: &[T], le: impl Fn(&T, &T) -> bool) -> bool {
    !family.is_empty()
        && family.iter().all(|u| family.iter().all(|v| family.iter().any(|w| le(u, w) && le(v, w))))
}

// ---------------------------------------------------------------------------
// Ordered closure spaces

#[derive(Clone, Debug)]
pub struct EvtClosureInstance {
    pub seed: u64,
    pub trial: u64,
    pub a: ModularSpace,
    pub j: VProf,
    pub d: SetMap,
    pub m: ModularSpace,
}

pub fn gen_evt_closure(cfg: &GeneratorConfig, trial: u64) -> Result<EvtClosureInstance> {
    let q = Quantale::Bool2;
    let mut rng = trial_rng(cfg.seed.wrapping_mul(31).wrapping_add(11), trial);
    let mset = random_carrier(&mut rng, "m", cfg.max_target);
    let extra = rng.gen_range(0..4);
    let mfam = random_closed_family(&mut rng, mset.len(), extra);
    let mp = closure_from_closed(&mset, &mfam)?;
    let m = normalise(&Structure::Closure(mp.clone()))?;
    let aset = random_carrier(&mut rng, "a", cfg.max_size);
    let d = random_map(&mut rng, &aset, &mset);
    let acat = meet_cat(&random_vcat(&mut rng, q, &aset), &m.cat().hom().restrict(&d, &d)?);
    // Closed sets of A: preimages of closed sets of M and some random upsets.
    let full_m = (1usize << mset.len()) - 1;
    let mut afam: Vec<usize> = (0..=full_m)
        .filter(|&c| mp.closure_of(c) == c)
        .map(|c| (0..aset.len()).filter(|&x| c >> d.apply(x) & 1 == 1).fold(0, |s, x| s | 1 << x))
        .collect();
    let extra = rng.gen_range(0..3);
    for s in random_closed_family(&mut rng, aset.len(), extra) {
        afam.push(up_closure(&acat, s));
    }
    let ap = closure_from_closed(&aset, &afam)?;
    let a = ModularSpace::new(acat, Structure::Closure(ap))?;
    let bset = random_carrier(&mut rng, "b", cfg.max_size);
    let bcat = random_vcat(&mut rng, q, &bset);
    let sparsity = rng.gen_range(0.3..0.8);
    let raw = random_rel(&mut rng, q, &aset, &bset, sparsity);
    let j = VProf::repaired(raw, a.cat().clone(), bcat)?;
    Ok(EvtClosureInstance { seed: cfg.seed, trial, a, j, d, m })
}

fn closure_of_space(m: &ModularSpace) -> Result<&PSpace> {
    match m.structure() {
        Structure::Closure(p) => Ok(p),
        _ => Err(Error::Unsupported("expected a closure structure".into())),
    }
}

fn run_evt_closure(inst: &EvtClosureInstance, r: &mut VerificationReport) -> Result<()> {
    let (a, m, j, d) = (&inst.a, &inst.m, &inst.j, &inst.d);
    if !is_morphism(d, a, m)? {
        return Err(Error::SelfCheck("generated map is not monotone continuous".into()));
    }
    let mp = closure_of_space(m)?;
    if !r.hypothesis("M normalised", m.structure().on_points()? == *m.cat().hom()) {
        return Ok(());
    }
    let t = QValue::Bool(true);
    let images: Vec<usize> = (0..j.target.carrier().len())
        .map(|y| (0..a.carrier().len()).filter(|&x| *j.get(x, y) == t).fold(0, |s, x| s | 1 << d.apply(x)))
        .collect();
    let mut compact = true;
    for &s in &images {
        compact &= is_compact(mp, s)?;
    }
    if !r.hypothesis("d(J⁻y) compact", compact) {
        return Ok(());
    }
    let directed = images.iter().all(|&s| {
        let pts: Vec<usize> = members(s).collect();
        up_directed(&pts, |&u, &v| *m.cat().get(u, v) == t)
    });
    if !r.hypothesis("d(J⁻y) up-directed", directed) {
        return Ok(());
    }
    let Some(l) = kan_finite_search(Direction::Left, d.table(), j, m.cat())? else {
        r.skip("no left Kan extension");
        return Ok(());
    };
    let bc = bc_check(Direction::Left, &l, d.table(), j, m.cat())?;
    r.conclude(bc.holds, || format!("Beck-Chevalley fails at y = {:?}", bc.witness));
    Ok(())
}

pub fn verify_evt_closure(inst: &EvtClosureInstance) -> VerificationReport {
    let mut r = VerificationReport::new("evt_closure", inst.seed, inst.trial, "bool".into(), Some("P".into()));
    if let Err(e) = run_evt_closure(inst, &mut r) {
        r.error(&e);
    }
    r
}

// ---------------------------------------------------------------------------
// Quantale-valued convergence spaces

#[derive(Clone, Debug)]
pub struct EvtQuantaleInstance {
    pub seed: u64,
    pub trial: u64,
    pub quantale: Quantale,
    /// A modular convergence space.
    pub a: ModularSpace,
    pub j: VProf,
    /// A continuous functor into `V_⊸`.
    pub d: Vec<QValue>,
}

pub fn gen_evt_quantale(cfg: &GeneratorConfig, trial: u64) -> Result<EvtQuantaleInstance> {
    let mut rng = trial_rng(cfg.seed.wrapping_mul(31).wrapping_add(13), trial);
    let q = cfg.quantales[rng.gen_range(0..cfg.quantales.len())];
    let target = CanonicalSpace::new(q, Variance::Lhom).target();
    let aset = random_carrier(&mut rng, "a", cfg.max_size);
    let pal = palette(q);
    let d: Vec<QValue> = (0..aset.len()).map(|_| pick(&mut rng, &pal)).collect();
    let pulled = VRel::from_fn(q, &aset, &aset, |x, y| target.hom(&d[x], &d[y]))?;
    let acat = meet_cat(&random_vcat(&mut rng, q, &aset), &pulled);
    let sparsity = rng.gen_range(0.4..1.0);
    let raw = random_rel(&mut rng, q, &aset, &aset, sparsity).meet(&pulled)?;
    let core = raw.join(&VRel::identity(q, &aset))?;
    let alpha = acat.hom().compose(&core)?.compose(acat.hom())?;
    let a = ModularSpace::new(acat, Structure::Convergence(USpace::new(alpha)?))?;
    let bset = random_carrier(&mut rng, "b", cfg.max_size);
    let bcat = random_vcat(&mut rng, q, &bset);
    let raw = if rng.gen_bool(0.7) {
        random_discrete_rel(&mut rng, q, &aset, &bset)
    } else {
        random_rel(&mut rng, q, &aset, &bset, 0.4)
    };
    let j = VProf::repaired(raw, a.cat().clone(), bcat)?;
    Ok(EvtQuantaleInstance { seed: cfg.seed, trial, quantale: q, a, j, d })
}

/// All conditions of the quantale-valued extreme-value theorem together with
/// the extension and its Beck–Chevalley report, evaluated without skipping.
#[derive(Clone, Debug, PartialEq)]
pub struct EvtDiagnosis {
    pub discrete: bool,
    pub u_compact: bool,
    /// Per `y`: `d(J_k⁻y)` is up-directed.
    pub directed: Vec<bool>,
    /// Per `y`: `k ≤ ⋁_{z∈D} (⋁D ⊸ z)` with `D = d(J_k⁻y)`.
    pub condition_d: Vec<bool>,
    pub extension: Vec<QValue>,
    pub bc: BcReport,
}

pub fn evt_diagnose(inst: &EvtQuantaleInstance) -> Result<EvtDiagnosis> {
    let q = inst.quantale;
    let space = CanonicalSpace::new(q, Variance::Lhom);
    if let Some(w) = canonical_morphism_witness(&inst.d, &inst.a, &space)? {
        return Err(Error::NotLawful(format!("map into V is not continuous: {w:?}")));
    }
    let Structure::Convergence(alpha) = inst.a.structure() else {
        return Err(Error::Unsupported("expected a convergence structure".into()));
    };
    let j = &inst.j;
    let k = q.unit();
    let (n, m) = (inst.a.carrier().len(), j.target.carrier().len());
    let fibers: Vec<Vec<QValue>> = (0..m)
        .map(|y| (0..n).filter(|&x| q.le_raw(&k, j.get(x, y))).map(|x| inst.d[x].clone()).collect())
        .collect();
    let directed = fibers.iter().map(|f| up_directed(f, |u, v| q.le_raw(u, v))).collect();
    let condition_d = fibers
        .iter()
        .map(|f| {
            let sup = q.join_all_raw(f.iter());
            q.le_raw(&k, &q.join_all_raw(&f.iter().map(|z| q.lhom_raw(&sup, z)).collect::<Vec<_>>()))
        })
        .collect();
    let extension = kan_into_canonical(Direction::Left, Variance::Lhom, &inst.d, j)?;
    let discrete = j.rel.is_discrete();
    if discrete {
        for (y, f) in fibers.iter().enumerate() {
            if extension[y] != q.join_all_raw(f.iter()) {
                return Err(Error::SelfCheck("extension of a discrete relation is not the fiber supremum".into()));
            }
        }
    }
    let bc = bc_check_canonical(Direction::Left, &extension, &inst.d, j, &space.target())?;
    Ok(EvtDiagnosis {
        discrete,
        u_compact: u_compact_check(&j.rel, alpha)?.is_none(),
        directed,
        condition_d,
        extension,
        bc,
    })
}

pub fn verify_evt_quantale(inst: &EvtQuantaleInstance) -> VerificationReport {
    let mut r = VerificationReport::new("evt_quantale", inst.seed, inst.trial, inst.quantale.to_string(), Some("U".into()));
    match evt_diagnose(inst) {
        Err(e) => r.error(&e),
        Ok(dg) => {
            let _ = r.hypothesis("(a) J discrete", dg.discrete)
                && r.hypothesis("(b) J U-compact", dg.u_compact)
                && r.hypothesis("(c) d(J_k⁻y) up-directed", dg.directed.iter().all(|&b| b))
                && r.hypothesis("(d) k ≤ sup (ly ⊸ z)", dg.condition_d.iter().all(|&b| b))
                && {
                    let w = dg.bc.witness;
                    r.conclude(dg.bc.holds, || format!("Beck-Chevalley fails at y = {w:?}"));
                    true
                };
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Distance distributions

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Report of the condition-(d) probe on a finite family.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaProbe {
    pub sup: StepFunction,
    /// `⋁_φ (⋁Φ ⊸ φ)`.
    pub lhs: StepFunction,
    pub equals_unit: bool,
    /// For the minimum t-norm: `(i, (φ_{1/2} ⊸ φ_i)(∞))` on the staircase.
    pub staircase: Vec<(Rational, Rational)>,
}

/// Staircase approximation of the ramp `t ↦ min(t, i)` from below, with
/// `steps` jumps of height `i/steps`.
pub fn staircase(i: &Rational, steps: i64) -> Result<StepFunction> {
    if !i.is_positive() || steps < 1 {
        return Err(Error::Range("staircase needs i > 0 and at least one step".into()));
    }
    let h = i / &Rational::from_integer(steps);
    let jumps = (1..=steps).map(|j| {
        let v = &h * &Rational::from_integer(j);
        (v.clone(), v)
    });
    StepFunction::normalize(jumps)
}

/// `(φ_{1/2} ⊸ φ_i)(∞)` in `Δ_min` for staircase approximants.
pub fn staircase_residual(i: &Rational, steps: i64) -> Result<Rational> {
    let half = staircase(&rat(1, 2), steps)?;
    let phi = staircase(i, steps)?;
    half.lhom(&phi, TNorm::Minimum).eval(&Ext::PosInf)
}

/// The `i` values of the staircase probe.
pub fn staircase_points() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 4), rat(49, 100)]
}

pub const STAIRCASE_STEPS: i64 = 8;

pub fn delta_condition_d_probe(phi: &[StepFunction], tnorm: TNorm) -> Result<DeltaProbe> {
    if !up_directed(phi, |a, b| a.le(b)) {
        return Err(Error::NotLawful("family is not up-directed".into()));
    }
    let sup = phi.iter().fold(StepFunction::bottom(), |acc, f| acc.join(f));
    let lhs = phi.iter().fold(StepFunction::bottom(), |acc, f| acc.join(&sup.lhom(f, tnorm)));
    let equals_unit = lhs == StepFunction::unit();
    if !equals_unit {
        return Err(Error::SelfCheck(format!("finite up-directed family gives {lhs} instead of the unit")));
    }
    let staircase = match tnorm {
        TNorm::Minimum => staircase_points()
            .into_iter()
            .map(|i| staircase_residual(&i, STAIRCASE_STEPS).map(|v| (i, v)))
            .collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    Ok(DeltaProbe { sup, lhs, equals_unit, staircase })
}

// ---------------------------------------------------------------------------
// Built-in counterexamples

/// One exact check of a regression.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { name: name.into(), pass: expected == actual, expected, actual }
}

/// The Sierpiński space as a normalised modular Lawvere convergence space,
/// with `d(⊥) = 2`, `d(⊤) = 0`, `J(⊥,*) = 0`, `J(⊤,*) = 1`.
pub fn sierpinski_instance() -> Result<(EvtQuantaleInstance, PSpace)> {
    let q = Quantale::Lawvere;
    let a = FiniteSet::new("A", ["bot", "top"])?;
    // Closure: cl{bot} = {bot, top}, cl{top} = {top}.
    let cl = |s: usize| if s & 1 == 1 { 0b11 } else { s };
    let delta = PSpace::from_fn(q, &a, DEFAULT_POWERSET_CAP, |s, x| {
        if cl(s) >> x & 1 == 1 {
            QValue::int(0)
        } else {
            QValue::inf()
        }
    })?;
    let conv = to_convergence(&delta, DEFAULT_POWERSET_CAP)?;
    let space = normalise(&Structure::Convergence(conv))?;
    let star = FiniteSet::new("B", ["*"])?;
    let j = VRel::new(q, a.clone(), star.clone(), vec![QValue::int(0), QValue::int(1)])?;
    let j = VProf::new(j, space.cat().clone(), VCat::discrete(q, &star))?;
    if !j.is_bimodule() {
        return Err(Error::SelfCheck("relation of the example is not a profunctor".into()));
    }
    let inst = EvtQuantaleInstance { seed: 0, trial: 0, quantale: q, a: space, j, d: vec![QValue::int(2), QValue::int(0)] };
    Ok((inst, delta))
}

/// Rebuilds both counterexamples and compares every quantity exactly.
pub fn regression_counterexamples() -> Result<Vec<Check>> {
    let (inst, delta) = sierpinski_instance()?;
    let q = inst.quantale;
    let space = CanonicalSpace::new(q, Variance::Lhom);
    let dg = evt_diagnose(&inst)?;
    let mut out = vec![
        check("l(*)", "1", &dg.extension[0]),
        check("Beck-Chevalley gap", "1", &dg.bc.gaps[0]),
        check("Beck-Chevalley holds", false, dg.bc.holds),
        check("J U-compact", true, dg.u_compact),
        check("J discrete (condition a)", false, dg.discrete),
        check("fiber up-directed (condition c)", true, dg.directed.iter().all(|&b| b)),
        check("condition d", true, dg.condition_d.iter().all(|&b| b)),
        check("d non-expansive", true, functor_into_witness(&inst.d, inst.a.cat(), &space.target()).is_none()),
        check("d continuous (convergence)", true, canonical_morphism_witness(&inst.d, &inst.a, &space)?.is_none()),
    ];
    let closure_space = ModularSpace::new(inst.a.cat().clone(), Structure::Closure(delta))?;
    out.push(check(
        "d continuous (point-set distance)",
        true,
        canonical_morphism_witness(&inst.d, &closure_space, &space)?.is_none(),
    ));
    for (i, v) in staircase_points().into_iter().map(|i| staircase_residual(&i, STAIRCASE_STEPS).map(|v| (i, v))).collect::<Result<Vec<_>>>()? {
        out.push(Check {
            name: format!("Δ_min residual at ∞ for i = {i}"),
            expected: format!("≤ {i} and < 1"),
            actual: v.to_string(),
            pass: v <= i && v < Rational::one(),
        });
    }
    Ok(out)
}
