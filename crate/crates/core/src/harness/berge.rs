//! Classical maximum theorem on finite topological spaces.

use rand::Rng;

use super::gen::{random_carrier, random_rel, random_topology, trial_rng, GeneratorConfig};
use super::report::VerificationReport;
use crate::continuity::{classical_open_equiv, closed_sets, closure_from_closed, is_continuous, open_closed_check, open_sets, Kind};
use crate::error::{Error, Result};
use crate::quantale::{Ext, QValue, Quantale};
use crate::relation::{FiniteSet, VRel};
use crate::topology::powerset::members;
use crate::topology::{PSpace, Structure};

/// `J : A ⇸ B` between finite topological spaces and an objective `e` on `B`.
#[derive(Clone, Debug)]
pub struct BergeInstance {
    pub seed: u64,
    pub trial: u64,
    pub a: PSpace,
    pub b: PSpace,
    pub j: VRel,
    pub e: Vec<Ext>,
}

/// Topology on `n` points as a disjoint sum of random topologies on blocks.
fn random_sum_topology(rng: &mut impl Rng, set: &FiniteSet) -> Result<PSpace> {
    let n = set.len();
    let blocks = rng.gen_range(1..=n.min(3));
    let owner: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    let mut fam = vec![0usize];
    for b in 0..blocks {
        let pts: Vec<usize> = (0..n).filter(|&x| owner[x] == b).collect();
        if pts.is_empty() {
            continue;
        }
        let local = random_topology(rng, pts.len());
        let spread = |m: usize| members(m).fold(0, |acc, i| acc | 1 << pts[i]);
        let mut next = Vec::new();
        for &c in &fam {
            for &l in &local {
                next.push(c | spread(l));
            }
        }
        fam = next;
    }
    closure_from_closed(set, &fam)
}

/// Points that no clopen set separates.
fn clopen_classes(p: &PSpace) -> Vec<usize> {
    let n = p.carrier().len();
    let closed = closed_sets(p);
    let full = (1usize << n) - 1;
    let clopen: Vec<usize> = closed.iter().copied().filter(|c| closed.contains(&(full & !c))).collect();
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        for (y, slot) in class.iter_mut().enumerate().skip(x) {
            if clopen.iter().all(|c| (c >> x & 1) == (c >> y & 1)) {
                *slot = next;
            }
        }
        next += 1;
    }
    class
}

fn objective_value(rng: &mut impl Rng) -> Ext {
    match rng.gen_range(0..12) {
        0 => Ext::NegInf,
        1 => Ext::PosInf,
        k => Ext::ratio(k as i64 - 6, 2),
    }
}

pub fn gen_berge(cfg: &GeneratorConfig, trial: u64) -> Result<BergeInstance> {
    let mut rng = trial_rng(cfg.seed.wrapping_mul(31).wrapping_add(17), trial);
    let aset = random_carrier(&mut rng, "a", cfg.max_size);
    let bset = random_carrier(&mut rng, "b", cfg.max_size);
    let a = random_sum_topology(&mut rng, &aset)?;
    let b = random_sum_topology(&mut rng, &bset)?;
    let sparsity = rng.gen_range(0.0..0.7);
    let j = random_rel(&mut rng, Quantale::Bool2, &aset, &bset, sparsity);
    let e = if rng.gen_bool(0.8) {
        let class = clopen_classes(&b);
        let vals: Vec<Ext> = (0..bset.len()).map(|_| objective_value(&mut rng)).collect();
        class.iter().map(|&c| vals[c].clone()).collect()
    } else {
        (0..bset.len()).map(|_| objective_value(&mut rng)).collect()
    };
    Ok(BergeInstance { seed: cfg.seed, trial, a, b, j, e })
}

/// `{x : Jx ∩ S ≠ ∅}`.
fn lower_inverse(j: &VRel, s: usize) -> usize {
    let t = QValue::Bool(true);
    (0..j.source().len()).filter(|&x| members(s).any(|y| *j.get(x, y) == t)).fold(0, |m, x| m | 1 << x)
}

/// `m(x) = max_{y ∈ Jx} e(y)`.
pub fn optimised(j: &VRel, e: &[Ext]) -> Vec<Ext> {
    let t = QValue::Bool(true);
    (0..j.source().len())
        .map(|x| (0..e.len()).filter(|&y| *j.get(x, y) == t).map(|y| e[y].clone()).max().unwrap_or(Ext::NegInf))
        .collect()
}

fn run(inst: &BergeInstance, r: &mut VerificationReport) -> Result<()> {
    let (a, b, j) = (&inst.a, &inst.b, &inst.j);
    let (sa, sb) = (Structure::Closure(a.clone()), Structure::Closure(b.clone()));
    let lower = open_closed_check(Kind::Open, j, &sa, &sb)?.holds;
    let upper = open_closed_check(Kind::Closed, &j.reverse(), &sb, &sa)?.holds;
    // Classical readings of both conditions.
    if classical_open_equiv(j, a, b)?.preimage_open != lower {
        return Err(Error::SelfCheck("lower hemicontinuity disagrees with its classical form".into()));
    }
    let closed_a = closed_sets(a);
    let upper_classical = closed_sets(b).into_iter().all(|c| closed_a.contains(&lower_inverse(j, c)));
    if upper_classical != upper {
        return Err(Error::SelfCheck("upper hemicontinuity disagrees with its classical form".into()));
    }
    let nonempty = (0..a.carrier().len()).all(|x| lower_inverse(j, (1 << b.carrier().len()) - 1) >> x & 1 == 1);
    let _ = r.hypothesis("J lower hemicontinuous", lower)
        && r.hypothesis("J upper hemicontinuous", upper)
        && r.hypothesis("Jx nonempty", nonempty)
        && r.hypothesis("e continuous", is_continuous(&inst.e, b)?)
        && {
            let m = optimised(j, &inst.e);
            let ok = is_continuous(&m, a)?;
            r.conclude(ok, || format!("m = {:?} is not continuous; opens of A = {:?}", m.iter().map(|v| v.to_string()).collect::<Vec<_>>(), open_sets(a)));
            true
        };
    Ok(())
}

pub fn berge_classical(inst: &BergeInstance) -> VerificationReport {
    let mut r = VerificationReport::new("berge", inst.seed, inst.trial, "bool".into(), Some("P".into()));
    if let Err(e) = run(inst, &mut r) {
        r.error(&e);
    }
    r
}
