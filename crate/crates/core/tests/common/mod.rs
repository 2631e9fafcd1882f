//! Test-side samplers and brute-force oracles. Nothing here calls the
//! library's own generators, so the checks stay independent of them.
#![allow(dead_code)]

use qkan::{Ext, QValue, Quantale, Rational, StepFunction, TNorm};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn levels() -> Vec<Rational> {
    vec![r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(3, 4), r(1, 1)]
}

/// Thresholds are multiples of 1/2 in `[0,2]`.
pub fn thresholds() -> Vec<Rational> {
    (0..=4).map(|k| r(k, 2)).collect()
}

pub fn random_step<R: Rng>(rng: &mut R, max_jumps: usize) -> StepFunction {
    let n = rng.gen_range(0..=max_jumps);
    let raw: Vec<_> = (0..n)
        .map(|_| (thresholds().choose(rng).unwrap().clone(), levels().choose(rng).unwrap().clone()))
        .collect();
    StepFunction::normalize(raw).unwrap()
}

pub fn random_value<R: Rng>(q: Quantale, rng: &mut R) -> QValue {
    match q {
        Quantale::Bool2 => QValue::Bool(rng.gen()),
        Quantale::Lawvere => ["0", "1/2", "1", "2", "3", "inf"]
            .choose(rng)
            .map(|s| q.parse_value(s).unwrap())
            .unwrap(),
        Quantale::ExtendedReal => ["-inf", "-2", "-1/2", "0", "1", "3", "inf"]
            .choose(rng)
            .map(|s| q.parse_value(s).unwrap())
            .unwrap(),
        Quantale::UnitInterval(_) => ["0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"]
            .choose(rng)
            .map(|s| q.parse_value(s).unwrap())
            .unwrap(),
        Quantale::Delta(_) => {
            if rng.gen_bool(0.1) {
                if rng.gen() {
                    q.bottom()
                } else {
                    q.unit()
                }
            } else {
                QValue::Step(random_step(rng, 4))
            }
        }
    }
}

fn tn(t: TNorm, a: &Rational, b: &Rational) -> Rational {
    match t {
        TNorm::Product => a * b,
        TNorm::Minimum => a.clone().min(b.clone()),
        TNorm::Lukasiewicz => (&(a + b) - &Rational::one()).max(Rational::zero()),
    }
}

/// Residual of a t-norm found by its defining supremum over a fine grid of
/// candidates together with the closed forms that can occur.
fn tn_res(t: TNorm, a: &Rational, b: &Rational) -> Rational {
    let mut cands = vec![Rational::one(), b.clone(), &(&Rational::one() - a) + b];
    if !a.is_zero() {
        cands.push(b / a);
    }
    cands
        .into_iter()
        .filter(|c| !c.is_negative() && *c <= Rational::one())
        .filter(|c| tn(t, a, c) <= *b)
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Direct evaluation of a step function from its jump list.
pub fn ev(f: &StepFunction, t: &Rational) -> Rational {
    let mut v = Rational::zero();
    for (u, p) in f.jumps() {
        if u < t && *p > v {
            v = p.clone();
        }
    }
    v
}

fn grid(upto: i64, denom: i64) -> Vec<Rational> {
    (0..=upto * denom).map(|k| r(k, denom)).collect()
}

/// Evaluation points: multiples of 1/8 and odd multiples of 1/16 in `[0,4]`.
pub fn probe_points() -> Vec<Rational> {
    grid(4, 16)
}

/// `(φ⊗ψ)(t) = sup_{r+s≤t} φ(r) & ψ(s)` with `r` on a 1/64 grid.
pub fn conv_oracle(f: &StepFunction, g: &StepFunction, t: TNorm, at: &Rational) -> Rational {
    let mut best = Rational::zero();
    for x in grid(5, 64).into_iter().filter(|x| x <= at) {
        let v = tn(t, &ev(f, &x), &ev(g, &(at - &x)));
        if v > best {
            best = v;
        }
    }
    best
}

/// `ψ(t) = sup_{s<t} inf_r φ(r) ⊸ χ(r+s)` with `s` on a 1/8 grid and `r`
/// on a 1/32 grid. Points beyond the last threshold stand in for infinity.
pub fn residual_oracle(f: &StepFunction, chi: &StepFunction, t: TNorm) -> impl Fn(&Rational) -> Rational {
    let ss = grid(4, 8);
    let rs = grid(4, 32);
    let g: Vec<(Rational, Rational)> = ss
        .iter()
        .map(|s| {
            let inf = rs
                .iter()
                .map(|x| tn_res(t, &ev(f, x), &ev(chi, &(x + s))))
                .min()
                .unwrap();
            (s.clone(), inf)
        })
        .collect();
    move |at: &Rational| {
        g.iter()
            .filter(|(s, _)| s < at)
            .map(|(_, v)| v.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

pub fn ext(v: &QValue) -> &Ext {
    v.as_ext().unwrap()
}

pub fn random_rel<R: Rng>(q: Quantale, rng: &mut R, a: &qkan::FiniteSet, b: &qkan::FiniteSet) -> qkan::VRel {
    let entries = (0..a.len() * b.len()).map(|_| random_value(q, rng)).collect();
    qkan::VRel::new(q, a.clone(), b.clone(), entries).unwrap()
}

pub fn random_bool_rel<R: Rng>(rng: &mut R, a: &qkan::FiniteSet, b: &qkan::FiniteSet, p: f64) -> qkan::VRel {
    let entries = (0..a.len() * b.len()).map(|_| QValue::Bool(rng.gen_bool(p))).collect();
    qkan::VRel::new(Quantale::Bool2, a.clone(), b.clone(), entries).unwrap()
}

pub fn random_map<R: Rng>(rng: &mut R, a: &qkan::FiniteSet, b: &qkan::FiniteSet) -> qkan::SetMap {
    let table = (0..a.len()).map(|_| rng.gen_range(0..b.len())).collect();
    qkan::SetMap::new(a.clone(), b.clone(), table).unwrap()
}

pub fn set(name: &str, n: usize) -> qkan::FiniteSet {
    qkan::FiniteSet::range(name, n)
}

/// Entrywise `sup_y J(x,y) ⊗ H(y,z)` through the public scalar API.
pub fn compose_oracle(j: &qkan::VRel, h: &qkan::VRel) -> Vec<QValue> {
    let q = j.quantale();
    let mut out = Vec::new();
    for x in 0..j.source().len() {
        for z in 0..h.target().len() {
            let terms: Vec<QValue> = (0..j.target().len()).map(|y| q.tensor(j.get(x, y), h.get(y, z)).unwrap()).collect();
            out.push(q.join_all(terms.iter()).unwrap());
        }
    }
    out
}

/// `J ≤ K` entrywise through the public scalar API.
pub fn le_oracle(j: &qkan::VRel, k: &qkan::VRel) -> bool {
    let q = j.quantale();
    j.entries().iter().zip(k.entries()).all(|(a, b)| q.le(a, b).unwrap())
}

/// Reflexive-transitive closure of `R ∨ 1` by iterated self-composition.
/// Negative cycles over the extended reals never stabilise; those fall back
/// to the discrete category.
pub fn cat_closure(r: &qkan::VRel) -> qkan::VCat {
    let q = r.quantale();
    let mut h = r.join(&qkan::VRel::identity(q, r.source())).unwrap();
    for _ in 0..16 {
        let next = h.join(&qkan::VRel::from_fn(q, r.source(), r.source(), |x, z| {
            let terms: Vec<QValue> = (0..r.source().len()).map(|y| q.tensor(h.get(x, y), h.get(y, z)).unwrap()).collect();
            q.join_all(terms.iter()).unwrap()
        }).unwrap()).unwrap();
        if next == h {
            return qkan::VCat::lawful(h).unwrap();
        }
        h = next;
    }
    qkan::VCat::discrete(q, r.source())
}

pub fn random_cat<R: Rng>(q: Quantale, rng: &mut R, a: &qkan::FiniteSet) -> qkan::VCat {
    random_cat_with(q, rng, a, |rng| random_value(q, rng))
}

pub fn random_cat_with<R: Rng>(
    q: Quantale,
    rng: &mut R,
    a: &qkan::FiniteSet,
    mut value: impl FnMut(&mut R) -> QValue,
) -> qkan::VCat {
    // Sparse generators keep the closure away from the all-top category.
    let mut g = qkan::VRel::bottom(q, a, a);
    for x in 0..a.len() {
        for y in 0..a.len() {
            if rng.gen_bool(0.35) {
                g.set(x, y, value(rng)).unwrap();
            }
        }
    }
    cat_closure(&g)
}

pub fn random_rel_with<R: Rng>(
    q: Quantale,
    rng: &mut R,
    a: &qkan::FiniteSet,
    b: &qkan::FiniteSet,
    mut value: impl FnMut(&mut R) -> QValue,
) -> qkan::VRel {
    let entries = (0..a.len() * b.len()).map(|_| value(rng)).collect();
    qkan::VRel::new(q, a.clone(), b.clone(), entries).unwrap()
}

/// The finite sub-V-category of `V_⊸` on the given values.
pub fn lhom_cat(q: Quantale, values: &[QValue]) -> qkan::VCat {
    let s = set("M", values.len());
    qkan::VCat::lawful(qkan::VRel::from_fn(q, &s, &s, |a, b| q.lhom(&values[a], &values[b]).unwrap()).unwrap()).unwrap()
}

/// Meet of a category with the hom pulled back along `d`, making `d` a functor.
pub fn pulled_cat(a: &qkan::VCat, m: &qkan::VCat, d: &[usize]) -> qkan::VCat {
    let q = a.quantale();
    let h = qkan::VRel::from_fn(q, a.carrier(), a.carrier(), |x, y| q.meet(a.get(x, y), m.get(d[x], d[y])).unwrap()).unwrap();
    qkan::VCat::lawful(h).unwrap()
}

/// `Ā∘J∘B̄`, the smallest profunctor above `J`.
pub fn repair(j: &qkan::VRel, a: &qkan::VCat, b: &qkan::VCat) -> qkan::VProf {
    let rel = qkan::VRel::new(j.quantale(), j.source().clone(), j.target().clone(), compose_oracle(&qkan::VRel::new(j.quantale(), a.carrier().clone(), j.target().clone(), compose_oracle(a.hom(), j)).unwrap(), b.hom())).unwrap();
    qkan::VProf::new(rel, a.clone(), b.clone()).unwrap()
}

/// Quarter grid of the unit interval, closed under the minimum and
/// Łukasiewicz operations.
pub fn quarter_grid() -> Vec<QValue> {
    (0..=4).map(|k| QValue::Unit(r(k, 4))).collect()
}

pub fn bits(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

/// Closed sets of a random finite closure space: a random family closed
/// under intersections, optionally under finite unions as well.
pub fn random_closed<R: Rng>(rng: &mut R, n: usize, topological: bool) -> Vec<usize> {
    let full = (1usize << n) - 1;
    let mut fam = vec![full];
    if topological {
        fam.push(0);
    }
    for _ in 0..rng.gen_range(0..=n + 1) {
        fam.push(rng.gen_range(0..=full));
    }
    loop {
        let before = fam.len();
        for i in 0..fam.len() {
            for j in 0..fam.len() {
                for c in [fam[i] & fam[j], if topological { fam[i] | fam[j] } else { fam[i] & fam[j] }] {
                    if !fam.contains(&c) {
                        fam.push(c);
                    }
                }
            }
        }
        if fam.len() == before {
            break;
        }
    }
    fam.sort();
    fam.dedup();
    fam
}

pub fn cl(closed: &[usize], full: usize, s: usize) -> usize {
    closed.iter().copied().filter(|c| s & !c == 0).fold(full, |m, c| m & c)
}

pub fn space_of(a: &qkan::FiniteSet, closed: &[usize]) -> qkan::topology::PSpace {
    let full = (1usize << a.len()) - 1;
    qkan::topology::PSpace::from_closure(a, qkan::topology::DEFAULT_POWERSET_CAP, |s| cl(closed, full, s)).unwrap()
}

pub fn image(j: &qkan::VRel, s: usize) -> usize {
    (0..j.target().len()).filter(|&y| bits(s).any(|x| *j.get(x, y) == QValue::Bool(true))).fold(0, |m, y| m | 1 << y)
}

pub fn preimage(j: &qkan::VRel, o: usize) -> usize {
    (0..j.source().len()).filter(|&x| bits(o).any(|y| *j.get(x, y) == QValue::Bool(true))).fold(0, |m, x| m | 1 << x)
}
