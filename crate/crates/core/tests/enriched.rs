mod common;

use common::*;
use proptest::prelude::*;
use qkan::enriched::{
    bc_check, bc_check_canonical, functor_into_witness, functor_witness, kan_finite_search, kan_into_canonical,
    kan_verify, kan_verify_canonical,
};
use qkan::topology::powerset::DEFAULT_POWERSET_CAP;
use qkan::topology::Monad;
use qkan::{CanonicalTarget, Direction, QValue, Quantale, SetMap, TNorm, VCat, VProf, VRel, Variance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Quantales with a finite sub-V-category of `V_⊸` closed under the
/// operations the closed forms need.
fn closed_family() -> impl Strategy<Value = (Quantale, Vec<QValue>)> {
    proptest::sample::select(vec![
        (Quantale::Bool2, vec![QValue::Bool(false), QValue::Bool(true)]),
        (Quantale::UnitInterval(TNorm::Minimum), quarter_grid()),
        (Quantale::UnitInterval(TNorm::Lukasiewicz), quarter_grid()),
    ])
}

fn family() -> impl Strategy<Value = Quantale> {
    proptest::sample::select(Quantale::all())
}

struct KanCase {
    q: Quantale,
    m: VCat,
    values: Vec<QValue>,
    d: Vec<usize>,
    j: VProf,
}

/// `d : dom → M` along `J`, where `dom` is `A` for left and `B` for right extensions.
fn kan_case(q: Quantale, values: Vec<QValue>, dir: Direction, seed: u64) -> KanCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = lhom_cat(q, &values);
    let (a, b) = (set("A", rng.gen_range(1..=3)), set("B", rng.gen_range(1..=3)));
    let dom = if dir == Direction::Left { &a } else { &b };
    let d: Vec<usize> = (0..dom.len()).map(|_| rng.gen_range(0..values.len())).collect();
    let pick = |rng: &mut ChaCha8Rng| values[rng.gen_range(0..values.len())].clone();
    let (ra, rb) = (random_cat_with(q, &mut rng, &a, pick), random_cat_with(q, &mut rng, &b, pick));
    let (ca, cb) = match dir {
        Direction::Left => (pulled_cat(&ra, &m, &d), rb),
        Direction::Right => (ra, pulled_cat(&rb, &m, &d)),
    };
    let j = repair(&random_rel_with(q, &mut rng, &a, &b, pick), &ca, &cb);
    KanCase { q, m, values, d, j }
}

/// Closed forms computed with scalar operations only.
fn closed_form(c: &KanCase, dir: Direction) -> Vec<QValue> {
    let q = c.q;
    let (n, m) = (c.j.source.carrier().len(), c.j.target.carrier().len());
    let dv = |i: usize| c.values[c.d[i]].clone();
    match dir {
        Direction::Left => (0..m)
            .map(|y| {
                let t: Vec<QValue> = (0..n).map(|x| q.tensor(&dv(x), c.j.get(x, y)).unwrap()).collect();
                q.join_all(t.iter()).unwrap()
            })
            .collect(),
        Direction::Right => (0..n)
            .map(|x| {
                let t: Vec<QValue> = (0..m).map(|y| q.lhom(c.j.get(x, y), &dv(y)).unwrap()).collect();
                q.meet_all(t.iter()).unwrap()
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn finite_search_matches_closed_form((q, values) in closed_family(), left in any::<bool>(), seed in any::<u64>()) {
        let dir = if left { Direction::Left } else { Direction::Right };
        let c = kan_case(q, values, dir, seed);
        let found = kan_finite_search(dir, &c.d, &c.j, &c.m).unwrap().expect("closed sub-category has the extension");
        let got: Vec<QValue> = found.iter().map(|&i| c.values[i].clone()).collect();
        prop_assert_eq!(&got, &closed_form(&c, dir));
        let dvals: Vec<QValue> = c.d.iter().map(|&i| c.values[i].clone()).collect();
        prop_assert_eq!(kan_into_canonical(dir, Variance::Lhom, &dvals, &c.j).unwrap(), got);
        prop_assert!(kan_verify(dir, &found, &c.d, &c.j, &c.m).unwrap().is_none());
    }

    #[test]
    fn accepted_candidates_share_their_profile(q in proptest::sample::select(vec![Quantale::Bool2, Quantale::UnitInterval(TNorm::Minimum)]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms = set("M", rng.gen_range(1..=4));
        let m = random_cat(q, &mut rng, &ms);
        let (a, b) = (set("A", rng.gen_range(1..=2)), set("B", 2));
        let d: Vec<usize> = (0..a.len()).map(|_| rng.gen_range(0..ms.len())).collect();
        let ca = pulled_cat(&random_cat(q, &mut rng, &a), &m, &d);
        let j = repair(&random_rel(q, &mut rng, &a, &b), &ca, &VCat::discrete(q, &b));
        let mut accepted = Vec::new();
        for c0 in 0..ms.len() {
            for c1 in 0..ms.len() {
                if kan_verify(Direction::Left, &[c0, c1], &d, &j, &m).unwrap().is_none() {
                    accepted.push([c0, c1]);
                }
            }
        }
        prop_assert_eq!(kan_finite_search(Direction::Left, &d, &j, &m).unwrap().is_some(), !accepted.is_empty());
        for w in accepted.windows(2) {
            for (i, _) in w[0].iter().enumerate() {
                prop_assert_eq!(m.hom().row(w[0][i]), m.hom().row(w[1][i]));
            }
        }
    }

    #[test]
    fn canonical_extension_is_a_functor(q in family(), left in any::<bool>(), rhom in any::<bool>(), seed in any::<u64>()) {
        let dir = if left { Direction::Left } else { Direction::Right };
        let variance = if rhom { Variance::Rhom } else { Variance::Lhom };
        let target = CanonicalTarget::new(q, variance);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (set("A", rng.gen_range(0..=3)), set("B", rng.gen_range(0..=3)));
        let dom = if left { &a } else { &b };
        let d: Vec<QValue> = (0..dom.len()).map(|_| random_value(q, &mut rng)).collect();
        // Make d a functor into the target by meeting the domain with its pullback.
        let pull = |s: &qkan::FiniteSet, c: VCat| {
            let h = VRel::from_fn(q, s, s, |x, y| {
                let v = match variance { Variance::Lhom => q.lhom(&d[x], &d[y]), Variance::Rhom => q.rhom(&d[x], &d[y]) };
                q.meet(c.get(x, y), &v.unwrap()).unwrap()
            }).unwrap();
            VCat::lawful(h).unwrap()
        };
        let (ca, cb) = if left {
            (pull(&a, random_cat(q, &mut rng, &a)), random_cat(q, &mut rng, &b))
        } else {
            (random_cat(q, &mut rng, &a), pull(&b, random_cat(q, &mut rng, &b)))
        };
        let j = repair(&random_rel(q, &mut rng, &a, &b), &ca, &cb);
        let ext = kan_into_canonical(dir, variance, &d, &j).unwrap();
        let cod = if left { &cb } else { &ca };
        prop_assert!(functor_into_witness(&ext, cod, &target).is_none());
        prop_assert!(kan_verify_canonical(dir, &ext, &d, &j, &target).unwrap().is_none());
        // Any change of a single value breaks the defining equation.
        if let Some(i) = (0..ext.len()).next() {
            let mut bad = ext.clone();
            bad[i] = if ext[i] == q.top() { q.bottom() } else { q.top() };
            prop_assert!(kan_verify_canonical(dir, &bad, &d, &j, &target).unwrap().is_some());
        }
    }

    #[test]
    fn beck_chevalley_is_the_factorisation_property((q, values) in closed_family(), seed in any::<u64>()) {
        let c = kan_case(q, values, Direction::Left, seed);
        let l = kan_finite_search(Direction::Left, &c.d, &c.j, &c.m).unwrap().unwrap();
        let bc = bc_check(Direction::Left, &l, &c.d, &c.j, &c.m).unwrap();
        let (na, nb, nm) = (c.j.source.carrier().len(), c.j.target.carrier().len(), c.m.carrier().len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        if bc.holds {
            // Cells J∘H ≤ M(d, id) factor as H ≤ M(l, id), for H : B ⇸ M.
            for _ in 0..20 {
                let h = random_rel_with(q, &mut rng, c.j.target.carrier(), c.m.carrier(), |rng| c.values[rng.gen_range(0..c.values.len())].clone());
                let cell = (0..na).all(|x| (0..nm).all(|z| {
                    let t: Vec<QValue> = (0..nb).map(|y| q.tensor(c.j.get(x, y), h.get(y, z)).unwrap()).collect();
                    q.le(&q.join_all(t.iter()).unwrap(), c.m.get(c.d[x], z)).unwrap()
                }));
                let factors = (0..nb).all(|y| (0..nm).all(|z| q.le(h.get(y, z), c.m.get(l[y], z)).unwrap()));
                prop_assert!(!cell || factors);
            }
        } else {
            // K = d^*∘J, H = B̄: the cell exists and does not factor.
            let k = |mm: usize, y: usize| {
                let t: Vec<QValue> = (0..na).map(|x| q.tensor(c.m.get(mm, c.d[x]), c.j.get(x, y)).unwrap()).collect();
                q.join_all(t.iter()).unwrap()
            };
            let cell = (0..na).all(|x| (0..nb).all(|y| q.le(c.j.get(x, y), &k(c.d[x], y)).unwrap()));
            let factors = (0..nb).all(|y| (0..nb).all(|y2| q.le(c.j.target.get(y, y2), &k(l[y], y2)).unwrap()));
            prop_assert!(cell);
            prop_assert!(!factors);
        }
    }

    #[test]
    fn beck_chevalley_in_preorders_means_attained_suprema(seed in any::<u64>()) {
        let q = Quantale::Bool2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms = set("M", rng.gen_range(1..=4));
        let m = random_cat(q, &mut rng, &ms);
        let (a, b) = (set("A", rng.gen_range(1..=3)), set("B", rng.gen_range(1..=3)));
        let d: Vec<usize> = (0..a.len()).map(|_| rng.gen_range(0..ms.len())).collect();
        let ca = pulled_cat(&random_cat(q, &mut rng, &a), &m, &d);
        let j = repair(&random_bool_rel(&mut rng, &a, &b, 0.5), &ca, &random_cat(q, &mut rng, &b));
        if let Some(l) = kan_finite_search(Direction::Left, &d, &j, &m).unwrap() {
            let t = QValue::Bool(true);
            let iso = |u: usize, v: usize| *m.get(u, v) == t && *m.get(v, u) == t;
            let attained = (0..b.len()).all(|y| (0..a.len()).any(|x| *j.get(x, y) == t && iso(d[x], l[y])));
            prop_assert_eq!(bc_check(Direction::Left, &l, &d, &j, &m).unwrap().holds, attained);
        }
    }

    #[test]
    fn powerset_image_of_a_beck_chevalley_extension((q, values) in closed_family(), seed in any::<u64>()) {
        let c = kan_case(q, values, Direction::Left, seed);
        let l = kan_finite_search(Direction::Left, &c.d, &c.j, &c.m).unwrap().unwrap();
        let bc = bc_check(Direction::Left, &l, &c.d, &c.j, &c.m).unwrap();
        let ms = c.m.carrier();
        let (a, b) = (c.j.source.carrier(), c.j.target.carrier());
        let dmap = SetMap::new(a.clone(), ms.clone(), c.d.clone()).unwrap();
        let lmap = SetMap::new(b.clone(), ms.clone(), l.clone()).unwrap();
        // d^*(m, x) = M(m, dx)
        let d_up = c.m.hom().restrict(&SetMap::identity(ms), &dmap).unwrap();
        let p = |r: &VRel| Monad::P.extend(r, DEFAULT_POWERSET_CAP).unwrap();
        let premise = p(&d_up).compose(&p(&c.j.rel)).unwrap() == p(&d_up.compose(&c.j.rel).unwrap());
        if bc.holds && premise {
            let pcat = |cat: &VCat| VCat::lawful(p(cat.hom())).unwrap();
            let (pa, pb, pm) = (pcat(&c.j.source), pcat(&c.j.target), pcat(&c.m));
            let pj = VProf::new(p(&c.j.rel), pa, pb).unwrap();
            let pd = Monad::P.map(&dmap, DEFAULT_POWERSET_CAP).unwrap();
            let pl = Monad::P.map(&lmap, DEFAULT_POWERSET_CAP).unwrap();
            prop_assert!(kan_verify(Direction::Left, pl.table(), pd.table(), &pj, &pm).unwrap().is_none());
        }
    }
}

#[test]
fn category_and_functor_examples() {
    let law = |s: &str| Quantale::Lawvere.parse_value(s).unwrap();
    let three = set("X", 3);
    assert!(VCat::discrete(Quantale::Lawvere, &three).check().holds());
    let bad = VRel::new(
        Quantale::Lawvere,
        three.clone(),
        three.clone(),
        ["0", "1", "5", "inf", "0", "1", "inf", "inf", "0"].iter().map(|s| law(s)).collect(),
    )
    .unwrap();
    let r = VCat::new(bad).unwrap().check();
    assert_eq!(r.unit_witness, None);
    assert_eq!(r.assoc_witness, Some((0, 1, 2)));
    let two = set("T", 2);
    let t = QValue::Bool(true);
    let order = VRel::new(Quantale::Bool2, two.clone(), two.clone(), vec![t.clone(), t.clone(), QValue::Bool(false), t]).unwrap();
    assert!(VCat::lawful(order).is_ok());

    let id = SetMap::identity(&three);
    let c = VCat::discrete(Quantale::Lawvere, &three);
    assert_eq!(functor_witness(&id, &c, &c).unwrap(), None);

    // d(x) = 2x on the metric pair {0, 1} doubles distances.
    let pair = VCat::lawful(VRel::new(Quantale::Lawvere, two.clone(), two.clone(), vec![law("0"), law("1"), law("1"), law("0")]).unwrap()).unwrap();
    let line = VCat::lawful(
        VRel::from_fn(Quantale::Lawvere, &three, &three, |x, y| QValue::int((x as i64 - y as i64).abs())).unwrap(),
    )
    .unwrap();
    let double = SetMap::new(two.clone(), three.clone(), vec![0, 2]).unwrap();
    assert_eq!(functor_witness(&double, &pair, &line).unwrap(), Some((0, 1)));

    let any = random_rel(Quantale::Lawvere, &mut ChaCha8Rng::seed_from_u64(3), &two, &three);
    assert!(VProf::new(any, VCat::discrete(Quantale::Lawvere, &two), c).unwrap().is_bimodule());
}

#[test]
fn kan_examples() {
    // M = {0 ≤ 1} over Bool2, d constant 1.
    let q = Quantale::Bool2;
    let m = lhom_cat(q, &[QValue::Bool(false), QValue::Bool(true)]);
    let (a, b) = (set("A", 2), set("B", 2));
    let j = VProf::new(
        VRel::constant(q, &a, &b, QValue::Bool(true)).unwrap(),
        VCat::discrete(q, &a),
        VCat::discrete(q, &b),
    )
    .unwrap();
    assert_eq!(kan_finite_search(Direction::Left, &[1, 1], &j, &m).unwrap(), Some(vec![1, 1]));
    // A perturbed candidate is rejected.
    assert!(kan_verify(Direction::Left, &[1, 0], &[1, 1], &j, &m).unwrap().is_some());

    // Empty fibers need a least object; a two-point discrete M has none.
    let disc = VCat::discrete(q, &set("M", 2));
    let empty = VProf::new(VRel::bottom(q, &a, &b), VCat::discrete(q, &a), VCat::discrete(q, &b)).unwrap();
    assert_eq!(kan_finite_search(Direction::Left, &[0, 1], &empty, &disc).unwrap(), None);

    // Identity cell: extending along the identity profunctor returns d and satisfies BC.
    let law = Quantale::Lawvere;
    let ca = VCat::discrete(law, &a);
    let idj = VProf::new(ca.hom().clone(), ca.clone(), ca.clone()).unwrap();
    let d = vec![QValue::int(2), QValue::int(0)];
    let target = CanonicalTarget::new(law, Variance::Lhom);
    let l = kan_into_canonical(Direction::Left, Variance::Lhom, &d, &idj).unwrap();
    assert_eq!(l, d);
    assert!(bc_check_canonical(Direction::Left, &l, &d, &idj, &target).unwrap().holds);
}
