mod common;

use common::*;
use proptest::prelude::*;
use qkan::{Error, Ext, QValue, Quantale, StepFunction, TNorm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family() -> impl Strategy<Value = Quantale> {
    proptest::sample::select(Quantale::all())
}

fn triple(q: Quantale, seed: u64) -> (QValue, QValue, QValue) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_value(q, &mut rng), random_value(q, &mut rng), random_value(q, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn residuals_are_adjoint(q in family(), seed in any::<u64>()) {
        let (x, y, z) = triple(q, seed);
        let lhs = q.le(&q.tensor(&x, &y).unwrap(), &z).unwrap();
        prop_assert_eq!(lhs, q.le(&y, &q.lhom(&x, &z).unwrap()).unwrap());
        prop_assert_eq!(lhs, q.le(&x, &q.rhom(&z, &y).unwrap()).unwrap());
    }

    #[test]
    fn tensor_is_a_commutative_monoid(q in family(), seed in any::<u64>()) {
        let (x, y, z) = triple(q, seed);
        let t = |a: &QValue, b: &QValue| q.tensor(a, b).unwrap();
        prop_assert_eq!(t(&t(&x, &y), &z), t(&x, &t(&y, &z)));
        prop_assert_eq!(t(&x, &y), t(&y, &x));
        prop_assert_eq!(t(&x, &q.unit()), x.clone());
    }

    #[test]
    fn tensor_preserves_joins(q in family(), seed in any::<u64>()) {
        let (x, y, z) = triple(q, seed);
        let yz = q.join(&y, &z).unwrap();
        let lhs = q.tensor(&x, &yz).unwrap();
        let rhs = q.join(&q.tensor(&x, &y).unwrap(), &q.tensor(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(q.tensor(&x, &q.bottom()).unwrap(), q.bottom());
    }

    #[test]
    fn order_is_a_lattice(q in family(), seed in any::<u64>()) {
        let (x, y, z) = triple(q, seed);
        let le = |a: &QValue, b: &QValue| q.le(a, b).unwrap();
        prop_assert!(le(&x, &x));
        if le(&x, &y) && le(&y, &x) { prop_assert_eq!(&x, &y); }
        if le(&x, &y) && le(&y, &z) { prop_assert!(le(&x, &z)); }
        let j = q.join(&x, &y).unwrap();
        let m = q.meet(&x, &y).unwrap();
        prop_assert!(le(&x, &j) && le(&y, &j));
        prop_assert!(le(&m, &x) && le(&m, &y));
        if le(&x, &z) && le(&y, &z) { prop_assert!(le(&j, &z)); }
        if le(&z, &x) && le(&z, &y) { prop_assert!(le(&z, &m)); }
        prop_assert!(le(&q.bottom(), &x) && le(&x, &q.top()));
    }

    #[test]
    fn literals_round_trip(q in family(), seed in any::<u64>()) {
        let (x, _, _) = triple(q, seed);
        prop_assert_eq!(q.parse_value(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn way_below_is_below_and_approximates(q in family(), seed in any::<u64>()) {
        prop_assume!(q.is_chain());
        let (u, v, w) = triple(q, seed);
        if q.totally_below(&u, &v).unwrap() {
            prop_assert!(q.le(&u, &v).unwrap());
        }
        // v is the least upper bound of the elements way below it: if v is not
        // below w then some u ≪ v is not below w either.
        if !q.le(&v, &w).unwrap() {
            let witness = approximant(q, &v, &w);
            prop_assert!(q.totally_below(&witness, &v).unwrap());
            prop_assert!(!q.le(&witness, &w).unwrap());
        }
    }

    #[test]
    fn delta_convolution_matches_grid(seed in any::<u64>(), t in proptest::sample::select(TNorm::ALL.to_vec())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_step(&mut rng, 4);
        let g = random_step(&mut rng, 4);
        let h = f.tensor(&g, t);
        for p in probe_points() {
            prop_assert_eq!(h.eval_at(&p), conv_oracle(&f, &g, t, &p), "at {}", p);
        }
    }

    #[test]
    fn delta_residual_matches_grid(seed in any::<u64>(), t in proptest::sample::select(TNorm::ALL.to_vec())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_step(&mut rng, 4);
        let chi = random_step(&mut rng, 4);
        let res = f.lhom(&chi, t);
        let oracle = residual_oracle(&f, &chi, t);
        for p in probe_points() {
            prop_assert_eq!(res.eval_at(&p), oracle(&p), "at {}", p);
        }
        prop_assert_eq!(res.top_level(), oracle(&r(4, 1)));
    }
}

/// An element way below `v` but not below `w`, given `v ≰ w` in a chain.
fn approximant(q: Quantale, v: &QValue, w: &QValue) -> QValue {
    match (v, w) {
        (QValue::Bool(_), _) => QValue::Bool(true),
        (QValue::Unit(v), QValue::Unit(w)) => QValue::Unit(&(v + w) / &r(2, 1)),
        (QValue::Real(v), QValue::Real(w)) => QValue::Real(match (v, w) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(&(a + b) / &r(2, 1)),
            (Ext::Fin(a), Ext::PosInf) => Ext::Fin(a + &r(1, 1)),
            (Ext::NegInf, Ext::Fin(b)) => Ext::Fin(b - &r(1, 1)),
            (Ext::NegInf, Ext::PosInf) => Ext::int(0),
            _ => unreachable!("{q}: {v} not below {w}"),
        }),
        _ => unreachable!(),
    }
}

#[test]
fn step_function_examples() {
    let q = Quantale::Delta(TNorm::Minimum);
    let sf = |s: &str| q.parse_value(s).unwrap();
    assert_eq!(
        StepFunction::normalize([(r(2, 1), r(1, 2)), (r(1, 1), r(1, 2))]).unwrap().to_string(),
        "[(1,1/2)]"
    );
    assert_eq!(q.tensor(&sf("[(0,1/2)]"), &sf("[(1,1/4)]")).unwrap(), sf("[(1,1/4)]"));
    let f = sf("[(1,1/2),(2,1)]");
    assert_eq!(f.as_step().unwrap().eval(&Ext::ratio(3, 2)).unwrap(), r(1, 2));
    assert!(q.le(&sf("[(2,1/2)]"), &q.unit()).unwrap());
    assert_eq!(q.unit(), sf("[(0,1)]"));
    assert!(matches!(q.totally_below(&q.unit(), &q.unit()), Err(Error::NotImplemented(_))));
}
