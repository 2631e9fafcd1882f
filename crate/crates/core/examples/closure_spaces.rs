//! Closure-style (`P`) and convergence-style (`U`) structures on a finite
//! set: axioms, the passage between them, modular spaces over a category
//! and cocompleteness.

use qkan::topology::{
    cocomplete_check, modularity_check, normalise, scott_structure, to_closure, to_convergence, CanonicalSpace, Monad,
    ModularSpace, PSpace, Structure, USpace, DEFAULT_POWERSET_CAP,
};
use qkan::{FiniteSet, QValue, Quantale, Result, VCat, VRel, Variance};

fn main() -> Result<()> {
    let q = Quantale::Lawvere;
    let a = FiniteSet::new("A", ["p", "q", "r"])?;
    // points on a line at 0, 1, 3; δ(S,x) is the distance from x to S
    let pos = [0i64, 1, 3];
    let delta = PSpace::from_fn(q, &a, DEFAULT_POWERSET_CAP, |s, x| {
        let d = (0..3).filter(|i| s >> i & 1 == 1).map(|i| (pos[i] - pos[x]).abs()).min();
        d.map_or(QValue::inf(), QValue::int)
    })?;
    println!("distance-to-set δ: {:?}", delta.flags());

    let alpha = to_convergence(&delta, DEFAULT_POWERSET_CAP)?;
    println!("as a convergence α(x,y):");
    for x in 0..3 {
        println!("  {}: {:?}", a.element(x), alpha.rel().row(x).iter().map(|v| v.to_string()).collect::<Vec<_>>());
    }
    let back = to_closure(&alpha, DEFAULT_POWERSET_CAP)?;
    println!("round trip recovers δ: {}", back.rel() == delta.rel());

    // a convergence that is reflexive but not transitive
    let hops = USpace::new(VRel::from_fn(q, &a, &a, |x, y| QValue::int(if x == y { 0 } else if x + 1 == y { 1 } else { 9 }))?)?;
    println!("one-hop convergence: {:?}, first transitivity failure {:?}", hops.flags(), hops.axioms().transitive);

    // modular spaces: the structure is compatible with a category on A
    let m = normalise(&Structure::Closure(delta.clone()))?;
    println!("normalised hom is the metric: {}", m.cat().hom() == alpha.rel());
    let report = modularity_check(m.cat(), m.structure())?;
    println!("modularity: {report:?}");
    println!("cocomplete: {}", cocomplete_check(&m)?.cocomplete);
    let discrete = ModularSpace::new(VCat::discrete(q, &a), Structure::Convergence(USpace::new(VRel::identity(q, &a))?))?;
    println!("discrete modular space is cocomplete: {}", cocomplete_check(&discrete)?.cocomplete);

    // the quantale itself as a space, restricted to a few values
    let canon = CanonicalSpace::new(q, Variance::Lhom);
    let vals = [QValue::int(0), QValue::int(1), QValue::int(3), QValue::inf()];
    let (sub, _) = canon.algebra_subspace(&vals, Monad::U)?;
    println!("{{0,1,3,inf}} ⊆ V_⊸ under U: cocomplete {}", cocomplete_check(&sub)?.cocomplete);

    // Scott opens of the four-element diamond: its downsets
    let b = Quantale::Bool2;
    let l = FiniteSet::new("L", ["bot", "x", "y", "top"])?;
    let le = |i: usize, j: usize| i == 0 || j == 3 || i == j;
    let diamond = VCat::lawful(VRel::from_fn(b, &l, &l, |i, j| QValue::Bool(le(i, j)))?)?;
    let scott = scott_structure(&diamond)?;
    println!("Scott opens of the diamond (bitmasks): {:?}", scott.opens);
    Ok(())
}
