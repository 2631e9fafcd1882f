//! Kan extensions of a value assignment along a profunctor, into the
//! quantale itself (closed form) and into a finite category (by search),
//! followed by the Beck–Chevalley check.

use qkan::enriched::{bc_check, bc_check_canonical, kan_finite_search, kan_into_canonical, kan_verify_canonical};
use qkan::{CanonicalTarget, Direction, FiniteSet, QValue, Quantale, Result, SetMap, VCat, VProf, VRel, Variance};

fn main() -> Result<()> {
    let q = Quantale::Lawvere;
    let a = FiniteSet::new("A", ["a0", "a1", "a2"])?;
    let b = FiniteSet::new("B", ["b0", "b1"])?;
    let ca = VCat::lawful(VRel::from_fn(q, &a, &a, |x, y| QValue::int((x as i64 - y as i64).abs()))?)?;
    let cb = VCat::discrete(q, &b);
    let j = VProf::repaired(
        VRel::from_fn(q, &a, &b, |x, y| if y == 0 { QValue::int(x as i64) } else { QValue::int(2 - x as i64) })?,
        ca.clone(),
        cb.clone(),
    )?;

    // d must be a functor into V_⊸ on A: |d x - d y| ≤ A(x,y) in Lawvere
    let d = [QValue::int(1), QValue::int(2), QValue::int(2)];
    let l = kan_into_canonical(Direction::Left, Variance::Lhom, &d, &j)?;
    println!("left extension into V_⊸: {}", l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    let target = CanonicalTarget::new(q, Variance::Lhom);
    assert!(kan_verify_canonical(Direction::Left, &l, &d, &j, &target)?.is_none());
    let bc = bc_check_canonical(Direction::Left, &l, &d, &j, &target)?;
    println!("Beck–Chevalley: holds={} gaps={:?}", bc.holds, bc.gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>());

    // into a finite chain 0 → 1 → 2 → 3 with Lawvere distances
    let m = VCat::lawful(VRel::from_fn(q, &FiniteSet::range("M", 4), &FiniteSet::range("M", 4), |x, y| {
        QValue::int((y as i64 - x as i64).max(0))
    })?)?;
    let dm = SetMap::new(a.clone(), m.carrier().clone(), vec![1, 2, 2])?;
    for dir in [Direction::Left, Direction::Right] {
        let (dom, vals) = match dir {
            Direction::Left => ("A", dm.table().to_vec()),
            Direction::Right => ("B", vec![0, 3]),
        };
        match kan_finite_search(dir, &vals, &j, &m)? {
            Some(ext) => {
                let bc = bc_check(dir, &ext, &vals, &j, &m)?;
                println!("{dir:?} extension of a map on {dom} into M: {ext:?}, Beck–Chevalley holds={}", bc.holds);
            }
            None => println!("{dir:?} extension of a map on {dom} into M: none exists"),
        }
    }
    Ok(())
}
