//! Powersets of finite sets, indexed by bitmask.

use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::{FiniteSet, SetMap, VRel};

/// Largest carrier whose powerset is materialised unless a caller says otherwise.
pub const DEFAULT_POWERSET_CAP: usize = 12;

pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 64 {
        Err(Error::SizeCap { size: n, cap })
    } else {
        Ok(())
    }
}

/// Elements of the subset with bitmask `mask`.
pub fn members(mask: usize) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

pub fn contains(mask: usize, x: usize) -> bool {
    mask >> x & 1 == 1
}

pub fn subset_name(set: &FiniteSet, mask: usize) -> String {
    let names: Vec<&str> = members(mask).map(|i| set.element(i)).collect();
    format!("{{{}}}", names.join(","))
}

/// `PA`, with the subset of bitmask `i` as element `i`.
pub fn powerset(set: &FiniteSet, cap: usize) -> Result<FiniteSet> {
    check_cap(set.len(), cap)?;
    FiniteSet::new(format!("P{}", set.name()), (0..1usize << set.len()).map(|m| subset_name(set, m)))
}

/// `(PJ)(S,T) = ⋀_{t∈T} ⋁_{s∈S} J(s,t)`.
pub fn powerset_extend(j: &VRel, cap: usize) -> Result<VRel> {
    let q = j.quantale();
    let (pa, pb) = (powerset(j.source(), cap)?, powerset(j.target(), cap)?);
    let (ns, nt, m) = (pa.len(), pb.len(), j.target().len());
    // col[S*m + t] = ⋁_{s∈S} J(s,t)
    let mut col: Vec<QValue> = Vec::with_capacity(ns * m);
    for s in 0..ns {
        if s == 0 {
            col.extend((0..m).map(|_| q.bottom()));
        } else {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            for t in 0..m {
                let v = q.join_raw(&col[rest * m + t], j.get(low, t));
                col.push(v);
            }
        }
    }
    let mut entries: Vec<QValue> = Vec::with_capacity(ns * nt);
    for s in 0..ns {
        let base = entries.len();
        for t in 0..nt {
            if t == 0 {
                entries.push(q.top());
            } else {
                let low = t.trailing_zeros() as usize;
                let rest = t & (t - 1);
                let v = q.meet_raw(&entries[base + rest], &col[s * m + low]);
                entries.push(v);
            }
        }
    }
    VRel::new(q, pa, pb, entries)
}

/// Direct image `Pf : PA → PC`.
pub fn powerset_map(f: &SetMap, cap: usize) -> Result<SetMap> {
    let (pa, pc) = (powerset(f.source(), cap)?, powerset(f.target(), cap)?);
    let table = (0..pa.len()).map(|s| members(s).fold(0usize, |acc, x| acc | 1 << f.apply(x))).collect();
    SetMap::new(pa, pc, table)
}

/// `A → PA`, `x ↦ {x}`.
pub fn singleton_map(set: &FiniteSet, cap: usize) -> Result<SetMap> {
    let pa = powerset(set, cap)?;
    SetMap::new(set.clone(), pa, (0..set.len()).map(|x| 1usize << x).collect())
}

/// `PPA → PA`, union of a family of subsets. `ppa` must be `P(PA)`.
pub fn union_map(set: &FiniteSet, cap: usize) -> Result<SetMap> {
    let pa = powerset(set, cap)?;
    let ppa = powerset(&pa, cap)?;
    let table = (0..ppa.len()).map(|fam| members(fam).fold(0usize, |acc, s| acc | s)).collect();
    SetMap::new(ppa, pa, table)
}

/// `ε_A : PA ⇸ A`, `ε(S,x) = k` iff `x ∈ S`.
pub fn eps_rel(set: &FiniteSet, q: Quantale, cap: usize) -> Result<VRel> {
    let pa = powerset(set, cap)?;
    Ok(VRel::from_fn_raw(q, &pa, set, |s, x| if contains(s, x) { q.unit() } else { q.bottom() }))
}

/// `(UJ)(ιx, ιy) = ⋀_{S∋x, T∋y} ⋁_{s∈S, t∈T} J(s,t)`, evaluated over all
/// subsets containing the points. On finite carriers this returns `J`.
pub fn ultra_extend(j: &VRel, cap: usize) -> Result<VRel> {
    let q = j.quantale();
    let (n, m) = (j.source().len(), j.target().len());
    check_cap(n, cap)?;
    check_cap(m, cap)?;
    let pj = VRel::from_fn_raw(q, j.source(), j.target(), |x, y| {
        let mut acc = q.top();
        for s in (0..1usize << n).filter(|s| contains(*s, x)) {
            for t in (0..1usize << m).filter(|t| contains(*t, y)) {
                let mut sup = q.bottom();
                for a in members(s) {
                    for b in members(t) {
                        sup = q.join_raw(&sup, j.get(a, b));
                    }
                }
                acc = q.meet_raw(&acc, &sup);
            }
        }
        acc
    });
    if pj != *j {
        return Err(Error::SelfCheck("ultrafilter extension differs from the relation on principal points".into()));
    }
    Ok(pj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_images() {
        let a = FiniteSet::new("A", ["a", "b"]).unwrap();
        let pa = powerset(&a, 4).unwrap();
        assert_eq!(pa.elements(), &["{}", "{a}", "{b}", "{a,b}"]);
        let f = SetMap::new(a.clone(), a.clone(), vec![1, 1]).unwrap();
        assert_eq!(powerset_map(&f, 4).unwrap().table(), &[0, 2, 2, 2]);
        assert!(matches!(powerset(&FiniteSet::range("B", 13), 12), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn extension_of_empty_sets() {
        let a = FiniteSet::range("A", 2);
        let q = Quantale::Lawvere;
        let j = VRel::constant(q, &a, &a, QValue::int(1)).unwrap();
        let pj = powerset_extend(&j, 4).unwrap();
        // nothing to cover: top; nothing to cover with: bottom
        assert_eq!(*pj.get(0, 0), q.top());
        assert_eq!(*pj.get(0, 1), q.bottom());
        assert_eq!(*pj.get(3, 3), QValue::int(1));
    }
}
