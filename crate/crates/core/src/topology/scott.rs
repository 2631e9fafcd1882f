//! Scott structure on finite complete lattices.

use super::powerset::{check_cap, contains, members, DEFAULT_POWERSET_CAP};
use super::space::USpace;
use crate::enriched::VCat;
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};
use crate::relation::VRel;

/// The Scott opens of a finite complete lattice, as bitmasks, together with
/// the convergence `α(ιx, y) = [⋁_{S∋x} ⋀S ≤ y]`.
#[derive(Clone, Debug)]
pub struct ScottTopology {
    pub opens: Vec<usize>,
    pub convergence: USpace,
}

fn leq(l: &VCat, x: usize, y: usize) -> bool {
    *l.get(x, y) == QValue::Bool(true)
}

fn bound(l: &VCat, s: usize, upper: bool) -> Option<usize> {
    let n = l.carrier().len();
    let is_bound = |b: usize| members(s).all(|x| if upper { leq(l, x, b) } else { leq(l, b, x) });
    let bounds: Vec<usize> = (0..n).filter(|&b| is_bound(b)).collect();
    bounds
        .iter()
        .copied()
        .find(|&b| bounds.iter().all(|&c| if upper { leq(l, b, c) } else { leq(l, c, b) }))
}

/// Opens computed three ways (downsets, the convergence criterion, and the
/// inaccessibility definition), which must agree.
pub fn scott_structure(l: &VCat) -> Result<ScottTopology> {
    if l.quantale() != Quantale::Bool2 {
        return Err(Error::Unsupported("Scott structure needs a Boolean order".into()));
    }
    let n = l.carrier().len();
    check_cap(n, DEFAULT_POWERSET_CAP)?;
    if !l.check().holds() || (0..n).any(|x| (0..n).any(|y| x != y && leq(l, x, y) && leq(l, y, x))) {
        return Err(Error::NotLawful("not a partial order".into()));
    }
    let full = 1usize << n;
    let mut sups = Vec::with_capacity(full);
    let mut infs = Vec::with_capacity(full);
    for s in 0..full {
        match (bound(l, s, true), bound(l, s, false)) {
            (Some(a), Some(b)) => {
                sups.push(a);
                infs.push(b);
            }
            _ => return Err(Error::NotLawful("not a complete lattice".into())),
        }
    }
    // α(ιx, y) iff ⋁_{S∋x} ⋀S ≤ y
    let alpha = VRel::from_fn_raw(Quantale::Bool2, l.carrier(), l.carrier(), |x, y| {
        let family = (0..full).filter(|s| contains(*s, x)).fold(0usize, |m, s| m | 1 << infs[s]);
        QValue::Bool(leq(l, sups[family], y))
    });
    let is_down = |o: usize| (0..n).all(|x| (0..n).all(|y| !(contains(o, y) && leq(l, x, y)) || contains(o, x)));
    let barr_open = |o: usize| {
        (0..n).all(|x| (0..n).all(|y| !(*alpha.get(x, y) == QValue::Bool(true) && contains(o, y)) || contains(o, x)))
    };
    let down_directed = |d: usize| {
        d != 0 && members(d).all(|a| members(d).all(|b| members(d).any(|c| leq(l, c, a) && leq(l, c, b))))
    };
    let scott_open =
        |o: usize| is_down(o) && (1..full).filter(|d| down_directed(*d)).all(|d| !contains(o, infs[d]) || d & o != 0);
    let opens: Vec<usize> = (0..full).filter(|o| is_down(*o)).collect();
    let by_alpha: Vec<usize> = (0..full).filter(|o| barr_open(*o)).collect();
    let by_def: Vec<usize> = (0..full).filter(|o| scott_open(*o)).collect();
    if opens != by_alpha || opens != by_def {
        return Err(Error::SelfCheck("Scott opens disagree between characterisations".into()));
    }
    Ok(ScottTopology { opens, convergence: USpace::new(alpha)? })
}

/// For a function on a finite set: `⋁_{S∋x} ⋀ f(S) = f(x) = ⋀_{S∋x} ⋁ f(S)`.
pub fn minimax_check(q: Quantale, f: &[QValue]) -> Result<bool> {
    f.iter().try_for_each(|v| q.check(v))?;
    check_cap(f.len(), DEFAULT_POWERSET_CAP)?;
    let full = 1usize << f.len();
    Ok((0..f.len()).all(|x| {
        let sets: Vec<usize> = (0..full).filter(|s| contains(*s, x)).collect();
        let infs: Vec<QValue> = sets.iter().map(|&s| q.meet_all_raw(members(s).map(|i| &f[i]))).collect();
        let sups: Vec<QValue> = sets.iter().map(|&s| q.join_all_raw(members(s).map(|i| &f[i]))).collect();
        q.join_all_raw(&infs) == f[x] && q.meet_all_raw(&sups) == f[x]
    }))
}
