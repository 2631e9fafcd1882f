//! Open and closed relations between spaces, compared with the classical
//! image/preimage definitions, plus compactness and semicontinuity.

use qkan::continuity::{
    classical_open_equiv, closure_from_closed, is_compact, open_closed_check, semicontinuity_check, u_compact_check, Kind,
    Semicontinuity,
};
use qkan::topology::{to_convergence, Structure, DEFAULT_POWERSET_CAP};
use qkan::{Ext, FiniteSet, QValue, Quantale, Result, VRel};

fn main() -> Result<()> {
    let q = Quantale::Bool2;
    // Sierpiński space on {0,1}: {1} is the only proper nonempty closed set
    let sier = closure_from_closed(&FiniteSet::range("S", 2), &[0, 0b10])?;
    let disc = closure_from_closed(&FiniteSet::range("D", 2), &[0, 0b01, 0b10])?;

    for (name, j) in [
        ("identity", VRel::identity(q, sier.carrier())),
        ("swap", VRel::from_fn(q, sier.carrier(), disc.carrier(), |x, y| QValue::Bool(x != y))?),
        ("all", VRel::constant(q, sier.carrier(), disc.carrier(), QValue::Bool(true))?),
    ] {
        let j = VRel::new(q, sier.carrier().clone(), disc.carrier().clone(), j.entries().to_vec())?;
        let cls = classical_open_equiv(&j, &sier, &disc)?;
        let (a, b) = (Structure::Closure(sier.clone()), Structure::Closure(disc.clone()));
        let closed = open_closed_check(Kind::Closed, &j, &a, &b)?;
        println!(
            "{name:<8} S → D  open: lifted={} image-closure={} preimage-open={}  closed={} witness={:?}",
            cls.lifted, cls.image_closure, cls.preimage_open, closed.holds, closed.witness
        );
    }

    // U-compactness: over a finite set every ultrafilter is principal
    let alpha = to_convergence(&sier, DEFAULT_POWERSET_CAP)?;
    let j = VRel::constant(q, sier.carrier(), &FiniteSet::range("B", 1), QValue::Bool(true))?;
    println!("constant relation U-compact: {}", u_compact_check(&j, &alpha)?.is_none());
    println!("whole Sierpiński space compact: {}", is_compact(&sier, 0b11)?);

    // semicontinuity of f : S → [-inf, inf]
    let f = [Ext::int(0), Ext::int(5)];
    for mode in [Semicontinuity::Lower, Semicontinuity::Upper] {
        println!("f = (0, 5) {mode:?} semicontinuous on S: {}", semicontinuity_check(mode, &f, &sier)?);
    }
    Ok(())
}
