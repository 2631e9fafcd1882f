//! Tensor and the two residuals in every built-in quantale, with the
//! adjunction `a ⊗ b ≤ c ⟺ b ≤ a ⊸ c` checked on sample values.

use qkan::{QValue, Quantale, Rational, Result, StepFunction, TNorm};

fn samples(q: Quantale) -> Result<Vec<QValue>> {
    let lits: &[&str] = match q {
        Quantale::Bool2 => &["F", "T"],
        Quantale::Lawvere => &["0", "1/2", "3", "inf"],
        Quantale::ExtendedReal => &["-inf", "-1", "0", "5/2", "inf"],
        Quantale::UnitInterval(_) => &["0", "1/4", "1/2", "1"],
        Quantale::Delta(_) => &["[]", "[(0,1)]", "[(1,1/2)]", "[(1/2,1/4),(2,1)]"],
    };
    lits.iter().map(|s| q.parse_value(s)).collect()
}

fn main() -> Result<()> {
    for q in Quantale::all() {
        let vs = samples(q)?;
        let mut checked = 0;
        for a in &vs {
            for b in &vs {
                for c in &vs {
                    let left = q.le(&q.tensor(a, b)?, c)?;
                    assert_eq!(left, q.le(b, &q.lhom(a, c)?)?);
                    assert_eq!(left, q.le(a, &q.rhom(c, b)?)?);
                    checked += 1;
                }
            }
        }
        let (a, b) = (&vs[1], &vs[vs.len() / 2]);
        println!(
            "{:<15} k={}  {a} ⊗ {b} = {}  {a} ⊸ {b} = {}  adjunction ok on {checked} triples",
            q.to_string(),
            q.unit(),
            q.tensor(a, b)?,
            q.lhom(a, b)?
        );
    }

    // distance distributions: convolution under the minimum t-norm
    let f = StepFunction::pi(Rational::from_integer(1), Rational::new(1, 2))?;
    let q = Quantale::Delta(TNorm::Minimum);
    let g = QValue::Step(f);
    let sq = q.tensor(&g, &g)?;
    println!("π(1,1/2) ⊗ π(1,1/2) = {sq}");
    Ok(())
}
