//! The Sierpiński counterexample: every hypothesis of the extreme-value
//! theorem holds except discreteness, and Beck–Chevalley fails. Also the
//! distance-distribution probe of the sup-of-residuals condition.

use qkan::harness::{delta_condition_d_probe, evt_diagnose, regression_counterexamples, sierpinski_instance};
use qkan::{Rational, Result, StepFunction, TNorm};

fn main() -> Result<()> {
    let (inst, _) = sierpinski_instance()?;
    let dg = evt_diagnose(&inst)?;
    println!("J discrete: {}  U-compact: {}  fibres directed: {:?}", dg.discrete, dg.u_compact, dg.directed);
    println!("left extension l(*) = {}, Beck–Chevalley gap {}", dg.extension[0], dg.bc.gaps[0]);

    println!("\nregression checks:");
    for c in regression_counterexamples()? {
        println!("  [{}] {}: expected {} got {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.expected, c.actual);
    }

    // under the minimum t-norm, k ⟜ staircase stays strictly below k
    println!("\nstaircase residuals under min:");
    let p = delta_condition_d_probe(&[StepFunction::unit()], TNorm::Minimum)?;
    for (i, v) in &p.staircase {
        println!("  level {i}: residual {v}");
    }
    let half = StepFunction::pi(Rational::from_integer(1), Rational::new(1, 2))?;
    let p = delta_condition_d_probe(&[half, StepFunction::unit()], TNorm::Product)?;
    println!("product t-norm, sup = {} equals k: {}", p.sup, p.equals_unit);
    Ok(())
}
