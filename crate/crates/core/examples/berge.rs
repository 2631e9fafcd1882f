//! The classical maximum theorem on random finite topological spaces:
//! a continuous objective optimised over a hemicontinuous constraint.

use qkan::harness::{berge_classical, gen_berge, GeneratorConfig, Outcome, SuiteSummary};
use qkan::Result;

fn main() -> Result<()> {
    let cfg = GeneratorConfig { seed: 2024, trials: 500, ..GeneratorConfig::default() };
    let mut summary = SuiteSummary::default();
    let mut shown = false;
    for t in 0..cfg.trials {
        let inst = gen_berge(&cfg, t)?;
        let report = berge_classical(&inst);
        if report.outcome == Outcome::Pass && !shown && inst.e.iter().any(|v| *v != inst.e[0]) {
            shown = true;
            let e: Vec<String> = inst.e.iter().map(|v| v.to_string()).collect();
            println!("trial {t}: |A|={} |B|={} e=({})", inst.a.carrier().len(), inst.b.carrier().len(), e.join(", "));
            for (name, holds) in &report.hypotheses {
                println!("  {name}: {holds}");
            }
            println!("  conclusion: {:?}", report.conclusion);
        }
        summary.add(&report);
    }
    println!(
        "{} trials: {} pass, {} skip, {} fail, {} error",
        summary.trials, summary.passed, summary.skipped, summary.failed, summary.errors
    );
    for (why, n) in &summary.skip_reasons {
        println!("  skipped {n:>4}: {why}");
    }
    Ok(())
}
