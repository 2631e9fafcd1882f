//! The four enriched maximum theorems, each run on seeded random instances
//! across the default quantales.

use qkan::harness::{gen_max_instance, max_trial, GeneratorConfig, Outcome, SuiteSummary, Variant};
use qkan::Result;

fn main() -> Result<()> {
    let cfg = GeneratorConfig { seed: 1, trials: 400, ..GeneratorConfig::default() };
    for v in Variant::ALL {
        let mut summary = SuiteSummary::default();
        for t in 0..cfg.trials {
            summary.add(&max_trial(&cfg, v, t));
        }
        println!(
            "{:<17} pass={:>3} skip={:>3} fail={} error={}  evaluated per quantale {:?}",
            v.name(),
            summary.passed,
            summary.skipped,
            summary.failed,
            summary.errors,
            summary.evaluated_by_quantale
        );
    }

    // one instance in detail
    let (t, inst) = (0..cfg.trials)
        .filter_map(|t| gen_max_instance(&cfg, Variant::LeftBc, t).ok().map(|i| (t, i)))
        .find(|(t, _)| max_trial(&cfg, Variant::LeftBc, *t).outcome == Outcome::Pass)
        .expect("some trial passes");
    let report = max_trial(&cfg, Variant::LeftBc, t);
    println!(
        "\nleft_bc trial {t} over {} with monad {}: |A|={} |B|={} |M|={}",
        inst.quantale,
        inst.monad.name(),
        inst.a.carrier().len(),
        inst.b.carrier().len(),
        inst.m.carrier().len()
    );
    for (name, holds) in &report.hypotheses {
        println!("  {name}: {holds}");
    }
    println!("  conclusion: {:?}", report.conclusion);
    Ok(())
}
