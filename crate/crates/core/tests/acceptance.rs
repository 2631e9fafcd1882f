//! Acceptance run: one line per criterion, exit status 1 if any fails.
//! Expected values come from the oracles in `common` or from direct
//! formulas written out below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use qkan::continuity::classical_open_equiv;
use qkan::harness::evt::{staircase, staircase_points, STAIRCASE_STEPS};
use qkan::harness::*;
use qkan::topology::*;
use qkan::{Ext, QValue, Quantale, Rational, Side, StepFunction, TNorm, VRel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = DEFAULT_POWERSET_CAP;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Runner {
    failed: Vec<u32>,
    total: Duration,
}

impl Runner {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Duration {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        self.total += took;
        let out = match (out, limit) {
            (Ok(_), Some(l)) if took >= l => Err(format!("took {:.2} s, limit {} s", took.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        let limit = limit.map(|l| format!(" < {} s", l.as_secs())).unwrap_or_default();
        match out {
            Ok(detail) => println!("PASS  {id:>2}  {name} [{:.2} s{limit}]  {detail}", took.as_secs_f64()),
            Err(why) => {
                println!("FAIL  {id:>2}  {name} [{:.2} s{limit}]  {why}", took.as_secs_f64());
                self.failed.push(id);
            }
        }
        took
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

// 1 -------------------------------------------------------------------------

fn counterexample_regression() -> Verdict {
    let (inst, _) = sierpinski_instance().map_err(|e| e.to_string())?;
    // l(*) = ⋁_x d(x) ⊗ J(x,*), in Lawvere the minimum of sums
    let d = [2i64, 0];
    let jv = [0i64, 1];
    let expected = (0..2).map(|x| d[x] + jv[x]).min().unwrap();
    let dg = evt_diagnose(&inst).map_err(|e| e.to_string())?;
    ensure(dg.extension == vec![QValue::int(expected)], || format!("l(*) = {:?}, expected {expected}", dg.extension))?;
    ensure(expected == 1, || "hand computation of l(*) is not 1".into())?;
    ensure(dg.bc.gaps == vec![QValue::int(1)] && !dg.bc.holds, || format!("gap {:?}", dg.bc.gaps))?;
    ensure(dg.u_compact, || "J not U-compact".into())?;
    let checks = regression_counterexamples().map_err(|e| e.to_string())?;
    for name in ["d non-expansive", "d continuous (convergence)", "d continuous (point-set distance)", "J U-compact"] {
        let c = checks.iter().find(|c| c.name == name).ok_or(format!("missing check {name}"))?;
        ensure(c.pass && c.actual == "true", || format!("{name}: {}", c.actual))?;
    }
    // non-expansive by hand: |d x - d y| ≤ A(x,y)
    let hom = inst.a.cat().hom();
    for x in 0..2 {
        for y in 0..2 {
            let diff = QValue::int((d[y] - d[x]).max(0));
            ensure(Quantale::Lawvere.le(hom.get(x, y), &diff).unwrap(), || format!("d expands at ({x},{y})"))?;
        }
    }
    Ok(format!("l(*) = 1, gap = 1, U-compact, d continuous and non-expansive ({} exact checks)", checks.len()))
}

// 2 -------------------------------------------------------------------------

/// `(φ ⊸ χ)(∞) = inf_r φ(r) ⊸ χ(∞)` under the minimum, with `r` running over
/// a grid fine enough to meet every level of `φ`.
fn residual_at_infinity(phi: &StepFunction, chi: &StepFunction) -> Rational {
    let far = ev(chi, &Rational::from_integer(1000));
    (0..=1600)
        .map(|k| ev(phi, &Rational::new(k, 1600)))
        .map(|p| if p <= far { Rational::one() } else { far.clone() })
        .min()
        .unwrap()
}

fn delta_regression() -> Verdict {
    let mut parts = Vec::new();
    let half = staircase(&Rational::new(1, 2), STAIRCASE_STEPS).map_err(|e| e.to_string())?;
    for i in staircase_points() {
        let phi = staircase(&i, STAIRCASE_STEPS).map_err(|e| e.to_string())?;
        let lib = half.lhom(&phi, TNorm::Minimum).eval(&Ext::PosInf).map_err(|e| e.to_string())?;
        let oracle = residual_at_infinity(&half, &phi);
        ensure(lib == oracle, || format!("i = {i}: library {lib}, oracle {oracle}"))?;
        ensure(lib <= i && lib < Rational::one(), || format!("i = {i}: residual {lib}"))?;
        parts.push(format!("{i}↦{lib}"));
    }
    Ok(format!("(φ_1/2 ⊸ φ_i)(∞) under min: {}", parts.join(", ")))
}

// 3 -------------------------------------------------------------------------

fn residuation_suite() -> Verdict {
    let mut stream = 0;
    for q in Quantale::all() {
        stream += 1;
        let mut g = rng(300 + stream);
        for n in 0..10_000 {
            let (a, b, c) = (random_value(q, &mut g), random_value(q, &mut g), random_value(q, &mut g));
            let t = q.le(&q.tensor(&a, &b).unwrap(), &c).unwrap();
            let l = q.le(&b, &q.lhom(&a, &c).unwrap()).unwrap();
            let r = q.le(&a, &q.rhom(&c, &b).unwrap()).unwrap();
            ensure(t == l && l == r, || format!("{q} triple {n}: ({a}, {b}, {c})"))?;
        }
    }
    let mut pairs = 0;
    for t in TNorm::ALL {
        let mut g = rng(350 + t as u64);
        for n in 0..1000 {
            let f = random_step(&mut g, 4);
            let h = random_step(&mut g, 4);
            let prod = f.tensor(&h, t);
            let res = f.lhom(&h, t);
            let oracle = residual_oracle(&f, &h, t);
            for p in probe_points() {
                ensure(prod.eval_at(&p) == conv_oracle(&f, &h, t, &p), || format!("{t:?} pair {n}: ⊗ at {p}"))?;
                ensure(res.eval_at(&p) == oracle(&p), || format!("{t:?} pair {n}: ⊸ at {p}"))?;
            }
            ensure(res.top_level() == oracle(&r(4, 1)), || format!("{t:?} pair {n}: ⊸ at ∞"))?;
            pairs += 1;
        }
    }
    Ok(format!("10000 triples × {} quantales; {pairs} Δ pairs against the grid", Quantale::all().len()))
}

// 4 -------------------------------------------------------------------------

fn coreflection_suite() -> Verdict {
    let mut fjp_random = 0;
    for (k, q) in Quantale::all().into_iter().enumerate() {
        let mut g = rng(400 + k as u64);
        for inst in 0..1000 {
            let n = g.gen_range(0..=4);
            let a = set("A", n);
            let alpha = USpace::new(random_rel(q, &mut g, &a, &a)).unwrap();
            let delta = to_closure(&alpha, CAP).unwrap();
            for s in 0..1usize << n {
                for x in 0..n {
                    let terms: Vec<QValue> = bits(s).map(|y| alpha.get(y, x).clone()).collect();
                    let want = q.join_all(terms.iter()).unwrap();
                    ensure(*delta.get(s, x) == want, || format!("{q} #{inst}: δ({s},{x})"))?;
                }
            }
            ensure(delta.flags().finite_join_preserving, || format!("{q} #{inst}: to_closure not finite-join-preserving"))?;
            ensure(to_convergence(&delta, CAP).unwrap() == alpha, || format!("{q} #{inst}: U→P→U"))?;

            let p = PSpace::new(&a, random_rel(q, &mut g, &powerset(&a, CAP).unwrap(), &a)).unwrap();
            let fjp = (0..1usize << n).all(|s| {
                (0..n).all(|x| {
                    let terms: Vec<QValue> = bits(s).map(|y| p.get(1 << y, x).clone()).collect();
                    *p.get(s, x) == q.join_all(terms.iter()).unwrap()
                })
            });
            let conv = to_convergence(&p, CAP).unwrap();
            for x in 0..n {
                for y in 0..n {
                    let sup: Vec<QValue> = (0..1usize << n).filter(|s| s >> x & 1 == 1).map(|s| p.get(s, y).clone()).collect();
                    ensure(*conv.get(x, y) == q.meet_all(sup.iter()).unwrap(), || format!("{q} #{inst}: α({x},{y})"))?;
                }
            }
            let back = to_closure(&conv, CAP).unwrap();
            ensure((back == p) == fjp, || format!("{q} #{inst}: P→U→P identity {} but join-preserving {fjp}", back == p))?;
            ensure(to_closure(&to_convergence(&back, CAP).unwrap(), CAP).unwrap() == back, || format!("{q} #{inst}: not idempotent"))?;
            fjp_random += fjp as usize;
        }
    }
    Ok(format!("1000 instances × {} quantales, |A| ≤ 4; {fjp_random} random closures were join-preserving", Quantale::all().len()))
}

// 5 -------------------------------------------------------------------------

fn algebraic_morphism_suite() -> Verdict {
    let qs = Quantale::all();
    let mut g = rng(500);
    for inst in 0..1000 {
        let q = qs[inst % qs.len()];
        let (a, b) = (set("A", g.gen_range(0..=4)), set("B", g.gen_range(0..=4)));
        let j = random_rel(q, &mut g, &a, &b);
        let (ea, eb) = (eps_rel(&a, q, CAP).unwrap(), eps_rel(&b, q, CAP).unwrap());
        let uj = ultra_extend(&j, CAP).unwrap();
        let lhs = powerset_extend(&j, CAP).unwrap().compose(&eb).unwrap();
        ensure(lhs.entries() == compose_oracle(&ea, &uj).as_slice(), || format!("{q} #{inst}: PJ∘ε_B ≠ ε_A∘UJ"))?;
        // every finite α is unitary; ε ⊸ (ε∘α) recovers it
        let alpha = random_rel(q, &mut g, &a, &a);
        let back = ea.residuate(Side::Left, &ea.compose(&alpha).unwrap()).unwrap();
        ensure(back == alpha, || format!("{q} #{inst}: ε ⊸ (ε∘α) ≠ α"))?;
    }
    Ok("1000 instances over all quantales".into())
}

// 6 -------------------------------------------------------------------------

fn classical_equivalence_suite() -> Verdict {
    let mut g = rng(600);
    let mut open = 0;
    for inst in 0..1000 {
        let (na, nb) = (g.gen_range(1..=5), g.gen_range(1..=5));
        let (a, b) = (set("A", na), set("B", nb));
        let topo = g.gen();
        let (ca, cb) = (random_closed(&mut g, na, topo), random_closed(&mut g, nb, topo));
        let (pa, pb) = (space_of(&a, &ca), space_of(&b, &cb));
        let density = g.gen_range(0.1..0.7);
        let j = random_bool_rel(&mut g, &a, &b, density);
        let res = classical_open_equiv(&j, &pa, &pb).map_err(|e| e.to_string())?;
        let (fa, fb) = ((1usize << na) - 1, (1usize << nb) - 1);
        let image_closure = (0..=fa).all(|s| image(&j, cl(&ca, fa, s)) & !cl(&cb, fb, image(&j, s)) == 0);
        let preimage_open = cb.iter().all(|c| ca.contains(&(fa & !preimage(&j, fb & !c))));
        ensure(res.agree(), || format!("#{inst}: verdicts disagree {res:?}"))?;
        ensure(res.image_closure == image_closure && res.preimage_open == preimage_open, || format!("#{inst}: oracle disagrees"))?;
        open += res.lifted as usize;
    }
    Ok(format!("1000 relations, |A|,|B| ≤ 5; {open} open"))
}

// 7-9 -----------------------------------------------------------------------

fn campaign(suites: &[Suite], trials: u64, min_trials: u64) -> Verdict {
    let cfg = GeneratorConfig { seed: 20240, trials, ..GeneratorConfig::default() };
    let report = fuzz_campaign(&cfg, suites).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for s in suites {
        let sum = report.suites.get(s.name()).ok_or(format!("no summary for {}", s.name()))?;
        ensure(sum.trials >= min_trials, || format!("{}: {} trials", s.name(), sum.trials))?;
        ensure(sum.failed == 0 && sum.errors == 0 && sum.secondary_failed == 0, || {
            format!("{}: {} failures, {} errors: {:?}", s.name(), sum.failed, sum.errors, sum.failures)
        })?;
        let rate = (sum.trials - sum.skipped) as f64 / sum.trials as f64;
        ensure(rate >= 0.01, || format!("{}: non-skip rate {:.2}%", s.name(), 100.0 * rate))?;
        parts.push(format!("{} {}/{} evaluated", s.name(), sum.trials - sum.skipped, sum.trials));
    }
    Ok(parts.join("; "))
}

fn evt_campaigns() -> Verdict {
    let summary = campaign(&[Suite::EvtClosure, Suite::EvtQuantale], 2000, 2000)?;
    // the necessity witnesses still fail for the documented reasons
    let (inst, _) = sierpinski_instance().map_err(|e| e.to_string())?;
    let rep = verify_evt_quantale(&inst);
    ensure(rep.outcome == Outcome::Skip("(a) J discrete".into()), || format!("Sierpiński outcome {:?}", rep.outcome))?;
    let dg = evt_diagnose(&inst).map_err(|e| e.to_string())?;
    ensure(!dg.bc.holds, || "Beck–Chevalley holds on the Sierpiński instance".into())?;
    for i in staircase_points() {
        let phi = staircase(&i, STAIRCASE_STEPS).map_err(|e| e.to_string())?;
        let half = staircase(&Rational::new(1, 2), STAIRCASE_STEPS).map_err(|e| e.to_string())?;
        let v = residual_at_infinity(&half, &phi);
        ensure(v < Rational::one(), || format!("condition (d) witness at {i} no longer fails"))?;
    }
    Ok(format!("{summary}; witnesses fail: J not discrete, residuals below k"))
}

// 10 ------------------------------------------------------------------------

fn compose_floor() -> Verdict {
    let q = Quantale::Lawvere;
    let mut g = rng(1000);
    let a = set("N", 256);
    let entries = |g: &mut ChaCha8Rng| (0..256 * 256).map(|_| QValue::int(g.gen_range(0..10))).collect::<Vec<_>>();
    let j = VRel::new(q, a.clone(), a.clone(), entries(&mut g)).unwrap();
    let h = VRel::new(q, a.clone(), a.clone(), entries(&mut g)).unwrap();
    let start = Instant::now();
    let c = j.compose(&h).unwrap();
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("compose took {:.2} s", took.as_secs_f64()))?;
    // spot-check rows against min-plus by hand
    for x in [0usize, 17, 255] {
        for z in [0usize, 128, 255] {
            let want = (0..256).map(|y| ext(j.get(x, y)).add(ext(h.get(y, z)))).min().unwrap();
            ensure(ext(c.get(x, z)) == &want, || format!("entry ({x},{z})"))?;
        }
    }
    Ok(format!("256×256 compose in {:.3} s", took.as_secs_f64()))
}

fn main() {
    let mut run = Runner { failed: Vec::new(), total: Duration::ZERO };
    let secs = Duration::from_secs;
    run.run(1, "counterexample regression", Some(secs(1)), counterexample_regression);
    run.run(2, "Δ staircase regression", Some(secs(1)), delta_regression);
    run.run(3, "residuation adjunction", Some(secs(60)), residuation_suite);
    run.run(4, "coreflection", Some(secs(60)), coreflection_suite);
    run.run(5, "algebraic morphism", None, algebraic_morphism_suite);
    run.run(6, "classical openness equivalence", None, classical_equivalence_suite);
    let max: Vec<Suite> = Variant::ALL.iter().map(|&v| Suite::Max(v)).collect();
    let mut campaigns = run.run(7, "maximum theorems", Some(secs(600)), || campaign(&max, 10_000, 10_000));
    campaigns += run.run(8, "extreme-value theorems", None, evt_campaigns);
    campaigns += run.run(9, "classical Berge", None, || campaign(&[Suite::Berge], 2000, 2000));
    run.run(10, "performance floor", None, || {
        let detail = compose_floor()?;
        ensure(campaigns < secs(900), || format!("campaigns took {:.1} s", campaigns.as_secs_f64()))?;
        Ok(format!("{detail}; campaigns 7-9 in {:.1} s < 900 s", campaigns.as_secs_f64()))
    });
    println!("total {:.1} s", run.total.as_secs_f64());
    if run.failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: FAILED {:?}", run.failed);
        std::process::exit(1);
    }
}
