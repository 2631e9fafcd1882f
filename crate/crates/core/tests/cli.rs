mod common;

use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use qkan::cli::{doc, expr, main_with, Item};
use qkan::{Error, QValue, Quantale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIERPINSKI: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sierpinski.qk");

const BOOL_DOC: &str = "\
QUANTALE bool
SET A = a b
SET B = x y
SPACE S : closure A
  {} : F F
  {a} : T T
  {b} : T T
  {a,b} : T T
END
CAT HA = discrete A
CAT HB = discrete B
MODULAR M = HA S
REL J : A -> B
  a : T F
  b : F F
END
VALUES d : A = a:T b:F
QUERY kan left lhom d J HA HB
";

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qkan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn qkan(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qkan")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn os(args: &[&str]) -> Vec<std::ffi::OsString> {
    args.iter().map(Into::into).collect()
}

fn strip_lines(d: &doc::Document) -> Vec<Item> {
    d.items.iter().map(|(_, i)| i.clone()).collect()
}

#[test]
fn sierpinski_document_round_trips_and_passes() {
    let text = std::fs::read_to_string(SIERPINSKI).unwrap();
    let d = doc::parse(&text).unwrap();
    let canon = doc::print(&d);
    let again = doc::parse(&canon).unwrap();
    assert_eq!(strip_lines(&d), strip_lines(&again));
    assert_eq!(doc::print(&again), canon);
    doc::Env::build(&d).unwrap();

    let (code, out) = qkan(&["fmt", SIERPINSKI]);
    assert_eq!((code, out), (0, canon));
    for cmd in ["check", "kan", "verify"] {
        let (code, out) = qkan(&[cmd, SIERPINSKI]);
        assert_eq!(code, 0, "{cmd}: {out}");
        assert!(out.ends_with("verdict: pass\n"));
    }
    let (_, out) = qkan(&["kan", SIERPINSKI]);
    assert!(out.contains("l(*) = 1"), "{out}");
    assert!(out.contains("Beck-Chevalley holds: false"));
}

#[test]
fn empty_and_malformed_documents_are_input_errors() {
    assert!(matches!(doc::parse(""), Err(Error::Parse { .. })));
    assert!(matches!(doc::parse("# only a comment\n\n"), Err(Error::Parse { .. })));
    assert!(doc::parse("SET A = a\n").is_err());
    assert!(doc::parse("QUANTALE bool\nSET A = a\nVALUES d : A = a:3\n").is_err());
    assert!(doc::parse("QUANTALE lawvere\nSET A = a\nVALUES d : A = a:-1\n").is_err());
    assert!(doc::parse("QUANTALE unit(min)\nSET A = a\nVALUES d : A = a:3/2\n").is_err());
    // an unterminated block
    assert!(doc::parse("QUANTALE bool\nSET A = a\nREL J : A -> A\n  a : T\n").is_err());
    // undefined names are caught when the environment is built
    let d = doc::parse("QUANTALE bool\nCAT H = discrete A\n").unwrap();
    assert!(doc::Env::build(&d).is_err());
    // a missing row
    let d = doc::parse("QUANTALE bool\nSET A = a b\nREL J : A -> A\n  a : T F\nEND\n").unwrap();
    assert!(doc::Env::build(&d).is_err());

    for (name, text) in [("empty.qk", ""), ("range.qk", "QUANTALE bool\nSET A = a\nVALUES d : A = a:3\n")] {
        let path = temp_file(name, text);
        let (code, out) = qkan(&["check", path.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
    }
}

#[test]
fn exit_codes() {
    let ok = temp_file("ok.qk", BOOL_DOC);
    let ok = ok.to_str().unwrap();
    assert_eq!(qkan(&["check", ok]).0, 0);
    assert_eq!(qkan(&["kan", ok]).0, 0);

    // indiscrete closure on A: d is not continuous
    let failing = temp_file("fail.qk", &format!("{BOOL_DOC}QUERY continuous d M lhom\n"));
    let failing = failing.to_str().unwrap();
    let (code, out) = qkan(&["verify", failing]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("[FAIL]") && out.ends_with("verdict: FAIL\n"));

    assert_eq!(qkan(&["check", "/nonexistent/file.qk"]).0, 2);
    assert_eq!(qkan(&["bogus"]).0, 2);
    assert_eq!(qkan(&["fuzz", "--trials", "x"]).0, 2);
    assert_eq!(qkan(&["fuzz", "--suite", "nonsense", "--trials", "1"]).0, 2);
    assert_eq!(qkan(&["verify"]).0, 2);
    assert_eq!(qkan(&["--format", "yaml", "check", ok]).0, 2);
    assert_eq!(qkan(&["delta", "1 +"]).0, 2);
    assert_eq!(qkan(&["--version"]).0, 0);
    // the in-process entry point agrees with the binary
    assert_eq!(main_with(os(&["qkan", "bogus"])), 2);
    assert_eq!(main_with(os(&["qkan", "check", ok])), 0);
    assert_eq!(main_with(os(&["qkan", "verify", failing])), 1);
}

#[test]
fn empty_fibre_extends_to_bottom() {
    let path = temp_file("bool.qk", BOOL_DOC);
    let (code, out) = qkan(&["kan", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // y receives nothing along J
    assert!(out.contains("l(x) = T, l(y) = F"), "{out}");
}

#[test]
fn text_and_machine_verdicts_agree() {
    let failing = temp_file("agree.qk", &format!("{BOOL_DOC}QUERY continuous d M lhom\n"));
    for file in [SIERPINSKI, failing.to_str().unwrap()] {
        for cmd in ["check", "kan", "verify"] {
            let (tc, text) = qkan(&[cmd, file]);
            let (mc, machine) = qkan(&["--format", "machine", cmd, file]);
            assert_eq!(tc, mc);
            let json: serde_json::Value = serde_json::from_str(&machine).unwrap();
            let findings = json["findings"].as_array().unwrap();
            let text_tags: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).map(|l| &l[1..5]).collect();
            let json_tags: Vec<&str> = findings
                .iter()
                .map(|f| match f["verdict"].as_str().unwrap() {
                    "pass" => "pass",
                    "fail" => "FAIL",
                    _ => "info",
                })
                .collect();
            assert_eq!(text_tags, json_tags, "{cmd} {file}");
            assert_eq!(json["passed"].as_bool().unwrap(), tc == 0);
        }
    }
}

#[test]
fn fuzz_machine_output_is_deterministic() {
    let args = ["--format", "machine", "fuzz", "--trials", "30", "--seed", "11"];
    let (c1, a) = qkan(&args);
    let (c2, b) = qkan(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let json: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(json.is_object());
    let (_, other) = qkan(&["--format", "machine", "fuzz", "--trials", "30", "--seed", "12"]);
    assert_ne!(a, other);
    assert_eq!(qkan(&["verify", "--builtin", "counterexamples"]).0, 0);
}

#[test]
fn delta_expressions() {
    let q = Quantale::Lawvere;
    assert_eq!(expr::evaluate(q, "3 -o 5").unwrap().value, QValue::int(2));
    assert_eq!(expr::evaluate(q, "5 -o 3").unwrap().value, QValue::int(0));
    assert_eq!(expr::evaluate(q, "(1 * 2) \\/ 7").unwrap().value, QValue::int(3));
    assert_eq!(expr::evaluate(q, "k").unwrap().value, QValue::int(0));
    assert_eq!(expr::evaluate(Quantale::Bool2, "T -o F").unwrap().value, QValue::Bool(false));
    assert_eq!(expr::evaluate(Quantale::Bool2, "F -o F").unwrap().value, QValue::Bool(true));

    let q = Quantale::Delta(qkan::TNorm::Minimum);
    let e = expr::evaluate(q, "[(1,1/2)] * [(2,1)] @ 1").unwrap();
    assert_eq!(e.value.to_string(), "[(3,1/2)]");
    assert_eq!(e.at.unwrap().1, "0");
    // left-continuous: still 0 at the threshold itself
    assert_eq!(expr::evaluate(q, "[(1,1/2)] * [(2,1)] @ 3").unwrap().at.unwrap().1, "0");
    let e = expr::evaluate(q, "[(1,1/2)] * [(2,1)] @ 7/2").unwrap();
    assert_eq!(e.at.unwrap().1, "1/2");
    // ⊗ is commutative and unital at the distribution k
    let a = expr::evaluate(q, "[(1,1/3),(2,1)] ⊗ [(1/2,1/2)]").unwrap().value;
    let b = expr::evaluate(q, "[(1/2,1/2)] * [(1,1/3),(2,1)]").unwrap().value;
    assert_eq!(a, b);
    assert_eq!(expr::evaluate(q, "k * [(1,1/3)]").unwrap().value, expr::evaluate(q, "[(1,1/3)]").unwrap().value);

    assert!(expr::evaluate(q, "").is_err());
    assert!(expr::evaluate(q, "(k").is_err());
    assert!(expr::evaluate(Quantale::Lawvere, "T").is_err());

    let (code, out) = qkan(&["delta", "--quantale", "lawvere", "3 -o 5"]);
    assert_eq!(code, 0);
    assert!(out.contains("value: 2"));
}

fn random_doc(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = Quantale::all()[rng.gen_range(0..Quantale::all().len())];
    let mut out = format!("QUANTALE {q}\n");
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let a: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (0..m).map(|i| format!("b{i}")).collect();
    out += &format!("SET A = {}\nSET B = {}\n", a.join(" "), b.join(" "));
    let pairs: Vec<String> = a.iter().map(|x| format!("{x}:{}", b[rng.gen_range(0..m)])).collect();
    out += &format!("MAP f : A -> B = {}\n", pairs.join(" "));
    let vals: Vec<String> = a.iter().map(|x| format!("{x}:{}", common::random_value(q, &mut rng))).collect();
    out += &format!("VALUES d : A = {}\n", vals.join(" "));
    out += "REL J : A -> B\n";
    for x in &a {
        let row: Vec<String> = (0..m).map(|_| common::random_value(q, &mut rng).to_string()).collect();
        out += &format!("  {x} : {}\n", row.join(" "));
    }
    out += "END\nSPACE S : closure A\n";
    for s in 0..1usize << n {
        let key: Vec<&str> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| a[i].as_str()).collect();
        let row: Vec<String> = (0..n).map(|_| common::random_value(q, &mut rng).to_string()).collect();
        out += &format!("  {{{}}} : {}\n", key.join(","), row.join(" "));
    }
    out += "END\nSPACE C : convergence A\n";
    for x in &a {
        let row: Vec<String> = (0..n).map(|_| common::random_value(q, &mut rng).to_string()).collect();
        out += &format!("  {x} : {}\n", row.join(" "));
    }
    out += "END\nCAT H = discrete A\nMODULAR X = H S\nQUERY kan left lhom d J H H\n";
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_is_a_canonical_form(seed in any::<u64>(), noise in 0usize..3) {
        let text = random_doc(seed);
        let d = doc::parse(&text).unwrap();
        let canon = doc::print(&d);
        prop_assert_eq!(&canon, &text);
        // comments, blank lines and spacing do not change the document
        let noisy: String = text
            .lines()
            .map(|l| format!("{}{l}{}\n", " ".repeat(noise), if noise > 0 { "  # note" } else { "" }))
            .collect::<String>()
            + "\n# trailing\n";
        let e = doc::parse(&noisy).unwrap();
        prop_assert_eq!(strip_lines(&d), strip_lines(&e));
        prop_assert_eq!(doc::print(&e), canon);
    }
}
