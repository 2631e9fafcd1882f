//! Reading an instance document, printing it in canonical form and running
//! its queries through the same code paths as the `qkan` binary.

use qkan::cli::{doc, run, Cli};
use qkan::Result;

const SIERPINSKI: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sierpinski.qk");

fn main() -> Result<()> {
    let text = std::fs::read_to_string(SIERPINSKI).expect("bundled document");
    let d = doc::parse(&text)?;
    // resolves names and checks the laws of every declared object
    doc::Env::build(&d)?;
    println!("{} items over {}", d.items.len(), d.quantale);
    print!("{}", doc::print(&d));

    for cmd in ["check", "kan", "verify"] {
        let cli = <Cli as clap::Parser>::try_parse_from(["qkan", cmd, SIERPINSKI]).expect("valid arguments");
        let out = run(&cli)?;
        println!("\n$ qkan {cmd} sierpinski.qk   (exit {})", out.code);
        print!("{}", out.stdout);
    }
    Ok(())
}
