//! Parses a tuple spec, prints it back and builds the analysis context.

use irrmeasure::perm::TupleContext;
use irrmeasure::spec_file::parse_spec;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/phi_sqrt2.spec").into());
    let text = std::fs::read_to_string(&path).unwrap();
    let spec = match parse_spec(&text) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    print!("{}", spec.serialize());
    let members = spec.members(None).unwrap();
    for m in &members {
        println!("{} = {}", m.name, m.cf);
    }
    let ctx = TupleContext::new(members, &spec.config()).unwrap();
    println!("burn-in {} window up to {}", ctx.burn_in(), ctx.t_max());
    for ((i, j), log) in ctx.screening() {
        println!("pair {} {}: {}", i + 1, j + 1, log.verdict);
    }
}
