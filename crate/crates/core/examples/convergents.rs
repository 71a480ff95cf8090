//! Convergents, star values and error terms of the golden ratio and e.

use irrmeasure::cf::{error_enclosure, ContinuedFraction};
use irrmeasure::psi::fmt_rational;

fn main() {
    let phi = ContinuedFraction::periodic(1, &[], &[1]).unwrap();
    // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    let e = ContinuedFraction::from_rule(2, |i| if i % 3 == 2 { 2 * (i as u64 + 1) / 3 } else { 1 });
    for (name, cf) in [("phi", &phi), ("e", &e)] {
        println!("{name} = {cf}");
        for c in cf.convergents(10).unwrap() {
            let xi = error_enclosure(cf, c.index, 8).unwrap();
            let star = if c.index == 0 {
                "-".to_string()
            } else {
                fmt_rational(&cf.star_value(c.index).unwrap())
            };
            println!("  nu={:<2} p/q={}/{}  star={star}  xi~{:.3e}", c.index, c.p, c.q, xi.approx());
        }
    }
}
