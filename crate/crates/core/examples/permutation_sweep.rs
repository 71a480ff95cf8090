//! Permutation dynamics of a random screened triple.

use irrmeasure::corpus::{random_tuple, rng};
use irrmeasure::perm::{sign_change_count, sweep, AnalysisConfig, TupleContext};

fn main() {
    let members = random_tuple(&mut rng(11), 3);
    for m in &members {
        println!("{} = {}", m.name, m.cf);
    }
    let config = AnalysisConfig {
        t_max: 200_000,
        ..AnalysisConfig::default()
    };
    let ctx = TupleContext::new(members, &config).unwrap();
    let report = sweep(&ctx).unwrap();
    println!("window [{}, {}], initial {}", report.t0, report.t_max, report.initial);
    for e in report.events.iter().take(12) {
        println!("  t={:<7} {} -> {}  jumpers={:?}", e.t, e.before, e.after, e.jumpers);
    }
    println!("k_hat={} max_tau={}", report.k_hat, report.max_tau);
    for o in &report.census {
        println!("  {} first={} visits={}", o.perm, o.first, o.visits);
    }
    println!("sign changes x1/x2: {}", sign_change_count(&ctx, 0, 1).unwrap());
}
