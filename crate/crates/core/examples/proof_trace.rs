//! Index sets, witnesses and the counting bound for a random 4-tuple.

use irrmeasure::corpus::{random_tuple, rng};
use irrmeasure::perm::{AnalysisConfig, TupleContext};
use irrmeasure::proof::{verify_with_retries, DEFAULT_RETRIES};

fn main() {
    let members = random_tuple(&mut rng(2024), 4);
    let config = AnalysisConfig {
        t_max: 100_000,
        ..AnalysisConfig::default()
    };
    let ctx = TupleContext::new(members, &config).unwrap();
    let v = verify_with_retries(&ctx, DEFAULT_RETRIES).unwrap();
    print!("{}", v.to_report());
    let Some(b) = &v.bound else {
        println!("status {:?}", v.status);
        return;
    };
    println!(
        "n={} k={} 1+sum={} k(k+1)/2={} pass={}",
        b.n,
        b.k,
        b.one_plus_sum,
        b.triangular,
        b.pass()
    );
}
