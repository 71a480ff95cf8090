//! Exact quadratic surds: expansion, reconstruction and the integer
//! combination test.

use irrmeasure::cf::{integer_combination_check, surd_to_cf, QuadraticSurd};
use num_rational::BigRational;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn main() {
    let surds = [
        QuadraticSurd::new(r(0, 1), r(1, 1), 2).unwrap(),
        QuadraticSurd::new(r(1, 2), r(1, 2), 5).unwrap(),
        QuadraticSurd::new(r(-1, 4), r(-2, 3), 10).unwrap(),
        QuadraticSurd::new(r(3, 7), r(1, 1), 12).unwrap(),
    ];
    for s in &surds {
        let cf = surd_to_cf(s).unwrap();
        let (pre, period) = cf.periodic_parts().unwrap();
        println!("{s} ~ {:.12}", s.approx());
        println!("  a0={} preperiod={pre:?} period length={}", cf.a0(), period.len());
        println!("  reconstructed: {}", cf.exact_value().unwrap());
    }
    let phi = &surds[1];
    let conj = QuadraticSurd::new(r(1, 2), r(-1, 2), 5).unwrap();
    let shifted = phi.add_rational(&r(3, 1));
    println!("phi vs conjugate: {:?}", integer_combination_check(phi, &conj));
    println!("phi vs phi + 3:   {:?}", integer_combination_check(phi, &shifted));
    println!("phi vs sqrt2:     {:?}", integer_combination_check(phi, &surds[0]));
}
