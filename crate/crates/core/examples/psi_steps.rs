//! The step function psi for sqrt(3), checked against a direct scan.

use irrmeasure::cf::ContinuedFraction;
use irrmeasure::psi::{brute_force_psi, build_trajectory};

fn main() {
    let cf = ContinuedFraction::periodic(1, &[], &[1, 2]).unwrap();
    let traj = build_trajectory(&cf, 5000).unwrap();
    print!("{}", traj.to_records());
    let value = cf.exact_value().unwrap().enclosure(128);
    for t in [1, 7, 26, 97, 1000, 5000] {
        let step = traj.step_at(t).unwrap();
        let direct = brute_force_psi(&value, t).unwrap();
        println!(
            "t={t:<5} step from q={} (nu={})  direct argmin={}  psi~{:.6e}",
            step.q,
            step.index,
            direct.argmin,
            step.xi.approx()
        );
    }
}
