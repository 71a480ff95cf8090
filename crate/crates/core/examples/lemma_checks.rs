//! Coincidence screening, Lemma MM and the remark pattern on pairs sharing
//! a block of partial quotients.

use irrmeasure::cf::ContinuedFraction;
use irrmeasure::structure::{check_remark_pattern, scan_coincidences, scan_lemma_mm, RemarkStatus};

fn main() {
    let a = ContinuedFraction::periodic(0, &[1, 2, 3, 4], &[5, 1]).unwrap();
    let b = ContinuedFraction::periodic(0, &[1, 2, 3, 4], &[2, 7]).unwrap();
    let log = scan_coincidences(&a, &b, 40).unwrap();
    println!("verdict {}, coincidence time {}", log.verdict, log.coincidence_time());
    print!("{}", log.to_records());

    let scan = scan_lemma_mm(&a, &b, 20, 4, 200).unwrap();
    println!("Lemma MM: {} checked, {} confirmed, {} violations", scan.checked, scan.confirmed.len(), scan.violations.len());
    for c in scan.confirmed.iter().take(3) {
        println!("  {c}");
    }

    let records = check_remark_pattern(&a, &b, 30, 1, 200).unwrap();
    let holds = records.iter().filter(|r| r.status == RemarkStatus::Holds).count();
    println!("remark pattern: {} shared denominators, {holds} hold", records.len());
    for r in &records {
        println!("  {}", r.to_record());
    }
}
