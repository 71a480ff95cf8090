//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use irrmeasure::cf::ContinuedFraction;
use irrmeasure::corpus::{self, rng};
use irrmeasure::perm::{sign_change_count, sweep, sweep_until, AnalysisConfig, Member, TupleContext};
use irrmeasure::plot::{plot_files, PlotOptions};
use irrmeasure::proof::{verify_with_retries, Status, DEFAULT_RETRIES};
use irrmeasure::psi::{brute_force_scan, build_trajectory};
use irrmeasure::structure::{check_remark_pattern, scan_coincidences, scan_lemma_mm};
use num_rational::BigRational;
use num_traits::ToPrimitive;

// Seeds and pinned limits.
const PSI_SEED: u64 = 0x5eed_0001;
const PSI_NUMBERS: usize = 20;
const PSI_T_MAX: u64 = 10_000;
const PSI_ENCLOSURE_BITS: u32 = 160;
const PSI_TIME_LIMIT: Duration = Duration::from_secs(60);
const CLASSICAL_DEPTH: usize = 40;
const PAIR_SEED: u64 = 0x5eed_0003;
const PAIR_COUNT: usize = 20;
const PAIR_START_T_MAX: u64 = 1_000;
const PAIR_MAX_DOUBLINGS: u32 = 20;
const PAIR_MIN_FLIPS: u64 = 2;
const CORPUS_SEED: u64 = 0x5eed_0004;
const CORPUS_T_MAX: u64 = 100_000;
const LEMMA_SEED: u64 = 0x5eed_0006;
const LEMMA_PAIRS: usize = 10;
const LEMMA_MAX_INDEX: usize = 25;
const LEMMA_MAX_D: usize = 4;
const STAR_SEED: u64 = 0x5eed_0007;
const STAR_SHARED_PAIRS: usize = 20;
const SCREEN_DEPTH: usize = 48;
const COMPARE_DEPTH: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(PSI_SEED);
    let (mut checks, mut mismatches) = (0u64, Vec::new());
    for i in 0..PSI_NUMBERS {
        let cf = corpus::random_periodic_cf(&mut r);
        let surd = cf.exact_value().expect("periodic");
        let traj = build_trajectory(&cf, PSI_T_MAX).expect("trajectory");
        let oracle = brute_force_scan(&surd.enclosure(PSI_ENCLOSURE_BITS), PSI_T_MAX).expect("oracle precision");
        for (t, o) in (1..=PSI_T_MAX).zip(&oracle) {
            checks += 1;
            let step = traj.step_at(t).expect("within horizon");
            let inside = step.xi.lo() <= &o.lo && &o.hi <= step.xi.hi();
            if step.q != o.argmin || !inside {
                mismatches.push(format!("#{i} {cf} t={t}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < PSI_TIME_LIMIT;
    let first = mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default();
    outcome(
        pass,
        format!(
            "{checks} (number, t) checks, {} mismatches{first}, {:.2}s of {}s",
            mismatches.len(),
            elapsed.as_secs_f64(),
            PSI_TIME_LIMIT.as_secs()
        ),
    )
}

fn criterion_2() -> Outcome {
    // (1 + √2)^(n+1) = p_n + q_n √2, and Fibonacci numbers for φ.
    let sqrt2 = ContinuedFraction::periodic(1, &[], &[2]).unwrap();
    let phi = ContinuedFraction::periodic(1, &[], &[1]).unwrap();
    let mut bad = Vec::new();
    let (mut p, mut q) = (1u128, 1u128);
    for c in sqrt2.convergents(CLASSICAL_DEPTH + 1).unwrap() {
        if (c.p.to_u128(), c.q.to_u128()) != (Some(p), Some(q)) {
            bad.push(format!("sqrt2 nu={}", c.index));
        }
        (p, q) = (p + 2 * q, p + q);
    }
    let mut fib = vec![0u128, 1];
    while fib.len() < CLASSICAL_DEPTH + 4 {
        fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
    }
    for c in phi.convergents(CLASSICAL_DEPTH + 1).unwrap() {
        let nu = c.index;
        if (c.p.to_u128(), c.q.to_u128()) != (Some(fib[nu + 2]), Some(fib[nu + 1])) {
            bad.push(format!("phi nu={nu}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("depth 0..={CLASSICAL_DEPTH} for sqrt2 and phi, {} mismatches{}", bad.len(), first(&bad)),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(PAIR_SEED);
    let mut failures = Vec::new();
    let mut worst = 0;
    for k in 0..PAIR_COUNT {
        let (a, b) = corpus::random_independent_surd_pair(&mut r);
        let label = format!("{} & {}", a.surd.as_ref().unwrap(), b.surd.as_ref().unwrap());
        let config = AnalysisConfig {
            t_max: PAIR_START_T_MAX,
            ..AnalysisConfig::default()
        };
        let ctx = match TupleContext::new(vec![a, b], &config) {
            Ok(ctx) => ctx,
            Err(e) => {
                failures.push(format!("pair {k} ({label}): {e}"));
                continue;
            }
        };
        let run = sweep_until(&ctx, PAIR_MAX_DOUBLINGS, |c, _| Ok(sign_change_count(c, 0, 1)? >= PAIR_MIN_FLIPS));
        match run {
            Ok(d) if d.reached => {
                worst = worst.max(d.doublings);
                let flips = sign_change_count(&d.ctx, 0, 1).unwrap();
                if d.report.sign_changes[0][1] != flips {
                    failures.push(format!("pair {k}: sweep matrix {} vs pairwise {flips}", d.report.sign_changes[0][1]));
                }
            }
            Ok(_) => failures.push(format!("pair {k} ({label}): fewer than {PAIR_MIN_FLIPS} flips")),
            Err(e) => failures.push(format!("pair {k} ({label}): {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{PAIR_COUNT} surd pairs, >= {PAIR_MIN_FLIPS} flips within {worst} doublings (cap {PAIR_MAX_DOUBLINGS}), failures {:?}",
            failures
        ),
    )
}

struct CorpusRun {
    lemma5_violations: Vec<String>,
    theorem_violations: Vec<String>,
    retries: u32,
    reports: String,
}

fn corpus_config() -> AnalysisConfig {
    AnalysisConfig {
        t_max: CORPUS_T_MAX,
        ..AnalysisConfig::default()
    }
}

fn run_corpus() -> CorpusRun {
    let mut run = CorpusRun {
        lemma5_violations: Vec::new(),
        theorem_violations: Vec::new(),
        retries: 0,
        reports: String::new(),
    };
    for (i, tuple) in corpus::regression_corpus(CORPUS_SEED).into_iter().enumerate() {
        let n = tuple.len();
        let ctx = match TupleContext::new(tuple, &corpus_config()) {
            Ok(ctx) => ctx,
            Err(e) => {
                run.theorem_violations.push(format!("tuple {i}: {e}"));
                run.lemma5_violations.push(format!("tuple {i}: {e}"));
                continue;
            }
        };
        let v = match verify_with_retries(&ctx, DEFAULT_RETRIES) {
            Ok(v) => v,
            Err(e) => {
                run.theorem_violations.push(format!("tuple {i}: {e}"));
                run.lemma5_violations.push(format!("tuple {i}: {e}"));
                continue;
            }
        };
        run.retries = run.retries.max(v.retries);
        run.reports.push_str(&v.report.to_records());
        run.reports.push_str(&v.to_report());
        if v.report.max_tau > v.report.k_hat {
            run.lemma5_violations.push(format!("tuple {i}: max_tau {} > k_hat {}", v.report.max_tau, v.report.k_hat));
        }
        let Some(trace) = v.trace.as_ref() else {
            run.theorem_violations.push(format!("tuple {i}: no trace ({:?})", v.status));
            continue;
        };
        let k = v.report.k_hat;
        let sum: usize = trace.n_counts().iter().sum();
        let mut why = Vec::new();
        if n > k * (k + 1) / 2 {
            why.push(format!("n {n} > k(k+1)/2 with k {k}"));
        }
        if n > 1 + sum {
            why.push(format!("n {n} > 1 + sum n_j = {}", 1 + sum));
        }
        // Disjointness recomputed from the sets themselves.
        let mut seen = BTreeSet::new();
        if !trace.index_sets.iter().flatten().all(|m| seen.insert(*m)) {
            why.push("index sets overlap".into());
        }
        for j in 2..=trace.k() {
            let set = trace.index_set(j);
            let first = trace.sigmas[0].restrict(set);
            for s in 1..j {
                if trace.sigmas[s - 1].restrict(set) != first {
                    why.push(format!("restricted order differs at (j, s) = ({j}, {s})"));
                }
            }
        }
        if v.status != Status::Passed {
            why.push(format!("{:?}", v.status));
        }
        if !why.is_empty() {
            run.theorem_violations.push(format!("tuple {i}: {}", why.join(", ")));
        }
    }
    run
}

fn criterion_4(run: &CorpusRun) -> Outcome {
    outcome(
        run.lemma5_violations.is_empty(),
        format!(
            "{} tuples, n in {{2,3,4,5}}, max retries {}, violations {:?}",
            corpus::CORPUS_SIZE,
            run.retries,
            run.lemma5_violations
        ),
    )
}

fn criterion_5(run: &CorpusRun) -> Outcome {
    outcome(
        run.theorem_violations.is_empty(),
        format!("{} tuples, violations {:?}", corpus::CORPUS_SIZE, run.theorem_violations),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(LEMMA_SEED);
    let (mut checked, mut confirmed, mut violations) = (0, 0, Vec::new());
    for k in 0..LEMMA_PAIRS {
        let pair = corpus::random_tuple(&mut r, 2);
        match scan_lemma_mm(&pair[0].cf, &pair[1].cf, LEMMA_MAX_INDEX, LEMMA_MAX_D, COMPARE_DEPTH) {
            Ok(scan) => {
                checked += scan.checked;
                confirmed += scan.confirmed.len();
                violations.extend(scan.violations.iter().map(|c| format!("pair {k}: {c}")));
            }
            Err(e) => violations.push(format!("pair {k}: {e}")),
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{LEMMA_PAIRS} pairs, nu, mu <= {LEMMA_MAX_INDEX}, d <= {LEMMA_MAX_D}: {checked} instances, {confirmed} confirmed, {} violations{}",
            violations.len(),
            first(&violations)
        ),
    )
}

/// Pairs sharing a random word `a_1..a_L` followed by different tails, so
/// that equal star values actually occur.
fn shared_prefix_pairs(seed: u64) -> Vec<(ContinuedFraction, ContinuedFraction)> {
    use rand::Rng;
    let mut r = rng(seed);
    (0..STAR_SHARED_PAIRS)
        .map(|_| {
            let word: Vec<u64> = (0..r.gen_range(2..=8)).map(|_| r.gen_range(1..=9)).collect();
            let a0: i64 = r.gen_range(-2..=3);
            let b0: i64 = r.gen_range(-2..=3);
            let ta: u64 = r.gen_range(1..=9);
            let tb = ta % 9 + 1;
            let pa: Vec<u64> = word.iter().copied().chain([ta]).collect();
            let pb: Vec<u64> = word.iter().copied().chain([tb]).collect();
            (
                ContinuedFraction::periodic(a0, &pa, &[ta, 1]).unwrap(),
                ContinuedFraction::periodic(b0, &pb, &[tb, 2]).unwrap(),
            )
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut pairs: Vec<(ContinuedFraction, ContinuedFraction)> = Vec::new();
    for tuple in corpus::regression_corpus(CORPUS_SEED) {
        for i in 0..tuple.len() {
            for j in i + 1..tuple.len() {
                pairs.push((tuple[i].cf.clone(), tuple[j].cf.clone()));
            }
        }
    }
    pairs.extend(shared_prefix_pairs(STAR_SEED));
    let (mut logged, mut bad) = (0usize, Vec::new());
    for (a, b) in &pairs {
        let log = match scan_coincidences(a, b, SCREEN_DEPTH) {
            Ok(log) => log,
            Err(e) => {
                bad.push(format!("{a} vs {b}: {e}"));
                continue;
            }
        };
        let qa = a.convergents(SCREEN_DEPTH + 1).unwrap();
        let qb = b.convergents(SCREEN_DEPTH + 1).unwrap();
        for s in &log.equal_stars {
            logged += 1;
            // Star values recomputed as q_{ν-1}/q_ν from the convergents.
            let star_a = BigRational::new(qa[s.nu - 1].q.clone(), qa[s.nu].q.clone());
            let star_b = BigRational::new(qb[s.mu - 1].q.clone(), qb[s.mu].q.clone());
            let ok = star_a == star_b && qa[s.nu - 1].q == qb[s.mu - 1].q && qa[s.nu].q == qb[s.mu].q;
            if !ok {
                bad.push(format!("{a} vs {b} at ({}, {})", s.nu, s.mu));
            }
        }
    }
    outcome(
        bad.is_empty() && logged > 0,
        format!("{} pairs, {logged} equal-star coincidences, {} violations{}", pairs.len(), bad.len(), first(&bad)),
    )
}

/// Every report the suite produces, concatenated.
fn full_report(corpus_reports: &str) -> String {
    let mut out = String::from(corpus_reports);
    let mut r = rng(PAIR_SEED);
    for _ in 0..3 {
        let (a, b) = corpus::random_independent_surd_pair(&mut r);
        let (ca, cb) = (a.cf.clone(), b.cf.clone());
        let config = AnalysisConfig {
            t_max: 50_000,
            ..AnalysisConfig::default()
        };
        let ctx = TupleContext::new(vec![a, b], &config).unwrap();
        out.push_str(&sweep(&ctx).unwrap().to_records());
        out.push_str(&scan_coincidences(&ca, &cb, SCREEN_DEPTH).unwrap().to_records());
        out.push_str(&scan_lemma_mm(&ca, &cb, 10, 3, COMPARE_DEPTH).unwrap().to_records());
        for rec in check_remark_pattern(&ca, &cb, 20, ctx.burn_in(), COMPARE_DEPTH).unwrap() {
            writeln!(out, "{}", rec.to_record()).unwrap();
        }
        for (name, svg) in plot_files(&ctx, PlotOptions::default()) {
            writeln!(out, "== {name}").unwrap();
            out.push_str(&svg);
        }
    }
    out
}

fn criterion_8(first: &CorpusRun) -> Outcome {
    let second = run_corpus();
    let a = full_report(&first.reports);
    let b = full_report(&second.reports);
    let members: Vec<Member> = corpus::random_tuple(&mut rng(1), 3);
    let same_corpus = members.iter().zip(corpus::random_tuple(&mut rng(1), 3)).all(|(x, y)| x.cf == y.cf);
    outcome(
        a == b && same_corpus && !a.is_empty(),
        format!("two runs, {} bytes of reports each, identical: {}", a.len(), a == b),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "psi oracle equivalence", criterion_1()));
    results.push((2, "classical identities", criterion_2()));
    results.push((3, "pair sign changes", criterion_3()));
    let run = run_corpus();
    results.push((4, "tau bounded by k_hat", criterion_4(&run)));
    results.push((5, "theorem chain on corpus", criterion_5(&run)));
    results.push((6, "Lemma MM scan", criterion_6()));
    results.push((7, "equal stars share denominators", criterion_7()));
    results.push((8, "determinism", criterion_8(&run)));

    let mut failed = 0;
    for (k, name, o) in &results {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {k} [{name}]: {verdict}: {}", o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

/// `", first: x"` for a non-empty list.
fn first<T: std::fmt::Debug>(items: &[T]) -> String {
    items.first().map_or_else(String::new, |x| format!(", first: {x:?}"))
}
