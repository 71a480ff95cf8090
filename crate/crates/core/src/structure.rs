//! Structural coincidences between two continued fractions: shared
//! consecutive denominators `(q_ν, q_{ν+1}) = (r_μ, r_{μ+1})`, equal star
//! values `α*_ν = β*_μ`, and executable checks of the statements relating
//! them to the order of the error terms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cf::{
    compare_errors, error_enclosure, integer_combination_check, CfError, ContinuedFraction,
    Convergent, ErrorTerm, IntegerCombination, QuadraticSurd,
};
use crate::psi::{build_trajectory_with, fmt_rational, PsiError, StepTrajectory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error("cannot order ξ_{nu} and η_{mu}: {source}")]
    Undecided { nu: usize, mu: usize, source: CfError },
    #[error("equal star values at (ν, μ) = ({nu}, {mu}) without matching denominators")]
    StarDenominatorMismatch { nu: usize, mu: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    IndependentLikely,
    Dependent,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::IndependentLikely => "INDEPENDENT_LIKELY",
            Verdict::Dependent => "DEPENDENT",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedPair {
    pub nu: usize,
    pub mu: usize,
    pub q: BigInt,
    pub q_next: BigInt,
}

/// `α*_ν = β*_μ`, with the denominators that the equality forces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualStar {
    pub nu: usize,
    pub mu: usize,
    pub value: BigRational,
    pub q_prev: BigInt,
    pub q: BigInt,
}

#[derive(Debug, Clone)]
pub struct CoincidenceLog {
    pub shared_pairs: Vec<SharedPair>,
    pub equal_stars: Vec<EqualStar>,
    /// Depth scanned.
    pub horizon: usize,
    pub verdict: Verdict,
    /// Outcome of the symbolic test when both values are known exactly.
    pub combination: Option<IntegerCombination>,
}

impl CoincidenceLog {
    /// Largest denominator involved in any logged coincidence, 0 if none.
    pub fn coincidence_time(&self) -> u64 {
        let pairs = self.shared_pairs.iter().map(|p| &p.q_next);
        let stars = self.equal_stars.iter().map(|s| &s.q);
        pairs
            .chain(stars)
            .map(|q| q.to_u64().unwrap_or(u64::MAX))
            .max()
            .unwrap_or(0)
    }

    /// Largest index at which a coincidence was seen.
    pub fn last_coincidence_index(&self) -> Option<usize> {
        let pairs = self.shared_pairs.iter().map(|p| p.nu.max(p.mu));
        let stars = self.equal_stars.iter().map(|s| s.nu.max(s.mu));
        pairs.chain(stars).max()
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for p in &self.shared_pairs {
            writeln!(out, "shared_pair\t{}\t{}\t{}\t{}", p.nu, p.mu, p.q, p.q_next).unwrap();
        }
        for s in &self.equal_stars {
            writeln!(
                out,
                "equal_star\t{}\t{}\t{}\t{}\t{}",
                s.nu,
                s.mu,
                fmt_rational(&s.value),
                s.q_prev,
                s.q
            )
            .unwrap();
        }
        let combination = match self.combination {
            Some(IntegerCombination::SumInteger) => "SUM_INTEGER",
            Some(IntegerCombination::DiffInteger) => "DIFF_INTEGER",
            Some(IntegerCombination::Neither) => "NEITHER",
            None => "UNKNOWN",
        };
        writeln!(out, "combination\t{combination}").unwrap();
        writeln!(out, "verdict\t{}\t{}", self.verdict, self.horizon).unwrap();
        out
    }
}

/// Star values `[0; a_ν, ..., a_1]` for `ν = 1 ..= depth`, folded directly
/// from the partial quotients.
fn folded_stars(cf: &ContinuedFraction, depth: usize) -> Result<Vec<BigRational>, CfError> {
    let mut stars = Vec::with_capacity(depth);
    let mut v = BigRational::zero();
    for nu in 1..=depth {
        v = (BigRational::from_integer(cf.coefficient(nu)?.into()) + v).recip();
        stars.push(v.clone());
    }
    Ok(stars)
}

/// Logs every coincidence with indices up to `depth`.
pub fn scan_coincidences(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    depth: usize,
) -> Result<CoincidenceLog, StructureError> {
    let qa = a.convergents(depth + 1)?;
    let qb = b.convergents(depth + 1)?;

    let mut by_pair: HashMap<(&BigInt, &BigInt), Vec<usize>> = HashMap::new();
    for w in qa.windows(2) {
        by_pair.entry((&w[0].q, &w[1].q)).or_default().push(w[0].index);
    }
    let mut shared_pairs = Vec::new();
    for w in qb.windows(2) {
        if let Some(nus) = by_pair.get(&(&w[0].q, &w[1].q)) {
            for &nu in nus {
                shared_pairs.push(SharedPair {
                    nu,
                    mu: w[0].index,
                    q: w[0].q.clone(),
                    q_next: w[1].q.clone(),
                });
            }
        }
    }

    let sa = folded_stars(a, depth)?;
    let sb = folded_stars(b, depth)?;
    let mut by_star: HashMap<&BigRational, Vec<usize>> = HashMap::new();
    for (i, s) in sa.iter().enumerate() {
        by_star.entry(s).or_default().push(i + 1);
    }
    let mut equal_stars = Vec::new();
    for (j, s) in sb.iter().enumerate() {
        let mu = j + 1;
        for &nu in by_star.get(s).into_iter().flatten() {
            // Equal stars force equal consecutive denominators.
            if qa[nu - 1].q != qb[mu - 1].q || qa[nu].q != qb[mu].q {
                return Err(StructureError::StarDenominatorMismatch { nu, mu });
            }
            equal_stars.push(EqualStar {
                nu,
                mu,
                value: s.clone(),
                q_prev: qa[nu - 1].q.clone(),
                q: qa[nu].q.clone(),
            });
        }
    }
    shared_pairs.sort_by_key(|p| (p.nu, p.mu));
    equal_stars.sort_by_key(|s| (s.nu, s.mu));

    let combination = match (a.exact_value(), b.exact_value()) {
        (Some(x), Some(y)) => Some(integer_combination_check(&x, &y)),
        _ => None,
    };
    let mut log = CoincidenceLog {
        shared_pairs,
        equal_stars,
        horizon: depth,
        verdict: Verdict::Undecided,
        combination,
    };
    log.verdict = match combination {
        Some(IntegerCombination::SumInteger | IntegerCombination::DiffInteger) => Verdict::Dependent,
        _ => match log.last_coincidence_index() {
            Some(i) if 2 * i >= depth => Verdict::Undecided,
            _ => Verdict::IndependentLikely,
        },
    };
    Ok(log)
}

/// Largest depth up to `want` that `cf` can supply without erroring.
pub fn available_depth(cf: &ContinuedFraction, want: usize) -> usize {
    let cap = want.min(cf.depth_cap());
    match cf.finite_parts() {
        Some(list) => cap.min(list.len()),
        None => cap,
    }
}

/// Certified order of `ξ_ν(a)` and `η_μ(b)`. Values in the same quadratic
/// field are compared exactly, so equality is a possible answer there.
pub fn compare_xi(
    a: &ContinuedFraction,
    nu: usize,
    b: &ContinuedFraction,
    mu: usize,
    max_depth: usize,
) -> Result<Ordering, StructureError> {
    let mut x = error_enclosure(a, nu, 0)?;
    let mut y = error_enclosure(b, mu, 0)?;
    compare_terms(&mut x, &mut y, max_depth)
}

fn exact_xi(term: &ErrorTerm) -> Option<QuadraticSurd> {
    let s = term.owner().exact_value()?;
    Some(s.offset_abs(term.denominator(), term.numerator()))
}

/// Interval comparison with an exact fallback for same-field values.
pub fn compare_terms(x: &mut ErrorTerm, y: &mut ErrorTerm, max_depth: usize) -> Result<Ordering, StructureError> {
    if let Some(order) = x.separated(y) {
        return Ok(order);
    }
    if let (Some(ex), Some(ey)) = (exact_xi(x), exact_xi(y)) {
        if ex.radicand() == ey.radicand() {
            return Ok(ex.cmp_same_field(&ey).expect("same radicand"));
        }
    }
    compare_errors(x, y, max_depth).map_err(|source| StructureError::Undecided {
        nu: x.index(),
        mu: y.index(),
        source,
    })
}

/// Every quantity the lemma mentions, for a given `(ν, μ, d)`.
#[derive(Debug, Clone)]
pub struct LemmaMmCertificate {
    pub nu: usize,
    pub mu: usize,
    pub d: usize,
    /// `ξ_ν` vs `η_μ`.
    pub first: Ordering,
    /// `ξ_{ν+1}` vs `η_{μ+d-1}`.
    pub second: Ordering,
    /// `q_{ν+1}`, `r_{μ+1}`, `q_{ν+2}`, `r_{μ+d}`.
    pub denominators: [BigInt; 4],
    /// `α*_{ν+2}` and `β*_{μ+2}`.
    pub stars: (BigRational, BigRational),
}

impl fmt::Display for LemmaMmCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [q1, r1, q2, rd] = &self.denominators;
        write!(
            f,
            "nu={} mu={} d={} xi_nu?eta_mu={:?} xi_nu+1?eta_mu+d-1={:?} q_nu+1={} r_mu+1={} q_nu+2={} r_mu+d={} star_a={} star_b={}",
            self.nu,
            self.mu,
            self.d,
            self.first,
            self.second,
            q1,
            r1,
            q2,
            rd,
            fmt_rational(&self.stars.0),
            fmt_rational(&self.stars.1)
        )
    }
}

#[derive(Debug, Clone)]
pub enum LemmaMmOutcome {
    NotApplicable,
    Confirmed(Box<LemmaMmCertificate>),
    Violation(Box<LemmaMmCertificate>),
}

impl LemmaMmOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, LemmaMmOutcome::Violation(_))
    }
}

/// If `ξ_ν ≤ η_μ`, `ξ_{ν+1} ≤ η_{μ+d-1}`, `q_{ν+1} ≤ r_{μ+1}` and
/// `q_{ν+2} = r_{μ+d}` all hold, the three inequalities must be equalities,
/// `d = 2`, and `α*_{ν+2} = β*_{μ+2}`.
pub fn check_lemma_mm(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    nu: usize,
    mu: usize,
    d: usize,
    max_depth: usize,
) -> Result<LemmaMmOutcome, StructureError> {
    assert!(d >= 1, "d must be positive");
    let qa = a.convergents(nu + 3)?;
    let qb = b.convergents((mu + d).max(mu + 2) + 1)?;
    let MmData { first, second } = match mm_hypotheses(a, b, &qa, &qb, nu, mu, d, max_depth)? {
        Some(data) => data,
        None => return Ok(LemmaMmOutcome::NotApplicable),
    };
    let star = |c: &[Convergent], i: usize| BigRational::new(c[i - 1].q.clone(), c[i].q.clone());
    let cert = LemmaMmCertificate {
        nu,
        mu,
        d,
        first,
        second,
        denominators: [
            qa[nu + 1].q.clone(),
            qb[mu + 1].q.clone(),
            qa[nu + 2].q.clone(),
            qb[mu + d].q.clone(),
        ],
        stars: (star(&qa, nu + 2), star(&qb, mu + 2)),
    };
    let holds = first == Ordering::Equal
        && second == Ordering::Equal
        && cert.denominators[0] == cert.denominators[1]
        && d == 2
        && cert.stars.0 == cert.stars.1;
    Ok(if holds {
        LemmaMmOutcome::Confirmed(Box::new(cert))
    } else {
        LemmaMmOutcome::Violation(Box::new(cert))
    })
}

struct MmData {
    first: Ordering,
    second: Ordering,
}

#[allow(clippy::too_many_arguments)]
fn mm_hypotheses(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    qa: &[Convergent],
    qb: &[Convergent],
    nu: usize,
    mu: usize,
    d: usize,
    max_depth: usize,
) -> Result<Option<MmData>, StructureError> {
    if qa[nu + 2].q != qb[mu + d].q || qa[nu + 1].q > qb[mu + 1].q {
        return Ok(None);
    }
    let first = compare_xi(a, nu, b, mu, max_depth)?;
    if first == Ordering::Greater {
        return Ok(None);
    }
    let second = compare_xi(a, nu + 1, b, mu + d - 1, max_depth)?;
    if second == Ordering::Greater {
        return Ok(None);
    }
    Ok(Some(MmData { first, second }))
}

/// Tally of an exhaustive `(ν, μ, d)` scan.
#[derive(Debug, Clone, Default)]
pub struct LemmaMmScan {
    pub checked: usize,
    pub confirmed: Vec<LemmaMmCertificate>,
    pub violations: Vec<LemmaMmCertificate>,
}

impl LemmaMmScan {
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for c in &self.confirmed {
            writeln!(out, "lemma_mm\tCONFIRMED\t{c}").unwrap();
        }
        for c in &self.violations {
            writeln!(out, "lemma_mm\tVIOLATION\t{c}").unwrap();
        }
        writeln!(
            out,
            "lemma_mm_summary\tchecked={}\tconfirmed={}\tviolations={}",
            self.checked,
            self.confirmed.len(),
            self.violations.len()
        )
        .unwrap();
        out
    }
}

/// Runs [`check_lemma_mm`] for all `ν, μ ≤ max_index` and `1 ≤ d ≤ max_d`.
pub fn scan_lemma_mm(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    max_index: usize,
    max_d: usize,
    max_depth: usize,
) -> Result<LemmaMmScan, StructureError> {
    let mut scan = LemmaMmScan::default();
    for nu in 0..=max_index {
        for mu in 0..=max_index {
            for d in 1..=max_d {
                scan.checked += 1;
                match check_lemma_mm(a, b, nu, mu, d, max_depth)? {
                    LemmaMmOutcome::NotApplicable => {}
                    LemmaMmOutcome::Confirmed(c) => scan.confirmed.push(*c),
                    LemmaMmOutcome::Violation(c) => scan.violations.push(*c),
                }
            }
        }
    }
    Ok(scan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemarkStatus {
    /// `ψ_α(T − 1) < ψ_β(T − 1)` fails, or there is no earlier time.
    NotApplicable,
    Holds,
    Fails,
}

impl fmt::Display for RemarkStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemarkStatus::NotApplicable => "NOT_APPLICABLE",
            RemarkStatus::Holds => "HOLDS",
            RemarkStatus::Fails => "FAILS",
        })
    }
}

/// `ψ_α(t)` and `ψ_β(t)` at one time, with their certified order.
#[derive(Debug, Clone)]
pub struct ComparedValues {
    pub t: u64,
    pub a: ErrorTerm,
    pub b: ErrorTerm,
    pub order: Ordering,
}

/// One shared denominator `T = q_ν = r_μ`.
///
/// `before` compares the two functions at `T − 1`. When `α` is the lower
/// one there, `earlier` compares them at `q_{ν-1} − 1` (the time before
/// `α`'s previous jump), where `α` is predicted to be the higher one.
/// `alternate` holds the same comparison at `r_{μ-1} − 1`, for reference.
#[derive(Debug, Clone)]
pub struct RemarkRecord {
    pub t: u64,
    pub nu: usize,
    pub mu: usize,
    pub before: ComparedValues,
    pub earlier: Option<ComparedValues>,
    pub alternate: Option<ComparedValues>,
    pub status: RemarkStatus,
}

impl RemarkRecord {
    pub fn to_record(&self) -> String {
        let side = |c: &Option<ComparedValues>| match c {
            Some(c) => format!(
                "{}:{:?}:[{},{}]:[{},{}]",
                c.t,
                c.order,
                fmt_rational(c.a.lo()),
                fmt_rational(c.a.hi()),
                fmt_rational(c.b.lo()),
                fmt_rational(c.b.hi())
            ),
            None => "-".to_string(),
        };
        format!(
            "remark\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.t,
            self.nu,
            self.mu,
            self.status,
            side(&Some(self.before.clone())),
            side(&self.earlier),
            side(&self.alternate)
        )
    }
}

fn compare_at(
    ta: &StepTrajectory,
    tb: &StepTrajectory,
    t: u64,
    max_depth: usize,
) -> Result<ComparedValues, StructureError> {
    let mut a = ta.psi_at(t)?.clone();
    let mut b = tb.psi_at(t)?.clone();
    let order = compare_terms(&mut a, &mut b, max_depth)?;
    Ok(ComparedValues { t, a, b, order })
}

/// Examines every shared denominator `q_ν = r_μ > burn_in` with indices up
/// to `depth`.
pub fn check_remark_pattern(
    a: &ContinuedFraction,
    b: &ContinuedFraction,
    depth: usize,
    burn_in: u64,
    max_depth: usize,
) -> Result<Vec<RemarkRecord>, StructureError> {
    let qa = a.convergents(depth + 1)?;
    let qb = b.convergents(depth + 1)?;
    let mut shared: Vec<(u64, usize, usize)> = Vec::new();
    let mut index_b: HashMap<&BigInt, usize> = HashMap::new();
    for c in &qb {
        index_b.insert(&c.q, c.index);
    }
    for c in qa.iter().skip(1) {
        let Some(t) = c.q.to_u64() else { break };
        if t <= burn_in.max(1) {
            continue;
        }
        if let Some(&mu) = index_b.get(&c.q) {
            shared.push((t, c.index, mu));
        }
    }
    let Some(&(t_last, _, _)) = shared.last() else {
        return Ok(Vec::new());
    };
    let ta = build_trajectory_with(a, t_last, max_depth)?;
    let tb = build_trajectory_with(b, t_last, max_depth)?;

    let mut records = Vec::new();
    for (t, nu, mu) in shared {
        let before = compare_at(&ta, &tb, t - 1, max_depth)?;
        let earlier_time = |c: &[Convergent], i: usize| {
            c[i - 1].q.to_u64().filter(|&q| q >= 2 && q < t).map(|q| q - 1)
        };
        let applicable = before.order == Ordering::Less;
        let earlier = match earlier_time(&qa, nu) {
            Some(s) if applicable => Some(compare_at(&ta, &tb, s, max_depth)?),
            _ => None,
        };
        let alternate = match earlier_time(&qb, mu) {
            Some(s) if applicable => Some(compare_at(&ta, &tb, s, max_depth)?),
            _ => None,
        };
        let status = match &earlier {
            None => RemarkStatus::NotApplicable,
            Some(e) if e.order == Ordering::Greater => RemarkStatus::Holds,
            Some(_) => RemarkStatus::Fails,
        };
        records.push(RemarkRecord {
            t,
            nu,
            mu,
            before,
            earlier,
            alternate,
            status,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> ContinuedFraction {
        ContinuedFraction::periodic(1, &[], &[2]).unwrap()
    }

    fn phi() -> ContinuedFraction {
        ContinuedFraction::periodic(1, &[], &[1]).unwrap()
    }

    #[test]
    fn dependent_pairs() {
        let shifted = ContinuedFraction::periodic(2, &[], &[2]).unwrap();
        let log = scan_coincidences(&sqrt2(), &shifted, 40).unwrap();
        assert_eq!(log.verdict, Verdict::Dependent);
        assert_eq!(log.combination, Some(IntegerCombination::DiffInteger));
        assert_eq!(scan_coincidences(&sqrt2(), &sqrt2(), 40).unwrap().verdict, Verdict::Dependent);
        // 1 − √2 = [−1; 1, 1, (2)]: α + β = 1.
        let mirror = ContinuedFraction::periodic(-1, &[1, 1], &[2]).unwrap();
        let log = scan_coincidences(&sqrt2(), &mirror, 40).unwrap();
        assert_eq!(log.combination, Some(IntegerCombination::SumInteger));
        assert_eq!(log.verdict, Verdict::Dependent);
        assert!(log.shared_pairs.iter().any(|p| p.nu > 30));
    }

    #[test]
    fn sqrt2_and_phi_are_independent_likely() {
        let log = scan_coincidences(&sqrt2(), &phi(), 40).unwrap();
        assert_eq!(log.verdict, Verdict::IndependentLikely);
        assert_eq!(log.combination, Some(IntegerCombination::Neither));
        assert!(log.last_coincidence_index().unwrap_or(0) < 5);
        // q = 1, 2 shared by both, then denominators diverge.
        assert!(log.coincidence_time() <= 5);
    }

    #[test]
    fn rule_streams_without_exact_values() {
        let a = ContinuedFraction::from_rule(0, |n| (n % 5) as u64 + 1);
        let log = scan_coincidences(&a, &a.clone(), 30).unwrap();
        assert_eq!(log.combination, None);
        assert_eq!(log.verdict, Verdict::Undecided);
    }

    #[test]
    fn equal_stars_carry_denominators() {
        // Same word a_1..a_4 with different continuations.
        let a = ContinuedFraction::periodic(0, &[3, 1, 4, 1], &[5]).unwrap();
        let b = ContinuedFraction::periodic(2, &[3, 1, 4, 1], &[2]).unwrap();
        let log = scan_coincidences(&a, &b, 20).unwrap();
        let nus: Vec<usize> = log.equal_stars.iter().map(|s| s.nu).collect();
        assert_eq!(&nus[..4], &[1, 2, 3, 4]);
        for s in &log.equal_stars {
            assert_eq!(s.value, BigRational::new(s.q_prev.clone(), s.q.clone()));
        }
    }

    #[test]
    fn lemma_mm_confirmed_on_identical_numbers() {
        for nu in 0..10 {
            match check_lemma_mm(&sqrt2(), &sqrt2(), nu, nu, 2, 64).unwrap() {
                LemmaMmOutcome::Confirmed(c) => assert_eq!(c.d, 2),
                other => panic!("{other:?}"),
            }
            assert!(matches!(
                check_lemma_mm(&sqrt2(), &sqrt2(), nu, nu + 1, 1, 64).unwrap(),
                LemmaMmOutcome::NotApplicable
            ));
        }
    }

    #[test]
    fn lemma_mm_not_applicable_without_shared_denominator() {
        assert!(matches!(
            check_lemma_mm(&sqrt2(), &phi(), 3, 3, 2, 64).unwrap(),
            LemmaMmOutcome::NotApplicable
        ));
    }

    #[test]
    fn lemma_mm_scan_pair() {
        let scan = scan_lemma_mm(&sqrt2(), &phi(), 25, 4, 64).unwrap();
        assert!(scan.violations.is_empty(), "{}", scan.to_records());
        assert_eq!(scan.checked, 26 * 26 * 4);
    }

    #[test]
    fn remark_on_phi_and_sqrt2() {
        let records = check_remark_pattern(&phi(), &sqrt2(), 20, 1, 64).unwrap();
        let r = records.iter().find(|r| r.t == 5).expect("5 is shared");
        assert_eq!((r.nu, r.mu), (4, 2));
        assert_eq!(r.before.order, Ordering::Less);
        let earlier = r.earlier.as_ref().unwrap();
        assert_eq!(earlier.t, 2);
        assert_eq!(earlier.order, Ordering::Greater);
        assert_eq!(r.status, RemarkStatus::Holds);
        // Roles swapped: √2 is above φ just before 5.
        let swapped = check_remark_pattern(&sqrt2(), &phi(), 20, 1, 64).unwrap();
        let r = swapped.iter().find(|r| r.t == 5).unwrap();
        assert_eq!(r.status, RemarkStatus::NotApplicable);
        assert!(r.earlier.is_none());
    }

    #[test]
    fn remark_without_shared_denominators() {
        let a = ContinuedFraction::periodic(0, &[], &[7]).unwrap();
        let b = ContinuedFraction::periodic(0, &[], &[3]).unwrap();
        assert!(check_remark_pattern(&a, &b, 15, 1, 64).unwrap().is_empty());
    }

    #[test]
    fn available_depth_respects_backing() {
        let f = ContinuedFraction::finite(0, &[1, 2, 3]).unwrap();
        assert_eq!(available_depth(&f, 40), 3);
        assert_eq!(available_depth(&sqrt2().with_depth_cap(20), 40), 20);
    }
}
