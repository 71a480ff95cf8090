//! Permutation dynamics of an n-tuple: the ordering `σ(t)` of the members
//! by decreasing `ψ`, the jump count `τ(t)`, pairwise sign changes and the
//! number of distinct orderings seen in a finite window.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cf::{ContinuedFraction, ErrorTerm, QuadraticSurd, DEFAULT_MAX_COMPARE_DEPTH};
use crate::psi::{build_trajectory_with, PsiError, StepTrajectory};
use crate::structure::{
    available_depth, compare_terms, scan_coincidences, CoincidenceLog, StructureError, Verdict,
};

pub const DEFAULT_T_MAX: u64 = 1_000_000;
pub const MIN_BURN_IN: u64 = 100;
pub const DEFAULT_SCREENING_DEPTH: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("a tuple needs at least two members, got {0}")]
    TooFewMembers(usize),
    #[error("members {} and {} are dependent", .0 + 1, .1 + 1)]
    Dependent(usize, usize),
    #[error("burn-in {burn_in} must be positive and below the horizon {t_max}")]
    EmptyWindow { burn_in: u64, t_max: u64 },
    #[error("time {t} is outside the window [{t0}, {t_max}]")]
    OutsideWindow { t: u64, t0: u64, t_max: u64 },
    #[error("member index {0} out of range")]
    BadIndex(usize),
    #[error("cannot order members {} and {} at t = {t}", .i + 1, .j + 1)]
    UndecidedOrdering { t: u64, i: usize, j: usize },
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A named member of a tuple.
#[derive(Debug, Clone)]
pub struct Member {
    pub name: String,
    pub cf: ContinuedFraction,
    pub surd: Option<QuadraticSurd>,
}

impl Member {
    pub fn from_cf(name: impl Into<String>, cf: ContinuedFraction) -> Self {
        let surd = cf.exact_value();
        Member {
            name: name.into(),
            cf,
            surd,
        }
    }

    pub fn from_surd(name: impl Into<String>, surd: QuadraticSurd) -> Result<Self, crate::cf::SurdError> {
        let cf = crate::cf::surd_to_cf(&surd)?;
        Ok(Member {
            name: name.into(),
            cf,
            surd: Some(surd),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub t_max: u64,
    /// `None` picks `max(coincidence time, 100)`.
    pub burn_in: Option<u64>,
    pub max_compare_depth: usize,
    pub screening_depth: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            t_max: DEFAULT_T_MAX,
            burn_in: None,
            max_compare_depth: DEFAULT_MAX_COMPARE_DEPTH,
            screening_depth: DEFAULT_SCREENING_DEPTH,
        }
    }
}

/// A screened tuple with materialized trajectories on `[1, T_max]`.
#[derive(Debug, Clone)]
pub struct TupleContext {
    members: Vec<Member>,
    trajectories: Vec<StepTrajectory>,
    screening: Vec<((usize, usize), CoincidenceLog)>,
    burn_in: u64,
    t_max: u64,
    max_compare_depth: usize,
}

impl TupleContext {
    pub fn new(members: Vec<Member>, config: &AnalysisConfig) -> Result<Self, PermError> {
        if members.len() < 2 {
            return Err(PermError::TooFewMembers(members.len()));
        }
        let mut screening = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let depth = available_depth(&members[i].cf, config.screening_depth)
                    .min(available_depth(&members[j].cf, config.screening_depth));
                let log = scan_coincidences(&members[i].cf, &members[j].cf, depth)?;
                if log.verdict == Verdict::Dependent {
                    return Err(PermError::Dependent(i, j));
                }
                screening.push(((i, j), log));
            }
        }
        let coincidence = screening
            .iter()
            .map(|(_, log)| log.coincidence_time())
            .max()
            .unwrap_or(0);
        let burn_in = config.burn_in.unwrap_or(coincidence.max(MIN_BURN_IN));
        if burn_in == 0 || burn_in >= config.t_max {
            return Err(PermError::EmptyWindow {
                burn_in,
                t_max: config.t_max,
            });
        }
        let trajectories = members
            .iter()
            .map(|m| build_trajectory_with(&m.cf, config.t_max, config.max_compare_depth))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TupleContext {
            members,
            trajectories,
            screening,
            burn_in,
            t_max: config.t_max,
            max_compare_depth: config.max_compare_depth,
        })
    }

    /// Same tuple and burn-in over a different horizon.
    pub fn with_t_max(&self, t_max: u64) -> Result<Self, PermError> {
        if t_max <= self.burn_in {
            return Err(PermError::EmptyWindow {
                burn_in: self.burn_in,
                t_max,
            });
        }
        let trajectories = self
            .members
            .iter()
            .map(|m| build_trajectory_with(&m.cf, t_max, self.max_compare_depth))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TupleContext {
            trajectories,
            t_max,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn trajectories(&self) -> &[StepTrajectory] {
        &self.trajectories
    }

    /// Pairwise coincidence logs, keyed by 0-based member indices.
    pub fn screening(&self) -> &[((usize, usize), CoincidenceLog)] {
        &self.screening
    }

    pub fn burn_in(&self) -> u64 {
        self.burn_in
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    pub fn max_compare_depth(&self) -> usize {
        self.max_compare_depth
    }

    fn check_window(&self, t: u64) -> Result<(), PermError> {
        if t < self.burn_in || t > self.t_max {
            return Err(PermError::OutsideWindow {
                t,
                t0: self.burn_in,
                t_max: self.t_max,
            });
        }
        Ok(())
    }

    fn terms_at(&self, t: u64) -> Result<Vec<ErrorTerm>, PermError> {
        self.trajectories
            .iter()
            .map(|tr| Ok(tr.psi_at(t)?.clone()))
            .collect()
    }
}

/// Members listed by decreasing `ψ`; 0-based internally, shown 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `rank[m]` is the position of member `m`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.0.len()];
        for (pos, &m) in self.0.iter().enumerate() {
            rank[m] = pos;
        }
        rank
    }

    /// Order of the members in `subset` induced by this permutation.
    pub fn restrict(&self, subset: &[usize]) -> Vec<usize> {
        self.0.iter().copied().filter(|m| subset.contains(m)).collect()
    }

    /// Parses `2,1,3` (1-based).
    pub fn parse(s: &str) -> Option<Self> {
        let v: Option<Vec<usize>> = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1))
            .collect();
        let v = v?;
        let mut seen = vec![false; v.len()];
        for &m in &v {
            if m >= v.len() || std::mem::replace(&mut seen[m], true) {
                return None;
            }
        }
        Some(Permutation(v))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_one_based(&self.0))
    }
}

pub(crate) fn join_one_based(v: &[usize]) -> String {
    v.iter().map(|m| (m + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn cmp_members(
    terms: &mut [ErrorTerm],
    i: usize,
    j: usize,
    t: u64,
    max_depth: usize,
) -> Result<Ordering, PermError> {
    let undecided = PermError::UndecidedOrdering { t, i, j };
    let (x, y) = if i < j {
        let (lo, hi) = terms.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = terms.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    };
    match compare_terms(x, y, max_depth) {
        Ok(Ordering::Equal) | Err(StructureError::Undecided { .. }) => Err(undecided),
        Ok(order) => Ok(order),
        Err(e) => Err(e.into()),
    }
}

/// Insertion sort by decreasing value, starting from `order`.
fn sort_descending(
    order: &mut [usize],
    terms: &mut [ErrorTerm],
    t: u64,
    max_depth: usize,
) -> Result<(), PermError> {
    for k in 1..order.len() {
        let mut pos = k;
        while pos > 0 && cmp_members(terms, order[pos], order[pos - 1], t, max_depth)? == Ordering::Greater {
            order.swap(pos, pos - 1);
            pos -= 1;
        }
    }
    Ok(())
}

/// `σ(t)` for `T_0 ≤ t ≤ T_max`.
pub fn sigma_at(ctx: &TupleContext, t: u64) -> Result<Permutation, PermError> {
    ctx.check_window(t)?;
    let mut terms = ctx.terms_at(t)?;
    let mut order: Vec<usize> = (0..ctx.len()).collect();
    sort_descending(&mut order, &mut terms, t, ctx.max_compare_depth)?;
    Ok(Permutation(order))
}

/// `τ(t)`: how many members jump at `t`.
pub fn tau_at(ctx: &TupleContext, t: u64) -> usize {
    ctx.trajectories.iter().filter(|tr| tr.is_breakpoint(t)).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationEvent {
    pub t: u64,
    pub before: Permutation,
    pub after: Permutation,
    /// Sorted 0-based member indices.
    pub jumpers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOccurrence {
    pub perm: Permutation,
    pub first: u64,
    /// Last time in the window at which this ordering holds.
    pub last: u64,
    /// Number of separate stretches of time it holds.
    pub visits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryReport {
    pub n: usize,
    pub t0: u64,
    pub t_max: u64,
    pub initial: Permutation,
    pub events: Vec<PermutationEvent>,
    /// Distinct orderings in `[T_0, T_max]`, by first occurrence.
    pub census: Vec<PermOccurrence>,
    pub k_hat: usize,
    pub max_tau: usize,
    /// Symmetric, zero diagonal.
    pub sign_changes: Vec<Vec<u64>>,
}

impl TrajectoryReport {
    /// Ordering in force at `t`.
    pub fn sigma(&self, t: u64) -> Option<&Permutation> {
        if t < self.t0 || t > self.t_max {
            return None;
        }
        let i = self.events.partition_point(|e| e.t <= t);
        Some(if i == 0 { &self.initial } else { &self.events[i - 1].after })
    }

    pub fn to_records(&self) -> String {
        let mut out = String::from("# t\tbefore\tafter\tjumpers\n");
        for e in &self.events {
            writeln!(out, "{}\t{}\t{}\t{}", e.t, e.before, e.after, join_one_based(&e.jumpers)).unwrap();
        }
        out.push_str("# summary\n");
        writeln!(out, "n\t{}", self.n).unwrap();
        writeln!(out, "window\t{}\t{}", self.t0, self.t_max).unwrap();
        writeln!(out, "initial\t{}", self.initial).unwrap();
        writeln!(out, "k_hat\t{}", self.k_hat).unwrap();
        writeln!(out, "max_tau\t{}", self.max_tau).unwrap();
        for o in &self.census {
            writeln!(out, "perm\t{}\t{}\t{}\t{}", o.perm, o.first, o.last, o.visits).unwrap();
        }
        for (i, row) in self.sign_changes.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(out, "sign_changes\t{}\t{}", i + 1, cells.join(",")).unwrap();
        }
        out
    }
}

/// Sweep over the full window `(T_0, T_max]`.
pub fn sweep(ctx: &TupleContext) -> Result<TrajectoryReport, PermError> {
    sweep_window(ctx, ctx.burn_in, ctx.t_max)
}

/// Evaluates `σ` at `from` and at every merged breakpoint in `(from, to]`.
pub fn sweep_window(ctx: &TupleContext, from: u64, to: u64) -> Result<TrajectoryReport, PermError> {
    ctx.check_window(from)?;
    ctx.check_window(to)?;
    let n = ctx.len();
    let depth = ctx.max_compare_depth;
    let mut terms = ctx.terms_at(from)?;
    let mut order: Vec<usize> = (0..n).collect();
    sort_descending(&mut order, &mut terms, from, depth)?;
    let initial = Permutation(order.clone());

    let mut heap = BinaryHeap::new();
    let mut streams: Vec<_> = ctx
        .trajectories
        .iter()
        .map(|tr| tr.jump_times(from, to))
        .collect();
    for (m, s) in streams.iter_mut().enumerate() {
        if let Some(t) = s.next() {
            heap.push(Reverse((t, m)));
        }
    }

    let mut events = Vec::new();
    let mut census: Vec<PermOccurrence> = vec![PermOccurrence {
        perm: initial.clone(),
        first: from,
        last: to,
        visits: 1,
    }];
    let mut slot: HashMap<Permutation, usize> = HashMap::from([(initial.clone(), 0)]);
    let mut current = 0usize;
    let mut sign_changes = vec![vec![0u64; n]; n];
    let mut max_tau = 0;

    while let Some(Reverse((t, _))) = heap.peek().copied() {
        let mut jumpers = Vec::new();
        while let Some(&Reverse((s, m))) = heap.peek() {
            if s != t {
                break;
            }
            heap.pop();
            jumpers.push(m);
            if let Some(next) = streams[m].next() {
                heap.push(Reverse((next, m)));
            }
        }
        jumpers.sort_unstable();
        for &m in &jumpers {
            terms[m] = ctx.trajectories[m].psi_at(t)?.clone();
        }
        let before = Permutation(order.clone());
        sort_descending(&mut order, &mut terms, t, depth)?;
        let after = Permutation(order.clone());
        max_tau = max_tau.max(jumpers.len());

        if after != before {
            let (rb, ra) = (before.ranks(), after.ranks());
            for i in 0..n {
                for j in i + 1..n {
                    if (rb[i] < rb[j]) != (ra[i] < ra[j]) {
                        sign_changes[i][j] += 1;
                        sign_changes[j][i] += 1;
                    }
                }
            }
            census[current].last = t - 1;
            current = match slot.get(&after) {
                Some(&k) => {
                    census[k].visits += 1;
                    k
                }
                None => {
                    census.push(PermOccurrence {
                        perm: after.clone(),
                        first: t,
                        last: to,
                        visits: 1,
                    });
                    slot.insert(after.clone(), census.len() - 1);
                    census.len() - 1
                }
            };
            census[current].last = to;
        }
        events.push(PermutationEvent {
            t,
            before,
            after,
            jumpers,
        });
    }

    Ok(TrajectoryReport {
        n,
        t0: from,
        t_max: to,
        initial,
        events,
        k_hat: census.len(),
        census,
        max_tau,
        sign_changes,
    })
}

/// Flips in the order of `ψ_i` and `ψ_j` over `(T_0, T_max]`, evaluated
/// only at the breakpoints of the two members.
pub fn sign_change_count(ctx: &TupleContext, i: usize, j: usize) -> Result<u64, PermError> {
    let n = ctx.len();
    if i >= n {
        return Err(PermError::BadIndex(i));
    }
    if j >= n || i == j {
        return Err(PermError::BadIndex(j));
    }
    let (ti, tj) = (&ctx.trajectories[i], &ctx.trajectories[j]);
    let (from, to) = (ctx.burn_in, ctx.t_max);
    let order_at = |t: u64| -> Result<Ordering, PermError> {
        let mut terms = vec![ti.psi_at(t)?.clone(), tj.psi_at(t)?.clone()];
        cmp_members(&mut terms, 0, 1, t, ctx.max_compare_depth).map_err(|e| match e {
            PermError::UndecidedOrdering { t, .. } => PermError::UndecidedOrdering { t, i, j },
            other => other,
        })
    };
    let mut times: Vec<u64> = ti.jump_times(from, to).chain(tj.jump_times(from, to)).collect();
    times.sort_unstable();
    times.dedup();
    let mut prev = order_at(from)?;
    let mut flips = 0;
    for t in times {
        let cur = order_at(t)?;
        if cur != prev {
            flips += 1;
            prev = cur;
        }
    }
    Ok(flips)
}

/// Result of growing the window until a condition holds.
#[derive(Debug, Clone)]
pub struct Doubling {
    pub ctx: TupleContext,
    pub report: TrajectoryReport,
    pub doublings: u32,
    pub reached: bool,
}

/// Sweeps, doubling `T_max` up to `max_doublings` times until `done`
/// accepts the report.
pub fn sweep_until(
    ctx: &TupleContext,
    max_doublings: u32,
    done: impl Fn(&TupleContext, &TrajectoryReport) -> Result<bool, PermError>,
) -> Result<Doubling, PermError> {
    let mut ctx = ctx.clone();
    let mut doublings = 0;
    loop {
        let report = sweep(&ctx)?;
        let reached = done(&ctx, &report)?;
        if reached || doublings == max_doublings {
            return Ok(Doubling {
                ctx,
                report,
                doublings,
                reached,
            });
        }
        let t_max = ctx.t_max.saturating_mul(2);
        ctx = ctx.with_t_max(t_max)?;
        doublings += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> Member {
        Member::from_cf("phi", ContinuedFraction::periodic(1, &[], &[1]).unwrap())
    }

    fn sqrt2() -> Member {
        Member::from_cf("sqrt2", ContinuedFraction::periodic(1, &[], &[2]).unwrap())
    }

    fn pair_ctx(burn_in: u64, t_max: u64) -> TupleContext {
        let config = AnalysisConfig {
            t_max,
            burn_in: Some(burn_in),
            ..AnalysisConfig::default()
        };
        TupleContext::new(vec![phi(), sqrt2()], &config).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn sigma_small_times() {
        let ctx = pair_ctx(1, 10_000);
        // ||φ|| = 2 − φ ≈ 0.382 < √2 − 1 ≈ 0.414
        assert_eq!(sigma_at(&ctx, 1).unwrap(), perm("2,1"));
        assert_eq!(sigma_at(&ctx, 2).unwrap(), perm("1,2"));
        assert_eq!(sigma_at(&ctx, 4).unwrap(), perm("2,1"));
        assert_eq!(sigma_at(&ctx, 6).unwrap(), sigma_at(&ctx, 7).unwrap());
        assert!(matches!(sigma_at(&ctx, 10_001), Err(PermError::OutsideWindow { .. })));
    }

    #[test]
    fn tau_examples() {
        let ctx = pair_ctx(1, 10_000);
        assert_eq!(tau_at(&ctx, 5), 2);
        assert_eq!(tau_at(&ctx, 4), 0);
        assert_eq!(tau_at(&ctx, 12), 1);
    }

    #[test]
    fn pair_sweep() {
        let ctx = pair_ctx(1, 10_000);
        let report = sweep(&ctx).unwrap();
        assert_eq!(report.k_hat, 2);
        assert!(report.max_tau <= report.k_hat);
        let flips = sign_change_count(&ctx, 0, 1).unwrap();
        assert!(flips >= 2);
        assert_eq!(report.sign_changes[0][1], flips);
        for e in &report.events {
            assert_eq!(e.jumpers.len(), tau_at(&ctx, e.t));
            assert_eq!(e.after, sigma_at(&ctx, e.t).unwrap());
            assert_eq!(e.before, sigma_at(&ctx, e.t - 1).unwrap());
        }
        let first = &report.census[0];
        assert_eq!((first.perm.clone(), first.first), (perm("2,1"), 1));
    }

    #[test]
    fn empty_window_has_one_permutation() {
        // √2 jumps at 169 and 408, φ at 377 and 610.
        let ctx = pair_ctx(378, 407);
        let report = sweep(&ctx).unwrap();
        assert!(report.events.is_empty());
        assert_eq!(report.k_hat, 1);
        assert_eq!(report.max_tau, 0);
        assert_eq!(sign_change_count(&ctx, 0, 1).unwrap(), 0);
    }

    #[test]
    fn windows_concatenate() {
        let ctx = pair_ctx(1, 5_000);
        let whole = sweep(&ctx).unwrap();
        let left = sweep_window(&ctx, 1, 300).unwrap();
        let right = sweep_window(&ctx, 300, 5_000).unwrap();
        let joined: Vec<_> = left.events.into_iter().chain(right.events).collect();
        assert_eq!(joined, whole.events);
    }

    #[test]
    fn dependent_tuple_rejected() {
        let shifted = Member::from_cf("s", ContinuedFraction::periodic(2, &[], &[2]).unwrap());
        let err = TupleContext::new(vec![sqrt2(), phi(), shifted], &AnalysisConfig::default()).unwrap_err();
        assert_eq!(err, PermError::Dependent(0, 2));
        assert_eq!(
            TupleContext::new(vec![phi()], &AnalysisConfig::default()).unwrap_err(),
            PermError::TooFewMembers(1)
        );
    }

    #[test]
    fn default_burn_in() {
        let ctx = TupleContext::new(vec![phi(), sqrt2()], &AnalysisConfig::default()).unwrap();
        assert_eq!(ctx.burn_in(), MIN_BURN_IN);
        let config = AnalysisConfig {
            t_max: 50,
            ..AnalysisConfig::default()
        };
        assert!(matches!(
            TupleContext::new(vec![phi(), sqrt2()], &config),
            Err(PermError::EmptyWindow { .. })
        ));
    }

    #[test]
    fn doubling_reaches_pair_floor() {
        let ctx = pair_ctx(100, 150);
        let out = sweep_until(&ctx, 20, |_, r| Ok(r.k_hat >= 2)).unwrap();
        assert!(out.reached);
        assert_eq!(out.ctx.t_max(), 150 << out.doublings);
    }

    #[test]
    fn permutation_text() {
        let p = perm("3,1,2");
        assert_eq!(p.0, vec![2, 0, 1]);
        assert_eq!(p.to_string(), "3,1,2");
        assert_eq!(p.ranks(), vec![1, 2, 0]);
        assert_eq!(p.restrict(&[0, 2]), vec![2, 0]);
        assert!(Permutation::parse("1,1").is_none());
        assert!(Permutation::parse("0,1").is_none());
    }

    #[test]
    fn records_layout() {
        let report = sweep(&pair_ctx(1, 30)).unwrap();
        let text = report.to_records();
        assert!(text.starts_with("# t\tbefore\tafter\tjumpers\n2\t"));
        assert!(text.contains("\n5\t"));
        assert!(text.contains("k_hat\t2\n"));
        assert!(text.contains("sign_changes\t1\t0,"));
    }
}
