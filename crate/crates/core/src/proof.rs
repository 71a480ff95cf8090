//! Replays the counting argument behind `n ≤ k(k+1)/2` on a concrete sweep:
//! first-occurrence times `T_j`, the index sets `I_j` of members first
//! jumping there, and the inequalities chained from them.

use std::fmt::Write as _;

use thiserror::Error;

use crate::perm::{join_one_based, sweep, Permutation, PermError, TrajectoryReport, TupleContext};

pub const DEFAULT_RETRIES: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("only {k_hat} distinct permutation(s) in [{t0}, {t_max}]")]
    WindowTooShort { k_hat: usize, t0: u64, t_max: u64 },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Members `m, s ∈ I_j` whose order at `T_1` is reversed at `T_i`, and the
/// first time `t_0 ∈ (T_1, T_i]` where it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub m: usize,
    pub s: usize,
    pub t0: u64,
    pub m_jumps_at_t0: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedCheck {
    pub j: usize,
    pub s: usize,
    /// `σ_s` restricted to `I_j`, original labels.
    pub restricted: Vec<usize>,
    pub equal_to_first: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub n: usize,
    pub t0: u64,
    pub t_max: u64,
    /// `T_1 < T_2 < … < T_k`.
    pub times: Vec<u64>,
    /// `σ_1 … σ_k`, original labels.
    pub sigmas: Vec<Permutation>,
    /// `relabel[m]` is the label member `m` gets when `σ_1` is the identity.
    pub relabel: Vec<usize>,
    /// `I_2 … I_k`, original labels; `index_sets[0]` is `I_2`.
    pub index_sets: Vec<Vec<usize>>,
    /// Only the `s < j` pairs the argument constrains.
    pub restricted_checks: Vec<RestrictedCheck>,
}

impl ProofTrace {
    pub fn k(&self) -> usize {
        self.times.len()
    }

    /// `n_j` for `j = 2..=k`.
    pub fn n_counts(&self) -> Vec<usize> {
        self.index_sets.iter().map(Vec::len).collect()
    }

    pub fn index_set(&self, j: usize) -> &[usize] {
        &self.index_sets[j - 2]
    }

    pub fn disjoint(&self) -> bool {
        let mut seen = vec![false; self.n];
        for set in &self.index_sets {
            for &m in set {
                if std::mem::replace(&mut seen[m], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Members other than the lowest one at `T_1` that lie in no `I_j`.
    pub fn uncovered(&self) -> Vec<usize> {
        let lowest = *self.sigmas[0].0.last().expect("nonempty tuple");
        (0..self.n)
            .filter(|&m| m != lowest && !self.index_sets.iter().any(|set| set.contains(&m)))
            .collect()
    }

    pub fn restricted_ok(&self) -> bool {
        self.restricted_checks.iter().all(|c| c.equal_to_first)
    }

    pub fn to_report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# proof trace").unwrap();
        writeln!(out, "n\t{}", self.n).unwrap();
        writeln!(out, "k\t{}", self.k()).unwrap();
        writeln!(out, "window\t{}\t{}", self.t0, self.t_max).unwrap();
        writeln!(out, "relabel\t{}", join_one_based(&self.relabel)).unwrap();
        writeln!(out, "# j\tT_j\tsigma_j\tI_j\tn_j\tbound").unwrap();
        let k = self.k();
        for (idx, (t, sigma)) in self.times.iter().zip(&self.sigmas).enumerate() {
            let j = idx + 1;
            if j == 1 {
                writeln!(out, "1\t{t}\t{sigma}\t-\t-\t-").unwrap();
            } else {
                let set = self.index_set(j);
                let shown = if set.is_empty() { "-".to_string() } else { join_one_based(set) };
                writeln!(out, "{j}\t{t}\t{sigma}\t{shown}\t{}\t{}", set.len(), k + 2 - j).unwrap();
            }
        }
        writeln!(out, "# j\ts\trestricted\tequal\twitness").unwrap();
        for c in &self.restricted_checks {
            let witness = match &c.witness {
                Some(w) => format!("m={} s={} t0={}", w.m + 1, w.s + 1, w.t0),
                None => "-".to_string(),
            };
            let restricted = if c.restricted.is_empty() { "-".to_string() } else { join_one_based(&c.restricted) };
            writeln!(out, "{}\t{}\t{}\t{}\t{}", c.j, c.s, restricted, c.equal_to_first, witness).unwrap();
        }
        let uncovered = self.uncovered();
        let shown = if uncovered.is_empty() { "-".to_string() } else { join_one_based(&uncovered) };
        writeln!(out, "disjoint\t{}", self.disjoint()).unwrap();
        writeln!(out, "uncovered\t{shown}").unwrap();
        out
    }
}

/// Builds the trace of `report`, taking `T_1 = T_0` and evaluating
/// `T_j = min{t > T_1 : σ(t) ∉ {σ_1 … σ_{j-1}}}`.
pub fn build_proof_trace(report: &TrajectoryReport) -> Result<ProofTrace, ProofError> {
    if report.census.len() < 2 {
        return Err(ProofError::WindowTooShort {
            k_hat: report.census.len(),
            t0: report.t0,
            t_max: report.t_max,
        });
    }
    let times: Vec<u64> = report.census.iter().map(|o| o.first).collect();
    let sigmas: Vec<Permutation> = report.census.iter().map(|o| o.perm.clone()).collect();
    let relabel = sigmas[0].ranks();

    let jumpers_at = |t: u64| -> &[usize] {
        let i = report.events.partition_point(|e| e.t < t);
        &report.events[i].jumpers
    };
    let mut index_sets = Vec::new();
    let mut used = vec![false; report.n];
    for &t in &times[1..] {
        let set: Vec<usize> = jumpers_at(t).iter().copied().filter(|&m| !used[m]).collect();
        for &m in jumpers_at(t) {
            used[m] = true;
        }
        index_sets.push(set);
    }

    let mut restricted_checks = Vec::new();
    for j in 2..=times.len() {
        let set = &index_sets[j - 2];
        let first = sigmas[0].restrict(set);
        for s in 1..j {
            let restricted = sigmas[s - 1].restrict(set);
            let equal_to_first = restricted == first;
            let witness = if equal_to_first {
                None
            } else {
                find_witness(report, &first, &restricted, times[0], times[s - 1])
            };
            restricted_checks.push(RestrictedCheck {
                j,
                s,
                restricted,
                equal_to_first,
                witness,
            });
        }
    }

    Ok(ProofTrace {
        n: report.n,
        t0: report.t0,
        t_max: report.t_max,
        times,
        sigmas,
        relabel,
        index_sets,
        restricted_checks,
    })
}

/// First inverted pair between the two restricted orders, located by a
/// linear scan of the events in `(t1, ti]`.
fn find_witness(
    report: &TrajectoryReport,
    first: &[usize],
    other: &[usize],
    t1: u64,
    ti: u64,
) -> Option<Witness> {
    let pos = |v: &[usize], x: usize| v.iter().position(|&y| y == x);
    let (m, s) = first.iter().enumerate().find_map(|(a, &m)| {
        first[a + 1..]
            .iter()
            .find(|&&s| pos(other, m) > pos(other, s))
            .map(|&s| (m, s))
    })?;
    report
        .events
        .iter()
        .filter(|e| e.t > t1 && e.t <= ti)
        .find(|e| {
            let r = e.after.ranks();
            r[m] > r[s]
        })
        .map(|e| Witness {
            m,
            s,
            t0: e.t,
            m_jumps_at_t0: e.jumpers.contains(&m),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NjCheck {
    pub j: usize,
    pub n_j: usize,
    pub bound: usize,
    pub pass: bool,
}

/// `n_j ≤ k − j + 2` for `j = 2..=k`.
pub fn check_nj_bound(trace: &ProofTrace) -> Vec<NjCheck> {
    let k = trace.k();
    trace
        .n_counts()
        .into_iter()
        .enumerate()
        .map(|(idx, n_j)| {
            let j = idx + 2;
            let bound = k + 2 - j;
            NjCheck {
                j,
                n_j,
                bound,
                pass: n_j <= bound,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremBound {
    pub n: usize,
    pub k: usize,
    /// `1 + Σ n_j`.
    pub one_plus_sum: usize,
    /// `k(k+1)/2`.
    pub triangular: usize,
    /// `1 + Σ n_j − n`.
    pub count_margin: i64,
    /// `k(k+1)/2 − (1 + Σ n_j)`.
    pub sum_margin: i64,
    /// `k(k+1)/2 − n`.
    pub overall_margin: i64,
}

impl TheoremBound {
    pub fn pass(&self) -> bool {
        self.count_margin >= 0 && self.sum_margin >= 0
    }
}

pub fn check_theorem_bound(trace: &ProofTrace) -> TheoremBound {
    let n = trace.n;
    let k = trace.k();
    let one_plus_sum = 1 + trace.n_counts().iter().sum::<usize>();
    let triangular = k * (k + 1) / 2;
    TheoremBound {
        n,
        k,
        one_plus_sum,
        triangular,
        count_margin: one_plus_sum as i64 - n as i64,
        sum_margin: triangular as i64 - one_plus_sum as i64,
        overall_margin: triangular as i64 - n as i64,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Passed,
    /// Failures that a longer window may remove.
    WindowArtifact(Vec<String>),
    /// Failures that no window can explain.
    HardFailure(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub report: TrajectoryReport,
    pub trace: Option<ProofTrace>,
    pub nj: Vec<NjCheck>,
    pub bound: Option<TheoremBound>,
    pub retries: u32,
    pub status: Status,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn to_report(&self) -> String {
        let mut out = String::new();
        if let Some(trace) = &self.trace {
            out.push_str(&trace.to_report());
        }
        writeln!(out, "# bounds").unwrap();
        writeln!(out, "max_tau\t{}\tk_hat\t{}", self.report.max_tau, self.report.k_hat).unwrap();
        for c in &self.nj {
            writeln!(out, "n_j\t{}\t{}\t{}\t{}", c.j, c.n_j, c.bound, if c.pass { "PASS" } else { "FAIL" }).unwrap();
        }
        if let Some(b) = &self.bound {
            writeln!(out, "count\tn={}\t1+sum={}\tmargin={}", b.n, b.one_plus_sum, b.count_margin).unwrap();
            writeln!(out, "sum\t1+sum={}\tk(k+1)/2={}\tmargin={}", b.one_plus_sum, b.triangular, b.sum_margin).unwrap();
            writeln!(out, "theorem\tn={}\tk(k+1)/2={}\tmargin={}", b.n, b.triangular, b.overall_margin).unwrap();
        }
        writeln!(out, "retries\t{}", self.retries).unwrap();
        match &self.status {
            Status::Passed => writeln!(out, "status\tPASS").unwrap(),
            Status::WindowArtifact(why) => writeln!(out, "status\tWINDOW_ARTIFACT\t{}", why.join("; ")).unwrap(),
            Status::HardFailure(why) => writeln!(out, "status\tHARD_FAILURE\t{}", why.join("; ")).unwrap(),
        }
        out
    }
}

/// Runs every check on one window.
pub fn verify_window(ctx: &TupleContext) -> Result<Verification, ProofError> {
    let report = sweep(ctx)?;
    let mut artifacts = Vec::new();
    let mut hard = Vec::new();
    if report.max_tau > report.k_hat {
        artifacts.push(format!("max_tau {} > k_hat {}", report.max_tau, report.k_hat));
    }
    let trace = match build_proof_trace(&report) {
        Ok(trace) => trace,
        Err(ProofError::WindowTooShort { k_hat, .. }) => {
            artifacts.push(format!("window too short (k_hat = {k_hat})"));
            return Ok(Verification {
                report,
                trace: None,
                nj: Vec::new(),
                bound: None,
                retries: 0,
                status: Status::WindowArtifact(artifacts),
            });
        }
        Err(e) => return Err(e),
    };
    if !trace.disjoint() {
        hard.push("index sets overlap".to_string());
    }
    for c in trace.restricted_checks.iter().filter(|c| !c.equal_to_first) {
        hard.push(format!("restricted permutation differs at (j, s) = ({}, {})", c.j, c.s));
    }
    let uncovered = trace.uncovered();
    if !uncovered.is_empty() {
        artifacts.push(format!("members {} in no index set", join_one_based(&uncovered)));
    }
    let nj = check_nj_bound(&trace);
    for c in nj.iter().filter(|c| !c.pass) {
        artifacts.push(format!("n_{} = {} > {}", c.j, c.n_j, c.bound));
    }
    let bound = check_theorem_bound(&trace);
    if !bound.pass() {
        artifacts.push(format!(
            "theorem chain margins {} and {}",
            bound.count_margin, bound.sum_margin
        ));
    }
    let status = if !hard.is_empty() {
        hard.extend(artifacts);
        Status::HardFailure(hard)
    } else if !artifacts.is_empty() {
        Status::WindowArtifact(artifacts)
    } else {
        Status::Passed
    };
    Ok(Verification {
        report,
        trace: Some(trace),
        nj,
        bound: Some(bound),
        retries: 0,
        status,
    })
}

/// [`verify_window`], doubling `T_max` after window artifacts up to
/// `max_retries` times.
pub fn verify_with_retries(ctx: &TupleContext, max_retries: u32) -> Result<Verification, ProofError> {
    let mut ctx = ctx.clone();
    let mut retries = 0;
    loop {
        let mut v = verify_window(&ctx)?;
        v.retries = retries;
        let again = matches!(v.status, Status::WindowArtifact(_)) && retries < max_retries;
        if !again {
            return Ok(v);
        }
        ctx = ctx.with_t_max(ctx.t_max().saturating_mul(2))?;
        retries += 1;
    }
}
