//! The irrationality measure function `ψ_α(t) = min_{1 ≤ q ≤ t} ||qα||` as
//! an exact step function over integer time.
//!
//! `ψ_α` is constant on `[q_ν, q_{ν+1})` with value `ξ_ν = |q_ν α − p_ν|`
//! and jumps down exactly at the convergent denominators. When `a_1 = 1`
//! the first two denominators coincide (`q_0 = q_1 = 1`) and only the later
//! index is kept, since `ξ_1 < ξ_0` is the minimum at `t = 1`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::cf::{
    compare_errors, error_enclosure, CfError, ContinuedFraction, ErrorTerm,
    DEFAULT_MAX_COMPARE_DEPTH,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsiError {
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error("time {t} is outside [1, {horizon}]")]
    OutOfHorizon { t: u64, horizon: u64 },
    #[error("left limit needs t >= 2, got {0}")]
    NoLeftLimit(u64),
    #[error("t_max must be at least 1")]
    EmptyRange,
    #[error("error terms {0} and {1} are not strictly decreasing")]
    NotDecreasing(usize, usize),
    #[error("value enclosure too wide to certify the minimum at q = {q}")]
    PrecisionInsufficient { q: u64 },
}

/// One step of `ψ_α`: value `ξ_ν` on `[q, next q)`.
#[derive(Debug, Clone)]
pub struct Breakpoint {
    pub index: usize,
    pub q: u64,
    pub xi: ErrorTerm,
}

#[derive(Debug, Clone)]
pub struct StepTrajectory {
    owner: ContinuedFraction,
    breakpoints: Vec<Breakpoint>,
    next_q: BigInt,
    horizon: u64,
}

pub fn build_trajectory(cf: &ContinuedFraction, t_max: u64) -> Result<StepTrajectory, PsiError> {
    build_trajectory_with(cf, t_max, DEFAULT_MAX_COMPARE_DEPTH)
}

/// Materializes every step with `q_ν ≤ t_max`. Consecutive error terms are
/// refined until their order is certified.
pub fn build_trajectory_with(
    cf: &ContinuedFraction,
    t_max: u64,
    max_compare_depth: usize,
) -> Result<StepTrajectory, PsiError> {
    if t_max == 0 {
        return Err(PsiError::EmptyRange);
    }
    let mut breakpoints: Vec<Breakpoint> = Vec::new();
    let mut next_q = None;
    for conv in cf.convergent_iter() {
        let conv = conv?;
        match conv.q.to_u64().filter(|&q| q <= t_max) {
            None => {
                next_q = Some(conv.q);
                break;
            }
            Some(q) => {
                let xi = error_enclosure(cf, conv.index, 0)?;
                if breakpoints.last().is_some_and(|b| b.q == q) {
                    breakpoints.pop();
                }
                breakpoints.push(Breakpoint {
                    index: conv.index,
                    q,
                    xi,
                });
            }
        }
    }
    let next_q = next_q.expect("convergent iterator is unbounded or errors");
    for i in 1..breakpoints.len() {
        let (head, tail) = breakpoints.split_at_mut(i);
        let (prev, cur) = (&mut head[i - 1].xi, &mut tail[0].xi);
        if compare_errors(prev, cur, max_compare_depth)? != Ordering::Greater {
            return Err(PsiError::NotDecreasing(prev.index(), cur.index()));
        }
    }
    let horizon = (&next_q - 1u32).to_u64().unwrap_or(u64::MAX);
    Ok(StepTrajectory {
        owner: cf.clone(),
        breakpoints,
        next_q,
        horizon,
    })
}

impl StepTrajectory {
    pub fn owner(&self) -> &ContinuedFraction {
        &self.owner
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Largest `t` at which `ψ` is known.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// First convergent denominator past the materialized steps.
    pub fn next_denominator(&self) -> &BigInt {
        &self.next_q
    }

    pub fn is_breakpoint(&self, t: u64) -> bool {
        self.breakpoints.binary_search_by_key(&t, |b| b.q).is_ok()
    }

    /// Step active at time `t`.
    pub fn step_at(&self, t: u64) -> Result<&Breakpoint, PsiError> {
        if t == 0 || t > self.horizon {
            return Err(PsiError::OutOfHorizon {
                t,
                horizon: self.horizon,
            });
        }
        let i = self.breakpoints.partition_point(|b| b.q <= t);
        Ok(&self.breakpoints[i - 1])
    }

    /// `ψ(t) = ξ_ν` for the unique `ν` with `q_ν ≤ t < q_{ν+1}`.
    pub fn psi_at(&self, t: u64) -> Result<&ErrorTerm, PsiError> {
        Ok(&self.step_at(t)?.xi)
    }

    /// `lim_{s → t−} ψ(s) = ψ(t − 1)` on integer time.
    pub fn psi_left_limit(&self, t: u64) -> Result<&ErrorTerm, PsiError> {
        if t < 2 {
            return Err(PsiError::NoLeftLimit(t));
        }
        if t > self.horizon {
            return Err(PsiError::OutOfHorizon {
                t,
                horizon: self.horizon,
            });
        }
        self.psi_at(t - 1)
    }

    /// Breakpoint times in `(after, until]`.
    pub fn jump_times(&self, after: u64, until: u64) -> impl Iterator<Item = u64> + '_ {
        self.breakpoints
            .iter()
            .map(|b| b.q)
            .skip_while(move |&q| q <= after)
            .take_while(move |&q| q <= until)
    }

    /// One `q <tab> xi_lo <tab> xi_hi` line per step, rationals as `num/den`.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for b in &self.breakpoints {
            writeln!(
                out,
                "{}\t{}\t{}",
                b.q,
                fmt_rational(b.xi.lo()),
                fmt_rational(b.xi.hi())
            )
            .unwrap();
        }
        out
    }
}

/// Rationals always print as `num/den`, integers included.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Result of the direct scan `min_{1 ≤ q ≤ t} ||qα||`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForcePsi {
    pub argmin: u64,
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Direct evaluation of the definition from an enclosure `(lo, hi)` of `α`
/// whose width is below `1/(4t²)`.
pub fn brute_force_psi(value: &(BigRational, BigRational), t: u64) -> Result<BruteForcePsi, PsiError> {
    Ok(brute_force_scan(value, t)?.pop().expect("t >= 1"))
}

/// `brute_force_psi` for every `t = 1 ..= t_max` in one pass: entry `t − 1`
/// holds the running minimum over `q ≤ t`.
pub fn brute_force_scan(
    value: &(BigRational, BigRational),
    t_max: u64,
) -> Result<Vec<BruteForcePsi>, PsiError> {
    if t_max == 0 {
        return Err(PsiError::EmptyRange);
    }
    let (lo, hi) = value;
    let limit = BigRational::new(1.into(), BigInt::from(4) * BigInt::from(t_max) * BigInt::from(t_max));
    if hi - lo >= limit {
        return Err(PsiError::PrecisionInsufficient { q: 1 });
    }
    // Everything over the common denominator `s`.
    let s = lo.denom().lcm(hi.denom());
    let l = lo.numer() * (&s / lo.denom());
    let h = hi.numer() * (&s / hi.denom());
    let two_s = &s * 2u32;
    let distance = |x: &BigInt| -> (BigInt, BigInt) {
        let n = (x * 2u32 + &s).div_floor(&two_s);
        let d = x - &n * &s;
        (n, d)
    };
    let mut best: Option<(u64, BigInt, BigInt)> = None;
    let mut out = Vec::with_capacity(t_max as usize);
    for q in 1..=t_max {
        let (n1, d1) = distance(&(&l * q));
        let (n2, d2) = distance(&(&h * q));
        if n1 != n2 || d1.signum() != d2.signum() || d1.signum() == BigInt::from(0) {
            return Err(PsiError::PrecisionInsufficient { q });
        }
        let (a, b) = (d1.abs(), d2.abs());
        let (dlo, dhi) = if a <= b { (a, b) } else { (b, a) };
        best = match best {
            None => Some((q, dlo, dhi)),
            Some((bq, blo, bhi)) => {
                if dhi <= blo {
                    Some((q, dlo, dhi))
                } else if bhi <= dlo {
                    Some((bq, blo, bhi))
                } else {
                    return Err(PsiError::PrecisionInsufficient { q });
                }
            }
        };
        let (bq, blo, bhi) = best.as_ref().unwrap();
        out.push(BruteForcePsi {
            argmin: *bq,
            lo: BigRational::new(blo.clone(), s.clone()),
            hi: BigRational::new(bhi.clone(), s.clone()),
        });
    }
    Ok(out)
}
