//! Simple continued fractions `[a0; a1, a2, ...]` with lazily accessed
//! partial quotients, their convergents, tails and reversed-word ("star")
//! values.
//!
//! A [`ContinuedFraction`] always describes an irrational number. A finite
//! backing is a known prefix of some irrational expansion: asking for a
//! coefficient past its end is an error, never a silent truncation.

mod enclosure;
mod surd;

pub use enclosure::{compare_errors, error_enclosure, rational_to_f64, ErrorTerm};
pub use surd::{
    integer_combination_check, surd_to_cf, IntegerCombination, QuadraticSurd, SurdError,
    DEFAULT_FACTOR_BOUND,
};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Hard limit on the index of any partial quotient that may be requested.
pub const DEFAULT_DEPTH_CAP: usize = 512;

/// Refinement depth after which a comparison of two error terms gives up.
pub const DEFAULT_MAX_COMPARE_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("finite expansion has {available} partial quotients, index {requested} requested")]
    DepthExhausted { requested: usize, available: usize },
    #[error("index {requested} exceeds the depth cap {cap}")]
    DepthCapExceeded { requested: usize, cap: usize },
    #[error("partial quotient a_{index} must be a positive integer")]
    NonPositiveCoefficient { index: usize },
    #[error("periodic expansion needs a nonempty period")]
    EmptyPeriod,
    #[error("index must be at least {min}, got {got}")]
    IndexTooSmall { min: usize, got: usize },
    #[error("comparison undecided after refining both enclosures to depth {depth}")]
    Undecided { depth: usize },
}

type Rule = Arc<dyn Fn(usize) -> u64 + Send + Sync>;

#[derive(Clone)]
enum Backing {
    /// `a_1 ..= a_len`.
    Finite(Arc<[u64]>),
    /// `a_1, a_2, ... = pre ++ period ++ period ++ ...`
    Periodic { pre: Arc<[u64]>, period: Arc<[u64]> },
    /// `a_n = rule(n)` for `n >= 1`.
    Rule(Rule),
}

/// Coefficient stream of an irrational number.
#[derive(Clone)]
pub struct ContinuedFraction {
    a0: BigInt,
    backing: Backing,
    depth_cap: usize,
}

impl ContinuedFraction {
    /// Known prefix `[a0; coefficients...]` of an irrational expansion.
    pub fn finite(a0: impl Into<BigInt>, coefficients: &[u64]) -> Result<Self, CfError> {
        check_positive(coefficients, 1)?;
        Ok(Self {
            a0: a0.into(),
            backing: Backing::Finite(coefficients.into()),
            depth_cap: DEFAULT_DEPTH_CAP,
        })
    }

    /// `[a0; pre..., period, period, ...]`. The representation is normalized
    /// so that two descriptions of the same stream compare equal.
    pub fn periodic(a0: impl Into<BigInt>, pre: &[u64], period: &[u64]) -> Result<Self, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        check_positive(pre, 1)?;
        check_positive(period, pre.len() + 1)?;
        let (pre, period) = normalize_periodic(pre.to_vec(), period.to_vec());
        Ok(Self {
            a0: a0.into(),
            backing: Backing::Periodic {
                pre: pre.into(),
                period: period.into(),
            },
            depth_cap: DEFAULT_DEPTH_CAP,
        })
    }

    /// Coefficients produced by `rule(n)` for `n >= 1`. A rule returning zero
    /// is reported when that coefficient is accessed.
    pub fn from_rule<F>(a0: impl Into<BigInt>, rule: F) -> Self
    where
        F: Fn(usize) -> u64 + Send + Sync + 'static,
    {
        Self {
            a0: a0.into(),
            backing: Backing::Rule(Arc::new(rule)),
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }

    /// Builds a periodic expansion from the full word: `preperiod` starts with
    /// `a0`; when it is empty the period starts at `a0` itself.
    pub fn from_words(preperiod: &[i64], period: &[u64]) -> Result<Self, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        match preperiod.split_first() {
            Some((&a0, rest)) => {
                let rest: Vec<u64> = rest
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| u64::try_from(c).map_err(|_| CfError::NonPositiveCoefficient { index: i + 1 }))
                    .collect::<Result<_, _>>()?;
                Self::periodic(a0, &rest, period)
            }
            None => Self::periodic(period[0], &period[1..], period),
        }
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    /// Partial quotient `a_index` for `index >= 1`.
    pub fn coefficient(&self, index: usize) -> Result<u64, CfError> {
        if index == 0 {
            return Err(CfError::IndexTooSmall { min: 1, got: 0 });
        }
        if index > self.depth_cap {
            return Err(CfError::DepthCapExceeded {
                requested: index,
                cap: self.depth_cap,
            });
        }
        let value = match &self.backing {
            Backing::Finite(list) => *list.get(index - 1).ok_or(CfError::DepthExhausted {
                requested: index,
                available: list.len(),
            })?,
            Backing::Periodic { pre, period } => {
                if index <= pre.len() {
                    pre[index - 1]
                } else {
                    period[(index - 1 - pre.len()) % period.len()]
                }
            }
            Backing::Rule(rule) => rule(index),
        };
        if value == 0 {
            return Err(CfError::NonPositiveCoefficient { index });
        }
        Ok(value)
    }

    /// `(preperiod, period)` of a periodic backing, excluding `a0`.
    pub fn periodic_parts(&self) -> Option<(&[u64], &[u64])> {
        match &self.backing {
            Backing::Periodic { pre, period } => Some((pre, period)),
            _ => None,
        }
    }

    /// Coefficients of a finite backing, excluding `a0`.
    pub fn finite_parts(&self) -> Option<&[u64]> {
        match &self.backing {
            Backing::Finite(list) => Some(list),
            _ => None,
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(self.backing, Backing::Rule(_))
    }

    /// Exact value when the stream is eventually periodic.
    pub fn exact_value(&self) -> Option<QuadraticSurd> {
        let (pre, period) = self.periodic_parts()?;
        QuadraticSurd::from_periodic(&self.a0, pre, period).ok()
    }

    /// The complete quotient `α_index = [a_index; a_index+1, ...]`.
    pub fn tail(&self, index: usize) -> Result<Self, CfError> {
        if index == 0 {
            return Ok(self.clone());
        }
        let head = BigInt::from(self.coefficient(index)?);
        let depth_cap = self.depth_cap - index;
        let backing = match &self.backing {
            Backing::Finite(list) => Backing::Finite(list[index..].into()),
            Backing::Periodic { pre, period } => {
                if index <= pre.len() {
                    Backing::Periodic {
                        pre: pre[index..].into(),
                        period: period.clone(),
                    }
                } else {
                    let shift = (index - pre.len()) % period.len();
                    let mut rotated = period.to_vec();
                    rotated.rotate_left(shift);
                    let (pre, period) = normalize_periodic(Vec::new(), rotated);
                    Backing::Periodic {
                        pre: pre.into(),
                        period: period.into(),
                    }
                }
            }
            Backing::Rule(rule) => {
                let rule = rule.clone();
                Backing::Rule(Arc::new(move |n| rule(n + index)))
            }
        };
        Ok(Self {
            a0: head,
            backing,
            depth_cap,
        })
    }

    /// Iterator over convergents `ν = 0, 1, 2, ...`.
    pub fn convergent_iter(&self) -> Convergents<'_> {
        Convergents {
            cf: self,
            index: 0,
            prev: (BigInt::one(), BigInt::zero()),
            cur: None,
        }
    }

    /// First `count` convergents `p_ν / q_ν`, `ν = 0 .. count`.
    pub fn convergents(&self, count: usize) -> Result<Vec<Convergent>, CfError> {
        self.convergent_iter().take(count).collect()
    }

    /// `α*_ν = q_{ν-1} / q_ν`, the value of `[0; a_ν, a_{ν-1}, ..., a_1]`.
    pub fn star_value(&self, index: usize) -> Result<BigRational, CfError> {
        if index == 0 {
            return Err(CfError::IndexTooSmall { min: 1, got: 0 });
        }
        let conv = self.convergents(index + 1)?;
        Ok(BigRational::new(
            conv[index - 1].q.clone(),
            conv[index].q.clone(),
        ))
    }

    /// The first `count` partial quotients after `a0`.
    pub fn prefix(&self, count: usize) -> Result<Vec<u64>, CfError> {
        (1..=count).map(|i| self.coefficient(i)).collect()
    }
}

impl PartialEq for ContinuedFraction {
    /// Structural equality. Rule backings are equal only to clones of
    /// themselves.
    fn eq(&self, other: &Self) -> bool {
        if self.a0 != other.a0 {
            return false;
        }
        match (&self.backing, &other.backing) {
            (Backing::Finite(a), Backing::Finite(b)) => a == b,
            (
                Backing::Periodic { pre: p1, period: r1 },
                Backing::Periodic { pre: p2, period: r2 },
            ) => p1 == p2 && r1 == r2,
            (Backing::Rule(a), Backing::Rule(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| {
            xs.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match &self.backing {
            Backing::Finite(list) => write!(f, "[{}; {}]", self.a0, join(list)),
            Backing::Periodic { pre, period } => {
                write!(f, "[{}; ", self.a0)?;
                if !pre.is_empty() {
                    write!(f, "{}, ", join(pre))?;
                }
                write!(f, "({})]", join(period))
            }
            Backing::Rule(rule) => {
                let shown: Vec<String> = (1..=6.min(self.depth_cap)).map(|n| rule(n).to_string()).collect();
                write!(f, "[{}; {}, ...]", self.a0, shown.join(", "))
            }
        }
    }
}

fn check_positive(coefficients: &[u64], first_index: usize) -> Result<(), CfError> {
    match coefficients.iter().position(|&c| c == 0) {
        Some(i) => Err(CfError::NonPositiveCoefficient {
            index: first_index + i,
        }),
        None => Ok(()),
    }
}

/// Smallest period, and the shortest preperiod: trailing preperiod entries
/// that match the period are folded into it.
fn normalize_periodic(mut pre: Vec<u64>, mut period: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
    let len = period.len();
    if let Some(p) = (1..len).find(|&p| len.is_multiple_of(p) && (p..len).all(|i| period[i] == period[i - p])) {
        period.truncate(p);
    }
    while let Some(&last) = pre.last() {
        if last != *period.last().unwrap() {
            break;
        }
        pre.pop();
        period.rotate_right(1);
    }
    (pre, period)
}

/// Convergent `p / q` of index `ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Lazy convergent recurrence `h_{ν+1} = a_{ν+1} h_ν + h_{ν-1}`.
pub struct Convergents<'a> {
    cf: &'a ContinuedFraction,
    index: usize,
    prev: (BigInt, BigInt),
    cur: Option<(BigInt, BigInt)>,
}

impl Iterator for Convergents<'_> {
    type Item = Result<Convergent, CfError>;

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.cur {
            None => (self.cf.a0.clone(), BigInt::one()),
            Some((p, q)) => {
                let a = match self.cf.coefficient(self.index) {
                    Ok(a) => BigInt::from(a),
                    Err(e) => return Some(Err(e)),
                };
                (&a * p + &self.prev.0, &a * q + &self.prev.1)
            }
        };
        if let Some(cur) = self.cur.replace(next.clone()) {
            self.prev = cur;
        }
        let conv = Convergent {
            index: self.index,
            p: next.0,
            q: next.1,
        };
        self.index += 1;
        Some(Ok(conv))
    }
}
