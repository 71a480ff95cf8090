use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{CfError, ContinuedFraction};

/// Trial-division bound used to certify that a radicand is square-free.
/// Radicands above `DEFAULT_FACTOR_BOUND²` are rejected.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

const MAX_PERIOD_SEARCH: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurdError {
    #[error("root coefficient is zero; the value would be rational")]
    ZeroRoot,
    #[error("radicand {0} is a perfect square; the value would be rational")]
    PerfectSquare(String),
    #[error("radicand must be positive")]
    NonPositiveRadicand,
    #[error("radicand {radicand} exceeds the factoring limit {bound}^2")]
    RadicandTooLarge { radicand: String, bound: u64 },
    #[error("surds with radicands {0} and {1} live in different fields")]
    RadicandMismatch(u64, u64),
    #[error("partial quotient {0} does not fit in 64 bits")]
    CoefficientOverflow(String),
    #[error("no period found within {0} partial quotients")]
    PeriodTooLong(usize),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Exact element `rational + root·√radicand` of a real quadratic field, with
/// `radicand` square-free and `root ≠ 0`. Equality is field-wise equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    rational: BigRational,
    root: BigRational,
    radicand: u64,
}

impl QuadraticSurd {
    pub fn new(rational: BigRational, root: BigRational, radicand: u64) -> Result<Self, SurdError> {
        Self::with_factor_bound(rational, root, radicand, DEFAULT_FACTOR_BOUND)
    }

    /// `√radicand` for a non-square radicand.
    pub fn sqrt(radicand: u64) -> Result<Self, SurdError> {
        Self::new(BigRational::zero(), BigRational::one(), radicand)
    }

    pub fn with_factor_bound(
        rational: BigRational,
        root: BigRational,
        radicand: u64,
        bound: u64,
    ) -> Result<Self, SurdError> {
        Self::from_big_radicand(rational, root, &BigInt::from(radicand), bound)
    }

    fn from_big_radicand(
        rational: BigRational,
        root: BigRational,
        radicand: &BigInt,
        bound: u64,
    ) -> Result<Self, SurdError> {
        if root.is_zero() {
            return Err(SurdError::ZeroRoot);
        }
        if !radicand.is_positive() {
            return Err(SurdError::NonPositiveRadicand);
        }
        let too_large = || SurdError::RadicandTooLarge {
            radicand: radicand.to_string(),
            bound,
        };
        let (square, core) = square_free_split(radicand, bound).ok_or_else(too_large)?;
        if core == 1 {
            return Err(SurdError::PerfectSquare(radicand.to_string()));
        }
        Ok(Self {
            rational,
            root: root * BigRational::from_integer(square),
            radicand: core,
        })
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn root(&self) -> &BigRational {
        &self.root
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Value of the eventually periodic expansion `[a0; pre..., (period)]`.
    pub fn from_periodic(a0: &BigInt, pre: &[u64], period: &[u64]) -> Result<Self, SurdError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod.into());
        }
        // y = [c_1; c_2, ..., c_L, y] solves Q_L y² + (Q_{L-1} − P_L) y − P_{L-1} = 0.
        let (mut p, mut p_prev) = (BigInt::one(), BigInt::zero());
        let (mut q, mut q_prev) = (BigInt::zero(), BigInt::one());
        for &c in period {
            let c = BigInt::from(c);
            let p_next = &c * &p + &p_prev;
            let q_next = &c * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        let b = &q_prev - &p;
        let disc = &b * &b + BigInt::from(4) * &q * &p_prev;
        let two_q = BigInt::from(2) * &q;
        let y = Self::from_big_radicand(
            BigRational::new(-b, two_q.clone()),
            BigRational::new(BigInt::one(), two_q),
            &disc,
            DEFAULT_FACTOR_BOUND,
        )?;
        let mut v = y;
        for &c in pre.iter().rev() {
            v = v.recip().add_rational(&BigRational::from_integer(c.into()));
        }
        Ok(v.recip().add_rational(&BigRational::from_integer(a0.clone())))
    }

    fn elem(&self) -> (BigRational, BigRational) {
        (self.rational.clone(), self.root.clone())
    }

    fn same_field(&self, (rational, root): (BigRational, BigRational)) -> Self {
        debug_assert!(!root.is_zero());
        Self {
            rational,
            root,
            radicand: self.radicand,
        }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        self.same_field((&self.rational + r, self.root.clone()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        assert!(!r.is_zero(), "scaling a surd by zero");
        self.same_field((&self.rational * r, &self.root * r))
    }

    pub fn neg(&self) -> Self {
        self.same_field((-&self.rational, -&self.root))
    }

    /// `1 / (a + b√D) = (a − b√D) / (a² − b²D)`.
    pub fn recip(&self) -> Self {
        let (a, b) = self.elem();
        let norm = &a * &a - &b * &b * BigRational::from_integer(self.radicand.into());
        self.same_field((a / &norm, -b / norm))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Option<Self>, SurdError> {
        if self.radicand != other.radicand {
            return Err(SurdError::RadicandMismatch(self.radicand, other.radicand));
        }
        let root = &self.root - &other.root;
        if root.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.same_field((&self.rational - &other.rational, root))))
    }

    /// Sign of the (never zero) value.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.rational, &self.root, self.radicand)
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `|q·self − p|`, the exact value of a convergent's error term.
    pub fn offset_abs(&self, q: &BigInt, p: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(q.clone()))
            .add_rational(&BigRational::from_integer(-p))
            .abs()
    }

    /// Exact comparison within one quadratic field.
    pub fn cmp_same_field(&self, other: &Self) -> Result<Ordering, SurdError> {
        if self.radicand != other.radicand {
            return Err(SurdError::RadicandMismatch(self.radicand, other.radicand));
        }
        Ok(sign_of(
            &(&self.rational - &other.rational),
            &(&self.root - &other.root),
            self.radicand,
        ))
    }

    pub fn floor(&self) -> BigInt {
        let (num, den, root_num) = self.common_denominator();
        let n = &root_num * &root_num * BigInt::from(self.radicand);
        let s = n.sqrt();
        if root_num.is_positive() {
            (num + s).div_floor(&den)
        } else {
            (num - s - BigInt::one()).div_floor(&den)
        }
    }

    /// `(A, C, B)` with `self = (A + B√D) / C`, `C > 0`.
    fn common_denominator(&self) -> (BigInt, BigInt, BigInt) {
        let den = self.rational.denom().lcm(self.root.denom());
        let a = self.rational.numer() * (&den / self.rational.denom());
        let b = self.root.numer() * (&den / self.root.denom());
        (a, den, b)
    }

    /// Open rational interval of width `1 / (den(root)·2^bits)` around the
    /// value, from an integer square root.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits as usize;
        let bn = self.root.numer().abs();
        let bd = self.root.denom();
        let m = &bn * &bn * BigInt::from(self.radicand) * &scale * &scale;
        let r = m.sqrt();
        let den = bd * &scale;
        let lo = BigRational::new(r.clone(), den.clone());
        let hi = BigRational::new(r + 1, den);
        if self.root.is_positive() {
            (&self.rational + lo, &self.rational + hi)
        } else {
            (&self.rational - hi, &self.rational - lo)
        }
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        super::enclosure::rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = self.root.abs();
        match (self.rational.is_zero(), self.root.is_negative()) {
            (true, false) => {}
            (true, true) => write!(f, "-")?,
            (false, false) => write!(f, "{} + ", self.rational)?,
            (false, true) => write!(f, "{} - ", self.rational)?,
        }
        if root.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{root}*sqrt({})", self.radicand)
        }
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sign of `x + y√d` for square-free `d > 1`, `(x, y) ≠ (0, 0)`.
fn sign_of(x: &BigRational, y: &BigRational, d: u64) -> Ordering {
    let sx = x.cmp(&BigRational::zero());
    let sy = y.cmp(&BigRational::zero());
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    // Opposite signs: the larger magnitude wins.
    let x2 = x * x;
    let y2d = y * y * BigRational::from_integer(d.into());
    if x2 > y2d {
        sx
    } else {
        sy
    }
}

/// `d = square² · core` with `core` square-free.
/// `d = square² · core` with `core` square-free, by trial division up to
/// `bound`. A cofactor left above `bound²` must be a perfect square, since
/// it cannot be split further.
fn square_free_split(d: &BigInt, bound: u64) -> Option<(BigInt, u64)> {
    let mut d = d.clone();
    let (mut square, mut core) = (BigInt::one(), BigInt::one());
    let mut p = 2u64;
    while p <= bound && BigInt::from(p) * p <= d {
        let mut e = 0;
        while (&d % p).is_zero() {
            d /= p;
            e += 1;
        }
        square *= BigInt::from(p).pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if BigInt::from(p) * p > d {
        core *= d;
    } else {
        let r = d.sqrt();
        if &r * &r != d {
            return None;
        }
        square *= r;
    }
    Some((square, core.to_u64()?))
}

/// Outcome of [`integer_combination_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegerCombination {
    SumInteger,
    DiffInteger,
    Neither,
}

/// Decides whether `a + b` or `a − b` is an integer.
pub fn integer_combination_check(a: &QuadraticSurd, b: &QuadraticSurd) -> IntegerCombination {
    if a.radicand != b.radicand {
        return IntegerCombination::Neither;
    }
    if (&a.root + &b.root).is_zero() && (&a.rational + &b.rational).is_integer() {
        IntegerCombination::SumInteger
    } else if a.root == b.root && (&a.rational - &b.rational).is_integer() {
        IntegerCombination::DiffInteger
    } else {
        IntegerCombination::Neither
    }
}

/// Eventually periodic expansion of a quadratic surd. Complete quotients are
/// kept as `(P + √N) / Q` with `Q | N − P²`; the first repeated `(P, Q)`
/// closes the period.
pub fn surd_to_cf(s: &QuadraticSurd) -> Result<ContinuedFraction, SurdError> {
    let (a, c, b) = s.common_denominator();
    let (mut p, mut q) = if b.is_negative() { (-a, -c) } else { (a, c) };
    let mut n = &b * &b * BigInt::from(s.radicand);
    if !(&n - &p * &p).is_multiple_of(&q) {
        let qa = q.abs();
        p *= &qa;
        n *= &q * &q;
        q *= &qa;
    }
    let root = n.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut coefficients: Vec<BigInt> = Vec::new();
    let start = loop {
        if let Some(&j) = seen.get(&(p.clone(), q.clone())) {
            break j;
        }
        if coefficients.len() > MAX_PERIOD_SEARCH {
            return Err(SurdError::PeriodTooLong(MAX_PERIOD_SEARCH));
        }
        seen.insert((p.clone(), q.clone()), coefficients.len());
        let a_k = if q.is_positive() {
            (&p + &root).div_floor(&q)
        } else {
            (&p + &root + BigInt::one()).div_floor(&q)
        };
        p = &a_k * &q - &p;
        q = (&n - &p * &p) / &q;
        coefficients.push(a_k);
    };
    let to_u64 = |c: &BigInt| c.to_u64().ok_or_else(|| SurdError::CoefficientOverflow(c.to_string()));
    let words: Vec<u64> = coefficients[1..].iter().map(to_u64).collect::<Result<_, _>>()?;
    let a0 = coefficients[0].clone();
    let cf = if start >= 1 {
        ContinuedFraction::periodic(a0, &words[..start - 1], &words[start - 1..])?
    } else {
        // Purely periodic from a0: the stream after a0 is the rotated period.
        let mut period = words.clone();
        period.push(to_u64(&coefficients[0])?);
        ContinuedFraction::periodic(a0, &[], &period)?
    };
    Ok(cf)
}
