use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{CfError, ContinuedFraction};

/// Certified enclosure of `ξ_ν = |q_ν α − p_ν|`.
///
/// With `m = ν + 1 + depth`, `α` lies strictly between `p_m / q_m` and
/// `(p_m + p_{m-1}) / (q_m + q_{m-1})`, and `ξ_ν` is a Möbius image of `α`,
/// so the open interval `(lo, hi)` between the two images contains it.
/// Depth 0 gives `(1 / (q_{ν+1} + q_ν), 1 / q_{ν+1})`.
#[derive(Clone)]
pub struct ErrorTerm {
    owner: ContinuedFraction,
    index: usize,
    p: BigInt,
    q: BigInt,
    /// `(p_m, q_m)` and `(p_{m-1}, q_{m-1})`.
    outer: (BigInt, BigInt),
    inner: (BigInt, BigInt),
    depth: usize,
    lo: BigRational,
    hi: BigRational,
}

/// Enclosure of `ξ_index` refined with `depth` extra partial quotients.
pub fn error_enclosure(
    cf: &ContinuedFraction,
    index: usize,
    depth: usize,
) -> Result<ErrorTerm, CfError> {
    let conv = cf.convergents(index + 2)?;
    let (cur, next) = (&conv[index], &conv[index + 1]);
    let mut term = ErrorTerm {
        owner: cf.clone(),
        index,
        p: cur.p.clone(),
        q: cur.q.clone(),
        outer: (next.p.clone(), next.q.clone()),
        inner: (cur.p.clone(), cur.q.clone()),
        depth: 0,
        lo: BigRational::zero(),
        hi: BigRational::zero(),
    };
    term.update_bounds();
    for _ in 0..depth {
        term.refine()?;
    }
    Ok(term)
}

impl ErrorTerm {
    pub fn owner(&self) -> &ContinuedFraction {
        &self.owner
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Denominator `q_ν` of the convergent this term measures.
    pub fn denominator(&self) -> &BigInt {
        &self.q
    }

    pub fn numerator(&self) -> &BigInt {
        &self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Consumes one more partial quotient; the new interval is nested in the
    /// old one and strictly narrower.
    pub fn refine(&mut self) -> Result<(), CfError> {
        let m = self.index + 2 + self.depth;
        let a = BigInt::from(self.owner.coefficient(m)?);
        let next = (
            &a * &self.outer.0 + &self.inner.0,
            &a * &self.outer.1 + &self.inner.1,
        );
        self.inner = std::mem::replace(&mut self.outer, next);
        self.depth += 1;
        self.update_bounds();
        Ok(())
    }

    fn update_bounds(&mut self) {
        let at = |p: &BigInt, r: &BigInt| -> BigRational {
            // |q_ν (p / r) − p_ν| = |q_ν p − p_ν r| / r
            BigRational::new((&self.q * p - &self.p * r).abs(), r.clone())
        };
        let a = at(&self.outer.0, &self.outer.1);
        let b = at(
            &(&self.outer.0 + &self.inner.0),
            &(&self.outer.1 + &self.inner.1),
        );
        if a < b {
            self.lo = a;
            self.hi = b;
        } else {
            self.lo = b;
            self.hi = a;
        }
    }

    /// Order of the two enclosures if they are already disjoint.
    pub fn separated(&self, other: &ErrorTerm) -> Option<Ordering> {
        if self.hi <= other.lo {
            Some(Ordering::Less)
        } else if other.hi <= self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Whether `value` lies in the closed interval `[lo, hi]`.
    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    /// Approximate midpoint, for display only.
    pub fn approx(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }
}

impl fmt::Debug for ErrorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ErrorTerm {{ ν: {}, q: {}, depth: {}, ({}, {}) }}",
            self.index, self.q, self.depth, self.lo, self.hi
        )
    }
}

/// Refines the wider of the two enclosures until they separate. Equal
/// values never separate; after both reach `max_depth` the result is
/// [`CfError::Undecided`].
pub fn compare_errors(
    x: &mut ErrorTerm,
    y: &mut ErrorTerm,
    max_depth: usize,
) -> Result<Ordering, CfError> {
    loop {
        if let Some(order) = x.separated(y) {
            return Ok(order);
        }
        let x_open = x.depth < max_depth;
        let y_open = y.depth < max_depth;
        let refine_x = match (x_open, y_open) {
            (false, false) => return Err(CfError::Undecided { depth: max_depth }),
            (true, false) => true,
            (false, true) => false,
            (true, true) => x.width() >= y.width(),
        };
        if refine_x {
            x.refine()?;
        } else {
            y.refine()?;
        }
    }
}

/// Nearest `f64`, for display.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale so the quotient keeps ~60 significant bits before converting.
    let n = r.numer();
    let d = r.denom();
    if n.is_zero() {
        return 0.0;
    }
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(-shift as i32)
}
