//! Outward-rounded interval arithmetic at a selectable precision.
//!
//! Every [`Interval`] carries its [`Precision`]. At 53 bits the bounds are
//! plain `f64` values and operations use error-free transformations to round
//! outward; above 53 bits the bounds are [`BigFloat`]s rounded to the
//! requested number of mantissa bits. Both backends enclose the exact real
//! result of every operation.

mod boxes;
mod parse;
pub(crate) mod round;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::bigfloat::{BigFloat, Round};

pub use boxes::IBox;
pub use parse::{parse_bound, parse_box, parse_interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionError(usize, usize),
    #[error("precision must be at least 53 bits, got {0}")]
    InvalidPrecision(u32),
    #[error("lower bound exceeds upper bound")]
    Inverted,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Mantissa width of interval bounds, in bits. Never below 53.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const DOUBLE: Precision = Precision(53);

    pub fn new(bits: u32) -> Result<Self, IntervalError> {
        if bits < 53 {
            return Err(IntervalError::InvalidPrecision(bits));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_double(self) -> bool {
        self.0 == 53
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Double { lo: f64, hi: f64 },
    Multi { lo: BigFloat, hi: BigFloat, prec: u32 },
}

/// A non-empty closed interval `[lo, hi]` with bounds exact at its precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval(Repr);

impl Interval {
    /// Encloses `[lo, hi]`, rounding the bounds outward to `prec`.
    pub fn new(lo: &BigFloat, hi: &BigFloat, prec: Precision) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Inverted);
        }
        Ok(Self::from_bounds(lo.clone(), hi.clone(), prec))
    }

    fn from_bounds(lo: BigFloat, hi: BigFloat, prec: Precision) -> Self {
        if prec.is_double() {
            Interval(Repr::Double {
                lo: lo.to_f64(Round::Down),
                hi: hi.to_f64(Round::Up),
            })
        } else {
            let p = prec.bits();
            Interval(Repr::Multi {
                lo: lo.round(p, Round::Down),
                hi: hi.round(p, Round::Up),
                prec: p,
            })
        }
    }

    /// A binary64 interval. Panics if the bounds are NaN or inverted.
    pub fn from_f64(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval(Repr::Double { lo, hi })
    }

    /// Enclosure of a single value.
    pub fn point(v: &BigFloat, prec: Precision) -> Self {
        Self::from_bounds(v.clone(), v.clone(), prec)
    }

    pub fn from_integer(v: &BigInt, prec: Precision) -> Self {
        Self::point(&BigFloat::from_bigint(v), prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Self::point(&BigFloat::from_i64(v), prec)
    }

    pub fn from_rational(v: &BigRational, prec: Precision) -> Self {
        let p = prec.bits();
        let lo = BigFloat::from_rational(v, p, Round::Down);
        let hi = BigFloat::from_rational(v, p, Round::Up);
        Self::from_bounds(lo, hi, prec)
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn precision(&self) -> Precision {
        match &self.0 {
            Repr::Double { .. } => Precision::DOUBLE,
            Repr::Multi { prec, .. } => Precision(*prec),
        }
    }

    pub fn lo(&self) -> BigFloat {
        match &self.0 {
            Repr::Double { lo, .. } => f64_bound(*lo),
            Repr::Multi { lo, .. } => lo.clone(),
        }
    }

    pub fn hi(&self) -> BigFloat {
        match &self.0 {
            Repr::Double { hi, .. } => f64_bound(*hi),
            Repr::Multi { hi, .. } => hi.clone(),
        }
    }

    /// Outward binary64 bounds.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        match &self.0 {
            Repr::Double { lo, hi } => (*lo, *hi),
            Repr::Multi { lo, hi, .. } => (lo.to_f64(Round::Down), hi.to_f64(Round::Up)),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.0 {
            Repr::Double { lo, hi } => lo.is_finite() && hi.is_finite(),
            Repr::Multi { .. } => true,
        }
    }

    pub fn is_point(&self) -> bool {
        match &self.0 {
            Repr::Double { lo, hi } => lo == hi,
            Repr::Multi { lo, hi, .. } => lo == hi,
        }
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> BigFloat {
        match &self.0 {
            Repr::Double { lo, hi } => {
                let w = round::sub(*hi, *lo, Round::Up);
                f64_bound(w)
            }
            Repr::Multi { lo, hi, prec } => hi.sub(lo, *prec, Round::Up),
        }
    }

    /// The midpoint, rounded toward `lo`, as a point interval.
    pub fn mid(&self) -> Interval {
        match &self.0 {
            Repr::Double { lo, hi } => {
                let c = if lo == hi {
                    *lo
                } else if lo.abs() < 1e300 && hi.abs() < 1e300 && (lo.abs() > 1e-290 || hi.abs() > 1e-290) {
                    round::add(*lo, *hi, Round::Down) * 0.5
                } else {
                    let exact = self.lo().add(&self.hi(), 2100, Round::Down).mul_pow2(-1);
                    exact.to_f64(Round::Down)
                };
                // Halving may round off a subnormal bit; never leave [lo, hi].
                let c = c.clamp(*lo, *hi);
                Interval(Repr::Double { lo: c, hi: c })
            }
            Repr::Multi { lo, hi, prec } => {
                let sum = lo.add(hi, *prec + 1, Round::Down);
                let c = sum.mul_pow2(-1).round(*prec, Round::Down);
                Interval(Repr::Multi {
                    lo: c.clone(),
                    hi: c,
                    prec: *prec,
                })
            }
        }
    }

    /// `[lo, mid]` and `[mid, hi]`, sharing the midpoint.
    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        match (&self.0, m.0) {
            (Repr::Double { lo, hi }, Repr::Double { lo: c, .. }) => (
                Interval(Repr::Double { lo: *lo, hi: c }),
                Interval(Repr::Double { lo: c, hi: *hi }),
            ),
            (Repr::Multi { lo, hi, prec }, Repr::Multi { lo: c, .. }) => (
                Interval(Repr::Multi {
                    lo: lo.clone(),
                    hi: c.clone(),
                    prec: *prec,
                }),
                Interval(Repr::Multi {
                    lo: c,
                    hi: hi.clone(),
                    prec: *prec,
                }),
            ),
            _ => unreachable!(),
        }
    }

    /// Widens each side by `eps_rel * width`, and by at least one ulp, so the
    /// original interval lies in the interior of the result.
    pub fn inflate(&self, eps_rel: f64) -> Interval {
        assert!(eps_rel >= 0.0, "negative inflation factor");
        match &self.0 {
            Repr::Double { lo, hi } => {
                let w = round::sub(*hi, *lo, Round::Up);
                let d = round::mul(eps_rel, w, Round::Up);
                Interval(Repr::Double {
                    lo: round::sub(*lo, d, Round::Down).min(lo.next_down()),
                    hi: round::add(*hi, d, Round::Up).max(hi.next_up()),
                })
            }
            Repr::Multi { lo, hi, prec } => {
                let p = *prec;
                let eps = BigFloat::from_f64(eps_rel).expect("finite inflation factor");
                let d = eps.mul(&hi.sub(lo, p, Round::Up), p, Round::Up);
                let l = lo.sub(&d, p, Round::Down);
                let h = hi.add(&d, p, Round::Up);
                let (nl, nh) = (lo.next_down(p), hi.next_up(p));
                Interval(Repr::Multi {
                    lo: if l < nl { l } else { nl },
                    hi: if h > nh { h } else { nh },
                    prec: p,
                })
            }
        }
    }

    /// Largest absolute value, rounded up.
    pub fn mag(&self) -> BigFloat {
        let (l, h) = (self.lo().abs(), self.hi().abs());
        if l > h {
            l
        } else {
            h
        }
    }

    pub fn contains(&self, v: &BigFloat) -> bool {
        &self.lo() <= v && v <= &self.hi()
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        &self.lo().to_rational() <= v && v <= &self.hi().to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        match &self.0 {
            Repr::Double { lo, hi } => *lo <= 0.0 && 0.0 <= *hi,
            Repr::Multi { lo, hi, .. } => !lo.is_positive() && !hi.is_negative(),
        }
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        match (&self.0, &other.0) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => c <= a && b <= d,
            _ => other.lo() <= self.lo() && self.hi() <= other.hi(),
        }
    }

    /// `self ⊂ ]other.lo, other.hi[`.
    pub fn subset_of_interior(&self, other: &Interval) -> bool {
        match (&self.0, &other.0) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => c < a && b < d,
            _ => other.lo() < self.lo() && self.hi() < other.hi(),
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        match (&self.0, &other.0) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => a <= d && c <= b,
            _ => self.lo() <= other.hi() && other.lo() <= self.hi(),
        }
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = self.pair(other);
        match (a, b) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => {
                let (lo, hi) = (a.max(*c), b.min(*d));
                (lo <= hi).then_some(Interval(Repr::Double { lo, hi }))
            }
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                let lo = if a > c { a } else { c };
                let hi = if b < d { b } else { d };
                (lo <= hi).then(|| {
                    Interval(Repr::Multi {
                        lo: lo.clone(),
                        hi: hi.clone(),
                        prec: *prec,
                    })
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = self.pair(other);
        match (a, b) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => Interval(Repr::Double {
                lo: a.min(*c),
                hi: b.max(*d),
            }),
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                Interval(Repr::Multi {
                    lo: if a < c { a.clone() } else { c.clone() },
                    hi: if b > d { b.clone() } else { d.clone() },
                    prec: *prec,
                })
            }
            _ => unreachable!(),
        }
    }

    /// Re-encloses the interval at precision `p`. Exact when `p` is not
    /// smaller than the current precision, outward-rounded otherwise.
    pub fn with_precision(&self, p: Precision) -> Interval {
        if p == self.precision() {
            return self.clone();
        }
        Self::from_bounds(self.lo(), self.hi(), p)
    }

    fn pair<'a>(&'a self, other: &'a Interval) -> (&'a Repr, &'a Repr) {
        match (&self.0, &other.0) {
            (Repr::Double { .. }, Repr::Double { .. }) => {}
            (Repr::Multi { prec: p, .. }, Repr::Multi { prec: q, .. }) if p == q => {}
            _ => panic!(
                "interval precision mismatch: {} vs {}",
                self.precision(),
                other.precision()
            ),
        }
        (&self.0, &other.0)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        match self.pair(other) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => Interval(Repr::Double {
                lo: round::add(*a, *c, Round::Down),
                hi: round::add(*b, *d, Round::Up),
            }),
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                Interval(Repr::Multi {
                    lo: a.add(c, *prec, Round::Down),
                    hi: b.add(d, *prec, Round::Up),
                    prec: *prec,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        match self.pair(other) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => Interval(Repr::Double {
                lo: round::sub(*a, *d, Round::Down),
                hi: round::sub(*b, *c, Round::Up),
            }),
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                Interval(Repr::Multi {
                    lo: a.sub(d, *prec, Round::Down),
                    hi: b.sub(c, *prec, Round::Up),
                    prec: *prec,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Interval {
        match &self.0 {
            Repr::Double { lo, hi } => Interval(Repr::Double { lo: -hi, hi: -lo }),
            Repr::Multi { lo, hi, prec } => Interval(Repr::Multi {
                lo: hi.neg(),
                hi: lo.neg(),
                prec: *prec,
            }),
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        match self.pair(other) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => {
                let (a, b, c, d) = (*a, *b, *c, *d);
                if a == b && c == d {
                    return Interval(Repr::Double {
                        lo: round::mul(a, c, Round::Down),
                        hi: round::mul(a, c, Round::Up),
                    });
                }
                let lo = round::mul(a, c, Round::Down)
                    .min(round::mul(a, d, Round::Down))
                    .min(round::mul(b, c, Round::Down))
                    .min(round::mul(b, d, Round::Down));
                let hi = round::mul(a, c, Round::Up)
                    .max(round::mul(a, d, Round::Up))
                    .max(round::mul(b, c, Round::Up))
                    .max(round::mul(b, d, Round::Up));
                Interval(Repr::Double { lo, hi })
            }
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                let products = [a.mul_exact(c), a.mul_exact(d), b.mul_exact(c), b.mul_exact(d)];
                let lo = products.iter().min().expect("non-empty");
                let hi = products.iter().max().expect("non-empty");
                Interval(Repr::Multi {
                    lo: lo.round(*prec, Round::Down),
                    hi: hi.round(*prec, Round::Up),
                    prec: *prec,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        Ok(match self.pair(other) {
            (Repr::Double { lo: a, hi: b }, Repr::Double { lo: c, hi: d }) => {
                let q = |x: f64, y: f64, r| round::div(x, y, r);
                let lo = q(*a, *c, Round::Down)
                    .min(q(*a, *d, Round::Down))
                    .min(q(*b, *c, Round::Down))
                    .min(q(*b, *d, Round::Down));
                let hi = q(*a, *c, Round::Up)
                    .max(q(*a, *d, Round::Up))
                    .max(q(*b, *c, Round::Up))
                    .max(q(*b, *d, Round::Up));
                Interval(Repr::Double { lo, hi })
            }
            (Repr::Multi { lo: a, hi: b, prec }, Repr::Multi { lo: c, hi: d, .. }) => {
                let p = *prec;
                let cands = [(a, c), (a, d), (b, c), (b, d)];
                let lo = cands
                    .iter()
                    .map(|(x, y)| x.div(y, p, Round::Down).expect("nonzero divisor"))
                    .min()
                    .expect("non-empty");
                let hi = cands
                    .iter()
                    .map(|(x, y)| x.div(y, p, Round::Up).expect("nonzero divisor"))
                    .max()
                    .expect("non-empty");
                Interval(Repr::Multi { lo, hi, prec: p })
            }
            _ => unreachable!(),
        })
    }

    /// `x^n` with the dependency between factors taken into account, so even
    /// powers are non-negative.
    pub fn powi(&self, n: u32) -> Interval {
        let prec = self.precision();
        if n == 0 {
            return Interval::from_i64(1, prec);
        }
        let p = prec.bits();
        let lo = self.lo();
        let hi = self.hi();
        // Directed power of a single bound.
        let pow = |v: &BigFloat, dir: Round| -> BigFloat {
            let mut acc = BigFloat::from_i64(1);
            for _ in 0..n {
                acc = acc.mul_exact(v);
            }
            acc.round(p, dir)
        };
        let (l, h) = if n % 2 == 1 || !lo.is_negative() {
            (pow(&lo, Round::Down), pow(&hi, Round::Up))
        } else if !hi.is_positive() {
            (pow(&hi, Round::Down), pow(&lo, Round::Up))
        } else {
            let m = if lo.abs() > hi { lo } else { hi };
            (BigFloat::zero(), pow(&m, Round::Up))
        };
        Self::from_bounds(l, h, prec)
    }

    /// Human-readable and exact renderings of both bounds.
    pub fn to_strings(&self) -> BoundStrings {
        let digits = (self.precision().bits() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let (lo, hi) = (self.lo(), self.hi());
        BoundStrings {
            lo_hex: lo.to_hex_string(),
            hi_hex: hi.to_hex_string(),
            lo_dec: lo.to_decimal_string(digits),
            hi_dec: hi.to_decimal_string(digits),
        }
    }
}

/// Infinite binary64 bounds stand in as `±2^(2^30)`, beyond any finite value.
fn f64_bound(v: f64) -> BigFloat {
    BigFloat::from_f64(v).unwrap_or_else(|| {
        let m = if v < 0.0 { -1 } else { 1 };
        BigFloat::from_parts(m.into(), 1 << 30)
    })
}

/// Exact hexfloat and approximate decimal text for the bounds of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundStrings {
    pub lo_hex: String,
    pub hi_hex: String,
    pub lo_dec: String,
    pub hi_dec: String,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_strings();
        write!(f, "[{}, {}]", s.lo_dec, s.hi_dec)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Interval> for &Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                Interval::$m(self, rhs)
            }
        }
        impl $tr<Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                Interval::$m(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(self)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(&self)
    }
}
