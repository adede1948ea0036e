//! Binary floating point values of unbounded exponent with directed rounding.
//!
//! A [`BigFloat`] is the dyadic number `mant * 2^exp`. Values are always kept
//! normalized (the mantissa is odd, or zero with a zero exponent), so two
//! equal numbers have identical representations. Every arithmetic operation
//! takes the target precision (mantissa bits) and a rounding direction and
//! returns the correctly rounded result; this is what the multi-precision
//! interval backend is built on.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single floating operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Exponent of the smallest positive magnitude used when stepping off zero.
pub const TINY_EXP: i64 = -(1 << 40);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

fn floor_shift(m: &BigInt, k: u64) -> BigInt {
    if m.sign() == Sign::Minus {
        let mag: BigInt = -m;
        let bump: BigInt = (BigInt::one() << k) - 1u32;
        -((mag + bump) >> k)
    } else {
        m >> k
    }
}

fn shift_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => floor_shift(m, k),
        Round::Up => -floor_shift(&-m, k),
    }
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    /// Builds `mant * 2^exp` exactly.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        Self::normalized(mant, exp)
    }

    fn normalized(mant: BigInt, exp: i64) -> Self {
        match mant.trailing_zeros() {
            None => Self::zero(),
            Some(0) => BigFloat { mant, exp },
            Some(tz) => BigFloat {
                mant: mant >> tz,
                exp: exp + tz as i64,
            },
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::normalized(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::normalized(v.clone(), 0)
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(m);
        Some(Self::normalized(if neg { -m } else { m }, e))
    }

    /// `num / den` rounded to `prec` bits in direction `dir`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        Self::from_bigint(num)
            .div(&Self::from_bigint(den), prec, dir)
            .expect("zero denominator")
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    /// Number of significant bits of the mantissa.
    pub fn significant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `|self| < 2^top` and, when non-zero, `|self| >= 2^(top-1)`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Multiplication by `2^k`, always exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn is_representable(&self, prec: u32) -> bool {
        self.mant.bits() <= prec as u64
    }

    pub fn round(&self, prec: u32, dir: Round) -> Self {
        if self.is_representable(prec) {
            return self.clone();
        }
        Self::round_parts(self.mant.clone(), self.exp, prec, dir)
    }

    fn round_parts(mant: BigInt, exp: i64, prec: u32, dir: Round) -> Self {
        let bits = mant.bits();
        if bits <= prec as u64 {
            return Self::normalized(mant, exp);
        }
        let k = bits - prec as u64;
        Self::normalized(shift_round(&mant, k, dir), exp + k as i64)
    }

    fn exact_sum(a: &Self, b: &Self) -> (BigInt, i64) {
        let e = a.exp.min(b.exp);
        let ma = &a.mant << (a.exp - e) as u64;
        let mb = &b.mant << (b.exp - e) as u64;
        (ma + mb, e)
    }

    pub fn add(&self, other: &Self, prec: u32, dir: Round) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // Below `2^floor` no grid point of `prec` bits separates `big` from
        // `big + small`, so a same-signed stand-in rounds identically and
        // keeps the alignment shift bounded by the precision.
        let floor = big.exp.min(big.top() - prec as i64 - 2) - 1;
        if small.top() <= floor {
            let tiny = BigFloat {
                mant: small.mant.signum(),
                exp: floor - 1,
            };
            let (m, e) = Self::exact_sum(big, &tiny);
            return Self::round_parts(m, e, prec, dir);
        }
        let (m, e) = Self::exact_sum(self, other);
        Self::round_parts(m, e, prec, dir)
    }

    pub fn sub(&self, other: &Self, prec: u32, dir: Round) -> Self {
        self.add(&other.neg(), prec, dir)
    }

    /// Exact product (no rounding).
    pub fn mul_exact(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul(&self, other: &Self, prec: u32, dir: Round) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::round_parts(&self.mant * &other.mant, self.exp + other.exp, prec, dir)
    }

    /// Quotient rounded to `prec` bits; `None` on division by zero.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // With at least prec+2 integer bits in the quotient every grid point
        // at `prec` bits is an integer, so rounding floor/ceil of the true
        // quotient matches rounding the quotient itself.
        let s = prec as u64 + 2 + other.mant.bits();
        let num = &self.mant << s;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = if dir == Round::Up && !r.is_zero() {
            q + 1
        } else {
            q
        };
        Some(Self::round_parts(
            q,
            self.exp - other.exp - s as i64,
            prec,
            dir,
        ))
    }

    /// Next value of the `prec`-bit grid strictly above `self`.
    pub fn next_up(&self, prec: u32) -> Self {
        self.step(prec, Round::Up)
    }

    /// Next value of the `prec`-bit grid strictly below `self`.
    pub fn next_down(&self, prec: u32) -> Self {
        self.step(prec, Round::Down)
    }

    fn step(&self, prec: u32, dir: Round) -> Self {
        let x = self.round(prec, dir);
        if x != *self {
            return x;
        }
        if x.is_zero() {
            let unit = match dir {
                Round::Up => BigInt::one(),
                Round::Down => -BigInt::one(),
            };
            return BigFloat {
                mant: unit,
                exp: TINY_EXP,
            };
        }
        // Half an ulp past `x` at full width, then round onward: lands on
        // the neighbouring grid point whichever binade it is in.
        let pad = prec as u64 - x.mant.bits();
        let m = &x.mant << (pad + 1);
        let m = match dir {
            Round::Up => m + 1,
            Round::Down => m - 1,
        };
        Self::round_parts(m, x.exp - pad as i64 - 1, prec, dir)
    }

    /// The binary64 value obtained by rounding in direction `dir`.
    ///
    /// Magnitudes beyond the binary64 range become `±f64::MAX` or infinity,
    /// and tiny magnitudes become zero or the smallest subnormal, always on
    /// the requested side.
    pub fn to_f64(&self, dir: Round) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = self.top();
        let lsb = (top - 53).max(-1074);
        let (m, e) = if self.exp >= lsb {
            (self.mant.clone(), self.exp)
        } else {
            (shift_round(&self.mant, (lsb - self.exp) as u64, dir), lsb)
        };
        let neg = m.sign() == Sign::Minus;
        if m.is_zero() {
            return if neg { -0.0 } else { 0.0 };
        }
        let mag = m.abs();
        if e + mag.bits() as i64 > 1024 {
            return match (neg, dir) {
                (false, Round::Up) => f64::INFINITY,
                (false, Round::Down) => f64::MAX,
                (true, Round::Up) => -f64::MAX,
                (true, Round::Down) => f64::NEG_INFINITY,
            };
        }
        let q = mag.to_u64().expect("mantissa fits 53 bits");
        let v = assemble_f64(q, e);
        if neg {
            -v
        } else {
            v
        }
    }

    /// Nearest binary64 value, for display and diagnostics only.
    pub fn to_f64_approx(&self) -> f64 {
        let lo = self.to_f64(Round::Down);
        let hi = self.to_f64(Round::Up);
        if lo == hi {
            return lo;
        }
        let l = BigFloat::from_f64(lo).map(|l| self.sub(&l, 64, Round::Down));
        let h = BigFloat::from_f64(hi).map(|h| h.sub(self, 64, Round::Down));
        match (l, h) {
            (Some(l), Some(h)) if l <= h => lo,
            (Some(_), Some(_)) => hi,
            (None, _) => hi,
            (_, None) => lo,
        }
    }

    /// Exact hexadecimal-significand literal, e.g. `0x1.8p+0` or `-0x1p-3`.
    pub fn to_hex_string(&self) -> String {
        if self.is_zero() {
            return "0x0p+0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let mag = self.mant.abs();
        let bits = mag.bits();
        let e = self.exp + bits as i64 - 1;
        let frac_bits = bits - 1;
        if frac_bits == 0 {
            return format!("{sign}0x1p{e:+}");
        }
        let digits = frac_bits.div_ceil(4);
        let pad = digits * 4 - frac_bits;
        let frac = (mag - (BigInt::one() << frac_bits)) << pad;
        let hex = frac.to_str_radix(16);
        let zeros = "0".repeat(digits as usize - hex.len());
        format!("{sign}0x1.{zeros}{hex}p{e:+}")
    }

    /// Decimal rendering with `digits` significant digits, rounded to nearest.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let r = self.to_rational().abs();
        let ten = BigInt::from(10);
        // Estimate the decimal exponent from the binary one, then correct.
        let mut k = ((self.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let scaled = |k: i64| -> BigInt {
            let shift = digits as i64 - 1 - k;
            let v = if shift >= 0 {
                &r * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
            } else {
                &r / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
            };
            v.round().to_integer()
        };
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let upper = &lower * &ten;
        let mut n = scaled(k);
        for _ in 0..4 {
            if n >= upper {
                k += 1;
            } else if n < lower {
                k -= 1;
            } else {
                break;
            }
            n = scaled(k);
        }
        let s = n.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }

    /// Parses a hexadecimal-significand literal such as `-0x1.8p-3` exactly.
    pub fn parse_hex(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let body = body
            .strip_prefix("0x")
            .or_else(|| body.strip_prefix("0X"))?;
        let (sig, exp) = match body.find(['p', 'P']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match sig.find('.') {
            Some(i) => (&sig[..i], &sig[i + 1..]),
            None => (sig, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let m = BigInt::parse_bytes(digits.as_bytes(), 16)?;
        let m = if neg { -m } else { m };
        Some(Self::normalized(m, exp - 4 * frac_part.len() as i64))
    }
}

fn assemble_f64(q: u64, e: i64) -> f64 {
    let bits = 64 - q.leading_zeros() as i64;
    let top = e + bits;
    if top > -1022 {
        let exponent = top - 1;
        let m = q << (53 - bits);
        f64::from_bits((((exponent + 1023) as u64) << 52) | (m & ((1u64 << 52) - 1)))
    } else {
        f64::from_bits(q << (e + 1074))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.abs() << (self.exp - e) as u64;
                let b = other.mant.abs() << (other.exp - e) as u64;
                a.cmp(&b)
            }
            o => o,
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v).unwrap()
    }

    #[test]
    fn add_rounds_to_binary64_grid() {
        let one = bf(1.0);
        let tiny = bf(2f64.powi(-60));
        assert_eq!(one.add(&tiny, 53, Round::Down), one);
        assert_eq!(one.add(&tiny, 53, Round::Up), bf(1.0 + 2f64.powi(-52)));
    }

    #[test]
    fn add_of_far_apart_magnitudes_is_cheap_and_correct() {
        let one = bf(1.0);
        let tiny = BigFloat::from_parts(BigInt::from(-3), -1_000_000_000);
        assert_eq!(one.add(&tiny, 200, Round::Up), one);
        assert_eq!(one.add(&tiny, 200, Round::Down), one.next_down(200));
    }

    #[test]
    fn next_up_and_down_match_binary64() {
        for v in [1.0, -1.0, 0.75, -3.5, 1e300, 2f64.powi(-1000)] {
            assert_eq!(bf(v).next_up(53), bf(v.next_up()), "{v}");
            assert_eq!(bf(v).next_down(53), bf(v.next_down()), "{v}");
        }
    }

    #[test]
    fn division_directed() {
        let one = bf(1.0);
        let three = bf(3.0);
        let lo = one.div(&three, 53, Round::Down).unwrap();
        let hi = one.div(&three, 53, Round::Up).unwrap();
        assert_eq!(lo.to_f64(Round::Down), 1.0f64 / 3.0);
        assert_eq!(hi, lo.next_up(53));
        assert!(one.div(&BigFloat::zero(), 53, Round::Up).is_none());
    }

    #[test]
    fn hex_round_trip_examples() {
        assert_eq!(bf(1.5).to_hex_string(), "0x1.8p+0");
        assert_eq!(bf(-0.125).to_hex_string(), "-0x1p-3");
        assert_eq!(BigFloat::zero().to_hex_string(), "0x0p+0");
        assert_eq!(BigFloat::parse_hex("0x1.8p+0").unwrap(), bf(1.5));
        assert_eq!(BigFloat::parse_hex("-0x.4p2").unwrap(), bf(-1.0));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(bf(1.5).to_decimal_string(17), "1.5e0");
        assert_eq!(bf(-0.001953125).to_decimal_string(3), "-1.95e-3");
        assert_eq!(bf(100.0).to_decimal_string(5), "1e2");
    }

    #[test]
    fn to_f64_handles_range_limits() {
        let huge = BigFloat::from_parts(BigInt::one(), 5000);
        assert_eq!(huge.to_f64(Round::Down), f64::MAX);
        assert_eq!(huge.to_f64(Round::Up), f64::INFINITY);
        let small = BigFloat::from_parts(BigInt::one(), -5000);
        assert_eq!(small.to_f64(Round::Down), 0.0);
        assert_eq!(small.to_f64(Round::Up), f64::from_bits(1));
        let sub = bf(f64::from_bits(12345));
        assert_eq!(sub.to_f64(Round::Up), f64::from_bits(12345));
    }

    fn arb_bf() -> impl Strategy<Value = BigFloat> {
        (any::<i64>(), -200i64..200).prop_map(|(m, e)| BigFloat::from_parts(BigInt::from(m), e))
    }

    proptest! {
        #[test]
        fn rounding_brackets_exact_result(a in arb_bf(), b in arb_bf(), prec in 53u32..140) {
            let ra = a.to_rational();
            let rb = b.to_rational();
            let checks = [
                (a.add(&b, prec, Round::Down), a.add(&b, prec, Round::Up), &ra + &rb),
                (a.mul(&b, prec, Round::Down), a.mul(&b, prec, Round::Up), &ra * &rb),
            ];
            for (lo, hi, exact) in checks {
                prop_assert!(lo.to_rational() <= exact && exact <= hi.to_rational());
                prop_assert!(lo.is_representable(prec) && hi.is_representable(prec));
                prop_assert!(lo == hi || hi == lo.next_up(prec));
            }
            if !b.is_zero() {
                let lo = a.div(&b, prec, Round::Down).unwrap();
                let hi = a.div(&b, prec, Round::Up).unwrap();
                let exact = &ra / &rb;
                prop_assert!(lo.to_rational() <= exact && exact <= hi.to_rational());
                prop_assert!(lo == hi || hi == lo.next_up(prec));
            }
        }

        #[test]
        fn order_agrees_with_rationals(a in arb_bf(), b in arb_bf()) {
            prop_assert_eq!(a.cmp(&b), a.to_rational().cmp(&b.to_rational()));
        }

        #[test]
        fn f64_conversion_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let b = BigFloat::from_f64(v).unwrap();
            prop_assert_eq!(b.to_f64(Round::Down), v);
            prop_assert_eq!(b.to_f64(Round::Up), v);
            prop_assert_eq!(BigFloat::parse_hex(&b.to_hex_string()).unwrap(), b);
        }
    }
}
