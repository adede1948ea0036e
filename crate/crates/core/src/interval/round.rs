//! Directed rounding for binary64 without touching the FPU rounding mode.
//!
//! Each operation computes the round-to-nearest result and recovers the
//! exact error term (TwoSum, FMA-based TwoProduct, FMA residual for the
//! quotient). The result is stepped one ulp outward only when the error term
//! says the nearest value lies on the wrong side, so exact operations stay
//! exact. Near the underflow range the error terms are not reliable and the
//! result is always widened.

use crate::bigfloat::Round;

const TINY: f64 = 1.0e-290;

#[inline]
fn adjust(r: f64, err_sign: f64, dir: Round) -> f64 {
    match dir {
        Round::Down if err_sign < 0.0 => r.next_down(),
        Round::Up if err_sign > 0.0 => r.next_up(),
        _ => r,
    }
}

#[inline]
fn overflowed(r: f64, dir: Round) -> f64 {
    // Finite operands whose nearest result overflowed.
    match dir {
        Round::Down if r > 0.0 => f64::MAX,
        Round::Up if r < 0.0 => -f64::MAX,
        _ => r,
    }
}

#[inline]
fn nan_to(dir: Round) -> f64 {
    match dir {
        Round::Down => f64::NEG_INFINITY,
        Round::Up => f64::INFINITY,
    }
}

#[inline]
pub fn add(a: f64, b: f64, dir: Round) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if s.is_nan() {
            return nan_to(dir);
        }
        return if a.is_finite() && b.is_finite() {
            overflowed(s, dir)
        } else {
            s
        };
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    adjust(s, err, dir)
}

#[inline]
pub fn sub(a: f64, b: f64, dir: Round) -> f64 {
    add(a, -b, dir)
}

#[inline]
pub fn mul(a: f64, b: f64, dir: Round) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return nan_to(dir);
        }
        return if a.is_finite() && b.is_finite() {
            overflowed(p, dir)
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return match dir {
            Round::Down => p.next_down(),
            Round::Up => p.next_up(),
        };
    }
    let err = a.mul_add(b, -p);
    adjust(p, err, dir)
}

/// `a / b` for `b != 0`.
#[inline]
pub fn div(a: f64, b: f64, dir: Round) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        if q.is_nan() {
            return nan_to(dir);
        }
        return if a.is_finite() && b.is_finite() {
            overflowed(q, dir)
        } else {
            q
        };
    }
    if q.abs() < TINY || b.is_infinite() {
        return match dir {
            Round::Down => q.next_down(),
            Round::Up => q.next_up(),
        };
    }
    // a - q*b, exact when no underflow occurs.
    let r = -q.mul_add(b, -a);
    adjust(q, r * b.signum(), dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;
    use proptest::prelude::*;

    fn exact(v: f64) -> num_rational::BigRational {
        BigFloat::from_f64(v).unwrap().to_rational()
    }

    #[test]
    fn exact_operations_stay_exact() {
        assert_eq!(mul(1.5, 1.5, Round::Down), 2.25);
        assert_eq!(mul(1.5, 1.5, Round::Up), 2.25);
        assert_eq!(add(0.25, -2.0, Round::Up), -1.75);
        assert_eq!(div(1.0, 4.0, Round::Down), 0.25);
    }

    #[test]
    fn inexact_operations_bracket() {
        assert_eq!(add(1.0, 2f64.powi(-60), Round::Down), 1.0);
        assert_eq!(add(1.0, 2f64.powi(-60), Round::Up), 1.0 + 2f64.powi(-52));
        let lo = div(1.0, 3.0, Round::Down);
        let hi = div(1.0, 3.0, Round::Up);
        assert_eq!(hi, lo.next_up());
    }

    #[test]
    fn overflow_goes_outward_only() {
        assert_eq!(mul(1e200, 1e200, Round::Down), f64::MAX);
        assert_eq!(mul(1e200, 1e200, Round::Up), f64::INFINITY);
        assert_eq!(mul(-1e200, 1e200, Round::Up), -f64::MAX);
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            -1e6f64..1e6,
            (-1000i32..1000, -60i32..60).prop_map(|(m, e)| m as f64 * 2f64.powi(e)),
            any::<f64>().prop_filter("finite", |v| v.is_finite() && v.abs() < 1e150 && (v.abs() > 1e-150 || *v == 0.0)),
        ]
    }

    proptest! {
        #[test]
        fn directed_results_bracket_exact(a in finite(), b in finite()) {
            let ra = exact(a);
            let rb = exact(b);
            let cases = [
                (add(a, b, Round::Down), add(a, b, Round::Up), &ra + &rb),
                (sub(a, b, Round::Down), sub(a, b, Round::Up), &ra - &rb),
                (mul(a, b, Round::Down), mul(a, b, Round::Up), &ra * &rb),
            ];
            for (lo, hi, ex) in cases {
                prop_assert!(exact(lo) <= ex && ex <= exact(hi));
                prop_assert!(lo == hi || lo.next_up() == hi);
            }
            if b != 0.0 {
                let (lo, hi) = (div(a, b, Round::Down), div(a, b, Round::Up));
                let ex = &ra / &rb;
                prop_assert!(exact(lo) <= ex && ex <= exact(hi));
            }
        }
    }
}
