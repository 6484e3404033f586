//! Fixed significant-digit decimal rendering of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), e as usize)
}

/// Renders `num / den` with exactly `sig` significant digits in plain positional
/// notation, rounding half to even.
pub fn format_rational(num: &BigInt, den: &BigInt, sig: usize) -> String {
    assert!(!den.is_zero(), "zero denominator");
    assert!(sig >= 1, "need at least one significant digit");
    if num.is_zero() {
        return "0".to_string();
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());

    // e = floor(log10(num / den)).
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ge_pow = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow10(e as u32)
        } else {
            &num * pow10((-e) as u32) >= den
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }

    let mut shift = sig as i64 - 1 - e;
    let (n, d) = if shift >= 0 {
        (&num * pow10(shift as u32), den.clone())
    } else {
        (num.clone(), &den * pow10((-shift) as u32))
    };
    let (mut m, r) = n.div_rem(&d);
    let twice = &r * 2u8;
    if twice > d || (twice == d && m.is_odd()) {
        m += 1u8;
    }
    if m == pow10(sig as u32) {
        m = pow10(sig as u32 - 1);
        shift -= 1;
    }

    let digits = m.to_string();
    let body = if shift <= 0 {
        let mut s = digits;
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        s
    } else if shift as usize >= digits.len() {
        format!("0.{}{}", "0".repeat(shift as usize - digits.len()), digits)
    } else {
        let split = digits.len() - shift as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt(n: i64, d: i64, sig: usize) -> String {
        format_rational(&BigInt::from(n), &BigInt::from(d), sig)
    }

    #[test]
    fn plain_notation() {
        assert_eq!(fmt(1, 3, 5), "0.33333");
        assert_eq!(fmt(2, 3, 5), "0.66667");
        assert_eq!(fmt(-22, 7, 4), "-3.143");
        assert_eq!(fmt(12345, 1, 3), "12300");
        assert_eq!(fmt(1, 800, 2), "0.0012");
        assert_eq!(fmt(1, 700, 2), "0.0014");
        assert_eq!(fmt(0, 5, 3), "0");
        assert_eq!(fmt(5, 1, 3), "5.00");
    }

    #[test]
    fn half_even() {
        assert_eq!(fmt(25, 10, 1), "2");
        assert_eq!(fmt(35, 10, 1), "4");
        assert_eq!(fmt(125, 1000, 2), "0.12");
        assert_eq!(fmt(135, 1000, 2), "0.14");
        assert_eq!(fmt(-25, 10, 1), "-2");
    }

    #[test]
    fn carry_into_new_digit() {
        assert_eq!(fmt(9999, 1000, 3), "10.0");
        assert_eq!(fmt(99951, 100000, 3), "1.00");
    }
}
