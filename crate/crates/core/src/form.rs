//! Exact numbers of the form `a + b·α` and their signs.
//!
//! The sign of `a + b·α` (with `b > 0`) is the comparison of `-a/b` against α.
//! Consecutive convergents `p_k/q_k`, `p_{k+1}/q_{k+1}` are Farey neighbours
//! bracketing α, so any fraction strictly between them has denominator at least
//! `q_k + q_{k+1}`. Picking the first `k` with `q_k + q_{k+1} > b` therefore
//! separates `-a/b` from α with two cross multiplications.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::ContinuedFraction;
use crate::decimal::format_rational;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_i128(x: i128) -> Sign {
        match x.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    fn of_big(x: &BigInt) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn as_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

// Invariant: `Big` is only used when one of the coefficients does not fit in
// an i64, so the derived equality and hash are equality of (a, b).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigInt, BigInt),
}

/// The real number `a + b·α` with integer `a`, `b`.
///
/// Since α is irrational, two forms are equal as reals exactly when their
/// coefficient pairs are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm(Repr);

impl LinearForm {
    pub const ZERO: LinearForm = LinearForm(Repr::Small(0, 0));
    pub const ONE: LinearForm = LinearForm(Repr::Small(1, 0));
    pub const ALPHA: LinearForm = LinearForm(Repr::Small(0, 1));

    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self::from_big(a.into(), b.into())
    }

    pub const fn small(a: i64, b: i64) -> Self {
        LinearForm(Repr::Small(a, b))
    }

    fn from_big(a: BigInt, b: BigInt) -> Self {
        match (a.to_i64(), b.to_i64()) {
            (Some(a), Some(b)) => LinearForm(Repr::Small(a, b)),
            _ => LinearForm(Repr::Big(a, b)),
        }
    }

    fn from_i128(a: i128, b: i128) -> Self {
        match (i64::try_from(a), i64::try_from(b)) {
            (Ok(a), Ok(b)) => LinearForm(Repr::Small(a, b)),
            _ => LinearForm(Repr::Big(a.into(), b.into())),
        }
    }

    /// The integer coefficient.
    pub fn a(&self) -> BigInt {
        match &self.0 {
            Repr::Small(a, _) => BigInt::from(*a),
            Repr::Big(a, _) => a.clone(),
        }
    }

    /// The coefficient of α.
    pub fn b(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, b) => BigInt::from(*b),
            Repr::Big(_, b) => b.clone(),
        }
    }

    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(a, b) => Some((a, b)),
            Repr::Big(..) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, 0))
    }

    pub fn scale(&self, k: i64) -> Self {
        match self.0 {
            Repr::Small(a, b) => Self::from_i128(a as i128 * k as i128, b as i128 * k as i128),
            Repr::Big(ref a, ref b) => Self::from_big(a * k, b * k),
        }
    }

    pub fn scale_big(&self, k: &BigInt) -> Self {
        Self::from_big(self.a() * k, self.b() * k)
    }

    /// Exact sign of `a + b·α`.
    pub fn sign(&self, cf: &ContinuedFraction) -> Result<Sign> {
        if let Repr::Small(a, b) = self.0 {
            if let Some(s) = sign_small(cf, a as i128, b as i128) {
                return Ok(s);
            }
        }
        sign_big(cf, &self.a(), &self.b())
    }

    /// Exact comparison of two forms.
    pub fn compare(&self, other: &LinearForm, cf: &ContinuedFraction) -> Result<Ordering> {
        Ok((self - other).sign(cf)?.as_ordering())
    }

    pub fn lt(&self, other: &LinearForm, cf: &ContinuedFraction) -> Result<bool> {
        Ok(self.compare(other, cf)? == Ordering::Less)
    }

    /// `⌊a + b·α⌋`.
    pub fn floor(&self, cf: &ContinuedFraction) -> Result<BigInt> {
        let (a, b) = (self.a(), self.b());
        if b.is_zero() {
            return Ok(a);
        }
        // With q_k > |b| the convergent p_k/q_k approximates b·α within 1.
        let k = cf.first_q_above(&b.abs())?;
        let (p, q) = cf.convergent(k)?;
        let mut c = (&a * &q + &b * &p).div_floor(&q);
        while (self - &LinearForm::new(c.clone(), 0)).sign(cf)? == Sign::Negative {
            c -= 1;
        }
        while (self - &LinearForm::new(&c + 1, 0)).sign(cf)? != Sign::Negative {
            c += 1;
        }
        Ok(c)
    }

    /// The representative of `self mod 1` in `[0, 1)`.
    pub fn frac(&self, cf: &ContinuedFraction) -> Result<LinearForm> {
        let f = self.floor(cf)?;
        Ok(self - &LinearForm::new(f, 0))
    }

    /// Decimal value with `sig` significant digits, rounded half to even,
    /// computed from a bracketing pair of convergents that already agree on
    /// every printed digit.
    pub fn to_decimal(&self, cf: &ContinuedFraction, sig: usize) -> Result<String> {
        let (a, b) = (self.a(), self.b());
        if b.is_zero() {
            return Ok(format_rational(&a, &BigInt::from(1), sig));
        }
        if self.is_zero() {
            return Ok("0".into());
        }
        let bound = b.abs() * num_traits::pow(BigInt::from(10u8), sig + 1);
        let mut k = 0i64;
        while cf.q(k)? * cf.q(k + 1)? <= bound {
            k += 1;
        }
        loop {
            let (p0, q0) = cf.convergent(k)?;
            let (p1, q1) = cf.convergent(k + 1)?;
            let lo = format_rational(&(&a * &q0 + &b * &p0), &q0, sig);
            let hi = format_rational(&(&a * &q1 + &b * &p1), &q1, sig);
            if lo == hi {
                return Ok(lo);
            }
            k += 1;
        }
    }

    pub fn to_f64(&self, cf: &ContinuedFraction) -> Result<f64> {
        Ok(self
            .to_decimal(cf, 20)?
            .parse()
            .expect("decimal rendering is a valid float literal"))
    }
}

/// Exact sign of a form; see [`LinearForm::sign`].
pub fn sign_of(form: &LinearForm, cf: &ContinuedFraction) -> Result<Sign> {
    form.sign(cf)
}

/// The cut point `x̂_i = {-iα}` as the form `(⌈iα⌉, -i)`.
pub fn frac_position(i: u64, cf: &ContinuedFraction) -> Result<LinearForm> {
    if i == 0 {
        return Ok(LinearForm::ZERO);
    }
    let i = BigInt::from(i);
    let ceil = LinearForm::new(0, i.clone()).floor(cf)? + 1;
    Ok(LinearForm::new(ceil, -i))
}

fn sign_small(cf: &ContinuedFraction, a: i128, b: i128) -> Option<Sign> {
    if b == 0 {
        return Some(Sign::of_i128(a));
    }
    let (a, b, flip) = if b < 0 { (-a, -b, true) } else { (a, b, false) };
    let sep = cf.small_sep();
    let k = sep.partition_point(|&s| s <= b);
    if k >= sep.len() {
        return None;
    }
    let rows = cf.small_rows();
    let (r0, r1) = (rows[k + 1], rows[k + 2]);
    let (lo, hi) = if k % 2 == 0 { (r0, r1) } else { (r1, r0) };
    // r = -a/b against lo = p/q: sign of (-a)·q - p·b.
    let sign = if (-a) * lo.q <= lo.p * b {
        Sign::Positive
    } else if (-a) * hi.q >= hi.p * b {
        Sign::Negative
    } else {
        return None;
    };
    cf.note_depth(k + 1);
    Some(if flip { sign.negate() } else { sign })
}

fn sign_big(cf: &ContinuedFraction, a: &BigInt, b: &BigInt) -> Result<Sign> {
    if b.is_zero() {
        return Ok(Sign::of_big(a));
    }
    let (a, b, flip) = if b.is_negative() {
        (-a, -b, true)
    } else {
        (a.clone(), b.clone(), false)
    };
    let neg_a = -a;
    let decided = cf.scan_rows(|k, (p0, q0), (p1, q1)| {
        if q0 + q1 <= b {
            return None;
        }
        let (lo, hi) = if k % 2 == 0 { ((p0, q0), (p1, q1)) } else { ((p1, q1), (p0, q0)) };
        if &neg_a * lo.1 <= lo.0 * &b {
            Some(Sign::Positive)
        } else if &neg_a * hi.1 >= hi.0 * &b {
            Some(Sign::Negative)
        } else {
            None
        }
    })?;
    Ok(if flip { decided.negate() } else { decided })
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $op:tt) => {
        impl $trait<&LinearForm> for &LinearForm {
            type Output = LinearForm;
            fn $method(self, rhs: &LinearForm) -> LinearForm {
                if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
                    if let (Some(x), Some(y)) = (a.$checked(*c), b.$checked(*d)) {
                        return LinearForm(Repr::Small(x, y));
                    }
                }
                LinearForm::from_big(self.a() $op rhs.a(), self.b() $op rhs.b())
            }
        }
        impl $trait<LinearForm> for LinearForm {
            type Output = LinearForm;
            fn $method(self, rhs: LinearForm) -> LinearForm {
                &self $op &rhs
            }
        }
        impl $trait<&LinearForm> for LinearForm {
            type Output = LinearForm;
            fn $method(self, rhs: &LinearForm) -> LinearForm {
                &self $op rhs
            }
        }
        impl $trait<LinearForm> for &LinearForm {
            type Output = LinearForm;
            fn $method(self, rhs: LinearForm) -> LinearForm {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        &LinearForm::ZERO - self
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        -&self
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.a(), self.b());
        match (a.is_zero(), b.is_zero()) {
            (_, true) => write!(f, "{a}"),
            (true, false) if b.is_one() => write!(f, "α"),
            (true, false) if (-&b).is_one() => write!(f, "-α"),
            (true, false) => write!(f, "{b}α"),
            (false, false) => {
                let op = if b.is_negative() { '-' } else { '+' };
                match b.magnitude().is_one() {
                    true => write!(f, "{a} {op} α"),
                    false => write!(f, "{a} {op} {}α", b.magnitude()),
                }
            }
        }
    }
}

fn ser_int<S: SerializeTuple>(t: &mut S, x: &BigInt) -> std::result::Result<(), S::Error> {
    match x.to_i64() {
        Some(v) => t.serialize_element(&v),
        None => t.serialize_element(&x.to_string()),
    }
}

/// Serialized as the pair `[a, b]`; coefficients beyond 64 bits become decimal strings.
impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        ser_int(&mut t, &self.a())?;
        ser_int(&mut t, &self.b())?;
        t.end()
    }
}

struct IntElem(BigInt);

impl<'de> Deserialize<'de> for IntElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = IntElem;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<IntElem, E> {
                Ok(IntElem(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<IntElem, E> {
                Ok(IntElem(v.into()))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> std::result::Result<IntElem, E> {
                Ok(IntElem(v.into()))
            }
            fn visit_u128<E: de::Error>(self, v: u128) -> std::result::Result<IntElem, E> {
                Ok(IntElem(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<IntElem, E> {
                let digits = v.strip_prefix('-').unwrap_or(v);
                if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(E::custom(format!("{v:?} is not an integer")));
                }
                v.parse().map(IntElem).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LinearForm;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a pair [a, b]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LinearForm, A::Error> {
                let a: IntElem = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let b: IntElem = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(LinearForm::new(a.0, b.0))
            }
        }
        d.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::Schedule;

    #[test]
    fn zero_iff_both_coefficients_vanish() {
        let cf = ContinuedFraction::golden();
        assert_eq!(LinearForm::ZERO.sign(&cf).unwrap(), Sign::Zero);
        assert_eq!(LinearForm::small(0, 1).sign(&cf).unwrap(), Sign::Positive);
        assert_eq!(LinearForm::small(-1, 2).sign(&cf).unwrap(), Sign::Positive);
        // 1 - 2α ≈ -0.236
        assert_eq!(LinearForm::small(1, -2).sign(&cf).unwrap(), Sign::Negative);
    }

    #[test]
    fn convergent_fractions_are_decided() {
        // a + bα with -a/b equal to a convergent: the parity rule must decide it.
        let cf = ContinuedFraction::golden();
        for k in 0..20 {
            let (p, q) = cf.convergent(k).unwrap();
            let f = LinearForm::new(-p, q);
            let expected = if k % 2 == 0 { Sign::Positive } else { Sign::Negative };
            assert_eq!(f.sign(&cf).unwrap(), expected, "k={k}");
        }
    }

    #[test]
    fn big_and_small_paths_agree() {
        let cf = ContinuedFraction::silver();
        for (a, b) in [(-41i64, 99i64), (70, -169), (1, -3), (-2, 5), (-408, 985)] {
            let small = LinearForm::small(a, b).sign(&cf).unwrap();
            let big = sign_big(&cf, &BigInt::from(a), &BigInt::from(b)).unwrap();
            assert_eq!(small, big);
        }
    }

    #[test]
    fn huge_coefficients() {
        let cf = ContinuedFraction::schedule(Schedule::Linear);
        let (p, q) = cf.convergent(45).unwrap();
        let f = LinearForm::new(-p.clone() * 3 - 1, q.clone() * 3);
        // -a/b = p/q + 1/(3q): just above p_45/q_45, and α < p_45/q_45 (odd k).
        assert_eq!(f.sign(&cf).unwrap(), Sign::Negative);
    }

    #[test]
    fn floor_and_frac() {
        let cf = ContinuedFraction::golden();
        assert_eq!(LinearForm::small(0, 7).floor(&cf).unwrap(), BigInt::from(4)); // 7α ≈ 4.326
        assert_eq!(LinearForm::small(0, -1).frac(&cf).unwrap(), LinearForm::small(1, -1));
        assert_eq!(LinearForm::small(3, -5).floor(&cf).unwrap(), BigInt::from(-1)); // 3 - 5α ≈ -0.09
    }

    #[test]
    fn decimals() {
        let cf = ContinuedFraction::golden();
        assert_eq!(
            LinearForm::ALPHA.to_decimal(&cf, 30).unwrap(),
            "0.618033988749894848204586834366"
        );
        assert_eq!(LinearForm::small(1, -1).to_decimal(&cf, 4).unwrap(), "0.3820");
        assert_eq!(LinearForm::small(3, 0).to_decimal(&cf, 3).unwrap(), "3.00");
    }

    #[test]
    fn finite_provider_exhaustion_is_loud() {
        let cf = ContinuedFraction::finite(vec![1, 1, 1]).unwrap();
        let f = LinearForm::small(-89, 144);
        assert!(matches!(f.sign(&cf), Err(crate::Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn serde_pair() {
        let f = LinearForm::small(3, -7);
        assert_eq!(serde_json::to_string(&f).unwrap(), "[3,-7]");
        let big = LinearForm::new(BigInt::from(u64::MAX) * 10, -1);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, "[\"184467440737095516150\",-1]");
        assert_eq!(serde_json::from_str::<LinearForm>(&s).unwrap(), big);
        assert!(serde_json::from_str::<LinearForm>("[1]").is_err());
        assert!(serde_json::from_str::<LinearForm>("[1,2,3]").is_err());
        assert!(serde_json::from_str::<LinearForm>("[\"1e3\",2]").is_err());
    }

    #[test]
    fn small_overflow_promotes() {
        let f = LinearForm::small(i64::MAX, 1) + LinearForm::small(1, 0);
        assert!(f.as_small().is_none());
        assert_eq!(f.a(), BigInt::from(i64::MAX) + 1);
        let back = f - LinearForm::small(1, 0);
        assert_eq!(back, LinearForm::small(i64::MAX, 1));
    }
}
