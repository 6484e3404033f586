//! Real quadratic numbers `(a + b√d) / c` with exact comparison.
//!
//! Limits of convergent ratios of eventually periodic expansions live here.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal::format_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

fn sgn(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `b√d + e√f` with `d, f >= 0`.
fn sign_pair(b: &BigInt, d: &BigInt, e: &BigInt, f: &BigInt) -> i8 {
    let s1 = if d.is_zero() { 0 } else { sgn(b) };
    let s2 = if f.is_zero() { 0 } else { sgn(e) };
    if s1 == 0 {
        return s2;
    }
    if s2 == 0 || s1 == s2 {
        return s1;
    }
    match (b * b * d).cmp(&(e * e * f)) {
        Ordering::Greater => s1,
        Ordering::Less => s2,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b√d + e√f`.
fn sign_triple(a: &BigInt, b: &BigInt, d: &BigInt, e: &BigInt, f: &BigInt) -> i8 {
    let tail = sign_pair(b, d, e, f);
    let head = sgn(a);
    if head == 0 || head == tail {
        return if head == 0 { tail } else { head };
    }
    if tail == 0 {
        return head;
    }
    // Opposite signs: compare a² with (b√d + e√f)² = b²d + e²f + 2be√(df).
    let k = a * a - b * b * d - e * e * f;
    let l: BigInt = -(b * e) * 2u8;
    match sign_pair(&k, &BigInt::one(), &l, &(d * f)) {
        1 => head,
        -1 => tail,
        _ => 0,
    }
}

impl Surd {
    /// `(a + b√d) / c`; requires `d >= 0` and `c != 0`.
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        let g = a.gcd(&b).gcd(&c);
        Surd {
            a: a / &g,
            b: b / &g,
            d,
            c: c / &g,
        }
    }

    pub fn rational(r: &BigRational) -> Self {
        Surd::new(r.numer().clone(), BigInt::zero(), BigInt::zero(), r.denom().clone())
    }

    pub fn integer(n: i64) -> Self {
        Surd::rational(&BigRational::from_integer(n.into()))
    }

    /// `(1 + √5) / 2`
    pub fn golden_ratio() -> Self {
        Surd::new(1.into(), 1.into(), 5.into(), 2.into())
    }

    pub fn recip(&self) -> Surd {
        // c / (a + b√d) = c (a - b√d) / (a² - b²d)
        let den = &self.a * &self.a - &self.b * &self.b * &self.d;
        Surd::new(&self.c * &self.a, -(&self.c * &self.b), self.d.clone(), den)
    }

    pub fn add_int(&self, n: i64) -> Surd {
        Surd::new(&self.a + &self.c * n, self.b.clone(), self.d.clone(), self.c.clone())
    }

    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        let a = &self.a * &other.c - &other.a * &self.c;
        let b = &self.b * &other.c;
        let e = -(&other.b * &self.c);
        match sign_triple(&a, &b, &self.d, &e, &other.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Rational bounds `lo <= self <= hi` with denominators `c·10^e`.
    fn bracket(&self, e: u32) -> (BigInt, BigInt, BigInt) {
        let scale = num_traits::pow(BigInt::from(10u8), e as usize);
        let rad = &self.b * &self.b * &self.d * &scale * &scale;
        let root = rad.sqrt();
        let exact = &root * &root == rad;
        let (lo, hi) = if self.b.is_negative() {
            (-(&root) - if exact { 0 } else { 1 }, -root)
        } else {
            (root.clone(), root + if exact { 0 } else { 1 })
        };
        let base = &self.a * &scale;
        (&base + lo, base + hi, &self.c * scale)
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        let mut e = sig as u32 + 10;
        loop {
            let (lo, hi, den) = self.bracket(e);
            let (s_lo, s_hi) = (format_rational(&lo, &den, sig), format_rational(&hi, &den, sig));
            if s_lo == s_hi {
                return s_lo;
            }
            e += 10;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().expect("decimal rendering parses")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() || self.d.is_zero() {
            return write!(f, "{}/{}", self.a, self.c);
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        let b = self.b.abs();
        let coef = if b.is_one() { String::new() } else { b.to_string() };
        let num = format!("{} {op} {coef}√{}", self.a, self.d);
        if self.c.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

/// A 2×2 integer matrix acting as `t ↦ (p t + q) / (r t + s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Mobius {
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Self {
        Mobius {
            p: p.into(),
            q: q.into(),
            r: r.into(),
            s: s.into(),
        }
    }

    pub fn identity() -> Self {
        Mobius::new(1, 0, 0, 1)
    }

    /// `self ∘ other`
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }

    fn apply_f64(&self, t: f64) -> f64 {
        let f = |x: &BigInt| x.to_string().parse::<f64>().unwrap_or(f64::NAN);
        (f(&self.p) * t + f(&self.q)) / (f(&self.r) * t + f(&self.s))
    }

    /// The attracting fixed point, for a hyperbolic map with `r != 0`.
    ///
    /// The roots of `r t² + (s - p) t - q = 0` are exact; which one attracts is
    /// read off a floating iteration started at `seed`, where the two are far apart.
    pub fn attracting_fixed_point(&self, seed: f64) -> Option<Surd> {
        if self.r.is_zero() {
            return None;
        }
        let diff = &self.s - &self.p;
        let disc: BigInt = &diff * &diff + &self.r * &self.q * 4u8;
        if disc.is_negative() {
            return None;
        }
        let plus = Surd::new(&self.p - &self.s, BigInt::one(), disc.clone(), &self.r * 2);
        let minus = Surd::new(&self.p - &self.s, -BigInt::one(), disc, &self.r * 2);
        let mut t = seed;
        for _ in 0..200 {
            t = self.apply_f64(t);
        }
        let (dp, dm) = ((plus.to_f64() - t).abs(), (minus.to_f64() - t).abs());
        Some(if dp <= dm { plus } else { minus })
    }
}
