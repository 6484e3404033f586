//! Continued fraction expansions `α = [0; a_1, a_2, ...]` and their convergents.
//!
//! A [`ContinuedFraction`] owns a digit provider plus a lazily extended table of
//! convergents `p_k / q_k`. Rows that fit in 64 bits are also precomputed in a
//! lock-free table so that sign decisions on small forms never touch the lock.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::LinearForm;

/// Deterministic digit schedules used to probe unbounded expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// `a_k = k`.
    Linear,
    /// `a_k = 2^k`; only defined while the digit fits in 64 bits (`k <= 63`).
    PowersOfTwo,
}

impl Schedule {
    pub fn name(self) -> &'static str {
        match self {
            Schedule::Linear => "linear",
            Schedule::PowersOfTwo => "pow2",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "linear" => Ok(Schedule::Linear),
            "pow2" => Ok(Schedule::PowersOfTwo),
            other => Err(Error::Parse(format!(
                "unknown schedule {other:?} (expected \"linear\" or \"pow2\")"
            ))),
        }
    }
}

/// Where the partial quotients come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Digits {
    /// A truncated expansion; asking past its end is a precision error.
    Finite(Vec<u64>),
    /// `pre` followed by `period` repeated forever.
    Periodic { pre: Vec<u64>, period: Vec<u64> },
    Schedule(Schedule),
}

impl Digits {
    fn get(&self, k: usize) -> Result<u64> {
        debug_assert!(k >= 1);
        match self {
            Digits::Finite(d) => d.get(k - 1).copied().ok_or(Error::InsufficientPrecision {
                required: k,
                available: d.len(),
            }),
            Digits::Periodic { pre, period } => {
                if k <= pre.len() {
                    Ok(pre[k - 1])
                } else {
                    Ok(period[(k - 1 - pre.len()) % period.len()])
                }
            }
            Digits::Schedule(Schedule::Linear) => Ok(k as u64),
            Digits::Schedule(Schedule::PowersOfTwo) => {
                if k < 64 {
                    Ok(1u64 << k)
                } else {
                    Err(Error::InsufficientPrecision {
                        required: k,
                        available: 63,
                    })
                }
            }
        }
    }

    fn depth(&self) -> Option<usize> {
        match self {
            Digits::Finite(d) => Some(d.len()),
            Digits::Periodic { .. } | Digits::Schedule(Schedule::Linear) => None,
            Digits::Schedule(Schedule::PowersOfTwo) => Some(63),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SmallRow {
    pub p: i128,
    pub q: i128,
}

struct Inner {
    digits: Digits,
    /// Rows k = -1, 0, 1, ... while p_k and q_k fit in an i64.
    small: Vec<SmallRow>,
    /// `sep[k] = q_k + q_{k+1}` for consecutive small rows, k >= 0.
    sep: Vec<i128>,
    /// Rows k = -1, 0, 1, ... as (p_k, q_k), extended on demand.
    rows: RwLock<Vec<(BigInt, BigInt)>>,
    consumed: AtomicUsize,
}

/// An irrational angle in (0, 1) given by its partial quotients.
///
/// Cloning is cheap and clones share the convergent table.
#[derive(Clone)]
pub struct ContinuedFraction {
    inner: Arc<Inner>,
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuedFraction")
            .field("digits", &self.inner.digits)
            .finish()
    }
}

impl PartialEq for ContinuedFraction {
    fn eq(&self, other: &Self) -> bool {
        self.inner.digits == other.inner.digits
    }
}

impl Eq for ContinuedFraction {}

fn validate(digits: &[u64], offset: usize) -> Result<()> {
    match digits.iter().position(|&d| d == 0) {
        Some(i) => Err(Error::InvalidPartialQuotient {
            index: offset + i + 1,
            value: 0,
        }),
        None => Ok(()),
    }
}

impl ContinuedFraction {
    pub fn finite(digits: Vec<u64>) -> Result<Self> {
        validate(&digits, 0)?;
        Ok(Self::build(Digits::Finite(digits)))
    }

    pub fn periodic(pre: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        validate(&pre, 0)?;
        validate(&period, pre.len())?;
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must not be empty".into()));
        }
        Ok(Self::build(Digits::Periodic { pre, period }))
    }

    pub fn schedule(schedule: Schedule) -> Self {
        Self::build(Digits::Schedule(schedule))
    }

    /// `[0; 1, 1, 1, ...]`, i.e. `α = (√5 - 1) / 2`.
    pub fn golden() -> Self {
        Self::build(Digits::Periodic {
            pre: vec![],
            period: vec![1],
        })
    }

    /// `[0; 2, 2, 2, ...]`, i.e. `α = √2 - 1`.
    pub fn silver() -> Self {
        Self::build(Digits::Periodic {
            pre: vec![],
            period: vec![2],
        })
    }

    /// Parses the command-line angle syntax: comma separated preamble digits and
    /// an optional comma separated period. Decimal input is rejected.
    pub fn parse_spec(pre: &str, period: Option<&str>) -> Result<Self> {
        let pre = parse_digit_list(pre)?;
        match period {
            Some(p) => Self::periodic(pre, parse_digit_list(p)?),
            None => {
                if pre.is_empty() {
                    return Err(Error::Parse("empty continued fraction".into()));
                }
                Self::finite(pre)
            }
        }
    }

    fn build(digits: Digits) -> Self {
        let mut small = vec![SmallRow { p: 1, q: 0 }, SmallRow { p: 0, q: 1 }];
        let limit = i64::MAX as i128;
        let mut k = 1usize;
        while let Ok(a) = digits.get(k) {
            let n = small.len();
            let (prev, cur) = (small[n - 2], small[n - 1]);
            let a = a as i128;
            let p = a.checked_mul(cur.p).and_then(|x| x.checked_add(prev.p));
            let q = a.checked_mul(cur.q).and_then(|x| x.checked_add(prev.q));
            match (p, q) {
                (Some(p), Some(q)) if p <= limit && q <= limit => small.push(SmallRow { p, q }),
                _ => break,
            }
            k += 1;
        }
        let sep = small[1..]
            .windows(2)
            .map(|w| w[0].q + w[1].q)
            .collect();
        let rows = small
            .iter()
            .map(|r| (BigInt::from(r.p), BigInt::from(r.q)))
            .collect();
        ContinuedFraction {
            inner: Arc::new(Inner {
                digits,
                small,
                sep,
                rows: RwLock::new(rows),
                consumed: AtomicUsize::new(0),
            }),
        }
    }

    pub fn digits(&self) -> &Digits {
        &self.inner.digits
    }

    /// Number of partial quotients available, `None` when the provider is infinite.
    pub fn max_depth(&self) -> Option<usize> {
        self.inner.digits.depth()
    }

    /// `(preamble, period)` for eventually periodic expansions.
    pub fn periodic_parts(&self) -> Option<(&[u64], &[u64])> {
        match &self.inner.digits {
            Digits::Periodic { pre, period } => Some((pre, period)),
            _ => None,
        }
    }

    /// The partial quotient `a_k`, `k >= 1`.
    pub fn digit(&self, k: usize) -> Result<u64> {
        if k == 0 {
            return Err(Error::InvalidArgument("partial quotients are indexed from 1".into()));
        }
        let a = self.inner.digits.get(k)?;
        self.note_depth(k);
        Ok(a)
    }

    /// Largest digit index any computation has used so far.
    pub fn depth_consumed(&self) -> usize {
        self.inner.consumed.load(AtomicOrdering::Relaxed)
    }

    #[inline]
    pub(crate) fn note_depth(&self, k: usize) {
        self.inner.consumed.fetch_max(k, AtomicOrdering::Relaxed);
    }

    pub(crate) fn small_rows(&self) -> &[SmallRow] {
        &self.inner.small
    }

    pub(crate) fn small_sep(&self) -> &[i128] {
        &self.inner.sep
    }

    fn ensure(&self, k: i64) -> Result<()> {
        let need = (k + 2) as usize;
        if self.inner.rows.read().expect("convergent table poisoned").len() >= need {
            return Ok(());
        }
        let mut rows = self.inner.rows.write().expect("convergent table poisoned");
        while rows.len() < need {
            let n = rows.len();
            let a = BigInt::from(self.inner.digits.get(n - 1)?);
            let p = &a * &rows[n - 1].0 + &rows[n - 2].0;
            let q = &a * &rows[n - 1].1 + &rows[n - 2].1;
            rows.push((p, q));
        }
        Ok(())
    }

    /// Runs `f` on the rows `k = -1 ..= upto` (slice index `k + 1`).
    pub(crate) fn with_rows<T>(&self, upto: i64, f: impl FnOnce(&[(BigInt, BigInt)]) -> T) -> Result<T> {
        self.ensure(upto)?;
        if upto >= 1 {
            self.note_depth(upto as usize);
        }
        let rows = self.inner.rows.read().expect("convergent table poisoned");
        Ok(f(&rows[..(upto + 2) as usize]))
    }

    /// Calls `f(k, row_k, row_{k+1})` for `k = 0, 1, ...` until it returns a value,
    /// extending the table in chunks.
    pub(crate) fn scan_rows<T>(
        &self,
        mut f: impl FnMut(i64, &(BigInt, BigInt), &(BigInt, BigInt)) -> Option<T>,
    ) -> Result<T> {
        let mut k = 0i64;
        let mut chunk = 16i64;
        loop {
            let have = self.inner.rows.read().expect("convergent table poisoned").len() as i64 - 2;
            if k + 1 > have {
                // A finite provider may stop inside the chunk; only the next row is required.
                if let Err(e) = self.ensure(k + chunk) {
                    self.ensure(k + 1).map_err(|_| e)?;
                }
                chunk *= 2;
            }
            let rows = self.inner.rows.read().expect("convergent table poisoned");
            let have = rows.len() as i64 - 2;
            while k < have {
                if let Some(v) = f(k, &rows[(k + 1) as usize], &rows[(k + 2) as usize]) {
                    self.note_depth((k + 1) as usize);
                    return Ok(v);
                }
                k += 1;
            }
        }
    }

    /// The convergent row `(p_k, q_k)`, `k >= -1`.
    pub fn convergent(&self, k: i64) -> Result<(BigInt, BigInt)> {
        if k < -1 {
            return Err(Error::InvalidArgument(format!("convergent index {k} < -1")));
        }
        self.with_rows(k, |rows| rows[(k + 1) as usize].clone())
    }

    pub fn q(&self, k: i64) -> Result<BigInt> {
        Ok(self.convergent(k)?.1)
    }

    pub fn q_u64(&self, k: i64) -> Result<u64> {
        if k >= -1 {
            if let Some(r) = self.inner.small.get((k + 1) as usize) {
                if k >= 1 {
                    self.note_depth(k as usize);
                }
                return Ok(r.q as u64);
            }
        }
        self.q(k)?.to_u64().ok_or(Error::Overflow("q_k"))
    }

    /// `η_k = (-1)^k (q_k α - p_k)` as the form `(-1)^{k+1} p_k + (-1)^k q_k α`.
    pub fn eta(&self, k: i64) -> Result<LinearForm> {
        let (p, q) = self.convergent(k)?;
        Ok(if k.rem_euclid(2) == 0 {
            LinearForm::new(-p, q)
        } else {
            LinearForm::new(p, -q)
        })
    }

    /// Smallest `k >= 0` with `q_k > n`.
    pub fn first_q_above(&self, n: &BigInt) -> Result<i64> {
        let mut k = 0i64;
        loop {
            if &self.q(k)? > n {
                return Ok(k);
            }
            k += 1;
        }
    }

    /// A double close to α, from the deepest small convergent.
    pub fn alpha_f64(&self) -> f64 {
        let r = self.inner.small.last().expect("table has seed rows");
        if r.q == 0 {
            return 0.0;
        }
        r.p as f64 / r.q as f64
    }

    pub fn spec(&self) -> CfSpec {
        match &self.inner.digits {
            Digits::Finite(d) => CfSpec {
                pre: d.clone(),
                period: vec![],
                schedule: None,
            },
            Digits::Periodic { pre, period } => CfSpec {
                pre: pre.clone(),
                period: period.clone(),
                schedule: None,
            },
            Digits::Schedule(s) => CfSpec {
                pre: vec![],
                period: vec![],
                schedule: Some(s.name().to_string()),
            },
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        match &self.inner.digits {
            Digits::Finite(d) => write!(f, "[0; {}]", join(d)),
            Digits::Periodic { pre, period } if pre.is_empty() => {
                write!(f, "[0; ({})...]", join(period))
            }
            Digits::Periodic { pre, period } => {
                write!(f, "[0; {}, ({})...]", join(pre), join(period))
            }
            Digits::Schedule(Schedule::Linear) => write!(f, "[0; 1, 2, 3, ...] (a_k = k)"),
            Digits::Schedule(Schedule::PowersOfTwo) => write!(f, "[0; 2, 4, 8, ...] (a_k = 2^k)"),
        }
    }
}

/// Parses `"2,3,1"` into digits. Rejects empty items, zero, signs and decimals.
pub fn parse_digit_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    if s.contains('.') {
        return Err(Error::Parse(format!(
            "{s:?}: decimal input is not accepted, give partial quotients"
        )));
    }
    s.split(',')
        .enumerate()
        .map(|(i, item)| {
            let item = item.trim();
            let v: u64 = item
                .parse()
                .map_err(|_| Error::Parse(format!("partial quotient {item:?} is not a positive integer")))?;
            if v == 0 {
                return Err(Error::InvalidPartialQuotient { index: i + 1, value: 0 });
            }
            Ok(v)
        })
        .collect()
}

/// JSON shape of an angle: `{"pre": [...], "period": [...]}`. An empty period
/// means a finite expansion; `schedule` names a surrogate unbounded expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfSpec {
    #[serde(default)]
    pub pre: Vec<u64>,
    #[serde(default)]
    pub period: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
}

impl CfSpec {
    pub fn build(&self) -> Result<ContinuedFraction> {
        match &self.schedule {
            Some(name) => {
                if !self.pre.is_empty() || !self.period.is_empty() {
                    return Err(Error::InvalidArgument(
                        "a schedule cannot be combined with explicit digits".into(),
                    ));
                }
                Ok(ContinuedFraction::schedule(Schedule::from_name(name)?))
            }
            None if self.period.is_empty() => {
                if self.pre.is_empty() {
                    return Err(Error::InvalidArgument("empty continued fraction".into()));
                }
                ContinuedFraction::finite(self.pre.clone())
            }
            None => ContinuedFraction::periodic(self.pre.clone(), self.period.clone()),
        }
    }
}

impl Serialize for ContinuedFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContinuedFraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CfSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

/// The convergent row `(p_k, q_k)`.
pub fn convergents(cf: &ContinuedFraction, k: i64) -> Result<(BigInt, BigInt)> {
    cf.convergent(k)
}

/// `η_k` as an exact form.
pub fn eta(cf: &ContinuedFraction, k: i64) -> Result<LinearForm> {
    cf.eta(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_recurrence() {
        let cf = ContinuedFraction::golden();
        let qs: Vec<i64> = (0..=5).map(|k| cf.q_u64(k).unwrap() as i64).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8]);
        assert_eq!(cf.convergent(-1).unwrap(), (BigInt::from(1), BigInt::from(0)));
        assert_eq!(cf.convergent(0).unwrap(), (BigInt::from(0), BigInt::from(1)));
    }

    #[test]
    fn seven_cell_angle_rows() {
        let cf = ContinuedFraction::parse_spec("2,3", Some("3")).unwrap();
        assert_eq!(cf.convergent(1).unwrap(), (BigInt::from(1), BigInt::from(2)));
        assert_eq!(cf.convergent(2).unwrap(), (BigInt::from(3), BigInt::from(7)));
    }

    #[test]
    fn finite_provider_reports_depth() {
        let cf = ContinuedFraction::finite(vec![1, 2, 3]).unwrap();
        assert!(cf.q(3).is_ok());
        assert_eq!(
            cf.q(4),
            Err(Error::InsufficientPrecision {
                required: 4,
                available: 3
            })
        );
    }

    #[test]
    fn big_rows_extend_past_small_table() {
        let cf = ContinuedFraction::schedule(Schedule::Linear);
        // q_k grows like k!, so row 40 is far beyond 64 bits.
        let q40 = cf.q(40).unwrap();
        let (q38, q39) = (cf.q(38).unwrap(), cf.q(39).unwrap());
        assert_eq!(q40, BigInt::from(40) * q39 + q38);
        assert!(cf.q_u64(40).is_err());
    }

    #[test]
    fn rejects_bad_digits() {
        assert!(ContinuedFraction::finite(vec![1, 0, 2]).is_err());
        assert!(ContinuedFraction::periodic(vec![1], vec![]).is_err());
        assert!(parse_digit_list("0.618").is_err());
        assert!(parse_digit_list("1,,2").is_err());
        assert!(parse_digit_list("-1").is_err());
        assert_eq!(parse_digit_list(" 2, 3 ").unwrap(), vec![2, 3]);
    }

    #[test]
    fn json_shape() {
        let cf = ContinuedFraction::parse_spec("2,3", Some("2,3")).unwrap();
        let s = serde_json::to_string(&cf).unwrap();
        assert_eq!(s, r#"{"pre":[2,3],"period":[2,3]}"#);
        let back: ContinuedFraction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cf);
        let sched: ContinuedFraction = serde_json::from_str(r#"{"schedule":"linear"}"#).unwrap();
        assert_eq!(sched.digit(7).unwrap(), 7);
        assert!(serde_json::from_str::<ContinuedFraction>(r#"{"pre":[1,0]}"#).is_err());
    }

    #[test]
    fn powers_of_two_stop_at_63() {
        let cf = ContinuedFraction::schedule(Schedule::PowersOfTwo);
        assert_eq!(cf.digit(5).unwrap(), 32);
        assert!(matches!(cf.digit(64), Err(Error::InsufficientPrecision { .. })));
    }
}
