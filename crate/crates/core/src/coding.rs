//! Digit words of the constrained coding space and the intervals `J_u`.
//!
//! A digit word `x_1 ... x_k` satisfies `x_1 != 0`, `0 <= x_j <= a_j` and
//! `x_{j+1} = 0 => x_j = a_j`. The intervals `J_u` over all admissible words of
//! length `k` are exactly the cells cut by `x̂_0, ..., x̂_{q_k - 1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::rotation::{cylinder_interval, CircleInterval};
use crate::word::Word;

/// A finite sequence of digits `x_1, ..., x_k`, not yet checked against an angle.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord(pub Vec<u64>);

impl DigitWord {
    pub fn new(digits: Vec<u64>) -> Self {
        DigitWord(digits)
    }

    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x_j`, 1-based.
    pub fn x(&self, j: usize) -> u64 {
        self.0[j - 1]
    }

    pub fn prefix(&self, k: usize) -> DigitWord {
        DigitWord(self.0[..k].to_vec())
    }

    /// Checks admissibility for `cf`.
    pub fn validate(&self, cf: &ContinuedFraction) -> Result<()> {
        for (i, &x) in self.0.iter().enumerate() {
            let j = i + 1;
            let a = cf.digit(j)?;
            if x > a {
                return Err(Error::DigitConstraint {
                    index: j,
                    reason: format!("x_{j} = {x} exceeds a_{j} = {a}"),
                });
            }
            if x == 0 {
                if j == 1 {
                    return Err(Error::DigitConstraint {
                        index: 1,
                        reason: "x_1 must be nonzero".into(),
                    });
                }
                let prev = self.0[i - 1];
                let a_prev = cf.digit(j - 1)?;
                if prev != a_prev {
                    return Err(Error::DigitConstraint {
                        index: j,
                        reason: format!(
                            "x_{j} = 0 requires x_{} = a_{} = {a_prev}, found {prev}",
                            j - 1,
                            j - 1
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Comma separated digits, e.g. `"2,0,3"`; the empty string is the empty word.
impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitWord::default());
        }
        s.split(',')
            .map(|item| {
                let item = item.trim();
                if item.is_empty() || !item.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(Error::Parse(format!("digit {item:?} is not a nonnegative integer")));
                }
                item.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("digit {item:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DigitWord)
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u64>::deserialize(d).map(DigitWord)
    }
}

/// The extremal points of the coding space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    /// `(a_1, a_2, a_3, ...)`
    B,
    /// `(1, a_2, 0, a_4, 0, ...)`
    C,
    /// `(a_1, 0, a_3, 0, ...)`
    D,
}

impl Extremal {
    pub fn from_name(s: &str) -> Option<Extremal> {
        match s {
            "b" => Some(Extremal::B),
            "c" => Some(Extremal::C),
            "d" => Some(Extremal::D),
            _ => None,
        }
    }

    pub fn digits(self, len: usize, cf: &ContinuedFraction) -> Result<DigitWord> {
        (1..=len)
            .map(|j| {
                Ok(match self {
                    Extremal::B => cf.digit(j)?,
                    Extremal::C if j == 1 => 1,
                    Extremal::C if j % 2 == 0 => cf.digit(j)?,
                    Extremal::C => 0,
                    Extremal::D if j % 2 == 1 => cf.digit(j)?,
                    Extremal::D => 0,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(DigitWord)
    }
}

/// `J_u` together with the oriented cut indices it was built from:
/// `J_u = (-1)^{k-1} [x̂_a, x̂_b)` at depth `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    depth: usize,
    a: u64,
    b: u64,
    maximal: bool,
}

impl Node {
    fn root() -> Node {
        // The whole circle, [x̂_0, x̂_0), entered like a non-maximal node.
        Node {
            depth: 0,
            a: 0,
            b: 0,
            maximal: false,
        }
    }

    fn child(&self, x: u64, cf: &ContinuedFraction) -> Result<Node> {
        let k = self.depth + 1;
        let ak = cf.digit(k)?;
        let q = cf.q_u64(k as i64 - 1)?;
        let (lo, hi) = if self.maximal { (0, ak) } else { (1, ak) };
        if x < lo || x > ak {
            return Err(Error::DigitConstraint {
                index: k,
                reason: format!("x_{k} = {x} is outside {lo}..={hi}"),
            });
        }
        let idx = |m: u64| -> Result<u64> {
            m.checked_mul(q)
                .and_then(|v| v.checked_add(self.a))
                .ok_or(Error::Overflow("cut index"))
        };
        let (a, b) = match (self.maximal, x == ak) {
            (false, false) => (idx(x)?, idx(x - 1)?),
            (false, true) => (self.b, idx(ak - 1)?),
            (true, false) => (idx(x + 1)?, idx(x)?),
            (true, true) => (self.b, idx(x)?),
        };
        Ok(Node {
            depth: k,
            a,
            b,
            maximal: x == ak,
        })
    }

    fn interval(&self, cf: &ContinuedFraction) -> Result<CircleInterval> {
        if self.depth == 0 {
            return Ok(CircleInterval::full());
        }
        CircleInterval::oriented(self.a, self.b, self.depth % 2 == 1, cf)
    }
}

fn descend(u: &DigitWord, cf: &ContinuedFraction) -> Result<Node> {
    u.validate(cf)?;
    let mut node = Node::root();
    for &x in u.digits() {
        node = node.child(x, cf)?;
    }
    Ok(node)
}

/// `J_u` for an admissible digit word; the empty word gives the whole circle.
pub fn build_j_interval(u: &DigitWord, cf: &ContinuedFraction) -> Result<CircleInterval> {
    descend(u, cf)?.interval(cf)
}

/// `|J_u|` from the closed form: `η_{k-1}` when `u_k < a_k`, else `η_{k-1} + η_k`.
pub fn j_length(u: &DigitWord, cf: &ContinuedFraction) -> Result<LinearForm> {
    let k = u.len() as i64;
    if k == 0 {
        return Ok(LinearForm::ONE);
    }
    let last = u.x(u.len());
    let e = cf.eta(k - 1)?;
    Ok(if last < cf.digit(u.len())? { e } else { e + cf.eta(k)? })
}

/// Admissible digits that may follow `prev` at position `k` (`prev = None` for `k = 1`).
pub fn next_digits(prev: Option<u64>, k: usize, cf: &ContinuedFraction) -> Result<std::ops::RangeInclusive<u64>> {
    let ak = cf.digit(k)?;
    let maximal = match prev {
        None => false,
        Some(p) => p == cf.digit(k - 1)?,
    };
    Ok(if maximal { 0..=ak } else { 1..=ak })
}

/// All admissible digit words of length `k`, in lexicographic order.
pub fn enumerate_words(k: usize, cf: &ContinuedFraction) -> Result<Vec<DigitWord>> {
    let mut out = vec![DigitWord::default()];
    for j in 1..=k {
        let mut next = Vec::new();
        for w in &out {
            for x in next_digits(w.0.last().copied(), j, cf)? {
                let mut d = w.0.clone();
                d.push(x);
                next.push(DigitWord(d));
            }
        }
        out = next;
    }
    Ok(out)
}

/// The digit word of depth `k` whose interval contains `point`.
pub fn gamma_locate(point: &LinearForm, k: usize, cf: &ContinuedFraction) -> Result<DigitWord> {
    let mut node = Node::root();
    let mut digits = Vec::with_capacity(k);
    for j in 1..=k {
        let range = next_digits(digits.last().copied(), j, cf)?;
        let mut found = None;
        for x in range {
            let child = node.child(x, cf)?;
            if child.interval(cf)?.contains(point, cf)? {
                found = Some((x, child));
                break;
            }
        }
        let (x, child) = found.ok_or_else(|| {
            Error::Inconsistent(format!("no child of {} at depth {j} contains {point}", DigitWord(digits.clone())))
        })?;
        digits.push(x);
        node = child;
    }
    Ok(DigitWord(digits))
}

/// The left endpoint of `J_u`, a point whose coding starts with `u`.
pub fn point_from_digits(u: &DigitWord, cf: &ContinuedFraction) -> Result<LinearForm> {
    Ok(build_j_interval(u, cf)?.start().clone())
}

/// `γ_k` at an explicit depth: the digit word `u` of length `k` with `J_u = I_word`.
pub fn gamma_encode_at(word: &Word, k: usize, cf: &ContinuedFraction) -> Result<DigitWord> {
    let q = cf.q_u64(k as i64)?;
    if word.len() as u64 + 1 != q {
        return Err(Error::BadWordLength { len: word.len() });
    }
    let iv = cylinder_interval(word, cf)?.ok_or_else(|| Error::NotInLanguage {
        word: word.to_string(),
    })?;
    let u = gamma_locate(iv.start(), k, cf)?;
    let j = build_j_interval(&u, cf)?;
    if !j.same_arc(&iv) {
        return Err(Error::Inconsistent(format!(
            "J_{u} = {j} differs from the cylinder of {word} = {iv}"
        )));
    }
    Ok(u)
}

/// `γ_k` with `k` read off the length `q_k - 1`; the smallest such `k` is used.
pub fn gamma_encode(word: &Word, cf: &ContinuedFraction) -> Result<DigitWord> {
    let n = word.len() as u64 + 1;
    let mut k = 0i64;
    loop {
        let q = cf.q_u64(k)?;
        if q == n {
            return gamma_encode_at(word, k as usize, cf);
        }
        if q > n {
            return Err(Error::BadWordLength { len: word.len() });
        }
        k += 1;
    }
}

/// Number of admissible words of length `k`, which equals `q_k`.
pub fn count_words(k: usize, cf: &ContinuedFraction) -> Result<u64> {
    // Words ending in a maximal digit, and in any other digit.
    let (mut max, mut other) = (0u64, 1u64);
    for j in 1..=k {
        let a = cf.digit(j)?;
        let next_other = other
            .checked_mul(a - 1)
            .and_then(|v| v.checked_add(max.checked_mul(a)?))
            .ok_or(Error::Overflow("word count"))?;
        max = max.checked_add(other).ok_or(Error::Overflow("word count"))?;
        other = next_other;
    }
    max.checked_add(other).ok_or(Error::Overflow("word count"))
}
