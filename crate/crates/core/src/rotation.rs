//! The rotation `x ↦ x + α mod 1`, cylinder intervals and their return times.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::form::{frac_position, LinearForm, Sign};
use crate::word::Word;

/// A half-open arc `[start, end)` of the circle `[0, 1)`.
///
/// `start == end` denotes the whole circle. When the endpoints are cut points
/// `x̂_i = {-iα}` their indices are kept alongside.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CircleInterval {
    start: LinearForm,
    end: LinearForm,
    length: LinearForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    cuts: Option<(u64, u64)>,
}

impl CircleInterval {
    /// `[start, end)` for points already reduced to `[0, 1)`.
    pub fn new(start: LinearForm, end: LinearForm, cf: &ContinuedFraction) -> Result<Self> {
        let length = match end.compare(&start, cf)? {
            Ordering::Greater => &end - &start,
            Ordering::Less => &LinearForm::ONE - &(&start - &end),
            Ordering::Equal => LinearForm::ONE,
        };
        Ok(CircleInterval {
            start,
            end,
            length,
            cuts: None,
        })
    }

    /// `[x̂_i, x̂_j)`.
    pub fn from_cuts(i: u64, j: u64, cf: &ContinuedFraction) -> Result<Self> {
        let mut iv = Self::new(frac_position(i, cf)?, frac_position(j, cf)?, cf)?;
        iv.cuts = Some((i, j));
        Ok(iv)
    }

    /// `s·[x̂_i, x̂_j)` with the convention `(-1)[x̂_i, x̂_j) = [x̂_j, x̂_i)`.
    pub fn oriented(i: u64, j: u64, positive: bool, cf: &ContinuedFraction) -> Result<Self> {
        if positive {
            Self::from_cuts(i, j, cf)
        } else {
            Self::from_cuts(j, i, cf)
        }
    }

    pub fn full() -> Self {
        CircleInterval {
            start: LinearForm::ZERO,
            end: LinearForm::ZERO,
            length: LinearForm::ONE,
            cuts: Some((0, 0)),
        }
    }

    pub fn start(&self) -> &LinearForm {
        &self.start
    }

    pub fn end(&self) -> &LinearForm {
        &self.end
    }

    pub fn length(&self) -> &LinearForm {
        &self.length
    }

    /// Cut point indices `(i, j)` when the arc is `[x̂_i, x̂_j)`.
    pub fn cuts(&self) -> Option<(u64, u64)> {
        self.cuts
    }

    pub fn is_full(&self) -> bool {
        self.length == LinearForm::ONE
    }

    /// Same arc, ignoring how the endpoints were named.
    pub fn same_arc(&self, other: &CircleInterval) -> bool {
        self.start == other.start && self.end == other.end
    }

    pub fn contains(&self, x: &LinearForm, cf: &ContinuedFraction) -> Result<bool> {
        if self.is_full() {
            return Ok(true);
        }
        // {x - start} < length
        let mut d = x - &self.start;
        if d.sign(cf)? == Sign::Negative {
            d = d + LinearForm::ONE;
        }
        d.lt(&self.length, cf)
    }
}

impl fmt::Display for CircleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cuts {
            Some((i, j)) => write!(f, "[x̂{i}, x̂{j})"),
            None => write!(f, "[{}, {})", self.start, self.end),
        }
    }
}

/// Next cut point: `x̂_{n+1} = x̂_n - α mod 1`.
fn step_back(x: &LinearForm, cf: &ContinuedFraction) -> Result<LinearForm> {
    let y = x - &LinearForm::ALPHA;
    Ok(if y.sign(cf)? == Sign::Negative { y + LinearForm::ONE } else { y })
}

/// Incremental intersection `I_{u_0 ... u_{n-1}}` of the preimages of the two
/// base intervals, one letter at a time.
///
/// After `n` letters the current cell is a cell of the partition cut by
/// `x̂_0, ..., x̂_n`, so reading letter `n` only has to place `x̂_{n+1}`.
#[derive(Debug, Clone)]
pub struct CylinderTracker<'a> {
    cf: &'a ContinuedFraction,
    n: u64,
    cell: CircleInterval,
    /// `x̂_n`
    last_cut: LinearForm,
    one_minus_alpha: LinearForm,
}

impl<'a> CylinderTracker<'a> {
    pub fn new(cf: &'a ContinuedFraction) -> Self {
        CylinderTracker {
            cf,
            n: 0,
            cell: CircleInterval::full(),
            last_cut: LinearForm::ZERO,
            one_minus_alpha: LinearForm::small(1, -1),
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn cell(&self) -> &CircleInterval {
        &self.cell
    }

    /// Appends a letter. Returns `false`, leaving the state unchanged, when the
    /// extended word has an empty cylinder.
    pub fn push(&mut self, bit: bool) -> Result<bool> {
        let cf = self.cf;
        let cut = step_back(&self.last_cut, cf)?;
        let (s_idx, e_idx) = self.cell.cuts.expect("tracker cells are cut intervals");
        let mut offset = &cut - &self.cell.start;
        if offset.sign(cf)? == Sign::Negative {
            offset = offset + LinearForm::ONE;
        }
        let splits = !offset.is_zero() && offset.lt(&self.cell.length, cf)?;
        let c_idx = self.n + 1;
        if splits {
            // [s, c) lies in the preimage of I_0 = [x̂_n, x̂_{n+1}), [c, e) in that of I_1.
            self.cell = if bit {
                CircleInterval {
                    length: &self.cell.length - &offset,
                    start: cut.clone(),
                    end: self.cell.end.clone(),
                    cuts: Some((c_idx, e_idx)),
                }
            } else {
                CircleInterval {
                    length: offset,
                    start: self.cell.start.clone(),
                    end: cut.clone(),
                    cuts: Some((s_idx, c_idx)),
                }
            };
        } else {
            let mut rel = &self.cell.start - &self.last_cut;
            if rel.sign(cf)? == Sign::Negative {
                rel = rel + LinearForm::ONE;
            }
            let zero = rel.lt(&self.one_minus_alpha, cf)?;
            if zero == bit {
                return Ok(false);
            }
        }
        self.last_cut = cut;
        self.n += 1;
        Ok(true)
    }
}

/// `I_u`, or `None` when the cylinder is empty.
pub fn cylinder_interval(u: &Word, cf: &ContinuedFraction) -> Result<Option<CircleInterval>> {
    let mut t = CylinderTracker::new(cf);
    for bit in u.iter() {
        if !t.push(bit)? {
            return Ok(None);
        }
    }
    Ok(Some(t.cell))
}

/// The index `k >= -1` with `η_{k+1} < len <= η_k`, scanning upward from `from`.
///
/// `eta` supplies `η_k`; the scan assumes `len <= η_from`.
pub fn klein_bracket_from(
    len: &LinearForm,
    from: i64,
    cf: &ContinuedFraction,
    eta: &mut impl FnMut(i64) -> Result<LinearForm>,
) -> Result<i64> {
    let mut k = from;
    loop {
        let next = eta(k + 1)?;
        if next.lt(len, cf)? {
            return Ok(k);
        }
        k += 1;
        if k > 10_000 {
            return Err(Error::Inconsistent(format!(
                "no bracket for length {len} below depth {k}"
            )));
        }
    }
}

pub fn klein_bracket(len: &LinearForm, cf: &ContinuedFraction) -> Result<i64> {
    check_length(len, cf)?;
    klein_bracket_from(len, -1, cf, &mut |k| cf.eta(k))
}

fn check_length(len: &LinearForm, cf: &ContinuedFraction) -> Result<()> {
    if len.sign(cf)? != Sign::Positive || len.compare(&LinearForm::ONE, cf)? == Ordering::Greater {
        return Err(Error::InvalidArgument(format!(
            "interval length {len} is not in (0, 1]"
        )));
    }
    Ok(())
}

/// Return time of a half-open interval of length `len`: `q_{k+1}` for the
/// bracket `η_{k+1} < len <= η_k`.
pub fn tau_formula(len: &LinearForm, cf: &ContinuedFraction) -> Result<BigInt> {
    let k = klein_bracket(len, cf)?;
    cf.q(k + 1)
}

/// [`tau_formula`] with an arbitrary source of `η_k`.
pub fn tau_formula_with(
    len: &LinearForm,
    cf: &ContinuedFraction,
    mut eta: impl FnMut(i64) -> Result<LinearForm>,
) -> Result<BigInt> {
    check_length(len, cf)?;
    let k = klein_bracket_from(len, -1, cf, &mut eta)?;
    cf.q(k + 1)
}

pub fn tau_interval_formula(iv: &CircleInterval, cf: &ContinuedFraction) -> Result<BigInt> {
    tau_formula(iv.length(), cf)
}

/// Default search cap for the orbit search: `q_{K+2}` for the bracket `K`.
pub fn default_cap(len: &LinearForm, cf: &ContinuedFraction) -> Result<u64> {
    let k = klein_bracket(len, cf)?;
    cf.q_u64(k + 2)
}

/// The least `n` in `[1, cap]` with `{nα} < len` or `1 - {nα} < len`, which is
/// exactly when the `n`-th image of a half-open arc of length `len` meets it.
pub fn tau_bruteforce(len: &LinearForm, cf: &ContinuedFraction, cap: u64) -> Result<u64> {
    check_length(len, cf)?;
    let one_minus = &LinearForm::ONE - len;
    let mut delta = LinearForm::ZERO;
    for n in 1..=cap {
        delta = &delta + &LinearForm::ALPHA;
        if delta.compare(&LinearForm::ONE, cf)? != Ordering::Less {
            delta = delta - LinearForm::ONE;
        }
        if delta.lt(len, cf)? || one_minus.lt(&delta, cf)? {
            return Ok(n);
        }
    }
    Err(Error::CapExceeded { cap })
}

pub fn tau_interval_bruteforce(iv: &CircleInterval, cf: &ContinuedFraction, cap: u64) -> Result<u64> {
    tau_bruteforce(iv.length(), cf, cap)
}

/// Orbit-search return times memoized by length, which is all they depend on.
#[derive(Debug)]
pub struct BruteForceTau<'a> {
    cf: &'a ContinuedFraction,
    memo: HashMap<LinearForm, u64>,
}

impl<'a> BruteForceTau<'a> {
    pub fn new(cf: &'a ContinuedFraction) -> Self {
        BruteForceTau {
            cf,
            memo: HashMap::new(),
        }
    }

    pub fn tau(&mut self, len: &LinearForm) -> Result<u64> {
        if let Some(&t) = self.memo.get(len) {
            return Ok(t);
        }
        let cap = default_cap(len, self.cf)?;
        let t = tau_bruteforce(len, self.cf, cap)?;
        self.memo.insert(len.clone(), t);
        Ok(t)
    }
}

/// One cell `I_u` of the partition cut by `x̂_0, ..., x̂_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub word: Word,
    pub interval: CircleInterval,
}

/// The `n + 1` cells of length-`n` cylinders, sorted by left endpoint.
pub fn partition(n: u64, cf: &ContinuedFraction) -> Result<Vec<Cell>> {
    let mut cuts = Vec::with_capacity(n as usize + 1);
    let mut x = LinearForm::ZERO;
    for i in 0..=n {
        cuts.push((i, x.clone()));
        if i < n {
            x = step_back(&x, cf)?;
        }
    }
    let mut err = None;
    cuts.sort_by(|a, b| match a.1.compare(&b.1, cf) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }

    // bits[m + n] = [{mα} >= 1 - α] for m in [-n, n - 1]; {-iα} is x̂_i.
    let one_minus_alpha = LinearForm::small(1, -1);
    let mut bits = vec![false; 2 * n as usize];
    let mut by_index = vec![LinearForm::ZERO; n as usize + 1];
    for (i, f) in &cuts {
        by_index[*i as usize] = f.clone();
    }
    for i in 1..=n {
        bits[(n - i) as usize] = !by_index[i as usize].lt(&one_minus_alpha, cf)?;
    }
    let mut y = LinearForm::ZERO;
    for m in 0..n {
        bits[(n + m) as usize] = !y.lt(&one_minus_alpha, cf)?;
        y = y + LinearForm::ALPHA;
        if y.compare(&LinearForm::ONE, cf)? != Ordering::Less {
            y = y - LinearForm::ONE;
        }
    }

    let count = cuts.len();
    let mut cells = Vec::with_capacity(count);
    for c in 0..count {
        let (i, ref start) = cuts[c];
        let (j, ref end) = cuts[(c + 1) % count];
        let length = if count == 1 {
            LinearForm::ONE
        } else if c + 1 == count {
            &LinearForm::ONE - start
        } else {
            end - start
        };
        let from = (n - i) as usize;
        let word = Word::from_bits(bits[from..from + n as usize].iter().copied());
        cells.push(Cell {
            word,
            interval: CircleInterval {
                start: start.clone(),
                end: end.clone(),
                length,
                cuts: Some((i, j)),
            },
        });
    }
    Ok(cells)
}

/// Distinct cell lengths of a partition, in increasing order.
pub fn distinct_lengths(cells: &[Cell], cf: &ContinuedFraction) -> Result<Vec<LinearForm>> {
    let mut out: Vec<LinearForm> = Vec::new();
    for c in cells {
        if !out.contains(&c.interval.length) {
            out.push(c.interval.length.clone());
        }
    }
    let mut err = None;
    out.sort_by(|a, b| match a.compare(b, cf) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
