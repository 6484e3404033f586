//! Mechanical words and the factor language, read off orbit segments.
//!
//! Nothing here uses cylinder intervals: factors and return times come from
//! scanning the itinerary of an orbit, which makes these functions an oracle
//! independent of the interval computations.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::form::{LinearForm, Sign};
use crate::word::Word;

/// Itinerary `s_i = [{x0 + iα} >= 1 - α]` of an orbit, for `i < len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanicalPrefix {
    pub origin: LinearForm,
    pub bits: Word,
}

impl MechanicalPrefix {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Exact itinerary of `x0` for `len` steps.
pub fn generate_prefix(cf: &ContinuedFraction, x0: &LinearForm, len: usize) -> Result<MechanicalPrefix> {
    if x0.sign(cf)? == Sign::Negative || !x0.lt(&LinearForm::ONE, cf)? {
        return Err(Error::InvalidArgument(format!("origin {x0} is not in [0, 1)")));
    }
    let one_minus_alpha = LinearForm::small(1, -1);
    let mut bits = Word::new();
    let mut y = x0.clone();
    for i in 0..len {
        // y >= 1 - α is exactly when adding α wraps past 1.
        let wrapped = !y.lt(&one_minus_alpha, cf)?;
        bits.push(wrapped);
        if i + 1 < len {
            y = if wrapped { y - LinearForm::small(1, -1) } else { y + LinearForm::ALPHA };
        }
    }
    Ok(MechanicalPrefix {
        origin: x0.clone(),
        bits,
    })
}

fn q_usize(cf: &ContinuedFraction, k: i64) -> Result<usize> {
    cf.q_u64(k)?.to_usize().ok_or(Error::Overflow("q_k"))
}

/// Smallest `j >= 0` with `q_j > m`.
fn first_q_above(cf: &ContinuedFraction, m: usize) -> Result<i64> {
    cf.first_q_above(&BigInt::from(m))
}

/// Number of starting positions of the orbit of 0 that is guaranteed to meet
/// every cylinder of length `m`: with `q_j > m`, the points `{iα}`,
/// `i < q_j + q_{j-1}`, leave no gap longer than `η_{j-1}`, and every
/// length-`m` cylinder is at least that long.
pub fn occurrence_bound(cf: &ContinuedFraction, m: usize) -> Result<usize> {
    let j = first_q_above(cf, m)?;
    Ok(q_usize(cf, j)? + q_usize(cf, j - 1)?)
}

/// Prefix length that contains every factor of length `n`.
pub fn language_window(cf: &ContinuedFraction, n: usize) -> Result<usize> {
    Ok(occurrence_bound(cf, n)? + n)
}

/// Largest return time of a length-`n` cylinder: `q_K` with `q_K > n` minimal,
/// since every such cylinder is longer than `η_K`.
pub fn max_return(cf: &ContinuedFraction, n: usize) -> Result<usize> {
    q_usize(cf, first_q_above(cf, n)?)
}

/// Prefix length after which every length-`n` factor has been seen twice at
/// its minimal distance.
pub fn tau_window(cf: &ContinuedFraction, n: usize) -> Result<usize> {
    let m = n + max_return(cf, n)?;
    Ok(occurrence_bound(cf, m)? + m)
}

/// The factors of length `n`, in lexicographic order.
pub fn language(n: usize, cf: &ContinuedFraction) -> Result<BTreeSet<Word>> {
    let len = language_window(cf, n)?;
    let prefix = generate_prefix(cf, &LinearForm::ZERO, len)?;
    Ok(factor_table(&prefix.bits, n).into_keys().collect())
}

/// Per factor: first occurrence and the smallest gap between occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrences {
    pub first: usize,
    pub last: usize,
    pub min_gap: Option<usize>,
}

/// All length-`n` factors of `bits` with their occurrence statistics.
pub fn factor_table(bits: &Word, n: usize) -> HashMap<Word, Occurrences> {
    let mut table: HashMap<Vec<u64>, Occurrences> = HashMap::new();
    let mut key = Vec::new();
    if bits.len() >= n {
        for i in 0..=bits.len() - n {
            bits.factor_into(i, n, &mut key);
            match table.get_mut(key.as_slice()) {
                Some(o) => {
                    let gap = i - o.last;
                    o.min_gap = Some(o.min_gap.map_or(gap, |g| g.min(gap)));
                    o.last = i;
                }
                None => {
                    table.insert(
                        key.clone(),
                        Occurrences {
                            first: i,
                            last: i,
                            min_gap: None,
                        },
                    );
                }
            }
        }
    }
    table
        .into_iter()
        .map(|(k, v)| (Word::from_blocks(k, n), v))
        .collect()
}

/// Minimal occurrence distance of every length-`n` factor.
pub fn tau_word_table(n: usize, cf: &ContinuedFraction) -> Result<HashMap<Word, u64>> {
    let prefix = generate_prefix(cf, &LinearForm::ZERO, tau_window(cf, n)?)?;
    tau_word_table_in(&prefix.bits, n, cf)
}

/// [`tau_word_table`] reusing an itinerary of 0 at least [`tau_window`] long.
pub fn tau_word_table_in(orbit: &Word, n: usize, cf: &ContinuedFraction) -> Result<HashMap<Word, u64>> {
    let len = tau_window(cf, n)?;
    if orbit.len() < len {
        return Err(Error::PrefixTooShort {
            need: len,
            have: orbit.len(),
        });
    }
    factor_table(&orbit.slice(0, len), n)
        .into_iter()
        .map(|(w, o)| {
            let gap = o.min_gap.ok_or_else(|| {
                Error::Inconsistent(format!("factor {w} occurs once in a window of {len}"))
            })?;
            Ok((w, gap as u64))
        })
        .collect()
}

/// Return time of the cylinder `[u]` as the smallest distance between two
/// occurrences of `u` in the orbit of 0.
pub fn tau_word_oracle(u: &Word, cf: &ContinuedFraction) -> Result<u64> {
    let n = u.len();
    let len = tau_window(cf, n)?;
    let prefix = generate_prefix(cf, &LinearForm::ZERO, len)?;
    let target = u.blocks();
    let mut key = Vec::new();
    let mut last = None;
    let mut best: Option<usize> = None;
    for i in 0..=len - n {
        prefix.bits.factor_into(i, n, &mut key);
        if key == target {
            if let Some(l) = last {
                best = Some(best.map_or(i - l, |b: usize| b.min(i - l)));
            }
            last = Some(i);
        }
    }
    match (last, best) {
        (None, _) => Err(Error::NotInLanguage { word: u.to_string() }),
        (Some(_), None) => Err(Error::Inconsistent(format!(
            "{u} occurs once in a window of {len}"
        ))),
        (Some(_), Some(g)) => Ok(g as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seven_cell_angle() -> ContinuedFraction {
        ContinuedFraction::parse_spec("2,3", Some("3")).unwrap()
    }

    #[test]
    fn golden_prefix() {
        let cf = ContinuedFraction::golden();
        let p = generate_prefix(&cf, &LinearForm::ZERO, 11).unwrap();
        assert_eq!(p.bits.to_string(), "01011010110");
        let one = generate_prefix(&seven_cell_angle(), &LinearForm::ZERO, 1).unwrap();
        assert_eq!(one.bits.to_string(), "0");
    }

    #[test]
    fn seven_cell_prefix_starts_in_leftmost_cell() {
        let p = generate_prefix(&seven_cell_angle(), &LinearForm::ZERO, 7).unwrap();
        assert!(p.bits.to_string().starts_with("001010"));
    }

    #[test]
    fn small_languages() {
        let cf = ContinuedFraction::golden();
        let l2: Vec<String> = language(2, &cf).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(l2, ["01", "10", "11"]);
        assert_eq!(language(1, &seven_cell_angle()).unwrap().len(), 2);
        let l6: Vec<String> = language(6, &seven_cell_angle())
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(
            l6,
            ["001010", "010010", "010100", "010101", "100101", "101001", "101010"]
        );
    }

    #[test]
    fn word_oracle_examples() {
        let cf = ContinuedFraction::golden();
        assert_eq!(tau_word_oracle(&"1".parse().unwrap(), &cf).unwrap(), 1);
        assert_eq!(tau_word_oracle(&"01".parse().unwrap(), &cf).unwrap(), 2);
        assert!(matches!(
            tau_word_oracle(&"00".parse().unwrap(), &cf),
            Err(Error::NotInLanguage { .. })
        ));
    }
}
