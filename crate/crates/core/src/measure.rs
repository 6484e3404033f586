//! The rotation-invariant measure seen through the digit coding: a
//! nonstationary Markov chain on digits, and sampling from it.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::cf::ContinuedFraction;
use crate::coding::{j_length, DigitWord};
use crate::error::{Error, Result};
use crate::form::{LinearForm, Sign};
use crate::jumps::{jumps_by_formula, rate_estimates, to_f64, RateEstimates, DEFAULT_TOL};

/// What the chain remembers about the previous digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Context {
    /// Drawing `W_1`.
    Initial,
    /// `W_k < a_k`
    NonMaximal,
    /// `W_k = a_k`
    Maximal,
}

/// Law of `W_{k+1}` given the context of `W_k`.
///
/// Digits `first .. a` each have probability `regular / denominator` and the
/// digit `a = a_{k+1}` has `last / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRow {
    pub k: usize,
    pub context: Context,
    pub first: u64,
    pub a: u64,
    pub regular: LinearForm,
    pub last: LinearForm,
    pub denominator: LinearForm,
}

impl TransitionRow {
    pub fn digits(&self) -> std::ops::RangeInclusive<u64> {
        self.first..=self.a
    }

    /// Numerator of `P(W_{k+1} = j)`, zero outside the support.
    pub fn numerator(&self, j: u64) -> LinearForm {
        if j == self.a {
            self.last.clone()
        } else if j >= self.first && j < self.a {
            self.regular.clone()
        } else {
            LinearForm::ZERO
        }
    }

    /// `Σ_j numerator(j) - denominator`, which must be the zero form.
    pub fn defect(&self) -> LinearForm {
        let count = (self.a - self.first) as i64;
        &(&self.regular.scale(count) + &self.last) - &self.denominator
    }

    pub fn sums_to_one(&self) -> bool {
        self.defect().is_zero()
    }
}

/// Row of the chain for drawing `W_{k+1}`; `k = 0` takes the initial context.
pub fn transition_row(k: usize, context: Context, cf: &ContinuedFraction) -> Result<TransitionRow> {
    transition_row_with(k, context, cf, |i| cf.eta(i))
}

pub fn transition_row_with(
    k: usize,
    context: Context,
    cf: &ContinuedFraction,
    eta: impl Fn(i64) -> Result<LinearForm>,
) -> Result<TransitionRow> {
    match (k, context) {
        (0, Context::Initial) => {}
        (0, _) | (_, Context::Initial) => {
            return Err(Error::InvalidArgument(format!(
                "context {context:?} does not apply at depth {k}"
            )))
        }
        _ => {}
    }
    let ki = k as i64;
    let (e_prev, e_k, e_next) = (eta(ki - 1)?, eta(ki)?, eta(ki + 1)?);
    let (first, denominator) = match context {
        Context::Initial | Context::NonMaximal => (1, e_prev),
        Context::Maximal => (0, &e_prev + &e_k),
    };
    Ok(TransitionRow {
        k,
        context,
        first,
        a: cf.digit(k + 1)?,
        last: &e_k + &e_next,
        regular: e_k,
        denominator,
    })
}

fn context_after(u: &DigitWord, cf: &ContinuedFraction) -> Result<Context> {
    Ok(match u.digits().last() {
        None => Context::Initial,
        Some(&x) if x == cf.digit(u.len())? => Context::Maximal,
        Some(_) => Context::NonMaximal,
    })
}

/// Probability of the path `W_1 ... W_k = u`, as an exact form.
///
/// Each factor's denominator must equal the previous numerator, so the product
/// telescopes to the last numerator; a row that breaks the chain is an error.
pub fn path_probability(u: &DigitWord, cf: &ContinuedFraction) -> Result<LinearForm> {
    u.validate(cf)?;
    let mut mass = LinearForm::ONE;
    for k in 0..u.len() {
        let row = transition_row(k, context_after(&u.prefix(k), cf)?, cf)?;
        if row.denominator != mass {
            return Err(Error::Inconsistent(format!(
                "row {k} of {u} has denominator {} but the path mass is {mass}",
                row.denominator
            )));
        }
        mass = row.numerator(u.x(k + 1));
    }
    Ok(mass)
}

/// Floating product of the row probabilities along `u`, for cross-checks.
pub fn path_probability_f64(u: &DigitWord, cf: &ContinuedFraction) -> Result<f64> {
    let mut p = 1.0;
    for k in 0..u.len() {
        let row = transition_row(k, context_after(&u.prefix(k), cf)?, cf)?;
        p *= row.numerator(u.x(k + 1)).to_f64(cf)? / row.denominator.to_f64(cf)?;
    }
    Ok(p)
}

/// `|J_u|` from the closed form, for comparison with [`path_probability`].
pub fn cylinder_measure(u: &DigitWord, cf: &ContinuedFraction) -> Result<LinearForm> {
    j_length(u, cf)
}

fn draw_u128(rng: &mut ChaCha8Rng) -> BigInt {
    let hi = rng.next_u64() as u128;
    let lo = rng.next_u64() as u128;
    BigInt::from(hi << 64 | lo)
}

/// Draws one digit: `u = m / 2^128` falls in the block of `j` when the exact
/// cumulative thresholds bracket `u · denominator`.
fn draw_digit(row: &TransitionRow, m: &BigInt, cf: &ContinuedFraction) -> Result<u64> {
    let two128 = BigInt::from(1u8) << 128;
    let target = row.denominator.scale_big(m);
    let step = row.regular.scale_big(&two128);
    // Largest c in [0, count] with c · regular · 2^128 <= m · denominator.
    let count = row.a - row.first;
    let below = |c: u64| -> Result<bool> {
        let lhs = step.scale_big(&BigInt::from(c));
        Ok((&target - &lhs).sign(cf)? != Sign::Negative)
    };
    let (mut lo, mut hi) = (0u64, count);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(if lo == count { row.a } else { row.first + lo })
}

fn sample_with(rng: &mut ChaCha8Rng, len: usize, cf: &ContinuedFraction) -> Result<DigitWord> {
    let mut digits = Vec::with_capacity(len);
    let mut context = Context::Initial;
    for k in 0..len {
        let row = transition_row(k, context, cf)?;
        let x = draw_digit(&row, &draw_u128(rng), cf)?;
        context = if x == row.a { Context::Maximal } else { Context::NonMaximal };
        digits.push(x);
    }
    Ok(DigitWord(digits))
}

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A digit word of length `len` drawn from the chain.
pub fn sample_point(cf: &ContinuedFraction, len: usize, seed: u64) -> Result<DigitWord> {
    sample_with(&mut sample_rng(seed, 0), len, cf)
}

/// Sample `index` of the run seeded with `seed`.
pub fn sample_indexed(cf: &ContinuedFraction, len: usize, seed: u64, index: u64) -> Result<DigitWord> {
    sample_with(&mut sample_rng(seed, index), len, cf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRates {
    pub index: u64,
    pub digits: DigitWord,
    pub estimates: RateEstimates,
}

impl SampleRates {
    pub fn lower(&self) -> f64 {
        to_f64(&self.estimates.lower)
    }

    pub fn upper(&self) -> f64 {
        to_f64(&self.estimates.upper)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRates {
    pub depth: usize,
    pub seed: u64,
    pub samples: Vec<SampleRates>,
}

fn median(mut v: Vec<BigRational>) -> Option<BigRational> {
    v.sort();
    let n = v.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(v[n / 2].clone()),
        _ => Some((&v[n / 2 - 1] + &v[n / 2]) / BigInt::from(2)),
    }
}

impl EmpiricalRates {
    pub fn median_lower(&self) -> BigRational {
        median(self.samples.iter().map(|s| s.estimates.lower.clone()).collect()).expect("samples")
    }

    pub fn median_upper(&self) -> BigRational {
        median(self.samples.iter().map(|s| s.estimates.upper.clone()).collect()).expect("samples")
    }

    /// Fraction of samples whose lower estimate is within `tol` of `target`.
    pub fn lower_within(&self, target: f64, tol: f64) -> f64 {
        let hits = self.samples.iter().filter(|s| (s.lower() - target).abs() <= tol).count();
        hits as f64 / self.samples.len() as f64
    }

    pub fn upper_within(&self, target: f64, tol: f64) -> f64 {
        let hits = self.samples.iter().filter(|s| (s.upper() - target).abs() <= tol).count();
        hits as f64 / self.samples.len() as f64
    }

    /// Counts of lower and upper estimates in `bins` equal buckets over `[lo, hi)`;
    /// values outside go to the end buckets.
    pub fn histogram(values: impl Iterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Vec<u64> {
        let mut out = vec![0u64; bins];
        for v in values {
            let t = ((v - lo) / (hi - lo) * bins as f64).floor();
            let i = if t.is_nan() || t < 0.0 { 0 } else { (t as usize).min(bins - 1) };
            out[i] += 1;
        }
        out
    }
}

/// Samples `n` points, each with `depth + 1` digits, and their rate estimates at depth `depth`.
pub fn empirical_rates(cf: &ContinuedFraction, depth: usize, n: usize, seed: u64) -> Result<EmpiricalRates> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!("depth {depth} < 2")));
    }
    let samples = (0..n as u64)
        .into_par_iter()
        .map(|index| {
            let digits = sample_indexed(cf, depth + 1, seed, index)?;
            let profile = jumps_by_formula(&digits, depth, cf)?;
            if let Some(row) = profile.bound_violation() {
                return Err(Error::Inconsistent(format!(
                    "sample {index}: r_{} = {} outside [q_k, q_(k+1) + q_k - 1]",
                    row.k, row.r_k
                )));
            }
            Ok(SampleRates {
                index,
                estimates: rate_estimates(&profile, DEFAULT_TOL)?,
                digits,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalRates { depth, seed, samples })
}
