//! Jump times `r_k` of the return time along a point and the rate estimates
//! built from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cf::ContinuedFraction;
use crate::coding::DigitWord;
use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::rotation::{klein_bracket_from, CylinderTracker};
use crate::word::Word;

/// `Σ_{j=0}^{k} x_{j+1} q_j` for the digits `x_1 ... x_{k+1}`.
pub fn ostrowski_decode(digits: &DigitWord, cf: &ContinuedFraction) -> Result<BigInt> {
    digits.validate(cf)?;
    let mut sum = BigInt::zero();
    for (j, &x) in digits.digits().iter().enumerate() {
        if x != 0 {
            sum += cf.q(j as i64)? * x;
        }
    }
    Ok(sum)
}

/// One depth of a [`ReturnProfile`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub k: usize,
    pub q_k: BigInt,
    pub q_k1: BigInt,
    pub r_k: BigInt,
}

impl ProfileRow {
    /// `q_k / r_k`
    pub fn lower(&self) -> BigRational {
        BigRational::new(self.q_k.clone(), self.r_k.clone())
    }

    /// `q_{k+1} / r_k`
    pub fn upper(&self) -> BigRational {
        BigRational::new(self.q_k1.clone(), self.r_k.clone())
    }

    /// `q_k <= r_k <= q_{k+1} + q_k - 1`
    pub fn within_bounds(&self) -> bool {
        self.q_k <= self.r_k && self.r_k < &self.q_k1 + &self.q_k
    }
}

/// Jump times `r_0, ..., r_K` of one point (`r_{-1} = 0` is implicit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnProfile {
    pub rows: Vec<ProfileRow>,
}

impl ReturnProfile {
    fn from_jumps(r: Vec<BigInt>, cf: &ContinuedFraction) -> Result<Self> {
        let rows = r
            .into_iter()
            .enumerate()
            .map(|(k, r_k)| {
                Ok(ProfileRow {
                    k,
                    q_k: cf.q(k as i64)?,
                    q_k1: cf.q(k as i64 + 1)?,
                    r_k,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReturnProfile { rows })
    }

    pub fn depth(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn jumps(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.r_k.clone()).collect()
    }

    /// First row violating `q_k <= r_k <= q_{k+1} + q_k - 1`.
    pub fn bound_violation(&self) -> Option<&ProfileRow> {
        self.rows.iter().find(|r| !r.within_bounds())
    }
}

/// `r_k = r_{k-1} + x_{k+1} q_k` for `k = 0 ..= depth`; needs `depth + 1` digits.
pub fn jumps_by_formula(x: &DigitWord, depth: usize, cf: &ContinuedFraction) -> Result<ReturnProfile> {
    if x.len() < depth + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} digits given, depth {depth} needs {}",
            x.len(),
            depth + 1
        )));
    }
    let x = x.prefix(depth + 1);
    x.validate(cf)?;
    let mut r = Vec::with_capacity(depth + 1);
    let mut acc = BigInt::zero();
    for k in 0..=depth {
        acc += cf.q(k as i64)? * x.x(k + 1);
        r.push(acc.clone());
    }
    ReturnProfile::from_jumps(r, cf)
}

/// `r_k = min{n >= 1 : τ(I_{x(n)}) >= q_{k+1}}`, scanning the prefix letter by
/// letter with the return time of the shrinking cylinder.
pub fn jumps_by_definition(prefix: &Word, depth: usize, cf: &ContinuedFraction) -> Result<ReturnProfile> {
    jumps_by_definition_with(prefix, depth, cf, |k| cf.eta(k))
}

/// [`jumps_by_definition`] with an arbitrary source of `η_k`.
pub fn jumps_by_definition_with(
    prefix: &Word,
    depth: usize,
    cf: &ContinuedFraction,
    eta: impl Fn(i64) -> Result<LinearForm>,
) -> Result<ReturnProfile> {
    let mut etas: Vec<LinearForm> = Vec::new();
    let mut eta_at = |k: i64| -> Result<LinearForm> {
        let i = (k + 1) as usize;
        while etas.len() <= i {
            etas.push(eta(etas.len() as i64 - 1)?);
        }
        Ok(etas[i].clone())
    };
    let q: Vec<BigInt> = (0..=depth as i64 + 1).map(|k| cf.q(k)).collect::<Result<_>>()?;
    let mut tracker = CylinderTracker::new(cf);
    let mut bracket = -1i64;
    let mut r = Vec::with_capacity(depth + 1);
    for (n, bit) in prefix.iter().enumerate() {
        if !tracker.push(bit)? {
            return Err(Error::NotInLanguage {
                word: prefix.slice(0, n + 1).to_string(),
            });
        }
        bracket = klein_bracket_from(tracker.cell().length(), bracket, cf, &mut eta_at)?;
        let tau = cf.q(bracket + 1)?;
        while r.len() <= depth && tau >= q[r.len() + 1] {
            r.push(BigInt::from(n + 1));
        }
        if r.len() > depth {
            return ReturnProfile::from_jumps(r, cf);
        }
    }
    let need = (&q[depth + 1] + &q[depth] - 1u8).to_usize().unwrap_or(usize::MAX);
    if prefix.len() >= need {
        return Err(Error::Inconsistent(format!(
            "jump r_{} not reached within {need} symbols",
            r.len()
        )));
    }
    Err(Error::PrefixTooShort {
        need,
        have: prefix.len(),
    })
}

/// Finite-depth proxies for `liminf q_k / r_k` and `limsup q_{k+1} / r_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimates {
    /// The window `[⌊K/2⌋, K]` the extremes are taken over.
    pub window: (usize, usize),
    pub lower: BigRational,
    pub upper: BigRational,
    pub lower_last: BigRational,
    pub upper_last: BigRational,
    /// The window extreme and the last value differ by more than the tolerance.
    pub lower_unsettled: bool,
    pub upper_unsettled: bool,
}

pub const DEFAULT_TOL: f64 = 1e-6;

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rate_estimates(profile: &ReturnProfile, tol: f64) -> Result<RateEstimates> {
    let k = profile.depth();
    if k < 2 {
        return Err(Error::InvalidArgument(format!("profile depth {k} < 2")));
    }
    let rows = &profile.rows[k / 2..=k];
    let lower = rows.iter().map(ProfileRow::lower).min().expect("nonempty window");
    let upper = rows.iter().map(ProfileRow::upper).max().expect("nonempty window");
    let last = &profile.rows[k];
    let (lower_last, upper_last) = (last.lower(), last.upper());
    Ok(RateEstimates {
        window: (k / 2, k),
        lower_unsettled: to_f64(&(&lower_last - &lower)) > tol,
        upper_unsettled: to_f64(&(&upper - &upper_last)) > tol,
        lower,
        upper,
        lower_last,
        upper_last,
    })
}
