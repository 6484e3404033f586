//! The extremal rates `r₀ = liminf q_k / (q_{k+1} + q_k - 1)` and
//! `r₁ = limsup q_{k+1} / q_k` of an angle, with the bounds they obey.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::surd::{Mobius, Surd};

/// Value used for a bound check: an exact limit when one is known, otherwise
/// the finite-depth estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateConstants {
    pub depth: usize,
    /// Largest partial quotient seen, or the largest in the period.
    pub m: u64,
    pub m_exact: bool,
    /// `min_{k in [⌊K/2⌋, K]} q_k / (q_{k+1} + q_k - 1)`
    pub r0_estimate: BigRational,
    /// `max_{k in [⌊K/2⌋, K]} q_{k+1} / q_k`
    pub r1_estimate: BigRational,
    pub r0_last: BigRational,
    pub r1_last: BigRational,
    /// Exact limits, available for eventually periodic expansions.
    pub r0_limit: Option<Surd>,
    pub r1_limit: Option<Surd>,
    pub bounds: Vec<BoundCheck>,
    /// `r₁ = 1/r₀ - 1`, checked exactly on the limits.
    pub identity: Option<bool>,
}

impl RateConstants {
    pub fn all_bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds) && self.identity != Some(false)
    }

    pub fn r0(&self) -> Surd {
        self.r0_limit.clone().unwrap_or_else(|| Surd::rational(&self.r0_estimate))
    }

    pub fn r1(&self) -> Surd {
        self.r1_limit.clone().unwrap_or_else(|| Surd::rational(&self.r1_estimate))
    }
}

/// Composite of `f_{a_{i}}` over one period ending at digit index `end`
/// (applied in index order), for the per-step map `f_a`.
fn period_map(cf: &ContinuedFraction, end: usize, period: usize, step: impl Fn(u64) -> Mobius) -> Result<Mobius> {
    let mut m = Mobius::identity();
    for i in end + 1 - period..=end {
        m = step(cf.digit(i)?).compose(&m);
    }
    Ok(m)
}

/// Limits along each residue class mod the period of the sequences
/// `t_k = q_{k+1}/q_k` and `v_k = q_k/(q_{k+1} + q_k)`.
fn periodic_limits(cf: &ContinuedFraction) -> Result<Option<(Surd, Surd)>> {
    let Some((pre, period)) = cf.periodic_parts() else {
        return Ok(None);
    };
    let (pre, p) = (pre.len(), period.len());
    let mut r1: Option<Surd> = None;
    let mut r0: Option<Surd> = None;
    for c in 0..p {
        // t_k = a_{k+1} + 1/t_{k-1}, and v_k = (1 - v_{k-1}) / ((a_{k+1} + 1) - a_{k+1} v_{k-1}).
        let end = pre + p + 1 + c;
        let t_map = period_map(cf, end, p, |a| Mobius::new(a as i64, 1, 1, 0))?;
        let v_map = period_map(cf, end, p, |a| Mobius::new(-1, 1, -(a as i64), a as i64 + 1))?;
        let t = t_map
            .attracting_fixed_point(1.0)
            .ok_or_else(|| Error::Inconsistent("ratio map has no real fixed point".into()))?;
        let v = v_map
            .attracting_fixed_point(0.5)
            .ok_or_else(|| Error::Inconsistent("rate map has no real fixed point".into()))?;
        if r1.as_ref().is_none_or(|best| t.cmp_exact(best) == Ordering::Greater) {
            r1 = Some(t);
        }
        if r0.as_ref().is_none_or(|best| v.cmp_exact(best) == Ordering::Less) {
            r0 = Some(v);
        }
    }
    Ok(Some((r0.expect("nonempty period"), r1.expect("nonempty period"))))
}

pub fn rate_constants(cf: &ContinuedFraction, depth: usize) -> Result<RateConstants> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!("depth {depth} < 2")));
    }
    let q: Vec<BigInt> = (0..=depth as i64 + 1).map(|k| cf.q(k)).collect::<Result<_>>()?;
    let lower = |k: usize| BigRational::new(q[k].clone(), &q[k + 1] + &q[k] - 1);
    let upper = |k: usize| BigRational::new(q[k + 1].clone(), q[k].clone());
    let window = depth / 2..=depth;
    let r0_estimate = window.clone().map(lower).min().expect("nonempty window");
    let r1_estimate = window.map(upper).max().expect("nonempty window");

    let (m, m_exact) = match cf.periodic_parts() {
        Some((_, period)) => (*period.iter().max().expect("nonempty period"), true),
        None => {
            let mut m = 0;
            for j in 1..=depth + 1 {
                m = m.max(cf.digit(j)?);
            }
            (m, false)
        }
    };

    let limits = periodic_limits(cf)?;
    let (r0_limit, r1_limit) = match limits {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };

    let mut out = RateConstants {
        depth,
        m,
        m_exact,
        r0_last: lower(depth),
        r1_last: upper(depth),
        r0_estimate,
        r1_estimate,
        r0_limit,
        r1_limit,
        bounds: vec![],
        identity: None,
    };

    let (r0, r1) = (out.r0(), out.r1());
    let gamma = Surd::golden_ratio();
    let gamma_inv_sq = Surd::new(3.into(), (-1).into(), 5.into(), 2.into());
    let m_plus_2_inv = Surd::rational(&BigRational::new(1.into(), BigInt::from(m) + 2));
    let m_plus_1 = Surd::rational(&BigRational::from_integer(BigInt::from(m) + 1));
    out.bounds = vec![
        BoundCheck {
            name: "1/(M+2) <= r0",
            holds: m_plus_2_inv.cmp_exact(&r0) != Ordering::Greater,
        },
        BoundCheck {
            name: "r0 <= 1/γ²",
            holds: r0.cmp_exact(&gamma_inv_sq) != Ordering::Greater,
        },
        BoundCheck {
            name: "γ <= r1",
            holds: gamma.cmp_exact(&r1) != Ordering::Greater,
        },
        BoundCheck {
            name: "r1 <= M+1",
            holds: r1.cmp_exact(&m_plus_1) != Ordering::Greater,
        },
    ];
    if let (Some(r0), Some(r1)) = (&out.r0_limit, &out.r1_limit) {
        out.identity = Some(r1.cmp_exact(&r0.recip().add_int(-1)) == Ordering::Equal);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_constants() {
        let rc = rate_constants(&ContinuedFraction::golden(), 30).unwrap();
        assert_eq!(rc.m, 1);
        let r1 = rc.r1_limit.clone().unwrap();
        assert_eq!(r1.cmp_exact(&Surd::golden_ratio()), Ordering::Equal);
        let r0 = rc.r0_limit.clone().unwrap();
        assert_eq!(r0.to_decimal(8), "0.38196601");
        assert_eq!(rc.identity, Some(true));
        assert!(rc.all_bounds_hold());
    }

    #[test]
    fn silver_constants() {
        let rc = rate_constants(&ContinuedFraction::silver(), 40).unwrap();
        assert_eq!(rc.r1_limit.unwrap().to_decimal(6), "2.41421");
        assert_eq!(rc.r0_limit.unwrap().to_decimal(6), "0.292893");
        assert!(rc.bounds.iter().all(|b| b.holds));
    }

    #[test]
    fn mixed_period() {
        let cf = ContinuedFraction::parse_spec("2,3", Some("2,3")).unwrap();
        let rc = rate_constants(&cf, 30).unwrap();
        assert_eq!(rc.m, 3);
        assert_eq!(rc.identity, Some(true));
        assert!(rc.all_bounds_hold());
        let est = crate::jumps::to_f64(&rc.r1_estimate);
        assert!((est - rc.r1_limit.unwrap().to_f64()).abs() < 1e-9);
    }
}
