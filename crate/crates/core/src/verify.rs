//! Cross-checks between the independent computations, bundled as one suite.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand_core::RngCore;

use crate::cf::ContinuedFraction;
use crate::coding::{build_j_interval, enumerate_words, gamma_encode_at, gamma_locate, point_from_digits, DigitWord};
use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::jumps::{jumps_by_definition_with, jumps_by_formula};
use crate::lang::{generate_prefix, tau_window, tau_word_table_in};
use crate::measure::{cylinder_measure, path_probability, sample_indexed, sample_rng, transition_row_with, Context};
use crate::rotation::{distinct_lengths, partition, tau_formula_with, BruteForceTau};

/// Deliberate corruptions used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Replace `η_{k+1} = η_{k-1} - a_{k+1} η_k` by `a_{k+1} η_k - η_{k-1}`.
    EtaRecurrence,
}

impl Fault {
    pub fn from_name(s: &str) -> Option<Fault> {
        match s {
            "eta-recurrence" => Some(Fault::EtaRecurrence),
            _ => None,
        }
    }
}

/// `η_k` as the suite sees it.
pub fn eta_source(cf: &ContinuedFraction, fault: Option<Fault>) -> impl Fn(i64) -> Result<LinearForm> + '_ {
    move |k| match fault {
        None => cf.eta(k),
        Some(Fault::EtaRecurrence) => {
            let (mut prev, mut cur) = (LinearForm::ONE, LinearForm::ALPHA);
            if k == -1 {
                return Ok(prev);
            }
            for j in 0..k {
                let a = cf.digit(j as usize + 1)? as i64;
                let next = &cur.scale(a) - &prev;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest word length for the return time and language checks.
    pub n_max: usize,
    /// Depth for jumps, coding and measure checks.
    pub depth: usize,
    pub points: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 500,
            depth: 12,
            points: 20,
            seed: 0,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed())
    }
}

/// Runs a check body; a returned `Err` counts as a counterexample.
fn check(name: &'static str, body: impl FnOnce(&mut u64) -> Result<Option<String>>) -> CheckResult {
    let mut cases = 0;
    let counterexample = match body(&mut cases) {
        Ok(c) => c,
        Err(e) => Some(format!("error: {e}")),
    };
    CheckResult {
        name,
        cases,
        counterexample,
    }
}

/// Klein formula, orbit search and occurrence gaps agree on every cylinder of
/// length `<= n_max`; partitions have `n + 1` cells, at most three lengths, sum 1,
/// and their labels are exactly the factors of the mechanical word.
pub fn check_partitions(cf: &ContinuedFraction, n_max: usize, fault: Option<Fault>) -> Result<Vec<CheckResult>> {
    let eta = eta_source(cf, fault);
    let orbit = generate_prefix(cf, &LinearForm::ZERO, tau_window(cf, n_max)?)?.bits;
    let mut brute = BruteForceTau::new(cf);
    let mut tau_cases = 0;
    let mut lang_cases = 0;
    let mut struct_cases = 0;
    let mut tau_bad = None;
    let mut lang_bad = None;
    let mut struct_bad = None;
    for n in 0..=n_max {
        let cells = partition(n as u64, cf)?;
        struct_cases += 1;
        if struct_bad.is_none() {
            let total = cells
                .iter()
                .fold(LinearForm::ZERO, |acc, c| acc + c.interval.length());
            let lengths = distinct_lengths(&cells, cf)?;
            if cells.len() != n + 1 || total != LinearForm::ONE || lengths.len() > 3 {
                struct_bad = Some(format!(
                    "n={n}: {} cells, total length {total}, {} distinct lengths",
                    cells.len(),
                    lengths.len()
                ));
            }
        }
        let words = tau_word_table_in(&orbit, n, cf)?;
        lang_cases += 1;
        if lang_bad.is_none() {
            let labels: BTreeSet<_> = cells.iter().map(|c| c.word.clone()).collect();
            let factors: BTreeSet<_> = words.keys().cloned().collect();
            if labels != factors {
                let diff = labels.symmetric_difference(&factors).next().cloned();
                lang_bad = Some(format!(
                    "n={n}: partition labels and factors differ at {}",
                    diff.map(|w| w.to_string()).unwrap_or_default()
                ));
            }
        }
        if tau_bad.is_some() {
            continue;
        }
        for c in &cells {
            tau_cases += 1;
            let len = c.interval.length();
            let formula = match tau_formula_with(len, cf, &eta) {
                Ok(t) => t,
                Err(e) => {
                    tau_bad = Some(format!("u={} |I_u|={len}: formula failed: {e}", c.word));
                    break;
                }
            };
            let orbit_tau = brute.tau(len)?;
            let word_tau = words.get(&c.word).copied();
            if formula != BigInt::from(orbit_tau) || word_tau != Some(orbit_tau) {
                tau_bad = Some(format!(
                    "u={} |I_u|={len}: formula {formula}, orbit search {orbit_tau}, occurrence gap {}",
                    c.word,
                    word_tau.map(|t| t.to_string()).unwrap_or_else(|| "none".into())
                ));
                break;
            }
        }
    }
    Ok(vec![
        CheckResult {
            name: "return times: formula = orbit search = occurrence gap",
            cases: tau_cases,
            counterexample: tau_bad,
        },
        CheckResult {
            name: "language = partition labels",
            cases: lang_cases,
            counterexample: lang_bad,
        },
        CheckResult {
            name: "partition structure",
            cases: struct_cases,
            counterexample: struct_bad,
        },
    ])
}

/// A test point: its digits to `depth + 1` and the point itself.
pub fn test_point(cf: &ContinuedFraction, depth: usize, seed: u64, index: u64) -> Result<(DigitWord, LinearForm)> {
    if index.is_multiple_of(2) {
        let digits = sample_indexed(cf, depth + 1, seed, index)?;
        let x = point_from_digits(&digits, cf)?;
        Ok((digits, x))
    } else {
        let m = sample_rng(seed, index).next_u64() % 1_000_000;
        let x = LinearForm::small(0, m as i64).frac(cf)?;
        Ok((gamma_locate(&x, depth + 1, cf)?, x))
    }
}

/// Jump times from the definition along the itinerary agree with the digit
/// formula, and stay within `q_k <= r_k <= q_{k+1} + q_k - 1`.
pub fn check_jumps(cf: &ContinuedFraction, depth: usize, points: usize, seed: u64, fault: Option<Fault>) -> CheckResult {
    check("jumps: definition = digit formula, with bounds", |cases| {
        let eta = eta_source(cf, fault);
        let need = (cf.q_u64(depth as i64 + 1)? + cf.q_u64(depth as i64)?) as usize;
        for i in 0..points as u64 {
            let (digits, x) = test_point(cf, depth, seed, i)?;
            let prefix = generate_prefix(cf, &x, need)?;
            let def = jumps_by_definition_with(&prefix.bits, depth, cf, &eta)?;
            let formula = jumps_by_formula(&digits, depth, cf)?;
            *cases += 1;
            if def != formula {
                return Ok(Some(format!(
                    "point {i} x={x} digits {digits}: definition {:?} vs formula {:?}",
                    def.jumps(),
                    formula.jumps()
                )));
            }
            if let Some(row) = formula.bound_violation() {
                return Ok(Some(format!("point {i}: r_{} = {} out of bounds", row.k, row.r_k)));
            }
        }
        Ok(None)
    })
}

/// `{J_u : |u| = k}` is the partition at `q_k - 1`, `γ_k` inverts it, and the
/// children of each `J_u` tile it.
pub fn check_coding(cf: &ContinuedFraction, max_q: u64, max_depth: usize) -> CheckResult {
    check("coding: J_u cells = partition, γ bijection", |cases| {
        for k in 1..=max_depth {
            let q = cf.q_u64(k as i64)?;
            if q - 1 > max_q {
                break;
            }
            let cells = partition(q - 1, cf)?;
            let words = enumerate_words(k, cf)?;
            if words.len() != cells.len() {
                return Ok(Some(format!("k={k}: {} digit words, {} cells", words.len(), cells.len())));
            }
            for cell in &cells {
                *cases += 1;
                let u = gamma_encode_at(&cell.word, k, cf)?;
                let j = build_j_interval(&u, cf)?;
                if !j.same_arc(&cell.interval) {
                    return Ok(Some(format!("k={k}: J_{u} = {j} but I_{} = {}", cell.word, cell.interval)));
                }
                let children = enumerate_children(&u, cf)?;
                let total = children
                    .iter()
                    .map(|v| build_j_interval(v, cf).map(|iv| iv.length().clone()))
                    .try_fold(LinearForm::ZERO, |acc, l| l.map(|l| acc + l))?;
                if &total != j.length() {
                    return Ok(Some(format!("k={k}: children of J_{u} do not tile it")));
                }
            }
        }
        Ok(None)
    })
}

fn enumerate_children(u: &DigitWord, cf: &ContinuedFraction) -> Result<Vec<DigitWord>> {
    let k = u.len() + 1;
    let range = crate::coding::next_digits(u.digits().last().copied(), k, cf)?;
    Ok(range
        .map(|x| {
            let mut d = u.digits().to_vec();
            d.push(x);
            DigitWord(d)
        })
        .collect())
}

/// Transition rows sum to one and path masses equal `|J_u|`.
pub fn check_measure(cf: &ContinuedFraction, depth: usize, path_depth: usize, fault: Option<Fault>) -> CheckResult {
    check("measure: rows sum to 1, path mass = |J_u|", |cases| {
        let eta = eta_source(cf, fault);
        for k in 0..=depth {
            let contexts: &[Context] = if k == 0 {
                &[Context::Initial]
            } else {
                &[Context::NonMaximal, Context::Maximal]
            };
            for &c in contexts {
                *cases += 1;
                let row = transition_row_with(k, c, cf, &eta)?;
                if !row.sums_to_one() {
                    return Ok(Some(format!("row k={k} {c:?} misses 1 by {}", row.defect())));
                }
            }
        }
        if fault.is_some() {
            return Ok(None);
        }
        for k in 1..=path_depth {
            for u in enumerate_words(k, cf)? {
                *cases += 1;
                let p = path_probability(&u, cf)?;
                let m = cylinder_measure(&u, cf)?;
                if p != m {
                    return Ok(Some(format!("u={u}: path mass {p} but |J_u| = {m}")));
                }
            }
        }
        Ok(None)
    })
}

pub fn run_suite(cf: &ContinuedFraction, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.depth < 1 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut checks = match check_partitions(cf, cfg.n_max, cfg.fault) {
        Ok(c) => c,
        Err(e) => vec![CheckResult {
            name: "return times, language and partitions",
            cases: 0,
            counterexample: Some(format!("error: {e}")),
        }],
    };
    checks.push(check_jumps(cf, cfg.depth, cfg.points, cfg.seed, cfg.fault));
    checks.push(check_coding(cf, cfg.n_max as u64, cfg.depth));
    checks.push(check_measure(cf, cfg.depth, cfg.depth.min(6), cfg.fault));
    Ok(VerifyReport { checks })
}
