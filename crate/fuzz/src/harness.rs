//! Entry points shared by the fuzz targets and the corpus replay test.
//! Every input must either be rejected with an error or round-trip.

use sturmian_core::coding::{build_j_interval, DigitWord};
use sturmian_core::jumps::{jumps_by_formula, ostrowski_decode};
use sturmian_core::rotation::{cylinder_interval, tau_formula};
use sturmian_core::{sign_of, ContinuedFraction, LinearForm, Word};

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

/// `pre|period` or just `pre`, as given to `--cf` and `--period`.
pub fn parse_angle(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let (pre, period) = match s.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let Ok(cf) = ContinuedFraction::parse_spec(pre, period) else { return };
    let _ = cf.to_string();
    let back: ContinuedFraction = serde_json::from_str(&serde_json::to_string(&cf).unwrap()).unwrap();
    assert_eq!(back.spec(), cf.spec());
    for k in -1..16 {
        let Ok(q) = cf.q(k) else { break };
        assert!(q >= 0.into());
        if let Ok(e) = cf.eta(k) {
            let _ = sign_of(&e, &cf);
        }
    }
}

pub fn cf_json(data: &[u8]) {
    let Ok(cf) = serde_json::from_slice::<ContinuedFraction>(data) else { return };
    let json = serde_json::to_string(&cf).unwrap();
    let back: ContinuedFraction = serde_json::from_str(&json).unwrap();
    assert_eq!(back.spec(), cf.spec());
    let _ = cf.q(8);
}

pub fn form_json(data: &[u8]) {
    let Ok(f) = serde_json::from_slice::<LinearForm>(data) else { return };
    let back: LinearForm = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(back, f);
    if f.a().bits() < 256 && f.b().bits() < 256 {
        let cf = ContinuedFraction::golden();
        let s = sign_of(&f, &cf).unwrap();
        assert_eq!(sign_of(&-&f, &cf).unwrap(), s.negate());
        let _ = f.frac(&cf).unwrap();
    }
}

pub fn binary_word(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(w) = s.parse::<Word>() else { return };
    assert_eq!(w.to_string(), s);
    assert_eq!(w.len(), s.len());
    if w.len() <= 64 {
        let cf = ContinuedFraction::golden();
        if let Some(iv) = cylinder_interval(&w, &cf).unwrap() {
            let _ = tau_formula(iv.length(), &cf).unwrap();
        }
    }
}

pub fn digit_word(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(u) = s.parse::<DigitWord>() else { return };
    let back: DigitWord = u.to_string().parse().unwrap();
    assert_eq!(back, u);
    let json: DigitWord = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
    assert_eq!(json, u);
    if u.len() > 30 {
        return;
    }
    let cf = ContinuedFraction::periodic(vec![2, 3], vec![3]).unwrap();
    if u.validate(&cf).is_ok() {
        let _ = build_j_interval(&u, &cf).unwrap();
        let _ = ostrowski_decode(&u, &cf).unwrap();
        if !u.is_empty() {
            let p = jumps_by_formula(&u, u.len() - 1, &cf).unwrap();
            assert!(p.bound_violation().is_none());
        }
    }
}
