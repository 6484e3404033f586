use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sturmian_core::decimal::format_rational;
use sturmian_core::surd::Surd;
use sturmian_core::{ContinuedFraction, LinearForm, Result};

pub const SIG: usize = 30;

/// Integers that fit in an i64 are JSON numbers, larger ones decimal strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ratio(r: &BigRational) -> Value {
    json!([int(r.numer()), int(r.denom())])
}

pub fn dec(r: &BigRational) -> String {
    format_rational(r.numer(), r.denom(), SIG)
}

pub fn form(f: &LinearForm) -> Value {
    json!([int(&f.a()), int(&f.b())])
}

pub fn form_dec(f: &LinearForm, cf: &ContinuedFraction) -> Result<String> {
    f.to_decimal(cf, SIG)
}

pub fn surd(s: &Surd) -> Value {
    json!({ "value": s.to_decimal(SIG), "exact": s.to_string() })
}

/// Left-aligned text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}
