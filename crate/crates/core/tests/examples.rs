//! Worked examples, checked against values computed by hand or by an
//! independent evaluation of α as an exact rational.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sturmian_core::coding::{build_j_interval, gamma_encode, DigitWord, Extremal};
use sturmian_core::jumps::{jumps_by_definition, jumps_by_formula, ostrowski_decode, rate_estimates, to_f64, DEFAULT_TOL};
use sturmian_core::lang::{generate_prefix, language, tau_word_oracle};
use sturmian_core::measure::{sample_indexed, transition_row, Context};
use sturmian_core::rates::rate_constants;
use sturmian_core::rotation::{
    cylinder_interval, default_cap, klein_bracket, partition, tau_bruteforce, tau_formula, CircleInterval,
};
use sturmian_core::surd::Surd;
use sturmian_core::{frac_position, sign_of, ContinuedFraction, LinearForm, Schedule, Sign, Word};

/// α = [0; 2, 3, 3, 3, ...], the angle of the seven-cell example.
fn seven() -> ContinuedFraction {
    ContinuedFraction::periodic(vec![2, 3], vec![3]).unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn q(cf: &ContinuedFraction, k: i64) -> BigInt {
    cf.q(k).unwrap()
}

/// α to within 10^-100, from 60 digits folded from the back.
fn alpha_rational(cf: &ContinuedFraction) -> BigRational {
    let mut x = BigRational::zero();
    for k in (1..=60).rev() {
        x = (BigRational::from_integer(cf.digit(k).unwrap().into()) + x).recip();
    }
    x
}

fn eval(f: &LinearForm, cf: &ContinuedFraction) -> f64 {
    let v = BigRational::from_integer(f.a()) + BigRational::from_integer(f.b()) * alpha_rational(cf);
    to_f64(&v)
}

#[test]
fn convergent_denominators() {
    let g = ContinuedFraction::golden();
    let qs: Vec<BigInt> = (0..=5).map(|k| q(&g, k)).collect();
    assert_eq!(qs, [1, 1, 2, 3, 5, 8].map(BigInt::from));
    let f = seven();
    assert_eq!(f.convergent(1).unwrap(), (1.into(), 2.into()));
    assert_eq!(f.convergent(2).unwrap(), (3.into(), 7.into()));
    for cf in [g, f] {
        assert_eq!(cf.convergent(-1).unwrap(), (1.into(), 0.into()));
        assert_eq!(cf.convergent(0).unwrap(), (0.into(), 1.into()));
    }
}

#[test]
fn eta_values_and_recurrence() {
    let g = ContinuedFraction::golden();
    assert_eq!(g.eta(-1).unwrap(), LinearForm::ONE);
    assert_eq!(g.eta(0).unwrap(), LinearForm::ALPHA);
    assert_eq!(g.eta(1).unwrap(), LinearForm::small(1, -1));
    assert!((eval(&g.eta(1).unwrap(), &g) - 0.381966).abs() < 1e-6);
    for cf in [g, seven(), ContinuedFraction::silver()] {
        for k in 0..30 {
            let a = cf.digit(k as usize + 1).unwrap() as i64;
            let (prev, cur, next) = (cf.eta(k - 1).unwrap(), cf.eta(k).unwrap(), cf.eta(k + 1).unwrap());
            assert_eq!(next, &prev - &cur.scale(a));
            // The reversed recurrence a η_k - η_{k-1} is the negative of the true one.
            assert_ne!(next, &cur.scale(a) - &prev);
        }
    }
}

#[test]
fn signs() {
    let g = ContinuedFraction::golden();
    assert_eq!(sign_of(&LinearForm::ZERO, &g).unwrap(), Sign::Zero);
    assert_eq!(sign_of(&LinearForm::small(1, -2), &g).unwrap(), Sign::Negative);
    assert!(eval(&LinearForm::small(1, -2), &g) < -0.236);
    for k in -1..40 {
        assert_eq!(sign_of(&g.eta(k).unwrap(), &g).unwrap(), Sign::Positive);
    }
}

#[test]
fn cut_points() {
    let g = ContinuedFraction::golden();
    assert_eq!(frac_position(0, &g).unwrap(), LinearForm::ZERO);
    assert_eq!(frac_position(1, &g).unwrap(), LinearForm::small(1, -1));
    let f = seven();
    let x2 = frac_position(2, &f).unwrap();
    assert_eq!(x2, LinearForm::small(1, -2));
    let alpha = 1.0 / (2.0 + 1.0 / (1.5 + 13f64.sqrt() / 2.0));
    assert!((eval(&x2, &f) - (1.0 - 2.0 * alpha)).abs() < 1e-12);
}

#[test]
fn ostrowski_sums() {
    let g = ContinuedFraction::golden();
    assert_eq!(ostrowski_decode(&DigitWord::new(vec![]), &g).unwrap(), BigInt::zero());
    let r = ostrowski_decode(&DigitWord::new(vec![1, 1, 1, 1]), &g).unwrap();
    assert_eq!(r, BigInt::from(7));
    assert_eq!(r, q(&g, 4) + q(&g, 3) - 1);
    let f = seven();
    assert_eq!(ostrowski_decode(&DigitWord::new(vec![2, 0]), &f).unwrap(), q(&f, 1));
}

#[test]
fn cylinders() {
    let g = ContinuedFraction::golden();
    let i0 = cylinder_interval(&w("0"), &g).unwrap().unwrap();
    assert_eq!(i0.start(), &LinearForm::ZERO);
    assert_eq!(i0.length(), &LinearForm::small(1, -1));
    let i01 = cylinder_interval(&w("01"), &g).unwrap().unwrap();
    assert!(i01.same_arc(&i0));
    assert!(!language(2, &g).unwrap().contains(&w("00")));
    assert!(cylinder_interval(&w("11"), &seven()).unwrap().is_none());
    assert!(!language(2, &seven()).unwrap().contains(&w("11")));
}

#[test]
fn klein_return_times() {
    let g = ContinuedFraction::golden();
    for (len, want) in [(LinearForm::ALPHA, 1u64), (LinearForm::small(1, -1), 2), (LinearForm::ONE, 1)] {
        assert_eq!(tau_formula(&len, &g).unwrap(), BigInt::from(want));
        assert_eq!(tau_bruteforce(&len, &g, default_cap(&len, &g).unwrap()).unwrap(), want);
    }
    let i01 = cylinder_interval(&w("01"), &g).unwrap().unwrap();
    assert_eq!(tau_bruteforce(i01.length(), &g, 100).unwrap(), 2);
    assert_eq!(tau_word_oracle(&w("01"), &g).unwrap(), 2);
    assert_eq!(tau_word_oracle(&w("1"), &g).unwrap(), 1);
}

#[test]
fn klein_boundary_just_below_eta() {
    for cf in [ContinuedFraction::golden(), seven(), ContinuedFraction::silver()] {
        for k in 0..10 {
            let len = &cf.eta(k).unwrap() - &cf.eta(k + 3).unwrap();
            let want = q(&cf, k + 1);
            assert_eq!(tau_formula(&len, &cf).unwrap(), want);
            let brute = tau_bruteforce(&len, &cf, default_cap(&len, &cf).unwrap()).unwrap();
            assert_eq!(BigInt::from(brute), want);
        }
    }
}

#[test]
fn seven_cell_partition() {
    let f = seven();
    let cells = partition(1, &f).unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!((cells[0].word.to_string(), cells[0].interval.cuts()), ("0".into(), Some((0, 1))));
    assert_eq!((cells[1].word.to_string(), cells[1].interval.cuts()), ("1".into(), Some((1, 0))));

    let words: Vec<String> = partition(6, &f).unwrap().iter().map(|c| c.word.to_string()).collect();
    let want = ["001010", "010010", "010100", "010101", "100101", "101001", "101010"];
    assert_eq!(words, want);
    let lang: BTreeSet<String> = language(6, &f).unwrap().iter().map(Word::to_string).collect();
    assert_eq!(lang, want.iter().map(|s| s.to_string()).collect());

    let empty = partition(0, &f).unwrap();
    assert_eq!(empty.len(), 1);
    assert!(empty[0].word.is_empty() && empty[0].interval.is_full());
}

#[test]
fn mechanical_prefixes() {
    let g = ContinuedFraction::golden();
    assert_eq!(generate_prefix(&g, &LinearForm::ZERO, 11).unwrap().bits.to_string(), "01011010110");
    // Independently: bit n is 1 iff {nα} >= 1 - α.
    let a = alpha_rational(&g);
    let bits: String = (0..11)
        .map(|n| {
            let x = &a * BigInt::from(n);
            let frac = &x - x.floor();
            if frac >= BigRational::one() - &a { '1' } else { '0' }
        })
        .collect();
    assert_eq!(bits, "01011010110");
    for cf in [g, seven()] {
        assert_eq!(generate_prefix(&cf, &LinearForm::ZERO, 1).unwrap().bits.to_string(), "0");
    }
    assert!(generate_prefix(&seven(), &LinearForm::ZERO, 7).unwrap().bits.to_string().starts_with("001010"));
}

#[test]
fn small_languages() {
    let g = ContinuedFraction::golden();
    assert_eq!(language(1, &g).unwrap(), [w("0"), w("1")].into_iter().collect());
    assert_eq!(language(2, &g).unwrap(), [w("01"), w("10"), w("11")].into_iter().collect());
}

#[test]
fn return_time_of_a_long_cell() {
    let f = seven();
    let u = w("010101");
    let len = cylinder_interval(&u, &f).unwrap().unwrap().length().clone();
    // |I_u| = 5α - 2 lies in (η_1, η_0], so the return time is q_1.
    assert_eq!(len, LinearForm::small(-2, 5));
    assert_eq!(klein_bracket(&len, &f).unwrap(), 0);
    let t = tau_word_oracle(&u, &f).unwrap();
    assert_eq!(BigInt::from(t), tau_formula(&len, &f).unwrap());
    assert_eq!(BigInt::from(t), q(&f, 1));
    assert!(generate_prefix(&f, &LinearForm::ZERO, 200).unwrap().bits.to_string().contains("01010101"));
}

#[test]
fn coded_intervals() {
    let f = seven();
    let j = |d: Vec<u64>| build_j_interval(&DigitWord::new(d), &f).unwrap();
    let i = |s: &str| cylinder_interval(&w(s), &f).unwrap().unwrap();
    assert!(j(vec![1]).same_arc(&CircleInterval::from_cuts(1, 0, &f).unwrap()));
    assert!(j(vec![1]).same_arc(&i("1")));
    let j2 = j(vec![2]);
    assert!(j2.same_arc(&i("0")));
    assert_eq!(j2.length(), &(&f.eta(0).unwrap() + &f.eta(1).unwrap()));
    assert!(j(vec![2, 0]).same_arc(&i("001010")));

    assert_eq!(gamma_encode(&w("001010"), &f).unwrap().digits(), &[2, 0]);
    assert_eq!(gamma_encode(&w("101010"), &f).unwrap().digits(), &[1, 3]);
    assert!(gamma_encode(&Word::new(), &ContinuedFraction::golden()).unwrap().is_empty());
}

#[test]
fn jumps_along_the_orbit_of_zero() {
    let g = ContinuedFraction::golden();
    let depth = 12;
    let need = (q(&g, depth + 1) + q(&g, depth)).try_into().unwrap();
    let prefix = generate_prefix(&g, &LinearForm::ZERO, need).unwrap();
    let p = jumps_by_definition(&prefix.bits, depth as usize, &g).unwrap();
    assert!(p.bound_violation().is_none());
    for row in &p.rows {
        assert!(row.q_k <= row.r_k && row.r_k < &row.q_k1 + &row.q_k);
    }
}

#[test]
fn extremal_jumps() {
    for cf in [ContinuedFraction::golden(), seven(), ContinuedFraction::silver()] {
        let depth = 21;
        let jumps = |e: Extremal| {
            jumps_by_formula(&e.digits(depth + 1, &cf).unwrap(), depth, &cf).unwrap().jumps()
        };
        let (b, c, d) = (jumps(Extremal::B), jumps(Extremal::C), jumps(Extremal::D));
        for k in 0..=depth {
            assert_eq!(b[k], q(&cf, k as i64 + 1) + q(&cf, k as i64) - 1);
        }
        for k in 1..=10 {
            assert_eq!(c[2 * k - 1], q(&cf, 2 * k as i64));
            assert_eq!(c[2 * k], q(&cf, 2 * k as i64));
            assert_eq!(d[2 * k], q(&cf, 2 * k as i64 + 1));
            assert_eq!(d[2 * k + 1], q(&cf, 2 * k as i64 + 1));
        }
        let pb = jumps_by_formula(&Extremal::B.digits(depth + 1, &cf).unwrap(), depth, &cf).unwrap();
        for row in &pb.rows {
            assert_eq!(row.lower(), BigRational::new(row.q_k.clone(), &row.q_k1 + &row.q_k - 1));
        }
    }
}

#[test]
fn golden_rates_of_extremal_points() {
    let g = ContinuedFraction::golden();
    let gamma = (1.0 + 5f64.sqrt()) / 2.0;
    let est = |e: Extremal| {
        let p = jumps_by_formula(&e.digits(31, &g).unwrap(), 30, &g).unwrap();
        rate_estimates(&p, DEFAULT_TOL).unwrap()
    };
    assert!((to_f64(&est(Extremal::B).lower) - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-6);
    assert!((to_f64(&est(Extremal::C).upper) - gamma).abs() < 1e-6);
    assert!((to_f64(&est(Extremal::D).upper) - gamma).abs() < 1e-6);
}

#[test]
fn constants_of_golden_and_silver() {
    let g = rate_constants(&ContinuedFraction::golden(), 30).unwrap();
    assert_eq!(g.m, 1);
    let r0 = Surd::new(3.into(), (-1).into(), 5.into(), 2.into());
    assert_eq!(g.r0_limit.unwrap().cmp_exact(&r0), std::cmp::Ordering::Equal);
    assert_eq!(g.r1_limit.unwrap().cmp_exact(&Surd::golden_ratio()), std::cmp::Ordering::Equal);

    let s = rate_constants(&ContinuedFraction::silver(), 40).unwrap();
    assert_eq!(s.m, 2);
    let r1 = Surd::new(1.into(), 1.into(), 2.into(), 1.into());
    let r0 = Surd::new(2.into(), (-1).into(), 2.into(), 2.into());
    assert_eq!(s.r1_limit.clone().unwrap().cmp_exact(&r1), std::cmp::Ordering::Equal);
    assert_eq!(s.r0_limit.clone().unwrap().cmp_exact(&r0), std::cmp::Ordering::Equal);
    assert!((to_f64(&s.r1_estimate) - (1.0 + 2f64.sqrt())).abs() < 1e-9);
    assert!(s.all_bounds_hold());
}

#[test]
fn unbounded_constants_drift() {
    let cf = ContinuedFraction::schedule(Schedule::Linear);
    let rs: Vec<_> = [10, 20, 30, 40].iter().map(|&k| rate_constants(&cf, k).unwrap()).collect();
    for pair in rs.windows(2) {
        assert!(pair[1].r0_estimate < pair[0].r0_estimate);
        assert!(pair[1].r1_estimate > pair[0].r1_estimate);
    }
    assert!(to_f64(&rs[3].r0_estimate) < 0.05);
    assert!(to_f64(&rs[3].r1_estimate) > 20.0);
}

#[test]
fn transition_rows() {
    let f = seven();
    let init = transition_row(0, Context::Initial, &f).unwrap();
    assert_eq!(init.digits(), 1..=2);
    assert_eq!(init.numerator(1), LinearForm::ALPHA);
    assert_eq!(init.numerator(2), &LinearForm::ALPHA + &f.eta(1).unwrap());
    assert!(init.sums_to_one());
    for k in 1..8 {
        let e = |j: i64| f.eta(j).unwrap();
        let max = transition_row(k, Context::Maximal, &f).unwrap();
        assert_eq!(max.denominator, &e(k as i64 - 1) + &e(k as i64));
        assert_eq!(*max.digits().start(), 0);
        for j in 0..f.digit(k + 1).unwrap() {
            assert_eq!(max.numerator(j), e(k as i64));
        }
        let non = transition_row(k, Context::NonMaximal, &f).unwrap();
        assert_eq!(*non.digits().start(), 1);
        assert_eq!(non.denominator, e(k as i64 - 1));
        assert!(max.sums_to_one() && non.sums_to_one());
    }
}

#[test]
fn sampled_words_are_admissible() {
    for cf in [ContinuedFraction::golden(), seven(), ContinuedFraction::schedule(Schedule::Linear)] {
        for i in 0..200 {
            let x = sample_indexed(&cf, 30, 11, i).unwrap();
            x.validate(&cf).unwrap();
            assert_ne!(x.x(1), 0);
        }
    }
    let g = ContinuedFraction::golden();
    for i in 0..200 {
        let x = sample_indexed(&g, 30, 5, i).unwrap();
        for k in 1..30 {
            assert!(x.x(k + 1) <= 1);
            if x.x(k + 1) == 0 {
                assert_eq!(x.x(k), 1);
            }
        }
    }
}

#[test]
fn first_digit_frequency() {
    let f = seven();
    let n = 100_000u64;
    let hits = (0..n).filter(|&i| sample_indexed(&f, 1, 3, i).unwrap().x(1) == 2).count() as f64;
    // μ[W_1 = a_1] = α + η_1.
    let p = eval(&(&LinearForm::ALPHA + &f.eta(1).unwrap()), &f);
    let sd = (p * (1.0 - p) / n as f64).sqrt();
    assert!((hits / n as f64 - p).abs() < 3.0 * sd, "{} vs {p}", hits / n as f64);
}

#[test]
fn large_angles_keep_exact_signs() {
    let cf = ContinuedFraction::schedule(Schedule::PowersOfTwo);
    let k = 12;
    let e = cf.eta(k).unwrap();
    assert!(e.b().abs() > BigInt::from(u64::MAX));
    assert_eq!(sign_of(&e, &cf).unwrap(), Sign::Positive);
    assert_eq!(sign_of(&(-&e), &cf).unwrap(), Sign::Negative);
}
