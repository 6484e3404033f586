use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use sturmian_core::coding::{build_j_interval, gamma_encode_at, DigitWord};
use sturmian_core::jumps::jumps_by_formula;
use sturmian_core::measure::{path_probability, sample_indexed};
use sturmian_core::rotation::{cylinder_interval, distinct_lengths, partition};
use sturmian_core::{frac_position, sign_of, ContinuedFraction, LinearForm, Sign, Word};

fn angle() -> impl Strategy<Value = ContinuedFraction> {
    (
        prop::collection::vec(1u64..=6, 0..4),
        prop::collection::vec(1u64..=6, 1..4),
    )
        .prop_map(|(pre, per)| ContinuedFraction::periodic(pre, per).unwrap())
}

/// Two consecutive convergents `[0; a_1..a_n]`, folded by hand; α lies between them.
fn bracket(cf: &ContinuedFraction, n: usize) -> (BigRational, BigRational) {
    let fold = |n: usize| {
        let mut x = BigRational::zero();
        for k in (1..=n).rev() {
            x = (BigRational::from_integer(cf.digit(k).unwrap().into()) + x).recip();
        }
        x
    };
    let (a, b) = (fold(n), fold(n + 1));
    if a < b { (a, b) } else { (b, a) }
}

/// Sign of `a + bα` from the rational bracket, when the bracket decides it.
fn oracle_sign(f: &LinearForm, lo: &BigRational, hi: &BigRational) -> Option<Sign> {
    let at = |x: &BigRational| BigRational::from_integer(f.a()) + BigRational::from_integer(f.b()) * x;
    let (u, v) = (at(lo), at(hi));
    if u.is_positive() && v.is_positive() {
        Some(Sign::Positive)
    } else if u.is_negative() && v.is_negative() {
        Some(Sign::Negative)
    } else if f.is_zero() {
        Some(Sign::Zero)
    } else {
        None
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sign_matches_rational_bracket(
        cf in angle(),
        a in -1_000_000i64..1_000_000,
        b in -1_000_000i64..1_000_000,
        shift in 0u32..80,
    ) {
        let (lo, hi) = bracket(&cf, 90);
        let scale = BigInt::from(1u8) << shift;
        let f = LinearForm::new(BigInt::from(a) * &scale, BigInt::from(b) * &scale);
        if let Some(want) = oracle_sign(&f, &lo, &hi) {
            prop_assert_eq!(sign_of(&f, &cf).unwrap(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn near_zero_forms(cf in angle(), k in 2i64..30) {
        // p_k - q_k α is tiny but never zero.
        let (p, q) = cf.convergent(k).unwrap();
        let f = LinearForm::new(p, -q);
        let want = if k % 2 == 0 { Sign::Negative } else { Sign::Positive };
        prop_assert_eq!(sign_of(&f, &cf).unwrap(), want);
    }

    #[test]
    fn cut_points_are_distinct(cf in angle(), n in 1u64..400) {
        let mut xs: Vec<LinearForm> = (0..=n).map(|i| frac_position(i, &cf).unwrap()).collect();
        for x in &xs {
            prop_assert_ne!(sign_of(x, &cf).unwrap(), Sign::Negative);
            prop_assert_eq!(sign_of(&(&LinearForm::ONE - x), &cf).unwrap(), Sign::Positive);
        }
        xs.sort_by(|a, b| a.compare(b, &cf).unwrap());
        for w in xs.windows(2) {
            prop_assert_eq!(w[0].compare(&w[1], &cf).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn eta_positive_and_decreasing(cf in angle()) {
        for k in -1..60 {
            let (e, next) = (cf.eta(k).unwrap(), cf.eta(k + 1).unwrap());
            prop_assert_eq!(sign_of(&next, &cf).unwrap(), Sign::Positive);
            prop_assert_eq!(next.compare(&e, &cf).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn partition_structure(cf in angle(), n in 0u64..200) {
        let cells = partition(n, &cf).unwrap();
        prop_assert_eq!(cells.len() as u64, n + 1);
        let total = cells.iter().fold(LinearForm::ZERO, |acc, c| acc + c.interval.length());
        prop_assert_eq!(total, LinearForm::ONE);
        prop_assert!(distinct_lengths(&cells, &cf).unwrap().len() <= 3);
        for c in &cells {
            let iv = cylinder_interval(&c.word, &cf).unwrap().unwrap();
            prop_assert!(iv.same_arc(&c.interval));
        }
    }

    #[test]
    fn coding_round_trip(cf in angle(), k in 1usize..6) {
        let q = cf.q_u64(k as i64).unwrap();
        for cell in partition(q - 1, &cf).unwrap() {
            let u = gamma_encode_at(&cell.word, k, &cf).unwrap();
            prop_assert!(build_j_interval(&u, &cf).unwrap().same_arc(&cell.interval));
            prop_assert_eq!(&path_probability(&u, &cf).unwrap(), cell.interval.length());
        }
    }

    #[test]
    fn sampled_jumps_within_bounds(cf in angle(), seed in any::<u64>(), index in 0u64..1000) {
        let x = sample_indexed(&cf, 25, seed, index).unwrap();
        x.validate(&cf).unwrap();
        let p = jumps_by_formula(&x, 24, &cf).unwrap();
        prop_assert!(p.bound_violation().is_none());
    }

    #[test]
    fn word_text_round_trip(bits in prop::collection::vec(any::<bool>(), 0..300)) {
        let w = Word::from_bits(bits.iter().copied());
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(&back, &w);
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), bits);
    }

    #[test]
    fn digit_word_text_round_trip(d in prop::collection::vec(0u64..1000, 1..20)) {
        let u = DigitWord::new(d);
        let back: DigitWord = u.to_string().parse().unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn form_json_round_trip(a in any::<i64>(), b in any::<i64>(), s in 0u32..100) {
        let f = LinearForm::new(BigInt::from(a) << s, BigInt::from(b) << s);
        let json = serde_json::to_string(&f).unwrap();
        let back: LinearForm = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }
}
