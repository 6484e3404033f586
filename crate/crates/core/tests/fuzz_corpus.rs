//! Replays the checked-in fuzz corpus through the same harness the fuzz
//! targets use, so regressions show up under `cargo test`.

#[path = "../../../fuzz/src/harness.rs"]
mod harness;

use std::fs;
use std::path::Path;

fn replay(target: &str, run: fn(&[u8])) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut n = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        run(&fs::read(&path).unwrap());
        n += 1;
    }
    assert!(n > 0, "no seeds in {}", dir.display());
}

#[test]
fn parse_angle_seeds() {
    replay("parse_angle", harness::parse_angle);
}

#[test]
fn cf_json_seeds() {
    replay("cf_json", harness::cf_json);
}

#[test]
fn form_json_seeds() {
    replay("form_json", harness::form_json);
}

#[test]
fn binary_word_seeds() {
    replay("binary_word", harness::binary_word);
}

#[test]
fn digit_word_seeds() {
    replay("digit_word", harness::digit_word);
}

mod random_inputs {
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn angles(s in "[0-9, |.-]{0,24}") {
            super::harness::parse_angle(s.as_bytes());
        }

        #[test]
        fn words(s in "[01]{0,80}|[01a ]{0,8}") {
            super::harness::binary_word(s.as_bytes());
        }

        #[test]
        fn digit_words(s in "[0-3,]{0,24}") {
            super::harness::digit_word(s.as_bytes());
        }

        #[test]
        fn forms(a in any::<i64>(), b in "-?[0-9]{0,40}") {
            super::harness::form_json(format!("[{a}, \"{b}\"]").as_bytes());
        }

        #[test]
        fn raw_bytes(data in prop::collection::vec(any::<u8>(), 0..64)) {
            super::harness::cf_json(&data);
            super::harness::form_json(&data);
            super::harness::parse_angle(&data);
        }
    }
}
