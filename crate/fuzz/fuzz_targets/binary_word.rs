#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| sturmian_fuzz::harness::binary_word(data));
