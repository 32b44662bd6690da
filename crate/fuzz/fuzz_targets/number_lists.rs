#![no_main]

use libfuzzer_sys::fuzz_target;
use orthoscheme_cli::parse::{parse_float_list, parse_usize_list, Rays};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(xs) = parse_float_list(text) {
            assert!(!xs.is_empty() && xs.iter().all(|x| x.is_finite()));
        }
        if let Ok(ns) = parse_usize_list(text) {
            assert!(ns.iter().all(|&n| n > 0));
        }
        let _ = text.parse::<Rays>();
    }
});
