#![no_main]

use libfuzzer_sys::fuzz_target;

// Whitespace-separated words after the program name; parsing only.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let argv = std::iter::once("orthoscheme").chain(text.split_whitespace());
        let _ = orthoscheme_cli::parse_args(argv);
    }
});
