#![no_main]

use libfuzzer_sys::fuzz_target;
use qsl_cli::{parse_args, parse_config_line};

// Arguments are NUL-separated.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("qsl").chain(text.split('\0'));
    if let Ok(config) = parse_args(argv) {
        if config.validate().is_ok() {
            assert_eq!(parse_config_line(&config.to_config_line()).unwrap(), config);
        }
    }
});
