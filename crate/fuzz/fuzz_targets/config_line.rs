#![no_main]

use libfuzzer_sys::fuzz_target;
use qsl_cli::parse_config_line;

fuzz_target!(|line: &str| {
    if let Ok(config) = parse_config_line(line) {
        let echoed = config.to_config_line();
        let again = parse_config_line(&echoed).expect("echo of a parsed config must parse");
        assert_eq!(again, config);
        assert_eq!(again.to_config_line(), echoed);
    }
});
