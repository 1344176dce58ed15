#![no_main]

use greedyvote::bench::BenchConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = BenchConfig::from_toml(text) {
            config.validate().expect("parsed configs are valid");
        }
    }
});
