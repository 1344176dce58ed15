#![no_main]

use greedyvote::io::{parse_native, parse_soc, write_native};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(profile) = parse_soc(text) {
        // every accepted SOC file has a native equivalent
        assert_eq!(parse_native(&write_native(&profile)).unwrap(), profile);
    }
});
