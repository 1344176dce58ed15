#![no_main]

use greedyvote::io::{parse_native, write_native};
use greedyvote::pairwise_tally;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(profile) = parse_native(text) {
        assert_eq!(profile.tally(), &pairwise_tally(&profile));
        let again = parse_native(&write_native(&profile)).expect("written profile parses");
        assert_eq!(again, profile);
    }
});
