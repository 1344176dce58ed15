#![no_main]

use greedyvote::{apply_sequence, fixtures, parse_witness};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seq) = parse_witness(text) {
        assert_eq!(parse_witness(&seq.to_text()).unwrap(), seq);
        // out-of-range edits must be rejected, not panic
        let _ = apply_sequence(&fixtures::ex5(), &seq);
    }
});
