#![no_main]

use libfuzzer_sys::fuzz_target;
use tablealg::io::{parse_table_algebra, serialize_table_algebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(alg) = parse_table_algebra(text) {
        let again = parse_table_algebra(&serialize_table_algebra(&alg)).expect("serialized algebra parses");
        assert!(alg.same_structure(&again));
    }
});
