#![no_main]

use libfuzzer_sys::fuzz_target;
use tablealg::io::{parse_scheme, serialize_scheme};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_scheme(text) {
        let again = parse_scheme(&serialize_scheme(&s)).expect("serialized scheme parses");
        assert_eq!(s.matrix(), again.matrix());
    }
});
