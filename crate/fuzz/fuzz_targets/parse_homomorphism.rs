#![no_main]

use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;
use tablealg::io::{parse_homomorphism, parse_label_pairs};
use tablealg::oracle::{cyclic, cyclic_named, group_algebra};
use tablealg::TableAlgebra;

fn algebras() -> &'static (TableAlgebra, TableAlgebra) {
    static PAIR: OnceLock<(TableAlgebra, TableAlgebra)> = OnceLock::new();
    PAIR.get_or_init(|| (group_algebra(&cyclic(4)), group_algebra(&cyclic_named(4, "h"))))
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_label_pairs(text);
    let (src, tgt) = algebras();
    let _ = parse_homomorphism(text, src, tgt);
});
