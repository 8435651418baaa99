#![no_main]

use enginemap::formats::{read_edges, write_edges};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((root, edges)) = read_edges(text, "fuzz") {
        assert_eq!(read_edges(&write_edges(&root, &edges), "fuzz").unwrap(), (root, edges));
    }
});
