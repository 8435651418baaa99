#![no_main]

use enginemap::export::{emit_file_dot, read_file_dot};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(graph) = read_file_dot(text) {
        assert_eq!(read_file_dot(&emit_file_dot(&graph)).unwrap(), graph);
    }
});
