#![no_main]

use enginemap::formats::{read_directives, write_directives};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = read_directives(text, "fuzz") {
        let again = write_directives(&parsed.root, &parsed.files, &parsed.directives);
        assert_eq!(read_directives(&again, "fuzz").unwrap(), parsed);
    }
});
