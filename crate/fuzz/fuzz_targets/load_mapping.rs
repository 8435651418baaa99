#![no_main]

use enginemap::mapping::load_mapping;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = load_mapping(text) {
        for rule in table.rules() {
            assert_eq!(table.assign_path(&rule.prefix), rule.code);
        }
    }
});
