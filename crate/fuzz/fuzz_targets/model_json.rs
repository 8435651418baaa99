#![no_main]

use enginemap::ArchModel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = ArchModel::from_json(text) {
        assert_eq!(ArchModel::from_json(&model.to_json()).unwrap(), model);
    }
});
