#![no_main]

use enginemap::metrics::{matrix_from_csv, CouplingHeatmap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = CouplingHeatmap::from_csv(text, Vec::new()) {
        assert_eq!(CouplingHeatmap::from_csv(&h.to_csv(), Vec::new()).unwrap(), h);
    }
    if let Ok(m) = matrix_from_csv(text, "fuzz") {
        assert_eq!(matrix_from_csv(&m.to_csv(), "fuzz").unwrap(), m);
    }
});
