#![no_main]

use enginemap::resolver::ExternalHeaderPolicy;
use enginemap::scanner::IncludeStyle;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(policy) = ExternalHeaderPolicy::parse(text, "fuzz") {
        for line in text.lines() {
            policy.is_external(IncludeStyle::Quoted, line.trim());
            policy.is_external(IncludeStyle::Angle, line.trim());
        }
    }
});
