#![no_main]

use enginemap::scanner::{scan_file, FileKind, SourceFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let file = SourceFile::new("/fuzz", "f.cpp", FileKind::Implementation);
    let out = scan_file(&file, data);
    let lines = data.split(|&b| b == b'\n').count();
    let mut last = 0;
    for d in &out.directives {
        assert!(d.line >= last && d.line <= lines);
        assert!(!d.written_path.is_empty());
        last = d.line;
    }
});
