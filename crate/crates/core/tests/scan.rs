use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use enginemap::formats;
use enginemap::scanner::{self, CorpusConfig, FileKind, IncludeStyle};
use regex::Regex;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect()
}

#[test]
fn scan_fixture_matches_hand_enumerated_directives() {
    let dir = fixtures().join("scan");
    let out = scanner::scan_corpus(&CorpusConfig::new(dir.join("corpus"))).unwrap();
    let written = formats::write_directives(&out.corpus.root, &out.corpus.files, &out.directives);
    let expected = fs::read_to_string(dir.join("expected_directives.tsv")).unwrap();
    assert_eq!(data_lines(&written), data_lines(&expected));
    assert_eq!(out.malformed_count(), 5);
}

#[test]
fn scan_fixture_inventory_and_kinds() {
    let dir = fixtures().join("scan");
    let out = scanner::scan_corpus(&CorpusConfig::new(dir.join("corpus"))).unwrap();
    let got: Vec<String> = out
        .corpus
        .files
        .iter()
        .map(|f| format!("{}\t{}", f.repo_rel_path, f.kind.as_str()))
        .collect();
    let expected = fs::read_to_string(dir.join("expected_files.tsv")).unwrap();
    assert_eq!(got, data_lines(&expected));
    assert_eq!(got.len(), 30);
}

#[test]
fn extension_restriction_and_excludes() {
    let root = fixtures().join("scan/corpus");
    let mut cfg = CorpusConfig::new(&root);
    cfg.restrict_extensions(["h"]);
    let out = scanner::walk_corpus(&cfg).unwrap();
    assert!(out.files.iter().all(|f| f.repo_rel_path.ends_with(".h") && f.kind == FileKind::Header));
    assert_eq!(out.files.len(), 5);

    let mut cfg = CorpusConfig::new(&root);
    cfg.exclude_globs = vec!["exts".into(), "plain/*.cpp".into()];
    let out = scanner::walk_corpus(&cfg).unwrap();
    assert!(out.files.iter().all(|f| !f.repo_rel_path.starts_with("exts/")));
    assert!(out.files.iter().any(|f| f.repo_rel_path == "plain/basic.h"));
    assert!(!out.files.iter().any(|f| f.repo_rel_path == "plain/basic.cpp"));
}

/// Line regex oracle. The mini-engine sources have no comments or literals
/// around their directives, so a plain per-line match is exact there.
#[test]
fn mini_engines_agree_with_regex_oracle() {
    let re = Regex::new(r#"^\s*#\s*include\s*([<"])([^>"]+)[>"]"#).unwrap();
    for (engine, root) in [("alpha", "alpha/src"), ("beta", "beta"), ("gamma", "gamma")] {
        let root = fixtures().join("engines").join(root);
        let out = scanner::scan_corpus(&CorpusConfig::new(&root)).unwrap();
        let mut expected = Vec::new();
        for f in &out.corpus.files {
            let text = fs::read_to_string(&f.abs_path).unwrap();
            for (i, line) in text.lines().enumerate() {
                if let Some(c) = re.captures(line) {
                    let style = if &c[1] == "<" { IncludeStyle::Angle } else { IncludeStyle::Quoted };
                    expected.push((f.repo_rel_path.clone(), style, c[2].to_string(), i + 1));
                }
            }
        }
        let got: Vec<_> = out
            .directives
            .iter()
            .map(|d| (d.includer.clone(), d.style, d.written_path.clone(), d.line))
            .collect();
        assert_eq!(got, expected, "{engine}");
        assert!(!got.is_empty());
    }
}

#[test]
fn every_directive_names_a_scanned_file() {
    let root = fixtures().join("engines/gamma");
    let out = scanner::scan_corpus(&CorpusConfig::new(&root)).unwrap();
    let files: BTreeMap<&str, FileKind> = out
        .corpus
        .files
        .iter()
        .map(|f| (f.repo_rel_path.as_str(), f.kind))
        .collect();
    for d in &out.directives {
        assert!(files.contains_key(d.includer.as_str()), "{}", d.includer);
    }
}

#[test]
fn directives_file_round_trips_through_text() {
    let root = fixtures().join("scan/corpus");
    let out = scanner::scan_corpus(&CorpusConfig::new(&root)).unwrap();
    let text = formats::write_directives(&out.corpus.root, &out.corpus.files, &out.directives);
    let back = formats::read_directives(&text, "scan").unwrap();
    assert_eq!(back.root, out.corpus.root);
    assert_eq!(back.files, out.corpus.files);
    assert_eq!(back.directives, out.directives);
}

#[test]
fn missing_root_is_an_error() {
    let err = scanner::walk_corpus(&CorpusConfig::new(fixtures().join("no/such/dir"))).unwrap_err();
    assert!(matches!(err, enginemap::Error::CorpusRoot { .. }), "{err}");
}
