//! Source enumeration and lexical `#include` extraction.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use globset::{GlobBuilder, GlobMatcher};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::paths;

pub const DEFAULT_HEADER_EXTENSIONS: &[&str] = &["h", "hh", "hpp", "hxx", "inl"];
pub const DEFAULT_IMPL_EXTENSIONS: &[&str] = &["c", "cc", "cpp", "cxx", "mm"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Header,
    Implementation,
    Other,
}

impl FileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FileKind::Header => "header",
            FileKind::Implementation => "implementation",
            FileKind::Other => "other",
        }
    }
}

impl FromStr for FileKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "header" => Ok(FileKind::Header),
            "implementation" => Ok(FileKind::Implementation),
            "other" => Ok(FileKind::Other),
            _ => Err(format!("unknown file kind {s:?}")),
        }
    }
}

/// A file of the analysed corpus.
///
/// `abs_path` is the root joined with `repo_rel_path`, both in the lexical
/// form described in [`crate::paths`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceFile {
    pub abs_path: String,
    pub repo_rel_path: String,
    pub kind: FileKind,
}

impl SourceFile {
    pub fn new(root: &str, repo_rel_path: impl Into<String>, kind: FileKind) -> Self {
        let repo_rel_path = repo_rel_path.into();
        SourceFile {
            abs_path: paths::join_root(root, &repo_rel_path),
            repo_rel_path,
            kind,
        }
    }

    /// Absolute directory containing the file.
    pub fn abs_dir(&self) -> &str {
        paths::parent(&self.abs_path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IncludeStyle {
    Quoted,
    Angle,
}

impl IncludeStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            IncludeStyle::Quoted => "quoted",
            IncludeStyle::Angle => "angle",
        }
    }
}

impl fmt::Display for IncludeStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IncludeStyle {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "quoted" => Ok(IncludeStyle::Quoted),
            "angle" => Ok(IncludeStyle::Angle),
            _ => Err(format!("unknown include style {s:?}")),
        }
    }
}

/// One `#include` occurrence. `includer` is the repository-relative path of
/// the including file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IncludeDirective {
    pub includer: String,
    pub written_path: String,
    pub style: IncludeStyle,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub root: PathBuf,
    pub header_extensions: BTreeSet<String>,
    pub impl_extensions: BTreeSet<String>,
    pub exclude_globs: Vec<String>,
}

impl CorpusConfig {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CorpusConfig {
            root: root.into(),
            header_extensions: DEFAULT_HEADER_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            impl_extensions: DEFAULT_IMPL_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            exclude_globs: Vec::new(),
        }
    }

    /// Restricts scanning to `extensions`. Each one keeps its default
    /// classification; unknown extensions are treated as implementation files.
    pub fn restrict_extensions<I, S>(&mut self, extensions: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut headers = BTreeSet::new();
        let mut impls = BTreeSet::new();
        for ext in extensions {
            let ext = ext.as_ref().trim().trim_start_matches('.').to_string();
            if ext.is_empty() {
                continue;
            }
            if DEFAULT_HEADER_EXTENSIONS.contains(&ext.as_str()) {
                headers.insert(ext);
            } else {
                impls.insert(ext);
            }
        }
        self.header_extensions = headers;
        self.impl_extensions = impls;
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(ext) = self.header_extensions.intersection(&self.impl_extensions).next() {
            return Err(Error::Config(format!(
                "extension {ext:?} is listed as both header and implementation"
            )));
        }
        Ok(())
    }

    pub fn classify(&self, file_name: &str) -> FileKind {
        let ext = match Path::new(file_name).extension().and_then(|e| e.to_str()) {
            Some(ext) => ext,
            None => return FileKind::Other,
        };
        if self.header_extensions.contains(ext) {
            FileKind::Header
        } else if self.impl_extensions.contains(ext) {
            FileKind::Implementation
        } else {
            FileKind::Other
        }
    }

    /// Normalized absolute form of `root`.
    pub fn normalized_root(&self) -> Result<String> {
        let absolute = std::path::absolute(&self.root).map_err(|e| Error::CorpusRoot {
            path: self.root.clone(),
            reason: e.to_string(),
        })?;
        paths::normalize_abs(&absolute).ok_or_else(|| Error::CorpusRoot {
            path: self.root.clone(),
            reason: "path is not valid UTF-8".into(),
        })
    }
}

/// Problems that do not stop a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanWarning {
    UnreadableEntry { path: String, reason: String },
    UnreadableFile { path: String, reason: String },
    UnsupportedPath { path: String },
    MalformedDirective { file: String, line: usize },
}

impl fmt::Display for ScanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanWarning::UnreadableEntry { path, reason } => {
                write!(f, "skipped unreadable entry {path}: {reason}")
            }
            ScanWarning::UnreadableFile { path, reason } => {
                write!(f, "could not read {path}: {reason}")
            }
            ScanWarning::UnsupportedPath { path } => {
                write!(f, "skipped file with non-UTF-8 or control characters in its name: {path}")
            }
            ScanWarning::MalformedDirective { file, line } => {
                write!(f, "{file}:{line}: malformed #include skipped")
            }
        }
    }
}

/// The enumerated file inventory of a corpus.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub root: String,
    pub files: Vec<SourceFile>,
    pub warnings: Vec<ScanWarning>,
}

/// Exclusion patterns. A pattern containing `/` is matched against the whole
/// repository-relative path; one without `/` is matched against every path
/// segment, so `test*` excludes any directory or file whose name starts with
/// `test`.
struct Excludes {
    anchored: Vec<GlobMatcher>,
    segment: Vec<GlobMatcher>,
}

impl Excludes {
    fn new(patterns: &[String]) -> Result<Self> {
        let mut anchored = Vec::new();
        let mut segment = Vec::new();
        for pattern in patterns {
            let glob = GlobBuilder::new(pattern.trim_end_matches('/'))
                .literal_separator(true)
                .build()
                .map_err(|e| Error::Glob {
                    pattern: pattern.clone(),
                    reason: e.to_string(),
                })?
                .compile_matcher();
            if pattern.contains('/') {
                anchored.push(glob);
            } else {
                segment.push(glob);
            }
        }
        Ok(Excludes { anchored, segment })
    }

    fn is_excluded(&self, rel: &str) -> bool {
        self.anchored.iter().any(|g| g.is_match(rel))
            || rel
                .split('/')
                .any(|seg| self.segment.iter().any(|g| g.is_match(seg)))
    }
}

fn is_portable(rel: &str) -> bool {
    !rel.chars().any(char::is_control)
}

/// Enumerates every header and implementation file under `config.root`,
/// sorted by repository-relative path. Symbolic links are not followed.
pub fn walk_corpus(config: &CorpusConfig) -> Result<Corpus> {
    config.validate()?;
    let root = config.normalized_root()?;
    let meta = std::fs::metadata(&root).map_err(|e| Error::CorpusRoot {
        path: config.root.clone(),
        reason: e.to_string(),
    })?;
    if !meta.is_dir() {
        return Err(Error::CorpusRoot {
            path: config.root.clone(),
            reason: "not a directory".into(),
        });
    }
    std::fs::read_dir(&root).map_err(|e| Error::CorpusRoot {
        path: config.root.clone(),
        reason: e.to_string(),
    })?;

    let excludes = Excludes::new(&config.exclude_globs)?;
    let mut corpus = Corpus {
        root: root.clone(),
        ..Corpus::default()
    };

    let walker = WalkDir::new(&root)
        .follow_links(false)
        .min_depth(1)
        .into_iter()
        .filter_entry(|entry| {
            match entry.path().to_str().and_then(|p| paths::strip_root(&root, p)) {
                Some(rel) => !excludes.is_excluded(rel),
                None => true,
            }
        });

    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                let path = err
                    .path()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| root.clone());
                corpus.warnings.push(ScanWarning::UnreadableEntry {
                    path,
                    reason: err.to_string(),
                });
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = match entry.path().to_str().and_then(|p| paths::strip_root(&root, p)) {
            Some(rel) if is_portable(rel) => rel.to_string(),
            _ => {
                corpus.warnings.push(ScanWarning::UnsupportedPath {
                    path: entry.path().display().to_string(),
                });
                continue;
            }
        };
        match config.classify(paths::file_name(&rel)) {
            FileKind::Other => {}
            kind => corpus.files.push(SourceFile::new(&root, rel, kind)),
        }
    }
    corpus
        .files
        .sort_by(|a, b| a.repo_rel_path.cmp(&b.repo_rel_path));
    Ok(corpus)
}

/// Directives of one file plus the line numbers of `#include` lines that
/// could not be parsed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileScan {
    pub directives: Vec<IncludeDirective>,
    pub malformed_lines: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Carry {
    Code,
    BlockComment,
    LineCommentSpliced,
}

fn is_hspace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | 0x0b | 0x0c)
}

fn is_ident(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Index just past the literal that opened before `start`, or the end of
/// the line when it is unterminated.
fn skip_literal(line: &[u8], start: usize, quote: u8) -> usize {
    let mut i = start;
    while i < line.len() {
        match line[i] {
            b'\\' => i += 2,
            b if b == quote => return i + 1,
            _ => i += 1,
        }
    }
    line.len()
}

enum Directive {
    NotInclude,
    Found(IncludeStyle, String, usize),
    Malformed(usize),
}

/// Parses what follows a leading `#`.
fn parse_directive(line: &[u8], mut i: usize) -> Directive {
    while i < line.len() && is_hspace(line[i]) {
        i += 1;
    }
    let keyword = b"include";
    if !line[i..].starts_with(keyword) {
        return Directive::NotInclude;
    }
    i += keyword.len();
    if i < line.len() && is_ident(line[i]) {
        return Directive::NotInclude;
    }
    while i < line.len() && is_hspace(line[i]) {
        i += 1;
    }
    let (style, close) = match line.get(i) {
        Some(b'"') => (IncludeStyle::Quoted, b'"'),
        Some(b'<') => (IncludeStyle::Angle, b'>'),
        _ => return Directive::Malformed(i),
    };
    let body_start = i + 1;
    let Some(len) = line[body_start..].iter().position(|&b| b == close) else {
        return Directive::Malformed(line.len());
    };
    let end = body_start + len + 1;
    let written = String::from_utf8_lossy(&line[body_start..body_start + len]).into_owned();
    if written.trim().is_empty() || written.chars().any(char::is_control) {
        return Directive::Malformed(end);
    }
    Directive::Found(style, written, end)
}

/// Extracts `#include` directives from raw file bytes.
///
/// Comments are stripped with a small state machine that respects string
/// and character literals; conditional compilation is not evaluated, so
/// includes in inactive `#if` branches are reported too.
pub fn scan_file(file: &SourceFile, text: &[u8]) -> FileScan {
    let mut out = FileScan::default();
    let mut carry = Carry::Code;
    let text = text.strip_prefix(b"\xef\xbb\xbf").unwrap_or(text);

    for (idx, raw) in text.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix(b"\r").unwrap_or(raw);
        let spliced = line.last() == Some(&b'\\');

        if carry == Carry::LineCommentSpliced {
            if !spliced {
                carry = Carry::Code;
            }
            continue;
        }

        let mut leading = true;
        let mut i = 0;
        while i < line.len() {
            if carry == Carry::BlockComment {
                match line[i..].windows(2).position(|w| w == b"*/") {
                    Some(pos) => {
                        i += pos + 2;
                        carry = Carry::Code;
                    }
                    None => i = line.len(),
                }
                continue;
            }

            let b = line[i];
            let rest = &line[i..];
            if is_hspace(b) {
                i += 1;
            } else if rest.starts_with(b"/*") {
                carry = Carry::BlockComment;
                i += 2;
            } else if rest.starts_with(b"//") {
                if spliced {
                    carry = Carry::LineCommentSpliced;
                }
                break;
            } else if b == b'#' && leading {
                leading = false;
                i = match parse_directive(line, i + 1) {
                    Directive::NotInclude => i + 1,
                    Directive::Found(style, written_path, end) => {
                        out.directives.push(IncludeDirective {
                            includer: file.repo_rel_path.clone(),
                            written_path,
                            style,
                            line: line_no,
                        });
                        end
                    }
                    Directive::Malformed(end) => {
                        out.malformed_lines.push(line_no);
                        end
                    }
                };
            } else {
                leading = false;
                i = match b {
                    b'"' => skip_literal(line, i + 1, b'"'),
                    // A quote after an alphanumeric is a C++14 digit separator.
                    b'\'' if i == 0 || !line[i - 1].is_ascii_alphanumeric() => {
                        skip_literal(line, i + 1, b'\'')
                    }
                    _ => i + 1,
                };
            }
        }
    }
    out
}

/// Result of scanning a whole corpus.
#[derive(Debug, Clone, Default)]
pub struct ScanOutput {
    pub corpus: Corpus,
    pub directives: Vec<IncludeDirective>,
}

impl ScanOutput {
    pub fn malformed_count(&self) -> usize {
        self.corpus
            .warnings
            .iter()
            .filter(|w| matches!(w, ScanWarning::MalformedDirective { .. }))
            .count()
    }
}

/// Walks the corpus and scans every file. Files are read in parallel; the
/// output follows the sorted file order.
pub fn scan_corpus(config: &CorpusConfig) -> Result<ScanOutput> {
    let mut corpus = walk_corpus(config)?;
    let per_file: Vec<(FileScan, Option<ScanWarning>)> = corpus
        .files
        .par_iter()
        .map(|file| match std::fs::read(&file.abs_path) {
            Ok(bytes) => (scan_file(file, &bytes), None),
            Err(e) => (
                FileScan::default(),
                Some(ScanWarning::UnreadableFile {
                    path: file.repo_rel_path.clone(),
                    reason: e.to_string(),
                }),
            ),
        })
        .collect();

    let mut directives = Vec::new();
    for (file, (scan, warning)) in corpus.files.iter().zip(per_file) {
        corpus.warnings.extend(warning);
        corpus
            .warnings
            .extend(scan.malformed_lines.iter().map(|&line| ScanWarning::MalformedDirective {
                file: file.repo_rel_path.clone(),
                line,
            }));
        directives.extend(scan.directives);
    }
    Ok(ScanOutput { corpus, directives })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(rel: &str) -> SourceFile {
        SourceFile::new("/r", rel, FileKind::Implementation)
    }

    fn scan(text: &str) -> Vec<(IncludeStyle, String, usize)> {
        scan_file(&file("a.cpp"), text.as_bytes())
            .directives
            .into_iter()
            .map(|d| (d.style, d.written_path, d.line))
            .collect()
    }

    #[test]
    fn quoted_include_on_line_three() {
        let got = scan("// header\n\n#include \"foo/bar.h\"\n");
        assert_eq!(got, vec![(IncludeStyle::Quoted, "foo/bar.h".into(), 3)]);
    }

    #[test]
    fn commented_out_include_is_ignored() {
        assert!(scan("// #include <stdio.h>\n").is_empty());
        assert!(scan("/* #include <stdio.h> */\n").is_empty());
        assert!(scan("/*\n#include <stdio.h>\n*/\n").is_empty());
    }

    #[test]
    fn line_order_is_preserved() {
        let got = scan("#include <vector>\n#include \"x.h\"\n");
        assert_eq!(
            got,
            vec![
                (IncludeStyle::Angle, "vector".into(), 1),
                (IncludeStyle::Quoted, "x.h".into(), 2),
            ]
        );
    }

    #[test]
    fn whitespace_variants_and_inactive_branches() {
        let text = "  #  include   <a.h>\n#if 0\n#include \"b.h\"\n#endif\n\t#include\t\"c.h\" // tail\n#include\"d.h\"\n";
        let names: Vec<String> = scan(text).into_iter().map(|d| d.1).collect();
        assert_eq!(names, ["a.h", "b.h", "c.h", "d.h"]);
    }

    #[test]
    fn block_comment_before_hash_still_counts() {
        assert_eq!(scan("/* x */ #include \"a.h\"\n").len(), 1);
        assert_eq!(scan("/* open\nstill */ #include \"a.h\"\n").len(), 1);
    }

    #[test]
    fn comment_opened_after_directive_hides_following_lines() {
        let got = scan("#include \"a.h\" /* begin\n#include \"b.h\"\n*/\n#include \"c.h\"\n");
        let names: Vec<String> = got.into_iter().map(|d| d.1).collect();
        assert_eq!(names, ["a.h", "c.h"]);
    }

    #[test]
    fn string_literals_do_not_open_comments() {
        let text = "const char* s = \"/*\";\n#include \"a.h\"\nconst char* t = \"//\"; #include \"no.h\"\n";
        let names: Vec<String> = scan(text).into_iter().map(|d| d.1).collect();
        assert_eq!(names, ["a.h"]);
    }

    #[test]
    fn slashes_inside_include_delimiters_are_kept() {
        let names: Vec<String> = scan("#include <a//b.h>\n#include \"c/*d.h\"\n#include \"e.h\"\n")
            .into_iter()
            .map(|d| d.1)
            .collect();
        assert_eq!(names, ["a//b.h", "c/*d.h", "e.h"]);
    }

    #[test]
    fn digit_separator_is_not_a_char_literal() {
        let text = "int x = 1'000; /* c\n#include \"hidden.h\"\n*/\n#include \"seen.h\"\n";
        let names: Vec<String> = scan(text).into_iter().map(|d| d.1).collect();
        assert_eq!(names, ["seen.h"]);
    }

    #[test]
    fn spliced_line_comment_swallows_next_line() {
        let names: Vec<String> = scan("// note \\\n#include \"a.h\"\n#include \"b.h\"\n")
            .into_iter()
            .map(|d| d.1)
            .collect();
        assert_eq!(names, ["b.h"]);
    }

    #[test]
    fn malformed_lines_are_tallied() {
        let out = scan_file(
            &file("a.cpp"),
            b"#include MACRO_HEADER\n#include \"unterminated\n#include <>\n#include_next <x.h>\n#define X 1\n",
        );
        assert!(out.directives.is_empty());
        assert_eq!(out.malformed_lines, vec![1, 2, 3]);
    }

    #[test]
    fn crlf_and_invalid_utf8_are_tolerated() {
        let mut bytes = b"#include \"a.h\"\r\n".to_vec();
        bytes.extend_from_slice(b"\xff\xfe junk\n#include <b\xffc.h>\n");
        let out = scan_file(&file("a.cpp"), &bytes);
        assert_eq!(out.directives.len(), 2);
        assert_eq!(out.directives[0].written_path, "a.h");
        assert_eq!(out.directives[1].written_path, "b\u{fffd}c.h");
        assert_eq!(out.directives[1].line, 3);
    }

    #[test]
    fn leading_byte_order_mark_is_skipped() {
        let out = scan_file(&file("a.cpp"), b"\xef\xbb\xbf#include \"a.h\"\n");
        assert_eq!(out.directives.len(), 1);
        assert_eq!(out.directives[0].line, 1);
    }

    #[test]
    fn hash_not_at_line_start_is_ignored() {
        assert!(scan("x = 1; #include \"a.h\"\n").is_empty());
    }

    #[test]
    fn overlapping_extension_sets_are_rejected() {
        let mut cfg = CorpusConfig::new("/tmp");
        cfg.impl_extensions.insert("h".into());
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn restrict_extensions_keeps_default_classes() {
        let mut cfg = CorpusConfig::new("/tmp");
        cfg.restrict_extensions(["h", ".cpp", "ipp"]);
        assert_eq!(cfg.classify("a.h"), FileKind::Header);
        assert_eq!(cfg.classify("a.cpp"), FileKind::Implementation);
        assert_eq!(cfg.classify("a.ipp"), FileKind::Implementation);
        assert_eq!(cfg.classify("a.hpp"), FileKind::Other);
        assert_eq!(cfg.classify(".h"), FileKind::Other);
    }

    #[test]
    fn segment_excludes() {
        let ex = Excludes::new(&["test*".into(), "third_party/**".into()]).unwrap();
        assert!(ex.is_excluded("src/tests/a.cpp"));
        assert!(ex.is_excluded("third_party/zlib/z.h"));
        assert!(!ex.is_excluded("src/latest/a.cpp"));
        assert!(!ex.is_excluded("src/third_party/a.h"));
    }
}
