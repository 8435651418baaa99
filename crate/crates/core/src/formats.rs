//! Line-oriented interchange files between the `scan` and `resolve` steps.
//!
//! Directives file:
//!
//! ```text
//! #!root<TAB>/abs/corpus/root
//! #!file<TAB><rel-path><TAB><header|implementation|other>
//! <includer-rel-path><TAB><quoted|angle><TAB><written-path><TAB><line>
//! ```
//!
//! Edges file:
//!
//! ```text
//! #!root<TAB>/abs/corpus/root
//! <includer-rel-path><TAB><target-rel-path>
//! ```
//!
//! Other lines starting with `#` are comments. Fields never contain tabs or
//! newlines because the scanner skips paths with control characters.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::paths;
use crate::scanner::{FileKind, IncludeDirective, SourceFile};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectivesFile {
    pub root: String,
    pub files: Vec<SourceFile>,
    pub directives: Vec<IncludeDirective>,
}

pub fn write_directives(root: &str, files: &[SourceFile], directives: &[IncludeDirective]) -> String {
    let mut out = format!("#!root\t{root}\n");
    for f in files {
        out.push_str(&format!("#!file\t{}\t{}\n", f.repo_rel_path, f.kind.as_str()));
    }
    for d in directives {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            d.includer, d.style, d.written_path, d.line
        ));
    }
    out
}

fn parse_root(value: &str, origin: &str, line: usize) -> Result<String> {
    let normalized = paths::normalize_abs(Path::new(value))
        .ok_or_else(|| Error::parse(origin, line, format!("root {value:?} is not absolute")))?;
    Ok(normalized)
}

fn parse_rel(value: &str, origin: &str, line: usize) -> Result<String> {
    match paths::normalize_rel(value) {
        Some(rel) if rel == value => Ok(rel),
        _ => Err(Error::parse(
            origin,
            line,
            format!("{value:?} is not a normalized relative path"),
        )),
    }
}

/// Parses a directives file. When `#!file` lines are present every includer
/// must be one of them.
pub fn read_directives(text: &str, origin: &str) -> Result<DirectivesFile> {
    let mut root = None;
    let mut files = Vec::new();
    let mut directives = Vec::new();
    let mut directive_lines = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#!") {
            let fields: Vec<&str> = rest.split('\t').collect();
            match fields.as_slice() {
                ["root", value] => {
                    if root.is_some() {
                        return Err(Error::parse(origin, line_no, "duplicate #!root"));
                    }
                    root = Some(parse_root(value, origin, line_no)?);
                }
                ["file", rel, kind] => {
                    let kind: FileKind = kind.parse().map_err(|m| Error::parse(origin, line_no, m))?;
                    let rel = parse_rel(rel, origin, line_no)?;
                    files.push((rel, kind));
                }
                _ => return Err(Error::parse(origin, line_no, "unknown #! header")),
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [includer, style, written, line_field] = fields.as_slice() else {
            return Err(Error::parse(origin, line_no, format!("expected 4 tab-separated fields, found {}", fields.len())));
        };
        let style = style.parse().map_err(|m| Error::parse(origin, line_no, m))?;
        if written.is_empty() {
            return Err(Error::parse(origin, line_no, "empty include path"));
        }
        let line_number: usize = line_field
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::parse(origin, line_no, format!("invalid line number {line_field:?}")))?;
        directives.push(IncludeDirective {
            includer: parse_rel(includer, origin, line_no)?,
            written_path: written.to_string(),
            style,
            line: line_number,
        });
        directive_lines.push(line_no);
    }

    let root = root.ok_or_else(|| Error::parse(origin, 1, "missing #!root header"))?;
    let files: Vec<SourceFile> = files
        .into_iter()
        .map(|(rel, kind)| SourceFile::new(&root, rel, kind))
        .collect();
    if !files.is_empty() {
        let known: BTreeSet<&str> = files.iter().map(|f| f.repo_rel_path.as_str()).collect();
        for (d, &line_no) in directives.iter().zip(&directive_lines) {
            if !known.contains(d.includer.as_str()) {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("includer {:?} is not in the file list", d.includer),
                ));
            }
        }
    }
    Ok(DirectivesFile {
        root,
        files,
        directives,
    })
}

/// Writes resolved edges, given as absolute paths under `root`.
pub fn write_edges(root: &str, edges: &[(String, String)]) -> String {
    let mut out = format!("#!root\t{root}\n");
    for (from, to) in edges {
        let rel = |p: &str| paths::strip_root(root, p).unwrap_or(p).to_string();
        out.push_str(&format!("{}\t{}\n", rel(from), rel(to)));
    }
    out
}

/// Reads an edges file back into absolute path pairs.
pub fn read_edges(text: &str, origin: &str) -> Result<(String, Vec<(String, String)>)> {
    let mut root = None;
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(value) = line.strip_prefix("#!root\t") {
            if root.is_some() {
                return Err(Error::parse(origin, line_no, "duplicate #!root"));
            }
            root = Some(parse_root(value, origin, line_no)?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let Some(root) = root.as_deref() else {
            return Err(Error::parse(origin, line_no, "edge before #!root header"));
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [from, to] = fields.as_slice() else {
            return Err(Error::parse(origin, line_no, "expected 2 tab-separated fields"));
        };
        edges.push((
            paths::join_root(root, &parse_rel(from, origin, line_no)?),
            paths::join_root(root, &parse_rel(to, origin, line_no)?),
        ));
    }
    let root = root.ok_or_else(|| Error::parse(origin, 1, "missing #!root header"))?;
    Ok((root, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanner::IncludeStyle;

    #[test]
    fn directives_round_trip() {
        let files = vec![
            SourceFile::new("/r", "a.cpp", FileKind::Implementation),
            SourceFile::new("/r", "a.h", FileKind::Header),
        ];
        let ds = vec![IncludeDirective {
            includer: "a.cpp".into(),
            written_path: "a.h".into(),
            style: IncludeStyle::Quoted,
            line: 3,
        }];
        let text = write_directives("/r", &files, &ds);
        assert_eq!(
            text,
            "#!root\t/r\n#!file\ta.cpp\timplementation\n#!file\ta.h\theader\na.cpp\tquoted\ta.h\t3\n"
        );
        let back = read_directives(&text, "d.tsv").unwrap();
        assert_eq!(back.root, "/r");
        assert_eq!(back.files, files);
        assert_eq!(back.directives, ds);
    }

    #[test]
    fn directive_errors_carry_line_numbers() {
        let cases = [
            ("#!root\t/r\na.cpp\tquoted\ta.h\n", 2),
            ("#!root\t/r\na.cpp\tbogus\ta.h\t1\n", 2),
            ("#!root\t/r\na.cpp\tquoted\ta.h\t0\n", 2),
            ("#!root\trel\n", 1),
            ("#!root\t/r\n#!file\ta.h\theader\n\nb.cpp\tangle\tx\t1\n", 4),
            ("a.cpp\tquoted\ta.h\t1\n", 1),
            ("#!root\t/r\n../a.cpp\tquoted\ta.h\t1\n", 2),
        ];
        for (text, line) in cases {
            match read_directives(text, "d") {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn edges_round_trip() {
        let edges = vec![("/r/a.cpp".to_string(), "/r/inc/a.h".to_string())];
        let text = write_edges("/r", &edges);
        assert_eq!(text, "#!root\t/r\na.cpp\tinc/a.h\n");
        assert_eq!(read_edges(&text, "e").unwrap(), ("/r".to_string(), edges));
        assert!(read_edges("a\tb\n", "e").is_err());
    }
}
