//! Lexical path handling.
//!
//! Every path that crosses a module boundary is a `String` with `/` as the
//! only separator and no `.` or `..` segments. Absolute paths start with `/`;
//! repository-relative paths never do. Symlinks are never consulted, so two
//! spellings of the same file only compare equal after lexical
//! normalization.

use std::path::{Component, Path};

/// Normalizes an absolute filesystem path. Returns `None` for relative paths
/// or paths that are not valid UTF-8.
pub fn normalize_abs(path: &Path) -> Option<String> {
    if !path.is_absolute() {
        return None;
    }
    let mut parts: Vec<&str> = Vec::new();
    for component in path.components() {
        match component {
            Component::Prefix(_) | Component::RootDir | Component::CurDir => {}
            Component::ParentDir => {
                parts.pop();
            }
            Component::Normal(part) => parts.push(part.to_str()?),
        }
    }
    Some(format!("/{}", parts.join("/")))
}

/// Resolves `written` against the absolute directory `dir`, purely lexically.
/// Backslashes in `written` are treated as separators; an absolute `written`
/// ignores `dir`.
pub fn lexical_join(dir: &str, written: &str) -> String {
    let written = written.replace('\\', "/");
    let mut parts: Vec<&str> = Vec::new();
    if !written.starts_with('/') {
        parts.extend(dir.split('/').filter(|s| !s.is_empty()));
    }
    for segment in written.split('/') {
        match segment {
            "" | "." => {}
            ".." => {
                parts.pop();
            }
            s => parts.push(s),
        }
    }
    format!("/{}", parts.join("/"))
}

/// Normalizes a repository-relative path. Leading `./` and `/`, trailing
/// separators and `.` segments are dropped. Returns `None` if the result is
/// empty or escapes the root through `..`.
pub fn normalize_rel(path: &str) -> Option<String> {
    let path = path.replace('\\', "/");
    let mut parts: Vec<&str> = Vec::new();
    for segment in path.split('/') {
        match segment {
            "" | "." => {}
            ".." => {
                parts.pop()?;
            }
            s => parts.push(s),
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("/"))
    }
}

/// Joins a normalized absolute root and a normalized relative path.
pub fn join_root(root: &str, rel: &str) -> String {
    if root == "/" {
        format!("/{rel}")
    } else {
        format!("{root}/{rel}")
    }
}

/// Returns `abs` relative to `root` when `abs` lies strictly under `root`.
pub fn strip_root<'a>(root: &str, abs: &'a str) -> Option<&'a str> {
    let rest = if root == "/" {
        abs.strip_prefix('/')?
    } else {
        abs.strip_prefix(root)?.strip_prefix('/')?
    };
    (!rest.is_empty()).then_some(rest)
}

/// Directory part of a `/`-separated path; `""` for a bare file name.
pub fn parent(path: &str) -> &str {
    match path.rfind('/') {
        Some(0) => "/",
        Some(i) => &path[..i],
        None => "",
    }
}

/// Final segment of a `/`-separated path.
pub fn file_name(path: &str) -> &str {
    match path.rfind('/') {
        Some(i) => &path[i + 1..],
        None => path,
    }
}
