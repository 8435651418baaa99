//! Include path resolution against the scanned corpus.
//!
//! Quoted includes are looked up in the includer's directory first, then in
//! every search path in priority order; angle includes skip the includer's
//! directory. The first candidate that is a corpus file wins. Paths that
//! exist on disk but outside the corpus, and paths matching the
//! [`ExternalHeaderPolicy`], are external. Everything else is unresolved and
//! lands in the [`UnresolvedReport`] that drives the report-and-retry loop.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use globset::{GlobBuilder, GlobMatcher};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::paths;
use crate::scanner::{IncludeDirective, IncludeStyle, SourceFile};

/// Ordered include directories; earlier entries win.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchPathSet(Vec<String>);

impl SearchPathSet {
    pub fn new<I, P>(dirs: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<Path>,
    {
        merge_search_paths(&SearchPathSet::default(), dirs)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Appends `additions` after the existing entries, dropping duplicates while
/// keeping the first occurrence.
pub fn merge_search_paths<I, P>(existing: &SearchPathSet, additions: I) -> Result<SearchPathSet>
where
    I: IntoIterator<Item = P>,
    P: AsRef<Path>,
{
    let mut merged = existing.0.clone();
    for dir in additions {
        let dir = dir.as_ref();
        let normalized = paths::normalize_abs(dir)
            .ok_or_else(|| Error::NotAbsolute(dir.display().to_string()))?;
        if !merged.contains(&normalized) {
            merged.push(normalized);
        }
    }
    Ok(SearchPathSet(merged))
}

/// System and toolchain header names that are never expected in a corpus.
pub const DEFAULT_SYSTEM_PATTERNS: &[&str] = &[
    // C standard library
    "assert.h", "complex.h", "ctype.h", "errno.h", "fenv.h", "float.h", "inttypes.h",
    "iso646.h", "limits.h", "locale.h", "math.h", "setjmp.h", "signal.h", "stdalign.h",
    "stdarg.h", "stdatomic.h", "stdbool.h", "stddef.h", "stdint.h", "stdio.h", "stdlib.h",
    "stdnoreturn.h", "string.h", "tgmath.h", "threads.h", "time.h", "uchar.h", "wchar.h",
    "wctype.h",
    // POSIX
    "alloca.h", "dirent.h", "dlfcn.h", "execinfo.h", "fcntl.h", "glob.h", "grp.h",
    "libgen.h", "netdb.h", "poll.h", "pthread.h", "pwd.h", "sched.h", "semaphore.h",
    "strings.h", "syslog.h", "termios.h", "unistd.h", "utime.h", "sys/*", "arpa/*",
    "net/*", "netinet/*", "linux/*", "asm/*", "mach/*", "mach-o/*", "libkern/*",
    // Windows
    "windows.h", "Windows.h", "windowsx.h", "winsock.h", "winsock2.h", "ws2tcpip.h",
    "mmsystem.h", "tchar.h", "io.h", "direct.h", "process.h", "malloc.h", "conio.h",
    "shlobj.h", "shellapi.h", "objbase.h", "commdlg.h", "intrin.h", "crtdbg.h",
    "dbghelp.h", "d3d9.h", "d3d11.h", "d3d12.h", "dxgi.h", "dxgi1_4.h", "xinput.h",
    "dinput.h", "dsound.h", "xaudio2.h", "wrl.h", "wrl/*",
    // Apple frameworks
    "TargetConditionals.h", "AvailabilityMacros.h", "Foundation/*", "CoreFoundation/*",
    "AppKit/*", "UIKit/*", "Cocoa/*", "QuartzCore/*", "CoreGraphics/*", "CoreVideo/*",
    "CoreText/*", "Carbon/*", "IOKit/*", "Metal/*", "MetalKit/*", "GameController/*",
    "AudioToolbox/*", "AudioUnit/*", "AVFoundation/*", "CoreAudio/*", "OpenAL/*",
    "OpenGL/*", "OpenGLES/*", "GLKit/*", "Security/*", "SystemConfiguration/*",
    // Graphics, audio and platform SDKs
    "GL/*", "GLES/*", "GLES2/*", "GLES3/*", "EGL/*", "KHR/*", "vulkan/*", "AL/*",
    "X11/*", "wayland-*.h", "alsa/*", "pulse/*", "android/*", "jni.h", "emscripten.h",
    "emscripten/*",
];

/// Decides which unresolved includes are external to the corpus.
#[derive(Debug, Clone)]
pub struct ExternalHeaderPolicy {
    /// Angle-style includes with no `/` in the path are external.
    pub bare_angle_is_external: bool,
    patterns: Vec<String>,
    matchers: Vec<GlobMatcher>,
}

impl Default for ExternalHeaderPolicy {
    fn default() -> Self {
        ExternalHeaderPolicy::new(true, DEFAULT_SYSTEM_PATTERNS.iter().copied())
            .expect("default system patterns are valid globs")
    }
}

impl ExternalHeaderPolicy {
    pub fn new<I, S>(bare_angle_is_external: bool, patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut policy = ExternalHeaderPolicy {
            bare_angle_is_external,
            patterns: Vec::new(),
            matchers: Vec::new(),
        };
        policy.extend(patterns)?;
        Ok(policy)
    }

    pub fn extend<I, S>(&mut self, patterns: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for pattern in patterns {
            let pattern = pattern.as_ref();
            let matcher = GlobBuilder::new(pattern)
                .literal_separator(true)
                .build()
                .map_err(|e| Error::Glob {
                    pattern: pattern.to_string(),
                    reason: e.to_string(),
                })?
                .compile_matcher();
            self.patterns.push(pattern.to_string());
            self.matchers.push(matcher);
        }
        Ok(())
    }

    /// Parses a policy file: one glob per line, `#` starts a comment line.
    /// The patterns are added to the default policy.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut policy = ExternalHeaderPolicy::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            policy
                .extend([line])
                .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
        }
        Ok(policy)
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn is_external(&self, style: IncludeStyle, written_path: &str) -> bool {
        let path = written_path.replace('\\', "/");
        (self.bare_angle_is_external && style == IncludeStyle::Angle && !path.contains('/'))
            || self.matchers.iter().any(|m| m.is_match(&path))
    }
}

/// Lookup table over the scanned files.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    root: String,
    by_abs: HashMap<String, SourceFile>,
    folded: Option<HashMap<String, SourceFile>>,
}

impl CorpusIndex {
    pub fn new(root: impl Into<String>, files: &[SourceFile]) -> Self {
        CorpusIndex {
            root: root.into(),
            by_abs: files.iter().map(|f| (f.abs_path.clone(), f.clone())).collect(),
            folded: None,
        }
    }

    /// Makes lookups ignore ASCII case. When several files fold to the same
    /// key, the lexicographically smallest path wins.
    pub fn case_insensitive(mut self) -> Self {
        let mut folded: HashMap<String, SourceFile> = HashMap::new();
        for file in self.by_abs.values() {
            let key = file.abs_path.to_ascii_lowercase();
            match folded.get(&key) {
                Some(existing) if existing.abs_path <= file.abs_path => {}
                _ => {
                    folded.insert(key, file.clone());
                }
            }
        }
        self.folded = Some(folded);
        self
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.by_abs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_abs.is_empty()
    }

    pub fn get(&self, abs_path: &str) -> Option<&SourceFile> {
        match &self.folded {
            Some(folded) => folded.get(&abs_path.to_ascii_lowercase()),
            None => self.by_abs.get(abs_path),
        }
    }

    pub fn contains(&self, abs_path: &str) -> bool {
        self.get(abs_path).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionOutcome {
    Resolved(SourceFile),
    External(String),
    Unresolved(String),
}

fn candidates<'a>(
    directive: &'a IncludeDirective,
    includer_dir: &'a str,
    search_paths: &'a SearchPathSet,
) -> impl Iterator<Item = String> + 'a {
    let own = (directive.style == IncludeStyle::Quoted).then_some(includer_dir);
    own.into_iter()
        .chain(search_paths.as_slice().iter().map(String::as_str))
        .map(move |dir| paths::lexical_join(dir, &directive.written_path))
}

/// Resolves one directive. Pure apart from the existence check used to
/// classify hits outside the corpus as external.
pub fn resolve(
    directive: &IncludeDirective,
    search_paths: &SearchPathSet,
    policy: &ExternalHeaderPolicy,
    index: &CorpusIndex,
) -> ResolutionOutcome {
    let includer_abs = paths::join_root(index.root(), &directive.includer);
    let includer_dir = paths::parent(&includer_abs);

    if let Some(hit) =
        candidates(directive, includer_dir, search_paths).find_map(|c| index.get(&c).cloned())
    {
        return ResolutionOutcome::Resolved(hit);
    }
    let on_disk = candidates(directive, includer_dir, search_paths)
        .any(|c| Path::new(&c).is_file());
    if on_disk || policy.is_external(directive.style, &directive.written_path) {
        ResolutionOutcome::External(directive.written_path.clone())
    } else {
        ResolutionOutcome::Unresolved(directive.written_path.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedEntry {
    pub written_path: String,
    pub count: usize,
    pub sample_includer: String,
}

/// Distinct unresolved include paths, most frequent first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnresolvedReport {
    pub entries: Vec<UnresolvedEntry>,
}

impl UnresolvedReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `<count>\t<written-path>\t<sample-includer>` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{}", e.count, e.written_path, e.sample_includer);
        }
        out
    }
}

/// Resolved edges (absolute includer path, absolute target path), one per
/// resolved directive, in directive order.
#[derive(Debug, Clone, Default)]
pub struct Resolution {
    pub outcomes: Vec<ResolutionOutcome>,
    pub edges: Vec<(String, String)>,
    pub report: UnresolvedReport,
    pub external_count: usize,
}

impl Resolution {
    pub fn resolved_count(&self) -> usize {
        self.edges.len()
    }

    pub fn unresolved_count(&self) -> usize {
        self.report.entries.iter().map(|e| e.count).sum()
    }
}

pub fn resolve_all(
    directives: &[IncludeDirective],
    search_paths: &SearchPathSet,
    policy: &ExternalHeaderPolicy,
    index: &CorpusIndex,
) -> Resolution {
    let outcomes: Vec<ResolutionOutcome> = directives
        .par_iter()
        .map(|d| resolve(d, search_paths, policy, index))
        .collect();

    let mut resolution = Resolution::default();
    let mut unresolved: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (directive, outcome) in directives.iter().zip(&outcomes) {
        match outcome {
            ResolutionOutcome::Resolved(target) => resolution.edges.push((
                paths::join_root(index.root(), &directive.includer),
                target.abs_path.clone(),
            )),
            ResolutionOutcome::External(_) => resolution.external_count += 1,
            ResolutionOutcome::Unresolved(path) => {
                let entry = unresolved
                    .entry(path.as_str())
                    .or_insert((0, directive.includer.as_str()));
                entry.0 += 1;
                entry.1 = entry.1.min(directive.includer.as_str());
            }
        }
    }
    let mut entries: Vec<UnresolvedEntry> = unresolved
        .into_iter()
        .map(|(path, (count, sample))| UnresolvedEntry {
            written_path: path.to_string(),
            count,
            sample_includer: sample.to_string(),
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.written_path.cmp(&b.written_path)));
    resolution.report = UnresolvedReport { entries };
    resolution.outcomes = outcomes;
    resolution
}
