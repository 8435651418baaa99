//! Subsystem taxonomy and the folder-to-subsystem mapping table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths;
use crate::scanner::SourceFile;

/// The sixteen engine subsystems plus `UNK` for unmapped files.
///
/// Variant order is alphabetical by code, which is also the fixed axis order
/// of every coupling matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubsystemCode {
    AUD,
    COR,
    DEB,
    EDI,
    FES,
    GMP,
    HID,
    LLR,
    OMP,
    PHY,
    PLA,
    RES,
    SDK,
    SGC,
    SKA,
    VFX,
    UNK,
}

impl SubsystemCode {
    /// The sixteen real subsystems in matrix axis order.
    pub const ALL: [SubsystemCode; 16] = [
        SubsystemCode::AUD,
        SubsystemCode::COR,
        SubsystemCode::DEB,
        SubsystemCode::EDI,
        SubsystemCode::FES,
        SubsystemCode::GMP,
        SubsystemCode::HID,
        SubsystemCode::LLR,
        SubsystemCode::OMP,
        SubsystemCode::PHY,
        SubsystemCode::PLA,
        SubsystemCode::RES,
        SubsystemCode::SDK,
        SubsystemCode::SGC,
        SubsystemCode::SKA,
        SubsystemCode::VFX,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SubsystemCode::AUD => "AUD",
            SubsystemCode::COR => "COR",
            SubsystemCode::DEB => "DEB",
            SubsystemCode::EDI => "EDI",
            SubsystemCode::FES => "FES",
            SubsystemCode::GMP => "GMP",
            SubsystemCode::HID => "HID",
            SubsystemCode::LLR => "LLR",
            SubsystemCode::OMP => "OMP",
            SubsystemCode::PHY => "PHY",
            SubsystemCode::PLA => "PLA",
            SubsystemCode::RES => "RES",
            SubsystemCode::SDK => "SDK",
            SubsystemCode::SGC => "SGC",
            SubsystemCode::SKA => "SKA",
            SubsystemCode::VFX => "VFX",
            SubsystemCode::UNK => "UNK",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SubsystemCode::AUD => "Audio",
            SubsystemCode::COR => "Core Systems",
            SubsystemCode::DEB => "Profiling and Debugging",
            SubsystemCode::EDI => "World Editor",
            SubsystemCode::FES => "Front End",
            SubsystemCode::GMP => "Gameplay Foundations",
            SubsystemCode::HID => "Human Interface Devices",
            SubsystemCode::LLR => "Low-Level Renderer",
            SubsystemCode::OMP => "Online Multiplayer",
            SubsystemCode::PHY => "Collision and Physics",
            SubsystemCode::PLA => "Platform Independence Layer",
            SubsystemCode::RES => "Resources",
            SubsystemCode::SDK => "Third-party SDKs",
            SubsystemCode::SGC => "Scene Graph / Culling Optimizations",
            SubsystemCode::SKA => "Skeletal Animation",
            SubsystemCode::VFX => "Visual Effects",
            SubsystemCode::UNK => "Unmapped",
        }
    }

    /// Matrix axis position; `None` for `UNK`.
    pub fn index(self) -> Option<usize> {
        match self {
            SubsystemCode::UNK => None,
            code => Some(code as usize),
        }
    }
}

impl fmt::Display for SubsystemCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubsystemCode {
    type Err = String;

    /// Accepts any of the seventeen codes, case-insensitively.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        SubsystemCode::ALL
            .iter()
            .copied()
            .chain([SubsystemCode::UNK])
            .find(|c| c.as_str() == upper)
            .ok_or_else(|| format!("unknown subsystem code {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRule {
    pub prefix: String,
    pub code: SubsystemCode,
}

/// Repository-relative path prefixes mapped to subsystems. Prefixes are
/// unique and none maps to `UNK`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingTable {
    rules: BTreeMap<String, SubsystemCode>,
}

impl MappingTable {
    pub fn new(rules: impl IntoIterator<Item = MappingRule>) -> Result<Self> {
        let mut table = MappingTable::default();
        for (i, rule) in rules.into_iter().enumerate() {
            table.insert(rule).map_err(|m| Error::parse("<rules>", i + 1, m))?;
        }
        Ok(table)
    }

    fn insert(&mut self, rule: MappingRule) -> std::result::Result<(), String> {
        if rule.code == SubsystemCode::UNK {
            return Err("rules may not map to UNK".into());
        }
        let prefix = paths::normalize_rel(&rule.prefix)
            .ok_or_else(|| format!("empty or invalid prefix {:?}", rule.prefix))?;
        if self.rules.contains_key(&prefix) {
            return Err(format!("duplicate prefix {prefix:?}"));
        }
        self.rules.insert(prefix, rule.code);
        Ok(())
    }

    pub fn rules(&self) -> impl Iterator<Item = MappingRule> + '_ {
        self.rules.iter().map(|(prefix, &code)| MappingRule {
            prefix: prefix.clone(),
            code,
        })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Subsystem of a repository-relative file path. A rule naming the file
    /// itself wins; otherwise the longest segment-aligned directory prefix.
    pub fn assign_path(&self, repo_rel_path: &str) -> SubsystemCode {
        if let Some(&code) = self.rules.get(repo_rel_path) {
            return code;
        }
        let mut dir = paths::parent(repo_rel_path);
        while !dir.is_empty() {
            if let Some(&code) = self.rules.get(dir) {
                return code;
            }
            dir = paths::parent(dir);
        }
        SubsystemCode::UNK
    }
}

/// Parses a mapping CSV: header `path,subsystem`, one rule per row, `#`
/// comment lines and blank lines ignored.
pub fn load_mapping(csv_text: &str) -> Result<MappingTable> {
    load_mapping_named(csv_text, "<mapping>")
}

pub fn load_mapping_named(csv_text: &str, origin: &str) -> Result<MappingTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());

    let mut table = MappingTable::default();
    let mut seen_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(origin, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::parse(
                origin,
                line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        if !seen_header {
            seen_header = true;
            if record[0].eq_ignore_ascii_case("path") && record[1].eq_ignore_ascii_case("subsystem") {
                continue;
            }
            return Err(Error::parse(origin, line, "missing header row `path,subsystem`"));
        }
        let code: SubsystemCode = record[1]
            .parse()
            .map_err(|m: String| Error::parse(origin, line, m))?;
        table
            .insert(MappingRule {
                prefix: record[0].to_string(),
                code,
            })
            .map_err(|m| Error::parse(origin, line, m))?;
    }
    Ok(table)
}

pub fn assign(file: &SourceFile, table: &MappingTable) -> SubsystemCode {
    table.assign_path(&file.repo_rel_path)
}

/// Absolute file path to subsystem.
pub type Assignments = BTreeMap<String, SubsystemCode>;

pub fn assign_all(files: &[SourceFile], table: &MappingTable) -> Assignments {
    files
        .iter()
        .map(|f| (f.abs_path.clone(), assign(f, table)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionSummary {
    /// File count for each of the sixteen codes, zeros included.
    pub counts: BTreeMap<SubsystemCode, usize>,
    pub detected: BTreeSet<SubsystemCode>,
    pub undetected: BTreeSet<SubsystemCode>,
    /// Repository-relative paths of unmapped files.
    pub unmapped: Vec<String>,
}

pub fn detection_report(files: &[SourceFile], table: &MappingTable) -> DetectionSummary {
    let mut counts: BTreeMap<SubsystemCode, usize> =
        SubsystemCode::ALL.iter().map(|&c| (c, 0)).collect();
    let mut unmapped = Vec::new();
    for file in files {
        match assign(file, table) {
            SubsystemCode::UNK => unmapped.push(file.repo_rel_path.clone()),
            code => *counts.entry(code).or_default() += 1,
        }
    }
    let detected = counts.iter().filter(|(_, &n)| n > 0).map(|(&c, _)| c).collect();
    let undetected = counts.iter().filter(|(_, &n)| n == 0).map(|(&c, _)| c).collect();
    DetectionSummary {
        counts,
        detected,
        undetected,
        unmapped,
    }
}

impl DetectionSummary {
    /// Plain-text summary: one `code<TAB>files` row per subsystem, then the
    /// unmapped files.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "detected\t{}\nundetected\t{}\n",
            self.detected.len(),
            self.undetected.len()
        );
        for (code, n) in &self.counts {
            out.push_str(&format!("{code}\t{n}\n"));
        }
        out.push_str(&format!("UNK\t{}\n", self.unmapped.len()));
        for path in &self.unmapped {
            out.push_str(&format!("#unmapped\t{path}\n"));
        }
        out
    }
}
