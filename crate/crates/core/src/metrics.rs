//! Degree statistics, coupling matrices, the cross-engine heatmap and
//! include-frequency rankings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mapping::SubsystemCode;
use crate::model::ArchModel;
use crate::paths;
use crate::scanner::{FileKind, SourceFile};

const N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRecord {
    pub code: SubsystemCode,
    /// Distinct other subsystems that include this one.
    pub in_degree: usize,
    /// Distinct other subsystems this one includes.
    pub out_degree: usize,
}

/// Degrees of every model node, self-loops excluded, sorted by in-degree
/// (descending) and then code.
pub fn degrees(model: &ArchModel) -> Vec<DegreeRecord> {
    let mut records: Vec<DegreeRecord> = model
        .nodes
        .keys()
        .map(|&code| DegreeRecord {
            code,
            in_degree: model.edges.keys().filter(|&&(a, b)| b == code && a != code).count(),
            out_degree: model.edges.keys().filter(|&&(a, b)| a == code && b != code).count(),
        })
        .collect();
    records.sort_by(|x, y| y.in_degree.cmp(&x.in_degree).then(x.code.cmp(&y.code)));
    records
}

pub fn degrees_csv(records: &[DegreeRecord]) -> String {
    let mut out = String::from("code,in,out\n");
    for r in records {
        let _ = writeln!(out, "{},{},{}", r.code, r.in_degree, r.out_degree);
    }
    out
}

/// Binary 16x16 matrix, rows = includer, columns = included, axes in
/// [`SubsystemCode::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMatrix {
    pub engine: String,
    pub cells: [[u8; N]; N],
}

impl CouplingMatrix {
    pub fn zero(engine: impl Into<String>) -> Self {
        CouplingMatrix {
            engine: engine.into(),
            cells: [[0; N]; N],
        }
    }

    pub fn get(&self, from: SubsystemCode, to: SubsystemCode) -> u8 {
        match (from.index(), to.index()) {
            (Some(r), Some(c)) => self.cells[r][c],
            _ => 0,
        }
    }

    pub fn to_csv(&self) -> String {
        grid_csv(|r, c| self.cells[r][c] as u32)
    }
}

pub fn coupling_matrix(model: &ArchModel) -> CouplingMatrix {
    let mut matrix = CouplingMatrix::zero(model.engine.clone());
    for (&(from, to), &weight) in &model.edges {
        if let (Some(r), Some(c)) = (from.index(), to.index()) {
            if weight > 0 {
                matrix.cells[r][c] = 1;
            }
        }
    }
    matrix
}

/// Element-wise sum of coupling matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingHeatmap {
    /// Contributing engines, sorted.
    pub engines: Vec<String>,
    pub cells: [[u32; N]; N],
}

impl CouplingHeatmap {
    pub fn get(&self, from: SubsystemCode, to: SubsystemCode) -> u32 {
        match (from.index(), to.index()) {
            (Some(r), Some(c)) => self.cells[r][c],
            _ => 0,
        }
    }

    pub fn max(&self) -> u32 {
        self.cells.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.cells.iter().flatten().sum()
    }

    pub fn to_csv(&self) -> String {
        grid_csv(|r, c| self.cells[r][c])
    }

    /// Parses the CSV written by [`CouplingHeatmap::to_csv`]. The header row
    /// must list the codes in axis order.
    pub fn from_csv(text: &str, engines: Vec<String>) -> Result<Self> {
        let origin = "<heatmap>";
        let cells = parse_grid(text, origin)?;
        let mut engines = engines;
        engines.sort();
        Ok(CouplingHeatmap { engines, cells })
    }
}

fn grid_csv(value: impl Fn(usize, usize) -> u32) -> String {
    let mut out = String::from("code");
    for code in SubsystemCode::ALL {
        let _ = write!(out, ",{code}");
    }
    out.push('\n');
    for (r, code) in SubsystemCode::ALL.iter().enumerate() {
        out.push_str(code.as_str());
        for c in 0..N {
            let _ = write!(out, ",{}", value(r, c));
        }
        out.push('\n');
    }
    out
}

fn parse_grid(text: &str, origin: &str) -> Result<[[u32; N]; N]> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "empty matrix"))?;
    let expected: Vec<&str> = std::iter::once("code")
        .chain(SubsystemCode::ALL.iter().map(|c| c.as_str()))
        .collect();
    let got: Vec<&str> = header.split(',').map(str::trim).collect();
    if got != expected {
        return Err(Error::parse(origin, 1, "header must be `code` followed by the 16 codes in axis order"));
    }
    let mut cells = [[0u32; N]; N];
    let mut rows = 0;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if rows == N {
            return Err(Error::parse(origin, line_no, "more than 16 rows"));
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != N + 1 {
            return Err(Error::parse(origin, line_no, format!("expected {} fields", N + 1)));
        }
        if fields[0] != SubsystemCode::ALL[rows].as_str() {
            return Err(Error::parse(
                origin,
                line_no,
                format!("expected row {}", SubsystemCode::ALL[rows]),
            ));
        }
        for (c, field) in fields[1..].iter().enumerate() {
            cells[rows][c] = field
                .parse()
                .map_err(|_| Error::parse(origin, line_no, format!("invalid cell value {field:?}")))?;
        }
        rows += 1;
    }
    if rows != N {
        return Err(Error::parse(origin, text.lines().count(), "fewer than 16 rows"));
    }
    Ok(cells)
}

/// Parses a single-engine matrix CSV, requiring binary cells.
pub fn matrix_from_csv(text: &str, engine: impl Into<String>) -> Result<CouplingMatrix> {
    let grid = parse_grid(text, "<matrix>")?;
    let mut matrix = CouplingMatrix::zero(engine);
    for (r, row) in grid.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            matrix.cells[r][c] = match v {
                0 => 0,
                1 => 1,
                v => {
                    return Err(Error::parse("<matrix>", r + 2, format!("non-binary cell {v}")));
                }
            };
        }
    }
    Ok(matrix)
}

pub fn aggregate_heatmap(matrices: &[CouplingMatrix]) -> Result<CouplingHeatmap> {
    if matrices.is_empty() {
        return Err(Error::Aggregate("at least one coupling matrix is required".into()));
    }
    let mut cells = [[0u32; N]; N];
    for m in matrices {
        for (row, src) in cells.iter_mut().zip(&m.cells) {
            for (cell, &v) in row.iter_mut().zip(src) {
                *cell += v as u32;
            }
        }
    }
    let mut engines: Vec<String> = matrices.iter().map(|m| m.engine.clone()).collect();
    engines.sort();
    Ok(CouplingHeatmap { engines, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankEntry {
    pub code: SubsystemCode,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rankings {
    /// Column sums, descending.
    pub included_by: Vec<RankEntry>,
    /// Row sums, descending.
    pub includes: Vec<RankEntry>,
}

impl Rankings {
    /// The four most included subsystems with a non-zero column sum; these
    /// are drawn in the centre of the architectural map.
    pub fn center(&self) -> Vec<SubsystemCode> {
        self.included_by
            .iter()
            .filter(|e| e.value > 0)
            .take(4)
            .map(|e| e.code)
            .collect()
    }

    pub fn included_by_csv(&self) -> String {
        ranking_csv(&self.included_by)
    }

    pub fn includes_csv(&self) -> String {
        ranking_csv(&self.includes)
    }
}

fn ranking_csv(entries: &[RankEntry]) -> String {
    let mut out = String::from("rank,code,value\n");
    for (i, e) in entries.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, e.code, e.value);
    }
    out
}

/// Row and column sums of the heatmap over all sixteen codes. The diagonal
/// counts toward both unless `exclude_diagonal` is set.
pub fn rank_frequencies(heatmap: &CouplingHeatmap, exclude_diagonal: bool) -> Rankings {
    let cell = |r: usize, c: usize| {
        if exclude_diagonal && r == c {
            0
        } else {
            heatmap.cells[r][c]
        }
    };
    let rank = |sum: &dyn Fn(usize) -> u32| {
        let mut entries: Vec<RankEntry> = SubsystemCode::ALL
            .iter()
            .enumerate()
            .map(|(i, &code)| RankEntry { code, value: sum(i) })
            .collect();
        entries.sort_by(|a, b| b.value.cmp(&a.value).then(a.code.cmp(&b.code)));
        entries
    };
    Rankings {
        included_by: rank(&|c| (0..N).map(|r| cell(r, c)).sum()),
        includes: rank(&|r| (0..N).map(|c| cell(r, c)).sum()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusStats {
    pub header_count: usize,
    pub folder_count: usize,
}

/// Header files and distinct directories holding at least one scanned file.
pub fn corpus_stats(files: &[SourceFile]) -> CorpusStats {
    let folders: BTreeSet<&str> = files.iter().map(|f| paths::parent(&f.repo_rel_path)).collect();
    CorpusStats {
        header_count: files.iter().filter(|f| f.kind == FileKind::Header).count(),
        folder_count: folders.len(),
    }
}
