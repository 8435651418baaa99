//! End-to-end analysis of one engine and cross-engine aggregation.
//!
//! `run_pipeline` goes scan → resolve → assign → build → lift → metrics →
//! export and writes every artifact into the output directory. Outputs are
//! staged in a hidden directory first so a failed run leaves nothing behind.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::export::{emit_arch_map, emit_file_dot, emit_heatmap_svg, LayoutSpec};
use crate::formats;
use crate::mapping::{self, DetectionSummary, MappingTable, SubsystemCode};
use crate::metrics::{self, CorpusStats, CouplingHeatmap, CouplingMatrix, DegreeRecord, Rankings};
use crate::model::{self, ArchModel, FileGraph};
use crate::resolver::{self, CorpusIndex, ExternalHeaderPolicy, Resolution, SearchPathSet};
use crate::scanner::{self, CorpusConfig, IncludeDirective, ScanOutput};

/// Environment variable naming the default output root. Each engine writes
/// to `<root>/<engine>` unless an output directory is given.
pub const OUTPUT_ROOT_ENV: &str = "ENGINEMAP_OUT";
const FALLBACK_OUTPUT_ROOT: &str = "enginemap-out";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub engine: String,
    pub root: PathBuf,
    pub mapping: PathBuf,
    pub search_paths: Vec<PathBuf>,
    pub policy: Option<PathBuf>,
    pub include_unk: bool,
    pub out_dir: Option<PathBuf>,
    pub exclude: Vec<String>,
    /// Restricts scanned extensions; `None` keeps the defaults.
    pub extensions: Option<Vec<String>>,
    pub case_insensitive: bool,
    /// Explicit centre codes for the map; `None` uses the ranking.
    pub center: Option<Vec<SubsystemCode>>,
}

impl PipelineConfig {
    pub fn new(engine: impl Into<String>, root: impl Into<PathBuf>, mapping: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            engine: engine.into(),
            root: root.into(),
            mapping: mapping.into(),
            search_paths: Vec::new(),
            policy: None,
            include_unk: false,
            out_dir: None,
            exclude: Vec::new(),
            extensions: None,
            case_insensitive: false,
            center: None,
        }
    }

    /// Parses a flat `key = value` config document. Relative paths are taken
    /// relative to `base_dir`. Repeatable keys: `search_path`, `exclude`.
    pub fn parse(text: &str, base_dir: &Path, origin: &str) -> Result<Self> {
        let mut engine = None;
        let mut root = None;
        let mut mapping = None;
        let mut cfg = PipelineConfig::new("", "", "");
        let path = |v: &str| base_dir.join(v);

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(origin, line_no, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(Error::parse(origin, line_no, format!("empty value for {key}")));
            }
            let flag = |v: &str| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(Error::parse(origin, line_no, format!("invalid boolean {v:?}"))),
            };
            match key {
                "engine" => engine = Some(value.to_string()),
                "root" => root = Some(path(value)),
                "mapping" => mapping = Some(path(value)),
                "search_path" => cfg.search_paths.push(path(value)),
                "policy" => cfg.policy = Some(path(value)),
                "include_unk" => cfg.include_unk = flag(value)?,
                "out" => cfg.out_dir = Some(path(value)),
                "exclude" => cfg.exclude.push(value.to_string()),
                "ext" => cfg.extensions = Some(split_list(value)),
                "case_insensitive" => cfg.case_insensitive = flag(value)?,
                "center" => {
                    cfg.center = Some(
                        split_list(value)
                            .iter()
                            .map(|c| c.parse())
                            .collect::<std::result::Result<_, String>>()
                            .map_err(|m| Error::parse(origin, line_no, m))?,
                    )
                }
                other => {
                    return Err(Error::parse(origin, line_no, format!("unknown key {other:?}")));
                }
            }
        }
        let missing = |k: &str| Error::parse(origin, 1, format!("missing required key {k:?}"));
        cfg.engine = engine.ok_or_else(|| missing("engine"))?;
        cfg.root = root.ok_or_else(|| missing("root"))?;
        cfg.mapping = mapping.ok_or_else(|| missing("mapping"))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&text, base, &path.display().to_string())
    }

    /// Output directory: explicit, else `$ENGINEMAP_OUT/<engine>`, else
    /// `enginemap-out/<engine>`.
    pub fn output_dir(&self) -> PathBuf {
        match &self.out_dir {
            Some(dir) => dir.clone(),
            None => default_output_root().join(&self.engine),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_engine_id(&self.engine)?;
        if !self.root.is_dir() {
            return Err(Error::Config(format!(
                "corpus root {} is not a directory",
                self.root.display()
            )));
        }
        if !self.mapping.is_file() {
            return Err(Error::Config(format!(
                "mapping file {} does not exist",
                self.mapping.display()
            )));
        }
        if let Some(policy) = &self.policy {
            if !policy.is_file() {
                return Err(Error::Config(format!(
                    "policy file {} does not exist",
                    policy.display()
                )));
            }
        }
        for dir in &self.search_paths {
            if !dir.is_dir() {
                return Err(Error::Config(format!(
                    "search path {} is not a directory",
                    dir.display()
                )));
            }
        }
        Ok(())
    }
}

pub fn default_output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_ROOT))
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Engine ids become file name prefixes: ASCII letters, digits, `.`, `_`
/// and `-`, not starting with `.`.
pub fn validate_engine_id(engine: &str) -> Result<()> {
    let ok = !engine.is_empty()
        && !engine.starts_with('.')
        && engine
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "engine id {engine:?} must be non-empty and use only letters, digits, '.', '_' or '-'"
        )))
    }
}

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone)]
pub struct AnalysisBundle {
    pub engine: String,
    pub scan: ScanOutput,
    pub resolution: Resolution,
    pub detection: DetectionSummary,
    pub file_graph: FileGraph,
    pub model: ArchModel,
    pub degrees: Vec<DegreeRecord>,
    pub matrix: CouplingMatrix,
    pub rankings: Rankings,
    pub layout: LayoutSpec,
    pub stats: CorpusStats,
    pub out_dir: PathBuf,
    pub outputs: Vec<PathBuf>,
}

impl AnalysisBundle {
    /// 0 when every include was resolved or external, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.resolution.report.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn directives(&self) -> &[IncludeDirective] {
        &self.scan.directives
    }

    pub fn summary_text(&self) -> String {
        let r = &self.resolution;
        let self_edges = self.file_graph.self_edges().count();
        [
            ("engine", self.engine.clone()),
            ("files", self.scan.corpus.files.len().to_string()),
            ("headers", self.stats.header_count.to_string()),
            ("folders", self.stats.folder_count.to_string()),
            ("directives", self.scan.directives.len().to_string()),
            ("malformed_directives", self.scan.malformed_count().to_string()),
            ("resolved", r.resolved_count().to_string()),
            ("external", r.external_count.to_string()),
            ("unresolved", r.unresolved_count().to_string()),
            ("unresolved_distinct", r.report.len().to_string()),
            ("file_edges", self.file_graph.edges().len().to_string()),
            ("file_self_edges", self_edges.to_string()),
            ("detected_subsystems", self.detection.detected.len().to_string()),
            ("unmapped_files", self.detection.unmapped.len().to_string()),
            ("subsystem_edges", self.model.edge_count().to_string()),
            ("inter_subsystem_edges", self.model.inter_subsystem_edge_count().to_string()),
        ]
        .iter()
        .map(|(k, v)| format!("{k}\t{v}\n"))
        .collect()
    }
}

/// Writes `files` into `out_dir` via a staging directory. On failure nothing
/// new is left in `out_dir`.
fn write_outputs(out_dir: &Path, engine: &str, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let staging = out_dir.join(format!(".staging-{engine}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&staging);
    let result = (|| {
        fs::create_dir(&staging).map_err(|e| Error::io(&staging, e))?;
        for (name, content) in files {
            let path = staging.join(name);
            fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        }
        let mut placed = Vec::new();
        for (name, _) in files {
            let target = out_dir.join(name);
            if let Err(e) = fs::rename(staging.join(name), &target) {
                for p in &placed {
                    let _ = fs::remove_file(p);
                }
                return Err(Error::io(&target, e));
            }
            placed.push(target);
        }
        Ok(placed)
    })();
    let _ = fs::remove_dir_all(&staging);
    result
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<AnalysisBundle> {
    config.validate().map_err(|e| e.in_step("config"))?;

    let mapping_text = fs::read_to_string(&config.mapping)
        .map_err(|e| Error::io(&config.mapping, e).in_step("config"))?;
    let table: MappingTable = mapping::load_mapping_named(&mapping_text, &config.mapping.display().to_string())
        .map_err(|e| e.in_step("config"))?;
    let policy = match &config.policy {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e).in_step("config"))?;
            ExternalHeaderPolicy::parse(&text, &path.display().to_string()).map_err(|e| e.in_step("config"))?
        }
        None => ExternalHeaderPolicy::default(),
    };
    let search_paths = config
        .search_paths
        .iter()
        .map(|p| absolute(p))
        .collect::<Result<Vec<_>>>()
        .and_then(SearchPathSet::new)
        .map_err(|e| e.in_step("config"))?;

    let mut corpus_config = CorpusConfig::new(&config.root);
    if let Some(exts) = &config.extensions {
        corpus_config.restrict_extensions(exts);
    }
    corpus_config.exclude_globs = config.exclude.clone();
    let scan = scanner::scan_corpus(&corpus_config).map_err(|e| e.in_step("scan"))?;
    let root = scan.corpus.root.clone();

    let mut index = CorpusIndex::new(root.clone(), &scan.corpus.files);
    if config.case_insensitive {
        index = index.case_insensitive();
    }
    let resolution = resolver::resolve_all(&scan.directives, &search_paths, &policy, &index);

    let assignments = mapping::assign_all(&scan.corpus.files, &table);
    let detection = mapping::detection_report(&scan.corpus.files, &table);

    let file_graph =
        model::build_file_graph(&scan.corpus.files, &resolution.edges).map_err(|e| e.in_step("model"))?;
    let arch = model::lift(&config.engine, &file_graph, &assignments, config.include_unk);

    let degrees = metrics::degrees(&arch);
    let matrix = metrics::coupling_matrix(&arch);
    let own_heatmap = metrics::aggregate_heatmap(std::slice::from_ref(&matrix)).map_err(|e| e.in_step("metrics"))?;
    let rankings = metrics::rank_frequencies(&own_heatmap, false);
    let stats = metrics::corpus_stats(&scan.corpus.files);

    let layout = match &config.center {
        Some(center) => LayoutSpec::new(center, &arch.detected()).map_err(|e| e.in_step("export"))?,
        None => LayoutSpec::for_model(&arch, &rankings),
    };
    let (arch_dot, arch_svg) = emit_arch_map(&arch, &layout).map_err(|e| e.in_step("export"))?;

    let engine = &config.engine;
    let mut bundle = AnalysisBundle {
        engine: engine.clone(),
        resolution,
        detection,
        model: arch,
        degrees,
        matrix,
        rankings,
        layout,
        stats,
        out_dir: config.output_dir(),
        outputs: Vec::new(),
        file_graph,
        scan,
    };

    let files = vec![
        (
            format!("{engine}.directives.tsv"),
            formats::write_directives(&root, &bundle.scan.corpus.files, &bundle.scan.directives),
        ),
        (format!("{engine}.edges.tsv"), formats::write_edges(&root, &bundle.resolution.edges)),
        (format!("{engine}.unresolved.tsv"), bundle.resolution.report.to_text()),
        (format!("{engine}.detection.tsv"), bundle.detection.to_text()),
        (format!("{engine}.files.dot"), emit_file_dot(&bundle.file_graph)),
        (format!("{engine}.model.json"), bundle.model.to_json()),
        (format!("{engine}.arch.dot"), arch_dot),
        (format!("{engine}.arch.svg"), arch_svg),
        (format!("{engine}.degrees.csv"), metrics::degrees_csv(&bundle.degrees)),
        (format!("{engine}.matrix.csv"), bundle.matrix.to_csv()),
        (format!("{engine}.summary.tsv"), bundle.summary_text()),
    ];
    bundle.outputs = write_outputs(&bundle.out_dir, engine, &files).map_err(|e| e.in_step("export"))?;
    Ok(bundle)
}

/// Lifts a file-level graph read from DOT. Node ids may be absolute paths
/// under `root` or paths relative to it.
pub fn lift_file_graph(
    engine: &str,
    graph: &FileGraph,
    root: &str,
    table: &MappingTable,
    include_unk: bool,
) -> Result<ArchModel> {
    let classifier = CorpusConfig::new(root);
    let mut rebased = FileGraph::new();
    let mut files = Vec::new();
    let mut rebase = |id: &str| -> Result<String> {
        let rel = if id.starts_with('/') {
            crate::paths::normalize_abs(Path::new(id))
                .and_then(|abs| crate::paths::strip_root(root, &abs).map(str::to_string))
        } else {
            crate::paths::normalize_rel(id)
        }
        .filter(|rel| !rel.is_empty())
        .ok_or_else(|| Error::Integrity(format!("node {id:?} is not a file under {root}")))?;
        let kind = classifier.classify(crate::paths::file_name(&rel));
        let file = scanner::SourceFile::new(root, rel, kind);
        let abs = file.abs_path.clone();
        files.push(file);
        Ok(abs)
    };
    for node in graph.nodes() {
        let abs = rebase(node)?;
        rebased.add_node(abs);
    }
    for (from, to) in graph.edges() {
        let (from, to) = (rebase(from)?, rebase(to)?);
        rebased.add_edge(from, to);
    }
    files.sort_by(|a, b| a.abs_path.cmp(&b.abs_path));
    files.dedup_by(|a, b| a.abs_path == b.abs_path);
    let assignments = mapping::assign_all(&files, table);
    Ok(model::lift(engine, &rebased, &assignments, include_unk))
}

#[derive(Debug, Clone)]
pub struct AggregateOutput {
    pub matrices: Vec<CouplingMatrix>,
    pub heatmap: CouplingHeatmap,
    pub rankings: Rankings,
}

/// Sums the coupling matrices of several engines and ranks subsystems.
/// Independent of input order; engine ids must be unique.
pub fn aggregate(models: &[ArchModel], exclude_diagonal: bool) -> Result<AggregateOutput> {
    let mut seen = BTreeSet::new();
    for m in models {
        validate_engine_id(&m.engine)?;
        if !seen.insert(m.engine.as_str()) {
            return Err(Error::Aggregate(format!("duplicate engine id {:?}", m.engine)));
        }
    }
    let mut matrices: Vec<CouplingMatrix> = models.iter().map(metrics::coupling_matrix).collect();
    matrices.sort_by(|a, b| a.engine.cmp(&b.engine));
    let heatmap = metrics::aggregate_heatmap(&matrices)?;
    let rankings = metrics::rank_frequencies(&heatmap, exclude_diagonal);
    Ok(AggregateOutput {
        matrices,
        heatmap,
        rankings,
    })
}

/// Writes `heatmap.csv`, `heatmap.svg` and both ranking CSVs; with
/// `maps`, also re-renders each engine's map with the cross-engine centre.
pub fn write_aggregate(
    output: &AggregateOutput,
    models: &[ArchModel],
    out_dir: &Path,
    maps: bool,
) -> Result<Vec<PathBuf>> {
    let mut files = vec![
        ("heatmap.csv".to_string(), output.heatmap.to_csv()),
        ("heatmap.svg".to_string(), emit_heatmap_svg(&output.heatmap)),
        ("rankings.included_by.csv".to_string(), output.rankings.included_by_csv()),
        ("rankings.includes.csv".to_string(), output.rankings.includes_csv()),
    ];
    if maps {
        for model in models {
            let layout = LayoutSpec::for_model(model, &output.rankings);
            let (dot, svg) = emit_arch_map(model, &layout)?;
            files.push((format!("{}.arch.dot", model.engine), dot));
            files.push((format!("{}.arch.svg", model.engine), svg));
        }
    }
    write_outputs(out_dir, "aggregate", &files)
}
