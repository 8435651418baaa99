use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use enginemap::export::{emit_arch_map, emit_heatmap_svg, read_file_dot, LayoutSpec};
use enginemap::formats;
use enginemap::mapping::{self, SubsystemCode};
use enginemap::metrics::{self, CouplingHeatmap};
use enginemap::pipeline::{self, PipelineConfig};
use enginemap::resolver::{self, CorpusIndex, ExternalHeaderPolicy, SearchPathSet};
use enginemap::scanner::{self, CorpusConfig};
use enginemap::ArchModel;

/// Subsystem-level architecture recovery for C/C++ code bases.
#[derive(Parser)]
#[command(name = "enginemap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate source files and extract #include directives.
    Scan(ScanArgs),
    /// Resolve scanned directives to corpus files.
    Resolve(ResolveArgs),
    /// Run the full pipeline for one engine.
    Analyze(AnalyzeArgs),
    /// Sum coupling matrices of several engines into a heatmap.
    Aggregate(AggregateArgs),
    /// Render an architecture map or heatmap from saved data.
    Render(RenderArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    root: PathBuf,
    /// Glob of files or directories to skip; repeatable.
    #[arg(long)]
    exclude: Vec<String>,
    /// Comma-separated extensions to scan instead of the defaults.
    #[arg(long, value_delimiter = ',')]
    ext: Option<Vec<String>>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ResolveArgs {
    #[arg(long)]
    directives: PathBuf,
    #[arg(long = "search-path")]
    search_paths: Vec<PathBuf>,
    #[arg(long)]
    policy: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    case_insensitive: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Engine config file; flags override its keys.
    config: Option<PathBuf>,
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    root: Option<PathBuf>,
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Replaces the config's search paths; repeatable.
    #[arg(long = "search-path")]
    search_paths: Vec<PathBuf>,
    #[arg(long)]
    policy: Option<PathBuf>,
    #[arg(long)]
    include_unk: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    exclude: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    ext: Option<Vec<String>>,
    #[arg(long)]
    case_insensitive: bool,
    /// Comma-separated centre codes for the map.
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<SubsystemCode>>,
}

#[derive(Args)]
struct AggregateArgs {
    /// `<engine>.model.json` files.
    #[arg(required = true)]
    models: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rank on off-diagonal cells only.
    #[arg(long)]
    exclude_diagonal: bool,
    /// Also re-render each engine's map with the cross-engine centre.
    #[arg(long)]
    maps: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["model", "dot", "heatmap"]))]
struct RenderArgs {
    /// Saved `<engine>.model.json`.
    #[arg(long)]
    model: Option<PathBuf>,
    /// File-level include graph in DOT; needs --mapping, --root, --engine.
    #[arg(long, requires_all = ["mapping", "root", "engine"])]
    dot: Option<PathBuf>,
    /// Saved heatmap.csv.
    #[arg(long)]
    heatmap: Option<PathBuf>,
    #[arg(long)]
    mapping: Option<PathBuf>,
    #[arg(long)]
    root: Option<PathBuf>,
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    include_unk: bool,
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<SubsystemCode>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(args) => scan(args),
        Command::Resolve(args) => resolve(args),
        Command::Analyze(args) => analyze(args),
        Command::Aggregate(args) => aggregate(args),
        Command::Render(args) => render(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).with_context(|| format!("resolving {}", path.display()))
}

fn scan(args: ScanArgs) -> Result<u8> {
    let mut config = CorpusConfig::new(&args.root);
    if let Some(ext) = &args.ext {
        config.restrict_extensions(ext);
    }
    config.exclude_globs = args.exclude;
    let output = scanner::scan_corpus(&config)?;
    for warning in &output.corpus.warnings {
        eprintln!("warning: {warning}");
    }
    write(
        &args.out,
        &formats::write_directives(&output.corpus.root, &output.corpus.files, &output.directives),
    )?;
    eprintln!(
        "{} files, {} directives, {} malformed",
        output.corpus.files.len(),
        output.directives.len(),
        output.malformed_count()
    );
    Ok(0)
}

fn resolve(args: ResolveArgs) -> Result<u8> {
    let origin = args.directives.display().to_string();
    let parsed = formats::read_directives(&read(&args.directives)?, &origin)?;
    let files = if parsed.files.is_empty() {
        scanner::walk_corpus(&CorpusConfig::new(&parsed.root))?.files
    } else {
        parsed.files
    };
    let search_paths = SearchPathSet::new(
        args.search_paths
            .iter()
            .map(|p| absolute(p))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let policy = match &args.policy {
        Some(path) => ExternalHeaderPolicy::parse(&read(path)?, &path.display().to_string())?,
        None => ExternalHeaderPolicy::default(),
    };
    let mut index = CorpusIndex::new(parsed.root.clone(), &files);
    if args.case_insensitive {
        index = index.case_insensitive();
    }
    let resolution = resolver::resolve_all(&parsed.directives, &search_paths, &policy, &index);
    write(&args.out, &formats::write_edges(&parsed.root, &resolution.edges))?;
    write(&args.report, &resolution.report.to_text())?;
    eprintln!(
        "{} resolved, {} external, {} unresolved ({} distinct)",
        resolution.resolved_count(),
        resolution.external_count,
        resolution.unresolved_count(),
        resolution.report.len()
    );
    Ok(if resolution.report.is_empty() { 0 } else { 2 })
}

fn analyze(args: AnalyzeArgs) -> Result<u8> {
    let mut config = match &args.config {
        Some(path) => PipelineConfig::load(path)?,
        None => {
            let (Some(engine), Some(root), Some(mapping)) = (&args.engine, &args.root, &args.mapping) else {
                bail!("without a config file, --engine, --root and --mapping are required");
            };
            PipelineConfig::new(engine, root, mapping)
        }
    };
    if let Some(engine) = args.engine {
        config.engine = engine;
    }
    if let Some(root) = args.root {
        config.root = root;
    }
    if let Some(mapping) = args.mapping {
        config.mapping = mapping;
    }
    if !args.search_paths.is_empty() {
        config.search_paths = args.search_paths;
    }
    if args.policy.is_some() {
        config.policy = args.policy;
    }
    if args.out.is_some() {
        config.out_dir = args.out;
    }
    if !args.exclude.is_empty() {
        config.exclude = args.exclude;
    }
    if args.ext.is_some() {
        config.extensions = args.ext;
    }
    if args.center.is_some() {
        config.center = args.center;
    }
    config.include_unk |= args.include_unk;
    config.case_insensitive |= args.case_insensitive;

    let bundle = pipeline::run_pipeline(&config)?;
    for warning in &bundle.scan.corpus.warnings {
        eprintln!("warning: {warning}");
    }
    eprint!("{}", bundle.summary_text());
    eprintln!("outputs in {}", bundle.out_dir.display());
    Ok(bundle.exit_code() as u8)
}

fn load_model(path: &Path) -> Result<ArchModel> {
    ArchModel::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn aggregate(args: AggregateArgs) -> Result<u8> {
    let models = args
        .models
        .iter()
        .map(|p| load_model(p))
        .collect::<Result<Vec<_>>>()?;
    let output = pipeline::aggregate(&models, args.exclude_diagonal)?;
    let out_dir = args
        .out
        .unwrap_or_else(|| pipeline::default_output_root().join("aggregate"));
    pipeline::write_aggregate(&output, &models, &out_dir, args.maps)?;
    eprintln!(
        "aggregated {} engines into {}; centre {:?}",
        models.len(),
        out_dir.display(),
        output.rankings.center().iter().map(|c| c.as_str()).collect::<Vec<_>>()
    );
    Ok(0)
}

fn render(args: RenderArgs) -> Result<u8> {
    if let Some(path) = &args.heatmap {
        let heatmap = CouplingHeatmap::from_csv(&read(path)?, Vec::new())
            .with_context(|| format!("parsing {}", path.display()))?;
        let out_dir = args.out.unwrap_or_else(pipeline::default_output_root);
        write(&out_dir.join("heatmap.svg"), &emit_heatmap_svg(&heatmap))?;
        return Ok(0);
    }

    let (model, from_dot) = match (&args.model, &args.dot) {
        (Some(path), _) => (load_model(path)?, false),
        (None, Some(dot)) => {
            let engine = args.engine.as_deref().unwrap_or_default();
            pipeline::validate_engine_id(engine)?;
            let mapping_path = args.mapping.as_deref().expect("required by clap");
            let table = mapping::load_mapping_named(&read(mapping_path)?, &mapping_path.display().to_string())?;
            let graph = read_file_dot(&read(dot)?).with_context(|| format!("parsing {}", dot.display()))?;
            let root = absolute(args.root.as_deref().expect("required by clap"))?;
            let root = enginemap::paths::normalize_abs(&root).context("corpus root is not valid UTF-8")?;
            (pipeline::lift_file_graph(engine, &graph, &root, &table, args.include_unk)?, true)
        }
        _ => unreachable!("clap requires one input"),
    };
    pipeline::validate_engine_id(&model.engine)?;

    let layout = match &args.center {
        Some(center) => LayoutSpec::new(center, &model.detected())?,
        None => {
            let heatmap = metrics::aggregate_heatmap(&[metrics::coupling_matrix(&model)])?;
            LayoutSpec::for_model(&model, &metrics::rank_frequencies(&heatmap, false))
        }
    };
    let (dot, svg) = emit_arch_map(&model, &layout)?;
    let out_dir = args
        .out
        .unwrap_or_else(|| pipeline::default_output_root().join(&model.engine));
    let engine = &model.engine;
    write(&out_dir.join(format!("{engine}.arch.dot")), &dot)?;
    write(&out_dir.join(format!("{engine}.arch.svg")), &svg)?;
    if from_dot {
        write(&out_dir.join(format!("{engine}.model.json")), &model.to_json())?;
        write(&out_dir.join(format!("{engine}.degrees.csv")), &metrics::degrees_csv(&metrics::degrees(&model)))?;
        write(&out_dir.join(format!("{engine}.matrix.csv")), &metrics::coupling_matrix(&model).to_csv())?;
    }
    Ok(0)
}
