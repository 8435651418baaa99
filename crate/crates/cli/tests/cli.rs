use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn enginemap() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_enginemap"));
    cmd.env_remove("ENGINEMAP_OUT");
    cmd
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn conf(engine: &str) -> PathBuf {
    fixtures().join("engines").join(engine).join("engine.conf")
}

fn body(tsv: &str) -> Vec<&str> {
    tsv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn scan_writes_hand_enumerated_directives() {
    let tmp = tempfile::tempdir().unwrap();
    let out_file = tmp.path().join("d.tsv");
    let out = enginemap()
        .args(["scan", "--root"])
        .arg(fixtures().join("scan/corpus"))
        .arg("--out")
        .arg(&out_file)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("30 files, 46 directives, 5 malformed"));
    let got = fs::read_to_string(&out_file).unwrap();
    let expected = fs::read_to_string(fixtures().join("scan/expected_directives.tsv")).unwrap();
    assert_eq!(body(&got), body(&expected));
    let files: Vec<String> = got
        .lines()
        .filter_map(|l| l.strip_prefix("#!file\t"))
        .map(str::to_string)
        .collect();
    let expected_files = fs::read_to_string(fixtures().join("scan/expected_files.tsv")).unwrap();
    assert_eq!(files, body(&expected_files));
}

#[test]
fn scan_ext_and_exclude() {
    let tmp = tempfile::tempdir().unwrap();
    let out_file = tmp.path().join("d.tsv");
    let out = enginemap()
        .args(["scan", "--ext", "h", "--exclude", "macros", "--root"])
        .arg(fixtures().join("scan/corpus"))
        .arg("--out")
        .arg(&out_file)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let got = fs::read_to_string(&out_file).unwrap();
    for line in got.lines().filter_map(|l| l.strip_prefix("#!file\t")) {
        let path = line.split('\t').next().unwrap();
        assert!(path.ends_with(".h"), "{path}");
        assert!(!path.starts_with("macros/"), "{path}");
    }
}

#[test]
fn scan_missing_root_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = enginemap()
        .args(["scan", "--root"])
        .arg(tmp.path().join("absent"))
        .arg("--out")
        .arg(tmp.path().join("d.tsv"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error: "));
    assert!(!tmp.path().join("d.tsv").exists());
}

#[test]
fn scan_then_resolve_matches_analyze_edges() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let root = fixtures().join("engines/alpha/src");
    let out = enginemap().args(["scan", "--root"]).arg(&root).arg("--out").arg(t.join("d.tsv")).output().unwrap();
    assert_eq!(code(&out), 0);
    let out = enginemap()
        .args(["resolve", "--directives"])
        .arg(t.join("d.tsv"))
        .arg("--search-path")
        .arg(&root)
        .arg("--policy")
        .arg(fixtures().join("engines/alpha/policy.txt"))
        .arg("--out")
        .arg(t.join("e.tsv"))
        .arg("--report")
        .arg(t.join("r.tsv"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).starts_with("32 resolved, 9 external, 0 unresolved"));
    assert_eq!(fs::read_to_string(t.join("r.tsv")).unwrap(), "");

    let out = enginemap().arg("analyze").arg(conf("alpha")).arg("--out").arg(t.join("a")).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read_to_string(t.join("e.tsv")).unwrap(),
        fs::read_to_string(t.join("a/alpha.edges.tsv")).unwrap()
    );
}

#[test]
fn resolve_without_search_path_reports_and_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let root = fixtures().join("retry/src");
    enginemap().args(["scan", "--root"]).arg(&root).arg("--out").arg(t.join("d.tsv")).output().unwrap();
    let resolve = |extra: &[PathBuf]| {
        let mut cmd = enginemap();
        cmd.args(["resolve", "--directives"])
            .arg(t.join("d.tsv"))
            .arg("--out")
            .arg(t.join("e.tsv"))
            .arg("--report")
            .arg(t.join("r.tsv"));
        for p in extra {
            cmd.arg("--search-path").arg(p);
        }
        cmd.output().unwrap()
    };
    assert_eq!(code(&resolve(&[])), 2);
    assert_eq!(fs::read_to_string(t.join("r.tsv")).unwrap(), "1\tengine/api.h\tapp/main.cpp\n");
    assert_eq!(code(&resolve(&[root.join("include")])), 0);
    assert_eq!(fs::read_to_string(t.join("r.tsv")).unwrap(), "");
}

#[test]
fn resolve_walks_root_when_directives_have_no_inventory() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let root = fixtures().join("retry/src");
    let root_text = enginemap::paths::normalize_abs(&std::path::absolute(&root).unwrap()).unwrap();
    fs::write(t.join("d.tsv"), format!("#!root\t{root_text}\napp/main.cpp\tquoted\tutil.h\t1\n")).unwrap();
    let out = enginemap()
        .args(["resolve", "--directives"])
        .arg(t.join("d.tsv"))
        .arg("--out")
        .arg(t.join("e.tsv"))
        .arg("--report")
        .arg(t.join("r.tsv"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        body(&fs::read_to_string(t.join("e.tsv")).unwrap()),
        ["app/main.cpp\tapp/util.h"]
    );
}

#[test]
fn analyze_flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let out = enginemap()
        .arg("analyze")
        .arg(conf("alpha"))
        .args(["--engine", "renamed", "--center", "COR,PLA"])
        .arg("--out")
        .arg(t)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(t.join("renamed.model.json").is_file());
    assert!(stderr(&out).contains("engine\trenamed\n"));
    assert!(stderr(&out).contains("inter_subsystem_edges\t14\n"));

    // replacing the search path leaves cross-folder includes unresolved
    let out = enginemap()
        .arg("analyze")
        .arg(conf("alpha"))
        .arg("--search-path")
        .arg(fixtures().join("engines/alpha/src/ui"))
        .arg("--out")
        .arg(t)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(!fs::read_to_string(t.join("alpha.unresolved.tsv")).unwrap().is_empty());
}

#[test]
fn analyze_without_config_needs_engine_root_mapping() {
    let tmp = tempfile::tempdir().unwrap();
    let out = enginemap().arg("analyze").arg("--engine").arg("x").output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--mapping"));

    let dir = fixtures().join("engines/gamma");
    let out = enginemap()
        .args(["analyze", "--engine", "g"])
        .arg("--root")
        .arg(&dir)
        .arg("--mapping")
        .arg(dir.join("mapping.csv"))
        .arg("--search-path")
        .arg(&dir)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("subsystem_edges\t19\n"));
}

#[test]
fn analyze_errors_leave_no_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = enginemap()
        .arg("analyze")
        .arg(conf("alpha"))
        .arg("--mapping")
        .arg(tmp.path().join("missing.csv"))
        .arg("--out")
        .arg(tmp.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error: config:"), "{}", stderr(&out));
    assert!(!tmp.path().join("o").exists() || fs::read_dir(tmp.path().join("o")).unwrap().next().is_none());

    let out = enginemap()
        .arg("analyze")
        .arg(conf("alpha"))
        .args(["--center", "VFX"])
        .arg("--out")
        .arg(tmp.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error: export:"), "{}", stderr(&out));
    assert!(!tmp.path().join("o/alpha.model.json").exists());
}

#[test]
fn output_root_comes_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = enginemap()
        .arg("analyze")
        .arg(conf("beta"))
        .env("ENGINEMAP_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(tmp.path().join("beta/beta.arch.svg").is_file());

    let out = enginemap()
        .arg("aggregate")
        .arg(tmp.path().join("beta/beta.model.json"))
        .env("ENGINEMAP_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(tmp.path().join("aggregate/heatmap.csv").is_file());
}

#[test]
fn aggregate_and_render() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    for e in ["alpha", "beta", "gamma"] {
        let out = enginemap().arg("analyze").arg(conf(e)).arg("--out").arg(t).output().unwrap();
        assert_eq!(code(&out), 0);
    }
    let models: Vec<PathBuf> = ["gamma", "alpha", "beta"].iter().map(|e| t.join(format!("{e}.model.json"))).collect();
    let out = enginemap()
        .arg("aggregate")
        .args(&models)
        .arg("--maps")
        .arg("--out")
        .arg(t.join("agg"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains(r#"centre ["COR", "PLA", "RES", "SGC"]"#), "{}", stderr(&out));
    for f in ["heatmap.csv", "heatmap.svg", "rankings.included_by.csv", "rankings.includes.csv", "gamma.arch.svg"] {
        assert!(t.join("agg").join(f).is_file(), "{f}");
    }
    assert_eq!(
        fs::read_to_string(t.join("agg/rankings.included_by.csv")).unwrap().lines().nth(1),
        Some("1,COR,16")
    );

    let dup = enginemap().arg("aggregate").arg(&models[0]).arg(&models[0]).output().unwrap();
    assert_eq!(code(&dup), 1);

    let out = enginemap()
        .arg("render")
        .arg("--heatmap")
        .arg(t.join("agg/heatmap.csv"))
        .arg("--out")
        .arg(t.join("hm"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(fs::read_to_string(t.join("hm/heatmap.svg")).unwrap().contains("<svg"));

    let out = enginemap()
        .arg("render")
        .arg("--model")
        .arg(&models[1])
        .args(["--center", "COR"])
        .arg("--out")
        .arg(t.join("r"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(t.join("r/alpha.arch.dot").is_file() && t.join("r/alpha.arch.svg").is_file());
}

#[test]
fn render_from_include_graph_dot() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let out = enginemap().arg("analyze").arg(conf("alpha")).arg("--out").arg(t.join("a")).output().unwrap();
    assert_eq!(code(&out), 0);
    let out = enginemap()
        .args(["render", "--engine", "alpha", "--dot"])
        .arg(fixtures().join("dot/alpha.include.dot"))
        .arg("--root")
        .arg(fixtures().join("engines/alpha/src"))
        .arg("--mapping")
        .arg(fixtures().join("engines/alpha/mapping.csv"))
        .arg("--out")
        .arg(t.join("d"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in ["model.json", "degrees.csv", "matrix.csv", "arch.dot", "arch.svg"] {
        assert_eq!(
            fs::read(t.join("d").join(format!("alpha.{f}"))).unwrap(),
            fs::read(t.join("a").join(format!("alpha.{f}"))).unwrap(),
            "{f}"
        );
    }

    let out = enginemap()
        .args(["render", "--dot"])
        .arg(fixtures().join("dot/alpha.include.dot"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "clap usage error");
}
