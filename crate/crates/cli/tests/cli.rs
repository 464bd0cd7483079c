use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use selfdual_core::codes::Family;
use selfdual_core::io::{self, SpecFile};
use selfdual_core::sim::{self, NoiseKind, NoiseModel};
use selfdual_core::tables;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selfdual"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_spec(dir: &Path, name: &str, file: &SpecFile) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(file).unwrap()).unwrap();
    p
}

fn entry_spec(dir: &Path, family: Family, n: usize, k: usize, d: usize) -> PathBuf {
    let spec = tables::find(family, n, k, d).unwrap().spec().unwrap();
    write_spec(dir, &format!("{family}-{n}-{k}.json"), &SpecFile::from_spec(&spec))
}

fn bicycle36(dir: &Path) -> PathBuf {
    entry_spec(dir, Family::Bicycle, 36, 4, 6)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_reports_label_and_parity() {
    let dir = TempDir::new().unwrap();
    let out = run(&["params", "--spec", s(&bicycle36(dir.path()))]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "[[36,4,6]] odd");
    assert!(text.contains("k_max = 2"));
    assert!(text.contains("kd^2/n = 4.0"));
}

#[test]
fn params_merit_of_bound_code() {
    let dir = TempDir::new().unwrap();
    let spec = entry_spec(dir.path(), Family::Bb, 80, 10, 8);
    let json = dir.path().join("p.json");
    let out = run(&["params", "--spec", s(&spec), "--iters", "2000", "--out", s(&json)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["d"], 8);
    assert_eq!(report["merit"], "8.0");
    assert_eq!(report["parity"], "even");
    assert!(dir.path().join("p.json.manifest.json").exists());
}

#[test]
fn params_warns_on_reduced_exponent() {
    let dir = TempDir::new().unwrap();
    let file = SpecFile {
        family: Family::Bicycle,
        l: 9,
        m: 1,
        gamma: 0,
        a_terms: vec!["x9".into(), "x4".into()],
        b_terms: vec!["x3".into(), "x6".into()],
        name: None,
        d: None,
    };
    let out = run(&["params", "--spec", s(&write_spec(dir.path(), "w.json", &file))]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    assert!(stderr(&out).contains("x9"));
    assert!(stdout(&out).starts_with("[[36,4,6]] odd"));
}

#[test]
fn invalid_spec_names_the_field() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"family":"bicycle","l":9,"a_terms":["1"],"b_terms":["x"]}"#, "`m`"),
        (r#"{"family":"bicycle","l":9,"m":1,"a_terms":["1","z2"],"b_terms":["x"]}"#, "a_terms"),
        (r#"{"family":"bb","l":0,"m":3,"a_terms":["1"],"b_terms":["y"]}"#, "`l`"),
        (r#"{"family":"twisted-bb","l":3,"m":3,"gamma":3,"a_terms":["1"],"b_terms":["y"]}"#, "gamma"),
        (r#"{"family":"moebius","l":3,"m":3,"a_terms":["1"],"b_terms":["y"]}"#, "moebius"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let p = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&p, text).unwrap();
        let out = run(&["params", "--spec", s(&p)]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(stderr(&out).contains(field), "{text}: {}", stderr(&out));
    }
}

#[test]
fn distance_budget_exhaustion_exits_3_with_partial_result() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("d.json");
    let spec = bicycle36(dir.path());
    let out = run(&["distance", "--spec", s(&spec), "--exact-budget", "100", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["budget_exhausted"], true);
    assert!(r["d_upper"].as_u64().unwrap() >= 6);
    assert!(r["d_lower"].as_u64().unwrap() <= 6);

    let out = run(&["distance", "--spec", s(&spec)]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((r["d_upper"].as_u64(), r["exact"].as_bool()), (Some(6), Some(true)));
    assert_eq!(r["witness"].as_array().unwrap().len(), 6);
}

#[test]
fn search_with_zero_budget_is_empty() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("hits.jsonl");
    let frontier = dir.path().join("frontier.jsonl");
    let o = run(&["search", "--family", "bicycle", "--l", "6..9", "--budget", "0", "--out", s(&out), "--frontier", s(&frontier)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    assert_eq!(std::fs::read_to_string(&frontier).unwrap(), "");
}

#[test]
fn search_resumes_from_checkpoint() {
    use selfdual_core::search::{search_resume, DistanceBudget, SearchSpace, SearchState, Span};
    let dir = TempDir::new().unwrap();
    let p = |n: &str| dir.path().join(n);
    let common = ["search", "--family", "bicycle", "--l", "6..8", "--seed", "5", "--iters", "50", "--budget", "160"];
    let full = run(&[&common[..], &["--frontier", s(&p("full.jsonl")), "--out", s(&p("full-hits.jsonl"))]].concat());
    assert!(full.status.success(), "{}", stderr(&full));

    // interrupt the same search after its first chunk
    let mut space = SearchSpace::new(Family::Bicycle, Span::new(6, 8), Span::single(1));
    space.seed = 5;
    space.budget = 160;
    let budget = DistanceBudget { iters: 50, ..Default::default() };
    let mut state = SearchState::default();
    let mut saved = None;
    let stop = search_resume(&space, &budget, &mut state, |_| {}, |st| {
        saved = Some(st.clone());
        Err(selfdual_core::Error::Internal("interrupted".into()))
    });
    assert!(stop.is_err());
    let saved = saved.unwrap();
    assert_eq!(saved.cursor, 64);
    let cp = p("cp.json");
    let body = serde_json::json!({ "space": space, "budget": budget, "state": saved });
    std::fs::write(&cp, body.to_string()).unwrap();

    let resumed = run(&[&common[..], &["--checkpoint", s(&cp), "--frontier", s(&p("resumed.jsonl"))]].concat());
    assert!(resumed.status.success(), "{}", stderr(&resumed));
    assert!(stderr(&resumed).contains(&format!("resuming at candidate {}", saved.cursor)));
    let read = |n: &str| std::fs::read_to_string(p(n)).unwrap();
    assert!(!read("full.jsonl").is_empty());
    assert_eq!(read("full.jsonl"), read("resumed.jsonl"));
    let done: Value = serde_json::from_str(&read("cp.json")).unwrap();
    assert!(done["state"]["cursor"].as_u64().unwrap() > saved.cursor);

    // a checkpoint from a different space is refused
    let other = run(&["search", "--family", "bicycle", "--l", "6..9", "--seed", "5", "--checkpoint", s(&cp)]);
    assert_eq!(other.status.code(), Some(2));
}

fn simulate(dir: &Path, spec: &Path, extra: &[&str], out: &str) -> (Output, PathBuf) {
    let csv = dir.join(out);
    let base = ["simulate", "--spec", s(spec), "--shots", "2000", "--seed", "11", "--out", s(&csv)];
    (run(&[&base[..], extra].concat()), csv)
}

#[test]
fn simulate_is_deterministic_and_manifested() {
    let dir = TempDir::new().unwrap();
    let spec = entry_spec(dir.path(), Family::Bicycle, 24, 8, 4);
    let args = ["--noise", "phenomenological", "--p", "0,0.01,0.02", "--rounds", "2"];
    let (a, csv_a) = simulate(dir.path(), &spec, &args, "a.csv");
    let (b, csv_b) = simulate(dir.path(), &spec, &args, "b.csv");
    assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
    let bytes = std::fs::read(&csv_a).unwrap();
    assert_eq!(bytes, std::fs::read(&csv_b).unwrap());

    let text = String::from_utf8(bytes.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,shots,failures,P_L,LFR,sigma_LFR,grey");
    let zero: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(zero[2], "0");
    assert_eq!(zero[4].parse::<f64>().unwrap(), 0.0);
    assert_eq!(text.lines().count(), 4);

    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "simulate");
    assert_eq!(m["seed"], 11);
    assert_eq!(m["resolved"]["rounds"], 2);
    let digest = m["outputs"][0]["sha256"].as_str().unwrap();
    use sha2::Digest;
    let expect: String = sha2::Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(digest, expect);
}

#[test]
fn simulate_config_file_matches_flags() {
    let dir = TempDir::new().unwrap();
    let spec = entry_spec(dir.path(), Family::Bicycle, 24, 8, 4);
    let (a, csv_a) = simulate(dir.path(), &spec, &["--noise", "code-capacity", "--p", "0.02,0.04"], "flags.csv");
    assert!(a.status.success());
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({
        "spec": spec, "noise": "code-capacity", "p": [0.02, 0.04], "shots": 2000, "seed": 11,
        "out": dir.path().join("cfg.csv"), "osd_order": 0, "bp_variant": "min-sum",
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let b = run(&["simulate", "--config", s(&cfg)]);
    assert!(b.status.success(), "{}", stderr(&b));
    assert_eq!(std::fs::read(csv_a).unwrap(), std::fs::read(dir.path().join("cfg.csv")).unwrap());

    // a flag overrides the file
    let c = run(&["simulate", "--config", s(&cfg), "--shots", "1000", "--out", s(&dir.path().join("c.csv"))]);
    assert!(c.status.success());
    assert!(std::fs::read_to_string(dir.path().join("c.csv")).unwrap().contains(",1000,"));

    std::fs::write(&cfg, r#"{"nosie": "code-capacity"}"#).unwrap();
    let d = run(&["simulate", "--config", s(&cfg)]);
    assert_eq!(d.status.code(), Some(2));
    assert!(stderr(&d).contains("nosie"));
}

#[test]
fn simulate_rejects_bad_p() {
    let dir = TempDir::new().unwrap();
    let spec = bicycle36(dir.path());
    for p in ["-0.1", "1.5"] {
        let (o, _) = simulate(dir.path(), &spec, &["--noise", "circuit-level", &format!("--p={p}")], "x.csv");
        assert_eq!(o.status.code(), Some(2), "{p}");
        assert!(stderr(&o).contains("outside [0, 1]"));
    }
}

fn write_csv(dir: &Path, name: &str, rows: &[(f64, f64)], k: usize) -> PathBuf {
    let mut text = String::from("p,shots,failures,P_L,LFR,sigma_LFR,grey\n");
    for &(p, lfr) in rows {
        text += &format!("{p},1000,0,0,{lfr},0,{}\n", sim::grey_line(p, k));
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn pseudothreshold_synthetic_curves() {
    let dir = TempDir::new().unwrap();
    let k = 4;
    let grid = [1e-3, 2e-3, 5e-3, 1e-2];
    let on_line: Vec<_> = grid.iter().map(|&p| (p, sim::grey_line(p, k))).collect();
    let o = run(&["pseudothreshold", "--csv", s(&write_csv(dir.path(), "a.csv", &on_line, k))]);
    assert_eq!(stdout(&o).lines().next().unwrap(), "p0 = 1e-3");

    let p_star = 3e-3;
    let scaled: Vec<_> = grid.iter().map(|&p| (p, sim::grey_line(p, k) * p / p_star)).collect();
    let json = dir.path().join("r.json");
    let o = run(&["pseudothreshold", "--csv", s(&write_csv(dir.path(), "b.csv", &scaled, k)), "--out", s(&json)]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(r["k"], 4);
    let c = r["crossings"].as_array().unwrap();
    assert_eq!(c.len(), 1);
    assert!((c[0].as_f64().unwrap() - p_star).abs() < 1e-12 * p_star);

    let below: Vec<_> = grid.iter().map(|&p| (p, sim::grey_line(p, k) / 10.0)).collect();
    let o = run(&["pseudothreshold", "--csv", s(&write_csv(dir.path(), "c.csv", &below, k))]);
    assert_eq!(stdout(&o).trim(), "no crossing in range");
}

#[test]
fn export_round_trips() {
    let dir = TempDir::new().unwrap();
    let spec_path = bicycle36(dir.path());
    let code = tables::find(Family::Bicycle, 36, 4, 6).unwrap().spec().unwrap().build().unwrap();
    for format in ["alist", "dense"] {
        let out = dir.path().join(format!("h.{format}"));
        let o = run(&["export", "--spec", s(&spec_path), "--format", format, "--out", s(&out)]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = std::fs::read_to_string(&out).unwrap();
        let h = if format == "alist" { io::from_alist(&text) } else { io::from_dense(&text) }.unwrap();
        assert_eq!(h, code.h);
    }
    let o = run(&["export", "--spec", s(&spec_path), "--what", "logicals", "--format", "dense"]);
    let l = io::from_dense(&stdout(&o)).unwrap();
    assert_eq!(l.rows(), 4);
}

#[test]
fn export_seed_support_has_eight_sites() {
    let dir = TempDir::new().unwrap();
    let file = SpecFile {
        family: Family::Bicycle,
        l: 4,
        m: 1,
        gamma: 0,
        a_terms: vec!["1".into(), "x3".into()],
        b_terms: vec!["1".into(), "x".into()],
        name: None,
        d: None,
    };
    let o = run(&["export", "--spec", s(&write_spec(dir.path(), "c.json", &file)), "--what", "seed-support"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sites: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sites.len(), 8);
}

#[test]
fn decode_counts_match_in_process_decoding() {
    use selfdual_core::decoder::{Decoder, DecoderConfig};
    let dir = TempDir::new().unwrap();
    let code = tables::find(Family::Bicycle, 24, 8, 4).unwrap().spec().unwrap().build().unwrap();
    let circ = sim::build_circuit(&code, NoiseModel::new(NoiseKind::Phenomenological, 0.02).unwrap(), 2).unwrap();
    let model = sim::derive_detector_model(&circ).unwrap();
    let samples = sim::sample(&circ, 500, 4);
    let dem = dir.path().join("m.dem");
    let packed = dir.path().join("s.bin");
    std::fs::write(&dem, model.to_text()).unwrap();
    sim::write_samples(std::fs::File::create(&packed).unwrap(), &samples).unwrap();

    let o = run(&["decode", "--dem", s(&dem), "--samples", s(&packed)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dec = Decoder::new(&model, DecoderConfig::default()).unwrap();
    let expect =
        (0..samples.shots()).filter(|&i| dec.decode(&samples.detectors.row(i)).observables != samples.observables.row(i)).count();
    assert_eq!(r["shots"], 500);
    assert_eq!(r["failures"].as_u64().unwrap() as usize, expect);
    assert_eq!(r["invalid"], 0);

    std::fs::write(&dem, "detectors 3\nobservables 1\nerror(0.7) D0\n").unwrap();
    assert_eq!(run(&["decode", "--dem", s(&dem), "--samples", s(&packed)]).status.code(), Some(2));
}
