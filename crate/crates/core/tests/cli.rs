use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hexaface::mpd::{generate_mpd, parse_mpd, serialize_mpd};
use hexaface::sim::{compare, load_trace, simulate, simulate_baseline, Report};
use hexaface::sphere::export_obj;
use hexaface::tiling::{build_ladder, compute_tile_grid, BitrateModel, DEFAULT_SCALES};
use hexaface::{AdaptationPolicy, Partition, SegmentId};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hexaface"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mesh_writes_six_objs_and_partition() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["mesh", "--h-fov", "96", "--v-fov", "90", "--slices", "8", "--stacks", "4", "--out-dir", s(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["partition.json", "tile0.obj", "tile1.obj", "tile2.obj", "tile3.obj", "tile4.obj", "tile5.obj"]);
    for n in &names {
        assert_eq!(fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap(), "{n} differs between runs");
    }
    let p = Partition::new(96.0, 90.0).unwrap();
    let lib = export_obj(&p.tessellate(SegmentId::M0, 8, 4).unwrap());
    assert_eq!(fs::read_to_string(a.join("tile2.obj")).unwrap(), lib);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("partition.json")).unwrap()).unwrap();
    assert_eq!(json["beta_deg"], 45.0);
    assert_eq!(json["regions"].as_array().unwrap().len(), 6);
}

#[test]
fn mesh_rejects_bad_fov() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["mesh", "--v-fov", "200", "--out-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("v-fov"));
}

#[test]
fn manifest_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.mpd");
    let plan = dir.path().join("plan.json");
    let o = run(&["manifest", "--out", s(&out), "--plan", s(&plan)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let m = parse_mpd(&text).unwrap();
    assert_eq!(m.adaptation_sets.len(), 6);

    let p = Partition::new(96.0, 90.0).unwrap();
    let g = compute_tile_grid(&p, 3840, 1920).unwrap();
    let l = build_ladder(&g, DEFAULT_SCALES, &BitrateModel::default()).unwrap();
    assert_eq!(text, serialize_mpd(&generate_mpd(&g, &l, 10.0, 1.0).unwrap()));
    let plan: serde_json::Value = serde_json::from_str(&fs::read_to_string(&plan).unwrap()).unwrap();
    assert_eq!(plan["tiles"][4]["crops"].as_array().unwrap().len(), 2);
}

#[test]
fn manifest_scales_reproduce_ladder_ratios() {
    // middle tiles are 960 wide at full scale
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.mpd");
    let o = run(&["manifest", "--width", "3840", "--height", "1920", "--scales", "1,0.75,0.5,0.25", "--out", s(&out)]);
    assert!(o.status.success());
    let m = parse_mpd(&fs::read_to_string(&out).unwrap()).unwrap();
    let reps = &m.adaptation_set(SegmentId::M0).unwrap().representations;
    assert_eq!((reps[0].width, reps[1].width, reps[3].width), (960, 720, 240));
}

#[test]
fn manifest_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.mpd");
    let o = run(&["manifest", "--width", "3840", "--height", "2160", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["manifest", "--scales", "1,0.5,0.75,0.25", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scales"));
}

#[test]
fn simulate_savings_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "simulate", "--mpd", s(&golden("manifest.mpd")), "--trace", s(&golden("static_centered.csv")),
        "--baseline", "--format", "json", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let savings = hexaface::SavingsReport::from_json(&fs::read_to_string(dir.path().join("r.savings.json")).unwrap()).unwrap();
    assert!((savings.savings_fraction - 0.6953).abs() < 0.005);

    let mpd = parse_mpd(&fs::read_to_string(golden("manifest.mpd")).unwrap()).unwrap();
    let trace = load_trace(&fs::read_to_string(golden("static_centered.csv")).unwrap()).unwrap();
    let p = Partition::new(96.0, 90.0).unwrap();
    let r = simulate(&mpd, &trace, &AdaptationPolicy::default(), &p).unwrap();
    let b = simulate_baseline(&mpd, &trace, &p).unwrap();
    let lib = compare(&r, &b).unwrap().with_label("static_centered");
    assert_eq!(savings, lib);
    assert_eq!(fs::read_to_string(&out).unwrap(), r.to_json());
}

#[test]
fn simulate_policy_without_adjacency() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run(&[
        "simulate", "--mpd", s(&golden("manifest.mpd")), "--trace", s(&golden("static_centered.csv")),
        "--policy", s(&golden("policy_no_adjacency.json")), "--baseline", "--out", s(&out),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("r.savings.csv")).unwrap();
    assert!(text.lines().last().unwrap().ends_with(",0.8203"), "{text}");
}

#[test]
fn simulate_input_errors() {
    let o = run(&["simulate", "--mpd", s(&golden("manifest.mpd")), "--trace", "/nonexistent/trace.csv"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "t_ms,yaw_deg,pitch_deg,roll_deg\n0,0,0,0\n0,0,0,0\n").unwrap();
    let o = run(&["simulate", "--mpd", s(&golden("manifest.mpd")), "--trace", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.csv") && err.contains("line 3"), "{err}");

    let bad_mpd = dir.path().join("bad.mpd");
    let text = fs::read_to_string(golden("manifest.mpd")).unwrap().replacen("value=\"0,0,0,3840,480,3840,1920,0\"", "value=\"0,0,0,3840,480,3840\"", 1);
    fs::write(&bad_mpd, text).unwrap();
    let o = run(&["simulate", "--mpd", s(&bad_mpd), "--trace", s(&golden("static_centered.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("srd-arity") && err.contains("line 6"), "{err}");

    let o = run(&["simulate", "--mpd", s(&golden("manifest.mpd")), "--trace", s(&golden("static_centered.csv")), "--v-fov", "120"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_prints_segment() {
    for (yaw, pitch, want) in [("0", "0", "M0"), ("0", "90", "TOP"), ("120", "-10", "M1")] {
        let o = run(&["classify", "--yaw", yaw, "--pitch", pitch]);
        assert!(o.status.success());
        let text = String::from_utf8(o.stdout).unwrap();
        assert_eq!(text.lines().next(), Some(want));
        assert_eq!(text.lines().count(), 7);
    }
    let o = run(&["classify", "--yaw", "0", "--pitch", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"yaw": 120, "pitch": -10, "v-fov": 90}"#).unwrap();
    let o = run(&["classify", "--config", s(&cfg)]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().next(), Some("M1"));
    let o = run(&["classify", "--config", s(&cfg), "--yaw", "0"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().next(), Some("M0"));
}
