use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str], scenario: Option<&str>, dir: &Path) -> (Output, PathBuf) {
    let out = dir.join("out");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_halfspace"));
    cmd.args(args).arg("--out").arg(&out);
    if let Some(text) = scenario {
        let file = dir.join("scenario.txt");
        std::fs::write(&file, text).unwrap();
        cmd.arg("--scenario").arg(file);
    }
    (cmd.output().unwrap(), out)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn records(bytes: &[u8]) -> Vec<[f64; 9]> {
    assert_eq!(bytes.len() % 72, 0);
    bytes
        .chunks_exact(72)
        .map(|r| std::array::from_fn(|k| f64::from_le_bytes(r[8 * k..8 * k + 8].try_into().unwrap())))
        .collect()
}

fn metadata(out: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(out.join("metadata.json")).unwrap()).unwrap()
}

const PLANE: &str = "medium.lambda = 2\nmedium.mu = 1\nmedium.omega = 2\nincidence.kind = plane\nincidence.theta = 0.7\n\
incidence.phi = 0.1\nincidence.c_p = 1\nincidence.c_s1 = 0, 1\nincidence.c_s2 = 0.2\n\
grid.origin = -1, -1, 0\ngrid.extent = 2, 2, 1\ngrid.resolution = 4, 3, 2\n";

#[test]
fn reflect_writes_records_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run(&["reflect"], Some(PLANE), dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&std::fs::read(out.join("displacement.bin")).unwrap());
    assert_eq!(recs.len(), 4 * 3 * 2);
    assert_eq!(&recs[0][..3], &[-1.0, -1.0, 0.0]);
    assert_eq!(&recs[1][..3], &[-1.0 + 2.0 / 3.0, -1.0, 0.0]);
    assert_eq!(&recs[23][..3], &[1.0, 1.0, 1.0]);
    // Rigid plane: the first 12 records sit on x₃ = 0.
    for r in &recs[..12] {
        assert!(r[3..].iter().all(|v| v.abs() < 1e-12));
    }
    let meta = metadata(&out);
    assert_eq!(meta["subcommand"], "reflect");
    assert_eq!(meta["records"], 24);
    assert_eq!(meta["files"][0], "displacement.bin");
    assert!(meta["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn text_and_binary_outputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = format!("{PLANE}output.quantity = traction\n");
    let (o, out) = run(&["reflect"], Some(&scenario), dir.path());
    assert_eq!(code(&o), 0);
    let bin = records(&std::fs::read(out.join("traction.bin")).unwrap());
    let dir2 = tempfile::tempdir().unwrap();
    let (o, out2) = run(&["reflect", "--format", "text"], Some(&scenario), dir2.path());
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(out2.join("traction.txt")).unwrap();
    let parsed: Vec<Vec<f64>> = text.lines().map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(parsed.len(), bin.len());
    for (a, b) in parsed.iter().zip(&bin) {
        assert_eq!(a.as_slice(), b.as_slice());
    }
}

#[test]
fn residual_output_is_small_for_reflected_waves() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = PLANE.replace("grid.origin = -1, -1, 0", "grid.origin = -1, -1, 0.5") + "output.quantity = residual\n";
    let (o, out) = run(&["reflect"], Some(&scenario), dir.path());
    assert_eq!(code(&o), 0);
    for r in records(&std::fs::read(out.join("residual.bin")).unwrap()) {
        assert!(r[3..].iter().all(|v| v.abs() < 1e-4), "{r:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let scenario = "incidence.kind = point_source\nincidence.source = 0, 0, 1\nincidence.force = 0.3, 0, 1\n\
grid.origin = -1, 0, 0.5\ngrid.extent = 2, 0, 1\ngrid.resolution = 3, 1, 2\n";
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let (o, out) = run(&["greens", "--threads", threads], Some(scenario), dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out.join("displacement.bin")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn propagate_seed_controls_the_trace() {
    let scenario = "propagate.n = 8\npropagate.heights = 0.5\n";
    let mut outputs = Vec::new();
    for seed in ["1", "1", "2"] {
        let dir = tempfile::tempdir().unwrap();
        let (o, out) = run(&["propagate", "--seed", seed], Some(scenario), dir.path());
        assert_eq!(code(&o), 0);
        assert_eq!(metadata(&out)["seed"], seed.parse::<u64>().unwrap());
        outputs.push(std::fs::read(out.join("displacement.bin")).unwrap());
    }
    assert_eq!(records(&outputs[0]).len(), 64);
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0], outputs[2]);
}

#[test]
fn beam_reports_its_rule() {
    let scenario = "incidence.kind = beam\nincidence.beam.kind = s\nincidence.beam.center = 0.3, 0.1\n\
incidence.beam.width = 0.4\nincidence.beam.q1 = 0, 1\nincidence.beam.q2 = 1\nincidence.beam.q3 = 0\n\
incidence.beam.support_radius = 1.5\nincidence.beam.height = 1\n\
grid.origin = -1, 0, 0\ngrid.extent = 2, 0, 1\ngrid.resolution = 5, 1, 3\n";
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run(&["beam"], Some(scenario), dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta = metadata(&out);
    assert!(meta["details"]["beam_rule"]["radial"].as_u64().unwrap() >= 8);
    assert!(meta["details"]["beam_rule"]["last_change"].as_f64().unwrap() < 1e-8);
    let recs = records(&std::fs::read(out.join("displacement.bin")).unwrap());
    for r in &recs[..5] {
        assert!(r[3..].iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn validate_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run(&["validate"], Some("validate.groups = kernels, dtn\n"), dir.path());
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn defaults_apply_without_a_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run(&["propagate"], None, dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(records(&std::fs::read(out.join("displacement.bin")).unwrap()).len(), 2 * 16 * 16);
}

#[test]
fn errors_map_to_exit_codes_and_leave_no_output() {
    let cases: &[(&str, &str, i32)] = &[
        ("reflect", "medium.mu = 1\nmedium.mu = 2\n", 2),
        ("reflect", "grid.origin = 1, 2\n", 2),
        ("reflect", "no equals sign\n", 2),
        ("reflect", "incidence.kind = plane\n", 3),
        ("reflect", &PLANE.replace("grid.origin = -1, -1, 0", "grid.origin = -1, -1, -0.5"), 3),
        ("greens", "incidence.kind = point_source\nincidence.source = 0, 0, 1\noutput.quantity = traction\n\
grid.origin = 0, 0, 1\ngrid.extent = 0, 0, 0\ngrid.resolution = 1, 1, 1\n", 3),
        ("greens", "incidence.kind = point_source\nincidence.source = 0, 0, 1e-6\n\
grid.origin = 1, 0, 1e-6\ngrid.extent = 0, 0, 0\ngrid.resolution = 1, 1, 1\n", 4),
        ("validate", "validate.groups = nothing\n", 3),
    ];
    for (sub, scenario, expect) in cases {
        let dir = tempfile::tempdir().unwrap();
        let (o, out) = run(&[sub], Some(scenario), dir.path());
        assert_eq!(code(&o), *expect, "{sub} with {scenario:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn missing_scenario_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_halfspace"))
        .args(["reflect", "--scenario"])
        .arg(dir.path().join("absent.txt"))
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn bundled_scenarios_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for sub in ["reflect", "beam", "greens", "propagate"] {
        let dir = tempfile::tempdir().unwrap();
        let text = std::fs::read_to_string(root.join(format!("{sub}.txt"))).unwrap();
        let (o, out) = run(&[sub], Some(&text), dir.path());
        assert_eq!(code(&o), 0, "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join("metadata.json").exists());
    }
}
