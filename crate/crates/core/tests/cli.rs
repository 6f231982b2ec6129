//! End-to-end runs of the command-line tool.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rydberg-lattice");

fn tool(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn tool")
}

fn run_config(dir: &Path, name: &str, toml: &str, extra: &[&str]) -> Output {
    let path = dir.join(name);
    fs::write(&path, toml).unwrap();
    let out = dir.join(name.trim_end_matches(".toml"));
    let mut args = vec![
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    tool(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_SWEEP: &str = r#"
mode = "sweep"

[lattice]
n_sites = 4
rabi = 0.15

[grid]
min = -1.1
max = 0.35
count = 59

[cycle_times]
values = [15.0, 18.0, 21.0, 24.0, 27.0]

[averaging]
min = 15.0
max = 30.0
count = 16
"#;

#[test]
fn presets_are_listed() {
    let o = tool(&["presets", "list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "fig2",
        "spectrum-fig2c",
        "roundtrip-default",
        "feasibility-n70-a10",
        "feasibility-n70-a5",
    ] {
        assert!(
            text.lines().any(|l| l.starts_with(name)),
            "{name} missing from:\n{text}"
        );
    }
    let show = tool(&["presets", "show", "fig2"]);
    assert!(String::from_utf8(show.stdout).unwrap().contains("count = 581"));
}

#[test]
fn missing_n_sites_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config(
        dir.path(),
        "bad.toml",
        "mode = \"sweep\"\n[lattice]\nrabi = 0.15\n",
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_sites"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, toml) in [
        ("unknown_key.toml", "mode = \"sweep\"\ncolour = 3\n"),
        ("no_physical.toml", "mode = \"feasibility\"\n"),
        (
            "one_point.toml",
            "mode = \"spectrum\"\n[lattice]\nn_sites = 2\nrabi = 0.1\n[grid]\nmin = 0\nmax = 1\ncount = 1\n",
        ),
        ("bad_mode.toml", "mode = \"plot\"\n"),
    ] {
        let o = run_config(dir.path(), name, toml, &[]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
    }
    assert_eq!(tool(&["run", "--preset", "nope"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, SMALL_SWEEP).unwrap();
    let o = tool(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn runs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_config(dir.path(), "a.toml", SMALL_SWEEP, &["--threads", "1"]);
    let b = run_config(dir.path(), "b.toml", SMALL_SWEEP, &["--threads", "3"]);
    assert!(a.status.success() && b.status.success());
    for file in ["sweep.csv", "sweep.json"] {
        let x = fs::read(dir.path().join("a").join(file)).unwrap();
        let y = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
}

#[test]
fn sweep_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_config(dir.path(), "s.toml", SMALL_SWEEP, &[]).status.success());
    let text = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(meta[0], "# schema_version: 1");
    assert_eq!(meta[1], "# kind: sweep");
    assert!(meta[2].starts_with("# config_hash: sha256:"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "delta_over_v,ne_T15,ne_T18,ne_T21,ne_T24,ne_T27,ne_avg,nee_T15,nee_T18,nee_T21,nee_T24,nee_T27,nee_avg"
    );
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 60);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s/sweep.json")).unwrap()).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "average_cycle_times",
            "config_hash",
            "cycle_times",
            "delta_over_v",
            "kind",
            "n_sites",
            "ne_avg",
            "ne_per_t",
            "nee_avg",
            "nee_per_t",
            "schema_version"
        ]
    );
    assert_eq!(json["schema_version"], 1);
}

#[test]
fn output_section_does_not_change_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let moved = format!("{SMALL_SWEEP}\n[output]\ndir = \"elsewhere\"\njson = false\n");
    assert!(run_config(dir.path(), "a.toml", SMALL_SWEEP, &[]).status.success());
    assert!(run_config(dir.path(), "b.toml", &moved, &[]).status.success());
    let hash = |d: &str| {
        fs::read_to_string(dir.path().join(d).join("sweep.csv"))
            .unwrap()
            .lines()
            .find(|l| l.starts_with("# config_hash"))
            .unwrap()
            .to_string()
    };
    assert_eq!(hash("a"), hash("b"));
    assert!(!dir.path().join("b/sweep.json").exists());
}

#[test]
fn spectrum_csv_schema_and_physical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let toml = r#"
mode = "spectrum"
[lattice]
n_sites = 2
rabi = 0.15
[grid]
min = -1.0
max = 0.0
count = 3
[physical]
lattice_spacing_um = 10.0
"#;
    let o = run_config(dir.path(), "sp.toml", toml, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("sp/spectrum.csv")).unwrap();
    assert!(text.contains("# frequency_convention:"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "ratio,delta_hz,eig_0,eig_1,eig_2,eig_3,g_state_line");
    // V / 2pi = 876 kHz at a = 10 um
    assert!(rows[1].starts_with("-1,-876000,"));
    // |G> line -N Delta / 2 at Delta = -V is 1
    assert!(rows[1].ends_with(",1"));
}

#[test]
fn feasibility_report_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f");
    let o = tool(&["run", "--preset", "feasibility-n70-a10", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("feasibility.json")).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["kind"], "feasibility");
    assert!((json["interaction_hz"].as_f64().unwrap() - 876e3).abs() < 1e-6);
    let row = &json["rows"][0];
    assert_eq!(row["kappa"], 2);
    assert!((row["separation_hz"].as_f64().unwrap() - 146e3).abs() < 1e-6);
    assert!((row["linewidth_hz"].as_f64().unwrap() - 3.0e3).abs() / 3.0e3 < 0.05);
    assert_eq!(row["resolvable"], true);
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "c6_over_2pi_hz_um6",
            "config_hash",
            "excitation_timescale_s",
            "frequency_convention",
            "interaction_hz",
            "kind",
            "lattice_spacing_um",
            "linewidth_hz",
            "principal_n",
            "quantum_defect",
            "rabi_hz",
            "rows",
            "scaling_note",
            "schema_version",
            "t_max_over_rabi",
            "threshold"
        ]
    );
}

const FOUR_SITE_ROUNDTRIP: &str = r#"
mode = "roundtrip"
[lattice]
n_sites = 4
rabi = 0.15
[grid]
min = -1.1
max = 0.35
count = 581
[extraction]
observable = "ne"
lattice_spacing = 1.0
"#;

#[test]
fn extraction_from_a_written_sweep_matches_the_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config(dir.path(), "rt.toml", FOUR_SITE_ROUNDTRIP, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rt: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rt/roundtrip.json")).unwrap()).unwrap();
    for key in [
        "c6_absolute",
        "c6_relative",
        "c6_true",
        "c6_units",
        "kappa_absolute",
        "kappa_relative",
        "peaks",
        "relative_error_vs_truth",
    ] {
        assert!(rt.get(key).is_some(), "roundtrip.json lacks {key}");
    }
    assert!(rt["relative_error_vs_truth"]["absolute"].as_f64().unwrap() < 0.08);

    // The CSV path is relative to the extract config's directory.
    let extract = "mode = \"extract\"\n[extraction]\ninput = \"rt/sweep.csv\"\nlattice_spacing = 1.0\n";
    let o = run_config(dir.path(), "ex.toml", extract, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ex: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ex/extraction.json")).unwrap()).unwrap();
    assert_eq!(ex["kind"], "extract");
    // The CSV stores shortest round-trip decimals, so the estimates agree exactly.
    assert_eq!(ex["c6_absolute"], rt["c6_absolute"]);
    assert_eq!(ex["c6_relative"], rt["c6_relative"]);
}
