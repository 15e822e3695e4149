use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use risnoma_cli::{preset, render_csv, run_experiment, CliError, Experiment, CSV_COLUMNS, NAMES};

fn risnoma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risnoma")).args(args).output().expect("binary runs")
}

fn small_config(out: &Path) -> String {
    format!(
        "scenario = external_csi\n\
         sweep = d_u2\n\
         sweep_start = 2.5\n\
         sweep_stop = 3\n\
         sweep_step = 0.5\n\
         schemes = proposed_csi, scheme6\n\
         trials = 20\n\
         seed = 11\n\
         ns = 6\n\
         nr = 8\n\
         m = 3\n\
         los_phase = uniform\n\
         output = {}\n",
        out.display()
    )
}

#[test]
fn presets_round_trip_through_the_text_format() {
    for name in NAMES {
        let exp = preset(name).unwrap();
        let text = exp.to_config_string();
        assert_eq!(Experiment::parse(&text).unwrap(), exp, "{name}");
    }
}

#[test]
fn preset_parameters_match_the_figure_setups() {
    let fig8 = preset("fig8").unwrap();
    assert_eq!(fig8.sweep.var.as_str(), "psi");
    for key in [("d_rx", "0.5"), ("d_u1", "2"), ("d_u2", "3"), ("m", "10")] {
        assert_eq!(fig8.overrides[key.0], key.1);
    }
    let fig7 = preset("fig7").unwrap();
    assert_eq!(fig7.sweep.var.as_str(), "t");
    let points = fig7.points().unwrap();
    assert!(points.iter().all(|p| p.scenario.csi_error.is_some()));
    let fig9 = preset("fig9").unwrap();
    assert_eq!(fig9.eavesdropper_counts, vec![10, 20]);
    let fig10 = preset("fig10").unwrap();
    let p = &fig10.points().unwrap()[0].scenario.deployment;
    assert!(p.u1.is_random() && p.u2.is_random() && p.eavesdroppers.is_random());
}

#[test]
fn csv_has_fixed_header_and_one_row_per_point_and_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let exp = Experiment::parse(&small_config(&out)).unwrap();
    let csv = render_csv(&run_experiment(&exp).unwrap());
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row.len(), CSV_COLUMNS.len());
        // Nine significant digits in scientific notation.
        let mantissa = row[4].split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 9, "{}", row[4]);
        assert_eq!(row[16], "nan");
    }
    assert_eq!(rows[0][2], "proposed_csi");
    assert_eq!(rows[1][2], "scheme6");
    let max_norm = rows.iter().map(|r| r[5].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert_eq!(max_norm, 1.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&cfg, small_config(&a)).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert!(risnoma(&["run", "--config", cfg, "--threads", "1"]).status.success());
    let out = risnoma(&["run", "--config", cfg, "--threads", "2", "--out", b.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn invalid_config_names_the_key_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let cfg = dir.path().join("exp.cfg");
    fs::write(&cfg, small_config(&out).replace("trials = 20", "trials = 0")).unwrap();
    let res = risnoma(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("trials"));
    assert!(!out.exists());

    let res = risnoma(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn overrides_apply_and_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7.csv");
    let res = risnoma(&[
        "run",
        "--preset",
        "fig7",
        "--trials",
        "5",
        "--override",
        "sweep_stop=0.02",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("t,0.00000000e0,proposed_internal,5,"));

    let res = risnoma(&["run", "--preset", "fig7", "--override", "psi=3"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("psi"));
}

#[test]
fn unknown_preset_lists_the_available_ones() {
    let res = risnoma(&["run", "--preset", "fig3"]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(NAMES.iter().all(|n| err.contains(n)), "{err}");
    assert!(matches!(preset("fig3"), Err(CliError::UnknownPreset(_))));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.csv");
    let cfg = dir.path().join("exp.cfg");
    fs::write(&cfg, small_config(&out)).unwrap();
    let res = risnoma(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let res = risnoma(&["validate", "--config", dir.path().join("absent.cfg").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn list_presets_prints_every_name() {
    let res = risnoma(&["list-presets"]);
    assert!(res.status.success());
    let text = String::from_utf8_lossy(&res.stdout);
    assert_eq!(text.lines().collect::<Vec<_>>(), NAMES.to_vec());
}
