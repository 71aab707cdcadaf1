use std::path::Path;
use std::process::{Command, Output};

use clifwave::io::{read_file, Payload};
use clifwave::simgroup::RotationSampling;

fn clifwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clifwave"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_prints_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = clifwave(dir.path(), &["transform", "--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[default: 0.5,4,16"));
    assert!(text.contains("[default: coeffs.clwf]"));
    assert!(text.contains("--threads"));
}

#[test]
fn gabor_writes_file_and_checks_parity() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gabor", "--n", "2", "--sigma", "1,1", "--omega0", "3,0", "--grid", "64", "--extent", "12"];
    let o = clifwave(dir.path(), &args);
    assert!(o.status.success());
    assert!(stdout(&o).contains("zero mean: PASS"));
    assert!(matches!(read_file(&dir.path().join("gabor.clwf")).unwrap().payload, Payload::Field(_)));

    let o = clifwave(dir.path(), &["gabor", "--amplitude", "e2", "-o", "odd.clwf"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("parity: Odd"));

    let o = clifwave(dir.path(), &["gabor", "--amplitude", "1+e1", "-o", "mixed.clwf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("mixed.clwf").exists());
}

#[test]
fn invalid_parameters_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["transform", "--n", "4"][..],
        &["transform", "--scales", "1,2"],
        &["transform", "--sigma", "1"],
        &["transform", "--grid", "0"],
        &["transform", "--no-such-flag"],
        &["admissibility", "--amplitude", "e7"],
        &["--threads", "0", "admissibility"],
    ] {
        let o = clifwave(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    std::fs::write(dir.path().join("bad.toml"), "unknown_key = 1\n").unwrap();
    let o = clifwave(dir.path(), &["--config", "bad.toml", "admissibility"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn round_trip_within_bound_and_bit_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = clifwave(dir.path(), &["transform", "-o", "a.clwf", "--save-signal", "sig.clwf"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = clifwave(dir.path(), &["--threads", "1", "transform", "-o", "b.clwf"]);
    assert!(o.status.success());
    let a = std::fs::read(dir.path().join("a.clwf")).unwrap();
    let b = std::fs::read(dir.path().join("b.clwf")).unwrap();
    assert!(a == b, "transform output differs between runs");

    let o = clifwave(dir.path(), &["invert", "-i", "a.clwf", "-o", "r1.clwf"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    let o = clifwave(dir.path(), &["--threads", "2", "invert", "-i", "a.clwf", "-o", "r2.clwf", "--reference", "sig.clwf"]);
    assert!(o.status.success());
    let r1 = std::fs::read(dir.path().join("r1.clwf")).unwrap();
    let r2 = std::fs::read(dir.path().join("r2.clwf")).unwrap();
    assert!(r1 == r2, "reconstruction differs between thread counts");

    let o = clifwave(dir.path(), &["invert", "-i", "a.clwf", "-o", "r3.clwf", "--bound", "1e-6"]);
    assert_eq!(o.status.code(), Some(1));

    let o = clifwave(dir.path(), &["export-plot", "-i", "a.clwf", "--scale", "0", "--rotation", "0", "--delimiter", ","]);
    assert!(o.status.success());
    let plot = std::fs::read_to_string(dir.path().join("plot.tsv")).unwrap();
    let lines: Vec<&str> = plot.lines().collect();
    assert_eq!(lines[0], "scale_index,scale,rotation_index,angle,b1,b2,modulus");
    assert_eq!(lines.len(), 1 + 64 * 64);
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("p.toml"),
        "samples = 32\nrotations = 8\n[scales]\ncount = 4\n[wavelet]\nomega0 = [3.5, 0.0]\n",
    )
    .unwrap();
    let o = clifwave(dir.path(), &["--config", "p.toml", "transform", "--rotations", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file = read_file(&dir.path().join("coeffs.clwf")).unwrap();
    let Payload::Coefficients(c) = file.payload else {
        panic!("coefficients expected");
    };
    assert_eq!(c.grid().translations().samples(), &[32, 32]);
    assert_eq!(c.grid().sampling(), &RotationSampling::Uniform { count: 4 });
    assert_eq!(c.grid().scales().len(), 4);
    assert!(c.grid().scales().iter().all(|a| (0.5..4.0).contains(a)));
    assert_eq!(file.meta["profile"]["wavelet"]["omega0"][0], 3.5);
    assert_eq!(file.meta["profile"]["extent"], 24.0);
}

#[test]
fn admissibility_reports_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = clifwave(dir.path(), &["admissibility"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("C = 0.0633"));
    assert!(text.contains("invertible: yes"));
    let o = clifwave(dir.path(), &["admissibility", "--n", "3", "--amplitude", "1+0.5e1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("scalar constant: false"));
}

#[test]
fn verify_exit_status_follows_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = clifwave(dir.path(), &["verify", "--signals", "4", "--report", "report.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert_eq!(report, stdout(&o));
    assert!(!report.contains("FAIL"));

    // Two scales cannot cover the admissibility integral.
    let o = clifwave(dir.path(), &["verify", "--signals", "2", "--scales", "0.5,4,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn corrupt_input_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    assert!(clifwave(dir.path(), &["transform", "--grid", "16", "--extent", "12", "--scales", "0.5,2,2", "--rotations", "2"]).status.success());
    let path = dir.path().join("coeffs.clwf");
    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&path, bytes).unwrap();
    let o = clifwave(dir.path(), &["invert", "-i", "coeffs.clwf", "-o", "out.clwf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    assert!(!dir.path().join("out.clwf").exists());
}
