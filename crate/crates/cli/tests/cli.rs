use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name).display().to_string()
}

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).output().expect("spawn spectra")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spectra-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn identical_invocations_print_identical_bytes() {
    let d = instance("inst_d.pres");
    for args in [
        vec!["suite", d.as_str(), "--seed", "7"],
        vec!["conds", d.as_str(), "m1"],
        vec!["separate", d.as_str(), "g", "2"],
    ] {
        let (a, b) = (spectra(&args), spectra(&args));
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn emitted_certificates_certify() {
    let dir = scratch("emit");
    let (a, c, d) = (instance("inst_a.pres"), instance("inst_c.pres"), instance("inst_d.pres"));
    let runs: [(&str, Vec<&str>); 4] = [
        ("dual.cert", vec!["dual", &c, "y", "x"]),
        ("check.cert", vec!["check", &a, "1", "x^2"]),
        ("member.cert", vec!["member", &d, "sb", "g*h"]),
        ("loc.cert", vec!["localize", &d, "g*h/h", "g", "eq"]),
    ];
    for (file, mut args) in runs {
        let path = dir.join(file);
        let path = path.to_str().unwrap();
        args.extend(["--out", path]);
        let out = spectra(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let check = spectra(&["certify", path]);
        assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn parse_errors_report_position() {
    let dir = scratch("parse");
    let bad = dir.join("bad.pres");
    std::fs::write(&bad, "generators: x;\nrelation: x <= z;\n").unwrap();
    let out = spectra(&["check", bad.to_str().unwrap(), "1", "x"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn missing_power_universal_is_a_usage_error() {
    let dir = scratch("pu");
    let file = dir.join("plain.pres");
    std::fs::write(&file, "generators: x;\nrelation: 1 <= x;\n").unwrap();
    let out = spectra(&["asym", file.to_str().unwrap(), "1", "x"]);
    assert_eq!(out.status.code(), Some(3));
    let _ = std::fs::remove_dir_all(dir);
}
