use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use agccz_core::{CssArtifact, CssCode, Curve, CurveData, GateList, Schedule};
use serde::de::DeserializeOwned;
use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agccz"))
        .args(args)
        .env("AGCCZ_ARTIFACT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = run(dir, args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn read<T: DeserializeOwned>(dir: &Path, name: &str) -> T {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn rendered<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

#[test]
fn params_rows_and_flags() {
    let tmp = TempDir::new().unwrap();
    let tower = tmp.path().join("t.json");
    fs::write(
        &tower,
        r#"{"r":8,"i":1,"deg_a":8,"deg_b":1,"exp_t":0,"exp_r":0,"exp_s":0}"#,
    )
    .unwrap();
    let out = ok(
        tmp.path(),
        &[
            "params",
            "--r",
            "8",
            "--tower-file",
            tower.to_str().unwrap(),
        ],
    );
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "r,level,N,k,n,rate_lb,rel_dist_lb,ineq1,ineq2,good"
    );
    assert_eq!(lines[1], "8,family,,,,1/56,1/56,,,true");
    assert_eq!(lines[2], "8,i=1,56,1,55,1/56,1/56,true,true,true");

    let out = ok(tmp.path(), &["params", "--r", "4", "--s", "18"]);
    assert!(out.contains("4,family,,,,1/12,-1/3,,,false"));
    assert!(out.contains("4,s=18,64,4,60,1/16,1/16,true,true,true"));

    assert_eq!(run(tmp.path(), &["params"]).status.code(), Some(2));
    fs::write(
        &tower,
        r#"{"r":8,"i":1,"deg_a":3,"deg_b":1,"exp_t":0,"exp_r":0,"exp_s":0}"#,
    )
    .unwrap();
    assert_eq!(
        run(
            tmp.path(),
            &["params", "--tower-file", tower.to_str().unwrap()]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn build_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let o = run(tmp.path(), &["build", "--r", "4", "--s", "40"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4s <= 74"), "{}", stderr(&o));

    let o = run(tmp.path(), &["build", "--r", "2", "--s", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("rank 1 < 2"));

    let o = run(
        tmp.path(),
        &["build", "--kind", "toy", "--r", "2", "--s", "2"],
    );
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: degenerate"));
    let css: CssArtifact = read(tmp.path(), "css.json");
    assert_eq!((css.n, css.k, css.m, css.degenerate), (6, 2, 2, true));
    assert_eq!(
        run(tmp.path(), &["build", "--kind", "toy", "--r", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(
            tmp.path(),
            &["build", "--r", "4", "--s", "18", "--fiber", "99"]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn toy_file_with_broken_fibers_fails_an_axiom() {
    let tmp = TempDir::new().unwrap();
    let mut data = agccz_core::curve::toy::toy_r2_data();
    // move one place into the neighbouring fiber
    let (a, b) = (data.fibers[0][0], data.fibers[1][0]);
    data.fibers[0][0] = b;
    data.fibers[1][0] = a;
    let path = tmp.path().join("toy.json");
    fs::write(&path, serde_json::to_string(&data).unwrap()).unwrap();
    let o = run(
        tmp.path(),
        &[
            "build",
            "--kind",
            "toy",
            "--toy-file",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stderr(&o).contains("fiber_partition"), "{}", stderr(&o));
}

#[test]
fn pipeline_round_trips_and_reports() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["build", "--r", "4", "--s", "18"]);

    // artifacts reload to identical values and re-render to identical bytes
    let curve_text = fs::read_to_string(dir.join("curve.json")).unwrap();
    let data: CurveData = serde_json::from_str(&curve_text).unwrap();
    let curve = Curve::from_data(data.clone()).unwrap();
    assert_eq!(curve.to_data(), data);
    assert_eq!(rendered(&curve.to_data()), curve_text);
    let css_text = fs::read_to_string(dir.join("css.json")).unwrap();
    let art: CssArtifact = serde_json::from_str(&css_text).unwrap();
    assert_eq!(
        rendered(&CssCode::from_artifact(art).unwrap().to_artifact()),
        css_text
    );

    let out = ok(
        dir,
        &[
            "synth",
            "--pattern",
            "123",
            "--A",
            "1",
            "--B",
            "2",
            "--C",
            "3",
            "--gamma",
            "1",
        ],
    );
    assert!(out.contains("60 gates"));
    let gates_text = fs::read_to_string(dir.join("gates.json")).unwrap();
    let gl: GateList = serde_json::from_str(&gates_text).unwrap();
    assert_eq!(rendered(&gl), gates_text);
    assert!(ok(dir, &["schedule"]).contains("depth 1"));
    let s: Schedule = read(dir, "schedule.json");
    assert_eq!(s.depth, 1);

    ok(
        dir,
        &[
            "synth",
            "--pattern",
            "intra",
            "--A",
            "0",
            "--B",
            "3",
            "--C",
            "2",
            "--gamma",
            "2",
        ],
    );
    ok(dir, &["schedule"]);
    let s: Schedule = read(dir, "schedule.json");
    assert!(s.depth <= 7);

    ok(
        dir,
        &["verify", "--state", "--seed", "11", "--samples", "500"],
    );
    let cert: Value = read(dir, "certificate.json");
    assert_eq!(cert["seed"], 11);
    assert_eq!(cert["failed"], 0);
    assert_eq!(cert["certificates"][1]["mode"], "sampled");

    let report: Value = serde_json::from_str(&ok(dir, &["report"])).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["code"]["n"], 60);
    for name in [
        "curve.json",
        "css.json",
        "gates.json",
        "schedule.json",
        "certificate.json",
    ] {
        assert_eq!(
            report["artifacts"][name].as_str().unwrap().len(),
            64,
            "{name}"
        );
    }
}

#[test]
fn verify_all_triples_and_seed_requirement() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["build", "--r", "4", "--s", "18"]);
    let out = ok(dir, &["verify", "--all-triples"]);
    assert!(out.contains("384 gate lists"), "{out}");
    assert!(out.contains("0 failed"));

    ok(
        dir,
        &[
            "synth",
            "--pattern",
            "112",
            "--A",
            "0",
            "--B",
            "1",
            "--C",
            "2",
        ],
    );
    assert_eq!(run(dir, &["verify", "--state"]).status.code(), Some(2));

    let mut gl: GateList = read(dir, "gates.json");
    gl.gates[0].coeff = agccz_core::FieldElem::ZERO;
    fs::write(dir.join("gates.json"), rendered(&gl)).unwrap();
    let o = run(dir, &["verify"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("witness"));
    let cert: Value = read(dir, "certificate.json");
    assert_eq!(cert["failed"], 1);
}

#[test]
fn toy_verify_is_exhaustive_without_seed() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["build", "--kind", "toy"]);
    let out = ok(
        dir,
        &["verify", "--all-triples", "--gamma-sweep", "--state"],
    );
    assert!(out.contains("72 gate lists"), "{out}");
    ok(
        dir,
        &[
            "synth",
            "--pattern",
            "111",
            "--A",
            "0",
            "--B",
            "1",
            "--C",
            "1",
            "--gamma",
            "3",
        ],
    );
    ok(dir, &["verify", "--state", "--dense"]);
    let cert: Value = read(dir, "certificate.json");
    assert_eq!(cert["total"], 3);
    assert!(cert.get("seed").is_none());
}

#[test]
fn missing_prerequisites_are_config_errors() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(
        run(
            tmp.path(),
            &[
                "synth",
                "--pattern",
                "123",
                "--A",
                "0",
                "--B",
                "0",
                "--C",
                "0"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(tmp.path(), &["schedule"]).status.code(), Some(2));
    ok(tmp.path(), &["build", "--r", "4", "--s", "18"]);
    assert_eq!(
        run(
            tmp.path(),
            &[
                "synth",
                "--pattern",
                "123",
                "--A",
                "4",
                "--B",
                "0",
                "--C",
                "0"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(
            tmp.path(),
            &[
                "synth",
                "--pattern",
                "321",
                "--A",
                "0",
                "--B",
                "0",
                "--C",
                "0"
            ]
        )
        .status
        .code(),
        Some(2)
    );
}
