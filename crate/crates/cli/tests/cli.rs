use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use arcsine_fock::scalar::ratio;
use arcsine_fock::{moment_by_tridiagonal, parse_exact, JacobiSequence, NumberState};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcsine-fock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of a CSV body, header checked.
fn rows(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn assert_svg(path: &Path) -> roxmltree::Document<'static> {
    let text: &'static str = Box::leak(fs::read_to_string(path).unwrap().into_boxed_str());
    let doc = roxmltree::Document::parse(text).expect("well-formed SVG");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    doc
}

fn count_tag(doc: &roxmltree::Document, tag: &str) -> usize {
    doc.descendants()
        .filter(|n| n.tag_name().name() == tag)
        .count()
}

#[test]
fn moments_examples() {
    let out = cli(&[
        "moments", "--jacobi", "standard", "--N", "1", "--orders", "4",
    ]);
    assert!(out.status.success());
    assert_eq!(
        rows(&stdout(&out), "N,order,scale,scaled_moment"),
        [["1", "4", "1", "15/4"]]
    );

    let out = cli(&[
        "moments",
        "--jacobi",
        r#"{"kind":"q","q":"0"}"#,
        "--N",
        "5",
        "--orders",
        "2,4",
        "--scale",
        "canonical",
    ]);
    let r = rows(&stdout(&out), "N,order,scale,scaled_moment");
    assert_eq!(r[0][3], "1");
    assert_eq!(r[1][3], "3/2");
}

#[test]
fn moment_strings_parse_back_to_library_values() {
    let out = cli(&[
        "moments",
        "--jacobi",
        "q=2/3",
        "--N",
        "0,4,9",
        "--orders",
        "0,1,2,6,10",
        "--scale",
        "5/7",
    ]);
    let seq = JacobiSequence::parse("q=2/3").unwrap();
    for r in rows(&stdout(&out), "N,order,scale,scaled_moment") {
        let n: usize = r[0].parse().unwrap();
        let order: usize = r[1].parse().unwrap();
        let lib = moment_by_tridiagonal(&seq, NumberState::new(n), order, &ratio(5, 7)).unwrap();
        assert_eq!(parse_exact(&r[3]).unwrap(), lib);
    }
}

#[test]
fn engines_agree_through_the_cli() {
    let args = |engine| {
        [
            "moments",
            "--jacobi",
            "q=1/2",
            "--N",
            "0,3,6",
            "--orders",
            "0,2,4,6,8",
            "--engine",
            engine,
        ]
    };
    assert_eq!(cli(&args("words")).stdout, cli(&args("tridiagonal")).stdout);
}

#[test]
fn invalid_configs_exit_2_naming_the_field() {
    for (args, field) in [
        (vec!["moments", "--N", "-1"], "--N"),
        (vec!["moments", "--orders", "x"], "--orders"),
        (vec!["moments", "--jacobi", "q=3/2"], "--jacobi"),
        (
            vec!["moments", "--jacobi", r#"{"kind":"bogus"}"#],
            "--jacobi",
        ),
        (vec!["moments", "--scale", "0"], "--scale"),
        (
            vec![
                "moments",
                "--jacobi",
                r#"{"kind":"explicit","omega":["1"]}"#,
                "--N",
                "2",
            ],
            "--jacobi",
        ),
        (vec!["classical", "--A2", "0"], "--A2"),
        (vec!["classical", "--A2", "-1/2"], "--A2"),
        (vec!["reconstruct", "--N", "1,2"], "--N"),
        (
            vec!["reconstruct", "--jacobi", "q=1/2", "--density", "d.csv"],
            "--density",
        ),
    ] {
        let out = cli(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(field), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn caps_exit_3() {
    for args in [
        vec!["moments", "--orders", "26", "--engine", "words"],
        vec!["reconstruct", "--N", "5", "--K", "6"],
        vec!["reconstruct", "--N", "0", "--K", "5000"],
    ] {
        assert_eq!(cli(&args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn converge_examples() {
    let out = cli(&["converge", "--N", "1,10,100", "--orders", "2"]);
    let r = rows(
        &stdout(&out),
        "N,order,scaled_moment,target,abs_diff,env_lo,env_hi",
    );
    let diffs: Vec<&str> = r.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(diffs, ["1/2", "1/20", "1/200"]);

    let out = cli(&["converge", "--orders", "0"]);
    let r = rows(
        &stdout(&out),
        "N,order,scaled_moment,target,abs_diff,env_lo,env_hi",
    );
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|r| r[4] == "0"));
}

#[test]
fn converge_plot_has_one_polyline_per_order() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("out.svg");
    let out = cli(&[
        "converge",
        "--N",
        "1,10,100",
        "--orders",
        "0,2,4,8",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = assert_svg(&plot);
    assert_eq!(count_tag(&doc, "polyline"), 4);
}

#[test]
fn converge_json_carries_exact_strings() {
    let out = cli(&["converge", "--N", "10", "--orders", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["N"], 10);
    assert_eq!(
        parse_exact(row["scaled_moment"].as_str().unwrap()).unwrap(),
        ratio(663, 400)
    );
    assert_eq!(row["envelope"]["lower"], "27/20");
}

#[test]
fn reconstruct_vacuum_second_moment() {
    let out = cli(&["reconstruct", "--N", "0", "--K", "50"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("ks_distance_to_arcsine"));
    let mut mass = 0.0;
    let mut m2 = 0.0;
    for r in rows(&stdout(&out), "location,weight") {
        let x: f64 = r[0].parse().unwrap();
        let w: f64 = r[1].parse().unwrap();
        mass += w;
        m2 += w * x * x;
    }
    assert!((mass - 1.0).abs() < 1e-12);
    assert!((m2 - 0.5).abs() < 1e-10, "{m2}");
}

#[test]
fn reconstruct_boundary_warns() {
    let out = cli(&["reconstruct", "--N", "5", "--K", "7"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));
    assert!(!stderr(&cli(&["reconstruct", "--N", "5"])).contains("warning"));
}

#[test]
fn reconstruct_ks_improves_with_n() {
    let ks = |n: &str, k: &str| {
        let out = cli(&[
            "reconstruct",
            "--N",
            n,
            "--K",
            k,
            "--scale",
            "canonical",
            "--format",
            "json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["ks_distance"].as_f64().unwrap()
    };
    assert!(ks("200", "464") < ks("20", "104"));
}

#[test]
fn reconstruct_density_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let density = dir.path().join("d.csv");
    let plot = dir.path().join("r.svg");
    let out = cli(&[
        "reconstruct",
        "--N",
        "6",
        "--density",
        density.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let grid = rows(&fs::read_to_string(&density).unwrap(), "x,density");
    let xs: Vec<f64> = grid.iter().map(|r| r[0].parse().unwrap()).collect();
    let fs_: Vec<f64> = grid.iter().map(|r| r[1].parse().unwrap()).collect();
    let h = xs[1] - xs[0];
    assert!((fs_.iter().sum::<f64>() * h - 1.0).abs() < 1e-6);
    let doc = assert_svg(&plot);
    // Arcsine curve and Hermite density, plus the weight markers.
    assert_eq!(count_tag(&doc, "polyline"), 2);
    assert!(count_tag(&doc, "circle") > 10);
}

#[test]
fn classical_examples() {
    let r = rows(
        &stdout(&cli(&["classical", "--A2", "2", "--orders", "2,4,6"])),
        "order,closed_form,quadrature,abs_diff",
    );
    let closed: Vec<&str> = r.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(closed, ["1", "3/2", "5/2"]);
    for row in &r {
        assert!(row[3].parse::<f64>().unwrap() < 1e-12);
    }
    let r = rows(
        &stdout(&cli(&["classical", "--A2", "4", "--orders", "2"])),
        "order,closed_form,quadrature,abs_diff",
    );
    assert_eq!(r[0][1], "2");
    assert!((r[0][2].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    let r = rows(
        &stdout(&cli(&["classical", "--A2", "2", "--orders", "3"])),
        "order,closed_form,quadrature,abs_diff",
    );
    assert_eq!(r[0][1], "0");
}

#[test]
fn classical_json_shape() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&cli(&[
        "classical",
        "--A2",
        "9/4",
        "--orders",
        "2,4",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(v["law"], "classical_oscillator");
    assert_eq!(v["params"]["A2"], "9/4");
    assert_eq!(v["moments"], serde_json::json!(["9/8", "243/128"]));
}

#[test]
fn selfcheck_passes_and_catches_faults() {
    let out = cli(&["selfcheck", "--fast"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 4);

    let out = cli(&[
        "selfcheck",
        "--fast",
        "--inject-fault",
        "words-vs-tridiagonal",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let fail = stdout(&out)
        .lines()
        .find(|l| l.starts_with("FAIL"))
        .unwrap()
        .to_string();
    assert!(
        fail.contains("words-vs-tridiagonal") && fail.contains("N=0"),
        "{fail}"
    );

    let out = cli(&["selfcheck", "--fast", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|s| s["passed"] == true));
}

#[test]
fn out_and_format_are_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["moments", "--N", "2,3"],
        &["converge", "--N", "1,10"],
        &["reconstruct", "--N", "3"],
        &["classical"],
        &["selfcheck", "--fast"],
    ];
    for (i, base) in cases.iter().enumerate() {
        for format in ["csv", "json", "svg"] {
            let path = dir.path().join(format!("{i}.{format}"));
            let mut args = base.to_vec();
            args.extend(["--format", format]);
            let direct = cli(&args);
            assert!(direct.status.success(), "{args:?}");
            args.extend(["--out", path.to_str().unwrap()]);
            let to_file = cli(&args);
            assert!(to_file.status.success() && to_file.stdout.is_empty());
            assert_eq!(fs::read(&path).unwrap(), direct.stdout, "{args:?}");
            match format {
                "json" => {
                    serde_json::from_slice::<serde_json::Value>(&direct.stdout).unwrap();
                }
                "svg" => {
                    assert_svg(&path);
                }
                _ => {}
            }
        }
    }
}

#[test]
fn print_config_round_trips_flags() {
    let out = cli(&[
        "reconstruct",
        "--N",
        "7",
        "--K",
        "40",
        "--scale",
        "3/2",
        "--jacobi",
        "q=1/3",
        "--print-config",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "reconstruct");
    assert_eq!(v["N"], serde_json::json!([7]));
    assert_eq!(v["K"], 40);
    assert_eq!(v["scale"], "3/2");
    assert_eq!(v["jacobi"], serde_json::json!({"kind": "q", "q": "1/3"}));
}
