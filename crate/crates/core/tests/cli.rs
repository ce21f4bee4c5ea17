use std::path::PathBuf;
use std::process::{Command, Output};

fn indist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indist"))
        .args(args)
        .output()
        .expect("run indist")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("indist-cli-{}-{name}", std::process::id()))
}

#[test]
fn localized_entropy_of_spot_document() {
    let out = stdout(&indist(&[
        "entropy",
        "--method",
        "lt",
        "--region",
        "L",
        &data("boson_spot.lfc"),
    ]));
    assert!(out.starts_with("0.693147"), "{out}");
    let out = stdout(&indist(&[
        "entropy",
        "--method",
        "sq",
        &data("boson_spot.lfc"),
    ]));
    let value: f64 = out.trim().parse().unwrap();
    assert!((value - 0.2756).abs() < 1e-3);
}

#[test]
fn verify_report() {
    let out = stdout(&indist(&[
        "verify",
        "--trials",
        "200",
        "--spatial",
        "2",
        "--internal",
        "2",
        "--seed",
        "7",
    ]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["trials"], 200);
    assert!(report["global_max"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["per_trial"].as_array().unwrap().len(), 200);
    let keys: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(
        keys,
        [
            "seed",
            "trials",
            "spatial",
            "internal",
            "tolerance",
            "global_max",
            "pass",
            "per_trial"
        ]
    );
}

#[test]
fn both_reductions_agree_over_all_modes() {
    for file in ["boson_spot.lfc", "fermion_spot.lfc"] {
        let parse = |method: &str| -> serde_json::Value {
            serde_json::from_str(&stdout(&indist(&[
                "reduce",
                "--method",
                method,
                "--region",
                "all",
                &data(file),
            ])))
            .unwrap()
        };
        let (lfc, sq) = (parse("lfc"), parse("sq"));
        assert_eq!(lfc["basis"], sq["basis"]);
        assert_eq!(lfc["basis"][1]["spatial"], "L");
        assert_eq!(lfc["basis"][1]["internal"], "dn");
        for key in ["unnormalized", "normalized"] {
            let a: Vec<Vec<[f64; 2]>> = serde_json::from_value(lfc[key].clone()).unwrap();
            let b: Vec<Vec<[f64; 2]>> = serde_json::from_value(sq[key].clone()).unwrap();
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    assert!((x[0] - y[0]).abs() < 1e-12 && (x[1] - y[1]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn localized_reduction_json() {
    let out = stdout(&indist(&[
        "reduce",
        "--method",
        "lfc",
        "--region",
        "L",
        &data("boson_spot.lfc"),
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["trace"].as_f64().unwrap() - 1.9).abs() < 1e-12);
    assert!((v["unnormalized"][2][2][0].as_f64().unwrap() - 0.35).abs() < 1e-12);
    assert_eq!(v["region"], serde_json::json!(["L"]));
}

#[test]
fn parse_prints_canonical_form() {
    let out = stdout(&indist(&["parse", &data("boson_spot.lfc")]));
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with(
        "modes {L,R} x {up,dn}\nstatistics boson\nstate 0.387298334621|L up, L dn> + "
    ));
}

#[test]
fn sweep_csv() {
    let path = temp("sweep.csv");
    let out = indist(&[
        "sweep",
        "--chi",
        "0.3,1",
        "--theta",
        "0,pi",
        "--stat",
        "boson,-1",
        "--grid",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    stdout(&out);
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "a2,theta,chi,eta,E_LT,E_SQ,lambda1,omega1,omega3,flag"
    );
    assert_eq!(lines.len(), 1 + 2 * 2 * 2 * 3);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 10));
    assert!(lines
        .contains(&"0.5,0,0.3,1,0.69314718056,0.27552116568,0.5,0.460662522117,0.0393374778826,"));
    // fermions at a = b, theta = 0, chi = 1 have no state
    assert!(lines.contains(&"0.5,0,1,-1,,,,,,zero_norm"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &[
            "verify",
            "--trials",
            "0",
            "--spatial",
            "2",
            "--internal",
            "2",
            "--seed",
            "7",
        ][..],
        &["reduce", "--method", "nope", "--region", "L", "x.lfc"],
        &["frobnicate"],
        &[
            "sweep", "--chi", "0.3", "--theta", "tau", "--stat", "boson", "--grid", "3", "--out",
            "x.csv",
        ],
    ] {
        let out = indist(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_with_one() {
    let bad = temp("bad.lfc");
    std::fs::write(&bad, "modes {L,R} x {up,dn}\nstate |L up, R dn>\n").unwrap();
    let out = indist(&["parse", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2:1: missing `statistics`"), "{err}");

    let out = indist(&[
        "entropy",
        "--method",
        "lt",
        "--region",
        "Q",
        &data("boson_spot.lfc"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = indist(&["entropy", "--method", "lt", &data("boson_spot.lfc")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "verify",
        "--trials",
        "30",
        "--spatial",
        "3",
        "--internal",
        "1",
        "--seed",
        "123",
    ];
    assert_eq!(indist(&args).stdout, indist(&args).stdout);
}
