use std::process::{Command, Output};

fn evans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evans"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    evans(args).status.code().expect("exit code")
}

const METRIC_GRID: &[&str] = &[
    "grid", "--domain", "c0", "--kernel", "metric", "--s", "1", "--x-min", "1", "--x-max", "2",
    "--y-min", "1", "--y-max", "2", "--nx", "2", "--ny", "2",
];

#[test]
fn eval_prints_log_two() {
    let out = evans(&[
        "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q", "-1+0i",
    ]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "6.931471805599453e-1\n"
    );
}

#[test]
fn grid_file_layout_and_masking() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metric.csv");
    let mut args = METRIC_GRID.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(code(&args), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    assert_eq!(lines[0], "x,y,value");
    assert_eq!(lines.len(), 5);
    assert!(!text.contains('\r'));
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&first[..2], &["1", "1"]);
    assert_eq!(first[2].parse::<f64>().unwrap(), 1.0 / 2f64.sqrt());
    // rows run over x first
    assert!(lines[2].starts_with("2,1,"));

    let masked = evans(&[
        "grid",
        "--domain",
        "c0",
        "--kernel",
        "evans",
        "--l",
        "0.5",
        "--q",
        "2+0i",
        "--x-min",
        "-1",
        "--x-max",
        "1",
        "--y-min",
        "-1",
        "--y-max",
        "1",
        "--nx",
        "21",
        "--ny",
        "21",
        "--mask-radius",
        "0.1",
    ]);
    assert!(masked.status.success());
    for line in String::from_utf8(masked.stdout).unwrap().lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let near = cells[0].hypot(cells[1]) < 0.1;
        assert_eq!(cells[2].is_nan(), near, "{line}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("g{i}.csv"));
            let mut args = METRIC_GRID.to_vec();
            args.extend(["--out", path.to_str().unwrap()]);
            assert_eq!(code(&args), 0);
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);

    let a = evans(&["converge", "--seed", "7"]).stdout;
    let b = evans(&["converge", "--seed", "7"]).stdout;
    assert_eq!(a, b);
    let c = evans(&["--meta", "converge", "--seed", "7"]);
    assert_eq!(c.stdout, a);
    assert!(!c.stderr.is_empty());
}

#[test]
fn converge_report_shape() {
    let out = evans(&["converge"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let positions: Vec<usize> = [
        "\"t\"",
        "\"sup_error\"",
        "\"fitted_rate\"",
        "\"seed\"",
        "\"samples\"",
    ]
    .iter()
    .map(|k| text.find(k).unwrap())
    .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let errors: Vec<f64> = json["sup_error"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert_eq!(json["samples"].as_array().unwrap().len(), 12);

    let single: serde_json::Value =
        serde_json::from_slice(&evans(&["converge", "--t-list", "1"]).stdout).unwrap();
    assert_eq!(single["t"].as_array().unwrap().len(), 1);
    assert!(single["fitted_rate"].is_null());
}

#[test]
fn verify_reports() {
    let out = evans(&["verify", "--domain", "c0", "--k", "0.5", "--l", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let checks: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let controls = checks
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["expect"] == "fail")
        .count();
    assert!(controls >= 1);

    let out = evans(&[
        "verify",
        "--domain",
        "annulus",
        "--r",
        "0.2",
        "--include-oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let checks: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(checks
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "oracle_sup_deviation"));
}

#[test]
fn bmax_reports() {
    let out = evans(&["bmax", "--domain", "c0", "--grid-step", "0.001"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((json["min_b_max"].as_f64().unwrap() - 0.5).abs() <= 5e-4);
    assert_eq!(json["empirical_check"]["passed"], true);
    let coarse: serde_json::Value =
        serde_json::from_slice(&evans(&["bmax", "--domain", "c0", "--grid-step", "0.5"]).stdout)
            .unwrap();
    assert!(coarse["min_b_max"].as_f64().unwrap() >= 0.5);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q",
                "1+0i",
            ],
            2,
        ),
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "0", "--q", "1",
            ],
            2,
        ),
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "1.5", "--p", "2", "--q", "1",
            ],
            2,
        ),
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "nonsense",
                "--q", "1",
            ],
            2,
        ),
        (
            &[
                "eval", "--domain", "annulus", "--kernel", "green", "--r", "0.2", "--p", "9",
                "--q", "1",
            ],
            2,
        ),
        (
            &[
                "eval",
                "--domain",
                "annulus",
                "--kernel",
                "green",
                "--r",
                "0.999999",
                "--p",
                "1",
                "--q",
                "1.0000001i",
                "--tol",
                "1e-300",
            ],
            3,
        ),
        (
            &[
                "eval", "--domain", "c01", "--kernel", "metric", "--s", "0.5", "--j", "0.5", "--p",
                "2+1i",
            ],
            0,
        ),
        (
            &[
                "grid", "--domain", "c0", "--kernel", "metric", "--s", "1", "--x-min", "1",
                "--x-max", "0", "--y-min", "0", "--y-max", "1", "--nx", "2", "--ny", "2",
            ],
            2,
        ),
        (
            &[
                "grid", "--domain", "c0", "--kernel", "metric", "--s", "1", "--x-min", "0",
                "--x-max", "1", "--y-min", "0", "--y-max", "1", "--nx", "1", "--ny", "2",
            ],
            2,
        ),
        (&["converge", "--t-list", "2,1"], 2),
        (&["verify", "--domain", "c0", "--k", "1.5"], 2),
        (
            &["verify", "--domain", "c01", "--k", "0.3", "--m", "0.3"],
            0,
        ),
        (&["bmax", "--domain", "annulus"], 2),
        (&["bmax", "--domain", "c0", "--grid-step", "0"], 2),
        (&["frobnicate"], 2),
        (&["--help"], 0),
    ];
    for (args, expected) in cases {
        let out = evans(args);
        assert_eq!(
            out.status.code(),
            Some(*expected),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        if *expected != 0 {
            assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
            assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
        }
    }
}
