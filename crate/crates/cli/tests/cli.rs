use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn parcon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parcon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error object");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_slsl_random_seed_is_connected() {
    let out = parcon(&["analyze", "--family", "SLxSL(2,1)", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    assert_eq!(r["components"], 1);
    assert!(r["trace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn analyze_named_witnesses() {
    let out = parcon(&[
        "analyze",
        "--family",
        "S_GLxGL(2,2)",
        "--witness",
        "sglgl-negative",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    assert_eq!(r["components"], 2);
    assert_eq!(r["witness"].as_array().unwrap().len(), 2);

    let out = parcon(&["analyze", "--family", "SO(4)", "--witness", "so-standard"]);
    assert_eq!(json_out(&out)["components"], 8);
}

#[test]
fn so_on_a_random_flag_is_unsupported() {
    let out = parcon(&["analyze", "--family", "SO(3)", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_kind(&out), "unsupported");
    assert!(out.stdout.is_empty());
}

#[test]
fn witness_family_mismatch_is_a_usage_error() {
    let out = parcon(&[
        "analyze",
        "--family",
        "SLxSL(2,2)",
        "--witness",
        "sglgl-negative",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn adapt_standard_flag_lemma_two_is_hyperbolic() {
    let input = scratch("standard4.json");
    std::fs::write(
        &input,
        r#"{"flag": {"n": 4, "generators": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]},
            "omega": [[0,1,0,0],[-1,0,0,0],[0,0,0,1],[0,0,-1,0]]}"#,
    )
    .unwrap();
    let out = parcon(&["adapt", "--lemma", "2", "--input", input.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let p = json_out(&out);
    let pairing = p["pairing"].as_object().unwrap();
    assert_eq!(pairing.len(), 4);
    assert_eq!(pairing["0"], 1);
    assert_eq!(pairing["2"], 3);
}

#[test]
fn adapt_degenerate_form_is_a_precondition_failure() {
    let input = scratch("degenerate.json");
    std::fs::write(
        &input,
        r#"{"flag": {"n": 2, "generators": [[1,0],[0,1]]}, "omega": [[0,0],[0,0]]}"#,
    )
    .unwrap();
    let out = parcon(&["adapt", "--lemma", "2", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "precondition");
}

#[test]
fn malformed_input_is_a_parse_error() {
    let input = scratch("malformed.json");
    std::fs::write(&input, r#"{"flag": {"n": 2, "generators": [[1,0]"#).unwrap();
    let out = parcon(&["adapt", "--lemma", "1", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "parse");

    let out = parcon(&["analyze", "--family", "SLxSL(0,0)", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = parcon(&["analyze", "--family", "SLxSL(1,1)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dependent_flag_is_a_precondition_failure() {
    let flag = scratch("dependent.json");
    std::fs::write(&flag, r#"{"n": 2, "generators": [[1,2],[2,4]]}"#).unwrap();
    let out = parcon(&[
        "analyze",
        "--family",
        "GLxGL(1,1)",
        "--flag",
        flag.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn adapt_then_analyze_matches_one_shot() {
    let cases: [(&str, &[&str]); 4] = [
        (
            "SLxSL(2,1)",
            &["--lemma", "1", "--dim", "3", "--u-dim", "2"],
        ),
        (
            "DetEqual(2,2)",
            &["--lemma", "1", "--dim", "4", "--u-dim", "2"],
        ),
        ("Sp(4)", &["--lemma", "2", "--dim", "4"]),
        ("SpOdd(4)", &["--lemma", "3", "--dim", "5"]),
    ];
    for (family, adapt_args) in cases {
        for seed in ["3", "17"] {
            let p = scratch(&format!("pipe-{family}-{seed}.json"));
            let mut args = vec!["adapt", "--seed", seed, "--output", p.to_str().unwrap()];
            args.extend_from_slice(adapt_args);
            assert_eq!(parcon(&args).status.code(), Some(0));
            let piped = parcon(&[
                "analyze",
                "--family",
                family,
                "--presentation",
                p.to_str().unwrap(),
            ]);
            let direct = parcon(&["analyze", "--family", family, "--seed", seed]);
            assert_eq!(
                piped.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&piped.stderr)
            );
            assert_eq!(piped.stdout, direct.stdout, "{family} seed {seed}");
        }
    }
}

#[test]
fn flag_file_matches_seeded_flag() {
    let family = "SpT1(4)";
    let direct = parcon(&["analyze", "--family", family, "--seed", "9"]);
    let flag = parcon_core::flags::random_flag(5, 9);
    let path = scratch("flag9.json");
    std::fs::write(&path, serde_json::to_string(&flag).unwrap()).unwrap();
    let from_file = parcon(&[
        "analyze",
        "--family",
        family,
        "--flag",
        path.to_str().unwrap(),
    ]);
    assert_eq!(direct.stdout, from_file.stdout);
}

#[test]
fn reruns_are_byte_identical() {
    let commands: [&[&str]; 4] = [
        &["analyze", "--family", "SpT1(4)", "--seed", "5"],
        &[
            "fuzz",
            "--family",
            "DetEqual(2,1)",
            "--trials",
            "30",
            "--seed",
            "8",
        ],
        &[
            "fuzz", "--lemma", "1", "--dim", "6", "--trials", "30", "--seed", "8",
        ],
        &[
            "oracle",
            "--check",
            "snf-vs-minors",
            "--trials",
            "40",
            "--seed",
            "8",
        ],
    ];
    for args in commands {
        let a = parcon(args);
        let b = parcon(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn fuzz_examples() {
    for family in ["SLxSL(1,1)", "Sp(4)"] {
        let out = parcon(&["fuzz", "--family", family, "--trials", "100", "--seed", "0"]);
        assert_eq!(out.status.code(), Some(0));
        let s = json_out(&out);
        assert_eq!(s["failures"].as_array().unwrap().len(), 0);
        assert_eq!(s["components"]["1"], 100);
    }
    let out = parcon(&[
        "fuzz", "--lemma", "1", "--dim", "6", "--trials", "100", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn fuzz_rejects_so_and_bad_lemma_dimensions() {
    let out = parcon(&["fuzz", "--family", "SO(3)", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(4));
    let out = parcon(&["fuzz", "--lemma", "2", "--dim", "5", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = parcon(&["fuzz", "--family", "Sp(2)", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_examples() {
    let out = parcon(&[
        "oracle",
        "--check",
        "snf-vs-minors",
        "--trials",
        "1000",
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["agreed"], 1000);

    let out = parcon(&[
        "oracle",
        "--check",
        "pointcount-vs-enumeration",
        "--q",
        "5",
        "--trials",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["mismatches"], 0);

    let out = parcon(&["oracle", "--check", "sp-odd-bruteforce", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    assert_eq!(r["mismatches"], 0);
    for inst in r["instances"].as_array().unwrap() {
        let c = &inst["counts"];
        let members = c["members"].as_u64().unwrap();
        assert_eq!(
            members,
            c["diagonal"].as_u64().unwrap() * c["unipotent"].as_u64().unwrap()
        );
    }
}

#[test]
fn oracle_guards() {
    let out = parcon(&[
        "oracle",
        "--check",
        "pointcount-vs-enumeration",
        "--q",
        "11",
        "--trials",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_kind(&out), "guard");
    let out = parcon(&["oracle", "--check", "sp-odd-bruteforce", "--q", "5"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn data_file_overrides_standard_data() {
    let data = scratch("sp2-data.json");
    std::fs::write(&data, r#"{"omega": [[0, "2/3"], ["-2/3", 0]]}"#).unwrap();
    let out = parcon(&[
        "analyze",
        "--family",
        "Sp(2)",
        "--seed",
        "4",
        "--data",
        data.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json_out(&out)["components"], 1);

    std::fs::write(
        &data,
        r#"{"omega": [[0, 1], [-1, 0]], "w_basis": [[1, 0]]}"#,
    )
    .unwrap();
    let out = parcon(&[
        "analyze",
        "--family",
        "Sp(2)",
        "--seed",
        "4",
        "--data",
        data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
