use std::process::{Command, Output};

use serde_json::Value;

fn forestlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forestlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn enumerate_four_vertices() {
    let out = forestlab(&["enumerate", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["forests"], 38);
    assert_eq!(v["trees"], 16);
    assert_eq!(v["p_connected"], "16/38");
    assert_eq!(v["M"], serde_json::json!(["16", "15", "6", "1"]));
}

#[test]
fn enumerate_lists_every_forest() {
    let out = forestlab(&["enumerate", "--w", "2,1,1", "--list"]);
    let all = lines(&out);
    assert_eq!(all.len(), 8);
    let total: u64 = all[..7]
        .iter()
        .map(|v| v["mass"].as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(all[7]["K"], total.to_string());
}

#[test]
fn verify_unit_triangle_passes() {
    let out = forestlab(&["verify", "--w", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let all = lines(&out);
    assert!(all.iter().all(|v| v["holds"] == true));
    let names: Vec<_> = all.iter().map(|v| v["lemma"].as_str().unwrap()).collect();
    for name in [
        "mass_flow",
        "ratio_bound",
        "partition_minimum",
        "two_component",
        "pendant_formula",
        "connectivity_bound",
    ] {
        assert!(names.contains(&name), "missing {name}");
    }
}

#[test]
fn cascade_hypothesis_failure_carries_witness() {
    let out = forestlab(&["verify", "--w", "1,1,1,1", "--gamma", "1/2"]);
    let last = lines(&out).pop().unwrap();
    assert_eq!(last["lemma"], "cascade_hypothesis");
    assert_eq!(last["holds"], false);
    assert_eq!(last["witness"], serde_json::json!([1, 2]));
}

#[test]
fn constants_reach_one_half() {
    let out = forestlab(&["constants", "--terms", "1000000"]);
    let v = &lines(&out)[0];
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(v["precision"], "f64");
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        &[
            "sample",
            "--w",
            "1,1,1,1",
            "--samples",
            "300000",
            "--seed",
            "9",
        ][..],
        &["scan", "--n", "4", "--count", "30", "--seed", "5"][..],
        &["trend", "--n-max", "40"][..],
    ] {
        let one = forestlab(&[args, &["--threads", "1"]].concat());
        let four = forestlab(&[args, &["--threads", "4"]].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, forestlab(args).stdout);
    }
}

#[test]
fn sample_frequencies_add_up() {
    let out = forestlab(&[
        "sample",
        "--w",
        "2,1,1",
        "--samples",
        "50000",
        "--seed",
        "1",
    ]);
    let v = &lines(&out)[0];
    let freq = v["tree_freq"].as_object().unwrap();
    assert_eq!(
        freq.values().map(|c| c.as_u64().unwrap()).sum::<u64>(),
        50_000
    );
    assert_eq!(v["tree_law"], serde_json::json!(["1/2", "1/4", "1/4"]));
}

#[test]
fn graph_file_weights_come_from_bridge_core() {
    let dir = std::env::temp_dir().join(format!("forestlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    std::fs::write(
        &path,
        "# triangle with a pendant vertex\nn 4\n1 2\n2 3\n1 3\n3 4\n",
    )
    .unwrap();
    let out = forestlab(&["enumerate", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["W"], 4);
    assert_eq!(v["p_connected"], "3/4");

    std::fs::write(&path, "n 3\n1 4\n").unwrap();
    assert_eq!(
        forestlab(&["enumerate", "--graph", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("forestlab-out-{}.jsonl", std::process::id()));
    let out = forestlab(&[
        "trend",
        "--n-max",
        "4",
        "--exact",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.contains("\"exact\":\"15/16\"")));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn malformed_input_exits_with_two() {
    for args in [
        &["enumerate", "--w", "1,0"][..],
        &["enumerate", "--n", "12"][..],
        &["pendant", "--w", "1,1,1", "--code", "7"][..],
        &["scan", "--n", "9"][..],
        &["verify", "--w", "1,1", "--gamma", "half"][..],
        &["enumerate"][..],
    ] {
        assert_eq!(forestlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn scan_reports_every_class() {
    let out = forestlab(&[
        "scan",
        "--n",
        "3",
        "--count",
        "25",
        "--mode",
        "alterable",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let all = lines(&out);
    assert_eq!(all.len(), 25);
    for v in &all {
        assert_eq!(v["bridge_alterable"], true);
        assert_eq!(v["blocks_hold"], true);
        assert!(v["p_class"].as_str().unwrap().contains('/'));
    }
}
