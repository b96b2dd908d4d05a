use std::path::Path;
use std::process::{Command, Output};

const SIX_FOUR: &str = "{a^6};{a*^4};{a*}";
const FOUR_THREE: &str = "{a^4};{a*^3};{a*}";

fn flextile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flextile")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_rref_and_closed_form() {
    let out = flextile(&["--pot", SIX_FOUR, "analyze"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("(1, 0, 3/10 | 2/5)\n  (0, 1, 7/10 | 3/5)"));
    assert!(text.contains("1/(10k)<4k-3z, 6k-7z, 10z>"));
    assert!(text.contains("m_P = 4"));
}

#[test]
fn analyze_reads_pot_files_and_prefers_inline() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "pot.txt", "{a^3};\n{a*^3};\n{a*}\n");
    let from_file = stdout(&flextile(&["analyze", &file]));
    assert!(from_file.contains("d = gcd(e1+1, e2-1) = 2"));
    assert!(from_file.contains("zeta = not-applicable"));
    let inline = stdout(&flextile(&["--pot", SIX_FOUR, "analyze", &file]));
    assert!(inline.contains("zeta = 7"));
}

#[test]
fn malformed_pot_exits_two_with_position() {
    let out = flextile(&["--pot", "{a^6};{a*^4", "analyze"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn orders_tables() {
    let out = stdout(&flextile(&["--json", "--pot", SIX_FOUR, "orders", "--max", "8"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = doc["orders"].as_array().unwrap();
    let witness = |n: usize| rows[n - 1]["witness"].clone();
    for n in [1, 2, 3, 6] {
        assert_eq!(witness(n), serde_json::Value::Null);
    }
    assert_eq!(witness(4), serde_json::json!([1, 1, 2]));
    assert_eq!(witness(5), serde_json::json!([2, 3, 0]));
    assert_eq!(witness(7), serde_json::json!([1, 0, 6]));
    assert_eq!(witness(8), serde_json::json!([2, 2, 4]));

    let realizable = |pot: &str, max: &str| -> Vec<u64> {
        let doc: serde_json::Value =
            serde_json::from_str(&stdout(&flextile(&["--json", "--pot", pot, "orders", "--max", max]))).unwrap();
        doc["orders"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|r| r["realizable"] == true)
            .map(|r| r["order"].as_u64().unwrap())
            .collect()
    };
    assert_eq!(realizable("{a^3};{a*^3};{a*}", "6"), vec![2, 4, 6]);
    assert_eq!(realizable("{a^9};{a*^6};{a*}", "15"), vec![5, 10, 15]);
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        vec!["--json", "--pot", SIX_FOUR, "analyze"],
        vec!["--json", "--pot", SIX_FOUR, "orders", "--max", "20"],
        vec!["--json", "--pot", SIX_FOUR, "build", "--order", "23"],
    ] {
        assert_eq!(flextile(&args).stdout, flextile(&args).stdout);
    }
}

#[test]
fn path_build_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let dot = stdout(&flextile(&["--pot", FOUR_THREE, "build", "--distribution", "7,3,19", "--algorithm", "path", "--format", "dot"]));
    assert!(dot.starts_with("digraph complex {"));
    assert_eq!(dot.matches("->").count(), 28);
    assert_eq!(dot.matches("[label=\"t").count(), 29);

    let json = stdout(&flextile(&["--pot", FOUR_THREE, "build", "--distribution", "7,3,19", "--algorithm", "path", "--format", "json"]));
    let graph = write(dir.path(), "g.json", &json);
    let out = flextile(&["check", &graph]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("realization: valid"));
    assert!(text.contains("tile distribution: (7,3,19)"));
    assert!(text.contains("components: 1 (connected)"));
}

#[test]
fn cycle_build_has_order_nineteen() {
    let out = flextile(&["--json", "--pot", SIX_FOUR, "build", "--distribution", "7,10,2", "--algorithm", "cycle"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 19);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 42);
}

#[test]
fn every_built_graph_passes_check() {
    let dir = tempfile::tempdir().unwrap();
    for pot in [SIX_FOUR, FOUR_THREE, "{a};{a*^5};{a^3}"] {
        for n in 1..=14 {
            let out = flextile(&["--pot", pot, "build", "--order", &n.to_string(), "--format", "json"]);
            if code(&out) != 0 {
                assert_eq!(code(&out), 1, "{pot} n={n}");
                continue;
            }
            let graph = write(dir.path(), "g.json", &stdout(&out));
            let check = flextile(&["--json", "--pot", pot, "check", &graph]);
            assert_eq!(code(&check), 0, "{pot} n={n}");
            let doc: serde_json::Value = serde_json::from_str(&stdout(&check)).unwrap();
            assert_eq!(doc["connected"], true);
            assert_eq!(doc["order"], n);
        }
    }
}

#[test]
fn build_failures() {
    assert_eq!(code(&flextile(&["--pot", SIX_FOUR, "build", "--order", "6"])), 1);
    let out = flextile(&["--pot", SIX_FOUR, "build", "--distribution", "5,1,26", "--algorithm", "path"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 + R2(e2-1) >= R1"));
    assert_eq!(code(&flextile(&["--pot", SIX_FOUR, "build", "--order", "4", "--algorithm", "nope"])), 2);
    assert_eq!(code(&flextile(&["--pot", SIX_FOUR, "build"])), 2);
}

#[test]
fn check_flags_loops_and_counts_components() {
    let dir = tempfile::tempdir().unwrap();
    let looped = write(
        dir.path(),
        "loop.json",
        r#"{"pot":"{a^3};{a*^3};{a*}","vertices":[{"id":0,"tile":1},{"id":1,"tile":2}],
            "edges":[{"from":0,"to":0,"label":"a"},{"from":0,"to":1,"label":"a"},{"from":0,"to":1,"label":"a"}]}"#,
    );
    let out = flextile(&["check", &looped]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("loop"));

    let twins = write(
        dir.path(),
        "twins.json",
        r#"{"pot":"{a^3};{a*^3};{a*}","vertices":[{"id":0,"tile":1},{"id":1,"tile":2},{"id":2,"tile":1},{"id":3,"tile":2}],
            "edges":[{"from":0,"to":1,"label":"a"},{"from":0,"to":1,"label":"a"},{"from":0,"to":1,"label":"a"},
                     {"from":2,"to":3,"label":"a"},{"from":2,"to":3,"label":"a"},{"from":2,"to":3,"label":"a"}]}"#,
    );
    let pot_file = write(dir.path(), "pot.txt", "{a^3};{a*^3};{a*}");
    let out = flextile(&["check", &twins, &pot_file]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("realization: valid"));
    assert!(stdout(&out).contains("components: 2\n"));

    let broken = write(dir.path(), "bad.json", "{\"pot\": 3}");
    assert_eq!(code(&flextile(&["check", &broken])), 2);
}

#[test]
fn spectrum_lists_distributions() {
    let out = flextile(&["--json", "--pot", "{a^3};{a*^3};{a*}", "spectrum", "--order", "4"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["distributions"], serde_json::json!([[1, 0, 3], [2, 2, 0]]));
    assert_eq!(code(&flextile(&["--pot", SIX_FOUR, "spectrum", "--order", "6"])), 1);
}

#[test]
fn oversized_enumeration_exits_three() {
    let out = flextile(&["--pot", "{a,b};{a*};{b*}", "spectrum", "--order", "1000000"]);
    assert_eq!(code(&out), 3);
}
