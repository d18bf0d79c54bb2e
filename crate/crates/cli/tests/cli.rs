use std::io::Write;
use std::process::{Command, Output};

fn ballmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballmap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = ballmap(&a);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)))
}

#[test]
fn gaps_table_and_json() {
    let o = ballmap(&["gaps", "8"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert!(t.contains("K = 3"));
    assert!(t.contains("  3      25      25"));
    let j = json(&["gaps", "10", "--target", "32"]);
    assert_eq!(j["K"], 3);
    assert_eq!(j["intervals"][2]["lo"], 31);
    assert_eq!(j["intervals"][2]["hi"], 33);
    assert_eq!(j["target"]["thm11_applies"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(ballmap(&["verify-proper", "catalog:whitney:3"]).status.code(), Some(0));
    assert_eq!(ballmap(&["gaps"]).status.code(), Some(2));
    assert_eq!(ballmap(&["hull", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(ballmap(&["identities", "catalog:whitney:3"]).status.code(), Some(3));
    assert_eq!(ballmap(&["hull", "catalog:dangelo:3:1/2"]).status.code(), Some(3));
    assert_eq!(ballmap(&["monomial-search", "2", "4", "--degree", "2", "--support", "/no/such"]).status.code(), Some(2));

    let mut file = tempfile();
    writeln!(file.1, "model=ball n=2 N=2\nz1\n2*z2\ndenominator: 1").unwrap();
    let o = ballmap(&["verify-proper", &file.0, "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["proper"], false);
    assert!(j["witness"].is_string());
}

fn tempfile() -> (String, std::fs::File) {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("ballmap-cli-{}.map", std::process::id()));
    let f = std::fs::File::create(&path).unwrap();
    (path.to_string_lossy().into_owned(), f)
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        vec!["rank", "catalog:whitney:3", "--points", "4", "--seed", "9", "--json"],
        vec!["span", "catalog:example11:4", "--json"],
        vec!["monomial-search", "3", "9", "--degree", "3", "--pattern", "example11", "--json"],
        vec!["catalog", "--json"],
    ] {
        let a = ballmap(&args);
        let b = ballmap(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn catalog_self_check_passes() {
    let j = json(&["catalog", "--self-check", "--points", "2"]);
    assert_eq!(j["ok"], true);
    let names: Vec<&str> = j["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn transport_round_trips_properness() {
    let o = ballmap(&["transport", "catalog:whitney:3", "--to", "siegel"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("model=siegel n=3 N=5"));
    let path = std::env::temp_dir().join(format!("ballmap-siegel-{}.map", std::process::id()));
    std::fs::write(&path, &text).unwrap();
    let j = json(&["verify-proper", path.to_str().unwrap()]);
    assert_eq!(j["proper"], true);
    let h = json(&["hull", path.to_str().unwrap()]);
    assert_eq!(h["affine_hull"], 5);
}

#[test]
fn monomial_patterns() {
    let j = json(&["monomial-search", "2", "3", "--degree", "2", "--pattern", "whitney"]);
    assert_eq!(j["feasible"], true);
    assert_eq!(j["family_dim"], 0);
    assert_eq!(j["solution"]["x"], serde_json::json!(["1", "1", "1"]));
    let o = ballmap(&["monomial-search", "2", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rank_and_normalize() {
    let j = json(&["rank", "catalog:example11:4", "--points", "3"]);
    assert_eq!(j["rank"], 2);
    let j = json(&["normalize", "catalog:whitney:3", "--at", "1/3,-2/7;1/4"]);
    assert_eq!(j["rank"], 1);
    assert!(j["clauses"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let j = json(&["--mode", "float", "normalize", "catalog:example11:7", "--at", "1/3,-2/7,1/5+1/2*i,1/7,1/9,1/11;1/4"]);
    assert_eq!(j["kappa0"], 2);
    assert!(j["clauses"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
