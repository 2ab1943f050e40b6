use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use commpress::Graph;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .env("BENCH_LOG", "off")
        .output()
        .expect("spawn bench")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn load(path: &Path) -> Graph {
    Graph::load_edge_list(std::io::BufReader::new(fs::File::open(path).unwrap()))
        .unwrap()
        .graph
}

fn write_cycle(dir: &Path) -> PathBuf {
    let path = dir.join("cycle.txt");
    fs::write(&path, "0 1\n1 2\n2 3\n3 0\n").unwrap();
    path
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.json");
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn synth_planted_cliques_without_noise() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k4.txt");
    let o = bench(&[
        "synth",
        "--kind",
        "planted-cliques",
        "--cliques",
        "2",
        "--size",
        "4",
        "--eps",
        "0",
        "--seed",
        "5",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = load(&out);
    assert_eq!((g.num_nodes(), g.num_edges()), (8, 12));
    assert_eq!(g.connected_components().num_components(), 2);
}

#[test]
fn synth_power_law_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = bench(&[
            "synth",
            "--kind",
            "power-law",
            "--n",
            "1000",
            "--attach",
            "2",
            "--seed",
            "9",
            "--out",
            p(out),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let g = load(&a);
    assert_eq!(g.num_edges(), 1997);
    assert_eq!(g.connected_components().num_components(), 1);
}

#[test]
fn synth_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    let o = bench(&[
        "synth",
        "--kind",
        "planted-cliques",
        "--cliques",
        "2",
        "--size",
        "4",
        "--eps",
        "1.5",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = bench(&["synth", "--kind", "lattice", "--n", "4", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = bench(&["synth", "--kind", "power-law", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn detect_order_cost_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("tri.txt");
    fs::write(&graph, "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
    let part = dir.path().join("tri.part");
    let o = bench(&[
        "detect",
        "--method",
        "multilevel",
        "--graph",
        p(&graph),
        "--seed",
        "1",
        "--out",
        p(&part),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&part).unwrap(), "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n");
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("tri.part.json")).unwrap()).unwrap();
    assert_eq!(meta["method"], "multilevel");
    assert_eq!(meta["num_communities"], 2);
    assert_eq!(meta["objective"], 0.5);

    let order = dir.path().join("tri.order");
    let o = bench(&[
        "order",
        "--strategy",
        "community-naive",
        "--partition",
        p(&part),
        "--graph",
        p(&graph),
        "--out",
        p(&order),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&order).unwrap().lines().count(), 6);
    assert!(dir.path().join("tri.order.json").exists());

    let o = bench(&["cost", "--graph", p(&graph), "--order", p(&order), "--block-width", "3"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // Each triangle fills one diagonal tile.
    assert_eq!(report["nonempty_blocks"], 2);
}

#[test]
fn cost_of_cycle_with_block_dump() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_cycle(dir.path());
    let order = dir.path().join("id.order");
    assert!(bench(&[
        "order",
        "--strategy",
        "identity",
        "--graph",
        p(&graph),
        "--out",
        p(&order)
    ])
    .status
    .success());
    let o = bench(&[
        "cost",
        "--graph",
        p(&graph),
        "--order",
        p(&order),
        "--block-width",
        "2",
        "--dump-blocks",
        "--dump-limit",
        "3",
    ]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["nonempty_blocks"], 4);
    assert_eq!(report["total_bits"], 24.0);
    assert_eq!(report["bits_per_link"], 6.0);
    let dump = String::from_utf8(o.stderr).unwrap();
    let lines: Vec<&str> = dump.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines, vec!["0 0 2", "0 1 2", "1 0 2"]);

    let o = bench(&["cost", "--graph", p(&graph), "--order", p(&order), "--block-width", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn order_argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_cycle(dir.path());
    let out = dir.path().join("o");
    let o = bench(&[
        "order",
        "--strategy",
        "community-naive",
        "--graph",
        p(&graph),
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = bench(&[
        "order",
        "--strategy",
        "sideways",
        "--graph",
        p(&graph),
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = bench(&[
        "order",
        "--strategy",
        "slashburn",
        "--k",
        "1",
        "--graph",
        p(&graph),
        "--out",
        p(&out),
    ]);
    assert!(o.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
    assert_eq!(meta["strategy"], "slashburn");
    assert_eq!(meta["params"]["k"], 1);
}

#[test]
fn run_identity_on_cycle() {
    let dir = tempfile::tempdir().unwrap();
    write_cycle(dir.path());
    let cfg = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"cycle","path":"cycle.txt"}],"methods":["identity"],"block_widths":[2],"output":"out.csv","json_output":"out.json"}"#,
    );
    let o = bench(&["run", "--config", p(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(
        csv,
        "dataset,method,seed,b,n,m,num_communities,objective,cost1,nonempty_fraction,cost2_total_bits,bits_per_link,detect_ms,order_ms,cost_ms\n\
         cycle,identity,0,2,4,4,,,4,1,24,6,,,\n"
    );
    let rows = commpress_bench::report::read_json(&dir.path().join("out.json")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].bits_per_link, 6.0);
}

#[test]
fn run_community_ordering_beats_random_on_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cliques.txt");
    let o = bench(&[
        "synth",
        "--kind",
        "planted-cliques",
        "--cliques",
        "2",
        "--size",
        "300",
        "--eps",
        "0.001",
        "--seed",
        "2",
        "--out",
        p(&graph),
    ]);
    assert!(o.status.success());
    let cfg = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"cliques","path":"cliques.txt"}],"methods":["multilevel","random"],"block_widths":[512],"seed":4,"output":"out.csv"}"#,
    );
    // Smaller tiles than the graph so the ordering matters.
    let o = bench(&["run", "--config", p(&cfg), "--block-widths", "64,512"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for b in ["64", "512"] {
        let cost1 = |method: &str| -> usize {
            rows.iter().find(|r| r[1] == method && r[3] == b).unwrap()[8]
                .parse()
                .unwrap()
        };
        assert!(cost1("multilevel") <= cost1("random"), "b={b}");
    }
    let ml = rows.iter().find(|r| r[1] == "multilevel" && r[3] == "64").unwrap();
    assert_eq!(ml[6], "2");
}

#[test]
fn run_overrides_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("pl.txt");
    assert!(bench(&[
        "synth",
        "--kind",
        "power-law",
        "--n",
        "2000",
        "--seed",
        "3",
        "--out",
        p(&graph)
    ])
    .status
    .success());
    let cfg = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"pl","path":"pl.txt"}],"methods":["labelprop","multilevel","fastgreedy","leadingeigen","infomap","slashburn","random","identity"],"block_widths":[64,128],"seed":7,"output":"a.csv"}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    assert!(bench(&["run", "--config", p(&cfg)]).status.success());
    assert!(bench(&["run", "--config", p(&cfg), "--output", p(&b), "--jobs", "4"])
        .status
        .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(bench(&["run", "--config", p(&cfg), "--output", p(&c), "--seed", "8"])
        .status
        .success());
    let c = fs::read_to_string(&c).unwrap();
    assert_eq!(c.lines().count(), 17);
    assert!(c.lines().skip(1).all(|l| l.split(',').nth(2) == Some("8")));

    let t = dir.path().join("t.csv");
    assert!(bench(&[
        "run",
        "--config",
        p(&cfg),
        "--output",
        p(&t),
        "--methods",
        "random",
        "--timings"
    ])
    .status
    .success());
    let t = fs::read_to_string(&t).unwrap();
    let row: Vec<&str> = t.lines().nth(1).unwrap().split(',').collect();
    assert!(row[12].is_empty());
    assert!(!row[13].is_empty() && !row[14].is_empty());
}

#[test]
fn run_partial_and_total_failure() {
    let dir = tempfile::tempdir().unwrap();
    write_cycle(dir.path());
    let cfg = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"missing","path":"nope.txt"},{"name":"cycle","path":"cycle.txt"}],"methods":["identity"],"block_widths":[2],"output":"out.csv"}"#,
    );
    let o = bench(&["run", "--config", p(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.contains("cycle,identity"));

    let out = dir.path().join("none.csv");
    let cfg2 = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"missing","path":"nope.txt"}],"methods":["identity"],"block_widths":[2],"output":"none.csv"}"#,
    );
    let o = bench(&["run", "--config", p(&cfg2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn run_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["run", "--config", p(&dir.path().join("absent.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_config(dir.path(), "{ not json");
    assert_eq!(bench(&["run", "--config", p(&cfg)]).status.code(), Some(2));
    write_cycle(dir.path());
    let cfg = write_config(
        dir.path(),
        r#"{"datasets":[{"name":"cycle","path":"cycle.txt"}],"methods":["identity"],"block_widths":[2],"output":"o.csv"}"#,
    );
    assert_eq!(
        bench(&["run", "--config", p(&cfg), "--methods", "pagerank"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bench(&["run", "--config", p(&cfg), "--jobs", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(bench(&["frobnicate"]).status.code(), Some(2));
}
