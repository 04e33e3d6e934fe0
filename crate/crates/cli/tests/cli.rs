use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("diskcut-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskcut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_triangle_passes() {
    let dir = scratch("triangle");
    let f = dir.join("triangle.txt");
    fs::write(&f, "1 2\n2 3\n1 3\n").unwrap();
    let o = run(&[
        "verify",
        "--formula",
        path(&f),
        "-a",
        "13",
        "-b",
        "169",
        "--mode",
        "full",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("k_max=2"), "{text}");
    assert!(text.contains("optimum: 158"), "{text}");
    assert!(text.ends_with("verdict: PASS\n"));

    let json = run(&[
        "verify",
        "--formula",
        path(&f),
        "-a",
        "13",
        "-b",
        "169",
        "--json",
    ]);
    assert_eq!(json.status.code(), Some(0));
    assert_eq!(
        stdout(&json),
        stdout(&run(&[
            "verify",
            "--formula",
            path(&f),
            "-a",
            "13",
            "-b",
            "169",
            "--json"
        ]))
    );
    assert!(stdout(&json).contains("\"pass\": true"));
}

#[test]
fn verify_with_weak_parameters_fails() {
    let dir = scratch("weak");
    let f = dir.join("edge.txt");
    fs::write(&f, "1 2\n").unwrap();
    let o = run(&["verify", "--formula", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("smallest feasible"), "{}", stderr(&o));
}

#[test]
fn audit_names_failing_pair() {
    let ok = run(&["audit", "--n", "3", "-a", "4", "-b", "13"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).ends_with("verdict: PASS\n"));

    let bad = run(&["audit", "--n", "2", "--shift-mode", "paper-literal"]);
    assert_eq!(bad.status.code(), Some(2));
    let text = stdout(&bad);
    assert!(text.contains("shifted-h / vertical low crowd"), "{text}");
    assert!(text.contains("3.9784"), "{text}");
    assert!(text.ends_with("verdict: FAIL\n"));
}

#[test]
fn reduce_extract_render_pipeline() {
    let dir = scratch("pipeline");
    let f = dir.join("empty.txt");
    fs::write(&f, "").unwrap();
    let doc = dir.join("r.json");
    let o = run(&[
        "reduce",
        "--formula",
        path(&f),
        "--vars",
        "1",
        "-a",
        "2",
        "-b",
        "3",
        "-o",
        path(&doc),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let svg = dir.join("r.svg");
    let o = run(&["render", "--input", path(&doc), "-o", path(&svg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = fs::read_to_string(&svg).unwrap();
    assert_eq!(first.matches("<circle").count(), 64);
    run(&["render", "--input", path(&doc), "-o", path(&svg)]);
    assert_eq!(fs::read_to_string(&svg).unwrap(), first);

    let o = run(&["extract", "--input", path(&doc)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p edge 64 "), "{}", stdout(&o));

    let o = run(&["extract", "--input", path(&doc), "--quotient"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn maxcut_reduce_then_maxxor() {
    let dir = scratch("maxcut");
    let g = dir.join("k4.col");
    fs::write(&g, "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n").unwrap();
    let f = dir.join("k4.txt");
    let o = run(&["maxcut-reduce", "--graph", path(&g), "-o", path(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(&f)
            .unwrap()
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .count(),
        6
    );

    let o = run(&["maxxor", "--formula", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n 4 m 6 k_max 4 "), "{}", stdout(&o));

    let o = run(&["solve", "--graph", path(&g), "--method", "exhaustive"]);
    assert_eq!(stdout(&o), "vertices 4 edges 6\nexhaustive 4\n");
}

#[test]
fn exit_codes() {
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));

    let missing = scratch("missing").join("absent.txt");
    let o = run(&["maxxor", "--formula", path(&missing)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let dir = scratch("garbage");
    let g = dir.join("bad.col");
    fs::write(&g, "not a graph\n").unwrap();
    let o = run(&["solve", "--graph", path(&g)]);
    assert_eq!(o.status.code(), Some(1));

    let f = dir.join("same.txt");
    fs::write(&f, "1 2\n").unwrap();
    let o = run(&["reduce", "--formula", path(&f), "-o", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(fs::read_to_string(&f).unwrap(), "1 2\n");
}
