use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cqunify"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o).trim_end().to_string()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn command_examples() {
    assert_eq!(ok(&["solve", "X = f(X)"]), "false");
    assert_eq!(ok(&["leq", "X = f(a)", "exists V . X = f(V)"]), "true");
    assert_eq!(ok(&["leq", "exists V . X = f(V)", "X = f(a)"]), "false");
    assert_eq!(
        ok(&["apply", "{X -> Z, Y -> X}", "exists Z . p(X,Y,Z)"]),
        "exists U . p(Z,X,U)"
    );
    assert_eq!(ok(&["meet", "X=f(Y)", "X=f(a)"]), "X = f(a) & Y = a");
    assert_eq!(
        ok(&["join", "X = f(a)", "X = f(b)"]),
        "exists B1 . X = f(B1)"
    );
    assert_eq!(ok(&["equiv", "exists Z . X = Z & Y = Z", "X = Y"]), "true");
}

#[test]
fn substitution_verbs() {
    assert_eq!(ok(&["gamma", "X = f(Y)"]), "{X -> f(Y), Y -> Y}");
    assert_eq!(ok(&["ungamma", "bottom"]), "false");
    assert_eq!(ok(&["kernel", "{X -> f(Y), Y -> Y, Z -> W}"]), "{X, Y}");
    assert_eq!(ok(&["compose", "{X -> f(Y)}", "{Y -> a}"]), "{X -> f(a)}");
    assert_eq!(ok(&["restrict", "{X -> f(Y), Y -> a}", "X"]), "{X -> f(Y)}");
    assert_eq!(
        ok(&["regext", "{X -> Y}", "Y, Z"]),
        "{X -> Y, Y -> X, Z -> Z}"
    );
    assert_eq!(ok(&["diff", "f(X, a)", "f(b, Y)"]), "{(X, b), (a, Y)}");
    assert_eq!(
        ok(&["project", "exists U . X = f(U) & Y = U", "X"]),
        "exists B1 . X = f(B1)"
    );
    let out = ok(&["generalize", "X = f(a)"]);
    let mut lines: Vec<&str> = out.lines().collect();
    lines.sort();
    assert_eq!(lines, ["X = f(a)", "exists B1 . X = f(B1)", "true"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve", "X = "]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate", "X"]).status.code(), Some(2));
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    let o = run(&["apply", "{X -> a}", "p(X, Y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        run(&["apply", "{X -> a}", "exists Y . p(X, Y) & Z = Y"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["compose", "{X -> Y}", "{Z -> a}"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["kernel", "X = f(X)"]).status.code(), Some(1));
    assert_eq!(run(&["meet", "p(X)", "X = a"]).status.code(), Some(1));
    let first = run(&["compose", "{X -> Y}", "{Z -> a}"]);
    let second = run(&["compose", "{X -> Y}", "{Z -> a}"]);
    assert_eq!(first.stderr, second.stderr);
}

#[test]
fn declared_signature() {
    let sig = "a/0, f/1; p/1";
    assert_eq!(
        run(&["--sig", sig, "solve", "X = g(a)"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--sig", sig, "solve", "X = f(a, a)"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ok(&["--sig", sig, "--infer-sig", "solve", "X = g(a)"]),
        "X = g(a)"
    );
    assert_eq!(
        ok(&["--sig", sig, "solve", "exists Y . X = f(Y) & p(Y)"]),
        "exists Y . X = f(Y) & p(Y)"
    );
}

#[test]
fn json_output_round_trips() {
    let o = ok(&["--json", "meet", "X=f(Y)", "X=f(a)"]);
    let v: Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["verb"], "meet");
    let result = v["result"].as_str().unwrap();
    assert_eq!(ok(&["equiv", result, "X = f(a) & Y = a"]), "true");

    let o = ok(&["--json", "gamma", "exists U . X = f(U)"]);
    let v: Value = serde_json::from_str(&o).unwrap();
    let sigma = v["result"].as_str().unwrap();
    assert!(cqunify::parse_substitution(sigma).is_ok());

    let v: Value = serde_json::from_str(&ok(&["--json", "leq", "X = a", "true"])).unwrap();
    assert_eq!(v["result"], true);
}

#[test]
fn oracle_reports() {
    let o = ok(&[
        "--json",
        "oracle",
        "equiv",
        "X = f(a)",
        "exists V . X = f(V)",
    ]);
    let v: Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["witness"]["valuation"]["X"], "f(c1)");
    assert!(v["enumerated_count"].as_u64().unwrap() > 0);
    assert!(v["elapsed_ms"].is_u64());

    let o = ok(&[
        "--json",
        "--depth",
        "2",
        "oracle",
        "equiv",
        "X = f(Y)",
        "exists Z . X = f(Z) & Y = Z",
    ]);
    let v: Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["verdict"], "confirmed-at-depth 2");
    assert!(v.get("witness").is_none());

    let o = ok(&["--json", "oracle", "leq", "p(a)", "exists Z . p(Z)"]);
    let v: Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["verdict"], "confirmed");

    let o = ok(&["--max-interps", "1", "oracle", "leq", "p(X)", "p(X)"]);
    assert_eq!(o, "inconclusive");
}

#[test]
fn script_mode() {
    let dir = env!("CARGO_TARGET_TMPDIR");
    let path = format!("{dir}/cli-script.txt");
    std::fs::write(
        &path,
        "# comment\nsolve \"X = f(X)\"\nmeet \"X=f(Y)\" \"X=f(a)\"\n\ncompose \"{X -> Y}\" \"{Z -> a}\"\n",
    )
    .unwrap();
    let o = run(&["--script", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "false\nX = f(a) & Y = a\n");
}

#[test]
fn interactive_loop() {
    let input = ":trace on\nsolve \"f(X)=f(a)\"\nbogus\n:sig a/0, f/1; p/1\nsolve \"X = g(a)\"\n:quit\nsolve \"X = a\"\n";
    let o = with_stdin(&[], input);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "step=1 at=root before=f(X) = f(a) after=X = a");
    assert_eq!(lines[1], "X = a");
    assert_eq!(lines[2], "functions: a/0, f/1; predicates: p/1");
    assert_eq!(lines.len(), 3);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("unknown verb bogus"));
    assert!(err.contains("unknown function symbol g"));
}
