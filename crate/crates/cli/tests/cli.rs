use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liecat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Runs the command and checks its exit code; returns standard output.
fn expect(args: &[&str], code: i32) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(code),
        "{args:?}\nstdout: {}\nstderr: {}",
        stdout(&o),
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn jacobi() {
    assert_eq!(expect(&["jacobi", "3.d1"], 0), "jacobi\ttrue\n");
    let out = expect(&["jacobi", &data("bad_jacobi.lie")], 1);
    assert!(out.starts_with("jacobi\tfalse\n"));
    assert!(out.contains("failing\te1,e2,e3\t"), "{out}");
    expect(&["jacobi", &data("malformed.lie")], 2);
    expect(&["jacobi", "9.d1"], 2);
    // Symbolic check over the whole family, then at a point.
    expect(&["jacobi", "5.d5"], 0);
    expect(&["jacobi", "5.d5", "--at", "p=1,q=2,r=3"], 0);
}

#[test]
fn cohomology() {
    let out = expect(&["cohomology", "4.d6@(0:0)"], 0);
    assert!(out.starts_with("betti\t(2,8,13,10,3)\n"), "{out}");
    assert!(out.contains("mode\texact-at-point"));
    let generic = expect(&["cohomology", "5.d5"], 0);
    assert!(generic.contains("mode\tgeneric-probabilistic"));
    assert!(expect(&["cohomology", "5.d5", "--symbolic"], 0).starts_with("betti\t(0,1,2,1,0,0)\n"));
    expect(&["cohomology", &data("bad_jacobi.lie")], 1);
    expect(&["cohomology", "5.d5", "--at", "x=1"], 2);
    expect(&["cohomology", "5.d5@(1:2)"], 2);
}

#[test]
fn tables() {
    let out = expect(&["tables", "3"], 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("id\tpoint\tcomputed\texpected\tstatus"));
    assert!(lines[1..].iter().all(|l| l.contains("\tmatch\t")));
    expect(&["tables", "7"], 2);

    let nil = expect(&["nilpotent-table"], 0);
    assert_eq!(nil.lines().count(), 9);
    let last = nil.lines().last().unwrap();
    assert!(last.starts_with("nil.8\t-\t(3,14,28,30,17,4)\t(3,14,28,13,17,4)\tmismatch\ttrue\ttrue\tfalse"), "{last}");
}

#[test]
fn table_to_file() {
    let path = std::env::temp_dir().join(format!("liecat-table-{}.tsv", std::process::id()));
    let p = path.display().to_string();
    assert_eq!(expect(&["tables", "4", "--out", &p], 0), "");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, expect(&["tables", "4"], 0));
}

#[test]
fn versal() {
    assert_eq!(expect(&["versal", "5.d4"], 0), "rigid: no deformation parameters\n");
    let out = expect(&["versal", "5.d24", "--order", "3"], 0);
    assert!(out.contains("parameters\t15\n"), "{out}");
    assert!(out.lines().filter(|l| l.starts_with('r') && l.contains('\t')).all(|l| l.ends_with("\t0")), "{out}");
    expect(&["versal", "5.d4", "--order", "1"], 2);
    expect(&["versal", "5.d5"], 2);
}

#[test]
fn invariants() {
    let out = expect(&["invariants", "nil.8"], 0);
    assert!(out.starts_with("center\t3\n"), "{out}");
    assert!(out.contains("nilpotent\ttrue"));
}

#[test]
fn iso_verify() {
    let h = data("heisenberg.lie");
    expect(&["iso-verify", &h, &h, &data("identity3.txt")], 0);
    expect(&["iso-verify", "3.d2@(2:3)", "3.d2@(3:2)", &data("swap.txt")], 0);
    expect(&["iso-verify", &h, &h, &data("scale.txt")], 1);
    let out = expect(&["iso-verify", &h, &h, &data("singular3.txt")], 1);
    assert!(out.contains("singular"));
    expect(&["iso-verify", "5.d4", "5.d4", &data("identity3.txt")], 2);
}

#[test]
fn iso_search() {
    let out = expect(&["iso-search", "5.d5@(0,0,0)", "d15@(0,0)"], 0);
    assert!(out.starts_with("iso\ttrue\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("witness\t")).count(), 5);
    let out = expect(&["iso-search", "nil.1", "nil.2"], 1);
    assert!(out.contains("invariants differ"));
    let out = expect(&["iso-search", "5.d5@(0,0,0)", "d15@(0,0)", "--tries", "0"], 3);
    assert!(out.starts_with("iso\tinconclusive\n"));
    expect(&["iso-search", "5.d5", "d15@(0,0)"], 2);
}

#[test]
fn search_then_verify() {
    let path = std::env::temp_dir().join(format!("liecat-witness-{}.txt", std::process::id()));
    let p = path.display().to_string();
    expect(&["iso-search", "5.d6@(0:0)", "5.d21@(0:0:0)", "--out", &p], 0);
    expect(&["iso-verify", "5.d6@(0:0)", "5.d21@(0:0:0)", &p], 0);
    expect(&["iso-verify", "5.d21@(0:0:0)", "5.d6@(0:0)", &p], 1);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn symmetry() {
    assert_eq!(expect(&["symmetry", "d6", "sigma", "1:2"], 0), "-1:1\n");
    let o = run(&["symmetry", "d6", "sigma", "0:1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "-1:0\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p vanishes"));
    expect(&["symmetry", "d5", "sigma", "1:3:1"], 2);
    expect(&["symmetry", "d6", "rho", "1:2"], 2);
    expect(&["symmetry", "d5", "tau", "1:2"], 2);
}

#[test]
fn catalog_and_usage() {
    let out = expect(&["catalog", "list", "nil"], 0);
    assert_eq!(out.lines().count(), 9);
    assert!(out.starts_with("id\tdim\tparams\tgeneric_betti\tpoints\n"));
    assert_eq!(expect(&["catalog", "list"], 0).lines().count(), 43);
    expect(&["catalog", "list", "6"], 2);
    expect(&["frobnicate"], 2);
    expect(&[], 2);
    expect(&["jacobi", "d5"], 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tables", "5"][..],
        &["cohomology", "5.d9", "--seed", "7"],
        &["iso-search", "5.d9@(0:0)", "5.d12@(0:0:0)"],
        &["versal", "3.d2@(0:0)"],
        &["catalog", "list"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
