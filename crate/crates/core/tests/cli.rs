//! Command-line behaviour: outputs, exit codes and error lines.

use semilinear::cli::run;
use std::path::PathBuf;

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn call(args: &[&str]) -> semilinear::cli::RunOutput {
    run(std::iter::once("semilinear").chain(args.iter().copied()))
}

#[test]
fn term_commands() {
    let out = call(&["term", "normalize", "Q(1,1)"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "Q(1)\n"));
    let out = call(&["term", "eq", "Q(1)^Q(1)", "Q(1)"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "equivalent\n"));
    let out = call(&["term", "eq", "Q(1)^1", "Q(1)"]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "not equivalent\n"));
}

#[test]
fn parse_errors_exit_two_with_one_prefixed_line() {
    let out = call(&["term", "normalize", "Q("]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error[parse]: "));
    assert_eq!(out.stderr.lines().count(), 1);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_and_io_errors() {
    let out = call(&["term", "frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error[usage]: "));
    let out = call(&["tree", "check", "/nonexistent/file.spec"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error[io]: "));
    let out = call(&["term", "sample", "Q(1)", "--size", "0"]);
    assert_eq!(out.code, 2);
}

#[test]
fn budget_errors_exit_three() {
    let out = call(&[
        "tree",
        "sample",
        &golden("dense.spec"),
        "--depth",
        "6",
        "--width",
        "4",
        "--budget-nodes",
        "50",
    ]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.starts_with("error[budget]: "));
    let out = call(&["term", "sample", "Q(1,a,b)^1^a^b", "--size", "2"]);
    assert_eq!(out.code, 3);
}

#[test]
fn tree_commands() {
    let out = call(&["tree", "check", &golden("dense.spec")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("categorical: yes\n"));
    let out = call(&["tree", "check", &golden("omega.spec")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("categorical: no (chain [] * [1] w"));
    let out = call(&["tree", "chains", &golden("q1.spec")]);
    assert_eq!(out.stdout, "[Q(1)]\n");
    let out = call(&[
        "tree",
        "sample",
        &golden("cut.spec"),
        "--depth",
        "1",
        "--format",
        "dot",
    ]);
    assert!(out.stdout.contains("style=dashed"));
}

#[test]
fn poset_and_cfpo_commands() {
    let out = call(&["poset", "orbits", &golden("chain3.poset"), "-n", "1"]);
    assert!(out.stdout.starts_with("3 orbits\n"));
    let out = call(&["cfpo", "alt-rank", &golden("alt6.poset")]);
    assert_eq!(out.stdout, "6\n");
    let out = call(&["cfpo", "path", &golden("diamond.poset"), "r", "t"]);
    assert_eq!(
        (out.code, out.stdout.as_str()),
        (1, "ambiguous (not a CFPO)\n")
    );
    let out = call(&["poset", "validate", "--tree", &golden("chain3.poset")]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "tree: ok\n"));
}

#[test]
fn same_seed_same_output() {
    let args = [
        "tree",
        "sample",
        &golden("dense.spec"),
        "--seed",
        "42",
        "--format",
        "records",
    ];
    assert_eq!(call(&args), call(&args));
    let other = [
        "tree",
        "sample",
        &golden("dense.spec"),
        "--seed",
        "43",
        "--format",
        "records",
    ];
    assert_eq!(
        call(&args).stdout.lines().count(),
        call(&other).stdout.lines().count()
    );
}
