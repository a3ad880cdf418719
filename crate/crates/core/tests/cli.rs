use std::path::PathBuf;

use cutlift::cli::{run, CommandResult};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn g(name: &str) -> String {
    golden(name).to_string_lossy().into_owned()
}

fn cutlift(args: &[&str]) -> CommandResult {
    run(std::iter::once("cutlift").chain(args.iter().copied()))
}

fn first_line(r: &CommandResult) -> &str {
    r.stdout.lines().next().unwrap_or("")
}

#[test]
fn lift_example_plan_matches_golden_a_prime() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.cib");
    let r = cutlift(&[
        "lift",
        "--in",
        &g("pentagonal.ineq"),
        "--plan",
        &g("example.plan"),
        "--target",
        "K3,1,1,3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(first_line(&r), "LIFTED graph=K3,1,1,3 nodes=8 edges=22 support=13 rhs=0/1");
    let got = std::fs::read(&out).unwrap();
    assert_eq!(got, std::fs::read(golden("a_prime.cib")).unwrap());
}

#[test]
fn lift_alternative_forms_matches_golden_a_double_prime() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.cib");
    let r = cutlift(&[
        "lift",
        "--in",
        &g("pentagonal.ineq"),
        "--plan",
        &g("example_alt.plan"),
        "--target",
        "K3,1,1,3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(golden("a_double_prime.cib")).unwrap());
}

#[test]
fn lift_is_deterministic() {
    let args = ["lift", "--in", &g("pentagonal.ineq"), "--bipartite", "2", "3"];
    let a = cutlift(&args);
    let b = cutlift(&args);
    assert_eq!(a, b);
}

#[test]
fn lift_bipartite_gives_k54() {
    let r = cutlift(&["lift", "--in", &g("pentagonal.ineq"), "--bipartite", "2", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(first_line(&r).starts_with("LIFTED graph=K5,4_A2B3 nodes=9 edges=20 "));
    assert!(r.stdout.contains("\ngraph K5,4_A2B3\n"));
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("edge ")).count(), 20);
}

#[test]
fn lift_bipartite_too_small_is_usage_error() {
    let r = cutlift(&["lift", "--in", &g("pentagonal.ineq"), "--bipartite", "2", "2"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("at least 5"));
}

#[test]
fn lift_with_conditions() {
    let r = cutlift(&[
        "lift",
        "--in",
        &g("pentagonal.ineq"),
        "--plan",
        &g("example.plan"),
        "--target",
        "K3,1,1,3",
        "--check-conditions",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().nth(1), Some("CONDITIONS PASS"));
    // a triangle source fails condition (iii)
    let r = cutlift(&[
        "lift",
        "--in",
        &g("triangle_k5.ineq"),
        "--plan",
        &g("example.plan"),
        "--target",
        "K3,1,1,3",
        "--check-conditions",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.lines().nth(1), Some("CONDITIONS NOT_GUARANTEED"));
}

#[test]
fn verify_pentagonal_facet() {
    let r = cutlift(&["verify", "--in", &g("pentagonal.ineq"), "--facet"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "FACET dim=9 need=9\n"));
}

#[test]
fn verify_a_prime_facet_with_certificate() {
    let r = cutlift(&["verify", "--in", &g("a_prime.cib"), "--facet", "--certificate"]);
    assert_eq!(r.code, 0);
    assert_eq!(first_line(&r), "FACET dim=21 need=21");
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("root {")).count(), 22);
}

#[test]
fn verify_origin_violation() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.ineq");
    std::fs::write(&p, "ineq over K4\ncoef 1 2 1/1\nrhs -1/1\n").unwrap();
    let r = cutlift(&["verify", "--in", p.to_str().unwrap(), "--valid"]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "INVALID violating={}\n"));
}

#[test]
fn verify_not_facet_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bound.ineq");
    std::fs::write(&p, "ineq over K4\ncoef 1 2 1/1\nrhs 1/1\n").unwrap();
    let r = cutlift(&["verify", "--in", p.to_str().unwrap(), "--facet"]);
    assert_eq!(r.code, 1);
    assert!(first_line(&r).starts_with("NOT_FACET "));
    let r = cutlift(&["verify", "--in", p.to_str().unwrap(), "--valid"]);
    assert_eq!(r.code, 0);
    assert!(first_line(&r).starts_with("VALID "));
}

#[test]
fn verify_caps() {
    let r = cutlift(&["--max-nodes", "4", "verify", "--in", &g("pentagonal.ineq"), "--facet"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--max-nodes cap of 4"));
    let r = cutlift(&["--max-nodes", "99", "verify", "--in", &g("pentagonal.ineq"), "--facet"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("hard cap of 24"));
}

#[test]
fn equiv_example_pair() {
    let r = cutlift(&["equiv", &g("a_prime.cib"), &g("a_double_prime.cib")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "EQUIV sigma=() S={6,8}\n"));
}

#[test]
fn equiv_pentagonal_vs_triangle() {
    let r = cutlift(&["equiv", &g("pentagonal.ineq"), &g("triangle_k5.ineq")]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "NOT_EQUIV\n"));
}

#[test]
fn equiv_cross_check() {
    let r = cutlift(&[
        "equiv",
        &g("pentagonal.ineq"),
        &g("pentagonal.ineq"),
        "--fast-bipartite",
        "2",
        "3",
        "--cross-check",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "EQUIV sigma=() S={}\nbrute EQUIV sigma=() S={}\n");
}

#[test]
fn equiv_fast_rejects_triangle() {
    let r = cutlift(&[
        "equiv",
        &g("triangle_k5.ineq"),
        &g("pentagonal.ineq"),
        "--fast-bipartite",
        "2",
        "3",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("excludes triangle inequalities"));
}

#[test]
fn catalog_pentagonal_is_golden() {
    let r = cutlift(&["catalog", "pentagonal"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, std::fs::read_to_string(golden("pentagonal.ineq")).unwrap());
}

#[test]
fn catalog_cycle_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c5.ineq");
    let r = cutlift(&["catalog", "cycle", "--n", "5", "--F", "1", "--out", p.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = cutlift(&["verify", "--in", p.to_str().unwrap(), "--facet"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "FACET dim=4 need=4\n"));
}

#[test]
fn catalog_parameter_errors() {
    assert_eq!(cutlift(&["catalog", "cycle", "--n", "5", "--F", "1,2"]).code, 2);
    assert_eq!(cutlift(&["catalog", "hypermetric", "--b", "1,1,-1,-1,-1"]).code, 2);
    assert_eq!(cutlift(&["catalog", "clique-web"]).code, 2);
    let r = cutlift(&["catalog", "hypermetric", "--b", "1,1,-1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("ineq over K3\n"));
}

#[test]
fn hull_k3() {
    let r = cutlift(&["--graph", &g("K3.cg"), "hull"]);
    assert_eq!(r.code, 0);
    assert_eq!(first_line(&r), "FACETS count=4");
    assert_eq!(r.stdout.matches("ineq over K3").count(), 4);
    let r = cutlift(&["--graph", "K7", "hull"]);
    assert_eq!(r.code, 2);
}

#[test]
fn canon_agrees_on_equivalent_inputs() {
    let a = cutlift(&["canon", "--in", &g("a_prime.cib")]);
    let b = cutlift(&["canon", "--in", &g("a_double_prime.cib")]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("loop.ineq");
    std::fs::write(&p, "ineq over K5\ncoef 1 1 1/2\nrhs 0/1\n").unwrap();
    let r = cutlift(&["verify", "--in", p.to_str().unwrap(), "--valid"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(cutlift(&["verify"]).code, 2);
    assert_eq!(cutlift(&["frobnicate"]).code, 2);
}
