//! End-to-end tests of the `symord` binary: exit-code contract, canonical
//! output, determinism, file loading and the output-directory variable.

use std::process::{Command, Output};

fn symord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symord"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn tree_count_matches_census() {
    let out = symord(&["trees", "--w", "3", "--b", "0", "--count"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("3\n"), "got: {text}");
}

#[test]
fn tree_count_table() {
    let out = symord(&["trees", "--table", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("w=3"), "got: {text}");
    // the all-white column and the single-white row
    assert!(text.contains("  15"));
}

#[test]
fn tree_listing_and_filter() {
    let out = symord(&["trees", "--w", "4", "--b", "1", "--planar", "--contributing", "--count"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("8\n"));

    let out = symord(&["trees", "--w", "2", "--b", "1", "--planar", "--list"]);
    let text = stdout(&out);
    assert!(text.contains("w(w(b))"));
    assert!(text.contains("w(b,w())"));
    assert!(text.contains("w(w(),b)"));
}

#[test]
fn verify_builtin_passes() {
    let out = symord(&["verify", "--algebra", "su2", "--cutoff", "6"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("jacobi"));
    assert!(text.contains("pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn coproduct_prints_half_term_and_routes_agree() {
    let out = symord(&["coproduct", "--algebra", "su2", "--mu", "1", "--degree", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1 * 1 ⊗ d1"));
    assert!(text.contains("1 * d1 ⊗ 1"));
    assert!(text.contains("1/2 * d2 ⊗ d3"));
    assert!(text.contains("-1/2 * d3 ⊗ d2"));
    assert!(text.contains("routes agree: yes"));
}

#[test]
fn star_routes_agree_on_su2() {
    let out = symord(&["star", "--algebra", "su2", "--f", "x1", "--g", "x2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("x3"), "expected the 1/2*x3 correction: {text}");
    assert!(text.contains("route-equality"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn star_associativity() {
    let out = symord(&[
        "star",
        "--algebra",
        "heisenberg",
        "--f",
        "x1",
        "--g",
        "x2",
        "--h",
        "x1",
    ]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn star_exponential_route() {
    let out = symord(&[
        "star",
        "--algebra",
        "heisenberg",
        "--route",
        "exp",
        "--k",
        "1,0,0",
        "--q",
        "0,1,0",
        "--degree",
        "3",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn hausdorff_report() {
    let out = symord(&["hausdorff", "--algebra", "su2", "--degree", "4", "--bigraded"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("D_1^1 = k1 + q1"));
    assert!(text.contains("oracle-diff"));
    assert!(text.contains("bidegree-routes"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn chi_report() {
    let out = symord(&["chi", "--algebra", "su2", "--cutoff", "5", "--mu", "1", "--nu", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("chi(1,2)"));
}

#[test]
fn output_is_deterministic() {
    let a = symord(&["coproduct", "--algebra", "kappa:1,0,0", "--mu", "2", "--degree", "3"]);
    let b = symord(&["coproduct", "--algebra", "kappa:1,0,0", "--mu", "2", "--degree", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn structured_format_golden() {
    let out = symord(&[
        "coproduct",
        "--algebra",
        "heisenberg",
        "--mu",
        "3",
        "--degree",
        "2",
        "--format",
        "structured",
    ]);
    assert!(out.status.success());
    let expected = "\
term mu=3 left=1 right=d3 coeff=1
term mu=3 left=d3 right=1 coeff=1
term mu=3 left=d1 right=d2 coeff=1/2
term mu=3 left=d2 right=d1 coeff=-1/2
check=route-equality status=pass
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn loads_algebra_from_file() {
    let dir = std::env::temp_dir().join("symord-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("su2.toml");
    std::fs::write(
        &path,
        "name = 'su2-file'\n\
         dim = 3\n\
         [[bracket]]\n\
         i = 1\nj = 2\nk = 3\nc = '1'\n\
         [[bracket]]\n\
         i = 2\nj = 3\nk = 1\nc = '1'\n\
         [[bracket]]\n\
         i = 1\nj = 3\nk = 2\nc = '-1'\n",
    )
    .unwrap();
    let out = symord(&["verify", "--algebra", path.to_str().unwrap(), "--cutoff", "4"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("su2-file"));
}

#[test]
fn rejects_bad_algebra_file() {
    let dir = std::env::temp_dir().join("symord-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    // fails the Jacobi identity
    std::fs::write(
        &path,
        "name = 'bad'\n\
         dim = 3\n\
         [[bracket]]\n\
         i = 1\nj = 2\nk = 1\nc = '1'\n\
         [[bracket]]\n\
         i = 1\nj = 3\nk = 2\nc = '1'\n",
    )
    .unwrap();
    let out = symord(&["verify", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Jacobi"));
}

#[test]
fn rejects_bad_expression_with_position() {
    let out = symord(&["star", "--algebra", "su2", "--f", "x1 +", "--g", "x2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected"));
}

#[test]
fn out_dir_env_var() {
    let dir = std::env::temp_dir().join("symord-out-env");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_symord"))
        .args(["trees", "--w", "2", "--b", "0", "--count", "--out", "census.txt"])
        .env("SYMORD_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("census.txt")).unwrap();
    assert!(written.starts_with("1\n"));
}
