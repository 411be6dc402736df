use malcev_cli::table::{parse_table, print_table};
use malcev_cli::{load_table, run_with_cap, BUNDLED, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use malcev_core::{corpus, FieldSpec};

fn run(args: &[&str]) -> malcev_cli::Outcome {
    run_with_cap(std::iter::once("malcev").chain(args.iter().copied()), None)
}

#[test]
fn bundled_tables_match_corpus() {
    let q = FieldSpec::Rationals;
    let expected = [
        ("example_malcev4", corpus::example_malcev4(q)),
        ("heisenberg", corpus::heisenberg(q)),
        ("filiform4", corpus::filiform4(q)),
        ("sl2", corpus::sl2(q)),
        ("gl2", corpus::gl2(q)),
        ("matrix_units2", corpus::matrix_units2(q)),
        ("octonions", corpus::octonions(q)),
        ("octonion_traceless", corpus::octonion_traceless(q)),
        ("nil_malcev5a", corpus::nil_malcev5a(q)),
        ("nil_malcev5b", corpus::nil_malcev5b(q)),
    ];
    assert_eq!(expected.len(), BUNDLED.len());
    for (name, a) in expected {
        assert_eq!(load_table(name).unwrap(), a, "{name}");
    }
}

#[test]
fn bundled_tables_round_trip() {
    for (name, text) in BUNDLED {
        let a = parse_table(text).unwrap();
        assert_eq!(parse_table(&print_table(&a)).unwrap(), a, "{name}");
    }
}

#[test]
fn check_malcev_on_example() {
    let o = run(&["check", "malcev", "example_malcev4.tbl"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, "MALCEV: yes\n");

    let o = run(&["check", "lie", "example_malcev4.tbl"]);
    assert_eq!(o.code, EXIT_CHECK_FAILED);
    assert_eq!(o.stdout, "LIE: no\nwitness: jacobi at (e1, e2, e3): lhs = -3*e4, rhs = 0\n");
}

#[test]
fn check_every_identity_on_heisenberg() {
    for which in ["anticomm", "malcev", "lie", "id1", "id2", "id3", "id4", "id5"] {
        let o = run(&["check", which, "heisenberg"]);
        assert_eq!(o.code, EXIT_OK, "{which}: {}", o.stdout);
        assert!(o.stdout.ends_with(": yes\n"));
    }
}

#[test]
fn heisenberg_report() {
    let o = run(&["report", "nilpotence", "heisenberg.tbl", "--ideal", "full"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    for line in ["right_index: 3", "assoc_index: 3", "strong_index: 3", "bound_4n2: 31", "bound_satisfied: yes"] {
        assert!(o.stdout.lines().any(|l| l == line), "missing {line}:\n{}", o.stdout);
    }
    let j = run(&["report", "nilpotence", "heisenberg.tbl", "--json"]);
    assert_eq!(j.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["right_index"], 3);
    assert_eq!(v["bound_4n2"], 31);
    assert_eq!(v["bound_satisfied"], true);
}

#[test]
fn report_rejects_non_malcev() {
    let o = run(&["report", "nilpotence", "octonions.tbl"]);
    assert_eq!(o.code, EXIT_CHECK_FAILED);
    assert!(o.stdout.is_empty());
}

#[test]
fn ideal_closure_warning() {
    let o = run(&["powers", "strong", "example_malcev4.tbl", "--ideal", "span:e1"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains("ideal closure {e1, e4}"), "{}", o.stderr);
    assert!(o.stdout.starts_with("strong powers of {e1, e4}\n"));
    let o = run(&["powers", "right", "example_malcev4.tbl", "--ideal", "span:e4,e1+e3"]);
    assert!(o.stdout.starts_with("right powers of {e1 + e3, e4}\nB^1 = {e1 + e3, e4}\nB^2 = {}\n"), "{}", o.stdout);
    assert!(o.stderr.is_empty());
}

#[test]
fn rewrite_right_normed_example() {
    let o = run(&["rewrite", "right-normed", "(a*(b*c))"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, "(a*b)*c - J(a,b,c) - (a*c)*b\n");
    assert_eq!(o.stdout.matches("J(").count(), 1);
}

#[test]
fn rewrite_errors_are_usage_errors() {
    assert_eq!(run(&["rewrite", "normal", "J(a,b,c)"]).code, EXIT_USAGE);
    assert_eq!(run(&["rewrite", "normal", "(a*b"]).code, EXIT_USAGE);
    assert_eq!(run(&["rewrite", "psom", "a*b"]).code, EXIT_USAGE);
    assert_eq!(run(&["rewrite", "psom", "a", "b*(c*d)"]).code, EXIT_USAGE);
}

#[test]
fn eval_jacobian_in_example() {
    let o = run(&["eval", "example_malcev4.tbl", "J(a,b,c)", "--set", "a=e1", "--set", "b=e2", "--set", "c=e3"]);
    assert_eq!(o.stdout, "-3*e4\n");
    let o = run(&["eval", "example_malcev4.tbl", "a*b", "--set", "a=e1"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn jk_nil_values() {
    assert_eq!(run(&["jk-nil", "example_malcev4.tbl"]).stdout, "jk_nil_index: never\n");
    assert_eq!(run(&["jk-nil", "sl2.tbl"]).stdout, "jk_nil_index: 1\n");
}

#[test]
fn jacobian_span_of_example() {
    let o = run(&["jacobian-span", "example_malcev4.tbl"]);
    assert_eq!(o.stdout, "J(X,Y,Z) = {e4}\ndim: 1\n");
}

#[test]
fn minus_of_matrix_units_is_gl2() {
    let o = run(&["minus", "matrix_units2.tbl"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(parse_table(&o.stdout).unwrap(), corpus::gl2(FieldSpec::Rationals));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(run(&["check", "banana", "heisenberg.tbl"]).code, EXIT_USAGE);
    assert_eq!(run(&["check", "malcev", "no_such_table.tbl"]).code, EXIT_USAGE);
    assert_eq!(run(&["search-malcev", "--dim", "3", "--field", "F2", "--trials", "1", "--seed", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["powers", "right", "heisenberg", "--ideal", "span:e9"]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn table_file_errors_carry_position() {
    let dir = std::env::temp_dir().join(format!("malcev-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.tbl");
    std::fs::write(&path, "dim 2\nfield Q\ne1 e2 = e1\ne1 e2 = e2\n").unwrap();
    let o = run(&["check", "malcev", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("line 4"), "{}", o.stderr);
    std::fs::write(&path, "dim 2\nfield F2\n").unwrap();
    let o = run(&["check", "malcev", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cap_override_changes_chain_length() {
    let args = ["malcev", "powers", "right", "example_malcev4.tbl"];
    let short = run_with_cap(args, Some(2));
    assert_eq!(short.stdout.lines().filter(|l| l.starts_with("B^")).count(), 2);
    assert!(short.stdout.contains("outcome: unknown"));
    let o = run_with_cap(["malcev", "report", "nilpotence", "heisenberg.tbl"], Some(9));
    assert!(o.stdout.contains("cap: 9\n"));
}

#[test]
fn search_is_deterministic() {
    let args = ["search-malcev", "--dim", "3", "--field", "F7", "--trials", "200", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["search-malcev", "--dim", "3", "--field", "F7", "--trials", "200", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}
