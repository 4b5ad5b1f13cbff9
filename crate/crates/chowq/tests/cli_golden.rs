mod common;

use common::{check_cli_cases, run_cli};

#[test]
fn fixed_commands_match_golden_files() {
    let problems = check_cli_cases();
    assert!(problems.is_empty(), "{problems:#?}");
}

#[test]
fn json_output_is_stable_across_runs() {
    let args = ["verify", "--suite", "oracle", "--n", "2", "--json"];
    assert_eq!(run_cli(&args, None).stdout, run_cli(&args, None).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run_cli(&["verify", "--suite", "fulton", "--n", "4"], None).exit, 0);
    assert_eq!(run_cli(&["verify", "--suite", "no-such-suite"], None).exit, 2);
    assert_eq!(run_cli(&["present", "--kind", "flag_dn"], None).exit, 2);
    assert_eq!(run_cli(&["push", "--kind", "flag_dn", "--n", "2", "--expr", "x1"], None).exit, 2);
    assert_eq!(run_cli(&["normalize", "--kind", "flag_dn", "--n", "2", "--expr", "x1^9"], Some("0")).exit, 2);
}

#[test]
fn example_outputs() {
    let out = run_cli(&["normalize", "--kind", "quadric_point_even", "--n", "2", "--expr", "e*e"], None);
    assert_eq!((out.exit, out.stdout.as_str()), (0, "0\n"));
    let out = run_cli(&["degree", "--kind", "quadric_point_even", "--n", "2", "--expr", "h^2"], None);
    assert_eq!((out.exit, out.stdout.as_str()), (0, "2\n"));
    let out = run_cli(&["verify", "--suite", "fulton", "--n", "4"], None);
    assert!(out.stdout.starts_with("[PASS] fulton_all_pairs n=4"), "{}", out.stdout);
}

#[test]
fn point_flag_specializes_the_base() {
    let out = run_cli(&["degree", "--kind", "quadric_integral_even", "--n", "2", "--point", "--expr", "h*gamma"], None);
    assert_eq!(out.exit, 0, "{}", out.stderr);
    let out = run_cli(&["degree", "--kind", "quadric_integral_even", "--n", "2", "--expr", "h*gamma"], None);
    assert_eq!(out.exit, 2);
}
