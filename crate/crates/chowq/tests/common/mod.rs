#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use chowq_core::{RingKind, RingPresentation};

/// Set to regenerate golden files instead of comparing against them.
pub const BLESS_VAR: &str = "CHOWQ_BLESS";

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

/// Byte comparison against `tests/golden/<name>`.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os(BLESS_VAR).is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected.lines().zip(actual.lines()).position(|(a, b)| a != b).unwrap_or(0);
    Err(format!(
        "{name} differs at line {}:\n  expected: {:?}\n  actual:   {:?}",
        line + 1,
        expected.lines().nth(line).unwrap_or(""),
        actual.lines().nth(line).unwrap_or("")
    ))
}

pub struct CliCase {
    pub golden: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CLI_CASES: &[CliCase] = &[
    CliCase { golden: "present_point_even_2.out", args: &["present", "--kind", "quadric_point_even", "--n", "2"], exit: 0 },
    CliCase { golden: "present_tower_3.out", args: &["present", "--kind", "flag_tower", "--n", "3"], exit: 0 },
    CliCase {
        golden: "present_integral_even_2.json",
        args: &["present", "--kind", "quadric_integral_even", "--n", "2", "--json"],
        exit: 0,
    },
    CliCase { golden: "present_halves_3.json", args: &["present", "--kind", "quadric_halves", "--n", "3", "--json"], exit: 0 },
    CliCase {
        golden: "normalize_point_even_e2.out",
        args: &["normalize", "--kind", "quadric_point_even", "--n", "2", "--expr", "e*e"],
        exit: 0,
    },
    CliCase {
        golden: "normalize_integral_even_cube.json",
        args: &["normalize", "--kind", "quadric_integral_even", "--n", "3", "--expr", "(h + gamma)^3", "--json"],
        exit: 0,
    },
    CliCase {
        golden: "normalize_halves_dyadic.out",
        args: &["normalize", "--kind", "quadric_halves", "--n", "2", "--expr", "3/2^1*h*x - h^3"],
        exit: 0,
    },
    CliCase {
        golden: "normalize_bn_2.json",
        args: &["normalize", "--kind", "flag_bn", "--n", "2", "--expr", "x1^3 + l*x1*x2", "--json"],
        exit: 0,
    },
    CliCase { golden: "degree_point_even_h2.out", args: &["degree", "--kind", "quadric_point_even", "--n", "2", "--expr", "h^2"], exit: 0 },
    CliCase { golden: "verify_fulton_4.json", args: &["verify", "--suite", "fulton", "--n", "4", "--json"], exit: 0 },
    CliCase { golden: "verify_example.json", args: &["verify", "--suite", "example", "--json"], exit: 0 },
    CliCase { golden: "verify_euler_2.json", args: &["verify", "--suite", "euler", "--n", "2", "--json"], exit: 0 },
    CliCase { golden: "verify_oracle_2.json", args: &["verify", "--suite", "oracle", "--n", "2", "--json"], exit: 0 },
    CliCase {
        golden: "error_unknown_generator.out",
        args: &["normalize", "--kind", "quadric_integral_even", "--n", "2", "--expr", "gamma*z"],
        exit: 2,
    },
    CliCase {
        golden: "error_negative_exponent.out",
        args: &["normalize", "--kind", "quadric_point_even", "--n", "2", "--expr", "h^(-1)"],
        exit: 2,
    },
    CliCase {
        golden: "error_dyadic_literal.out",
        args: &["normalize", "--kind", "quadric_integral_even", "--n", "2", "--expr", "1/2^1*h"],
        exit: 2,
    },
];

pub struct CliOutcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutcome {
    /// What the golden files store.
    pub fn transcript(&self) -> String {
        format!("exit: {}\n--- stdout\n{}--- stderr\n{}", self.exit, self.stdout, self.stderr)
    }
}

pub fn run_cli(args: &[&str], budget: Option<&str>) -> CliOutcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chowq").chain(args.iter().copied());
    let exit = chowq::run(argv, budget, &mut out, &mut err);
    CliOutcome { exit, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// Every fixed command: its golden transcript and exit code.
pub fn check_cli_cases() -> Vec<String> {
    let mut problems = Vec::new();
    for case in CLI_CASES {
        let got = run_cli(case.args, None);
        if got.exit != case.exit {
            problems.push(format!("{}: exit {} instead of {}", case.golden, got.exit, case.exit));
        }
        if let Err(e) = check_golden(&format!("cli/{}", case.golden), &got.transcript()) {
            problems.push(e);
        }
    }
    problems
}

pub const EVEN_TABLE_NS: std::ops::RangeInclusive<u32> = 2..=5;
pub const ODD_TABLE_NS: std::ops::RangeInclusive<u32> = 1..=4;

pub fn table_golden_name(kind: RingKind) -> String {
    format!("tables/{}_{}.txt", kind.name(), kind.n())
}

/// Point quadrics in the variables `h, e`, described by the dimension, the
/// degree of `e` and the degree of `e^2` when it is top-dimensional.
struct PointQuadric {
    dim: u32,
    e_degree: u32,
    e_squared: i64,
}

impl PointQuadric {
    fn of(kind: RingKind) -> PointQuadric {
        match kind {
            RingKind::QuadricPointEven(n) => {
                PointQuadric { dim: 2 * n - 2, e_degree: n - 1, e_squared: if n % 2 == 0 { 0 } else { 1 } }
            }
            RingKind::QuadricPointOdd(n) => PointQuadric { dim: 2 * n - 1, e_degree: n, e_squared: 0 },
            other => panic!("{other:?} is not a point quadric"),
        }
    }

    fn degree(&self, a: u32, b: u32) -> u32 {
        a + b * self.e_degree
    }

    /// Degree of the monomial `h^a e^b` of top degree: `h^dim` is twice a
    /// point, `h^(dim - deg e) e` is a point.
    fn top_degree_of(&self, a: u32, b: u32) -> i64 {
        assert_eq!(self.degree(a, b), self.dim);
        match b {
            0 => 2,
            1 => 1,
            2 => self.e_squared,
            _ => unreachable!("e^3 exceeds the dimension"),
        }
    }
}

fn solve(g: &[Vec<i64>], r: &[i64]) -> Option<Vec<i64>> {
    // c * g = r
    match g.len() {
        1 => (r[0] % g[0][0] == 0).then(|| vec![r[0] / g[0][0]]),
        2 => {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let c0 = r[0] * g[1][1] - r[1] * g[1][0];
            let c1 = r[1] * g[0][0] - r[0] * g[0][1];
            (det != 0 && c0 % det == 0 && c1 % det == 0).then(|| vec![c0 / det, c1 / det])
        }
        _ => None,
    }
}

/// Compares every product of basis monomials with the product recovered from
/// the intersection pairing. Returns the mismatches.
pub fn point_table_oracle(ring: &Arc<RingPresentation>) -> Vec<String> {
    let q = PointQuadric::of(ring.kind());
    let basis: Vec<(u32, u32)> = ring.basis().iter().map(|m| (m.exps()[0], m.exps()[1])).collect();
    let mut problems = Vec::new();
    if basis.len() as u32 != 2 * ring.kind().n() {
        problems.push(format!("basis size {}", basis.len()));
    }
    let of_degree = |d: u32| -> Vec<(u32, u32)> { basis.iter().copied().filter(|&(a, b)| q.degree(a, b) == d).collect() };
    for (i, &(a1, b1)) in basis.iter().enumerate() {
        for &(a2, b2) in &basis[i..] {
            let (a, b) = (a1 + a2, b1 + b2);
            let d = q.degree(a, b);
            let mut expected: Vec<((u32, u32), i64)> = Vec::new();
            if d <= q.dim {
                let here = of_degree(d);
                let dual = of_degree(q.dim - d);
                if here.len() != dual.len() {
                    problems.push(format!("degrees {d} and {} have different ranks", q.dim - d));
                    continue;
                }
                let g: Vec<Vec<i64>> = here
                    .iter()
                    .map(|&(x, y)| dual.iter().map(|&(u, v)| q.top_degree_of(x + u, y + v)).collect())
                    .collect();
                let r: Vec<i64> = dual.iter().map(|&(u, v)| q.top_degree_of(a + u, b + v)).collect();
                match solve(&g, &r) {
                    Some(c) => expected = here.into_iter().zip(c).filter(|(_, c)| *c != 0).collect(),
                    None => {
                        problems.push(format!("pairing in degree {d} is not unimodular"));
                        continue;
                    }
                }
            }
            let left = ring.basis_element(ring.basis().iter().position(|m| m.exps() == [a1, b1]).unwrap());
            let right = ring.basis_element(ring.basis().iter().position(|m| m.exps() == [a2, b2]).unwrap());
            let product = ring.ring_mul(&left, &right).unwrap();
            let got: Vec<((u32, u32), i64)> = product
                .terms()
                .iter()
                .map(|(m, c)| {
                    let v = c.as_constant().and_then(|c| c.to_bigint()).expect("integer constant");
                    ((m.exps()[0], m.exps()[1]), i64::try_from(v).unwrap())
                })
                .collect();
            let mut expected_sorted = expected.clone();
            expected_sorted.sort();
            let mut got_sorted = got.clone();
            got_sorted.sort();
            if expected_sorted != got_sorted {
                problems.push(format!(
                    "h^{a1}e^{b1} * h^{a2}e^{b2}: engine {got_sorted:?}, pairing {expected_sorted:?}"
                ));
            }
        }
    }
    problems
}
