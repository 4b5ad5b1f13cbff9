//! Fixed-point oracles: ring maps from a presentation into a polynomial ring
//! on Chern roots, one per torus-fixed point of the fully split bundle.
//! A relation holds in the ring exactly when it vanishes at every point.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_range, first_term, Report, VerifyError};
use crate::catalog::{make_ring, RingKind};
use crate::poly::{esym, GeneratorTable, Polynomial};
use crate::ring::RingPresentation;
use crate::scalar::{CoeffKind, Coefficient};

/// Images of every generator of a presentation at each fixed point.
#[derive(Clone, Debug)]
pub struct FixedPointOracle {
    ring: Arc<RingPresentation>,
    target: Arc<GeneratorTable>,
    kind: CoeffKind,
    points: Vec<Vec<Option<Polynomial>>>,
}

/// Every permutation of `0..n`, in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Sign vectors of length `n`; `parity` keeps those with that many flips mod 2.
fn sign_vectors(n: usize, parity: Option<u32>) -> Vec<Vec<i64>> {
    (0..1u64 << n)
        .filter(|m| parity.map_or(true, |p| m.count_ones() % 2 == p))
        .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

struct Target {
    table: Arc<GeneratorTable>,
    kind: CoeffKind,
}

impl Target {
    fn new(kind: CoeffKind, names: impl IntoIterator<Item = String>) -> Result<Self, VerifyError> {
        Ok(Target { table: Arc::new(GeneratorTable::new(names.into_iter().map(|s| (s, 1)))?), kind })
    }

    fn roots(&self, prefix: &str, n: u32) -> Vec<Polynomial> {
        (1..=n).map(|i| Polynomial::named(&self.table, self.kind, &format!("{prefix}{i}")).expect("root")).collect()
    }

    fn c(&self, v: i64) -> Polynomial {
        Polynomial::from_i64(&self.table, self.kind, v)
    }

    fn product<'a>(&self, ps: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        ps.into_iter().fold(self.c(1), |acc, p| &acc * p)
    }

    fn esym(&self, i: usize, vars: &[Polynomial]) -> Polynomial {
        esym(&self.table, self.kind, i, vars)
    }

    fn neg_squares(&self, vars: &[Polynomial]) -> Vec<Polynomial> {
        vars.iter().map(|p| -&(p * p)).collect()
    }

    fn half(&self, p: &Polynomial) -> Polynomial {
        p.scale(&Coefficient::inverse_power_of_two(1)).expect("dyadic target")
    }
}

impl FixedPointOracle {
    pub fn new(ring: &Arc<RingPresentation>) -> Result<Self, VerifyError> {
        let kind = ring.kind();
        let n = kind.n();
        let unsupported = || VerifyError::UnsupportedKind(String::from(kind.name()));
        let (target, points): (Target, Vec<Vec<(String, Polynomial)>>) = match kind {
            RingKind::QuadricHalves(_) => {
                let t = Target::new(CoeffKind::Dyadic, (1..=n).map(|i| format!("r{i}")))?;
                let r = t.roots("r", n);
                let base = even_base(&t, &r, n);
                let mut pts = Vec::new();
                for k in 0..n as usize {
                    let others: Vec<&Polynomial> = r.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
                    let rest = t.product(others);
                    for s in [1, -1] {
                        let mut pt = base.clone();
                        pt.push((String::from("h"), r[k].scale_i64(s)));
                        pt.push((String::from("x"), rest.scale_i64(s)));
                        pts.push(pt);
                    }
                }
                (t, pts)
            }
            RingKind::FlagTower(_) => {
                let t = Target::new(CoeffKind::Dyadic, (1..=n).map(|i| format!("r{i}")))?;
                let r = t.roots("r", n);
                let base = even_base(&t, &r, n);
                let mut pts = Vec::new();
                for perm in permutations(n as usize) {
                    for eps in sign_vectors(n as usize, Some(0)) {
                        let roots: Vec<Polynomial> = (0..n as usize).map(|i| r[perm[i]].scale_i64(eps[i])).collect();
                        let mut pt = base.clone();
                        let mut partial = roots[0].clone();
                        for k in 2..=n as usize {
                            pt.push((format!("h{k}"), roots[k - 1].clone()));
                            pt.push((format!("x{}", k - 1), partial.clone()));
                            partial = &partial * &roots[k - 1];
                        }
                        pts.push(pt);
                    }
                }
                (t, pts)
            }
            RingKind::QuadricOddIntegralPlain(_) => {
                let t = Target::new(CoeffKind::Dyadic, (1..=n).map(|i| format!("r{i}")))?;
                let r = t.roots("r", n);
                let sq = t.neg_squares(&r);
                let base: Vec<(String, Polynomial)> =
                    (1..=n).map(|j| (format!("c{}V", 2 * j), t.esym(j as usize, &sq))).collect();
                let mut pts = Vec::new();
                for root in &r {
                    for s in [1, -1] {
                        let mut pt = base.clone();
                        pt.push((String::from("h"), root.scale_i64(s)));
                        pts.push(pt);
                    }
                }
                (t, pts)
            }
            RingKind::ProjectiveBundle(_) => {
                let t = Target::new(CoeffKind::Int, (1..=n).map(|i| format!("v{i}")))?;
                let v = t.roots("v", n);
                let base: Vec<(String, Polynomial)> = (1..=n).map(|i| (format!("c{i}V"), t.esym(i as usize, &v))).collect();
                let pts = v
                    .iter()
                    .map(|root| {
                        let mut pt = base.clone();
                        pt.push((String::from("H"), -root));
                        pt
                    })
                    .collect();
                (t, pts)
            }
            RingKind::QuadricIntegralEven(_) | RingKind::QuadricIntegralOdd(_) => {
                let odd = matches!(kind, RingKind::QuadricIntegralOdd(_));
                let t = Target::new(CoeffKind::Int, (1..=n).map(|i| format!("f{i}")))?;
                let f = t.roots("f", n);
                let base: Vec<(String, Polynomial)> = if odd {
                    let mut b: Vec<_> = (1..=n)
                        .map(|i| (format!("c{i}Q"), t.esym(i as usize, &f).scale_i64(sign(i))))
                        .collect();
                    b.push((format!("c{}Q", n + 1), t.c(0)));
                    b
                } else {
                    (1..=n).map(|i| (format!("c{i}F"), t.esym(i as usize, &f))).collect()
                };
                let mut pts = Vec::new();
                for k in 0..n as usize {
                    let sums: Vec<Polynomial> =
                        (0..n as usize).filter(|j| *j != k).map(|j| &f[j] + &f[k]).collect();
                    let prod = t.product(&sums);
                    let far = if odd { (&f[k] * &prod).scale_i64(sign(n)) } else { prod.scale_i64(sign(n - 1)) };
                    for (h, g) in [(f[k].clone(), t.c(0)), (-&f[k], far)] {
                        let mut pt = base.clone();
                        pt.push((String::from("h"), h));
                        pt.push((String::from("gamma"), g));
                        pts.push(pt);
                    }
                }
                (t, pts)
            }
            RingKind::FlagDn(_) | RingKind::FlagBn(_) => {
                let type_b = matches!(kind, RingKind::FlagBn(_));
                let mut names = Vec::new();
                if type_b {
                    names.push(String::from("l"));
                }
                names.extend((1..=n).map(|i| format!("y{i}")));
                let t = Target::new(CoeffKind::Dyadic, names)?;
                let y = t.roots("y", n);
                let l = if type_b { Polynomial::named(&t.table, t.kind, "l")? } else { t.c(0) };
                let mut base: Vec<(String, Polynomial)> = y.iter().enumerate().map(|(i, p)| (format!("y{}", i + 1), p.clone())).collect();
                if type_b {
                    base.push((String::from("l"), l.clone()));
                }
                let shifted: Vec<Polynomial> = y.iter().map(|p| p + &l).collect();
                // D_n points flip an odd number of roots, so that e_n(x) = -e_n(y)
                let parity = if type_b { None } else { Some(1) };
                let c_count = if type_b { n } else { n - 1 };
                let mut pts = Vec::new();
                for perm in permutations(n as usize) {
                    for eps in sign_vectors(n as usize, parity) {
                        let z: Vec<Polynomial> = (0..n as usize).map(|i| shifted[perm[i]].scale_i64(eps[i])).collect();
                        let mut pt = base.clone();
                        for (i, zi) in z.iter().enumerate() {
                            pt.push((format!("x{}", i + 1), zi - &l));
                        }
                        for p in 1..=c_count as usize {
                            pt.push((format!("c{p}"), t.half(&(&t.esym(p, &z) + &t.esym(p, &shifted)))));
                        }
                        pts.push(pt);
                    }
                }
                (t, pts)
            }
            RingKind::QuadricPointEven(_) | RingKind::QuadricPointOdd(_) => return Err(unsupported()),
        };
        let table = ring.table();
        let points = points
            .into_iter()
            .map(|pt| {
                (0..table.len())
                    .map(|i| {
                        let name = table.name(i);
                        let img = pt.iter().find(|(nm, _)| nm == name).map(|(_, p)| p.clone());
                        img.map(Some).ok_or_else(unsupported)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FixedPointOracle { ring: ring.clone(), target: target.table, kind: target.kind, points })
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn target_table(&self) -> &Arc<GeneratorTable> {
        &self.target
    }

    pub fn coeff_kind(&self) -> CoeffKind {
        self.kind
    }

    /// Image at one fixed point of a polynomial over the ring's full table.
    pub fn image(&self, p: &Polynomial, point: usize) -> Result<Polynomial, VerifyError> {
        let p = p.convert(self.kind)?;
        Ok(p.substitute(&self.points[point])?)
    }

    /// First fixed point where `p` does not vanish, with the image there.
    pub fn first_nonvanishing(&self, p: &Polynomial) -> Result<Option<(usize, Polynomial)>, VerifyError> {
        let p = p.convert(self.kind)?;
        for (i, pt) in self.points.iter().enumerate() {
            let img = p.substitute(pt)?;
            if !img.is_zero() {
                return Ok(Some((i, img)));
            }
        }
        Ok(None)
    }
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Base images shared by the halves and the tower: `c_{2j}V -> e_j(-r^2)`,
/// `x_n -> r_1 ... r_n`.
fn even_base(t: &Target, r: &[Polynomial], n: u32) -> Vec<(String, Polynomial)> {
    let sq = t.neg_squares(r);
    let mut base: Vec<(String, Polynomial)> = (1..n).map(|j| (format!("c{}V", 2 * j), t.esym(j as usize, &sq))).collect();
    base.push((format!("x{n}"), t.product(r)));
    base
}

fn record(report: &mut Report, oracle: &FixedPointOracle, label: String, p: &Polynomial) -> Result<(), VerifyError> {
    if let Some((i, img)) = oracle.first_nonvanishing(p)? {
        report.fail(format!("{label} at fixed point {i}"), img.top_degree(), first_term(&img));
    }
    Ok(())
}

/// Every defining relation and every rewrite rule of the ring vanishes at
/// every fixed point.
pub fn oracle_relations_check(kind: RingKind) -> Result<Report, VerifyError> {
    check_range("oracle_relations_check", kind.n(), 1, 4)?;
    let ring = make_ring(kind)?;
    let oracle = FixedPointOracle::new(&ring)?;
    let mut report = Report::new("oracle_relations_check").text_param("kind", kind.name()).int_param("n", i64::from(kind.n()));
    for (name, rel) in ring.relations() {
        record(&mut report, &oracle, format!("relation {name}"), rel)?;
    }
    let fiber = ring.fiber_table();
    for rule in ring.rules() {
        let mut e = rule.lhs.0.clone();
        e.resize(ring.table().len(), 0);
        let lhs = Polynomial::monomial(ring.table(), crate::poly::Monomial(e), Coefficient::one(ring.coeff_kind()));
        record(&mut report, &oracle, format!("rule {}", rule.lhs.text(fiber)), &(&lhs - &rule.rhs))?;
    }
    if let RingKind::FlagBn(n) = kind {
        // c(E (x) M) c(E* (x) M) = c(F (x) M) c(F* (x) M)
        let l = ring.var("l");
        let one = ring.const_poly(1);
        let total = |prefix: &str| {
            (1..=n).fold(one.clone(), |acc, i| {
                let z = &ring.var(&format!("{prefix}{i}")) + &l;
                &acc * &(&one - &(&z * &z))
            })
        };
        record(&mut report, &oracle, String::from("c(E*M)c(E^*M) - c(F*M)c(F^*M)"), &(&total("x") - &total("y")))?;
    }
    report.note(format!(
        "{} relations and {} rules at {} fixed points",
        ring.relations().len(),
        ring.rules().len(),
        oracle.point_count()
    ));
    Ok(report)
}

/// Constructs the integral odd quadric bundle from its two stated relations
/// and logs the normal-form monomial count together with the base-linear
/// dependency the oracle finds. Fails only when the oracle itself is
/// inconsistent with the stated relations.
pub fn integral_odd_diagnostic(n: u32) -> Result<Report, VerifyError> {
    check_range("integral_odd_diagnostic", n, 1, 8)?;
    let kind = RingKind::QuadricIntegralOdd(n);
    let ring = make_ring(kind)?;
    let oracle = FixedPointOracle::new(&ring)?;
    let mut report = Report::new("integral_odd_diagnostic").int_param("n", i64::from(n));
    for (name, rel) in ring.relations() {
        record(&mut report, &oracle, format!("relation {name}"), rel)?;
    }
    report.note(format!("normal-form monomials: {}", ring.basis().len()));
    report.note(format!("expected module rank: {}", kind.expected_rank()));
    report.note(format!("fixed points: {}", oracle.point_count()));
    // R = h^n + c1Q h^(n-1) + ... + c{n}Q - 2 gamma
    let h = ring.var("h");
    let mut r = h.pow(n);
    for i in 1..=n {
        r = &r + &(&ring.var(&format!("c{i}Q")) * &h.pow(n - i));
    }
    r = &r - &ring.var("gamma").scale_i64(2);
    let nf = ring.normal_form(&r)?;
    let vanishes = oracle.first_nonvanishing(&r)?.is_none();
    let detected = vanishes && !nf.is_zero();
    report.note(format!("R = h^{n} + c1Q*h^{} + ... + c{n}Q - 2*gamma", n.saturating_sub(1)));
    report.note(format!("R vanishes at every fixed point: {}", yes_no(vanishes)));
    report.note(format!("base-linear dependency detected: {}", yes_no(detected)));
    if detected {
        report.witness.push(format!("normal form of R: {nf}"));
        let hr = ring.normal_form(&(&h * &r))?;
        report.witness.push(format!("normal form of h*R: {hr}"));
    }
    Ok(report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;
    use alloc::string::ToString;

    fn oracle(kind: RingKind) -> FixedPointOracle {
        FixedPointOracle::new(&make_ring(kind).unwrap()).unwrap()
    }

    #[test]
    fn point_counts_match_ranks() {
        for kind in [
            RingKind::QuadricHalves(3),
            RingKind::FlagTower(3),
            RingKind::QuadricOddIntegralPlain(2),
            RingKind::ProjectiveBundle(4),
            RingKind::QuadricIntegralEven(3),
            RingKind::FlagDn(3),
            RingKind::FlagBn(2),
        ] {
            assert_eq!(oracle(kind).point_count() as u64, kind.expected_rank(), "{kind}");
        }
        assert_eq!(oracle(RingKind::QuadricIntegralOdd(3)).point_count(), 6);
    }

    #[test]
    fn relations_vanish() {
        for n in 1..=3 {
            for name in ["quadric_halves", "flag_tower", "quadric_integral_even", "quadric_integral_odd", "flag_dn", "flag_bn", "projective_bundle", "quadric_odd_integral_plain"] {
                let kind = RingKind::from_name(name, n).unwrap();
                if make_ring(kind).is_err() {
                    continue;
                }
                let r = oracle_relations_check(kind).unwrap();
                assert_eq!(r.status, Status::Pass, "{r}");
            }
        }
    }

    #[test]
    fn point_kinds_have_no_oracle() {
        let e = oracle_relations_check(RingKind::QuadricPointEven(2)).unwrap_err();
        assert_eq!(e, VerifyError::UnsupportedKind("quadric_point_even".to_string()));
        assert!(oracle_relations_check(RingKind::FlagDn(5)).is_err());
    }

    #[test]
    fn detects_a_wrong_relation() {
        // D_2, p = 1, as literally printed: -c1^2 + 2c1 = c2 - c1 e1(x), with c2 = 0
        let ring = make_ring(RingKind::FlagDn(2)).unwrap();
        let o = FixedPointOracle::new(&ring).unwrap();
        let c1 = ring.var("c1");
        let e1 = &ring.var("x1") + &ring.var("x2");
        let lhs = &(-&(&c1 * &c1)) + &c1.scale_i64(2);
        let rhs = -&(&c1 * &e1);
        assert!(o.first_nonvanishing(&(&lhs - &rhs)).unwrap().is_some());
        // the corrected form: -c1^2 + 2c2 = c2 - c1 e1(x) + e2(x)
        let e2 = &ring.var("x1") * &ring.var("x2");
        let fixed = &(-&(&c1 * &c1)) - &(&(-&(&c1 * &e1)) + &e2);
        assert!(o.first_nonvanishing(&fixed).unwrap().is_none());
    }

    #[test]
    fn nonzero_basis_elements_do_not_vanish() {
        for kind in [RingKind::QuadricHalves(3), RingKind::FlagTower(3), RingKind::FlagDn(2), RingKind::FlagBn(2), RingKind::QuadricIntegralEven(3)] {
            let ring = make_ring(kind).unwrap();
            let o = FixedPointOracle::new(&ring).unwrap();
            for i in 0..ring.basis().len() {
                let b = ring.basis_element(i).lift();
                assert!(o.first_nonvanishing(&b).unwrap().is_some(), "{kind} basis {i}");
            }
        }
    }

    #[test]
    fn integral_odd_dependency() {
        for n in 1..=4 {
            let r = integral_odd_diagnostic(n).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
            assert!(r.notes.contains(&format!("normal-form monomials: {}", 2 * n + 2)));
            assert!(r.notes.contains(&"base-linear dependency detected: yes".to_string()), "{r}");
        }
        let r = integral_odd_diagnostic(2).unwrap();
        assert_eq!(r.witness[1], "normal form of h*R: -c3Q");
    }

    #[test]
    fn permutation_and_sign_counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(sign_vectors(4, Some(1)).len(), 8);
        assert_eq!(sign_vectors(3, None).len(), 8);
    }
}
