//! Checks that run inside the catalog rings: Euler class axioms,
//! pushforward, the comparison map, and the subbundle obstruction on the
//! quadric fourfold.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{check_range, first_term, Report, Status, VerifyError};
use crate::catalog::{make_ring, RingKind};
use crate::poly::{Monomial, Polynomial};
use crate::ring::{comparison_embed, RingElement, RingPresentation};
use crate::scalar::{CoeffKind, Coefficient};

fn nonzero(report: &mut Report, label: impl Into<String>, e: &RingElement) {
    if !e.is_zero() {
        let degree = e.homogeneous_degree().flatten();
        report.fail(label, degree, e.to_string());
    }
}

fn tower_product(ring: &RingPresentation, n: u32) -> Polynomial {
    (1..=n).fold(ring.const_poly(1), |acc, i| &acc * &ring.var(&format!("h{i}")))
}

/// Euler class axioms in the tower and the halves ring, `2 <= n <= 5`.
pub fn euler_axioms_check(n: u32) -> Result<Report, VerifyError> {
    check_range("euler_axioms_check", n, 2, 5)?;
    let mut report = Report::new("euler_axioms_check").int_param("n", i64::from(n));
    let tower = make_ring(RingKind::FlagTower(n))?;
    let halves = make_ring(RingKind::QuadricHalves(n))?;
    let sign = if n % 2 == 0 { 1 } else { -1 };

    // (i) (h_1 ... h_n)^2 = (-1)^n c_{2n}(V)
    let prod = tower_product(&tower, n);
    let c2n = tower.var(&format!("c{}V", 2 * n));
    let r = tower.normal_form(&(&(&prod * &prod) - &c2n.scale_i64(sign)))?;
    nonzero(&mut report, "(i) (h1...hn)^2 - (-1)^n c_2n(V)", &r);

    // (ii) h x_{k-1} = x_k at every level, and h x = x_n in the halves ring
    let xn = format!("x{n}");
    let r = halves.normal_form(&(&(&halves.var("h") * &halves.var("x")) - &halves.var(&xn)))?;
    nonzero(&mut report, format!("(ii) h*x - {xn}"), &r);
    for k in 2..=n {
        let lhs = &tower.var(&format!("h{k}")) * &tower.var(&format!("x{}", k - 1));
        let r = tower.normal_form(&(&lhs - &tower.var(&format!("x{k}"))))?;
        nonzero(&mut report, format!("(ii) h{k}*x{} - x{k}", k - 1), &r);
    }

    // (iii) over a point, x is +-(e - f) and has the same self-intersection
    let point = halves.specialize_to_point()?;
    let ruled = make_ring(RingKind::QuadricPointEven(n))?;
    let e = ruled.normal_form(&ruled.var("e"))?;
    let f = ruled.normal_form(&ruled.var("f"))?;
    let diff = e.checked_sub(&f)?;
    let image = comparison_embed(&diff, 1, &point)?;
    let x = point.normal_form(&point.var("x"))?;
    let orientation = if image == x {
        "+"
    } else if image == x.neg() {
        "-"
    } else {
        report.fail("(iii) image of e - f is not +-x", Some(n - 1), image.to_string());
        "none"
    };
    report.note(format!("(iii) e - f maps to {orientation}x"));
    let lhs = point.point_degree(&point.ring_mul(&x, &x)?)?;
    let rhs = ruled.point_degree(&ruled.ring_mul(&diff, &diff)?)?.convert(CoeffKind::Dyadic).map_err(crate::poly::PolyError::from)?;
    if lhs != rhs {
        report.fail("(iii) deg(x^2) - deg((e - f)^2)", Some(0), format!("{lhs} vs {rhs}"));
    }
    report.note(format!("(iii) deg(x^2) = deg((e - f)^2) = {rhs}"));

    // (iv) y_n = 2^{n-1} x_n pulls back to 2^{n-1} c_n(E)
    let scale = 1i64 << (n - 1);
    let y = tower.var(&xn).scale_i64(scale);
    let r = tower.normal_form(&(&y - &prod.scale_i64(scale)))?;
    nonzero(&mut report, "(iv) f^*y_n - 2^(n-1) c_n(E)", &r);
    Ok(report)
}

/// Pushforward of `s f^*(alpha)` in the tower for `alpha` in `{1}` and the
/// base generators, and the projection formula on the halves ring.
pub fn pushpull_check(n: u32) -> Result<Report, VerifyError> {
    check_range("pushpull_check", n, 2, 4)?;
    let mut report = Report::new("pushpull_check").int_param("n", i64::from(n));
    let tower = make_ring(RingKind::FlagTower(n))?;
    let mut s = tower.const_poly(1);
    for k in 2..=n {
        s = &s * &tower.var(&format!("h{k}")).pow(2 * k - 2);
    }
    let factor = 1i64 << (n - 1);
    let base = tower.base_table().clone();
    let mut alphas = vec_of_base(&base, tower.coeff_kind());
    alphas.insert(0, (String::from("1"), Polynomial::one(&base, tower.coeff_kind())));
    for (name, alpha) in &alphas {
        let pushed = tower.pushforward(&tower.normal_form(&(&s * &tower.pull_back(alpha)?))?)?;
        let r = &pushed - &alpha.scale_i64(factor);
        if !r.is_zero() {
            report.fail(format!("f_*(s * {name}) - 2^(n-1)*{name}"), r.top_degree(), first_term(&r));
        }
    }
    report.note(format!("factor 2^{} = {factor} on {} classes", n - 1, alphas.len()));

    for m in 2..=n {
        let halves = make_ring(RingKind::QuadricHalves(m))?;
        let base = halves.base_table().clone();
        let gens = vec_of_base(&base, halves.coeff_kind());
        for i in 0..halves.basis().len() {
            let b = halves.basis_element(i);
            let pushed = halves.pushforward(&b)?;
            for (name, alpha) in &gens {
                let lhs = halves.pushforward(&b.scale_base(alpha)?)?;
                let r = &lhs - &(&pushed * alpha);
                if !r.is_zero() {
                    let mono = halves.basis()[i].text(halves.fiber_table());
                    report.fail(format!("projection formula, halves n={m}, {mono} * {name}"), r.top_degree(), first_term(&r));
                }
            }
        }
    }
    report.note(format!("projection formula on the halves rings for 2 <= n <= {n}"));
    Ok(report)
}

fn vec_of_base(base: &Arc<crate::poly::GeneratorTable>, kind: CoeffKind) -> Vec<(String, Polynomial)> {
    (0..base.len()).map(|i| (String::from(base.name(i)), Polynomial::generator(base, kind, i))).collect()
}

/// Over a point, the comparison map from the integral even quadric to the
/// dyadic halves ring is multiplicative on basis pairs and preserves
/// degrees, for both orientations. `n` is 2 or 3.
pub fn comparison_check(n: u32) -> Result<Report, VerifyError> {
    check_range("comparison_check", n, 2, 3)?;
    let mut report = Report::new("comparison_check").int_param("n", i64::from(n));
    let source = make_ring(RingKind::QuadricIntegralEven(n))?.specialize_to_point()?;
    let target = make_ring(RingKind::QuadricHalves(n))?.specialize_to_point()?;
    let len = source.basis().len();
    let basis: Vec<RingElement> = (0..len).map(|i| source.basis_element(i)).collect();
    let name = |i: usize| source.basis()[i].text(source.fiber_table());
    let top = source.top_degree();
    for orientation in [1, -1] {
        let images = basis.iter().map(|b| comparison_embed(b, orientation, &target)).collect::<Result<Vec<_>, _>>()?;
        for a in 0..len {
            for b in a..len {
                let prod = source.ring_mul(&basis[a], &basis[b])?;
                let lhs = comparison_embed(&prod, orientation, &target)?;
                let rhs = target.ring_mul(&images[a], &images[b])?;
                let r = lhs.checked_sub(&rhs)?;
                if !r.is_zero() {
                    report.fail(format!("orientation {orientation}: phi({} * {}) - phi({})phi({})", name(a), name(b), name(a), name(b)), r.homogeneous_degree().flatten(), r.to_string());
                }
            }
            let d = source.fiber_table().degree_of(&source.basis()[a]);
            if d == top {
                let lhs = source.point_degree(&basis[a])?.convert(CoeffKind::Dyadic).map_err(crate::poly::PolyError::from)?;
                let rhs = target.point_degree(&images[a])?;
                if lhs != rhs {
                    report.fail(format!("orientation {orientation}: deg {} - deg phi({})", name(a), name(a)), Some(0), format!("{lhs} vs {rhs}"));
                }
            }
        }
    }
    report.note(format!("{} basis pairs, 2 orientations", len * (len + 1) / 2));
    Ok(report)
}

/// A polynomial in the unknown `a`, coefficient of `a^k` at index `k`.
type Univariate = Vec<Coefficient>;

fn univariate_text(p: &Univariate) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = if neg { c.neg() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match k {
            0 => String::new(),
            1 => String::from("a"),
            _ => format!("a^{k}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}*{var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn evaluate(p: &Univariate, a: &BigInt) -> Coefficient {
    let kind = p.first().map(Coefficient::kind).unwrap_or(CoeffKind::Int);
    let x = Coefficient::from_int(kind, a.clone());
    let mut acc = Coefficient::zero(kind);
    for c in p.iter().rev() {
        acc = acc.checked_mul(&x).expect("same kind").checked_add(c).expect("same kind");
    }
    acc
}

/// Integer roots of `p`; `None` when `p` is identically zero.
fn integer_roots(p: &Univariate) -> Option<Vec<BigInt>> {
    let low = p.iter().position(|c| !c.is_zero())?;
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(BigInt::zero());
    }
    if p[low..].len() == 1 {
        return Some(roots);
    }
    // clear denominators; an integer root divides the lowest coefficient
    let exp = p.iter().map(Coefficient::dyadic_exponent).max().unwrap_or(0);
    let scale = Coefficient::from_int(p[low].kind(), BigInt::one() << exp);
    let c0 = p[low].checked_mul(&scale).expect("same kind").to_bigint().expect("integral after scaling").abs();
    let mut d = BigInt::one();
    while d <= c0 {
        if c0.is_multiple_of(&d) {
            for cand in [d.clone(), -&d] {
                if evaluate(p, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        d += 1;
    }
    Some(roots)
}

/// Expands `(1 + a h + x)(1 - a h + x) - target` in the point ring of the
/// quadric fourfold and solves the basis-coefficient system for integer `a`.
fn subbundle_system(check: &str, target: impl Fn(&Arc<RingPresentation>) -> Polynomial) -> Result<Report, VerifyError> {
    let ring = make_ring(RingKind::QuadricHalves(3))?.specialize_to_point()?;
    let kind = ring.coeff_kind();
    let (h, x, one) = (ring.var("h"), ring.var("x"), ring.const_poly(1));
    // coefficients of a^0, a^1, a^2 before normalization
    let raw = [&(&(&one + &x) * &(&one + &x)) - &target(&ring), ring.zero_poly(), -&(&h * &h)];
    let mut equations: BTreeMap<(u32, Monomial), Univariate> = BTreeMap::new();
    for (k, p) in raw.iter().enumerate() {
        let nf = ring.normal_form(p)?;
        for (m, c) in nf.terms() {
            let coeff = c.as_constant().expect("point ring");
            let key = (ring.fiber_table().degree_of(m), m.clone());
            let eq = equations.entry(key).or_insert_with(|| alloc::vec![Coefficient::zero(kind); raw.len()]);
            eq[k] = coeff;
        }
    }
    let mut report = Report::new(check);
    let mut candidates: Option<Vec<BigInt>> = None;
    let mut contradiction = false;
    for eq in equations.values() {
        match integer_roots(eq) {
            None => {}
            Some(roots) if roots.is_empty() => contradiction = true,
            Some(roots) => {
                candidates = Some(match candidates {
                    None => roots,
                    Some(prev) => prev.into_iter().filter(|a| roots.contains(a)).collect(),
                });
            }
        }
    }
    let solutions = if contradiction { Vec::new() } else { candidates.unwrap_or_default() };
    for ((d, m), eq) in &equations {
        if *d == 2 {
            report.witness.push(format!("coefficient of {}: {} = 0", m.text(ring.fiber_table()), univariate_text(eq)));
        }
    }
    let degrees: Vec<u32> = equations.keys().map(|(d, _)| *d).collect();
    report.note(format!("{} basis-coefficient equations in degrees {:?}", equations.len(), dedup(degrees)));
    if solutions.is_empty() {
        report.status = Status::Unsat;
        report.note("no integer a satisfies every equation");
    } else {
        report.status = Status::Sat;
        for a in &solutions {
            report.witness.push(format!("a = {a}"));
        }
    }
    Ok(report)
}

fn dedup(mut v: Vec<u32>) -> Vec<u32> {
    v.dedup();
    v
}

/// No rank-2 subbundle `E` with `c(E) = 1 + a h + x` and `c(E)c(E^*) = 1 + h^2 + h^4`
/// exists on the quadric fourfold: the degree-2 system has no integer solution.
pub fn no_subbundle_check() -> Result<Report, VerifyError> {
    subbundle_system("no_subbundle_check", |ring| {
        let h = ring.var("h");
        &(&ring.const_poly(1) + &h.pow(2)) + &h.pow(4)
    })
}

/// The same system with the target replaced by the expansion of
/// `(1 + h + x)(1 - h + x)`, which has the solutions `a = +-1`.
pub fn no_subbundle_control() -> Result<Report, VerifyError> {
    subbundle_system("no_subbundle_control", |ring| {
        let (h, x, one) = (ring.var("h"), ring.var("x"), ring.const_poly(1));
        &(&(&one + &h) + &x) * &(&(&one - &h) + &x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn int(v: &[i64]) -> Univariate {
        v.iter().map(|&c| Coefficient::from_i64(CoeffKind::Int, c)).collect()
    }

    #[test]
    fn euler_axioms() {
        for n in 2..=4 {
            let r = euler_axioms_check(n).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
        let r = euler_axioms_check(2).unwrap();
        assert!(r.notes.contains(&"(iii) deg(x^2) = deg((e - f)^2) = -2".to_string()), "{r}");
        assert!(euler_axioms_check(1).is_err());
    }

    #[test]
    fn pushpull() {
        for n in 2..=3 {
            let r = pushpull_check(n).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
        assert!(pushpull_check(3).unwrap().notes[0].starts_with("factor 2^2 = 4"));
    }

    #[test]
    fn comparison() {
        for n in 2..=3 {
            let r = comparison_check(n).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }

    #[test]
    fn subbundle_example() {
        let r = no_subbundle_check().unwrap();
        assert_eq!(r.status, Status::Unsat, "{r}");
        assert!(r.witness.contains(&"coefficient of x: 2 = 0".to_string()), "{r}");
        assert!(r.witness.contains(&"coefficient of h^2: -a^2 - 1 = 0".to_string()), "{r}");
        let c = no_subbundle_control().unwrap();
        assert_eq!(c.status, Status::Sat, "{c}");
        assert_eq!(c.witness.iter().filter(|w| w.starts_with("a = ")).count(), 2, "{c}");
    }

    #[test]
    fn univariate_helpers() {
        assert_eq!(univariate_text(&int(&[-1, 0, -1])), "-a^2 - 1");
        assert_eq!(univariate_text(&int(&[0, 3, 2])), "2*a^2 + 3*a");
        assert_eq!(univariate_text(&int(&[0])), "0");
        assert_eq!(integer_roots(&int(&[-4, 0, 1])), Some(vec![BigInt::from(2), BigInt::from(-2)]));
        assert_eq!(integer_roots(&int(&[1, 0, 1])), Some(vec![]));
        assert_eq!(integer_roots(&int(&[0, 0])), None);
        assert_eq!(integer_roots(&int(&[0, 0, 5])), Some(vec![BigInt::zero()]));
        let dy: Univariate = [Coefficient::inverse_power_of_two(1), Coefficient::from_i64(CoeffKind::Dyadic, -1)].to_vec();
        assert_eq!(integer_roots(&dy), Some(vec![]));
    }
}
