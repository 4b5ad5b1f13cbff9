//! Verifier checks against oracles computed independently of the engine:
//! numeric evaluation of power series in one variable, direct products of
//! signed roots, and exhaustive enumeration.

use std::collections::BTreeMap;

use chowq_core::verify::{
    fulton_check, no_subbundle_check, no_subbundle_control, odd_chern_identity_check, oracle_relations_check,
    pushpull_check, split_chern, whitney_invariance_check, FixedPointOracle, Parity, Role, SplitModel, Status,
    SubbundleSpec,
};
use chowq_core::{make_ring, CoeffKind, Coefficient, Polynomial, RingKind};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Power series in `t` with integer coefficients, truncated at `len` terms.
#[derive(Clone, Debug, PartialEq)]
struct Series(Vec<i128>);

impl Series {
    fn linear(c0: i128, c1: i128, len: usize) -> Series {
        let mut v = vec![0; len];
        v[0] = c0;
        if len > 1 {
            v[1] = c1;
        }
        Series(v)
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.0.len();
        let mut v = vec![0; len];
        for i in 0..len {
            for j in 0..len - i {
                v[i + j] += self.0[i] * other.0[j];
            }
        }
        Series(v)
    }

    fn add(&self, other: &Series) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Inverse of a series with constant term 1.
    fn inverse(&self) -> Series {
        assert_eq!(self.0[0], 1);
        let len = self.0.len();
        let mut v = vec![0i128; len];
        v[0] = 1;
        for d in 1..len {
            v[d] = -(1..=d).map(|j| self.0[j] * v[d - j]).sum::<i128>();
        }
        Series(v)
    }
}

/// Coefficient of `t^d` after `y_i -> a_i t`, `l -> b t`.
fn evaluate_graded(p: &Polynomial, values: &[i128]) -> BTreeMap<u32, i128> {
    let mut out = BTreeMap::new();
    for (m, c) in p.terms() {
        let c: i128 = c.to_bigint().expect("integral").try_into().unwrap();
        let mut v = c;
        let mut d = 0;
        for (e, x) in m.exps().iter().zip(values) {
            v *= x.pow(*e);
            d += e;
        }
        *out.entry(d).or_insert(0) += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn series_graded(s: &Series) -> BTreeMap<u32, i128> {
    s.0.iter().enumerate().filter(|(_, v)| **v != 0).map(|(d, v)| (d as u32, *v)).collect()
}

fn flips(n: u32, mask: u64) -> Vec<u32> {
    (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

fn signed(mask: u64, i: u32) -> i128 {
    if mask >> (i - 1) & 1 == 1 {
        -1
    } else {
        1
    }
}

#[test]
fn odd_identity_matches_numeric_series() {
    // n = 2, S_F = {1}: c(E*) + c(F*) = (c(V/E) + c(V/F)) / (1 + l) in every degree <= 5
    let n = 2;
    let len = 6;
    let (a, b) = ([3i128, -5], 7i128);
    let one_minus_sq = a.iter().fold(Series::linear(1, 0, len), |acc, x| acc.mul(&Series::linear(1, *x, len)).mul(&Series::linear(1, -*x, len)));
    let cv = one_minus_sq.mul(&Series::linear(1, b, len));
    let sub = |mask: u64, dual: bool| {
        (1..=n).fold(Series::linear(1, 0, len), |acc, i| {
            let s = signed(mask, i) * if dual { -1 } else { 1 };
            acc.mul(&Series::linear(1, s * a[i as usize - 1], len))
        })
    };
    let lhs = sub(0, true).add(&sub(1, true));
    let quot = cv.mul(&sub(0, false).inverse()).add(&cv.mul(&sub(1, false).inverse()));
    let rhs = quot.mul(&Series::linear(1, b, len).inverse());
    assert_eq!(lhs, rhs);
    // and the engine's classes evaluate to the same series
    let model = SplitModel::new(n, Parity::Odd, CoeffKind::Int).unwrap();
    let values = [a[0], a[1], b];
    let e_dual = split_chern(&model, &SubbundleSpec::new(n, &[], Role::EDual).unwrap(), 5).unwrap();
    let f_dual = split_chern(&model, &SubbundleSpec::new(n, &[1], Role::FDual).unwrap(), 5).unwrap();
    assert_eq!(evaluate_graded(&(&e_dual + &f_dual), &values), series_graded(&lhs));
    let r = odd_chern_identity_check(n).unwrap();
    assert_eq!(r.status, Status::Pass, "{r}");
}

#[test]
fn odd_identity_at_zero_roots() {
    // all roots and l at 0: both sides equal 2
    let model = SplitModel::new(1, Parity::Odd, CoeffKind::Int).unwrap();
    for mask in 0..2 {
        let f = split_chern(&model, &SubbundleSpec::from_mask(1, mask, Role::FDual), 3).unwrap();
        let e = split_chern(&model, &SubbundleSpec::from_mask(1, 0, Role::EDual), 3).unwrap();
        assert_eq!(evaluate_graded(&(&e + &f), &[0, 0]).get(&0), Some(&2));
    }
}

#[test]
fn whitney_agrees_with_enumeration_mod_two() {
    // n = 3: e_i of (+-a_1, +-a_2, +-a_3) has the same parity for all 8 flip sets
    let a = [3i128, 4, 7];
    let esyms = |mask: u64| {
        let mut e = vec![1i128, 0, 0, 0];
        for i in 1..=3u32 {
            let x = signed(mask, i) * a[i as usize - 1];
            for k in (1..=3).rev() {
                e[k] += e[k - 1] * x;
            }
        }
        e
    };
    let base: Vec<i128> = esyms(0).iter().map(|v| v.rem_euclid(2)).collect();
    for mask in 0..8 {
        let parity: Vec<i128> = esyms(mask).iter().map(|v| v.rem_euclid(2)).collect();
        assert_eq!(parity, base, "flip set {:?}", flips(3, mask));
    }
    for n in 1..=3 {
        for parity in [Parity::Even, Parity::Odd] {
            let r = whitney_invariance_check(n, parity).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }
}

#[test]
fn split_top_class_of_v() {
    // c_{2n}(V) = (-1)^n (y_1 ... y_n)^2 on the even split model
    for n in 1..=4u32 {
        let model = SplitModel::new(n, Parity::Even, CoeffKind::Int).unwrap();
        let cv = split_chern(&model, &SubbundleSpec::new(n, &[], Role::V).unwrap(), 2 * n).unwrap();
        let prod = (1..=n).fold(Polynomial::one(model.table(), CoeffKind::Int), |acc, i| &acc * &model.root(i));
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(cv.graded_component(2 * n), (&prod * &prod).scale_i64(sign));
    }
}

#[test]
fn fulton_examples_from_the_family_rule() {
    let r = fulton_check(4, Parity::Even, &[], &[1, 2]).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.notes.iter().any(|s| s == "c_4(F) = +c_4(E)"));
    let r = fulton_check(3, Parity::Even, &[], &[1]).unwrap();
    assert!(r.notes.iter().any(|s| s == "c_3(F) = -c_3(E)"));
    let r = fulton_check(2, Parity::Odd, &[1], &[1]).unwrap();
    assert!(r.residuals.is_empty());
}

#[test]
fn pushforward_factor_is_exact() {
    for n in 2..=4 {
        let r = pushpull_check(n).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
        assert!(r.notes[0].starts_with(&format!("factor 2^{} = {}", n - 1, 1 << (n - 1))));
    }
}

#[test]
fn oracle_vanishing_for_every_kind() {
    for n in 1..=4 {
        for name in ["quadric_halves", "flag_tower", "flag_dn", "flag_bn", "quadric_integral_even", "projective_bundle"] {
            let kind = RingKind::from_name(name, n).unwrap();
            if make_ring(kind).is_err() || kind == RingKind::FlagBn(4) {
                continue;
            }
            let r = oracle_relations_check(kind).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }
}

#[test]
fn halves_relation_under_tower_substitution() {
    // x^2 + h^2 + c2V in the halves ring at n = 2
    let ring = make_ring(RingKind::QuadricHalves(2)).unwrap();
    let oracle = FixedPointOracle::new(&ring).unwrap();
    let (x, h) = (ring.var("x"), ring.var("h"));
    let p = &(&(&x * &x) + &(&h * &h)) + &ring.var("c2V");
    assert!(oracle.first_nonvanishing(&p).unwrap().is_none());
    assert!(oracle.first_nonvanishing(&(&x * &x)).unwrap().is_some());
}

#[test]
fn bn_one_linear_relation() {
    // 2c1 = (x1 + l) + (y1 + l)
    let ring = make_ring(RingKind::FlagBn(1)).unwrap();
    let oracle = FixedPointOracle::new(&ring).unwrap();
    let l = ring.var("l");
    let rel = &(&ring.var("c1").scale_i64(2) - &(&ring.var("x1") + &l)) - &(&ring.var("y1") + &l);
    assert!(oracle.first_nonvanishing(&rel).unwrap().is_none());
    assert!(ring.normal_form(&rel).unwrap().is_zero());
}

#[test]
fn subbundle_system_and_control() {
    let r = no_subbundle_check().unwrap();
    assert_eq!(r.status, Status::Unsat);
    assert!(r.as_expected());
    assert!(r.witness.iter().any(|w| w == "coefficient of x: 2 = 0"), "{r}");
    let c = no_subbundle_control().unwrap();
    assert_eq!(c.status, Status::Sat);
    assert!(c.as_expected());
    assert!(c.witness.iter().any(|w| w == "a = 1"), "{c}");
    assert!(c.witness.iter().any(|w| w == "a = -1"), "{c}");
}

fn flip_set(max_n: u32) -> impl Strategy<Value = (u32, u64)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), 0..1u64 << n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_sign_law((n, mask) in flip_set(6)) {
        let model = SplitModel::new(n, Parity::Even, CoeffKind::Int).unwrap();
        let e = split_chern(&model, &SubbundleSpec::from_mask(n, 0, Role::E), n).unwrap();
        let f = split_chern(&model, &SubbundleSpec::from_mask(n, mask, Role::F), n).unwrap();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(f.graded_component(n), e.graded_component(n).scale_i64(sign));
        // independent: the product of the signed roots
        let direct = (1..=n).fold(Polynomial::one(model.table(), CoeffKind::Int), |acc, i| {
            &acc * &model.root(i).scale_i64(signed(mask, i) as i64)
        });
        prop_assert_eq!(f.graded_component(n), direct);
    }

    #[test]
    fn chern_classes_are_flip_invariant_mod_two((n, mask) in flip_set(6)) {
        let model = SplitModel::new(n, Parity::Even, CoeffKind::Int).unwrap();
        let e = split_chern(&model, &SubbundleSpec::from_mask(n, 0, Role::E), n).unwrap();
        let f = split_chern(&model, &SubbundleSpec::from_mask(n, mask, Role::E), n).unwrap();
        prop_assert!((&e - &f).convert(CoeffKind::Mod2).unwrap().is_zero());
    }

    #[test]
    fn fulton_pairs_pass(((n, a), b, odd) in flip_set(6).prop_flat_map(|(n, a)| (Just((n, a)), 0..1u64 << n, any::<bool>()))) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let r = fulton_check(n, parity, &flips(n, a), &flips(n, b)).unwrap();
        prop_assert_eq!(r.status, Status::Pass, "{}", r);
    }

    #[test]
    fn quotient_classes_evaluate_like_series((n, mask) in flip_set(4), vals in proptest::collection::vec(-9i128..=9, 5)) {
        // c(V/E) = c(V) / c(E) as numeric series with y_i -> a_i t, l -> b t
        let model = SplitModel::new(n, Parity::Odd, CoeffKind::Int).unwrap();
        let bound = model.rank();
        let len = bound as usize + 1;
        let a = &vals[..n as usize];
        let b = vals[4];
        let mut cv = Series::linear(1, b, len);
        let mut ce = Series::linear(1, 0, len);
        for (i, x) in a.iter().enumerate() {
            cv = cv.mul(&Series::linear(1, *x, len)).mul(&Series::linear(1, -*x, len));
            ce = ce.mul(&Series::linear(1, signed(mask, i as u32 + 1) * x, len));
        }
        let expect = cv.mul(&ce.inverse());
        let q = split_chern(&model, &SubbundleSpec::from_mask(n, mask, Role::VModE), bound).unwrap();
        let mut values = a.to_vec();
        values.push(b);
        prop_assert_eq!(evaluate_graded(&q, &values), series_graded(&expect));
    }

    #[test]
    fn half_classes_are_integral((n, a) in flip_set(6), b in 0u64..64) {
        let b = b % (1 << n);
        let model = SplitModel::new(n, Parity::Even, CoeffKind::Int).unwrap();
        let e = split_chern(&model, &SubbundleSpec::from_mask(n, a, Role::E), n).unwrap();
        let f = split_chern(&model, &SubbundleSpec::from_mask(n, b, Role::F), n).unwrap();
        let half = (&e + &f).convert(CoeffKind::Dyadic).unwrap().scale(&Coefficient::inverse_power_of_two(1)).unwrap();
        prop_assert_eq!(half.max_dyadic_exponent(), 0);
        let two = BigInt::from(2);
        for c in (&e + &f).terms().values() {
            prop_assert_eq!(c.to_bigint().unwrap() % &two, BigInt::from(0));
        }
    }
}
