use std::sync::Arc;

use chowq::parse_polynomial;
use chowq_core::catalog::KIND_NAMES;
use chowq_core::{make_ring, CoeffKind, Coefficient, Polynomial, RingElement, RingKind, RingPresentation};
use proptest::prelude::*;

fn catalog_up_to(n_max: u32) -> Vec<Arc<RingPresentation>> {
    let mut out = Vec::new();
    for name in KIND_NAMES {
        for n in 1..=n_max {
            let kind = RingKind::from_name(name, n).unwrap();
            let (lo, hi) = kind.supported_range();
            if (lo..=hi).contains(&n) {
                out.push(make_ring(kind).unwrap());
            }
        }
    }
    out
}

fn reparse(e: &RingElement) -> RingElement {
    let ring = e.ring();
    let text = e.to_string();
    let raw = parse_polynomial(&text, ring).unwrap_or_else(|err| panic!("{text}: {err}"));
    ring.normal_form(&raw).unwrap()
}

#[test]
fn basis_monomials_round_trip() {
    for ring in catalog_up_to(3) {
        for i in 0..ring.basis().len() {
            let e = ring.basis_element(i);
            assert_eq!(reparse(&e), e, "{:?} basis element {e}", ring.kind());
        }
    }
}

#[test]
fn products_with_base_coefficients_round_trip() {
    for ring in catalog_up_to(2) {
        let k = ring.basis().len();
        for i in 0..k {
            for j in i..k {
                let e = ring.ring_mul(&ring.basis_element(i), &ring.basis_element(j)).unwrap();
                assert_eq!(reparse(&e), e, "{:?}: {e}", ring.kind());
            }
        }
    }
}

#[test]
fn aliases_round_trip() {
    for ring in catalog_up_to(3) {
        for (name, value) in ring.aliases() {
            let e = ring.normal_form(value).unwrap();
            assert_eq!(reparse(&e), e, "{:?} alias {name}", ring.kind());
            let named = ring.normal_form(&parse_polynomial(name, &ring).unwrap()).unwrap();
            assert_eq!(named, e);
        }
    }
}

fn combination(ring: &Arc<RingPresentation>, picks: &[(usize, usize, i64, u64)]) -> RingElement {
    let base = ring.base_table();
    let mut raw = ring.zero_poly();
    for &(b, g, c, k) in picks {
        let mono = ring.basis_element(b % ring.basis().len()).lift();
        let coeff = match ring.coeff_kind() {
            CoeffKind::Dyadic => chowq_core::scalar::dyadic_normalize(c.into(), k),
            kind => Coefficient::from_i64(kind, c),
        };
        let mut term = mono.scale(&coeff).unwrap();
        if !base.is_empty() && g % 2 == 1 {
            let gen = base.name(g % base.len()).to_string();
            term = &term * &ring.var(&gen);
        }
        raw = &raw + &term;
    }
    ring.normal_form(&raw).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combinations_round_trip(
        which in 0usize..64,
        picks in prop::collection::vec((0usize..64, 0usize..16, -9i64..10, 0u64..4), 1..5),
    ) {
        let rings = catalog_up_to(3);
        let ring = &rings[which % rings.len()];
        let e = combination(ring, &picks);
        prop_assert_eq!(reparse(&e), e);
    }

    #[test]
    fn parsing_is_whitespace_insensitive(picks in prop::collection::vec((0usize..64, 0usize..16, -9i64..10, 0u64..4), 1..4)) {
        let ring = make_ring(RingKind::QuadricHalves(3)).unwrap();
        let e = combination(&ring, &picks);
        let text = e.to_string();
        let spaced: String = text.chars().map(|c| if "+-*/^".contains(c) { format!("  {c}\t") } else { c.to_string() }).collect();
        let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let a: Polynomial = parse_polynomial(&squeezed, &ring).unwrap();
        let b: Polynomial = parse_polynomial(&spaced, &ring).unwrap();
        prop_assert_eq!(a, b);
    }
}
