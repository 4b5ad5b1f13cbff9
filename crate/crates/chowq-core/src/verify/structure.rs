//! Exhaustive soundness of a presentation: basis monomials are normal
//! forms, relations reduce to zero, and multiplication of normal forms is
//! commutative and associative on every pair and triple of basis elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::ToPrimitive;

use super::{Report, VerifyError};
use crate::catalog::{make_ring, RingKind};
use crate::poly::{GeneratorTable, Monomial, Polynomial};
use crate::ring::{RingElement, RingPresentation};
use crate::scalar::Coefficient;

/// Residuals listed per failure class before the rest are only counted.
const MAX_LISTED: usize = 10;

pub fn ring_structure_check(kind: RingKind) -> Result<Report, VerifyError> {
    presentation_structure_check(&make_ring(kind)?)
}

/// [`ring_structure_check`] for an arbitrary presentation.
pub fn presentation_structure_check(ring: &Arc<RingPresentation>) -> Result<Report, VerifyError> {
    let ring = ring.clone();
    let kind = ring.kind();
    let mut report = Report::new("ring_structure_check")
        .text_param("kind", kind.name())
        .int_param("n", i64::from(kind.n()));
    let fiber = ring.fiber_table().clone();

    for (i, m) in ring.basis().iter().enumerate() {
        let b = ring.basis_element(i);
        if ring.normal_form(&b.lift())? != b {
            report.fail("basis monomial is not a normal form", None, m.text(&fiber));
        }
    }
    for (name, rel) in ring.relations() {
        let nf = ring.normal_form(rel)?;
        if !nf.is_zero() {
            report.fail(format!("relation {name}"), None, nf.to_string());
        }
    }

    let table = product_table(&ring)?;
    let len = table.len();
    let mut bad_pairs = 0usize;
    for (i, row) in table.iter().enumerate() {
        for (j, other) in table.iter().enumerate().skip(i + 1) {
            if row[j] != other[i] {
                bad_pairs += 1;
                if bad_pairs <= MAX_LISTED {
                    let label = format!("{} * {} - {} * {}", name(&ring, i), name(&ring, j), name(&ring, j), name(&ring, i));
                    report.fail(label, None, row[j].checked_sub(&other[i])?.to_string());
                }
            }
        }
    }

    // With commutativity, associativity on all ordered triples is the
    // statement that the three groupings of each multiset {i, j, k} agree.
    let coords = base_coordinates(&ring)?;
    let (bad, mode) = match Packed::new(&ring, &table, coords.as_deref()).and_then(|p| p.bad_triples()) {
        Some(bad) => (bad, "packed machine-integer"),
        None => (generic_bad_triples(&ring, &table)?, "arbitrary-precision"),
    };
    for &(i, j, k) in bad.iter().take(MAX_LISTED) {
        let (p1, p2, p3) = generic_groupings(&ring, &table, i, j, k)?;
        let diff = if p1 != p2 { p1.checked_sub(&p2)? } else { p1.checked_sub(&p3)? };
        let label = format!("associator of ({}, {}, {})", name(&ring, i), name(&ring, j), name(&ring, k));
        report.fail(label, None, diff.to_string());
    }
    if bad_pairs > MAX_LISTED || bad.len() > MAX_LISTED {
        report.note(format!("{bad_pairs} noncommuting pairs and {} nonassociative multisets in total", bad.len()));
    }
    let n = len as u64;
    report.note(format!(
        "{len} basis elements: {} ordered pairs, {} ordered triples, {} arithmetic",
        n * n,
        n * n * n,
        mode
    ));
    Ok(report)
}

fn name(ring: &RingPresentation, i: usize) -> alloc::string::String {
    ring.basis()[i].text(ring.fiber_table())
}

fn product_table(ring: &Arc<RingPresentation>) -> Result<Vec<Vec<RingElement>>, VerifyError> {
    let b: Vec<RingElement> = (0..ring.basis().len()).map(|i| ring.basis_element(i)).collect();
    let mut table = Vec::with_capacity(b.len());
    for x in &b {
        let mut row = Vec::with_capacity(b.len());
        for y in &b {
            row.push(ring.ring_mul(x, y)?);
        }
        table.push(row);
    }
    Ok(table)
}

fn basis_index(ring: &RingPresentation) -> BTreeMap<Monomial, usize> {
    ring.basis().iter().cloned().zip(0..).collect()
}

/// `(b_a b_b) b_c` expanded through the structure constants.
fn grouping(
    ring: &Arc<RingPresentation>,
    table: &[Vec<RingElement>],
    index: &BTreeMap<Monomial, usize>,
    a: usize,
    b: usize,
    c: usize,
) -> Result<RingElement, VerifyError> {
    let mut terms: Vec<(Monomial, Polynomial)> = Vec::new();
    for (m, coeff) in table[a][b].terms() {
        for (m2, p) in table[index[m]][c].terms() {
            terms.push((m2.clone(), coeff.checked_mul(p)?));
        }
    }
    Ok(ring.element_from_terms(terms)?)
}

fn generic_groupings(
    ring: &Arc<RingPresentation>,
    table: &[Vec<RingElement>],
    i: usize,
    j: usize,
    k: usize,
) -> Result<(RingElement, RingElement, RingElement), VerifyError> {
    let index = basis_index(ring);
    Ok((
        grouping(ring, table, &index, i, j, k)?,
        grouping(ring, table, &index, i, k, j)?,
        grouping(ring, table, &index, j, k, i)?,
    ))
}

fn generic_bad_triples(
    ring: &Arc<RingPresentation>,
    table: &[Vec<RingElement>],
) -> Result<Vec<(usize, usize, usize)>, VerifyError> {
    let index = basis_index(ring);
    let len = table.len();
    let mut bad = Vec::new();
    for i in 0..len {
        for j in i..len {
            for k in j..len {
                let p1 = grouping(ring, table, &index, i, j, k)?;
                if p1 != grouping(ring, table, &index, i, k, j)? || p1 != grouping(ring, table, &index, j, k, i)? {
                    bad.push((i, j, k));
                }
            }
        }
    }
    Ok(bad)
}

/// Base change used by the packed check. The type B structure constants are
/// polynomials in the shifted roots `y_i + l` and `l`; rewriting them in
/// those coordinates (an automorphism of the base ring, so equalities are
/// unaffected) makes them about three times shorter.
fn base_coordinates(ring: &RingPresentation) -> Result<Option<Vec<Option<Polynomial>>>, VerifyError> {
    let RingKind::FlagBn(n) = ring.kind() else { return Ok(None) };
    let names = (0..=n).map(|i| if i == 0 { (String::from("l"), 1) } else { (format!("w{i}"), 1) });
    let shifted = Arc::new(GeneratorTable::new(names)?);
    let k = ring.coeff_kind();
    let l = Polynomial::generator(&shifted, k, 0);
    let mut images = alloc::vec![Some(l.clone())];
    for i in 1..=n as usize {
        images.push(Some(&Polynomial::generator(&shifted, k, i) - &l));
    }
    Ok(Some(images))
}

/// Base exponents packed 8 bits per generator into the low 48 bits, with the
/// fiber basis index above them.
const MONO_BITS: u32 = 48;
const MAX_BASE_VARS: usize = 6;
const MAX_EXPONENT: u32 = 127;

/// Base monomial packed into a `u64`, with its scaled coefficient.
type PackedTerms = Vec<(u64, i64)>;

/// The product table with every coefficient scaled by a common power of two
/// into an `i64`, for the hot associativity loop.
struct Packed {
    /// `grouped[a][b]`: per fiber basis index, the packed base terms.
    grouped: Vec<Vec<Vec<(usize, PackedTerms)>>>,
    /// `flat[a][b]`: all terms, keyed by basis index and base monomial.
    flat: Vec<Vec<PackedTerms>>,
}

impl Packed {
    /// `None` when the table does not fit the packed layout.
    fn new(ring: &RingPresentation, table: &[Vec<RingElement>], coords: Option<&[Option<Polynomial>]>) -> Option<Packed> {
        let len = table.len();
        if ring.base_table().len() > MAX_BASE_VARS || len >= 1 << (64 - MONO_BITS) {
            return None;
        }
        let index = basis_index(ring);
        // substitutions by y - l do not introduce denominators
        let scale = table
            .iter()
            .flatten()
            .flat_map(|e| e.terms().values())
            .map(Polynomial::max_dyadic_exponent)
            .max()
            .unwrap_or(0);
        let mut grouped = Vec::with_capacity(len);
        let mut flat = Vec::with_capacity(len);
        for row in table {
            let mut grow = Vec::with_capacity(len);
            let mut frow = Vec::with_capacity(len);
            for e in row {
                let mut g = Vec::new();
                let mut f = Vec::new();
                for (m, p) in e.terms() {
                    let idx = index[m];
                    let moved;
                    let p = match coords {
                        Some(images) => {
                            moved = p.substitute(images).ok()?;
                            &moved
                        }
                        None => p,
                    };
                    let mut terms = Vec::with_capacity(p.len());
                    for (bm, c) in p.terms() {
                        let mono = pack(bm)?;
                        let v = scaled(c, scale)?;
                        terms.push((mono, v));
                        f.push((((idx as u64) << MONO_BITS) | mono, v));
                    }
                    g.push((idx, terms));
                }
                grow.push(g);
                frow.push(f);
            }
            grouped.push(grow);
            flat.push(frow);
        }
        Some(Packed { grouped, flat })
    }

    /// Triples whose groupings differ; `None` on machine-integer overflow.
    fn bad_triples(&self) -> Option<Vec<(usize, usize, usize)>> {
        let len = self.flat.len();
        // |(b_a b_b) b_c| is at most norm(a, b) * max_m norm(m, c), so when the
        // largest such bound fits, the hot loop cannot overflow
        let norm = |t: &[(u64, i64)]| t.iter().try_fold(0i64, |acc, (_, c)| acc.checked_add(c.checked_abs()?));
        let mut norms = Vec::with_capacity(len);
        for row in &self.flat {
            norms.push(row.iter().map(|t| norm(t)).collect::<Option<Vec<i64>>>()?);
        }
        let col_max: Vec<i64> = (0..len).map(|c| norms.iter().map(|r| r[c]).max().unwrap_or(0)).collect();
        let fits = norms.iter().flatten().all(|&a| col_max.iter().all(|&b| a.checked_mul(b).is_some()));
        let mut p1 = Acc::default();
        let mut p2 = Acc::default();
        let mut bad = Vec::new();
        for i in 0..len {
            for j in i..len {
                for k in j..len {
                    self.grouping(i, j, k, &mut p1, fits)?;
                    self.grouping(i, k, j, &mut p2, fits)?;
                    let mut same = p1 == p2;
                    if same {
                        self.grouping(j, k, i, &mut p2, fits)?;
                        same = p1 == p2;
                    }
                    if !same {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        Some(bad)
    }

    fn grouping(&self, a: usize, b: usize, c: usize, acc: &mut Acc, fits: bool) -> Option<()> {
        acc.clear();
        for (m, terms) in &self.grouped[a][b] {
            let row = &self.flat[*m][c];
            for &(mono, c1) in terms {
                if fits {
                    for &(key, c2) in row {
                        *acc.entry(key + mono).or_insert(0) += c1 * c2;
                    }
                } else {
                    for &(key, c2) in row {
                        let v = c1.checked_mul(c2)?;
                        let slot = acc.entry(key + mono).or_insert(0);
                        *slot = slot.checked_add(v)?;
                    }
                }
            }
        }
        acc.retain(|_, v| *v != 0);
        Some(())
    }
}

type Acc = HashMap<u64, i64>;

fn pack(m: &Monomial) -> Option<u64> {
    let mut out = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > MAX_EXPONENT {
            return None;
        }
        out |= u64::from(e) << (8 * i);
    }
    Some(out)
}

/// `c * 2^scale` as an `i64`.
fn scaled(c: &Coefficient, scale: u64) -> Option<i64> {
    let (num, exp) = match c {
        Coefficient::Int(v) => (v.clone(), 0),
        Coefficient::Dyadic(d) => (d.numerator().clone(), d.exponent()),
        Coefficient::Mod2(_) => return None,
    };
    let shift = usize::try_from(scale - exp).ok()?;
    if shift > 62 {
        return None;
    }
    (num << shift).to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn small_rings_are_sound() {
        for kind in [RingKind::QuadricPointEven(3), RingKind::QuadricHalves(2), RingKind::FlagDn(2)] {
            let r = ring_structure_check(kind).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }

    #[test]
    fn packed_and_generic_agree() {
        for kind in [RingKind::FlagTower(2), RingKind::QuadricIntegralOdd(2), RingKind::FlagBn(1)] {
            let ring = make_ring(kind).unwrap();
            let table = product_table(&ring).unwrap();
            let coords = base_coordinates(&ring).unwrap();
            let packed = Packed::new(&ring, &table, coords.as_deref()).unwrap().bad_triples().unwrap();
            assert_eq!(packed, generic_bad_triples(&ring, &table).unwrap());
            assert!(packed.is_empty());
        }
    }

    /// `a^2 -> 0, ab -> b^2, b^4 -> 0`: the overlap a^2 b gives 0 one way
    /// and the irreducible b^3 the other.
    fn non_confluent() -> Arc<RingPresentation> {
        use crate::ring::{PresentationParts, Rule};
        use crate::scalar::CoeffKind;
        let table = Arc::new(GeneratorTable::new([("a", 1), ("b", 1)]).unwrap());
        let k = CoeffKind::Int;
        let b = Polynomial::generator(&table, k, 1);
        let m = |a: u32, b: u32| Monomial(alloc::vec![a, b]);
        let zero = Polynomial::zero(&table, k);
        RingPresentation::new(PresentationParts {
            kind: RingKind::QuadricPointEven(2),
            coeff: k,
            table: table.clone(),
            fiber_len: 2,
            rules: alloc::vec![
                Rule { lhs: m(2, 0), rhs: zero.clone() },
                Rule { lhs: m(1, 1), rhs: &b * &b },
                Rule { lhs: m(0, 4), rhs: zero },
            ],
            basis: alloc::vec![m(0, 0), m(1, 0), m(0, 1), m(0, 2), m(0, 3)],
            pushforward: None,
            aliases: alloc::vec![],
            relations: alloc::vec![],
            order: alloc::vec![alloc::vec![1, 1], alloc::vec![1, 0]],
        })
        .unwrap()
    }

    #[test]
    fn detects_non_associativity() {
        let r = presentation_structure_check(&non_confluent()).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.residuals.iter().any(|res| res.label == "associator of (a, a, b)" && res.value == "-b^3"), "{r}");
    }

    #[test]
    fn packing_limits() {
        let big = Coefficient::Int(num_bigint::BigInt::from(1u64 << 62) * 4);
        assert_eq!(scaled(&big, 0), None);
        assert_eq!(scaled(&Coefficient::from_i64(crate::scalar::CoeffKind::Int, -3), 2), Some(-12));
        assert_eq!(pack(&Monomial(alloc::vec![1, 2])), Some(1 | 2 << 8));
        assert_eq!(pack(&Monomial(alloc::vec![200])), None);
    }
}
