//! Quotient rings presented by rewrite rules on fiber monomials over a free
//! polynomial base ring.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::catalog::RingKind;
use crate::poly::{canonical_cmp, same_table, GeneratorTable, Monomial, PolyError, Polynomial};
use crate::scalar::{CoeffKind, Coefficient};

/// Rewrite budget per normal form computation.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    Poly(PolyError),
    RingMismatch,
    NonTermination { budget: u64 },
    NoPushforwardData,
    NotPointRing,
    NotTopDegree { expected: u32, found: u32 },
    BaseNotTrivial,
    InvalidOrientation(i64),
    KindMismatch,
    /// A presentation failed its own construction checks.
    InvalidPresentation(String),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::Poly(e) => write!(f, "{e}"),
            RingError::RingMismatch => f.write_str("RING_MISMATCH: elements belong to different rings"),
            RingError::NonTermination { budget } => {
                write!(f, "NONTERMINATION_GUARD: rewriting exceeded {budget} steps")
            }
            RingError::NoPushforwardData => f.write_str("NO_PUSHFORWARD_DATA"),
            RingError::NotPointRing => f.write_str("NOT_POINT_RING: the base ring is not trivial"),
            RingError::NotTopDegree { expected, found } => {
                write!(f, "NOT_TOP_DEGREE: expected degree {expected}, found {found}")
            }
            RingError::BaseNotTrivial => f.write_str("BASE_NOT_TRIVIAL: only available over a point"),
            RingError::InvalidOrientation(o) => write!(f, "INVALID_ORIENTATION: {o} is not +1 or -1"),
            RingError::KindMismatch => f.write_str("KIND_MISMATCH: unsupported ring kind for this operation"),
            RingError::InvalidPresentation(msg) => write!(f, "INVALID_PRESENTATION: {msg}"),
        }
    }
}

impl From<PolyError> for RingError {
    fn from(e: PolyError) -> Self {
        RingError::Poly(e)
    }
}

/// `lhs -> rhs`; `lhs` is a fiber monomial, `rhs` lives over fiber and base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Polynomial,
}

#[derive(Clone, Debug)]
struct CompiledRule {
    lhs: Monomial,
    rhs: Vec<(Monomial, Polynomial)>,
}

/// Everything the catalog supplies to build a presentation.
#[derive(Clone, Debug)]
pub struct PresentationParts {
    pub kind: RingKind,
    pub coeff: CoeffKind,
    /// Fiber generators followed by base generators.
    pub table: Arc<GeneratorTable>,
    pub fiber_len: usize,
    pub rules: Vec<Rule>,
    pub basis: Vec<Monomial>,
    pub pushforward: Option<Vec<(Monomial, Polynomial)>>,
    /// Named derived elements over the full table.
    pub aliases: Vec<(String, Polynomial)>,
    /// Defining relations of the ring over the full table.
    pub relations: Vec<(String, Polynomial)>,
    /// Weight rows over fiber exponents; the processing order compares
    /// the weight vectors lexicographically.
    pub order: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    kind: RingKind,
    coeff: CoeffKind,
    table: Arc<GeneratorTable>,
    fiber: Arc<GeneratorTable>,
    base: Arc<GeneratorTable>,
    rules: Vec<Rule>,
    compiled: Vec<CompiledRule>,
    basis: Vec<Monomial>,
    basis_set: BTreeSet<Monomial>,
    pushforward: Option<BTreeMap<Monomial, Polynomial>>,
    aliases: Vec<(String, Polynomial)>,
    relations: Vec<(String, Polynomial)>,
    order: Vec<Vec<i64>>,
}

impl RingPresentation {
    pub fn new(parts: PresentationParts) -> Result<Arc<Self>, RingError> {
        let PresentationParts { kind, coeff, table, fiber_len, rules, basis, pushforward, aliases, relations, order } =
            parts;
        let bad = |msg: &str| RingError::InvalidPresentation(String::from(msg));
        let fiber = Arc::new(GeneratorTable::new(
            (0..fiber_len).map(|i| (String::from(table.name(i)), table.degree(i))),
        )?);
        let base = Arc::new(GeneratorTable::new(
            (fiber_len..table.len()).map(|i| (String::from(table.name(i)), table.degree(i))),
        )?);
        let mut ring = RingPresentation {
            kind,
            coeff,
            table,
            fiber,
            base,
            rules: Vec::new(),
            compiled: Vec::new(),
            basis_set: basis.iter().cloned().collect(),
            basis,
            pushforward: None,
            aliases,
            relations,
            order,
        };
        for rule in rules {
            if rule.lhs.0.len() != fiber_len || !same_table(rule.rhs.table(), &ring.table) {
                return Err(bad("rule shape does not match the generator tables"));
            }
            if rule.rhs.kind() != coeff {
                return Err(bad("rule coefficients use the wrong ring"));
            }
            let d = ring.fiber.degree_of(&rule.lhs);
            if rule.rhs.terms().keys().any(|m| ring.table.degree_of(m) != d) {
                return Err(bad("rule right-hand side is not homogeneous of the leading degree"));
            }
            let compiled = CompiledRule { lhs: rule.lhs.clone(), rhs: ring.split(&rule.rhs).into_iter().collect() };
            ring.compiled.push(compiled);
            ring.rules.push(rule);
        }
        for b in &ring.basis {
            if b.0.len() != fiber_len || ring.rule_for(b).is_some() {
                return Err(bad("declared basis monomial is reducible"));
            }
        }
        ring.basis.sort_by(|a, b| canonical_cmp(&ring.fiber, a, b));
        if let Some(push) = pushforward {
            let mut map = BTreeMap::new();
            for (m, p) in push {
                if !ring.basis_set.contains(&m) || !same_table(p.table(), &ring.base) {
                    return Err(bad("pushforward data must map basis monomials to base polynomials"));
                }
                map.insert(m, p);
            }
            ring.pushforward = Some(map);
        }
        Ok(Arc::new(ring))
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn coeff_kind(&self) -> CoeffKind {
        self.coeff
    }

    /// Fiber generators followed by base generators.
    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn fiber_table(&self) -> &Arc<GeneratorTable> {
        &self.fiber
    }

    pub fn base_table(&self) -> &Arc<GeneratorTable> {
        &self.base
    }

    pub fn is_point(&self) -> bool {
        self.base.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Declared basis in canonical order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn pushforward_data(&self) -> Option<&BTreeMap<Monomial, Polynomial>> {
        self.pushforward.as_ref()
    }

    pub fn aliases(&self) -> &[(String, Polynomial)] {
        &self.aliases
    }

    pub fn alias(&self, name: &str) -> Option<&Polynomial> {
        self.aliases.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn relations(&self) -> &[(String, Polynomial)] {
        &self.relations
    }

    /// Generator or named element over the full table.
    pub fn element_named(&self, name: &str) -> Option<Polynomial> {
        match self.table.index_of(name) {
            Some(i) => Some(Polynomial::generator(&self.table, self.coeff, i)),
            None => self.alias(name).cloned(),
        }
    }

    /// Generator or named element; panics on unknown names, for use with
    /// names the catalog itself defines.
    pub fn var(&self, name: &str) -> Polynomial {
        self.element_named(name).unwrap_or_else(|| panic!("ring has no element named {name}"))
    }

    pub fn zero_poly(&self) -> Polynomial {
        Polynomial::zero(&self.table, self.coeff)
    }

    pub fn const_poly(&self, v: i64) -> Polynomial {
        Polynomial::from_i64(&self.table, self.coeff, v)
    }

    /// Degree of the top basis monomial, the fiber dimension.
    pub fn top_degree(&self) -> u32 {
        self.basis.iter().map(|m| self.fiber.degree_of(m)).max().unwrap_or(0)
    }

    fn rule_for(&self, m: &Monomial) -> Option<&CompiledRule> {
        self.compiled.iter().find(|r| r.lhs.divides(m))
    }

    fn order_key(&self, m: &Monomial) -> Vec<i64> {
        self.order
            .iter()
            .map(|row| row.iter().zip(&m.0).map(|(w, e)| w * i64::from(*e)).sum())
            .collect()
    }

    /// Splits a full-table polynomial by fiber monomial.
    pub fn split(&self, p: &Polynomial) -> BTreeMap<Monomial, Polynomial> {
        let k = self.fiber.len();
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            let fm = Monomial(m.0[..k].to_vec());
            let bm = Monomial(m.0[k..].to_vec());
            out.entry(fm)
                .or_insert_with(|| Polynomial::zero(&self.base, self.coeff))
                .add_term(bm, c.clone());
        }
        out
    }

    /// Inverse of [`RingPresentation::split`].
    pub fn join<'a>(&self, parts: impl IntoIterator<Item = (&'a Monomial, &'a Polynomial)>) -> Polynomial {
        let mut out = self.zero_poly();
        for (fm, bp) in parts {
            for (bm, c) in bp.terms() {
                let mut e = fm.0.clone();
                e.extend_from_slice(&bm.0);
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Embeds a base polynomial into the full table.
    pub fn pull_back(&self, base_poly: &Polynomial) -> Result<Polynomial, RingError> {
        if !same_table(base_poly.table(), &self.base) {
            return Err(PolyError::TableMismatch.into());
        }
        Ok(self.join([(&Monomial::one(self.fiber.len()), base_poly)]))
    }

    fn check_raw(&self, raw: &Polynomial) -> Result<(), RingError> {
        if !same_table(raw.table(), &self.table) {
            return Err(PolyError::TableMismatch.into());
        }
        if raw.kind() != self.coeff {
            return Err(PolyError::Scalar(crate::scalar::ScalarError::VariantMismatch {
                left: self.coeff,
                right: raw.kind(),
            })
            .into());
        }
        Ok(())
    }

    pub fn normal_form(self: &Arc<Self>, raw: &Polynomial) -> Result<RingElement, RingError> {
        self.normal_form_with_budget(raw, DEFAULT_STEP_BUDGET)
    }

    pub fn normal_form_with_budget(self: &Arc<Self>, raw: &Polynomial, budget: u64) -> Result<RingElement, RingError> {
        self.check_raw(raw)?;
        let terms = self.reduce(self.split(raw), budget)?;
        Ok(RingElement { ring: self.clone(), terms })
    }

    /// Rewrites the largest reducible fiber monomial until none is left.
    fn reduce(&self, work: BTreeMap<Monomial, Polynomial>, budget: u64) -> Result<BTreeMap<Monomial, Polynomial>, RingError> {
        let mut queue: BTreeMap<(Vec<i64>, Monomial), Polynomial> = BTreeMap::new();
        let mut done: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        let push = |queue: &mut BTreeMap<(Vec<i64>, Monomial), Polynomial>,
                    done: &mut BTreeMap<Monomial, Polynomial>,
                    m: Monomial,
                    c: Polynomial| {
            if c.is_zero() {
                return;
            }
            if self.rule_for(&m).is_some() {
                let key = (self.order_key(&m), m);
                accumulate(queue, key, c);
            } else {
                accumulate(done, m, c);
            }
        };
        for (m, c) in work {
            push(&mut queue, &mut done, m, c);
        }
        let mut steps = 0u64;
        while let Some(((_, m), c)) = queue.pop_last() {
            steps += 1;
            if steps > budget {
                return Err(RingError::NonTermination { budget });
            }
            let rule = self.rule_for(&m).expect("queued monomials are reducible");
            let q = rule.lhs.quotient_of(&m);
            for (fm, bp) in &rule.rhs {
                push(&mut queue, &mut done, q.mul(fm), &c * bp);
            }
        }
        for m in done.keys() {
            if !self.basis_set.contains(m) {
                return Err(RingError::InvalidPresentation(alloc::format!(
                    "irreducible monomial {} is not in the declared basis",
                    m.text(&self.fiber)
                )));
            }
        }
        Ok(done)
    }

    pub fn element_from_terms(
        self: &Arc<Self>,
        terms: impl IntoIterator<Item = (Monomial, Polynomial)>,
    ) -> Result<RingElement, RingError> {
        let mut map = BTreeMap::new();
        for (m, p) in terms {
            if !same_table(p.table(), &self.base) {
                return Err(PolyError::TableMismatch.into());
            }
            accumulate(&mut map, m, p);
        }
        let terms = self.reduce(map, DEFAULT_STEP_BUDGET)?;
        Ok(RingElement { ring: self.clone(), terms })
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> RingElement {
        let mut terms = BTreeMap::new();
        terms.insert(self.basis[i].clone(), Polynomial::one(&self.base, self.coeff));
        RingElement { ring: self.clone(), terms }
    }

    pub fn ring_mul(self: &Arc<Self>, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        self.ring_mul_with_budget(a, b, DEFAULT_STEP_BUDGET)
    }

    pub fn ring_mul_with_budget(
        self: &Arc<Self>,
        a: &RingElement,
        b: &RingElement,
        budget: u64,
    ) -> Result<RingElement, RingError> {
        if !Arc::ptr_eq(&a.ring, self) || !Arc::ptr_eq(&b.ring, self) {
            return Err(RingError::RingMismatch);
        }
        let mut work: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                accumulate(&mut work, m1.mul(m2), c1 * c2);
            }
        }
        let terms = self.reduce(work, budget)?;
        Ok(RingElement { ring: self.clone(), terms })
    }

    pub fn pushforward(&self, a: &RingElement) -> Result<Polynomial, RingError> {
        if !core::ptr::eq(&*a.ring, self) {
            return Err(RingError::RingMismatch);
        }
        let data = self.pushforward.as_ref().ok_or(RingError::NoPushforwardData)?;
        let mut out = Polynomial::zero(&self.base, self.coeff);
        for (m, c) in &a.terms {
            if let Some(img) = data.get(m) {
                out = &out + &(c * img);
            }
        }
        Ok(out)
    }

    /// Coefficient of the point class of a top-degree element of a point ring.
    pub fn point_degree(&self, a: &RingElement) -> Result<Coefficient, RingError> {
        if !self.is_point() {
            return Err(RingError::NotPointRing);
        }
        let top = self.top_degree();
        for m in a.terms.keys() {
            let d = self.fiber.degree_of(m);
            if d != top {
                return Err(RingError::NotTopDegree { expected: top, found: d });
            }
        }
        let p = self.pushforward(a)?;
        Ok(p.as_constant().expect("point ring pushforward is constant"))
    }

    /// The same presentation with every base generator sent to zero.
    pub fn specialize_to_point(&self) -> Result<Arc<RingPresentation>, RingError> {
        let k = self.fiber.len();
        let point = Arc::new(GeneratorTable::new(
            (0..k).map(|i| (String::from(self.table.name(i)), self.table.degree(i))),
        )?);
        let images: Vec<Option<Polynomial>> = (0..self.table.len())
            .map(|i| {
                Some(if i < k {
                    Polynomial::generator(&point, self.coeff, i)
                } else {
                    Polynomial::zero(&point, self.coeff)
                })
            })
            .collect();
        let map = |p: &Polynomial| p.substitute(&images);
        let empty = Arc::new(GeneratorTable::empty());
        let rules = self
            .rules
            .iter()
            .map(|r| Ok(Rule { lhs: r.lhs.clone(), rhs: map(&r.rhs)? }))
            .collect::<Result<Vec<_>, PolyError>>()?;
        let pushforward = self.pushforward.as_ref().map(|data| {
            data.iter()
                .map(|(m, p)| {
                    let c = p.terms().get(&Monomial::one(self.base.len())).cloned();
                    let c = c.unwrap_or_else(|| Coefficient::zero(self.coeff));
                    (m.clone(), Polynomial::constant(&empty, c))
                })
                .collect()
        });
        let named = |v: &[(String, Polynomial)]| {
            v.iter().map(|(n, p)| Ok((n.clone(), map(p)?))).collect::<Result<Vec<_>, PolyError>>()
        };
        RingPresentation::new(PresentationParts {
            kind: self.kind,
            coeff: self.coeff,
            table: point,
            fiber_len: k,
            rules,
            basis: self.basis.clone(),
            pushforward,
            aliases: named(&self.aliases)?,
            relations: named(&self.relations)?,
            order: self.order.clone(),
        })
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Polynomial>, key: K, c: Polynomial) {
    use alloc::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_assign_unchecked(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A ring element in normal form: declared basis monomial to base
/// coefficient.
#[derive(Clone, Debug)]
pub struct RingElement {
    ring: Arc<RingPresentation>,
    terms: BTreeMap<Monomial, Polynomial>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Polynomial> {
        &self.terms
    }

    /// Terms in basis order.
    pub fn ordered_terms(&self) -> Vec<(&Monomial, &Polynomial)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| canonical_cmp(self.ring.fiber_table(), a.0, b.0));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The element as a polynomial over fiber and base generators.
    pub fn lift(&self) -> Polynomial {
        self.ring.join(self.terms.iter())
    }

    /// Common total degree of all terms; `None` for inhomogeneous elements,
    /// `Some(None)` for zero.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut deg = None;
        for (m, c) in &self.terms {
            let f = self.ring.fiber_table().degree_of(m);
            for bm in c.terms().keys() {
                let d = f + self.ring.base_table().degree_of(bm);
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        Some(deg)
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        if !Arc::ptr_eq(&self.ring, &other.ring) {
            return Err(RingError::RingMismatch);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(RingElement { ring: self.ring.clone(), terms })
    }

    pub fn neg(&self) -> RingElement {
        RingElement { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.checked_add(&other.neg())
    }

    /// Multiplies by a base polynomial.
    pub fn scale_base(&self, c: &Polynomial) -> Result<RingElement, RingError> {
        if !same_table(c.table(), self.ring.base_table()) {
            return Err(PolyError::TableMismatch.into());
        }
        let mut terms = BTreeMap::new();
        for (m, p) in &self.terms {
            accumulate(&mut terms, m.clone(), p.checked_mul(c)?);
        }
        Ok(RingElement { ring: self.ring.clone(), terms })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.ring.ring_mul(self, other)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = &self.ring;
        let mut first = true;
        for (fm, bp) in self.ordered_terms() {
            for (bm, c) in bp.ordered_terms() {
                let neg = c.is_negative();
                match (first, neg) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                first = false;
                let mut e = fm.0.clone();
                e.extend_from_slice(&bm.0);
                let m = Monomial(e);
                let unit = c.is_one() || c.neg().is_one();
                if m.is_one() {
                    c.fmt_magnitude(f)?;
                } else {
                    if !unit {
                        c.fmt_magnitude(f)?;
                        f.write_str("*")?;
                    }
                    m.write_with(ring.table(), f)?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Image of a point-ring element of the integral even quadric in the
/// dyadic point ring of the same quadric, sending `h -> h` and the ruling
/// class to `(h^{n-1} - orientation * x) / 2`.
pub fn comparison_embed(
    source: &RingElement,
    orientation: i64,
    target: &Arc<RingPresentation>,
) -> Result<RingElement, RingError> {
    let src = source.ring();
    if !src.is_point() || !target.is_point() {
        return Err(RingError::BaseNotTrivial);
    }
    if orientation != 1 && orientation != -1 {
        return Err(RingError::InvalidOrientation(orientation));
    }
    let n = match (src.kind(), target.kind()) {
        (RingKind::QuadricIntegralEven(a) | RingKind::QuadricPointEven(a), RingKind::QuadricHalves(b)) if a == b => a,
        _ => return Err(RingError::KindMismatch),
    };
    let k = CoeffKind::Dyadic;
    let h = target.var("h");
    let x = target.var("x");
    let half = Polynomial::constant(target.table(), Coefficient::inverse_power_of_two(1));
    let ruling = &half * &(&h.pow(n - 1) - &x.scale_i64(orientation));
    let images = [Some(h), Some(ruling)];
    let raw = source.lift().convert(k)?.substitute(&images)?;
    target.normal_form(&raw)
}
