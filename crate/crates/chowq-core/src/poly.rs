//! Sparse graded polynomials over a [`Coefficient`] ring.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::scalar::{CoeffKind, Coefficient, ScalarError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    TableMismatch,
    Scalar(ScalarError),
    NotAUnit,
    MissingImage(String),
    IndexOutOfRange { index: usize, len: usize },
    UnknownGenerator(String),
    DuplicateGenerator(String),
    ZeroDegree(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::TableMismatch => f.write_str("TABLE_MISMATCH: operands use different generator tables"),
            PolyError::Scalar(e) => write!(f, "{e}"),
            PolyError::NotAUnit => f.write_str("NOT_A_UNIT: constant term is not 1"),
            PolyError::MissingImage(name) => write!(f, "MISSING_IMAGE: no image given for {name}"),
            PolyError::IndexOutOfRange { index, len } => {
                write!(f, "INDEX_OUT_OF_RANGE: e_{index} of {len} variables")
            }
            PolyError::UnknownGenerator(name) => write!(f, "UNKNOWN_GENERATOR: {name}"),
            PolyError::DuplicateGenerator(name) => write!(f, "DUPLICATE_GENERATOR: {name}"),
            PolyError::ZeroDegree(name) => write!(f, "ZERO_DEGREE: generator {name} must have degree at least 1"),
        }
    }
}

impl From<ScalarError> for PolyError {
    fn from(e: ScalarError) -> Self {
        PolyError::Scalar(e)
    }
}

/// Ordered generator names with their degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl GeneratorTable {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Result<Self, PolyError> {
        let mut names: Vec<String> = Vec::new();
        let mut degrees = Vec::new();
        for (name, deg) in gens {
            let name = name.into();
            if names.contains(&name) {
                return Err(PolyError::DuplicateGenerator(name));
            }
            if deg == 0 {
                return Err(PolyError::ZeroDegree(name));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(GeneratorTable { names, degrees })
    }

    pub fn empty() -> Self {
        GeneratorTable { names: Vec::new(), degrees: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Table with `self`'s generators followed by `other`'s.
    pub fn concat(&self, other: &GeneratorTable) -> Result<GeneratorTable, PolyError> {
        GeneratorTable::new(
            self.names
                .iter()
                .cloned()
                .zip(self.degrees.iter().copied())
                .chain(other.names.iter().cloned().zip(other.degrees.iter().copied())),
        )
    }
}

/// Exponent vector, one entry per generator of the owning table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn unit(len: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; len];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming [`Monomial::divides`].
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn write_with(&self, table: &GeneratorTable, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(table.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }

    pub fn text(&self, table: &GeneratorTable) -> String {
        let mut s = String::new();
        let _ = self.write_with(table, &mut s);
        s
    }
}

/// The fixed display order: higher degree first, then larger exponents on
/// earlier generators first.
pub fn canonical_cmp(table: &GeneratorTable, a: &Monomial, b: &Monomial) -> Ordering {
    table
        .degree_of(b)
        .cmp(&table.degree_of(a))
        .then_with(|| b.0.cmp(&a.0))
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    table: Arc<GeneratorTable>,
    kind: CoeffKind,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.kind == other.kind && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Sum or product of two polynomials over the same table and ring.
pub fn poly_arith(op: PolyOp, p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    match op {
        PolyOp::Add => p.checked_add(q),
        PolyOp::Mul => p.checked_mul(q),
    }
}

impl Polynomial {
    pub fn zero(table: &Arc<GeneratorTable>, kind: CoeffKind) -> Self {
        Polynomial { table: table.clone(), kind, terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Coefficient) -> Self {
        let mut p = Polynomial::zero(table, c.kind());
        p.add_term(Monomial::one(table.len()), c);
        p
    }

    pub fn from_i64(table: &Arc<GeneratorTable>, kind: CoeffKind, v: i64) -> Self {
        Polynomial::constant(table, Coefficient::from_i64(kind, v))
    }

    pub fn one(table: &Arc<GeneratorTable>, kind: CoeffKind) -> Self {
        Polynomial::from_i64(table, kind, 1)
    }

    pub fn generator(table: &Arc<GeneratorTable>, kind: CoeffKind, i: usize) -> Self {
        Polynomial::monomial(table, Monomial::unit(table.len(), i, 1), Coefficient::one(kind))
    }

    pub fn named(table: &Arc<GeneratorTable>, kind: CoeffKind, name: &str) -> Result<Self, PolyError> {
        let i = table.index_of(name).ok_or_else(|| PolyError::UnknownGenerator(name.to_string()))?;
        Ok(Polynomial::generator(table, kind, i))
    }

    pub fn monomial(table: &Arc<GeneratorTable>, m: Monomial, c: Coefficient) -> Self {
        debug_assert_eq!(m.0.len(), table.len());
        let mut p = Polynomial::zero(table, c.kind());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(
        table: &Arc<GeneratorTable>,
        kind: CoeffKind,
        terms: impl IntoIterator<Item = (Monomial, Coefficient)>,
    ) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(table, kind);
        for (m, c) in terms {
            if c.kind() != kind {
                return Err(ScalarError::VariantMismatch { left: kind, right: c.kind() }.into());
            }
            if m.0.len() != table.len() {
                return Err(PolyError::TableMismatch);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by exponent vector (storage order, not display order).
    pub fn terms(&self) -> &BTreeMap<Monomial, Coefficient> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(|| Coefficient::zero(self.kind))
    }

    /// Terms in the canonical display order.
    pub fn ordered_terms(&self) -> Vec<(&Monomial, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| canonical_cmp(&self.table, a.0, b.0));
        v
    }

    /// Constant coefficient, when the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero(self.kind)),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_same(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if !same_table(&self.table, &other.table) {
            return Err(PolyError::TableMismatch);
        }
        if self.kind != other.kind {
            return Err(ScalarError::VariantMismatch { left: self.kind, right: other.kind }.into());
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.table, self.kind);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul_same(c2));
            }
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            kind: self.kind,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Polynomial, PolyError> {
        if c.kind() != self.kind {
            return Err(ScalarError::VariantMismatch { left: self.kind, right: c.kind() }.into());
        }
        let mut out = Polynomial::zero(&self.table, self.kind);
        for (m, c2) in &self.terms {
            out.add_term(m.clone(), c2.mul_same(c));
        }
        Ok(out)
    }

    pub fn scale_i64(&self, v: i64) -> Polynomial {
        self.scale(&Coefficient::from_i64(self.kind, v)).expect("same kind")
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.table, self.kind);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        self.table.degree_of(m)
    }

    /// Largest monomial degree; `None` for the zero polynomial.
    pub fn top_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.table.degree_of(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.table.degree_of(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Sum of the degree-`d` terms.
    pub fn graded_component(&self, d: u32) -> Polynomial {
        self.filter(|m| self.table.degree_of(m) == d)
    }

    /// Drops every term of degree above `bound`.
    pub fn truncate(&self, bound: u32) -> Polynomial {
        self.filter(|m| self.table.degree_of(m) <= bound)
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            kind: self.kind,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Inverse of `self` as a power series, truncated above degree `bound`.
    pub fn series_inverse(&self, bound: u32) -> Result<Polynomial, PolyError> {
        let unit = self.graded_component(0);
        if unit != Polynomial::one(&self.table, self.kind) {
            return Err(PolyError::NotAUnit);
        }
        let parts: Vec<Polynomial> = (0..=bound).map(|d| self.graded_component(d)).collect();
        let mut inv: Vec<Polynomial> = vec![Polynomial::one(&self.table, self.kind)];
        for d in 1..=bound as usize {
            let mut q = Polynomial::zero(&self.table, self.kind);
            for j in 1..=d {
                if !parts[j].is_zero() && !inv[d - j].is_zero() {
                    q.add_assign_unchecked(&parts[j].mul_unchecked(&inv[d - j]));
                }
            }
            inv.push(q.neg());
        }
        let mut out = Polynomial::zero(&self.table, self.kind);
        for q in &inv {
            out.add_assign_unchecked(q);
        }
        Ok(out)
    }

    /// Ring map sending generator `i` to `images[i]`; every generator that
    /// occurs in `self` needs an image, and images share one table.
    pub fn substitute(&self, images: &[Option<Polynomial>]) -> Result<Polynomial, PolyError> {
        let target = images
            .iter()
            .flatten()
            .next()
            .map(|p| (p.table.clone(), p.kind));
        let used: Vec<usize> = (0..self.table.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        for &i in &used {
            if images.get(i).and_then(|p| p.as_ref()).is_none() {
                return Err(PolyError::MissingImage(self.table.name(i).to_string()));
            }
        }
        let Some((table, kind)) = target else {
            // no images at all: only constants can be mapped, into the same table
            return Ok(self.clone());
        };
        for p in images.iter().flatten() {
            if !same_table(&p.table, &table) {
                return Err(PolyError::TableMismatch);
            }
            if p.kind != kind {
                return Err(ScalarError::VariantMismatch { left: kind, right: p.kind }.into());
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); self.table.len()];
        let mut out = Polynomial::zero(&table, kind);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&table, c.convert(kind)?);
            for &i in &used {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                let img = images[i].as_ref().expect("checked above");
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(Polynomial::one(&table, kind));
                }
                while cache.len() <= e {
                    let next = cache.last().expect("nonempty").mul_unchecked(img);
                    cache.push(next);
                }
                term = term.mul_unchecked(&cache[e]);
            }
            out.add_assign_unchecked(&term);
        }
        Ok(out)
    }

    /// Substitution given by generator name.
    pub fn substitute_named(&self, images: &BTreeMap<String, Polynomial>) -> Result<Polynomial, PolyError> {
        let v: Vec<Option<Polynomial>> =
            self.table.names().iter().map(|n| images.get(n).cloned()).collect();
        self.substitute(&v)
    }

    /// Same terms, coefficients mapped into another ring.
    pub fn convert(&self, kind: CoeffKind) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero(&self.table, kind);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.convert(kind)?);
        }
        Ok(out)
    }

    /// Same terms over a table with identical layout, such as a fresh copy.
    pub fn retable(&self, table: &Arc<GeneratorTable>) -> Result<Polynomial, PolyError> {
        if table.len() != self.table.len() {
            return Err(PolyError::TableMismatch);
        }
        Ok(Polynomial { table: table.clone(), kind: self.kind, terms: self.terms.clone() })
    }

    /// Largest dyadic exponent among the coefficients.
    pub fn max_dyadic_exponent(&self) -> u64 {
        self.terms.values().map(Coefficient::dyadic_exponent).max().unwrap_or(0)
    }

    pub fn text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = c.is_one() || c.neg().is_one();
            if m.is_one() {
                c.fmt_magnitude(f)?;
            } else {
                if !unit {
                    c.fmt_magnitude(f)?;
                    f.write_str("*")?;
                }
                m.write_with(&self.table, f)?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl core::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics when the operands disagree on table or ring; the
            /// fallible form is the `checked_` method.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$inner(rhs).expect("polynomials share table and ring")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl core::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// `e_i` of the named generators of `table`.
pub fn elementary_symmetric(
    table: &Arc<GeneratorTable>,
    kind: CoeffKind,
    i: usize,
    vars: &[&str],
) -> Result<Polynomial, PolyError> {
    let polys = vars
        .iter()
        .map(|v| Polynomial::named(table, kind, v))
        .collect::<Result<Vec<_>, _>>()?;
    if i > polys.len() {
        return Err(PolyError::IndexOutOfRange { index: i, len: polys.len() });
    }
    Ok(esym(table, kind, i, &polys))
}

/// `e_i(vars)`, zero when `i` exceeds the number of variables.
pub fn esym(table: &Arc<GeneratorTable>, kind: CoeffKind, i: usize, vars: &[Polynomial]) -> Polynomial {
    esym_all(table, kind, vars).into_iter().nth(i).unwrap_or_else(|| Polynomial::zero(table, kind))
}

/// `[e_0, e_1, ..., e_k]` of the `k` given polynomials.
pub fn esym_all(table: &Arc<GeneratorTable>, kind: CoeffKind, vars: &[Polynomial]) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::one(table, kind)];
    for v in vars {
        let mut next = e.clone();
        next.push(Polynomial::zero(table, kind));
        for j in 1..next.len() {
            let add = &e[j - 1] * v;
            next[j].add_assign_unchecked(&add);
        }
        e = next;
    }
    e
}

/// Complete homogeneous symmetric polynomial `h_i(vars)`.
pub fn hsym(table: &Arc<GeneratorTable>, kind: CoeffKind, i: usize, vars: &[Polynomial]) -> Polynomial {
    // h_i(v_1..v_k) = h_i(v_1..v_{k-1}) + v_k h_{i-1}(v_1..v_k)
    let mut h = vec![Polynomial::zero(table, kind); i + 1];
    h[0] = Polynomial::one(table, kind);
    for v in vars {
        for j in 1..=i {
            let add = &h[j - 1] * v;
            h[j].add_assign_unchecked(&add);
        }
    }
    h.swap_remove(i)
}
