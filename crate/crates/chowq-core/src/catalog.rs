//! Constructors for every supported presentation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::{esym, hsym, GeneratorTable, Monomial, PolyError, Polynomial};
use crate::ring::{PresentationParts, RingError, RingPresentation, Rule};
use crate::scalar::{CoeffKind, Coefficient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    QuadricPointEven(u32),
    QuadricPointOdd(u32),
    ProjectiveBundle(u32),
    QuadricHalves(u32),
    QuadricOddIntegralPlain(u32),
    FlagTower(u32),
    QuadricIntegralEven(u32),
    QuadricIntegralOdd(u32),
    FlagDn(u32),
    FlagBn(u32),
}

pub const KIND_NAMES: [&str; 10] = [
    "quadric_point_even",
    "quadric_point_odd",
    "projective_bundle",
    "quadric_halves",
    "quadric_odd_integral_plain",
    "flag_tower",
    "quadric_integral_even",
    "quadric_integral_odd",
    "flag_dn",
    "flag_bn",
];

impl RingKind {
    pub fn from_name(name: &str, n: u32) -> Result<RingKind, CatalogError> {
        Ok(match name {
            "quadric_point_even" => RingKind::QuadricPointEven(n),
            "quadric_point_odd" => RingKind::QuadricPointOdd(n),
            "projective_bundle" => RingKind::ProjectiveBundle(n),
            "quadric_halves" => RingKind::QuadricHalves(n),
            "quadric_odd_integral_plain" => RingKind::QuadricOddIntegralPlain(n),
            "flag_tower" => RingKind::FlagTower(n),
            "quadric_integral_even" => RingKind::QuadricIntegralEven(n),
            "quadric_integral_odd" => RingKind::QuadricIntegralOdd(n),
            "flag_dn" => RingKind::FlagDn(n),
            "flag_bn" => RingKind::FlagBn(n),
            other => return Err(CatalogError::UnknownKind(other.to_string())),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            RingKind::QuadricPointEven(_) => KIND_NAMES[0],
            RingKind::QuadricPointOdd(_) => KIND_NAMES[1],
            RingKind::ProjectiveBundle(_) => KIND_NAMES[2],
            RingKind::QuadricHalves(_) => KIND_NAMES[3],
            RingKind::QuadricOddIntegralPlain(_) => KIND_NAMES[4],
            RingKind::FlagTower(_) => KIND_NAMES[5],
            RingKind::QuadricIntegralEven(_) => KIND_NAMES[6],
            RingKind::QuadricIntegralOdd(_) => KIND_NAMES[7],
            RingKind::FlagDn(_) => KIND_NAMES[8],
            RingKind::FlagBn(_) => KIND_NAMES[9],
        }
    }

    pub fn n(self) -> u32 {
        match self {
            RingKind::QuadricPointEven(n)
            | RingKind::QuadricPointOdd(n)
            | RingKind::ProjectiveBundle(n)
            | RingKind::QuadricHalves(n)
            | RingKind::QuadricOddIntegralPlain(n)
            | RingKind::FlagTower(n)
            | RingKind::QuadricIntegralEven(n)
            | RingKind::QuadricIntegralOdd(n)
            | RingKind::FlagDn(n)
            | RingKind::FlagBn(n) => n,
        }
    }

    /// Inclusive parameter range accepted by [`make_ring`].
    pub fn supported_range(self) -> (u32, u32) {
        match self {
            // the ruling classes and x would sit in degree 0 at n = 1
            RingKind::QuadricPointEven(_) | RingKind::QuadricHalves(_) | RingKind::QuadricIntegralEven(_) => (2, 8),
            RingKind::ProjectiveBundle(_) => (2, 8),
            // bases grow like 2^n n!
            RingKind::FlagTower(_) | RingKind::FlagDn(_) | RingKind::FlagBn(_) => (1, 6),
            _ => (1, 8),
        }
    }

    /// Rank of the ring as a module over its base.
    pub fn expected_rank(self) -> u64 {
        let n = u64::from(self.n());
        let fact: u64 = (1..=n).product();
        match self {
            RingKind::ProjectiveBundle(_) => n,
            RingKind::FlagTower(_) | RingKind::FlagDn(_) => (1u64 << (n - 1)) * fact,
            RingKind::FlagBn(_) => (1u64 << n) * fact,
            _ => 2 * n,
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.name(), self.n())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogError {
    UnsupportedParameter { kind: &'static str, n: u32, min: u32, max: u32 },
    UnknownKind(String),
    Ring(RingError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::UnsupportedParameter { kind, n, min, max } => {
                write!(f, "UNSUPPORTED_PARAMETER: {kind} needs {min} <= n <= {max}, got {n}")
            }
            CatalogError::UnknownKind(name) => write!(f, "UNKNOWN_KIND: {name}"),
            CatalogError::Ring(e) => write!(f, "{e}"),
        }
    }
}

impl From<RingError> for CatalogError {
    fn from(e: RingError) -> Self {
        CatalogError::Ring(e)
    }
}

impl From<PolyError> for CatalogError {
    fn from(e: PolyError) -> Self {
        CatalogError::Ring(RingError::Poly(e))
    }
}

pub fn make_ring(kind: RingKind) -> Result<Arc<RingPresentation>, CatalogError> {
    let (min, max) = kind.supported_range();
    let n = kind.n();
    if n < min || n > max {
        return Err(CatalogError::UnsupportedParameter { kind: kind.name(), n, min, max });
    }
    let parts = match kind {
        RingKind::QuadricPointEven(n) => quadric_point_even(n)?,
        RingKind::QuadricPointOdd(n) => quadric_point_odd(n)?,
        RingKind::ProjectiveBundle(n) => projective_bundle(n)?,
        RingKind::QuadricHalves(n) => quadric_halves(n)?,
        RingKind::QuadricOddIntegralPlain(n) => quadric_odd_plain(n)?,
        RingKind::FlagTower(n) => flag_tower(n)?,
        RingKind::QuadricIntegralEven(n) => quadric_integral_even(n)?,
        RingKind::QuadricIntegralOdd(n) => quadric_integral_odd(n)?,
        RingKind::FlagDn(n) => flag_dn(n)?,
        RingKind::FlagBn(n) => flag_bn(n)?,
    };
    Ok(RingPresentation::new(parts)?)
}

/// Scratch state shared by the constructors.
struct Builder {
    kind: RingKind,
    coeff: CoeffKind,
    table: Arc<GeneratorTable>,
    fiber_len: usize,
    rules: Vec<Rule>,
    aliases: Vec<(String, Polynomial)>,
    relations: Vec<(String, Polynomial)>,
}

impl Builder {
    fn new(kind: RingKind, coeff: CoeffKind, fiber: Vec<(String, u32)>, base: Vec<(String, u32)>) -> Result<Self, PolyError> {
        let fiber_len = fiber.len();
        let table = Arc::new(GeneratorTable::new(fiber.into_iter().chain(base))?);
        Ok(Builder { kind, coeff, table, fiber_len, rules: Vec::new(), aliases: Vec::new(), relations: Vec::new() })
    }

    fn v(&self, name: &str) -> Polynomial {
        if let Some((_, p)) = self.aliases.iter().find(|(n, _)| n == name) {
            return p.clone();
        }
        Polynomial::named(&self.table, self.coeff, name).expect("catalog names its own generators")
    }

    fn c(&self, v: i64) -> Polynomial {
        Polynomial::from_i64(&self.table, self.coeff, v)
    }

    fn zero(&self) -> Polynomial {
        self.c(0)
    }

    /// Fiber monomial from `(generator, exponent)` pairs.
    fn fm(&self, factors: &[(&str, u32)]) -> Monomial {
        let mut e = vec![0; self.fiber_len];
        for (name, k) in factors {
            let i = self.table.index_of(name).expect("known generator");
            assert!(i < self.fiber_len, "{name} is not a fiber generator");
            e[i] += k;
        }
        Monomial(e)
    }

    fn mono_poly(&self, m: &Monomial) -> Polynomial {
        let mut e = m.0.clone();
        e.resize(self.table.len(), 0);
        Polynomial::monomial(&self.table, Monomial(e), Coefficient::one(self.coeff))
    }

    fn rule(&mut self, lhs: Monomial, rhs: Polynomial) {
        self.rules.push(Rule { lhs, rhs });
    }

    /// A rule for a monomial `m` whose one-step expansion `t` contains `m`
    /// again with coefficient `k`: solves `m = t` for `m`. Needs `1 - k = ±1`.
    fn solved_rule(&mut self, m: Monomial, t: Polynomial) {
        let mp = self.mono_poly(&m);
        let key = mp.terms().keys().next().expect("monomial").clone();
        let k = t.coefficient(&key);
        let rest = &t - &mp.scale(&k).expect("same kind");
        let one = Coefficient::one(self.coeff);
        let denom = one.checked_add(&k.neg()).expect("same kind");
        let rhs = if denom.is_one() {
            rest
        } else {
            assert!(denom.neg().is_one(), "self-loop coefficient must leave a unit");
            rest.neg()
        };
        self.rule(m, rhs);
    }

    fn alias(&mut self, name: String, p: Polynomial) {
        self.aliases.push((name, p));
    }

    fn relation(&mut self, name: String, p: Polynomial) {
        self.relations.push((name, p));
    }

    fn base_table(&self) -> Arc<GeneratorTable> {
        let k = self.fiber_len;
        Arc::new(
            GeneratorTable::new((k..self.table.len()).map(|i| (self.table.name(i).to_string(), self.table.degree(i))))
                .expect("subset of a valid table"),
        )
    }

    /// Pushforward data with constant images.
    fn const_push(&self, images: Vec<(Monomial, i64)>) -> Vec<(Monomial, Polynomial)> {
        let base = self.base_table();
        images.into_iter().map(|(m, v)| (m, Polynomial::from_i64(&base, self.coeff, v))).collect()
    }

    fn finish(self, basis: Vec<Monomial>, push: Vec<(Monomial, Polynomial)>, order: Vec<Vec<i64>>) -> PresentationParts {
        PresentationParts {
            kind: self.kind,
            coeff: self.coeff,
            table: self.table,
            fiber_len: self.fiber_len,
            rules: self.rules,
            basis,
            pushforward: Some(push),
            aliases: self.aliases,
            relations: self.relations,
            order,
        }
    }
}

fn gen(name: impl Into<String>, deg: u32) -> (String, u32) {
    (name.into(), deg)
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `{h^i g^a : i < top, a in {0, 1}}` for the two-generator quadric rings.
fn two_gen_basis(b: &Builder, top: u32, g: &str) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..2 {
        for i in 0..top {
            out.push(b.fm(&[("h", i), (g, a)]));
        }
    }
    out
}

fn quadric_point_even(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut b = Builder::new(RingKind::QuadricPointEven(n), CoeffKind::Int, vec![gen("h", 1), gen("e", n - 1)], vec![])?;
    let (h, e) = (b.v("h"), b.v("e"));
    let pt = &h.pow(n - 1) * &e;
    let e_sq = if n % 2 == 1 { pt.clone() } else { b.zero() };
    if n % 2 == 1 {
        // h^n e = 2 h e^2 = 2 h^n e, so h^n e vanishes
        b.rule(b.fm(&[("h", n), ("e", 1)]), b.zero());
    }
    b.rule(b.fm(&[("h", n)]), (&h * &e).scale_i64(2));
    b.rule(b.fm(&[("e", 2)]), e_sq.clone());
    b.alias("f".into(), &h.pow(n - 1) - &e);
    let f = b.v("f");
    let ef = if n % 2 == 1 { b.zero() } else { pt.clone() };
    b.relation("h^n - 2*h*e".into(), &h.pow(n) - &(&h * &e).scale_i64(2));
    b.relation("e^2".into(), &(&e * &e) - &e_sq);
    b.relation("f^2".into(), &(&f * &f) - &e_sq);
    b.relation("e*f".into(), &(&e * &f) - &ef);
    let basis = two_gen_basis(&b, n, "e");
    let push = b.const_push(vec![(b.fm(&[("h", n - 1), ("e", 1)]), 1)]);
    Ok(b.finish(basis, push, vec![vec![1, i64::from(n) - 1], vec![0, 1]]))
}

fn quadric_point_odd(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut b = Builder::new(RingKind::QuadricPointOdd(n), CoeffKind::Int, vec![gen("h", 1), gen("e", n)], vec![])?;
    let (h, e) = (b.v("h"), b.v("e"));
    b.rule(b.fm(&[("h", n)]), e.scale_i64(2));
    b.rule(b.fm(&[("e", 2)]), b.zero());
    b.relation("h^n - 2*e".into(), &h.pow(n) - &e.scale_i64(2));
    b.relation("e^2".into(), &e * &e);
    b.relation("h^(2n-1) - 2*h^(n-1)*e".into(), &h.pow(2 * n - 1) - &(&h.pow(n - 1) * &e).scale_i64(2));
    let basis = two_gen_basis(&b, n, "e");
    let push = b.const_push(vec![(b.fm(&[("h", n - 1), ("e", 1)]), 1)]);
    Ok(b.finish(basis, push, vec![vec![1, i64::from(n)], vec![0, 1]]))
}

fn projective_bundle(n: u32) -> Result<PresentationParts, CatalogError> {
    let base = (1..=n).map(|i| gen(format!("c{i}V"), i)).collect();
    let mut b = Builder::new(RingKind::ProjectiveBundle(n), CoeffKind::Int, vec![gen("H", 1)], base)?;
    let hh = b.v("H");
    let mut tail = b.zero();
    for i in 1..=n {
        tail = &tail + &(&b.v(&format!("c{i}V")) * &hh.pow(n - i));
    }
    b.rule(b.fm(&[("H", n)]), tail.neg());
    b.relation("sum c_iV*H^(N-i)".into(), &hh.pow(n) + &tail);
    let basis = (0..n).map(|i| b.fm(&[("H", i)])).collect();
    let push = b.const_push(vec![(b.fm(&[("H", n - 1)]), 1)]);
    Ok(b.finish(basis, push, vec![vec![1]]))
}

/// `1 + c_2V + ... + c_{2m}V` over `b`'s table.
fn total_even_class(b: &Builder, m: u32) -> Polynomial {
    let mut cv = b.c(1);
    for j in 1..=m {
        cv = &cv + &b.v(&format!("c{}V", 2 * j));
    }
    cv
}

fn quadric_halves(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut base: Vec<_> = (1..n).map(|j| gen(format!("c{}V", 2 * j), 2 * j)).collect();
    base.push(gen(format!("x{n}"), n));
    let mut b = Builder::new(RingKind::QuadricHalves(n), CoeffKind::Dyadic, vec![gen("h", 1), gen("x", n - 1)], base)?;
    let (h, x, xn) = (b.v("h"), b.v("x"), b.v(&format!("x{n}")));
    let s = sign(n - 1);
    // C = sum_{j>=1} c_2jV h^{2n-2-2j}
    let mut cc = b.zero();
    for j in 1..n {
        cc = &cc + &(&b.v(&format!("c{}V", 2 * j)) * &h.pow(2 * n - 2 - 2 * j));
    }
    let x_sq = (&h.pow(2 * n - 2) + &cc).scale_i64(s);
    b.rule(b.fm(&[("h", 1), ("x", 1)]), xn.clone());
    b.rule(b.fm(&[("x", 2)]), x_sq.clone());
    b.rule(b.fm(&[("h", 2 * n - 1)]), &(&xn * &x).scale_i64(s) - &(&h * &cc));
    b.alias(format!("c{}V", 2 * n), xn.pow(2).scale_i64(sign(n)));
    b.relation(format!("h*x - x{n}"), &(&h * &x) - &xn);
    b.relation("x^2 - (-1)^(n-1)*(h^(2n-2) + ...)".into(), &(&x * &x) - &x_sq);
    let mut top = h.pow(2 * n);
    for j in 1..=n {
        top = &top + &(&b.v(&format!("c{}V", 2 * j)) * &h.pow(2 * n - 2 * j));
    }
    b.relation("h^(2n) + c2V*h^(2n-2) + ... + c{2n}V".into(), top);
    let mut basis: Vec<Monomial> = (0..=2 * n - 2).map(|i| b.fm(&[("h", i)])).collect();
    basis.push(b.fm(&[("x", 1)]));
    let push = b.const_push(vec![(b.fm(&[("h", 2 * n - 2)]), 2)]);
    Ok(b.finish(basis, push, vec![vec![1, i64::from(n) - 1], vec![0, 1]]))
}

fn quadric_odd_plain(n: u32) -> Result<PresentationParts, CatalogError> {
    let base = (1..=n).map(|j| gen(format!("c{}V", 2 * j), 2 * j)).collect();
    let mut b = Builder::new(RingKind::QuadricOddIntegralPlain(n), CoeffKind::Dyadic, vec![gen("h", 1)], base)?;
    let h = b.v("h");
    let mut tail = b.zero();
    for j in 1..=n {
        tail = &tail + &(&b.v(&format!("c{}V", 2 * j)) * &h.pow(2 * n - 2 * j));
    }
    b.rule(b.fm(&[("h", 2 * n)]), tail.neg());
    let rel = &h.pow(2 * n) + &tail;
    b.relation("h^(2n) + c2V*h^(2n-2) + ... + c{2n}V".into(), rel.clone());
    b.relation("h^(2n+1) + c2V*h^(2n-1) + ... + c{2n}V*h".into(), &h * &rel);
    let basis = (0..2 * n).map(|i| b.fm(&[("h", i)])).collect();
    let push = b.const_push(vec![(b.fm(&[("h", 2 * n - 1)]), 2)]);
    Ok(b.finish(basis, push, vec![vec![1]]))
}

fn flag_tower(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut fiber = Vec::new();
    for k in 2..=n {
        fiber.push(gen(format!("h{k}"), 1));
        fiber.push(gen(format!("x{}", k - 1), k - 1));
    }
    let mut base: Vec<_> = (1..n).map(|j| gen(format!("c{}V", 2 * j), 2 * j)).collect();
    base.push(gen(format!("x{n}"), n));
    let mut b = Builder::new(RingKind::FlagTower(n), CoeffKind::Dyadic, fiber, base)?;
    let one = b.c(1);
    let cv = total_even_class(&b, n - 1);
    // c(V_k) = c(V) / prod_{m > k} (1 - h_m^2), truncated at degree 2k - 2
    let mut cvk = cv.clone();
    for k in (2..=n).rev() {
        let hk = b.v(&format!("h{k}"));
        let ek = b.v(&format!("x{k}"));
        let xk1 = b.v(&format!("x{}", k - 1));
        let s = sign(k - 1);
        let part = |j: u32| cvk.graded_component(2 * j);
        let mut cc = b.zero();
        for j in 1..k {
            cc = &cc + &(&part(j) * &hk.pow(2 * k - 2 - 2 * j));
        }
        let x_sq = (&hk.pow(2 * k - 2) + &cc).scale_i64(s);
        let hname = format!("h{k}");
        let xname = format!("x{}", k - 1);
        b.rule(b.fm(&[(&hname, 1), (&xname, 1)]), ek.clone());
        b.rule(b.fm(&[(&xname, 2)]), x_sq.clone());
        b.rule(b.fm(&[(&hname, 2 * k - 1)]), &(&ek * &xk1).scale_i64(s) - &(&hk * &cc));
        b.relation(format!("h{k}*x{} - x{k}", k - 1), &(&hk * &xk1) - &ek);
        b.relation(format!("x{}^2 - (-1)^{}*c(V_{k})-terms", k - 1, k - 1), &(&xk1 * &xk1) - &x_sq);
        let inv = (&one - &(&hk * &hk)).series_inverse(2 * k)?;
        cvk = (&cvk * &inv).truncate(2 * k - 4);
    }
    let xn = b.v(&format!("x{n}"));
    b.alias("h1".into(), b.v("x1"));
    b.alias(format!("c{}V", 2 * n), xn.pow(2).scale_i64(sign(n)));
    let hs: Vec<Polynomial> = (1..=n).map(|i| b.v(&format!("h{i}"))).collect();
    let full_cv = &cv + &b.v(&format!("c{}V", 2 * n));
    let prod = hs.iter().fold(one.clone(), |acc, h| &acc * &(&one - &(h * h)));
    let diff = &prod - &full_cv;
    for j in 1..=n {
        b.relation(format!("prod(1 - h_i^2) - c(V) in degree {}", 2 * j), diff.graded_component(2 * j));
    }
    let hprod = hs.iter().fold(one.clone(), |acc, h| &acc * h);
    b.relation(format!("h1*...*h{n} - x{n}"), &hprod - &xn);

    let mut basis = vec![Monomial::one(b.fiber_len)];
    let mut push_top = Monomial::one(b.fiber_len);
    for k in 2..=n {
        let hname = format!("h{k}");
        let xname = format!("x{}", k - 1);
        let level: Vec<Monomial> = (0..=2 * k - 2)
            .map(|i| b.fm(&[(&hname, i)]))
            .chain([b.fm(&[(&xname, 1)])])
            .collect();
        basis = basis.iter().flat_map(|m| level.iter().map(move |l| m.mul(l))).collect();
        push_top = push_top.mul(&b.fm(&[(&hname, 2 * k - 2)]));
    }
    let push = b.const_push(vec![(push_top, 1i64 << (n - 1))]);
    let mut order = Vec::new();
    for k in 2..=n {
        let i = 2 * (k as usize - 2);
        let mut deg = vec![0; b.fiber_len];
        deg[i] = 1;
        deg[i + 1] = i64::from(k) - 1;
        let mut xs = vec![0; b.fiber_len];
        xs[i + 1] = 1;
        order.push(deg);
        order.push(xs);
    }
    Ok(b.finish(basis, push, order))
}

fn quadric_integral_even(n: u32) -> Result<PresentationParts, CatalogError> {
    let base = (1..=n).map(|i| gen(format!("c{i}F"), i)).collect();
    let mut b =
        Builder::new(RingKind::QuadricIntegralEven(n), CoeffKind::Int, vec![gen("h", 1), gen("gamma", n - 1)], base)?;
    let (h, g) = (b.v("h"), b.v("gamma"));
    let cf = |i: u32| if i == 0 { b.c(1) } else { b.v(&format!("c{i}F")) };
    let mut tail = b.zero();
    for i in 1..=n {
        tail = &tail + &(&cf(i) * &h.pow(n - i)).scale_i64(-sign(i));
    }
    let rh = &(&h * &g).scale_i64(2) + &tail;
    let mut gsum = b.zero();
    for j in 0..=(n - 1) / 2 {
        gsum = &gsum + &(&cf(n - 1 - 2 * j) * &h.pow(2 * j));
    }
    let rg = (&gsum * &g).scale_i64(sign(n - 1));
    if n % 2 == 1 {
        let t = &(&h * &rg).scale_i64(2) + &(&tail * &g);
        b.solved_rule(b.fm(&[("h", n), ("gamma", 1)]), t);
    }
    b.rule(b.fm(&[("h", n)]), rh.clone());
    b.rule(b.fm(&[("gamma", 2)]), rg.clone());
    b.relation("2*h*gamma - (h^n - c1F*h^(n-1) + ... + (-1)^n*c{n}F)".into(), &h.pow(n) - &rh);
    b.relation("gamma^2 - (-1)^(n-1)*(c{n-1}F + c{n-3}F*h^2 + ...)*gamma".into(), &(&g * &g) - &rg);
    let basis = two_gen_basis(&b, n, "gamma");
    let push = b.const_push(vec![(b.fm(&[("h", n - 1), ("gamma", 1)]), 1)]);
    Ok(b.finish(basis, push, vec![vec![1, i64::from(n) - 1], vec![0, 1]]))
}

fn quadric_integral_odd(n: u32) -> Result<PresentationParts, CatalogError> {
    let base = (1..=n + 1).map(|i| gen(format!("c{i}Q"), i)).collect();
    let mut b = Builder::new(RingKind::QuadricIntegralOdd(n), CoeffKind::Int, vec![gen("h", 1), gen("gamma", n)], base)?;
    let (h, g) = (b.v("h"), b.v("gamma"));
    let cq = |i: u32| if i == 0 { b.c(1) } else { b.v(&format!("c{i}Q")) };
    let mut tail = b.zero();
    for i in 1..=n + 1 {
        tail = &tail + &(&cq(i) * &h.pow(n + 1 - i));
    }
    let rh = &(&h * &g).scale_i64(2) - &tail;
    let mut gsum = b.zero();
    for j in 0..=n / 2 {
        gsum = &gsum + &(&cq(n - 2 * j) * &h.pow(2 * j));
    }
    let rg = &gsum * &g;
    if n % 2 == 0 {
        let t = &(&h * &rg).scale_i64(2) - &(&tail * &g);
        b.solved_rule(b.fm(&[("h", n + 1), ("gamma", 1)]), t);
    }
    b.rule(b.fm(&[("h", n + 1)]), rh.clone());
    b.rule(b.fm(&[("gamma", 2)]), rg.clone());
    b.relation("2*h*gamma - (h^(n+1) + c1Q*h^n + ... + c{n+1}Q)".into(), &h.pow(n + 1) - &rh);
    b.relation("gamma^2 - (c{n}Q + c{n-2}Q*h^2 + ...)*gamma".into(), &(&g * &g) - &rg);
    // every monomial the two relations leave irreducible
    let basis = two_gen_basis(&b, n + 1, "gamma");
    let push = b.const_push(vec![(b.fm(&[("h", n - 1), ("gamma", 1)]), 1)]);
    Ok(b.finish(basis, push, vec![vec![1, i64::from(n)], vec![0, 1]]))
}

/// Shared shape of the two flag presentations: staircase rules extracting
/// `e_k(roots) = s_k`, then square rules for the `c_p`.
struct FlagData {
    /// Fiber roots as polynomials (the `x_i`, shifted by `l` in type B).
    roots: Vec<Polynomial>,
    /// Values of `e_k` of the roots for `k = 0..=n`.
    esyms: Vec<Polynomial>,
    /// Comparison roots on the base side.
    base_roots: Vec<Polynomial>,
    /// Number of `c` generators.
    c_count: u32,
}

fn flag_rules(b: &mut Builder, n: u32, data: &FlagData) {
    let c = |b: &Builder, k: u32| -> Polynomial {
        if k == 0 {
            b.c(1)
        } else if k <= data.c_count {
            b.v(&format!("c{k}"))
        } else {
            b.zero()
        }
    };
    let table = b.table.clone();
    let coeff = b.coeff;
    for i in 1..=n {
        let d = n - i + 1;
        let prefix = &data.roots[..i as usize];
        let mut g = b.zero();
        for k in 0..=d {
            let term = &data.esyms[k as usize] * &hsym(&table, coeff, (d - k) as usize, prefix);
            g = &g + &term.scale_i64(sign(k));
        }
        let name = format!("x{i}");
        let lead = b.v(&name).pow(d);
        b.rule(b.fm(&[(&name, d)]), &lead - &g);
    }
    let be = |k: u32| esym(&table, coeff, k as usize, &data.base_roots);
    for p in 1..=data.c_count {
        let rel = quadratic_relation(b, p, &c, &be);
        let name = format!("c{p}");
        let sq = b.v(&name).pow(2);
        b.rule(b.fm(&[(&name, 2)]), &sq - &rel.scale_i64(sign(p)));
    }
}

/// `(-1)^p c_p^2 + 2 sum_{j=1..p} (-1)^{p-j} c_{p-j} c_{p+j}
///  - sum_{a=0..2p} (-1)^a e_a c_{2p-a}`.
fn quadratic_relation(
    b: &Builder,
    p: u32,
    c: &dyn Fn(&Builder, u32) -> Polynomial,
    e: &dyn Fn(u32) -> Polynomial,
) -> Polynomial {
    let mut lhs = c(b, p).pow(2).scale_i64(sign(p));
    for j in 1..=p {
        lhs = &lhs + &(&c(b, p - j) * &c(b, p + j)).scale_i64(2 * sign(p - j));
    }
    let mut rhs = b.zero();
    for a in 0..=2 * p {
        rhs = &rhs + &(&e(a) * &c(b, 2 * p - a)).scale_i64(sign(a));
    }
    &lhs - &rhs
}

fn flag_basis(b: &Builder, n: u32, c_count: u32) -> Vec<Monomial> {
    let mut basis = vec![Monomial::one(b.fiber_len)];
    for i in 1..=n {
        let name = format!("x{i}");
        let opts: Vec<Monomial> = (0..=n - i).map(|a| b.fm(&[(&name, a)])).collect();
        basis = basis.iter().flat_map(|m| opts.iter().map(move |o| m.mul(o))).collect();
    }
    for p in 1..=c_count {
        let name = format!("c{p}");
        let opts = [Monomial::one(b.fiber_len), b.fm(&[(&name, 1)])];
        basis = basis.iter().flat_map(|m| opts.iter().map(move |o| m.mul(o))).collect();
    }
    basis
}

/// x-degree, then lex with `x_n` most significant, then weighted c-degree,
/// then a concave spread weight on the c's.
fn flag_order(n: u32, c_count: u32) -> Vec<Vec<i64>> {
    let len = (n + c_count) as usize;
    let mut rows = Vec::new();
    let mut xdeg = vec![0; len];
    xdeg[..n as usize].fill(1);
    rows.push(xdeg);
    for i in (0..n as usize).rev() {
        let mut r = vec![0; len];
        r[i] = 1;
        rows.push(r);
    }
    let mut cdeg = vec![0; len];
    let mut spread = vec![0; len];
    for p in 1..=c_count as usize {
        cdeg[n as usize + p - 1] = p as i64;
        spread[n as usize + p - 1] = -((p * p) as i64);
    }
    rows.push(cdeg);
    rows.push(spread);
    for p in (0..c_count as usize).rev() {
        let mut r = vec![0; len];
        r[n as usize + p] = 1;
        rows.push(r);
    }
    rows
}

fn flag_dn(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut fiber: Vec<_> = (1..=n).map(|i| gen(format!("x{i}"), 1)).collect();
    fiber.extend((1..n).map(|i| gen(format!("c{i}"), i)));
    let base = (1..=n).map(|i| gen(format!("y{i}"), 1)).collect();
    let mut b = Builder::new(RingKind::FlagDn(n), CoeffKind::Int, fiber, base)?;
    let table = b.table.clone();
    let k = b.coeff;
    let xs: Vec<Polynomial> = (1..=n).map(|i| b.v(&format!("x{i}"))).collect();
    let ys: Vec<Polynomial> = (1..=n).map(|i| b.v(&format!("y{i}"))).collect();
    let c = |b: &Builder, i: u32| -> Polynomial {
        if i == 0 {
            b.c(1)
        } else if i < n {
            b.v(&format!("c{i}"))
        } else {
            b.zero()
        }
    };
    // e_k(x) = 2 c_k - e_k(y)
    let esyms: Vec<Polynomial> = (0..=n)
        .map(|i| if i == 0 { b.c(1) } else { &c(&b, i).scale_i64(2) - &esym(&table, k, i as usize, &ys) })
        .collect();
    let data = FlagData { roots: xs.clone(), esyms, base_roots: ys.clone(), c_count: n - 1 };
    flag_rules(&mut b, n, &data);

    let neg_sq = |v: &[Polynomial]| -> Vec<Polynomial> { v.iter().map(|p| -&(p * p)).collect() };
    for i in 1..=n {
        b.alias(format!("c{}V", 2 * i), esym(&table, k, i as usize, &neg_sq(&ys)));
    }
    for i in 1..=n {
        let lhs = esym(&table, k, i as usize, &neg_sq(&xs));
        let rel = &lhs - &b.v(&format!("c{}V", 2 * i));
        b.relation(format!("e{i}(-x^2) - c{}V", 2 * i), rel);
    }
    for i in 1..=n {
        let rel = &(&c(&b, i).scale_i64(2) - &esym(&table, k, i as usize, &xs)) - &esym(&table, k, i as usize, &ys);
        b.relation(format!("2*c{i} - e{i}(x) - e{i}(y)"), rel);
    }
    let ex = |a: u32| esym(&table, k, a as usize, &xs);
    for p in 1..=n {
        b.relation(format!("quadratic relation p={p}"), quadratic_relation(&b, p, &c, &ex));
    }
    let basis = flag_basis(&b, n, n - 1);
    let order = flag_order(n, n - 1);
    let mut parts = b.finish(basis, Vec::new(), order);
    parts.pushforward = None;
    Ok(parts)
}

fn flag_bn(n: u32) -> Result<PresentationParts, CatalogError> {
    let mut fiber: Vec<_> = (1..=n).map(|i| gen(format!("x{i}"), 1)).collect();
    fiber.extend((1..=n).map(|i| gen(format!("c{i}"), i)));
    let mut base = vec![gen("l", 1)];
    base.extend((1..=n).map(|i| gen(format!("y{i}"), 1)));
    let mut b = Builder::new(RingKind::FlagBn(n), CoeffKind::Int, fiber, base)?;
    let table = b.table.clone();
    let k = b.coeff;
    let l = b.v("l");
    let xs: Vec<Polynomial> = (1..=n).map(|i| b.v(&format!("x{i}"))).collect();
    let zs: Vec<Polynomial> = xs.iter().map(|x| x + &l).collect();
    let ws: Vec<Polynomial> = (1..=n).map(|i| &b.v(&format!("y{i}")) + &l).collect();
    let c = |b: &Builder, i: u32| -> Polynomial {
        if i == 0 {
            b.c(1)
        } else if i <= n {
            b.v(&format!("c{i}"))
        } else {
            b.zero()
        }
    };
    // e_k(x + l) = 2 c_k - e_k(y + l)
    let esyms: Vec<Polynomial> = (0..=n)
        .map(|i| if i == 0 { b.c(1) } else { &c(&b, i).scale_i64(2) - &esym(&table, k, i as usize, &ws) })
        .collect();
    let data = FlagData { roots: zs.clone(), esyms, base_roots: ws.clone(), c_count: n };
    flag_rules(&mut b, n, &data);

    let neg_sq = |v: &[Polynomial]| -> Vec<Polynomial> { v.iter().map(|p| -&(p * p)).collect() };
    b.alias("c1V".into(), l.clone());
    for i in 1..=n {
        let e = esym(&table, k, i as usize, &neg_sq(&xs));
        b.alias(format!("c{}V", 2 * i + 1), &l * &e);
        b.alias(format!("c{}V", 2 * i), e);
    }
    for i in 1..=n {
        let e = esym(&table, k, i as usize, &neg_sq(&xs));
        b.relation(format!("e{i}(-x^2) - c{}V", 2 * i), &e - &b.v(&format!("c{}V", 2 * i)));
        b.relation(format!("l*e{i}(-x^2) - c{}V", 2 * i + 1), &(&l * &e) - &b.v(&format!("c{}V", 2 * i + 1)));
    }
    for i in 1..=n {
        let rel =
            &(&c(&b, i).scale_i64(2) - &esym(&table, k, i as usize, &zs)) - &esym(&table, k, i as usize, &ws);
        b.relation(format!("2*c{i} - e{i}(x+l) - e{i}(y+l)"), rel);
    }
    let ez = |a: u32| esym(&table, k, a as usize, &zs);
    for p in 1..=n {
        b.relation(format!("quadratic relation p={p}"), quadratic_relation(&b, p, &c, &ez));
    }
    for i in 1..=n {
        let rel = &esym(&table, k, i as usize, &neg_sq(&zs)) - &esym(&table, k, i as usize, &neg_sq(&ws));
        b.relation(format!("e{i}(-(x+l)^2) - e{i}(-(y+l)^2)"), rel);
    }
    let basis = flag_basis(&b, n, n);
    let order = flag_order(n, n);
    let mut parts = b.finish(basis, Vec::new(), order);
    parts.pushforward = None;
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn all_kinds(max_n: u32) -> Vec<RingKind> {
        let mut v = Vec::new();
        for name in KIND_NAMES {
            for n in 1..=max_n {
                let kind = RingKind::from_name(name, n).unwrap();
                let (lo, hi) = kind.supported_range();
                if n >= lo && n <= hi {
                    v.push(kind);
                }
            }
        }
        v
    }

    /// Every fiber monomial not divisible by a rule's leading monomial,
    /// enumerated independently of the declared lists.
    fn irreducible_monomials(ring: &RingPresentation) -> BTreeSet<Monomial> {
        let k = ring.fiber_table().len();
        let bounds: Vec<u32> = (0..k)
            .map(|i| {
                ring.rules()
                    .iter()
                    .filter(|r| r.lhs.0.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
                    .map(|r| r.lhs.0[i])
                    .min()
                    .expect("each generator has a pure power rule")
            })
            .collect();
        let mut out = BTreeSet::new();
        let mut cur = vec![0u32; k];
        loop {
            let m = Monomial(cur.clone());
            if ring.rules().iter().all(|r| !r.lhs.divides(&m)) {
                out.insert(m);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn declared_bases_are_the_irreducible_monomials() {
        for kind in all_kinds(4) {
            let ring = make_ring(kind).unwrap();
            let declared: BTreeSet<Monomial> = ring.basis().iter().cloned().collect();
            assert_eq!(declared, irreducible_monomials(&ring), "{kind}");
        }
    }

    #[test]
    fn ranks() {
        for kind in all_kinds(4) {
            let ring = make_ring(kind).unwrap();
            let expected = match kind {
                // the two stated relations leave 2n + 2 monomials
                RingKind::QuadricIntegralOdd(n) => 2 * u64::from(n) + 2,
                _ => kind.expected_rank(),
            };
            assert_eq!(ring.basis().len() as u64, expected, "{kind}");
        }
        assert_eq!(make_ring(RingKind::QuadricPointEven(2)).unwrap().basis().len(), 4);
        assert_eq!(make_ring(RingKind::FlagDn(3)).unwrap().basis().len(), 24);
    }

    #[test]
    fn halves_basis_at_two() {
        let ring = make_ring(RingKind::QuadricHalves(2)).unwrap();
        let names: Vec<String> = ring.basis().iter().map(|m| m.text(ring.fiber_table())).collect();
        assert_eq!(names, ["h^2", "h", "x", "1"]);
    }

    #[test]
    fn unsupported_parameters() {
        assert!(matches!(
            make_ring(RingKind::QuadricPointEven(1)),
            Err(CatalogError::UnsupportedParameter { n: 1, .. })
        ));
        assert!(make_ring(RingKind::QuadricPointOdd(9)).is_err());
        assert!(make_ring(RingKind::ProjectiveBundle(1)).is_err());
        assert!(make_ring(RingKind::FlagBn(7)).is_err());
        assert!(matches!(RingKind::from_name("grassmannian", 2), Err(CatalogError::UnknownKind(_))));
    }

    #[test]
    fn names_round_trip() {
        for name in KIND_NAMES {
            assert_eq!(RingKind::from_name(name, 3).unwrap().name(), name);
        }
    }

    #[test]
    fn basis_monomials_are_normal_forms() {
        for kind in all_kinds(3) {
            let ring = make_ring(kind).unwrap();
            for (i, m) in ring.basis().iter().enumerate() {
                let raw = ring.join([(m, &Polynomial::one(ring.base_table(), ring.coeff_kind()))]);
                assert_eq!(ring.normal_form(&raw).unwrap(), ring.basis_element(i), "{kind} {m:?}");
            }
        }
    }

    #[test]
    fn relations_normalize_to_zero() {
        for kind in all_kinds(4) {
            let ring = make_ring(kind).unwrap();
            for (name, rel) in ring.relations() {
                let nf = ring.normal_form(rel).unwrap();
                assert!(nf.is_zero(), "{kind}: {name} -> {nf}");
            }
        }
    }

    #[test]
    fn rules_are_homogeneous_and_leading_terms_are_fiber_monomials() {
        for kind in all_kinds(4) {
            let ring = make_ring(kind).unwrap();
            for r in ring.rules() {
                let d = ring.fiber_table().degree_of(&r.lhs);
                assert!(r.rhs.terms().keys().all(|m| ring.table().degree_of(m) == d), "{kind}");
            }
        }
    }
}
