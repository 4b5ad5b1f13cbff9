//! Fully split models: total Chern classes of sign-flipped isotropic
//! subbundles, and the identities among them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{check_range, first_term, ParamValue, Report, VerifyError};
use crate::poly::{GeneratorTable, Polynomial};
use crate::scalar::{CoeffKind, Coefficient};
use num_integer::Integer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Rank `2n`.
    Even,
    /// Rank `2n + 1`, with the extra symbol `l = c_1(V)`.
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Polynomial ring on the Chern roots `y_1..y_n` (and `l` when odd).
#[derive(Clone, Debug)]
pub struct SplitModel {
    n: u32,
    parity: Parity,
    kind: CoeffKind,
    table: Arc<GeneratorTable>,
}

impl SplitModel {
    pub fn new(n: u32, parity: Parity, kind: CoeffKind) -> Result<Self, VerifyError> {
        check_range("split_model", n, 1, 64)?;
        let mut gens: Vec<(String, u32)> = (1..=n).map(|i| (format!("y{i}"), 1)).collect();
        if parity == Parity::Odd {
            gens.push((String::from("l"), 1));
        }
        Ok(SplitModel { n, parity, kind, table: Arc::new(GeneratorTable::new(gens)?) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeff_kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    /// Rank of `V`.
    pub fn rank(&self) -> u32 {
        match self.parity {
            Parity::Even => 2 * self.n,
            Parity::Odd => 2 * self.n + 1,
        }
    }

    /// The root `y_i`, `1 <= i <= n`.
    pub fn root(&self, i: u32) -> Polynomial {
        Polynomial::generator(&self.table, self.kind, i as usize - 1)
    }

    pub fn l(&self) -> Option<Polynomial> {
        (self.parity == Parity::Odd).then(|| Polynomial::generator(&self.table, self.kind, self.n as usize))
    }

    fn constant(&self, v: i64) -> Polynomial {
        Polynomial::from_i64(&self.table, self.kind, v)
    }

    /// `sum_i classes_i` with every class in the model's table.
    fn product(&self, factors: impl IntoIterator<Item = Polynomial>) -> Polynomial {
        factors.into_iter().fold(self.constant(1), |acc, f| &acc * &f)
    }

    fn total_v(&self) -> Polynomial {
        let one = self.constant(1);
        let mut cv = self.product((1..=self.n).map(|i| {
            let y = self.root(i);
            &one - &(&y * &y)
        }));
        if let Some(l) = self.l() {
            cv = &cv * &(&one + &l);
        }
        cv
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    E,
    F,
    V,
    VModE,
    VModF,
    EDual,
    FDual,
}

/// A maximal isotropic subbundle with roots `y_i` off the flip set and
/// `-y_i` on it, used in the given role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbundleSpec {
    flips: Vec<u32>,
    role: Role,
}

impl SubbundleSpec {
    /// Flip set as 1-based root indices.
    pub fn new(n: u32, flips: &[u32], role: Role) -> Result<Self, VerifyError> {
        if let Some(&index) = flips.iter().find(|&&i| i == 0 || i > n) {
            return Err(VerifyError::InvalidFlipSet { index, n });
        }
        let mut flips = flips.to_vec();
        flips.sort_unstable();
        flips.dedup();
        Ok(SubbundleSpec { flips, role })
    }

    /// Flip set given as a bit mask, bit `i - 1` for root `i`.
    pub fn from_mask(n: u32, mask: u64, role: Role) -> Self {
        SubbundleSpec { flips: mask_to_set(n, mask), role }
    }

    pub fn flips(&self) -> &[u32] {
        &self.flips
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Family parity: `|S| mod 2`.
    pub fn family(&self) -> u32 {
        self.flips.len() as u32 % 2
    }

    fn sign(&self, i: u32) -> i64 {
        if self.flips.contains(&i) {
            -1
        } else {
            1
        }
    }
}

fn mask_to_set(n: u32, mask: u64) -> Vec<u32> {
    (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// Total Chern class of the bundle named by `spec`, truncated above degree
/// `bound`. Quotients by the subbundle are computed with a series inverse.
pub fn split_chern(model: &SplitModel, spec: &SubbundleSpec, bound: u32) -> Result<Polynomial, VerifyError> {
    let max = 2 * model.rank();
    if bound > max {
        return Err(VerifyError::BoundTooLarge { bound, max });
    }
    let one = model.constant(1);
    let signed = |dual: bool| {
        model.product((1..=model.n).map(|i| {
            let s = if dual { -spec.sign(i) } else { spec.sign(i) };
            &one + &model.root(i).scale_i64(s)
        }))
    };
    let c = match spec.role {
        Role::E | Role::F => signed(false),
        Role::EDual | Role::FDual => signed(true),
        Role::V => model.total_v(),
        // divide out one root at a time so the truncated series stay small
        Role::VModE | Role::VModF => (1..=model.n).try_fold(model.total_v(), |acc, i| {
            let factor = &one + &model.root(i).scale_i64(spec.sign(i));
            Ok::<_, VerifyError>((&acc * &factor.series_inverse(bound)?).truncate(bound))
        })?,
    };
    Ok(c.truncate(bound))
}

/// Per-flip-set classes shared by the pair checks.
struct FlipClasses {
    /// `c(E_S)`.
    sub: Polynomial,
    /// `c(V / E_S)`.
    quotient: Polynomial,
}

fn flip_classes(model: &SplitModel, mask: u64) -> Result<FlipClasses, VerifyError> {
    let n = model.n;
    // V/E has rank N - n, so its classes stop there
    let top = model.rank() - n;
    Ok(FlipClasses {
        sub: split_chern(model, &SubbundleSpec::from_mask(n, mask, Role::E), n)?,
        quotient: split_chern(model, &SubbundleSpec::from_mask(n, mask, Role::VModE), top)?,
    })
}

fn half(p: &Polynomial) -> Result<Polynomial, VerifyError> {
    Ok(p.convert(CoeffKind::Dyadic)?.scale(&Coefficient::inverse_power_of_two(1))?)
}

/// First term with an odd coefficient in each degree where one exists.
fn odd_terms(p: &Polynomial) -> BTreeMap<u32, Polynomial> {
    let mut out = BTreeMap::new();
    for (m, c) in p.ordered_terms() {
        let odd = c.to_bigint().is_some_and(|v| v.is_odd());
        if odd {
            let d = p.degree_of(m);
            out.entry(d).or_insert_with(|| Polynomial::monomial(p.table(), m.clone(), c.clone()));
        }
    }
    out
}

fn sign_of(parity: u32) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The four parts of the comparison between two maximal isotropic
/// subbundles `E`, `F` of the split bundle, appended to `report`.
fn compare_pair(
    model: &SplitModel,
    e: &FlipClasses,
    f: &FlipClasses,
    delta: u32,
    report: &mut Report,
) -> Result<(), VerifyError> {
    let n = model.n;
    let sign = sign_of(delta);
    // (i) mod-2 agreement in every degree
    for (d, term) in odd_terms(&(&e.sub - &f.sub)) {
        report.fail(String::from("c_i(E) - c_i(F) mod 2"), Some(d), term.convert(CoeffKind::Mod2)?.text());
    }
    // (ii) the half-classes are integral: every coefficient of the sum is even
    for (name, a, b) in [("(c_i(E) + c_i(F))/2", &e.sub, &f.sub), ("(c_i(V/E) + c_i(V/F))/2", &e.quotient, &f.quotient)] {
        for (d, term) in odd_terms(&(a + b)) {
            report.fail(String::from(name), Some(d), half(&term)?.text());
        }
    }
    // (iii) top Chern classes of the subbundles, even rank
    if model.parity == Parity::Even {
        let r = &e.sub.graded_component(n) - &f.sub.graded_component(n).scale_i64(sign);
        if !r.is_zero() {
            report.fail(String::from("c_n(E) - (-1)^|S_E xor S_F| c_n(F)"), Some(n), first_term(&r));
        }
    }
    // (iv) top Chern classes of the quotients
    let top = model.rank() - n;
    let r = &e.quotient.graded_component(top) - &f.quotient.graded_component(top).scale_i64(sign);
    if !r.is_zero() {
        report.fail(String::from("c_top(V/E) - (-1)^|S_E xor S_F| c_top(V/F)"), Some(top), first_term(&r));
    }
    Ok(())
}

fn fulton_range(n: u32) -> Result<(), VerifyError> {
    check_range("fulton_check", n, 1, 8)
}

/// Compares the maximal isotropic subbundles with flip sets `s_e` and `s_f`.
pub fn fulton_check(n: u32, parity: Parity, s_e: &[u32], s_f: &[u32]) -> Result<Report, VerifyError> {
    fulton_range(n)?;
    let se = SubbundleSpec::new(n, s_e, Role::E)?;
    let sf = SubbundleSpec::new(n, s_f, Role::F)?;
    let model = SplitModel::new(n, parity, CoeffKind::Int)?;
    let mask = |s: &SubbundleSpec| s.flips.iter().fold(0u64, |m, i| m | 1 << (i - 1));
    let e = flip_classes(&model, mask(&se))?;
    let f = flip_classes(&model, mask(&sf))?;
    let delta = (mask(&se) ^ mask(&sf)).count_ones();
    let mut report = Report::new("fulton_check")
        .int_param("n", i64::from(n))
        .text_param("parity", parity.name())
        .param("S_E", ParamValue::Set(se.flips.clone()))
        .param("S_F", ParamValue::Set(sf.flips.clone()));
    compare_pair(&model, &e, &f, delta, &mut report)?;
    let s = if delta % 2 == 0 { "+" } else { "-" };
    if parity == Parity::Even {
        report.note(format!("c_{n}(F) = {s}c_{n}(E)"));
    }
    let top = model.rank() - n;
    report.note(format!("c_{top}(V/F) = {s}c_{top}(V/E)"));
    Ok(report)
}

/// [`fulton_check`] over every ordered pair of flip sets.
pub fn fulton_all_pairs(n: u32, parity: Parity) -> Result<Report, VerifyError> {
    fulton_range(n)?;
    let model = SplitModel::new(n, parity, CoeffKind::Int)?;
    let count = 1u64 << n;
    let classes = (0..count).map(|m| flip_classes(&model, m)).collect::<Result<Vec<_>, _>>()?;
    let mut report = Report::new("fulton_all_pairs").int_param("n", i64::from(n)).text_param("parity", parity.name());
    for a in 0..count {
        for b in 0..count {
            let before = report.residuals.len();
            compare_pair(&model, &classes[a as usize], &classes[b as usize], (a ^ b).count_ones(), &mut report)?;
            for r in &mut report.residuals[before..] {
                r.label = format!(
                    "{} at S_E={} S_F={}",
                    r.label,
                    ParamValue::Set(mask_to_set(n, a)),
                    ParamValue::Set(mask_to_set(n, b))
                );
            }
        }
    }
    report.note(format!("{} ordered pairs of flip sets", count * count));
    Ok(report)
}

/// The classes `e_i` of the flipped roots agree mod 2 for every flip set,
/// so the mod-2 classes are well defined on split models. The odd case also
/// checks the roots shifted by `l`.
pub fn whitney_invariance_check(n: u32, parity: Parity) -> Result<Report, VerifyError> {
    check_range("whitney_invariance_check", n, 1, 8)?;
    let model = SplitModel::new(n, parity, CoeffKind::Mod2)?;
    let mut report =
        Report::new("whitney_invariance_check").int_param("n", i64::from(n)).text_param("parity", parity.name());
    let one = model.constant(1);
    let total = |mask: u64, shift: Option<&Polynomial>| {
        let spec = SubbundleSpec::from_mask(n, mask, Role::E);
        model.product((1..=n).map(|i| {
            // roots of E tensor M are +-(y_i + l)
            let root = match shift {
                Some(l) => &model.root(i) + l,
                None => model.root(i),
            };
            let root = root.scale_i64(spec.sign(i));
            &one + &root
        }))
    };
    let mut shifts: Vec<Option<Polynomial>> = alloc::vec![None];
    if let Some(l) = model.l() {
        shifts.push(Some(l));
    }
    for shift in &shifts {
        let base = total(0, shift.as_ref());
        for mask in 1..1u64 << n {
            let d = &total(mask, shift.as_ref()) - &base;
            for deg in 1..=n {
                let part = d.graded_component(deg);
                if !part.is_zero() {
                    let what = if shift.is_some() { "e_i(+-(y + l))" } else { "e_i(+-y)" };
                    let label = format!("{what} at S={}", ParamValue::Set(mask_to_set(n, mask)));
                    report.fail(label, Some(deg), first_term(&part));
                }
            }
        }
    }
    report.note(format!("{} flip sets", 1u64 << n));
    Ok(report)
}

/// In the odd split model, `c(E*) + c(F*) = (c(V/E) + c(V/F)) / (1 + l)` for
/// `E` unflipped and every flip set `F`, and the classes `c_i` defined by
/// `sum (-1)^i c_i = (sum d_i) / (1 + l)` are integral.
pub fn odd_chern_identity_check(n: u32) -> Result<Report, VerifyError> {
    check_range("odd_chern_identity_check", n, 1, 5)?;
    let model = SplitModel::new(n, Parity::Odd, CoeffKind::Int)?;
    let bound = model.rank();
    let l = model.l().expect("odd model");
    let inv = (&model.constant(1) + &l).series_inverse(bound)?;
    let class = |mask: u64, role: Role| split_chern(&model, &SubbundleSpec::from_mask(n, mask, role), bound);
    let e_dual = class(0, Role::EDual)?;
    let e_quot = class(0, Role::VModE)?;
    let e_sub = class(0, Role::E)?;
    let mut report = Report::new("odd_chern_identity_check").int_param("n", i64::from(n));
    for mask in 0..1u64 << n {
        let at = ParamValue::Set(mask_to_set(n, mask));
        let lhs = &e_dual + &class(mask, Role::FDual)?;
        let quotients = &e_quot + &class(mask, Role::VModF)?;
        let rhs = (&quotients * &inv).truncate(bound);
        let diff = &lhs - &rhs;
        for d in 0..=bound {
            let part = diff.graded_component(d);
            if !part.is_zero() {
                report.fail(format!("c(E*) + c(F*) - (c(V/E) + c(V/F))/(1 + l) at S_F={at}"), Some(d), first_term(&part));
            }
        }
        // sum (-1)^i c_i = (sum d_i) / (1 + l), d_i the half quotient classes
        let alternating = (&half(&quotients)? * &inv.convert(CoeffKind::Dyadic)?).truncate(bound);
        let halves = half(&(&e_sub + &class(mask, Role::F)?))?;
        for d in 0..=bound {
            let c = alternating.graded_component(d).scale_i64(sign_of(d));
            if c.max_dyadic_exponent() > 0 {
                report.fail(format!("c_i not integral at S_F={at}"), Some(d), first_term(&c));
            }
            let r = &c - &halves.graded_component(d);
            if !r.is_zero() {
                report.fail(format!("c_i - (c_i(E) + c_i(F))/2 at S_F={at}"), Some(d), first_term(&r));
            }
        }
    }
    report.note(format!("{} flip sets, truncated at degree {bound}", 1u64 << n));
    Ok(report)
}
