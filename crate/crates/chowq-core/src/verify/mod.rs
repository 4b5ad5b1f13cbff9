//! Split-model oracles and the identity checks built on them.
//!
//! Every check returns a [`Report`]. A failing identity is a report with
//! status [`Status::Fail`], not an error; errors are reserved for bad
//! parameters and engine failures.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::catalog::CatalogError;
use crate::poly::{PolyError, Polynomial};
use crate::ring::RingError;

mod geometry;
mod oracle;
mod split;
mod structure;

pub use geometry::{comparison_check, euler_axioms_check, no_subbundle_check, no_subbundle_control, pushpull_check};
pub use oracle::{integral_odd_diagnostic, oracle_relations_check, FixedPointOracle};
pub use split::{
    fulton_all_pairs, fulton_check, odd_chern_identity_check, split_chern, whitney_invariance_check, Parity, Role,
    SplitModel, SubbundleSpec,
};
pub use structure::{presentation_structure_check, ring_structure_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Unsat,
    Sat,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unsat => "UNSAT",
            Status::Sat => "SAT",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    Text(String),
    Set(Vec<u32>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Text(s) => f.write_str(s),
            ParamValue::Set(s) => {
                f.write_str("{")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// A nonzero difference found by a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub degree: Option<u32>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub params: Vec<(String, ParamValue)>,
    pub status: Status,
    pub residuals: Vec<Residual>,
    pub witness: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: Vec::new(),
            status: Status::Pass,
            residuals: Vec::new(),
            witness: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: ParamValue) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    pub fn int_param(self, name: &str, value: i64) -> Self {
        self.param(name, ParamValue::Int(value))
    }

    pub fn text_param(self, name: &str, value: &str) -> Self {
        self.param(name, ParamValue::Text(value.to_string()))
    }

    /// Records a residual and marks the report failed.
    pub fn fail(&mut self, label: impl Into<String>, degree: Option<u32>, value: impl Into<String>) {
        self.status = Status::Fail;
        self.residuals.push(Residual { label: label.into(), degree, value: value.into() });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// The status a correct engine produces for this check.
    pub fn expected_status(&self) -> Status {
        match self.check.as_str() {
            "no_subbundle_check" => Status::Unsat,
            "no_subbundle_control" => Status::Sat,
            _ => Status::Pass,
        }
    }

    pub fn as_expected(&self) -> bool {
        self.status == self.expected_status()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.status, self.check)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        for r in &self.residuals {
            match r.degree {
                Some(d) => write!(f, "\n  residual {} (degree {d}): {}", r.label, r.value)?,
                None => write!(f, "\n  residual {}: {}", r.label, r.value)?,
            }
        }
        for w in &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    BoundTooLarge { bound: u32, max: u32 },
    ParameterOutOfRange { check: &'static str, n: u32, min: u32, max: u32 },
    InvalidFlipSet { index: u32, n: u32 },
    UnsupportedKind(String),
    Catalog(CatalogError),
    Ring(RingError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::BoundTooLarge { bound, max } => {
                write!(f, "BOUND_TOO_LARGE: truncation bound {bound} exceeds {max}")
            }
            VerifyError::ParameterOutOfRange { check, n, min, max } => {
                write!(f, "UNSUPPORTED_PARAMETER: {check} needs {min} <= n <= {max}, got {n}")
            }
            VerifyError::InvalidFlipSet { index, n } => {
                write!(f, "INVALID_FLIP_SET: index {index} outside 1..={n}")
            }
            VerifyError::UnsupportedKind(kind) => write!(f, "UNSUPPORTED_KIND: no oracle for {kind}"),
            VerifyError::Catalog(e) => write!(f, "{e}"),
            VerifyError::Ring(e) => write!(f, "{e}"),
        }
    }
}

impl From<CatalogError> for VerifyError {
    fn from(e: CatalogError) -> Self {
        VerifyError::Catalog(e)
    }
}

impl From<RingError> for VerifyError {
    fn from(e: RingError) -> Self {
        VerifyError::Ring(e)
    }
}

impl From<PolyError> for VerifyError {
    fn from(e: PolyError) -> Self {
        VerifyError::Ring(RingError::Poly(e))
    }
}

pub(crate) fn check_range(check: &'static str, n: u32, min: u32, max: u32) -> Result<(), VerifyError> {
    if n < min || n > max {
        return Err(VerifyError::ParameterOutOfRange { check, n, min, max });
    }
    Ok(())
}

/// Leading term of `p` in display order, or `0`.
pub(crate) fn first_term(p: &Polynomial) -> String {
    match p.ordered_terms().first() {
        Some((m, c)) => Polynomial::monomial(p.table(), (*m).clone(), (*c).clone()).text(),
        None => String::from("0"),
    }
}
