//! Exact scalars over the integers, the dyadic rationals and the field with
//! two elements.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Which of the three coefficient rings a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffKind {
    Int,
    Dyadic,
    Mod2,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::Int => "int",
            CoeffKind::Dyadic => "dyadic",
            CoeffKind::Mod2 => "mod2",
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    /// Operands come from different coefficient rings.
    VariantMismatch { left: CoeffKind, right: CoeffKind },
    /// A dyadic value with a denominator cannot become an integer or a residue.
    NotIntegral,
    /// Residues mod 2 do not lift.
    NoLift,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::VariantMismatch { left, right } => {
                write!(f, "VARIANT_MISMATCH: {left} vs {right}")
            }
            ScalarError::NotIntegral => f.write_str("NOT_INTEGRAL: value has a power of 2 in its denominator"),
            ScalarError::NoLift => f.write_str("NO_LIFT: a residue mod 2 has no canonical lift"),
        }
    }
}

/// `num / 2^exp` with `num` odd, or the zero value `0 / 2^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Reduces `num / 2^exp` to lowest terms.
    pub fn new(num: BigInt, exp: u64) -> Self {
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp);
        if tz == 0 {
            Dyadic { num, exp }
        } else {
            Dyadic { num: num >> tz, exp: exp - tz }
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_integral(&self) -> bool {
        self.exp == 0
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        // odd times odd stays odd, so only zero needs care
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }
}

/// An exact scalar. Arithmetic between different variants is refused.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Int(BigInt),
    Dyadic(Dyadic),
    Mod2(bool),
}

/// Ring operations accepted by [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Neg,
}

/// Canonical dyadic value of `numerator / 2^exponent`.
pub fn dyadic_normalize(numerator: BigInt, exponent: u64) -> Coefficient {
    Coefficient::Dyadic(Dyadic::new(numerator, exponent))
}

/// Applies `op` to `a` and `b`; `Neg` ignores `b`.
pub fn scalar_arith(op: ScalarOp, a: &Coefficient, b: &Coefficient) -> Result<Coefficient, ScalarError> {
    match op {
        ScalarOp::Add => a.checked_add(b),
        ScalarOp::Mul => a.checked_mul(b),
        ScalarOp::Neg => Ok(a.neg()),
    }
}

impl Coefficient {
    pub fn zero(kind: CoeffKind) -> Self {
        match kind {
            CoeffKind::Int => Coefficient::Int(BigInt::zero()),
            CoeffKind::Dyadic => Coefficient::Dyadic(Dyadic::new(BigInt::zero(), 0)),
            CoeffKind::Mod2 => Coefficient::Mod2(false),
        }
    }

    pub fn one(kind: CoeffKind) -> Self {
        Coefficient::from_int(kind, BigInt::one())
    }

    pub fn from_i64(kind: CoeffKind, v: i64) -> Self {
        Coefficient::from_int(kind, BigInt::from(v))
    }

    pub fn from_int(kind: CoeffKind, v: BigInt) -> Self {
        match kind {
            CoeffKind::Int => Coefficient::Int(v),
            CoeffKind::Dyadic => Coefficient::Dyadic(Dyadic::new(v, 0)),
            CoeffKind::Mod2 => Coefficient::Mod2(v.is_odd()),
        }
    }

    /// `1 / 2^k` in the dyadic ring.
    pub fn inverse_power_of_two(k: u64) -> Self {
        dyadic_normalize(BigInt::one(), k)
    }

    pub fn kind(&self) -> CoeffKind {
        match self {
            Coefficient::Int(_) => CoeffKind::Int,
            Coefficient::Dyadic(_) => CoeffKind::Dyadic,
            Coefficient::Mod2(_) => CoeffKind::Mod2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Int(v) => v.is_zero(),
            Coefficient::Dyadic(d) => d.num.is_zero(),
            Coefficient::Mod2(b) => !*b,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Int(v) => v.is_one(),
            Coefficient::Dyadic(d) => d.exp == 0 && d.num.is_one(),
            Coefficient::Mod2(b) => *b,
        }
    }

    /// True for negative integers and dyadics; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Int(v) => v.is_negative(),
            Coefficient::Dyadic(d) => d.num.is_negative(),
            Coefficient::Mod2(_) => false,
        }
    }

    /// Dyadic exponent of the value; integers and residues report 0.
    pub fn dyadic_exponent(&self) -> u64 {
        match self {
            Coefficient::Dyadic(d) => d.exp,
            _ => 0,
        }
    }

    pub fn checked_add(&self, other: &Coefficient) -> Result<Coefficient, ScalarError> {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => Ok(Coefficient::Int(a + b)),
            (Coefficient::Dyadic(a), Coefficient::Dyadic(b)) => Ok(Coefficient::Dyadic(a.add(b))),
            (Coefficient::Mod2(a), Coefficient::Mod2(b)) => Ok(Coefficient::Mod2(a ^ b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Coefficient) -> Result<Coefficient, ScalarError> {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => Ok(Coefficient::Int(a * b)),
            (Coefficient::Dyadic(a), Coefficient::Dyadic(b)) => Ok(Coefficient::Dyadic(a.mul(b))),
            (Coefficient::Mod2(a), Coefficient::Mod2(b)) => Ok(Coefficient::Mod2(a & b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Int(a) => Coefficient::Int(-a),
            Coefficient::Dyadic(d) => Coefficient::Dyadic(Dyadic { num: -&d.num, exp: d.exp }),
            Coefficient::Mod2(b) => Coefficient::Mod2(*b),
        }
    }

    /// In-place `self += other`; panics on a variant mismatch.
    pub(crate) fn add_assign_same(&mut self, other: &Coefficient) {
        match (&mut *self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => *a += b,
            (Coefficient::Mod2(a), Coefficient::Mod2(b)) => *a ^= *b,
            _ => {
                *self = self.checked_add(other).expect("coefficient variants agree");
            }
        }
    }

    /// Product that panics on a variant mismatch. Callers guarantee agreement.
    pub(crate) fn mul_same(&self, other: &Coefficient) -> Coefficient {
        self.checked_mul(other).expect("coefficient variants agree")
    }

    /// Reinterprets the value in another ring along Z -> Z[1/2] and Z -> Z/2.
    pub fn convert(&self, kind: CoeffKind) -> Result<Coefficient, ScalarError> {
        match (self, kind) {
            (c, k) if c.kind() == k => Ok(c.clone()),
            (Coefficient::Int(v), k) => Ok(Coefficient::from_int(k, v.clone())),
            (Coefficient::Dyadic(d), k) => {
                if d.exp == 0 {
                    Ok(Coefficient::from_int(k, d.num.clone()))
                } else {
                    Err(ScalarError::NotIntegral)
                }
            }
            (Coefficient::Mod2(_), _) => Err(ScalarError::NoLift),
        }
    }

    /// Integer value, when the scalar is an integer or an integral dyadic.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Coefficient::Int(v) => Some(v.clone()),
            Coefficient::Dyadic(d) if d.exp == 0 => Some(d.num.clone()),
            _ => None,
        }
    }

    fn mismatch(&self, other: &Coefficient) -> ScalarError {
        ScalarError::VariantMismatch { left: self.kind(), right: other.kind() }
    }

    /// Writes the absolute value without the mod 2 suffix; used inside
    /// polynomial text where the ring is implied.
    pub(crate) fn fmt_magnitude(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Int(v) => write!(f, "{}", v.abs()),
            Coefficient::Dyadic(d) if d.exp == 0 => write!(f, "{}", d.num.abs()),
            Coefficient::Dyadic(d) => write!(f, "{}/2^{}", d.num.abs(), d.exp),
            Coefficient::Mod2(b) => f.write_str(if *b { "1" } else { "0" }),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Int(v) => write!(f, "{v}"),
            Coefficient::Dyadic(d) if d.exp == 0 => write!(f, "{}", d.num),
            Coefficient::Dyadic(d) => write!(f, "{}/2^{}", d.num, d.exp),
            Coefficient::Mod2(false) => f.write_str("0"),
            Coefficient::Mod2(true) => f.write_str("1 (mod 2)"),
        }
    }
}
