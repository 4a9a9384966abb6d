use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::elliptic::{jacobi, ModulusParam};
use crate::error::{Error, Result};

pub type Rational = Rational64;

/// Whether `a` and `b` are both integers or both half-odd-integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Integer,
    HalfInteger,
}

/// Parameters of the associated Lamé potential
/// `V(x) = a(a+1) m sn²x + b(b+1) m cn²x/dn²x`, plus an additive constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    #[serde(serialize_with = "ser_rational")]
    a: Rational,
    #[serde(serialize_with = "ser_rational")]
    b: Rational,
    m: ModulusParam,
    shift: f64,
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn is_half_step(r: Rational) -> bool {
    (r * 2).is_integer()
}

pub(crate) fn to_f64(r: Rational) -> f64 {
    r.to_f64().expect("rational with i64 parts is representable")
}

impl PotentialParams {
    /// Validates `a >= b > 0`, each a multiple of 1/2, both of the same
    /// kind. The mixed case gets its own error.
    pub fn new(a: Rational, b: Rational, m: f64, shift: f64) -> Result<Self> {
        let m = ModulusParam::new(m)?;
        if !shift.is_finite() {
            return Err(Error::InvalidParams(format!("shift {shift} is not finite")));
        }
        if !is_half_step(a) || !is_half_step(b) {
            return Err(Error::InvalidParams(format!(
                "a = {a} and b = {b} must be integers or half-integers"
            )));
        }
        if !b.is_positive() {
            return Err(Error::InvalidParams(format!("b = {b} must be positive")));
        }
        if a < b {
            return Err(Error::InvalidParams(format!("a = {a} must not be smaller than b = {b}")));
        }
        if a.is_integer() != b.is_integer() {
            return Err(Error::MixedCase {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok(Self { a, b, m, shift })
    }

    pub fn a(&self) -> Rational {
        self.a
    }

    pub fn b(&self) -> Rational {
        self.b
    }

    pub fn m(&self) -> ModulusParam {
        self.m
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn with_shift(self, shift: f64) -> Self {
        Self { shift, ..self }
    }

    pub fn kind(&self) -> ParamKind {
        if self.a.is_integer() {
            ParamKind::Integer
        } else {
            ParamKind::HalfInteger
        }
    }

    /// `a(a+1)` as a float.
    pub fn a_strength(&self) -> f64 {
        to_f64(self.a * (self.a + Rational::one()))
    }

    /// `b(b+1)` as a float.
    pub fn b_strength(&self) -> f64 {
        to_f64(self.b * (self.b + Rational::one()))
    }

    /// Both roots `λ1 ∈ {a+1, -a}` of the large-t balance. Only the first
    /// generates solution families; the second corresponds to the
    /// relabeling `a → -a-1, b → -b-1`.
    pub fn lambda1_branches(&self) -> [Rational; 2] {
        [self.a + Rational::one(), -self.a]
    }

    /// Potential value including the shift.
    pub fn potential(&self, x: f64) -> f64 {
        let t = jacobi(x, self.m);
        let mv = self.m.value();
        self.a_strength() * mv * t.sn * t.sn
            + self.b_strength() * mv * t.cn * t.cn / (t.dn * t.dn)
            + self.shift
    }
}

/// Parses `"7/2"`, `"-3"` or `"2"`; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParams(format!("'{s}' is not an integer or p/q rational"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}
