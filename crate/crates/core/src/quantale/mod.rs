//! Commutative quantales with exact arithmetic.
//!
//! Every operation checks that its arguments carry the payload of the
//! quantale it is called on; the `*_raw` variants skip that check and are
//! used in inner loops over already validated relations.

mod rational;
mod step;

use std::fmt;
use std::str::FromStr;

pub use rational::{ParseRationalError, Rational};
pub use step::StepFunction;

use crate::error::{Error, Result};

/// Extended rationals `[-∞, ∞]` in their numeric order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl Ext {
    pub fn int(n: i64) -> Self {
        Ext::Fin(Rational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Ext::Fin(Rational::new(n, d))
    }

    /// Sum where `+∞` absorbs everything, then `-∞`.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            (Ext::NegInf, _) | (_, Ext::NegInf) => Ext::NegInf,
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Fin(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Ext {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Ext::PosInf),
            "-inf" => Ok(Ext::NegInf),
            t => t
                .parse::<Rational>()
                .map(Ext::Fin)
                .map_err(|e| Error::Range(e.to_string())),
        }
    }
}

/// Continuous t-norms on `[0,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TNorm {
    Product,
    Minimum,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Product, TNorm::Minimum, TNorm::Lukasiewicz];

    pub fn apply(&self, a: &Rational, b: &Rational) -> Rational {
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.clone().min(b.clone()),
            TNorm::Lukasiewicz => (&(a + b) - &Rational::one()).max(Rational::zero()),
        }
    }

    /// `a ⊸ b = sup { c : a & c ≤ b }`.
    pub fn residual(&self, a: &Rational, b: &Rational) -> Rational {
        if a <= b {
            return Rational::one();
        }
        match self {
            TNorm::Product => b / a,
            TNorm::Minimum => b.clone(),
            TNorm::Lukasiewicz => &(&Rational::one() - a) + b,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TNorm::Product => "product",
            TNorm::Minimum => "min",
            TNorm::Lukasiewicz => "luk",
        }
    }
}

impl FromStr for TNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "product" | "prod" | "x" => Ok(TNorm::Product),
            "min" | "minimum" => Ok(TNorm::Minimum),
            "luk" | "lukasiewicz" => Ok(TNorm::Lukasiewicz),
            other => Err(Error::Unsupported(format!("unknown t-norm `{other}`"))),
        }
    }
}

/// The supported quantale families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantale {
    /// Two-element Boolean algebra with `∧`.
    Bool2,
    /// `[0,∞]` ordered by `≥`, tensor `+`.
    Lawvere,
    /// `[-∞,∞]` ordered by `≥`, tensor `+` with `+∞` absorbing.
    ExtendedReal,
    /// `[0,1]` in its natural order with a t-norm.
    UnitInterval(TNorm),
    /// Distance distribution functions under convolution of a t-norm.
    Delta(TNorm),
}

/// An element of some quantale.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QValue {
    Bool(bool),
    Real(Ext),
    Unit(Rational),
    Step(StepFunction),
}

impl QValue {
    pub fn int(n: i64) -> Self {
        QValue::Real(Ext::int(n))
    }

    pub fn inf() -> Self {
        QValue::Real(Ext::PosInf)
    }

    pub fn unit(n: i64, d: i64) -> Self {
        QValue::Unit(Rational::new(n, d))
    }

    pub fn as_step(&self) -> Option<&StepFunction> {
        match self {
            QValue::Step(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ext(&self) -> Option<&Ext> {
        match self {
            QValue::Real(e) => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Bool(true) => write!(f, "T"),
            QValue::Bool(false) => write!(f, "F"),
            QValue::Real(e) => write!(f, "{e}"),
            QValue::Unit(r) => write!(f, "{r}"),
            QValue::Step(s) => write!(f, "{s}"),
        }
    }
}

impl Quantale {
    /// The families exercised by default in randomised suites.
    pub fn all() -> Vec<Quantale> {
        let mut v = vec![Quantale::Bool2, Quantale::Lawvere, Quantale::ExtendedReal];
        v.extend(TNorm::ALL.iter().map(|t| Quantale::UnitInterval(*t)));
        v.extend(TNorm::ALL.iter().map(|t| Quantale::Delta(*t)));
        v
    }

    pub fn contains(&self, v: &QValue) -> bool {
        match (self, v) {
            (Quantale::Bool2, QValue::Bool(_)) => true,
            (Quantale::Lawvere, QValue::Real(Ext::PosInf)) => true,
            (Quantale::Lawvere, QValue::Real(Ext::Fin(r))) => !r.is_negative(),
            (Quantale::ExtendedReal, QValue::Real(_)) => true,
            (Quantale::UnitInterval(_), QValue::Unit(r)) => !r.is_negative() && *r <= Rational::one(),
            (Quantale::Delta(_), QValue::Step(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, v: &QValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Mismatch { quantale: self.to_string(), value: v.to_string() })
        }
    }

    /// True when the order is linear.
    pub fn is_chain(&self) -> bool {
        !matches!(self, Quantale::Delta(_))
    }

    /// True when the unit is the top element.
    pub fn is_integral(&self) -> bool {
        !matches!(self, Quantale::ExtendedReal)
    }

    pub fn is_commutative(&self) -> bool {
        true
    }

    pub fn bottom(&self) -> QValue {
        match self {
            Quantale::Bool2 => QValue::Bool(false),
            Quantale::Lawvere | Quantale::ExtendedReal => QValue::Real(Ext::PosInf),
            Quantale::UnitInterval(_) => QValue::Unit(Rational::zero()),
            Quantale::Delta(_) => QValue::Step(StepFunction::bottom()),
        }
    }

    pub fn top(&self) -> QValue {
        match self {
            Quantale::Bool2 => QValue::Bool(true),
            Quantale::Lawvere => QValue::int(0),
            Quantale::ExtendedReal => QValue::Real(Ext::NegInf),
            Quantale::UnitInterval(_) => QValue::Unit(Rational::one()),
            Quantale::Delta(_) => QValue::Step(StepFunction::unit()),
        }
    }

    /// The tensor unit `k`.
    pub fn unit(&self) -> QValue {
        match self {
            Quantale::Bool2 => QValue::Bool(true),
            Quantale::Lawvere | Quantale::ExtendedReal => QValue::int(0),
            Quantale::UnitInterval(_) => QValue::Unit(Rational::one()),
            Quantale::Delta(_) => QValue::Step(StepFunction::unit()),
        }
    }

    pub fn le(&self, a: &QValue, b: &QValue) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.le_raw(a, b))
    }

    pub fn join(&self, a: &QValue, b: &QValue) -> Result<QValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.join_raw(a, b))
    }

    pub fn meet(&self, a: &QValue, b: &QValue) -> Result<QValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet_raw(a, b))
    }

    /// Join of a finite family; the empty join is `⊥`.
    pub fn join_all<'a>(&self, vs: impl IntoIterator<Item = &'a QValue>) -> Result<QValue> {
        let mut acc = self.bottom();
        for v in vs {
            self.check(v)?;
            acc = self.join_raw(&acc, v);
        }
        Ok(acc)
    }

    /// Meet of a finite family; the empty meet is `⊤`.
    pub fn meet_all<'a>(&self, vs: impl IntoIterator<Item = &'a QValue>) -> Result<QValue> {
        let mut acc = self.top();
        for v in vs {
            self.check(v)?;
            acc = self.meet_raw(&acc, v);
        }
        Ok(acc)
    }

    pub fn tensor(&self, a: &QValue, b: &QValue) -> Result<QValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.tensor_raw(a, b))
    }

    /// `x ⊸ z`, the largest `v` with `x ⊗ v ≤ z`.
    pub fn lhom(&self, x: &QValue, z: &QValue) -> Result<QValue> {
        self.check(x)?;
        self.check(z)?;
        Ok(self.lhom_raw(x, z))
    }

    /// `z ⟜ y`, the largest `v` with `v ⊗ y ≤ z`.
    pub fn rhom(&self, z: &QValue, y: &QValue) -> Result<QValue> {
        self.check(z)?;
        self.check(y)?;
        Ok(self.rhom_raw(z, y))
    }

    /// The way-below relation `u ≪ v`. Not available on distance distributions.
    pub fn totally_below(&self, u: &QValue, v: &QValue) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        match (u, v) {
            (QValue::Bool(_), QValue::Bool(v)) => Ok(*v),
            (QValue::Real(u), QValue::Real(v)) => Ok(u > v),
            (QValue::Unit(u), QValue::Unit(v)) => Ok(u < v),
            _ => Err(Error::NotImplemented(format!("totally-below on {self}"))),
        }
    }

    pub(crate) fn le_raw(&self, a: &QValue, b: &QValue) -> bool {
        match (a, b) {
            (QValue::Bool(a), QValue::Bool(b)) => !*a || *b,
            (QValue::Real(a), QValue::Real(b)) => a >= b,
            (QValue::Unit(a), QValue::Unit(b)) => a <= b,
            (QValue::Step(a), QValue::Step(b)) => a.le(b),
            _ => unreachable!("unchecked mismatch in {self}"),
        }
    }

    pub(crate) fn join_raw(&self, a: &QValue, b: &QValue) -> QValue {
        match (a, b) {
            (QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(*a || *b),
            (QValue::Real(a), QValue::Real(b)) => QValue::Real(a.clone().min(b.clone())),
            (QValue::Unit(a), QValue::Unit(b)) => QValue::Unit(a.clone().max(b.clone())),
            (QValue::Step(a), QValue::Step(b)) => QValue::Step(a.join(b)),
            _ => unreachable!("unchecked mismatch in {self}"),
        }
    }

    /// `acc := acc ∨ v` without cloning on chains.
    pub(crate) fn join_assign(&self, acc: &mut QValue, v: QValue) {
        let replace = match (&*acc, &v) {
            (QValue::Bool(a), QValue::Bool(b)) => *b && !*a,
            (QValue::Real(a), QValue::Real(b)) => b < a,
            (QValue::Unit(a), QValue::Unit(b)) => b > a,
            (QValue::Step(a), QValue::Step(b)) => {
                *acc = QValue::Step(a.join(b));
                false
            }
            _ => unreachable!("unchecked mismatch in {self}"),
        };
        if replace {
            *acc = v;
        }
    }

    pub(crate) fn meet_raw(&self, a: &QValue, b: &QValue) -> QValue {
        match (a, b) {
            (QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(*a && *b),
            (QValue::Real(a), QValue::Real(b)) => QValue::Real(a.clone().max(b.clone())),
            (QValue::Unit(a), QValue::Unit(b)) => QValue::Unit(a.clone().min(b.clone())),
            (QValue::Step(a), QValue::Step(b)) => QValue::Step(a.meet(b)),
            _ => unreachable!("unchecked mismatch in {self}"),
        }
    }

    pub(crate) fn join_all_raw<'a>(&self, vs: impl IntoIterator<Item = &'a QValue>) -> QValue {
        vs.into_iter().fold(self.bottom(), |acc, v| self.join_raw(&acc, v))
    }

    pub(crate) fn meet_all_raw<'a>(&self, vs: impl IntoIterator<Item = &'a QValue>) -> QValue {
        vs.into_iter().fold(self.top(), |acc, v| self.meet_raw(&acc, v))
    }

    pub(crate) fn tensor_raw(&self, a: &QValue, b: &QValue) -> QValue {
        match (self, a, b) {
            (_, QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(*a && *b),
            (_, QValue::Real(a), QValue::Real(b)) => QValue::Real(a.add(b)),
            (Quantale::UnitInterval(t), QValue::Unit(a), QValue::Unit(b)) => QValue::Unit(t.apply(a, b)),
            (Quantale::Delta(t), QValue::Step(a), QValue::Step(b)) => QValue::Step(a.tensor(b, *t)),
            _ => unreachable!("unchecked mismatch in {self}"),
        }
    }

    pub(crate) fn lhom_raw(&self, x: &QValue, z: &QValue) -> QValue {
        match (self, x, z) {
            (_, QValue::Bool(x), QValue::Bool(z)) => QValue::Bool(!*x || *z),
            (Quantale::Lawvere, QValue::Real(x), QValue::Real(z)) => QValue::Real(match (x, z) {
                (Ext::PosInf, _) => Ext::int(0),
                (_, Ext::PosInf) => Ext::PosInf,
                (Ext::Fin(x), Ext::Fin(z)) => Ext::Fin((z - x).max(Rational::zero())),
                _ => unreachable!("negative infinity in [0,inf]"),
            }),
            (Quantale::ExtendedReal, QValue::Real(x), QValue::Real(z)) => QValue::Real(match (x, z) {
                (Ext::PosInf, _) => Ext::NegInf,
                (Ext::NegInf, Ext::NegInf) => Ext::NegInf,
                (Ext::NegInf, _) => Ext::PosInf,
                (Ext::Fin(_), Ext::PosInf) => Ext::PosInf,
                (Ext::Fin(_), Ext::NegInf) => Ext::NegInf,
                (Ext::Fin(x), Ext::Fin(z)) => Ext::Fin(z - x),
            }),
            (Quantale::UnitInterval(t), QValue::Unit(x), QValue::Unit(z)) => QValue::Unit(t.residual(x, z)),
            (Quantale::Delta(t), QValue::Step(x), QValue::Step(z)) => QValue::Step(x.lhom(z, *t)),
            _ => unreachable!("unchecked mismatch in {self}"),
        }
    }

    pub(crate) fn rhom_raw(&self, z: &QValue, y: &QValue) -> QValue {
        self.lhom_raw(y, z)
    }

    /// Parses a literal of this quantale: `T`/`F`, `p/q`, `inf`, `-inf`, or
    /// `[(u1,p1),...]`.
    pub fn parse_value(&self, s: &str) -> Result<QValue> {
        let t = s.trim();
        let v = match self {
            Quantale::Bool2 => match t {
                "T" | "true" | "1" => QValue::Bool(true),
                "F" | "false" | "0" => QValue::Bool(false),
                _ => return Err(Error::Range(format!("`{t}` is not a Boolean literal"))),
            },
            Quantale::Lawvere | Quantale::ExtendedReal => QValue::Real(t.parse()?),
            Quantale::UnitInterval(_) => {
                QValue::Unit(t.parse().map_err(|e: ParseRationalError| Error::Range(e.to_string()))?)
            }
            Quantale::Delta(_) => QValue::Step(StepFunction::parse(t)?),
        };
        self.check(&v).map_err(|_| Error::Range(format!("`{t}` is outside {self}")))?;
        Ok(v)
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantale::Bool2 => write!(f, "bool"),
            Quantale::Lawvere => write!(f, "lawvere"),
            Quantale::ExtendedReal => write!(f, "extreal"),
            Quantale::UnitInterval(t) => write!(f, "unit({})", t.name()),
            Quantale::Delta(t) => write!(f, "delta({})", t.name()),
        }
    }
}

impl FromStr for Quantale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let with_tnorm = |prefix: &str| {
            t.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .map(str::parse::<TNorm>)
        };
        match t {
            "bool" | "bool2" | "2" => Ok(Quantale::Bool2),
            "lawvere" => Ok(Quantale::Lawvere),
            "extreal" | "extended" => Ok(Quantale::ExtendedReal),
            _ => {
                if let Some(tn) = with_tnorm("unit") {
                    Ok(Quantale::UnitInterval(tn?))
                } else if let Some(tn) = with_tnorm("delta") {
                    Ok(Quantale::Delta(tn?))
                } else {
                    Err(Error::Unsupported(format!("unknown quantale `{t}`")))
                }
            }
        }
    }
}
