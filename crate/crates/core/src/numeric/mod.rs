//! Numeric evaluation of the formulas on derivative jets, built-in implicit
//! problems, and a finite-difference harness around a Newton solver.

mod eval;
mod jet;
mod problems;

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub use eval::{
    eval_any, eval_delta, eval_delta_block, eval_elementary, eval_formula, AnyReport, Comparison,
    Contribution, EvalReport,
};
pub use jet::{random_rational_jet, shift_jet, AnyJet, Jet, JetDoc};
pub use problems::{
    builtin_problem, finite_difference_derivatives, newton_solve, FdConfig, ProblemSpec,
    PROBLEM_NAMES,
};

/// Scalars a jet may carry: binary64 or exact rationals.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq {
    const KIND: &'static str;

    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_value(&self) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    /// Whether `f(x0, y0)` counts as zero for this kind.
    fn vanishes(&self) -> bool;
}

impl Scalar for f64 {
    const KIND: &'static str = "float";

    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("{n} is not a binary64 value"))),
            Value::String(_) => Err(Error::MixedKinds),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn vanishes(&self) -> bool {
        self.abs() <= 1e-12
    }
}

impl Scalar for BigRational {
    const KIND: &'static str = "rational";

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => BigRational::from_str(s.trim())
                .map_err(|e| Error::Parse(format!("rational {s:?}: {e}"))),
            Value::Number(n) if n.is_i64() || n.is_u64() => BigInt::from_str(&n.to_string())
                .map(BigRational::from_integer)
                .map_err(|e| Error::Parse(e.to_string())),
            Value::Number(_) => Err(Error::MixedKinds),
            other => Err(Error::Parse(format!(
                "expected a rational string, got {other}"
            ))),
        }
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// `|a - b| / |b|`, or `|a - b|` when `b = 0`.
pub fn relative_error<S: Scalar>(a: &S, b: &S) -> f64 {
    let diff = (a.clone() - b.clone()).abs_value();
    if b.is_zero() {
        diff.to_f64()
    } else {
        (diff / b.abs_value()).to_f64()
    }
}
