//! Exact combinatorial coefficients.
//!
//! `C_α = (Σ l·m)! (Σ r·m)! / ∏ l!^m r!^m m!` counts the ways to place
//! `n` marked blue balls and `h - 1` marked red balls into `h` identical
//! boxes with `m_{l,r}` boxes holding `l` blue and `r` red balls. `D_γ` is the
//! same expression over `B_n`. Both are computed as rationals and then
//! checked to be integers.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{
    self, enumerate_z, is_in_a, predecessors, Multiplicities, PredecessorKind, PredecessorRecord,
};

const FACTORIAL_TABLE: usize = 256;

fn factorial_table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE);
        t.push(BigUint::one());
        for k in 1..FACTORIAL_TABLE {
            let next = &t[k - 1] * BigUint::from(k);
            t.push(next);
        }
        t
    })
}

pub fn factorial(k: u64) -> BigUint {
    let table = factorial_table();
    match table.get(k as usize) {
        Some(v) => v.clone(),
        None => {
            let mut acc = table[FACTORIAL_TABLE - 1].clone();
            for i in FACTORIAL_TABLE as u64..=k {
                acc *= BigUint::from(i);
            }
            acc
        }
    }
}

/// `binom(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < 0 || b > a {
        return BigUint::zero();
    }
    let (a, b) = (a as u64, b as u64);
    factorial(a) / (factorial(b) * factorial(a - b))
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn integral(q: BigRational, what: &str, of: &Multiplicities) -> Result<BigUint> {
    if !q.is_integer() {
        return Err(Error::Internal(format!(
            "{what} of {of} is {q}, not an integer"
        )));
    }
    q.to_integer()
        .to_biguint()
        .ok_or_else(|| Error::Internal(format!("{what} of {of} is negative")))
}

fn box_count(m: &Multiplicities) -> BigRational {
    let mut den = BigUint::one();
    for (k, c) in m.iter() {
        let per_box = factorial(k.l as u64) * factorial(k.r as u64);
        den *= num_traits::pow(per_box, c as usize) * factorial(c as u64);
    }
    ratio(factorial(m.sum_l()) * factorial(m.sum_r()), den)
}

/// `C_α`. Every key must satisfy `l + r >= 2`.
pub fn coeff_c(alpha: &Multiplicities) -> Result<BigUint> {
    if let Some(k) = alpha.keys().find(|k| k.weight() < 2) {
        return Err(Error::Domain(format!(
            "C_α needs l + r >= 2, found key {k}"
        )));
    }
    integral(box_count(alpha), "C", alpha)
}

/// `D_γ`. Keys `(0,0)` and `(0,1)` are not allowed; `(1,0)` is.
pub fn coeff_d(gamma: &Multiplicities) -> Result<BigUint> {
    if gamma.contains((0, 0)) || gamma.contains((0, 1)) {
        return Err(Error::Domain(format!(
            "D_γ cannot carry (0,0) or (0,1): {gamma}"
        )));
    }
    integral(box_count(gamma), "D", gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^k`.
    pub fn parity(k: u64) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// `±magnitude` with `magnitude >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedCoefficient {
    pub sign: Sign,
    pub magnitude: BigUint,
}

impl SignedCoefficient {
    pub fn to_bigint(&self) -> BigInt {
        let sign = match self.sign {
            Sign::Plus => BigSign::Plus,
            Sign::Minus => BigSign::Minus,
        };
        BigInt::from_biguint(sign, self.magnitude.clone())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.to_bigint())
    }
}

impl fmt::Display for SignedCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "+{}", self.magnitude),
            Sign::Minus => write!(f, "-{}", self.magnitude),
        }
    }
}

/// `(-1)^h C_α`, the coefficient of the `α` term of `y^{(n)}`.
pub fn signed_coeff(alpha: &Multiplicities) -> Result<SignedCoefficient> {
    let n = alpha.sum_l() as u32;
    if !is_in_a(alpha, n) {
        return Err(Error::Domain(format!("{alpha} is not in any A_n")));
    }
    Ok(SignedCoefficient {
        sign: Sign::parity(alpha.total()),
        magnitude: coeff_c(alpha)?,
    })
}

/// Positive weight attached to a predecessor in the recursion for `C_β`.
///
/// minus at pivot `(l,r)`: `μ_{l-1,r} + 1`;
/// b at pivot `(l,r)`: `(l+1)(μ_{l+1,r-1} + 1)`;
/// d: `2μ_{2,0} + Σ r·μ`.
pub fn recursion_weight(beta: &Multiplicities, rec: &PredecessorRecord) -> BigUint {
    let w: u64 = match (rec.kind, rec.pivot) {
        (PredecessorKind::Minus, Some(p)) => beta.get((p.l - 1, p.r)) as u64 + 1,
        (PredecessorKind::B, Some(p)) => {
            (p.l as u64 + 1) * (beta.get((p.l + 1, p.r - 1)) as u64 + 1)
        }
        (PredecessorKind::D, None) => 2 * beta.get((2, 0)) as u64 + beta.sum_r(),
        _ => 0,
    };
    BigUint::from(w)
}

/// Sign with which a predecessor enters the recursion for the signed
/// coefficients `c_β`: `+` for minus, `-` for b and d.
pub fn recursion_sign(kind: PredecessorKind) -> Sign {
    match kind {
        PredecessorKind::Minus => Sign::Plus,
        PredecessorKind::B | PredecessorKind::D => Sign::Minus,
    }
}

/// `C_β` rebuilt from the `C` values of its predecessors in `A_n`.
pub fn c_from_predecessors(
    beta: &Multiplicities,
    n_plus_1: u32,
    c_of: &mut dyn FnMut(&Multiplicities) -> Result<BigUint>,
) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for rec in predecessors(beta, n_plus_1)? {
        total += recursion_weight(beta, &rec) * c_of(&rec.predecessor)?;
    }
    Ok(total)
}

/// Signed `c_β` rebuilt from signed predecessor coefficients.
pub fn signed_c_from_predecessors(
    beta: &Multiplicities,
    n_plus_1: u32,
    c_of: &mut dyn FnMut(&Multiplicities) -> Result<BigInt>,
) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for rec in predecessors(beta, n_plus_1)? {
        let term = BigInt::from(recursion_weight(beta, &rec)) * c_of(&rec.predecessor)?;
        match recursion_sign(rec.kind) {
            Sign::Plus => total += term,
            Sign::Minus => total -= term,
        }
    }
    Ok(total)
}

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub n: u32,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, n: u32) -> Self {
        VerificationReport {
            name: name.into(),
            n,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

/// For every `β ∈ A_{n+1}`: rebuilds `C_β` from `C` over `A_n`, and the
/// signed `(-1)^h C_β` from the signed values, and compares both with the
/// closed form.
pub fn verify_c_recursion(n: u32) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "recursion check needs n >= 2, got {n}"
        )));
    }
    let mut report = VerificationReport::new("c_recursion", n);
    for beta in partitions::enumerate_a(n + 1)? {
        let direct = coeff_c(&beta)?;
        let rebuilt = c_from_predecessors(&beta, n + 1, &mut |a| coeff_c(a))?;
        report.check(rebuilt == direct, || {
            format!("C{beta}: closed form {direct}, recursion {rebuilt}")
        });

        let direct_signed = signed_coeff(&beta)?.to_bigint();
        let rebuilt_signed =
            signed_c_from_predecessors(&beta, n + 1, &mut |a| Ok(signed_coeff(a)?.to_bigint()))?;
        report.check(rebuilt_signed == direct_signed, || {
            format!("c{beta}: closed form {direct_signed}, signed recursion {rebuilt_signed}")
        });
    }
    Ok(report)
}

/// `Σ_{Z_γ} ∏ s_{p,t}! ∏_j binom(t,j)^{q_{p,t,j}} / q_{p,t,j}!`.
///
/// Only keys with `p + t >= 2` of `gamma` take part.
pub fn zgamma_sum(gamma: &Multiplicities, s10: u32) -> BigRational {
    let box_factor: BigUint = gamma
        .iter()
        .filter(|(k, _)| k.weight() >= 2)
        .map(|(_, s)| factorial(s as u64))
        .product();
    let mut sum = BigRational::zero();
    for system in enumerate_z(gamma, s10) {
        let mut num = box_factor.clone();
        let mut den = BigUint::one();
        for (&(key, j), &q) in &system {
            num *= num_traits::pow(binomial(key.r as i64, j as i64), q as usize);
            den *= factorial(q as u64);
        }
        sum += ratio(num, den);
    }
    sum
}

/// `Σ t·s` over keys with `p + t >= 2`, i.e. `k - 1` for `γ ∈ B_{n,k}`.
pub fn red_total(gamma: &Multiplicities) -> u64 {
    gamma
        .iter()
        .filter(|(k, _)| k.weight() >= 2)
        .map(|(k, s)| k.r as u64 * s as u64)
        .sum()
}

/// For every `γ ∈ B_n` and every `0 <= s10 <= Σ t·s`, checks
/// `zgamma_sum(γ, s10) == binom(Σ t·s, s10)`.
pub fn verify_zgamma_identity(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("zgamma_binomial", n);
    for gamma in partitions::enumerate_b(n)? {
        let reds = red_total(&gamma);
        for s10 in 0..=reds {
            let lhs = zgamma_sum(&gamma, s10 as u32);
            let rhs = ratio(binomial(reds as i64, s10 as i64), BigUint::one());
            report.check(lhs == rhs, || {
                format!("Z{gamma}, s10={s10}: {lhs} != {rhs}")
            });
        }
    }
    Ok(report)
}
