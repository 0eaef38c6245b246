//! Ground-truth generator for implicit derivatives.
//!
//! `y^{(n)}` is produced by literally differentiating `y' = -f_x/f_y` with
//! the total-derivative rule `d/dx g = g_x - g_y f_x / f_y`, keeping every
//! intermediate as `P / f_y^k` with `P` a polynomial in formal partials.
//! Nothing here knows about vector partitions or combinatorial coefficients;
//! that independence is what makes it useful as a check.

use std::collections::BTreeMap;
use std::fmt;

use implicit_jet_symbolic::{ElemFormula, ElemMonomial, Multiplicities, VectorKey};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest order accepted by [`oracle_formula`].
pub const MAX_N: u32 = 30;

const FX: VectorKey = VectorKey::new(1, 0);
const FY: VectorKey = VectorKey::new(0, 1);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("derivative order {n} outside 1..={max}")]
    OutOfRange { n: u32, max: u32 },
    #[error("term {0} keeps a positive power of f_y after reduction")]
    NotReducible(String),
}

/// `P / f_y^k` over formal partials `f_{x^p y^t}`.
///
/// Canonical form: no zero coefficients, and `f_y` is cancelled between
/// numerator and denominator as far as every numerator term allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    numer: BTreeMap<Multiplicities, BigRational>,
    fy_den: u32,
}

impl PolyExpr {
    pub fn zero() -> Self {
        PolyExpr {
            numer: BTreeMap::new(),
            fy_den: 0,
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut e = PolyExpr::zero();
        if !c.is_zero() {
            e.numer.insert(Multiplicities::new(), c);
        }
        e
    }

    /// The formal partial `f_{x^p y^t}`.
    pub fn partial(p: u32, t: u32) -> Self {
        let mut e = PolyExpr::zero();
        e.numer.insert(
            Multiplicities::from_pairs([((p, t), 1)]),
            BigRational::one(),
        );
        e.canonicalize();
        e
    }

    /// `y' = -f_x / f_y`.
    pub fn first_derivative() -> Self {
        let mut e = PolyExpr::zero();
        e.numer
            .insert(Multiplicities::from_pairs([(FX, 1)]), -BigRational::one());
        e.fy_den = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn fy_den(&self) -> u32 {
        self.fy_den
    }

    pub fn numerator(&self) -> impl Iterator<Item = (&Multiplicities, &BigRational)> {
        self.numer.iter()
    }

    pub fn scale(&self, a: &BigRational) -> Self {
        let mut e = PolyExpr {
            numer: self.numer.iter().map(|(m, c)| (m.clone(), c * a)).collect(),
            fy_den: self.fy_den,
        };
        e.canonicalize();
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.fy_den.max(other.fy_den);
        let mut numer = BTreeMap::new();
        for e in [self, other] {
            let lift = den - e.fy_den;
            for (m, c) in &e.numer {
                let mut m = m.clone();
                m.add(FY, lift);
                accumulate(&mut numer, m, c.clone());
            }
        }
        let mut e = PolyExpr { numer, fy_den: den };
        e.canonicalize();
        e
    }

    /// `d/dx` along the implicit curve.
    ///
    /// Each partial `f_{p,t}` maps to `(f_{p+1,t} f_y - f_{p,t+1} f_x) / f_y`,
    /// so with `D(P) = Q / f_y` the quotient rule gives
    /// `d(P/f_y^k) = (Q f_y - k P (f_xy f_y - f_yy f_x)) / f_y^{k+2}`.
    pub fn total_derivative(&self) -> Self {
        let k = self.fy_den;
        let mut numer: BTreeMap<Multiplicities, BigRational> = BTreeMap::new();
        for (mono, c) in &self.numer {
            // Q * f_y
            for (key, e) in mono.iter() {
                let mut rest = mono.clone();
                rest.decrement(key);
                let coef = c * BigRational::from_integer(BigInt::from(e));
                let mut a = rest.clone();
                a.increment((key.l + 1, key.r));
                a.add(FY, 2);
                accumulate(&mut numer, a, coef.clone());
                let mut b = rest;
                b.increment((key.l, key.r + 1));
                b.increment(FX);
                b.increment(FY);
                accumulate(&mut numer, b, -coef);
            }
            // - k P (f_xy f_y - f_yy f_x)
            if k > 0 {
                let kc = c * BigRational::from_integer(BigInt::from(k));
                let mut a = mono.clone();
                a.increment((1, 1));
                a.increment(FY);
                accumulate(&mut numer, a, -kc.clone());
                let mut b = mono.clone();
                b.increment((0, 2));
                b.increment(FX);
                accumulate(&mut numer, b, kc);
            }
        }
        let mut e = PolyExpr {
            numer,
            fy_den: k + 2,
        };
        e.canonicalize();
        e
    }

    fn canonicalize(&mut self) {
        self.numer.retain(|_, c| !c.is_zero());
        if self.numer.is_empty() {
            self.fy_den = 0;
            return;
        }
        let common = self
            .numer
            .keys()
            .map(|m| m.get(FY))
            .min()
            .unwrap_or(0)
            .min(self.fy_den);
        if common == 0 {
            return;
        }
        let numer = std::mem::take(&mut self.numer);
        for (mut m, c) in numer {
            m.set(FY, m.get(FY) - common);
            self.numer.insert(m, c);
        }
        self.fy_den -= common;
    }

    /// Splits into elementary terms, each with its own `f_y` denominator.
    pub fn to_elem_formula(&self, n: u32) -> Result<ElemFormula, OracleError> {
        let mut terms = Vec::with_capacity(self.numer.len());
        for (m, c) in &self.numer {
            let e = m.get(FY);
            if e > self.fy_den {
                return Err(OracleError::NotReducible(m.to_string()));
            }
            let mono = ElemMonomial::new(m.without(FY), self.fy_den - e)
                .ok_or_else(|| OracleError::NotReducible(m.to_string()))?;
            terms.push((c.clone(), mono));
        }
        Ok(ElemFormula::from_terms(n, terms))
    }
}

fn accumulate(
    into: &mut BTreeMap<Multiplicities, BigRational>,
    mono: Multiplicities,
    c: BigRational,
) {
    *into.entry(mono).or_insert_with(BigRational::zero) += c;
}

/// `y^{(n)}` in elementary form, by `n - 1` literal total derivatives.
pub fn oracle_formula(n: u32) -> Result<ElemFormula, OracleError> {
    if n == 0 || n > MAX_N {
        return Err(OracleError::OutOfRange { n, max: MAX_N });
    }
    let mut e = PolyExpr::first_derivative();
    for _ in 1..n {
        e = e.total_derivative();
    }
    e.to_elem_formula(n)
}

/// One monomial whose coefficient differs between two formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDiff {
    pub monomial: ElemMonomial,
    pub left: Option<BigRational>,
    pub right: Option<BigRational>,
}

impl fmt::Display for TermDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Option<BigRational>| c.as_ref().map_or("0".to_string(), |c| c.to_string());
        write!(
            f,
            "{} / f_y^{}: {} vs {}",
            self.monomial.exponents,
            self.monomial.fy_power,
            show(&self.left),
            show(&self.right)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaComparison {
    pub equal: bool,
    pub diffs: Vec<TermDiff>,
}

/// Exact comparison as maps `monomial -> coefficient`.
pub fn formulas_equal(a: &ElemFormula, b: &ElemFormula) -> FormulaComparison {
    let left = a.to_map();
    let right = b.to_map();
    let mut diffs = Vec::new();
    for (m, c) in &left {
        if right.get(m) != Some(c) {
            diffs.push(TermDiff {
                monomial: m.clone(),
                left: Some(c.clone()),
                right: right.get(m).cloned(),
            });
        }
    }
    for (m, c) in &right {
        if !left.contains_key(m) {
            diffs.push(TermDiff {
                monomial: m.clone(),
                left: None,
                right: Some(c.clone()),
            });
        }
    }
    FormulaComparison {
        equal: diffs.is_empty() && a.n == b.n,
        diffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn mono(pairs: &[((u32, u32), u32)], k: u32) -> ElemMonomial {
        ElemMonomial::new(Multiplicities::from_pairs(pairs.iter().copied()), k).unwrap()
    }

    #[test]
    fn constant_has_zero_derivative() {
        assert!(PolyExpr::constant(q(1)).total_derivative().is_zero());
    }

    #[test]
    fn derivative_of_fy() {
        // f_xy - f_yy f_x / f_y
        let d = PolyExpr::partial(0, 1).total_derivative();
        assert_eq!(d.fy_den(), 1);
        let got: Vec<_> = d
            .numerator()
            .map(|(m, c)| (m.to_string(), c.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("{(0,1):1, (1,1):1}".to_string(), q(1)),
                ("{(0,2):1, (1,0):1}".to_string(), q(-1)),
            ]
        );
    }

    #[test]
    fn second_derivative_matches_hand_expansion() {
        // (-f_xx f_y^2 + 2 f_xy f_x f_y - f_yy f_x^2) / f_y^3
        let f = oracle_formula(2).unwrap();
        let expected = ElemFormula::from_terms(
            2,
            [
                (q(-1), mono(&[((2, 0), 1)], 1)),
                (q(2), mono(&[((1, 1), 1), ((1, 0), 1)], 2)),
                (q(-1), mono(&[((0, 2), 1), ((1, 0), 2)], 3)),
            ],
        );
        assert!(formulas_equal(&f, &expected).equal);
    }

    #[test]
    fn third_derivative_term_count_and_sample() {
        let f = oracle_formula(3).unwrap();
        assert_eq!(f.len(), 9);
        // -6 f_xy^2 f_x / f_y^3
        assert_eq!(
            f.coefficient(&mono(&[((1, 1), 2), ((1, 0), 1)], 3)),
            Some(&q(-6))
        );
        // +9 f_xy f_yy f_x^2 / f_y^4
        assert_eq!(
            f.coefficient(&mono(&[((1, 1), 1), ((0, 2), 1), ((1, 0), 2)], 4)),
            Some(&q(9))
        );
    }

    #[test]
    fn degree_bookkeeping() {
        for n in 1..=6 {
            for (_, m) in oracle_formula(n).unwrap().terms() {
                assert_eq!(m.exponents.sum_l(), n as u64);
                assert_eq!(m.fy_power as u64, 1 + m.exponents.sum_r());
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            oracle_formula(0),
            Err(OracleError::OutOfRange { n: 0, max: MAX_N })
        );
        assert!(oracle_formula(MAX_N + 1).is_err());
    }

    #[test]
    fn comparison_reports_differences() {
        let a = oracle_formula(3).unwrap();
        let b = oracle_formula(2).unwrap();
        let cmp = formulas_equal(&a, &b);
        assert!(!cmp.equal);
        assert_eq!(cmp.diffs.len(), a.len() + b.len());
        assert!(formulas_equal(&a, &a).equal);
    }
}
