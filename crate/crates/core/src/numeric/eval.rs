use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow;
use serde_json::{json, Value};

use super::{relative_error, AnyJet, Jet, Scalar};
use crate::coeffs::binomial;
use crate::error::{Error, Result};
use crate::formula::{
    delta_formula, elementary_formula, DeltaFormula, ElemFormula, Format, Formula,
};

/// `Δ_l f_{y^r} = Σ_j (-1)^j binom(l,j) f_{x^{l-j} y^{r+j}} f_x^j f_y^{l-j}` at the base point.
pub fn eval_delta_block<S: Scalar>(jet: &Jet<S>, l: u32, r: u32) -> Result<S> {
    if l + r > jet.order() {
        return Err(Error::InsufficientOrder {
            need: l + r,
            have: jet.order(),
        });
    }
    let mut acc = S::zero();
    for j in 0..=l {
        let b = S::from_rational(&BigRational::from_integer(BigInt::from(binomial(
            l as i64, j as i64,
        ))));
        let term = b
            * jet.get(l - j, r + j)?.clone()
            * pow(jet.fx().clone(), j as usize)
            * pow(jet.fy().clone(), (l - j) as usize);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

fn check_order<S: Scalar>(jet: &Jet<S>, n: u32) -> Result<()> {
    if jet.order() < n {
        return Err(Error::InsufficientOrder {
            need: n,
            have: jet.order(),
        });
    }
    if jet.fy().is_zero() {
        return Err(Error::SingularJet);
    }
    Ok(())
}

fn delta_terms<S: Scalar>(f: &DeltaFormula, jet: &Jet<S>) -> Result<Vec<(String, S)>> {
    check_order(jet, f.n)?;
    let mut out = Vec::with_capacity(f.len());
    for (c, m) in f.terms() {
        let mut v = S::from_rational(c);
        for (k, e) in m.factors.iter() {
            v = v * pow(eval_delta_block(jet, k.l, k.r)?, e as usize);
        }
        v = v / pow(jet.fy().clone(), m.fy_power as usize);
        let label = Formula::from(DeltaFormula::from_terms(f.n, [(c.clone(), m.clone())]));
        out.push((label.render(Format::Plain), v));
    }
    Ok(out)
}

fn elementary_terms<S: Scalar>(f: &ElemFormula, jet: &Jet<S>) -> Result<Vec<(String, S)>> {
    check_order(jet, f.n)?;
    let mut out = Vec::with_capacity(f.len());
    for (c, m) in f.terms() {
        let mut v = S::from_rational(c);
        for (k, e) in m.exponents.iter() {
            v = v * pow(jet.get(k.l, k.r)?.clone(), e as usize);
        }
        v = v / pow(jet.fy().clone(), m.fy_power as usize);
        let label = Formula::from(ElemFormula::from_terms(f.n, [(c.clone(), m.clone())]));
        out.push((label.render(Format::Plain), v));
    }
    Ok(out)
}

fn total<S: Scalar>(terms: &[(String, S)]) -> S {
    terms.iter().fold(S::zero(), |acc, (_, v)| acc + v.clone())
}

/// Value of a Δ-form on a jet.
pub fn eval_delta<S: Scalar>(f: &DeltaFormula, jet: &Jet<S>) -> Result<S> {
    Ok(total(&delta_terms(f, jet)?))
}

/// Value of an elementary form on a jet.
pub fn eval_elementary<S: Scalar>(f: &ElemFormula, jet: &Jet<S>) -> Result<S> {
    Ok(total(&elementary_terms(f, jet)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contribution<S> {
    pub term: String,
    pub value: S,
}

/// A reference value and the relative error of the report's value against it.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub target: String,
    pub value: Value,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<S> {
    pub n: u32,
    pub form: &'static str,
    pub value: S,
    pub contributions: Vec<Contribution<S>>,
    pub comparisons: Vec<Comparison>,
}

impl<S: Scalar> EvalReport<S> {
    pub fn compare(&mut self, target: &str, reference: &S) {
        self.comparisons.push(Comparison {
            target: target.to_string(),
            value: reference.to_json(),
            rel_error: relative_error(&self.value, reference),
        });
    }

    pub fn compare_float(&mut self, target: &str, reference: f64) {
        self.comparisons.push(Comparison {
            target: target.to_string(),
            value: reference.to_json(),
            rel_error: relative_error(&self.value.to_f64(), &reference),
        });
    }

    pub fn comparison(&self, target: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.target == target)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "form": self.form,
            "kind": S::KIND,
            "value": self.value.to_json(),
            "value_f64": self.value.to_f64().to_json(),
            "contributions": self.contributions.iter().map(|c| json!({
                "term": c.term,
                "value": c.value.to_json(),
            })).collect::<Vec<_>>(),
            "comparisons": self.comparisons.iter().map(|c| json!({
                "target": c.target,
                "value": c.value,
                "rel_error": c.rel_error,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates `F` on the jet and cross-checks it against the other formula
/// shape for the same order.
pub fn eval_formula<S: Scalar>(f: &Formula, jet: &Jet<S>) -> Result<EvalReport<S>> {
    let (terms, other) = match f {
        Formula::Delta(d) => {
            let terms = delta_terms(d, jet)?;
            let other = eval_elementary(&elementary_formula(d.n)?, jet)?;
            (terms, Some(("elementary", other)))
        }
        Formula::Elementary(e) => {
            let terms = elementary_terms(e, jet)?;
            let other = if e.n >= 2 {
                Some(("delta", eval_delta(&delta_formula(e.n)?, jet)?))
            } else {
                None
            };
            (terms, other)
        }
        Formula::Inverse(_) => {
            return Err(Error::Domain(
                "the inverse-function form is written over g, not over a jet of f".into(),
            ))
        }
    };
    let mut report = EvalReport {
        n: f.n(),
        form: f.form_name(),
        value: total(&terms),
        contributions: terms
            .into_iter()
            .map(|(term, value)| Contribution { term, value })
            .collect(),
        comparisons: Vec::new(),
    };
    if let Some((target, v)) = other {
        report.compare(target, &v);
    }
    Ok(report)
}

/// An [`EvalReport`] of either scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyReport {
    Float(EvalReport<f64>),
    Rational(EvalReport<BigRational>),
}

impl AnyReport {
    pub fn to_json(&self) -> Value {
        match self {
            AnyReport::Float(r) => r.to_json(),
            AnyReport::Rational(r) => r.to_json(),
        }
    }

    pub fn value_f64(&self) -> f64 {
        match self {
            AnyReport::Float(r) => r.value,
            AnyReport::Rational(r) => r.value.to_f64(),
        }
    }

    pub fn comparison(&self, target: &str) -> Option<&Comparison> {
        match self {
            AnyReport::Float(r) => r.comparison(target),
            AnyReport::Rational(r) => r.comparison(target),
        }
    }

    pub fn comparisons(&self) -> &[Comparison] {
        match self {
            AnyReport::Float(r) => &r.comparisons,
            AnyReport::Rational(r) => &r.comparisons,
        }
    }

    pub fn compare_float(&mut self, target: &str, reference: f64) {
        match self {
            AnyReport::Float(r) => r.compare_float(target, reference),
            AnyReport::Rational(r) => r.compare_float(target, reference),
        }
    }
}

/// [`eval_formula`] on a jet of either kind.
pub fn eval_any(f: &Formula, jet: &AnyJet) -> Result<AnyReport> {
    match jet {
        AnyJet::Float(j) => eval_formula(f, j).map(AnyReport::Float),
        AnyJet::Rational(j) => eval_formula(f, j).map(AnyReport::Rational),
    }
}
