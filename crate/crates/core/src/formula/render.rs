use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{
    DeltaFormula, DeltaMonomial, ElemFormula, ElemMonomial, Formula, InverseFormula,
    InverseMonomial,
};
use crate::error::{Error, Result};
use crate::partitions::{Multiplicities, VectorKey};

/// Output format for [`Formula::render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Latex => "latex",
            Format::Json => "json",
        })
    }
}

/// JSON interchange document for all three formula shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaDoc {
    pub n: u32,
    pub form: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<ExponentDoc>>,
    pub fy_power: u32,
}

/// `(Δ_l f_{y^r})^power`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub l: u32,
    pub r: u32,
    pub power: u32,
}

/// `f_{x^p y^t}^power`; in the inverse form `p = 0` and `t = j` for `g^{(j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentDoc {
    pub p: u32,
    pub t: u32,
    pub power: u32,
}

impl Formula {
    pub fn to_doc(&self) -> FormulaDoc {
        let terms = match self {
            Formula::Delta(f) => f
                .terms()
                .iter()
                .map(|(c, m)| TermDoc {
                    coeff: c.to_string(),
                    factors: Some(
                        m.factors
                            .iter()
                            .map(|(k, e)| FactorDoc {
                                l: k.l,
                                r: k.r,
                                power: e,
                            })
                            .collect(),
                    ),
                    exponents: None,
                    fy_power: m.fy_power,
                })
                .collect(),
            Formula::Elementary(f) => f
                .terms()
                .iter()
                .map(|(c, m)| TermDoc {
                    coeff: c.to_string(),
                    factors: None,
                    exponents: Some(exponent_docs(&m.exponents)),
                    fy_power: m.fy_power,
                })
                .collect(),
            Formula::Inverse(f) => f
                .terms()
                .iter()
                .map(|(c, m)| TermDoc {
                    coeff: c.to_string(),
                    factors: None,
                    exponents: Some(
                        m.derivs
                            .iter()
                            .map(|(&t, &power)| ExponentDoc { p: 0, t, power })
                            .collect(),
                    ),
                    fy_power: m.g1_power,
                })
                .collect(),
        };
        FormulaDoc {
            n: self.n(),
            form: self.form_name().to_string(),
            terms,
        }
    }

    pub fn from_doc(doc: &FormulaDoc) -> Result<Formula> {
        let mut coeffs = Vec::with_capacity(doc.terms.len());
        for term in &doc.terms {
            let c = BigRational::from_str(term.coeff.trim())
                .map_err(|e| Error::Parse(format!("coefficient {:?}: {e}", term.coeff)))?;
            coeffs.push(c);
        }
        let pick = |term: &TermDoc, want_factors: bool| -> Result<()> {
            if term.factors.is_some() != want_factors || term.exponents.is_some() == want_factors {
                let (has, lacks) = if want_factors {
                    ("factors", "exponents")
                } else {
                    ("exponents", "factors")
                };
                return Err(Error::Parse(format!(
                    "{} terms carry {has} and no {lacks}",
                    doc.form
                )));
            }
            Ok(())
        };
        match doc.form.as_str() {
            "delta" => {
                let mut terms = Vec::new();
                for (term, c) in doc.terms.iter().zip(coeffs) {
                    pick(term, true)?;
                    let mut factors = Multiplicities::new();
                    for f in term.factors.as_deref().unwrap_or_default() {
                        if f.l + f.r < 2 || f.power == 0 {
                            return Err(Error::Parse(format!(
                                "invalid block ({},{})^{}",
                                f.l, f.r, f.power
                            )));
                        }
                        factors.add(VectorKey::new(f.l, f.r), f.power);
                    }
                    terms.push((
                        c,
                        DeltaMonomial {
                            factors,
                            fy_power: term.fy_power,
                        },
                    ));
                }
                Ok(DeltaFormula::from_terms(doc.n, terms).into())
            }
            "elementary" => {
                let mut terms = Vec::new();
                for (term, c) in doc.terms.iter().zip(coeffs) {
                    pick(term, false)?;
                    let mut exps = Multiplicities::new();
                    for e in term.exponents.as_deref().unwrap_or_default() {
                        if e.power == 0 {
                            return Err(Error::Parse(format!("zero power on ({},{})", e.p, e.t)));
                        }
                        exps.add(VectorKey::new(e.p, e.t), e.power);
                    }
                    let mono = ElemMonomial::new(exps, term.fy_power).ok_or_else(|| {
                        Error::Parse("elementary terms may not use (0,0) or (0,1)".into())
                    })?;
                    terms.push((c, mono));
                }
                Ok(ElemFormula::from_terms(doc.n, terms).into())
            }
            "inverse" => {
                let mut terms = Vec::new();
                for (term, c) in doc.terms.iter().zip(coeffs) {
                    pick(term, false)?;
                    let mut derivs = std::collections::BTreeMap::new();
                    for e in term.exponents.as_deref().unwrap_or_default() {
                        if e.p != 0 || e.t < 2 || e.power == 0 {
                            return Err(Error::Parse(format!(
                                "invalid inverse exponent ({},{})^{}",
                                e.p, e.t, e.power
                            )));
                        }
                        *derivs.entry(e.t).or_insert(0) += e.power;
                    }
                    terms.push((
                        c,
                        InverseMonomial {
                            g1_power: term.fy_power,
                            derivs,
                        },
                    ));
                }
                Ok(InverseFormula::from_terms(doc.n, terms).into())
            }
            other => Err(Error::Parse(format!("unknown form {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Formula> {
        let doc: FormulaDoc = serde_json::from_str(text)?;
        Formula::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("formula documents always serialize")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Plain => self.render_text(&Plain),
            Format::Latex => self.render_text(&Latex),
        }
    }

    fn render_text<S: Style>(&self, style: &S) -> String {
        let pieces: Vec<(BigRational, String)> = match self {
            Formula::Delta(f) => f
                .terms()
                .iter()
                .map(|(c, m)| {
                    let num = style.product(m.factors.iter().map(|(k, e)| (style.block(k), e)));
                    (c.clone(), style.term(c, num, style.fy(m.fy_power)))
                })
                .collect(),
            Formula::Elementary(f) => f
                .terms()
                .iter()
                .map(|(c, m)| {
                    let num = style.product(m.exponents.iter().map(|(k, e)| (style.partial(k), e)));
                    (c.clone(), style.term(c, num, style.fy(m.fy_power)))
                })
                .collect(),
            Formula::Inverse(f) => f
                .terms()
                .iter()
                .map(|(c, m)| {
                    let num = style.product(m.derivs.iter().map(|(&j, &e)| (style.g(j), e)));
                    (c.clone(), style.term(c, num, style.g1(m.g1_power)))
                })
                .collect(),
        };
        if pieces.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, body)) in pieces.into_iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => out.push_str(style.lead_minus()),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

fn exponent_docs(m: &Multiplicities) -> Vec<ExponentDoc> {
    m.iter()
        .map(|(k, e)| ExponentDoc {
            p: k.l,
            t: k.r,
            power: e,
        })
        .collect()
}

trait Style {
    fn lead_minus(&self) -> &'static str;
    fn block(&self, k: VectorKey) -> Atom;
    fn partial(&self, k: VectorKey) -> Atom;
    fn g(&self, j: u32) -> Atom;
    fn fy(&self, k: u32) -> Option<String>;
    fn g1(&self, k: u32) -> Option<String>;
    fn product(&self, atoms: impl Iterator<Item = (Atom, u32)>) -> Option<String>;
    fn term(&self, c: &BigRational, num: Option<String>, den: Option<String>) -> String;
}

/// A rendered symbol plus whether it needs parentheses before a power.
struct Atom {
    text: String,
    compound: bool,
}

impl Atom {
    fn simple(text: String) -> Self {
        Atom {
            text,
            compound: false,
        }
    }
}

struct Plain;

impl Style for Plain {
    fn lead_minus(&self) -> &'static str {
        "- "
    }

    fn block(&self, k: VectorKey) -> Atom {
        Atom::simple(format!("D[{},{}]", k.l, k.r))
    }

    fn partial(&self, k: VectorKey) -> Atom {
        self.block(k)
    }

    fn g(&self, j: u32) -> Atom {
        Atom::simple(format!("G[{j}]"))
    }

    fn fy(&self, k: u32) -> Option<String> {
        power_of("fy", k)
    }

    fn g1(&self, k: u32) -> Option<String> {
        power_of("G[1]", k)
    }

    fn product(&self, atoms: impl Iterator<Item = (Atom, u32)>) -> Option<String> {
        let parts: Vec<String> = atoms
            .map(|(a, e)| {
                if e == 1 {
                    a.text
                } else {
                    format!("{}^{e}", a.text)
                }
            })
            .collect();
        (!parts.is_empty()).then(|| parts.join("*"))
    }

    fn term(&self, c: &BigRational, num: Option<String>, den: Option<String>) -> String {
        let mag = c.abs();
        let num = match (mag.is_one(), num) {
            (true, Some(n)) => n,
            (_, None) => mag.to_string(),
            (false, Some(n)) => format!("{mag}*{n}"),
        };
        match den {
            Some(d) => format!("{num} / {d}"),
            None => num,
        }
    }
}

fn power_of(base: &str, k: u32) -> Option<String> {
    match k {
        0 => None,
        1 => Some(base.to_string()),
        _ => Some(format!("{base}^{k}")),
    }
}

struct Latex;

fn letters(c: char, k: u32) -> String {
    match k {
        0 => String::new(),
        1..=3 => std::iter::repeat_n(c, k as usize).collect(),
        _ => format!("{c}^{{{k}}}"),
    }
}

impl Style for Latex {
    fn lead_minus(&self) -> &'static str {
        "-"
    }

    fn block(&self, k: VectorKey) -> Atom {
        if k.l == 0 {
            return self.partial(k);
        }
        let g = if k.r == 0 {
            "f".to_string()
        } else {
            format!("f_{{{}}}", letters('y', k.r))
        };
        Atom {
            text: format!("\\Delta_{{{}}}{g}", k.l),
            compound: true,
        }
    }

    fn partial(&self, k: VectorKey) -> Atom {
        let sub = format!("{}{}", letters('x', k.l), letters('y', k.r));
        if sub.chars().count() == 1 {
            Atom::simple(format!("f_{sub}"))
        } else {
            Atom::simple(format!("f_{{{sub}}}"))
        }
    }

    fn g(&self, j: u32) -> Atom {
        let text = match j {
            1..=3 => format!("g{}", "'".repeat(j as usize)),
            _ => format!("g^{{({j})}}"),
        };
        Atom {
            text,
            compound: true,
        }
    }

    fn fy(&self, k: u32) -> Option<String> {
        match k {
            0 => None,
            1 => Some("f_y".into()),
            _ => Some(format!("f_y^{{{k}}}")),
        }
    }

    fn g1(&self, k: u32) -> Option<String> {
        match k {
            0 => None,
            1 => Some("g'".into()),
            _ => Some(format!("(g')^{{{k}}}")),
        }
    }

    fn product(&self, atoms: impl Iterator<Item = (Atom, u32)>) -> Option<String> {
        let parts: Vec<String> = atoms
            .map(|(a, e)| match (e, a.compound) {
                (1, _) => a.text,
                (_, true) => format!("({})^{{{e}}}", a.text),
                (_, false) => format!("{}^{{{e}}}", a.text),
            })
            .collect();
        (!parts.is_empty()).then(|| parts.join(" "))
    }

    fn term(&self, c: &BigRational, num: Option<String>, den: Option<String>) -> String {
        let mag = c.abs();
        let scalar = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        let (prefix, num) = match num {
            None => (String::new(), scalar),
            Some(n) if mag.is_one() => (String::new(), n),
            Some(n) => (scalar, n),
        };
        match den {
            Some(d) => format!("{prefix}\\frac{{{num}}}{{{d}}}"),
            None if prefix.is_empty() => num,
            None => format!("{prefix} {num}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Plain))
    }
}
