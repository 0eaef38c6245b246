//! Symbolic formulas for `y^{(n)}`.
//!
//! [`DeltaFormula`] is the compact shape: each term is a product of blocks
//! `Δ_l f_{y^r}` over `f_y^{n+h}`. [`ElemFormula`] is the fully expanded shape
//! over raw partials `f_{x^p y^t}`. [`InverseFormula`] is the specialization
//! `f(x, y) = x - g(y)`, written over `g^{(j)}`.

mod delta;
mod expand;
mod render;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

pub use delta::{delta_formula, delta_formula_by_recursion, derive_next};
pub use expand::{
    elementary_formula, expand_delta, fx_zero_formula, inverse_function_formula, specialize_fx_zero,
};
pub use implicit_jet_symbolic::{ElemFormula, ElemMonomial};
pub use render::{ExponentDoc, FactorDoc, Format, FormulaDoc, TermDoc};

use crate::partitions::Multiplicities;

/// `∏ (Δ_l f_{y^r})^{m_{l,r}} / f_y^{fy_power}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaMonomial {
    pub factors: Multiplicities,
    pub fy_power: u32,
}

impl DeltaMonomial {
    /// Number of blocks counted with multiplicity (the stratum `h`).
    pub fn stratum(&self) -> u64 {
        self.factors.total()
    }
}

impl Ord for DeltaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors
            .stratified_cmp(&other.factors)
            .then_with(|| self.fy_power.cmp(&other.fy_power))
    }
}

impl PartialOrd for DeltaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact Δ-form of `y^{(n)}`, collected and canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaFormula {
    pub n: u32,
    terms: Vec<(BigRational, DeltaMonomial)>,
}

impl DeltaFormula {
    pub fn from_terms<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, DeltaMonomial)>,
    {
        DeltaFormula {
            n,
            terms: collect(terms),
        }
    }

    pub fn terms(&self) -> &[(BigRational, DeltaMonomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, factors: &Multiplicities) -> Option<&BigRational> {
        self.terms
            .iter()
            .find(|(_, m)| &m.factors == factors)
            .map(|(c, _)| c)
    }
}

/// `∏ (g^{(j)})^{e_j} / (g')^{g1_power}` with `j >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InverseMonomial {
    pub g1_power: u32,
    pub derivs: BTreeMap<u32, u32>,
}

/// `(g^{-1})^{(n)}` over the derivatives of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseFormula {
    pub n: u32,
    terms: Vec<(BigRational, InverseMonomial)>,
}

impl InverseFormula {
    pub fn from_terms<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, InverseMonomial)>,
    {
        InverseFormula {
            n,
            terms: collect(terms),
        }
    }

    pub fn terms(&self) -> &[(BigRational, InverseMonomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_map(&self) -> BTreeMap<InverseMonomial, BigRational> {
        self.terms
            .iter()
            .map(|(c, m)| (m.clone(), c.clone()))
            .collect()
    }
}

fn collect<M: Ord, I>(terms: I) -> Vec<(BigRational, M)>
where
    I: IntoIterator<Item = (BigRational, M)>,
{
    let mut acc: BTreeMap<M, BigRational> = BTreeMap::new();
    for (c, m) in terms {
        *acc.entry(m).or_insert_with(BigRational::zero) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (c, m))
        .collect()
}

/// Any of the three formula shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Delta(DeltaFormula),
    Elementary(ElemFormula),
    Inverse(InverseFormula),
}

impl Formula {
    pub fn n(&self) -> u32 {
        match self {
            Formula::Delta(f) => f.n,
            Formula::Elementary(f) => f.n,
            Formula::Inverse(f) => f.n,
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            Formula::Delta(_) => "delta",
            Formula::Elementary(_) => "elementary",
            Formula::Inverse(_) => "inverse",
        }
    }
}

impl From<DeltaFormula> for Formula {
    fn from(f: DeltaFormula) -> Self {
        Formula::Delta(f)
    }
}

impl From<ElemFormula> for Formula {
    fn from(f: ElemFormula) -> Self {
        Formula::Elementary(f)
    }
}

impl From<InverseFormula> for Formula {
    fn from(f: InverseFormula) -> Self {
        Formula::Inverse(f)
    }
}
