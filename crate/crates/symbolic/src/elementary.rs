use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::{Multiplicities, VectorKey};

/// `∏ f_{x^p y^t}^{s_{p,t}} / f_y^{fy_power}`.
///
/// Keys `(0,0)` and `(0,1)` never appear: `f` vanishes on the curve and
/// powers of `f_y` live in `fy_power`. Key `(1,0)` is `f_x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElemMonomial {
    pub exponents: Multiplicities,
    pub fy_power: u32,
}

impl ElemMonomial {
    /// Returns `None` if `exponents` mentions `f` or `f_y`.
    pub fn new(exponents: Multiplicities, fy_power: u32) -> Option<Self> {
        if exponents.contains((0, 0)) || exponents.contains((0, 1)) {
            return None;
        }
        Some(ElemMonomial {
            exponents,
            fy_power,
        })
    }

    pub fn has_fx(&self) -> bool {
        self.exponents.contains(VectorKey::new(1, 0))
    }
}

impl Ord for ElemMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.fy_power
            .cmp(&other.fy_power)
            .then_with(|| self.exponents.stratified_cmp(&other.exponents))
    }
}

impl PartialOrd for ElemMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact linear combination of elementary monomials for `y^{(n)}`.
///
/// Terms are kept collected (no duplicate monomials, no zero coefficients)
/// and sorted by the canonical monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemFormula {
    pub n: u32,
    terms: Vec<(BigRational, ElemMonomial)>,
}

impl ElemFormula {
    /// Collects like monomials, drops zeros, and sorts.
    pub fn from_terms<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, ElemMonomial)>,
    {
        let mut acc: BTreeMap<ElemMonomial, BigRational> = BTreeMap::new();
        for (c, m) in terms {
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
            .collect();
        ElemFormula { n, terms }
    }

    pub fn terms(&self) -> &[(BigRational, ElemMonomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: &ElemMonomial) -> Option<&BigRational> {
        self.terms
            .binary_search_by(|(_, m)| m.cmp(monomial))
            .ok()
            .map(|i| &self.terms[i].0)
    }

    pub fn to_map(&self) -> BTreeMap<ElemMonomial, BigRational> {
        self.terms
            .iter()
            .map(|(c, m)| (m.clone(), c.clone()))
            .collect()
    }
}
