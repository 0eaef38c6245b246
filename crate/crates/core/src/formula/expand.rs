use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{DeltaFormula, ElemFormula, ElemMonomial, InverseFormula, InverseMonomial};
use crate::coeffs::{binomial, coeff_d, signed_coeff, Sign};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_a, enumerate_b, Multiplicities, VectorKey};

const FX: VectorKey = VectorKey::new(1, 0);
const FY: VectorKey = VectorKey::new(0, 1);

/// Polynomial in formal partials; `(1,0)` is `f_x` and `(0,1)` is `f_y`.
type Poly = BTreeMap<Multiplicities, BigRational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            for (k, e) in mb.iter() {
                m.add(k, e);
            }
            *out.entry(m).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Δ_l f_{y^r} = Σ_j (-1)^j binom(l,j) f_{x^{l-j} y^{r+j}} f_x^j f_y^{l-j}`.
fn expand_block(key: VectorKey) -> Poly {
    expand_block_of(key.l, VectorKey::new(0, key.r))
}

/// `Δ_l g` for `g = f_{x^a y^b}`.
fn expand_block_of(l: u32, g: VectorKey) -> Poly {
    let mut p = Poly::new();
    for j in 0..=l {
        let mut m = Multiplicities::new();
        m.increment((g.l + l - j, g.r + j));
        m.add(FX, j);
        m.add(FY, l - j);
        let b = BigInt::from(binomial(l as i64, j as i64));
        let c = if j % 2 == 0 { b } else { -b };
        *p.entry(m).or_insert_with(BigRational::zero) += BigRational::from_integer(c);
    }
    p.retain(|_, c| !c.is_zero());
    p
}

/// Replaces every block by its binomial expansion, cancels `f_y` against the
/// denominator and collects like monomials.
pub fn expand_delta(formula: &DeltaFormula) -> Result<ElemFormula> {
    let mut blocks: HashMap<VectorKey, Poly> = HashMap::new();
    let mut terms = Vec::new();
    for (c, mono) in formula.terms() {
        let mut acc: Poly = Poly::from([(Multiplicities::new(), c.clone())]);
        for (key, e) in mono.factors.iter() {
            let block = blocks.entry(key).or_insert_with(|| expand_block(key));
            for _ in 0..e {
                acc = poly_mul(&acc, block);
            }
        }
        for (m, c) in acc {
            let fy = m.get(FY);
            if fy > mono.fy_power {
                return Err(Error::Internal(format!(
                    "expanded monomial {m} over f_y^{} keeps f_y in the numerator",
                    mono.fy_power
                )));
            }
            let em = ElemMonomial::new(m.without(FY), mono.fy_power - fy)
                .ok_or_else(|| Error::Internal(format!("monomial {m} mentions f")))?;
            terms.push((c, em));
        }
    }
    Ok(ElemFormula::from_terms(formula.n, terms))
}

/// `y^{(n)} = Σ_{γ ∈ B_{n,k}} (-1)^k D_γ ∏ f_{x^p y^t}^{s_{p,t}} / f_y^k`.
pub fn elementary_formula(n: u32) -> Result<ElemFormula> {
    let mut terms = Vec::new();
    for gamma in enumerate_b(n)? {
        let k = gamma.total();
        let d = BigInt::from(coeff_d(&gamma)?);
        let c = match Sign::parity(k) {
            Sign::Plus => d,
            Sign::Minus => -d,
        };
        let mono = ElemMonomial::new(gamma, k as u32)
            .ok_or_else(|| Error::Internal("B_n element carries f or f_y".into()))?;
        terms.push((BigRational::from_integer(c), mono));
    }
    Ok(ElemFormula::from_terms(n, terms))
}

/// Sets `f_x = 0`: every monomial carrying `f_x` drops out.
pub fn specialize_fx_zero(formula: &ElemFormula) -> ElemFormula {
    ElemFormula::from_terms(
        formula.n,
        formula.terms().iter().filter(|(_, m)| !m.has_fx()).cloned(),
    )
}

/// The `f_x = 0` formula read straight off `A_n`:
/// `Σ (-1)^h C_α ∏ f_{x^l y^r}^{m_{l,r}} / f_y^h`.
pub fn fx_zero_formula(n: u32) -> Result<ElemFormula> {
    let mut terms = Vec::new();
    for alpha in enumerate_a(n)? {
        let h = alpha.total() as u32;
        let c = signed_coeff(&alpha)?.to_rational();
        let mono = ElemMonomial::new(alpha, h)
            .ok_or_else(|| Error::Internal("A_n element carries f or f_y".into()))?;
        terms.push((c, mono));
    }
    Ok(ElemFormula::from_terms(n, terms))
}

/// Derivatives of `g^{-1}`: substitutes `f(x,y) = x - g(y)` into the
/// elementary formula, i.e. `f_x = 1`, `f_{y^t} = -g^{(t)}`, and every other
/// partial with an x-derivative is zero.
pub fn inverse_function_formula(n: u32) -> Result<InverseFormula> {
    let elementary = elementary_formula(n)?;
    let mut terms = Vec::new();
    'terms: for (c, mono) in elementary.terms() {
        let mut derivs = BTreeMap::new();
        let mut flips = mono.fy_power as u64;
        for (key, s) in mono.exponents.iter() {
            match (key.l, key.r) {
                (1, 0) => {}
                (0, t) => {
                    derivs.insert(t, s);
                    flips += s as u64;
                }
                _ => continue 'terms,
            }
        }
        let sign = if flips.is_multiple_of(2) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        terms.push((
            c * sign,
            InverseMonomial {
                g1_power: mono.fy_power,
                derivs,
            },
        ));
    }
    Ok(InverseFormula::from_terms(n, terms))
}
