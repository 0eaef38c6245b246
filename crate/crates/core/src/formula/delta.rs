use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{DeltaFormula, DeltaMonomial};
use crate::coeffs::{signed_c_from_predecessors, signed_coeff};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_a, Multiplicities, VectorKey};

const FY: VectorKey = VectorKey::new(0, 1);
const K11: VectorKey = VectorKey::new(1, 1);
const K20: VectorKey = VectorKey::new(2, 0);

/// `y^{(n)} = Σ_{α ∈ A_n} (-1)^h C_α ∏ (Δ_l f_{y^r})^{m_{l,r}} / f_y^{n+h}`.
pub fn delta_formula(n: u32) -> Result<DeltaFormula> {
    let terms = enumerate_a(n)?
        .into_iter()
        .map(|alpha| {
            let c = signed_coeff(&alpha)?.to_rational();
            let fy_power = n + alpha.total() as u32;
            Ok((
                c,
                DeltaMonomial {
                    factors: alpha,
                    fy_power,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaFormula::from_terms(n, terms))
}

/// Builds `y^{(n)}` from `y''` by running the signed predecessor recursion
/// level by level; no closed-form coefficient is consulted past `n = 2`.
pub fn delta_formula_by_recursion(n: u32) -> Result<DeltaFormula> {
    if n < 2 {
        return Err(Error::Domain(format!("Δ-form needs n >= 2, got {n}")));
    }
    let mut level: HashMap<Multiplicities, BigInt> = HashMap::new();
    level.insert(Multiplicities::from_pairs([(K20, 1)]), BigInt::from(-1));
    for m in 2..n {
        let mut next = HashMap::new();
        for beta in enumerate_a(m + 1)? {
            let c = signed_c_from_predecessors(&beta, m + 1, &mut |alpha| {
                level
                    .get(alpha)
                    .cloned()
                    .ok_or_else(|| Error::Internal(format!("{alpha} missing from level {m}")))
            })?;
            next.insert(beta, c);
        }
        level = next;
    }
    let terms = level.into_iter().map(|(alpha, c)| {
        let fy_power = n + alpha.total() as u32;
        (
            BigRational::from_integer(c),
            DeltaMonomial {
                factors: alpha,
                fy_power,
            },
        )
    });
    Ok(DeltaFormula::from_terms(n, terms))
}

fn block_vanishes(key: VectorKey) -> bool {
    // f = 0 on the curve and Δ_1 f = f_x f_y - f_y f_x = 0.
    key == VectorKey::new(0, 0) || key == VectorKey::new(1, 0)
}

type Cleared = BTreeMap<Multiplicities, BigRational>;

fn push(into: &mut Cleared, mono: Multiplicities, c: BigRational) {
    if c.is_zero() || mono.keys().any(block_vanishes) {
        return;
    }
    *into.entry(mono).or_insert_with(BigRational::zero) += c;
}

/// `y^{(n)} -> y^{(n+1)}` symbolically.
///
/// Works on `f_y^{2n-1} y^{(n)}`, a polynomial in blocks where `(0,1)` stands
/// for `f_y` itself, and applies `f_y^2 d/dx - (2n-1) Δ_1 f_y` with
/// `f_y^2 d/dx Δ_l g = f_y Δ_{l+1} g + l Δ_1 f_y · Δ_l g - l Δ_2 f · Δ_{l-1} g_y`
/// on each factor.
pub fn derive_next(formula: &DeltaFormula) -> Result<DeltaFormula> {
    let n = formula.n;
    if n < 2 {
        return Err(Error::Domain(format!("Δ-form needs n >= 2, got {n}")));
    }
    let mut cleared = Cleared::new();
    for (c, mono) in formula.terms() {
        let h = mono.stratum();
        let bad = mono.factors.contains(FY)
            || mono.factors.keys().any(|k| k.weight() < 2)
            || h + 1 > n as u64
            || mono.fy_power as u64 != n as u64 + h;
        if bad {
            return Err(Error::Domain(format!(
                "term {} / f_y^{} is not of the order-{n} shape",
                mono.factors, mono.fy_power
            )));
        }
        let mut lifted = mono.factors.clone();
        lifted.set(FY, (n as u64 - 1 - h) as u32);
        push(&mut cleared, lifted, c.clone());
    }

    let mut next = Cleared::new();
    let damping = BigRational::from_integer(BigInt::from(2 * n - 1));
    for (mono, c) in &cleared {
        for (key, e) in mono.iter() {
            let ec = c * BigRational::from_integer(BigInt::from(e));
            let mut rest = mono.clone();
            rest.decrement(key);

            let mut raised = rest.clone();
            raised.increment(FY);
            raised.increment((key.l + 1, key.r));
            push(&mut next, raised, ec.clone());

            if key.l > 0 {
                let lc = &ec * BigRational::from_integer(BigInt::from(key.l));
                let mut mixed = mono.clone();
                mixed.increment(K11);
                push(&mut next, mixed, lc.clone());

                let mut moved = rest;
                moved.increment(K20);
                moved.increment((key.l - 1, key.r + 1));
                push(&mut next, moved, -lc);
            }
        }
        let mut damped = mono.clone();
        damped.increment(K11);
        push(&mut next, damped, -(c * &damping));
    }

    let n1 = n + 1;
    let mut terms = Vec::with_capacity(next.len());
    for (mono, c) in next {
        if c.is_zero() {
            continue;
        }
        let h = mono.without(FY).total();
        if mono.get(FY) as u64 + h != n as u64 {
            return Err(Error::Internal(format!(
                "derived term {mono} does not have {n} factors"
            )));
        }
        terms.push((
            c,
            DeltaMonomial {
                factors: mono.without(FY),
                fy_power: n1 + h as u32,
            },
        ));
    }
    Ok(DeltaFormula::from_terms(n1, terms))
}
