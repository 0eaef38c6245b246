//! Identity suites behind `implicit-jet verify`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{
    coeff_c, coeff_d, factorial, verify_c_recursion, verify_zgamma_identity, VerificationReport,
};
use crate::error::{Error, Result};
use crate::formula::{
    delta_formula, delta_formula_by_recursion, derive_next, elementary_formula, expand_delta,
    fx_zero_formula, inverse_function_formula, specialize_fx_zero, InverseFormula, InverseMonomial,
};
use crate::numeric::{eval_delta, eval_elementary, random_rational_jet, shift_jet};
use crate::oracle::{formulas_equal, oracle_formula};
use crate::partitions::{enumerate_a, lift_to_tilde, predecessors};

/// Random jets drawn per order by the shift suite.
pub const SHIFT_JETS_PER_ORDER: usize = 50;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Recursion,
    Oracle,
    Johnson,
    Shift,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursion" => Ok(Suite::Recursion),
            "oracle" => Ok(Suite::Oracle),
            "johnson" => Ok(Suite::Johnson),
            "shift" => Ok(Suite::Shift),
            "all" => Ok(Suite::All),
            other => Err(Error::Domain(format!("unknown suite `{other}`"))),
        }
    }
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Recursion,
                Suite::Oracle,
                Suite::Johnson,
                Suite::Shift,
            ],
            s => vec![s],
        }
    }
}

/// Runs `suite` for every order up to `max_n`, in a fixed order.
pub fn run_suite(suite: Suite, max_n: u32, seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for s in suite.members() {
        match s {
            Suite::Recursion => {
                for n in 2..=max_n {
                    out.push(verify_c_recursion(n)?);
                    out.push(verify_predecessor_roundtrip(n + 1)?);
                    out.push(verify_derive_next(n)?);
                    out.push(verify_coefficient_recursion(n + 1)?);
                }
            }
            Suite::Oracle => {
                for n in 1..=max_n {
                    out.push(verify_oracle(n)?);
                    out.push(verify_inverse(n)?);
                }
            }
            Suite::Johnson => {
                for n in 1..=max_n {
                    out.push(verify_zgamma_identity(n)?);
                    if n >= 2 {
                        out.push(verify_d_matches_c(n)?);
                    }
                }
            }
            Suite::Shift => {
                for n in 2..=max_n {
                    out.push(verify_shift(n, SHIFT_JETS_PER_ORDER, seed)?);
                }
            }
            Suite::All => unreachable!("expanded by members()"),
        }
    }
    Ok(out)
}

/// Each predecessor of `β ∈ A_{n+1}` maps back to `β` under its forward step.
pub fn verify_predecessor_roundtrip(n_plus_1: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("predecessor_roundtrip", n_plus_1);
    for beta in enumerate_a(n_plus_1)? {
        let lifted = lift_to_tilde(&beta, n_plus_1)?;
        for rec in predecessors(&beta, n_plus_1)? {
            let back = rec.reapply(n_plus_1 - 1)?;
            report.check(back.as_ref() == Some(&lifted), || {
                format!(
                    "{} step from {} gives {back:?}, not {lifted}",
                    rec.kind, rec.predecessor
                )
            });
        }
    }
    Ok(report)
}

pub fn verify_derive_next(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("derive_next", n + 1);
    let derived = derive_next(&delta_formula(n)?)?;
    let direct = delta_formula(n + 1)?;
    report.check(derived == direct, || {
        format!(
            "derived {} terms, direct {} terms",
            derived.len(),
            direct.len()
        )
    });
    Ok(report)
}

pub fn verify_coefficient_recursion(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("coefficient_recursion", n);
    let rebuilt = delta_formula_by_recursion(n)?;
    let direct = delta_formula(n)?;
    for ((c1, m1), (c2, m2)) in rebuilt.terms().iter().zip(direct.terms()) {
        report.check(c1 == c2 && m1 == m2, || {
            format!("{c1} {:?} vs {c2} {:?}", m1.factors, m2.factors)
        });
    }
    report.check(rebuilt.len() == direct.len(), || {
        format!("{} terms vs {}", rebuilt.len(), direct.len())
    });
    Ok(report)
}

/// Expanded Δ-form, elementary form and literal differentiation agree; the
/// `f_x = 0` specialization matches the form read off `A_n`.
pub fn verify_oracle(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("oracle", n);
    let elementary = elementary_formula(n)?;
    let brute = oracle_formula(n)?;
    let cmp = formulas_equal(&elementary, &brute);
    report.check(cmp.equal, || {
        let shown: Vec<String> = cmp.diffs.iter().take(5).map(|d| d.to_string()).collect();
        format!("elementary vs oracle: {}", shown.join("; "))
    });
    if n >= 2 {
        let delta = delta_formula(n)?;
        let expanded = expand_delta(&delta)?;
        let cmp = formulas_equal(&expanded, &elementary);
        report.check(cmp.equal, || {
            let shown: Vec<String> = cmp.diffs.iter().take(5).map(|d| d.to_string()).collect();
            format!("expanded delta vs elementary: {}", shown.join("; "))
        });
        let fx0 = fx_zero_formula(n)?;
        report.check(specialize_fx_zero(&elementary) == fx0, || {
            "f_x = 0 specialization differs from the A_n form".into()
        });
    }
    Ok(report)
}

/// Partitions of `total` into exactly `parts` parts, each at least 2, as
/// `part -> multiplicity`.
fn partitions_min2(total: u32, parts: u32) -> Vec<BTreeMap<u32, u32>> {
    fn go(
        rest: u32,
        slots: u32,
        max_part: u32,
        cur: &mut BTreeMap<u32, u32>,
        out: &mut Vec<BTreeMap<u32, u32>>,
    ) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for part in (2..=max_part.min(rest)).rev() {
            if rest - part < 2 * (slots - 1) {
                continue;
            }
            *cur.entry(part).or_insert(0) += 1;
            go(rest - part, slots - 1, part, cur, out);
            let e = cur.get_mut(&part).expect("just inserted");
            *e -= 1;
            if *e == 0 {
                cur.remove(&part);
            }
        }
    }
    let mut out = Vec::new();
    go(total, parts, total, &mut BTreeMap::new(), &mut out);
    out
}

/// `(g^{-1})^{(n)} = Σ_u (-1)^u (n+u-1)! / ∏ μ_j! j!^{μ_j} ∏ g^{(j)μ_j} / g'^{n+u}`
/// over partitions of `n+u-1` into `u` parts `>= 2`.
pub fn inverse_closed_form(n: u32) -> InverseFormula {
    let mut terms = Vec::new();
    for u in 0..n {
        for mu in partitions_min2(n + u - 1, u) {
            let mut den = BigInt::from(1);
            for (&j, &m) in &mu {
                den *= BigInt::from(factorial(m as u64))
                    * num_traits::pow(BigInt::from(factorial(j as u64)), m as usize);
            }
            let mag = BigRational::new(BigInt::from(factorial((n + u - 1) as u64)), den);
            let c = if u % 2 == 0 { mag } else { -mag };
            terms.push((
                c,
                InverseMonomial {
                    g1_power: n + u,
                    derivs: mu,
                },
            ));
        }
    }
    InverseFormula::from_terms(n, terms)
}

pub fn verify_inverse(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("inverse_function", n);
    let from_elementary = inverse_function_formula(n)?;
    let closed = inverse_closed_form(n);
    report.check(from_elementary == closed, || {
        format!(
            "substituted form has {} terms, closed form {}",
            from_elementary.len(),
            closed.len()
        )
    });
    Ok(report)
}

/// `D_α = C_α` on every `α ∈ A_n`.
pub fn verify_d_matches_c(n: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("d_matches_c", n);
    for alpha in enumerate_a(n)? {
        let (c, d) = (coeff_c(&alpha)?, coeff_d(&alpha)?);
        report.check(c == d, || format!("{alpha}: C = {c}, D = {d}"));
    }
    Ok(report)
}

/// On random exact jets: the `f_x = 0` form on the shifted jet, the Δ-form
/// and the elementary form on the original jet all agree.
pub fn verify_shift(n: u32, jets: usize, seed: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("shift", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(n));
    let delta = delta_formula(n)?;
    let elementary = elementary_formula(n)?;
    let fx0 = fx_zero_formula(n)?;
    for i in 0..jets {
        let jet = random_rational_jet(&mut rng, n)?;
        let via_delta = eval_delta(&delta, &jet)?;
        let via_elem = eval_elementary(&elementary, &jet)?;
        let via_shift = eval_elementary(&fx0, &shift_jet(&jet, n)?)?;
        report.check(via_delta == via_elem, || {
            format!("jet {i}: delta {via_delta} vs elementary {via_elem}")
        });
        report.check(via_delta == via_shift, || {
            format!("jet {i}: delta {via_delta} vs shifted {via_shift}")
        });
    }
    Ok(report)
}
