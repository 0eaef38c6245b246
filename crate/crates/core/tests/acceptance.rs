//! Acceptance criteria 1-8, one pass/fail line each.
//!
//! Reference values are computed here, independently of the library paths
//! they check.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use implicit_jet::coeffs::{coeff_c, verify_c_recursion, zgamma_sum};
use implicit_jet::formula::{
    delta_formula, derive_next, elementary_formula, expand_delta, inverse_function_formula,
    specialize_fx_zero, DeltaFormula, DeltaMonomial, ElemFormula, ElemMonomial, Formula,
    InverseMonomial,
};
use implicit_jet::numeric::{
    builtin_problem, eval_delta, eval_elementary, finite_difference_derivatives,
    random_rational_jet, shift_jet, FdConfig,
};
use implicit_jet::oracle::{formulas_equal, oracle_formula};
use implicit_jet::partitions::{enumerate_a, enumerate_b};
use implicit_jet::Multiplicities;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Key = (u32, u32);

/// `(coefficient, exponents, f_y power)` rows of a hand-written formula.
type Rows<'a> = &'a [(i64, &'a [(Key, u32)], u32)];

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn multi(pairs: &[(Key, u32)]) -> Multiplicities {
    Multiplicities::from_pairs(pairs.iter().copied())
}

fn fact(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn binom(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

fn delta_golden(n: u32, terms: Rows) -> DeltaFormula {
    DeltaFormula::from_terms(
        n,
        terms.iter().map(|&(c, f, k)| {
            (
                q(c),
                DeltaMonomial {
                    factors: multi(f),
                    fy_power: k,
                },
            )
        }),
    )
}

fn elem_golden(n: u32, terms: Rows) -> ElemFormula {
    ElemFormula::from_terms(
        n,
        terms
            .iter()
            .map(|&(c, e, k)| (q(c), ElemMonomial::new(multi(e), k).unwrap())),
    )
}

fn criterion_1() {
    let y2 = delta_golden(2, &[(-1, &[((2, 0), 1)], 3)]);
    let y3 = delta_golden(
        3,
        &[(-1, &[((3, 0), 1)], 4), (3, &[((1, 1), 1), ((2, 0), 1)], 5)],
    );
    let y4 = delta_golden(
        4,
        &[
            (-1, &[((4, 0), 1)], 5),
            (4, &[((1, 1), 1), ((3, 0), 1)], 6),
            (6, &[((2, 1), 1), ((2, 0), 1)], 6),
            (-3, &[((0, 2), 1), ((2, 0), 2)], 7),
            (-12, &[((1, 1), 2), ((2, 0), 1)], 7),
        ],
    );
    for golden in [y2, y3, y4] {
        assert_eq!(delta_formula(golden.n).unwrap(), golden, "n = {}", golden.n);
    }
    let mut c4: Vec<BigRational> = delta_formula(4)
        .unwrap()
        .terms()
        .iter()
        .map(|(c, _)| c.clone())
        .collect();
    c4.sort();
    assert_eq!(c4, [-12, -3, -1, 4, 6].map(q));

    let e2 = elem_golden(
        2,
        &[
            (-1, &[((2, 0), 1)], 1),
            (2, &[((1, 1), 1), ((1, 0), 1)], 2),
            (-1, &[((0, 2), 1), ((1, 0), 2)], 3),
        ],
    );
    assert_eq!(expand_delta(&delta_formula(2).unwrap()).unwrap(), e2);
    let e3 = elem_golden(
        3,
        &[
            (-1, &[((3, 0), 1)], 1),
            (3, &[((2, 1), 1), ((1, 0), 1)], 2),
            (-3, &[((1, 2), 1), ((1, 0), 2)], 3),
            (1, &[((0, 3), 1), ((1, 0), 3)], 4),
            (3, &[((2, 0), 1), ((1, 1), 1)], 2),
            (-3, &[((2, 0), 1), ((0, 2), 1), ((1, 0), 1)], 3),
            (-6, &[((1, 1), 2), ((1, 0), 1)], 3),
            (9, &[((1, 1), 1), ((0, 2), 1), ((1, 0), 2)], 4),
            (-3, &[((0, 2), 2), ((1, 0), 3)], 5),
        ],
    );
    assert_eq!(expand_delta(&delta_formula(3).unwrap()).unwrap(), e3);
}

fn criterion_2() {
    for n in 2..=9 {
        let expanded = expand_delta(&delta_formula(n).unwrap()).unwrap();
        let elementary = elementary_formula(n).unwrap();
        let brute = oracle_formula(n).unwrap();
        let a = formulas_equal(&expanded, &elementary);
        assert!(
            a.equal,
            "n = {n}: expanded vs elementary {:?}",
            a.diffs.first()
        );
        let b = formulas_equal(&elementary, &brute);
        assert!(
            b.equal,
            "n = {n}: elementary vs oracle {:?}",
            b.diffs.first()
        );
    }
}

/// Signed coefficients `c_β` of level `n + 1` from those of level `n`, by
/// summing over the three backward steps.
fn next_level(
    level: &BTreeMap<BTreeMap<Key, u32>, BigInt>,
) -> BTreeMap<BTreeMap<Key, u32>, BigInt> {
    fn bump(m: &mut BTreeMap<Key, u32>, k: Key, by: i32) {
        let e = m.entry(k).or_insert(0);
        *e = (*e as i32 + by) as u32;
        if *e == 0 {
            m.remove(&k);
        }
    }
    let get = |m: &BTreeMap<Key, u32>, k: Key| m.get(&k).copied().unwrap_or(0) as u64;

    // Every member of the next level is reached from some member of this one
    // by a forward step, so collect candidates first.
    let mut candidates = std::collections::BTreeSet::new();
    for alpha in level.keys() {
        for &(l, r) in alpha.keys() {
            let mut b = alpha.clone();
            bump(&mut b, (l, r), -1);
            bump(&mut b, (l + 1, r), 1);
            candidates.insert(b);
            if l >= 1 && (l, r) != (2, 0) {
                let mut b = alpha.clone();
                bump(&mut b, (l, r), -1);
                bump(&mut b, (2, 0), 1);
                bump(&mut b, (l - 1, r + 1), 1);
                if b.keys().all(|&(l, r)| l + r >= 2) {
                    candidates.insert(b);
                }
            }
        }
        let mut b = alpha.clone();
        bump(&mut b, (1, 1), 1);
        candidates.insert(b);
    }

    let mut next = BTreeMap::new();
    for beta in candidates {
        let mut c = BigInt::zero();
        let lookup = |m: &BTreeMap<Key, u32>| level.get(m).cloned().unwrap_or_default();
        for &(l, r) in beta.keys() {
            if l >= 1 && l + r >= 3 {
                let mut a = beta.clone();
                bump(&mut a, (l, r), -1);
                bump(&mut a, (l - 1, r), 1);
                c += BigInt::from(get(&beta, (l - 1, r)) + 1) * lookup(&a);
            }
            if r >= 1 && (l, r) != (1, 1) && get(&beta, (2, 0)) >= 1 {
                let mut a = beta.clone();
                bump(&mut a, (l, r), -1);
                bump(&mut a, (2, 0), -1);
                bump(&mut a, (l + 1, r - 1), 1);
                let w = (l as u64 + 1) * (get(&beta, (l + 1, r - 1)) + 1);
                c -= BigInt::from(w) * lookup(&a);
            }
        }
        if get(&beta, (1, 1)) >= 1 {
            let mut a = beta.clone();
            bump(&mut a, (1, 1), -1);
            let reds: u64 = beta.iter().map(|(&(_, r), &m)| r as u64 * m as u64).sum();
            c -= BigInt::from(2 * get(&beta, (2, 0)) + reds) * lookup(&a);
        }
        if !c.is_zero() {
            next.insert(beta, c);
        }
    }
    next
}

fn criterion_3() {
    let mut level: BTreeMap<BTreeMap<Key, u32>, BigInt> =
        BTreeMap::from([(BTreeMap::from([((2, 0), 1)]), BigInt::from(-1))]);
    for n in 2..=8 {
        let direct = delta_formula(n + 1).unwrap();
        assert_eq!(
            derive_next(&delta_formula(n).unwrap()).unwrap(),
            direct,
            "derive_next {n}"
        );

        level = next_level(&level);
        let rebuilt = DeltaFormula::from_terms(
            n + 1,
            level.iter().map(|(m, c)| {
                let factors = multi(&m.iter().map(|(&k, &e)| (k, e)).collect::<Vec<_>>());
                let h = factors.total() as u32;
                (
                    BigRational::from_integer(c.clone()),
                    DeltaMonomial {
                        factors,
                        fy_power: n + 1 + h,
                    },
                )
            }),
        );
        assert_eq!(rebuilt, direct, "coefficient recursion {}", n + 1);
    }
}

fn criterion_4() {
    for n in 2..=8 {
        let report = verify_c_recursion(n).unwrap();
        assert!(report.passed() && report.checked > 0, "{report:?}");
    }
    for n in 1..=8 {
        for gamma in enumerate_b(n).unwrap() {
            let reds: u64 = gamma
                .iter()
                .filter(|(k, _)| k.l + k.r >= 2)
                .map(|(k, s)| k.r as u64 * s as u64)
                .sum();
            for s10 in 0..=reds {
                let expected = BigRational::from_integer(binom(reds, s10));
                assert_eq!(
                    zgamma_sum(&gamma, s10 as u32),
                    expected,
                    "{gamma} s10={s10}"
                );
            }
        }
    }
}

/// Every multiset of at most `n` vectors from `[0, n]^2` with `l + r >= 2`,
/// filtered by `Σ l·m = n` and `Σ (r - 1)·m = -1`.
fn brute_force_a(n: u32) -> Vec<BTreeMap<Key, u32>> {
    let keys: Vec<Key> = (0..=n)
        .flat_map(|l| (0..=n).map(move |r| (l, r)))
        .filter(|&(l, r)| l + r >= 2)
        .collect();
    fn go(keys: &[Key], from: usize, left: u32, cur: &mut Vec<Key>, out: &mut Vec<Vec<Key>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in from..keys.len() {
            cur.push(keys[i]);
            go(keys, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    go(&keys, 0, n, &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|ms| {
            let sum_l: u32 = ms.iter().map(|k| k.0).sum();
            let sum_r: i64 = ms.iter().map(|k| k.1 as i64 - 1).sum();
            sum_l == n && sum_r == -1
        })
        .map(|ms| {
            let mut m = BTreeMap::new();
            for k in ms {
                *m.entry(k).or_insert(0) += 1;
            }
            m
        })
        .collect()
}

fn criterion_5() {
    let a4 = enumerate_a(4).unwrap();
    let c: Vec<BigInt> = a4
        .iter()
        .map(|a| BigInt::from(coeff_c(a).unwrap()))
        .collect();
    assert_eq!(c, [1, 4, 6, 3, 12].map(BigInt::from));
    let counts: Vec<usize> = (2..=4).map(|n| enumerate_a(n).unwrap().len()).collect();
    assert_eq!(counts, [1, 2, 5]);

    let brute = brute_force_a(5);
    assert_eq!(brute.len(), 10);
    let mut ours: Vec<BTreeMap<Key, u32>> = enumerate_a(5)
        .unwrap()
        .iter()
        .map(|m| m.iter().map(|(k, e)| ((k.l, k.r), e)).collect())
        .collect();
    let mut brute = brute;
    ours.sort();
    brute.sort();
    assert_eq!(ours, brute);
}

/// `d^n/dx^n sqrt(1 - x^2)` at 0 from the binomial series.
fn circle_derivative(n: u32) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let mut coeff = BigRational::one();
    for k in 1..=n / 2 {
        coeff = coeff * (q(2 * k as i64 - 3) / q(2)) / q(k as i64);
    }
    coeff * BigRational::from_integer(fact(n))
}

fn criterion_6() {
    for (name, truth) in [
        ("circle", circle_derivative as fn(u32) -> BigRational),
        ("exp", |_| q(1)),
    ] {
        let p = builtin_problem(name).unwrap();
        for n in 1..=6 {
            let exact_jet = p.rational_jet(n).unwrap();
            let float_jet = p.float_jet(n).unwrap();
            let expected = truth(n);
            let e = elementary_formula(n).unwrap();
            assert_eq!(
                eval_elementary(&e, &exact_jet).unwrap(),
                expected,
                "{name} {n}"
            );
            let approx = eval_elementary(&e, &float_jet).unwrap();
            let want = expected.to_f64().unwrap();
            assert!(rel(approx, want) <= 1e-9, "{name} {n}: {approx} vs {want}");
            if n >= 2 {
                let d = delta_formula(n).unwrap();
                assert_eq!(eval_delta(&d, &exact_jet).unwrap(), expected, "{name} {n}");
                let approx = eval_delta(&d, &float_jet).unwrap();
                assert!(rel(approx, want) <= 1e-9, "{name} {n}: {approx} vs {want}");
            }
        }
    }

    let lambert = builtin_problem("lambert").unwrap();
    let fd = finite_difference_derivatives(&lambert, 3, &FdConfig::default()).unwrap();
    for n in 1..=3 {
        let f: Formula = if n == 1 {
            elementary_formula(n).unwrap().into()
        } else {
            delta_formula(n).unwrap().into()
        };
        let jet = lambert.float_jet(n).unwrap();
        let value = match &f {
            Formula::Delta(d) => eval_delta(d, &jet).unwrap(),
            Formula::Elementary(e) => eval_elementary(e, &jet).unwrap(),
            Formula::Inverse(_) => unreachable!(),
        };
        assert!(
            rel(value, fd[n as usize]) <= 1e-4,
            "lambert {n}: {value} vs {}",
            fd[n as usize]
        );
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn criterion_7() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 2..=6 {
        let theorem = delta_formula(n).unwrap();
        let specialized = specialize_fx_zero(&elementary_formula(n).unwrap());
        for i in 0..50 {
            let jet = random_rational_jet(&mut rng, n).unwrap();
            let direct = eval_delta(&theorem, &jet).unwrap();
            let shifted = eval_elementary(&specialized, &shift_jet(&jet, n).unwrap()).unwrap();
            assert_eq!(direct, shifted, "n = {n}, jet {i}");
        }
    }
}

/// Partitions of `total` into `parts` parts `>= 2`, as `part -> count`.
fn parts_at_least_two(total: u32, parts: u32, largest: u32) -> Vec<BTreeMap<u32, u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![BTreeMap::new()]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 2..=largest.min(total) {
        for mut rest in parts_at_least_two(total - first, parts - 1, first) {
            *rest.entry(first).or_insert(0) += 1;
            out.push(rest);
        }
    }
    out
}

fn criterion_8() {
    for n in 1..=6 {
        let mut expected = BTreeMap::new();
        for u in 0..n {
            for mu in parts_at_least_two(n + u - 1, u, n + u - 1) {
                let den: BigInt = mu
                    .iter()
                    .map(|(&j, &m)| fact(m) * num_traits::pow(fact(j), m as usize))
                    .product();
                let mag = BigRational::new(fact(n + u - 1), den);
                let c = if u % 2 == 0 { mag } else { -mag };
                expected.insert(
                    InverseMonomial {
                        g1_power: n + u,
                        derivs: mu,
                    },
                    c,
                );
            }
        }
        assert_eq!(
            inverse_function_formula(n).unwrap().to_map(),
            expected,
            "n = {n}"
        );
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 8] = [
        ("golden formulas for n = 2, 3, 4", criterion_1),
        ("triple equivalence for 2 <= n <= 9", criterion_2),
        ("recursion reconstruction for 2 <= n <= 8", criterion_3),
        ("coefficient identities", criterion_4),
        ("coefficient table and counts", criterion_5),
        ("numeric correctness", criterion_6),
        ("shift identity on random rational jets", criterion_7),
        ("inverse-function agreement for n <= 6", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {}: {verdict} ({name}, {secs:.2}s)", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
