use std::collections::BTreeMap;
use std::f64::consts::E;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{eval_any, AnyJet, AnyReport, Jet, Scalar};
use crate::coeffs::factorial;
use crate::error::{Error, Result};
use crate::formula::Formula;

pub const PROBLEM_NAMES: [&str; 4] = ["circle", "exp", "lambert", "cubic"];

/// A registered implicit equation `f(x, y) = 0` with a solution point.
#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub equation: &'static str,
    pub x0: f64,
    pub y0: f64,
    partial: fn(u32, u32, f64, f64) -> f64,
    exact_point: Option<(i64, i64)>,
    exact_partial: Option<fn(u32, u32) -> BigRational>,
    analytic: Option<fn(u32) -> BigRational>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn circle_partial(p: u32, t: u32, x: f64, y: f64) -> f64 {
    match (p, t) {
        (0, 0) => x * x + y * y - 1.0,
        (1, 0) => 2.0 * x,
        (0, 1) => 2.0 * y,
        (2, 0) | (0, 2) => 2.0,
        _ => 0.0,
    }
}

fn circle_exact(p: u32, t: u32) -> BigRational {
    match (p, t) {
        (0, 1) | (2, 0) | (0, 2) => q(2),
        _ => q(0),
    }
}

/// `y = sqrt(1 - x^2)`: `y^{(2k)}(0) = (2k)! binom(1/2, k) (-1)^k`, odd orders vanish.
fn circle_analytic(n: u32) -> BigRational {
    if n % 2 == 1 {
        return q(0);
    }
    let k = n / 2;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut falling = BigRational::one();
    for i in 0..k {
        falling *= &half - q(i as i64);
    }
    let ratio = BigRational::new(
        BigInt::from(factorial(n as u64)),
        BigInt::from(factorial(k as u64)),
    );
    let sign = if k.is_multiple_of(2) { q(1) } else { q(-1) };
    ratio * falling * sign
}

fn exp_partial(p: u32, t: u32, x: f64, y: f64) -> f64 {
    match (p, t) {
        (0, 0) => y - x.exp(),
        (_, 0) => -x.exp(),
        (0, 1) => 1.0,
        _ => 0.0,
    }
}

fn exp_exact(p: u32, t: u32) -> BigRational {
    match (p, t) {
        (0, 0) => q(0),
        (_, 0) => q(-1),
        (0, 1) => q(1),
        _ => q(0),
    }
}

fn lambert_partial(p: u32, t: u32, x: f64, y: f64) -> f64 {
    match (p, t) {
        (0, 0) => y * y.exp() - x,
        (1, 0) => -1.0,
        (0, t) => (y + t as f64) * y.exp(),
        _ => 0.0,
    }
}

fn cubic_partial(p: u32, t: u32, x: f64, y: f64) -> f64 {
    match (p, t) {
        (0, 0) => y * y * y + y - x,
        (1, 0) => -1.0,
        (0, 1) => 3.0 * y * y + 1.0,
        (0, 2) => 6.0 * y,
        (0, 3) => 6.0,
        _ => 0.0,
    }
}

fn cubic_exact(p: u32, t: u32) -> BigRational {
    match (p, t) {
        (1, 0) => q(-1),
        (0, 1) => q(4),
        (0, 2) | (0, 3) => q(6),
        _ => q(0),
    }
}

/// Looks up one of [`PROBLEM_NAMES`].
pub fn builtin_problem(name: &str) -> Result<ProblemSpec> {
    let spec = match name {
        "circle" => ProblemSpec {
            name: "circle",
            equation: "x^2 + y^2 - 1",
            x0: 0.0,
            y0: 1.0,
            partial: circle_partial,
            exact_point: Some((0, 1)),
            exact_partial: Some(circle_exact),
            analytic: Some(circle_analytic),
        },
        "exp" => ProblemSpec {
            name: "exp",
            equation: "y - e^x",
            x0: 0.0,
            y0: 1.0,
            partial: exp_partial,
            exact_point: Some((0, 1)),
            exact_partial: Some(exp_exact),
            analytic: Some(|_| q(1)),
        },
        "lambert" => ProblemSpec {
            name: "lambert",
            equation: "y e^y - x",
            x0: E,
            y0: 1.0,
            partial: lambert_partial,
            exact_point: None,
            exact_partial: None,
            analytic: None,
        },
        "cubic" => ProblemSpec {
            name: "cubic",
            equation: "y^3 + y - x",
            x0: 2.0,
            y0: 1.0,
            partial: cubic_partial,
            exact_point: Some((2, 1)),
            exact_partial: Some(cubic_exact),
            analytic: None,
        },
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(spec)
}

impl ProblemSpec {
    pub fn f(&self, x: f64, y: f64) -> f64 {
        (self.partial)(0, 0, x, y)
    }

    pub fn partial(&self, p: u32, t: u32, x: f64, y: f64) -> f64 {
        (self.partial)(p, t, x, y)
    }

    pub fn has_exact_jet(&self) -> bool {
        self.exact_partial.is_some()
    }

    pub fn float_jet(&self, order: u32) -> Result<Jet<f64>> {
        let mut partials = BTreeMap::new();
        for total in 0..=order {
            for p in 0..=total {
                partials.insert((p, total - p), self.partial(p, total - p, self.x0, self.y0));
            }
        }
        Jet::new(self.x0, self.y0, order, partials)
    }

    pub fn rational_jet(&self, order: u32) -> Result<Jet<BigRational>> {
        let (Some((x0, y0)), Some(exact)) = (self.exact_point, self.exact_partial) else {
            return Err(Error::Domain(format!(
                "problem {} has no exact-rational jet",
                self.name
            )));
        };
        let mut partials = BTreeMap::new();
        for total in 0..=order {
            for p in 0..=total {
                partials.insert((p, total - p), exact(p, total - p));
            }
        }
        Jet::new(q(x0), q(y0), order, partials)
    }

    /// `y^{(n)}(x0)` in closed form, where known.
    pub fn analytic(&self, n: u32) -> Option<BigRational> {
        self.analytic.map(|a| a(n))
    }

    /// Evaluates `F` on this problem's jet (exact when requested and
    /// available) and attaches the analytic and finite-difference targets.
    pub fn evaluate(&self, f: &Formula, exact: bool, fd: Option<&FdConfig>) -> Result<AnyReport> {
        let n = f.n();
        let order = n.max(1);
        let jet: AnyJet = if exact && self.has_exact_jet() {
            self.rational_jet(order)?.into()
        } else {
            self.float_jet(order)?.into()
        };
        let mut report = eval_any(f, &jet)?;
        if let Some(a) = self.analytic(n) {
            match &mut report {
                AnyReport::Float(r) => r.compare("analytic", &a.to_f64()),
                AnyReport::Rational(r) => r.compare("analytic", &a),
            }
        }
        if let Some(cfg) = fd {
            let est = finite_difference_derivatives(self, n, cfg)?;
            report.compare_float("finite_difference", est[n as usize]);
        }
        Ok(report)
    }
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 50;

/// Solves `f(x, y) = 0` for `y` by Newton's method from `guess`.
pub fn newton_solve(spec: &ProblemSpec, x: f64, guess: f64) -> Result<f64> {
    let mut y = guess;
    for _ in 0..NEWTON_MAX_ITER {
        let fv = spec.f(x, y);
        if fv.abs() <= NEWTON_TOL {
            return Ok(y);
        }
        let fy = spec.partial(0, 1, x, y);
        y -= fv / fy;
        if !y.is_finite() {
            break;
        }
    }
    Err(Error::NewtonDivergence { x })
}

/// Step sizes for the central differences; successive steps feed one
/// Richardson level.
#[derive(Debug, Clone, PartialEq)]
pub struct FdConfig {
    pub steps: Vec<f64>,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            steps: vec![1e-2, 5e-3, 2.5e-3],
        }
    }
}

/// Finite-difference weights for derivatives `0..=m` at `z` on the nodes `x`
/// (Fornberg's recurrence). `c[j][k]` weights `x[j]` for the k-th derivative.
fn fornberg(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len() - 1;
    let mut c = vec![vec![0.0; m + 1]; n + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..=n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

/// Half-width of the central stencil for the k-th derivative; every width
/// used here is fourth-order accurate.
fn half_width(k: u32) -> i32 {
    (k.div_ceil(2) + 1) as i32
}

const FD_ORDER: i32 = 4;

/// `[y(x0), y'(x0), ..., y^{(n)}(x0)]` from central differences of the
/// Newton-solved curve.
pub fn finite_difference_derivatives(
    spec: &ProblemSpec,
    n: u32,
    cfg: &FdConfig,
) -> Result<Vec<f64>> {
    if cfg.steps.is_empty() {
        return Err(Error::Domain(
            "finite differences need at least one step".into(),
        ));
    }
    let reach = half_width(n.max(1));
    let mut per_step: Vec<Vec<f64>> = Vec::with_capacity(cfg.steps.len());
    for &h in &cfg.steps {
        let x0 = spec.x0;
        if h.is_nan() || h <= 0.0 || x0 + h * 0.5 == x0 || h.powi(n as i32) == 0.0 {
            return Err(Error::StepUnderflow(h));
        }
        let mut ys = BTreeMap::new();
        let y_mid = newton_solve(spec, x0, spec.y0)?;
        ys.insert(0, y_mid);
        for dir in [1, -1] {
            let mut prev = y_mid;
            for i in 1..=reach {
                let y = newton_solve(spec, x0 + (dir * i) as f64 * h, prev)?;
                ys.insert(dir * i, y);
                prev = y;
            }
        }
        let mut derivs = vec![y_mid];
        for k in 1..=n {
            let w = half_width(k);
            let nodes: Vec<f64> = (-w..=w).map(f64::from).collect();
            let c = fornberg(0.0, &nodes, k as usize);
            let sum: f64 = (-w..=w)
                .zip(&c)
                .map(|(i, row)| row[k as usize] * ys[&i])
                .sum();
            derivs.push(sum / h.powi(k as i32));
        }
        per_step.push(derivs);
    }
    let last = per_step.len() - 1;
    if last == 0 {
        return Ok(per_step.pop().unwrap_or_default());
    }
    let rho = (cfg.steps[last - 1] / cfg.steps[last]).powi(FD_ORDER);
    Ok(per_step[last]
        .iter()
        .zip(&per_step[last - 1])
        .map(|(fine, coarse)| (rho * fine - coarse) / (rho - 1.0))
        .collect())
}
