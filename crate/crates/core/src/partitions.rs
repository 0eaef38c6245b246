//! Vector-partition families indexing the terms of `y^{(n)}`.
//!
//! * `A_n`: multiplicities `m_{l,r}` over keys with `l + r >= 2` such that
//!   `Σ l·m = n` and `Σ (r-1)·m = -1`. Stratum `h = Σ m` lies in `1..=n-1`.
//! * `Ã_n`: the same systems with the `(0,1)` count filled in so that
//!   `Σ m = n - 1`.
//! * `B_n`: multiplicities `s_{p,t}` that additionally allow the key `(1,0)`,
//!   with `Σ p·s = n` and `Σ (t-1)·s = -1`. Stratum `k = Σ s` lies in
//!   `1..=2n-1`.
//!
//! Enumerations are returned in a fixed order: by stratum, then by the
//! descending key list (larger first).

use std::collections::BTreeMap;
use std::fmt;

pub use implicit_jet_symbolic::{Multiplicities, VectorKey};

use crate::error::{Error, Result};

/// Default upper bound on `n` for every enumeration.
pub const DEFAULT_MAX_N: u32 = 30;

const FX: VectorKey = VectorKey::new(1, 0);
const FY: VectorKey = VectorKey::new(0, 1);
const K20: VectorKey = VectorKey::new(2, 0);
const K11: VectorKey = VectorKey::new(1, 1);

/// Cap on the derivative order. Raising it past [`DEFAULT_MAX_N`] is an
/// explicit opt-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl Limits {
    pub fn new(max_n: u32) -> Self {
        Limits { max_n }
    }

    pub fn check(&self, n: u32) -> Result<()> {
        if n > self.max_n {
            Err(Error::OverCap { n, max: self.max_n })
        } else {
            Ok(())
        }
    }

    pub fn enumerate_a(&self, n: u32) -> Result<Vec<Multiplicities>> {
        if n < 2 {
            return Err(Error::Domain(format!("A_n needs n >= 2, got {n}")));
        }
        self.check(n)?;
        let keys = candidate_keys(n, n.saturating_sub(2));
        let mut out = Vec::new();
        descend(
            &keys,
            0,
            (n - 1) as u64,
            n as u64,
            true,
            &mut Multiplicities::new(),
            &mut out,
        );
        out.sort_by(|a, b| a.stratified_cmp(b));
        Ok(out)
    }

    pub fn enumerate_b(&self, n: u32) -> Result<Vec<Multiplicities>> {
        if n < 1 {
            return Err(Error::Domain("B_n needs n >= 1".into()));
        }
        self.check(n)?;
        let keys = candidate_keys(n, n);
        let mut out = Vec::new();
        descend(
            &keys,
            0,
            (n - 1) as u64,
            n as u64,
            false,
            &mut Multiplicities::new(),
            &mut out,
        );
        out.sort_by(|a, b| a.stratified_cmp(b));
        Ok(out)
    }
}

/// Keys `(l, r)` with `2 <= l + r <= n` and `r <= max_r`, canonical order.
fn candidate_keys(n: u32, max_r: u32) -> Vec<VectorKey> {
    let mut keys = Vec::new();
    for l in 0..=n {
        for r in 0..=max_r.min(n - l) {
            if l + r >= 2 {
                keys.push(VectorKey::new(l, r));
            }
        }
    }
    keys
}

/// Distributes `budget = Σ (l + r - 1)·m` over `keys[idx..]`, tracking the
/// remaining `Σ l·m`. With `exact_l` the x-count must be used up exactly;
/// otherwise the leftover becomes the `(1,0)` count.
fn descend(
    keys: &[VectorKey],
    idx: usize,
    budget: u64,
    l_left: u64,
    exact_l: bool,
    current: &mut Multiplicities,
    out: &mut Vec<Multiplicities>,
) {
    if budget == 0 {
        if exact_l {
            if l_left == 0 {
                out.push(current.clone());
            }
        } else {
            let mut gamma = current.clone();
            gamma.set(FX, l_left as u32);
            out.push(gamma);
        }
        return;
    }
    let Some(&key) = keys.get(idx) else {
        return;
    };
    let w = (key.weight() - 1) as u64;
    let mut max_c = budget / w;
    if key.l > 0 {
        max_c = max_c.min(l_left / key.l as u64);
    }
    for c in (0..=max_c).rev() {
        current.set(key, c as u32);
        descend(
            keys,
            idx + 1,
            budget - c * w,
            l_left - c * key.l as u64,
            exact_l,
            current,
            out,
        );
    }
    current.set(key, 0);
}

/// `A_n` with the default cap.
pub fn enumerate_a(n: u32) -> Result<Vec<Multiplicities>> {
    Limits::default().enumerate_a(n)
}

/// `B_n` with the default cap.
pub fn enumerate_b(n: u32) -> Result<Vec<Multiplicities>> {
    Limits::default().enumerate_b(n)
}

/// The stratum `A_{n,h}`.
pub fn enumerate_a_stratum(n: u32, h: u32) -> Result<Vec<Multiplicities>> {
    PartitionFamilyTag::new(Family::A, n, Some(h))?;
    Ok(enumerate_a(n)?
        .into_iter()
        .filter(|a| a.total() == h as u64)
        .collect())
}

/// The stratum `B_{n,k}`.
pub fn enumerate_b_stratum(n: u32, k: u32) -> Result<Vec<Multiplicities>> {
    PartitionFamilyTag::new(Family::B, n, Some(k))?;
    Ok(enumerate_b(n)?
        .into_iter()
        .filter(|g| g.total() == k as u64)
        .collect())
}

pub fn is_in_a(alpha: &Multiplicities, n: u32) -> bool {
    !alpha.is_empty()
        && alpha.keys().all(|k| k.weight() >= 2)
        && alpha.sum_l() == n as u64
        && alpha.sum_r() + 1 == alpha.total()
}

pub fn is_in_a_tilde(alpha: &Multiplicities, n: u32) -> bool {
    n >= 2
        && !alpha.contains((0, 0))
        && !alpha.contains(FX)
        && alpha.total() == (n - 1) as u64
        && alpha.sum_l() == n as u64
        && alpha.sum_r() == (n - 2) as u64
}

pub fn is_in_b(gamma: &Multiplicities, n: u32) -> bool {
    !gamma.contains((0, 0))
        && !gamma.contains(FY)
        && gamma.sum_l() == n as u64
        && gamma.sum_r() + 1 == gamma.total()
}

/// `A_n -> Ã_n`: fills in `m_{0,1} = n - 1 - Σ m`.
pub fn lift_to_tilde(alpha: &Multiplicities, n: u32) -> Result<Multiplicities> {
    if !is_in_a(alpha, n) {
        return Err(Error::Domain(format!("{alpha} is not in A_{n}")));
    }
    let mut lifted = alpha.clone();
    lifted.set(FY, (n as u64 - 1 - alpha.total()) as u32);
    Ok(lifted)
}

/// `Ã_n -> A_n`: forgets the `(0,1)` count.
pub fn drop_tilde(alpha: &Multiplicities) -> Multiplicities {
    alpha.without(FY)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    ATilde,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::ATilde => "A~",
            Family::B => "B",
        })
    }
}

/// Names one family (optionally one stratum of it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionFamilyTag {
    pub family: Family,
    pub n: u32,
    pub stratum: Option<u32>,
}

impl PartitionFamilyTag {
    pub fn new(family: Family, n: u32, stratum: Option<u32>) -> Result<Self> {
        let (min_n, max_stratum) = match family {
            Family::A | Family::ATilde => (2, n.saturating_sub(1)),
            Family::B => (1, (2 * n).saturating_sub(1)),
        };
        if n < min_n {
            return Err(Error::Domain(format!("{family}_n needs n >= {min_n}")));
        }
        if let Some(s) = stratum {
            if family == Family::ATilde || s < 1 || s > max_stratum {
                return Err(Error::Domain(format!(
                    "stratum {s} invalid for {family}_{n}"
                )));
            }
        }
        Ok(PartitionFamilyTag { family, n, stratum })
    }

    pub fn enumerate(&self, limits: &Limits) -> Result<Vec<Multiplicities>> {
        let all = match self.family {
            Family::A => limits.enumerate_a(self.n)?,
            Family::ATilde => limits
                .enumerate_a(self.n)?
                .iter()
                .map(|a| lift_to_tilde(a, self.n))
                .collect::<Result<_>>()?,
            Family::B => limits.enumerate_b(self.n)?,
        };
        Ok(match self.stratum {
            None => all,
            Some(s) => all.into_iter().filter(|m| m.total() == s as u64).collect(),
        })
    }
}

/// A refinement `q_{p,t,j}` of `γ`: how many `(p,t)`-boxes had exactly `j`
/// of their `t` slots drawn. Keys are `((p,t), j)`; zero counts are absent.
pub type ZSystem = BTreeMap<(VectorKey, u32), u32>;

/// All systems with `Σ_j q_{p,t,j} = s_{p,t}` for every key `p + t >= 2` of
/// `gamma` and `Σ j·q_{p,t,j} = s10`. Keys of `gamma` with `p + t < 2` (such
/// as the `(1,0)` count) take no part.
pub fn enumerate_z(gamma: &Multiplicities, s10: u32) -> Vec<ZSystem> {
    let boxes: Vec<(VectorKey, u32)> = gamma.iter().filter(|(k, _)| k.weight() >= 2).collect();
    let mut out = Vec::new();
    z_descend(&boxes, 0, s10, &mut ZSystem::new(), &mut out);
    out
}

fn z_descend(
    boxes: &[(VectorKey, u32)],
    idx: usize,
    left: u32,
    current: &mut ZSystem,
    out: &mut Vec<ZSystem>,
) {
    let Some(&(key, s)) = boxes.get(idx) else {
        if left == 0 {
            out.push(current.clone());
        }
        return;
    };
    let mut parts = vec![0u32; key.r as usize + 1];
    split_count(s, 0, left, &mut parts, &mut |parts, used| {
        for (j, &q) in parts.iter().enumerate() {
            if q > 0 {
                current.insert((key, j as u32), q);
            }
        }
        z_descend(boxes, idx + 1, left - used, current, out);
        for j in 0..parts.len() {
            current.remove(&(key, j as u32));
        }
    });
}

/// Weak compositions of `s` into `parts.len()` slots with `Σ j·q_j <= cap`.
fn split_count(s: u32, j: usize, cap: u32, parts: &mut [u32], visit: &mut dyn FnMut(&[u32], u32)) {
    let last = parts.len() - 1;
    if j == last {
        let used_before: u32 = parts[..last]
            .iter()
            .enumerate()
            .map(|(i, q)| i as u32 * q)
            .sum();
        let used = used_before + last as u32 * s;
        if used <= cap {
            parts[last] = s;
            visit(parts, used);
            parts[last] = 0;
        }
        return;
    }
    for q in 0..=s {
        parts[j] = q;
        split_count(s - q, j + 1, cap, parts, visit);
    }
    parts[j] = 0;
}

/// Which backward step produced a predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredecessorKind {
    /// One x-slot removed from a pivot block with `l >= 1`, `l + r >= 3`.
    Minus,
    /// A `(2,0)` block absorbed into a pivot with `r >= 1`, pivot not `(1,1)`.
    B,
    /// A `(1,1)` block removed.
    D,
}

impl fmt::Display for PredecessorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredecessorKind::Minus => "minus",
            PredecessorKind::B => "b",
            PredecessorKind::D => "d",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorRecord {
    pub kind: PredecessorKind,
    pub pivot: Option<VectorKey>,
    pub predecessor: Multiplicities,
}

impl PredecessorRecord {
    /// Applies the forward step matching this record to the lifted
    /// predecessor, giving an element of `Ã_{n+1}`.
    pub fn reapply(&self, n: u32) -> Result<Option<Multiplicities>> {
        let lifted = lift_to_tilde(&self.predecessor, n)?;
        Ok(match (self.kind, self.pivot) {
            (PredecessorKind::Minus, Some(p)) => {
                plus_neighbor(&lifted, VectorKey::new(p.l - 1, p.r))
            }
            (PredecessorKind::B, Some(p)) => {
                transfer_neighbor(&lifted, VectorKey::new(p.l + 1, p.r - 1))
            }
            (PredecessorKind::D, None) => Some(mixed_neighbor(&lifted)),
            _ => None,
        })
    }
}

/// All backward steps from `beta ∈ A_{n+1}` into `A_n`.
pub fn predecessors(beta: &Multiplicities, n_plus_1: u32) -> Result<Vec<PredecessorRecord>> {
    if n_plus_1 < 3 || !is_in_a(beta, n_plus_1) {
        return Err(Error::Domain(format!(
            "{beta} is not in A_{n_plus_1} (with n + 1 >= 3)"
        )));
    }
    let n = n_plus_1 - 1;
    let mut out = Vec::new();
    for (key, _) in beta.iter() {
        if key.l >= 1 && key.weight() >= 3 {
            let mut pred = beta.clone();
            pred.decrement(key);
            pred.increment((key.l - 1, key.r));
            out.push(PredecessorRecord {
                kind: PredecessorKind::Minus,
                pivot: Some(key),
                predecessor: pred,
            });
        }
    }
    if beta.contains(K20) {
        for (key, _) in beta.iter() {
            if key.r >= 1 && key != K11 {
                let mut pred = beta.clone();
                pred.decrement(key);
                pred.decrement(K20);
                pred.increment((key.l + 1, key.r - 1));
                out.push(PredecessorRecord {
                    kind: PredecessorKind::B,
                    pivot: Some(key),
                    predecessor: pred,
                });
            }
        }
    }
    if beta.contains(K11) {
        let mut pred = beta.clone();
        pred.decrement(K11);
        out.push(PredecessorRecord {
            kind: PredecessorKind::D,
            pivot: None,
            predecessor: pred,
        });
    }
    for rec in &out {
        if !is_in_a(&rec.predecessor, n) {
            return Err(Error::Internal(format!(
                "{} predecessor {} of {beta} left A_{n}",
                rec.kind, rec.predecessor
            )));
        }
    }
    Ok(out)
}

/// `α̃₊`: one `(l,r)` block becomes `(l+1,r)` and an `f_y` factor appears.
/// Defined for `l + r >= 2` with `m_{l,r} >= 1`.
pub fn plus_neighbor(alpha: &Multiplicities, key: VectorKey) -> Option<Multiplicities> {
    if key.weight() < 2 || !alpha.contains(key) {
        return None;
    }
    let mut out = alpha.clone();
    out.decrement(key);
    out.increment((key.l + 1, key.r));
    out.increment(FY);
    Some(out)
}

/// `α̃_t`: one `(l,r)` block becomes `(l-1,r+1)` and a `(2,0)` block appears.
/// Defined for `l >= 1`, `(l,r) != (2,0)`, `m_{l,r} >= 1`.
pub fn transfer_neighbor(alpha: &Multiplicities, key: VectorKey) -> Option<Multiplicities> {
    if key.l < 1 || key == K20 || !alpha.contains(key) {
        return None;
    }
    let mut out = alpha.clone();
    out.decrement(key);
    out.increment((key.l - 1, key.r + 1));
    out.increment(K20);
    Some(out)
}

/// `α̃_m`: one more `(1,1)` block.
pub fn mixed_neighbor(alpha: &Multiplicities) -> Multiplicities {
    let mut out = alpha.clone();
    out.increment(K11);
    out
}
