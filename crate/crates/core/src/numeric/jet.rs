use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Scalar;
use crate::coeffs::binomial;
use crate::error::{Error, Result};

/// Values of `f_{x^p y^t}` at a solution point `(x0, y0)` for `p + t <= order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    x0: S,
    y0: S,
    order: u32,
    partials: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> Jet<S> {
    /// Checks that every partial up to `order` is present, that `f` vanishes
    /// and that `f_y` does not.
    pub fn new(x0: S, y0: S, order: u32, partials: BTreeMap<(u32, u32), S>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("a jet needs order >= 1".into()));
        }
        for total in 0..=order {
            for p in 0..=total {
                let t = total - p;
                if !partials.contains_key(&(p, t)) {
                    return Err(Error::MissingPartial { p, t });
                }
            }
        }
        if let Some(&(p, t)) = partials.keys().find(|(p, t)| p + t > order) {
            return Err(Error::Domain(format!(
                "partial ({p},{t}) lies beyond the jet order {order}"
            )));
        }
        if !partials[&(0, 0)].vanishes() {
            return Err(Error::Domain(format!(
                "f = {:?} at the base point, not a solution",
                partials[&(0, 0)]
            )));
        }
        if partials[&(0, 1)].is_zero() {
            return Err(Error::SingularJet);
        }
        Ok(Jet {
            x0,
            y0,
            order,
            partials,
        })
    }

    pub fn x0(&self) -> &S {
        &self.x0
    }

    pub fn y0(&self) -> &S {
        &self.y0
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn partials(&self) -> &BTreeMap<(u32, u32), S> {
        &self.partials
    }

    pub fn get(&self, p: u32, t: u32) -> Result<&S> {
        self.partials
            .get(&(p, t))
            .ok_or(Error::MissingPartial { p, t })
    }

    pub fn fx(&self) -> &S {
        &self.partials[&(1, 0)]
    }

    pub fn fy(&self) -> &S {
        &self.partials[&(0, 1)]
    }

    /// Drops every partial above `order`.
    pub fn truncate(&self, order: u32) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder {
                need: order,
                have: self.order,
            });
        }
        let partials = self
            .partials
            .iter()
            .filter(|((p, t), _)| p + t <= order)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Jet::new(self.x0.clone(), self.y0.clone(), order, partials)
    }

    pub fn to_doc(&self) -> JetDoc {
        JetDoc {
            x0: self.x0.to_json(),
            y0: self.y0.to_json(),
            order: self.order,
            kind: S::KIND.to_string(),
            partials: self
                .partials
                .iter()
                .map(|((p, t), v)| (format!("{p},{t}"), v.to_json()))
                .collect(),
        }
    }

    fn from_doc(doc: &JetDoc) -> Result<Self> {
        let mut partials = BTreeMap::new();
        for (key, v) in &doc.partials {
            let parsed = key
                .split_once(',')
                .and_then(|(p, t)| Some((p.parse().ok()?, t.parse().ok()?)));
            let Some(pt) = parsed else {
                return Err(Error::Parse(format!("partial key {key:?} is not \"p,t\"")));
            };
            partials.insert(pt, S::from_json(v)?);
        }
        Jet::new(
            S::from_json(&doc.x0)?,
            S::from_json(&doc.y0)?,
            doc.order,
            partials,
        )
    }
}

/// On-disk jet document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub x0: Value,
    pub y0: Value,
    pub order: u32,
    pub kind: String,
    pub partials: BTreeMap<String, Value>,
}

/// A jet of either scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyJet {
    Float(Jet<f64>),
    Rational(Jet<BigRational>),
}

impl AnyJet {
    pub fn from_doc(doc: &JetDoc) -> Result<Self> {
        match doc.kind.as_str() {
            "float" => Jet::from_doc(doc).map(AnyJet::Float),
            "rational" => Jet::from_doc(doc).map(AnyJet::Rational),
            other => Err(Error::Parse(format!("unknown jet kind {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JetDoc = serde_json::from_str(text)?;
        AnyJet::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        let doc = match self {
            AnyJet::Float(j) => j.to_doc(),
            AnyJet::Rational(j) => j.to_doc(),
        };
        serde_json::to_string(&doc).expect("jet documents always serialize")
    }

    pub fn order(&self) -> u32 {
        match self {
            AnyJet::Float(j) => j.order(),
            AnyJet::Rational(j) => j.order(),
        }
    }
}

impl From<Jet<f64>> for AnyJet {
    fn from(j: Jet<f64>) -> Self {
        AnyJet::Float(j)
    }
}

impl From<Jet<BigRational>> for AnyJet {
    fn from(j: Jet<BigRational>) -> Self {
        AnyJet::Rational(j)
    }
}

/// Jet of `φ(x, z) = f(x, z + λx)` with `λ = -f_x / f_y`, truncated to order
/// `n`. Its first x-partial is zero and `φ_{x^l z^r} = Δ_l f_{y^r} / f_y^l`.
pub fn shift_jet<S: Scalar>(jet: &Jet<S>, n: u32) -> Result<Jet<S>> {
    if n > jet.order {
        return Err(Error::InsufficientOrder {
            need: n,
            have: jet.order,
        });
    }
    if jet.fy().is_zero() {
        return Err(Error::SingularJet);
    }
    let lambda = -(jet.fx().clone() / jet.fy().clone());
    let mut partials = BTreeMap::new();
    for total in 0..=n {
        for l in 0..=total {
            let r = total - l;
            let mut acc = S::zero();
            for k in 0..=l {
                let b = S::from_rational(&BigRational::from_integer(BigInt::from(binomial(
                    l as i64, k as i64,
                ))));
                acc = acc + b * pow(lambda.clone(), k as usize) * jet.get(l - k, r + k)?.clone();
            }
            partials.insert((l, r), acc);
        }
    }
    let z0 = jet.y0.clone() - lambda * jet.x0.clone();
    Jet::new(jet.x0.clone(), z0, n, partials)
}

/// A solution-point jet with small random rational entries and `f_y != 0`.
pub fn random_rational_jet<R: Rng>(rng: &mut R, order: u32) -> Result<Jet<BigRational>> {
    let mut small = |allow_zero: bool| loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=6);
        if allow_zero || num != 0 {
            return BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    };
    let mut partials = BTreeMap::new();
    for total in 0..=order {
        for p in 0..=total {
            let t = total - p;
            let v = match (p, t) {
                (0, 0) => BigRational::zero(),
                (0, 1) => small(false),
                _ => small(true),
            };
            partials.insert((p, t), v);
        }
    }
    let x0 = small(true);
    let y0 = small(true) + BigRational::one();
    Jet::new(x0, y0, order, partials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::eval_delta_block;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn line_jet() -> BTreeMap<(u32, u32), BigRational> {
        // f = 2y - 3x at the origin
        [((0, 0), q(0, 1)), ((1, 0), q(-3, 1)), ((0, 1), q(2, 1))]
            .into_iter()
            .collect()
    }

    #[test]
    fn validation() {
        assert!(Jet::new(q(0, 1), q(0, 1), 1, line_jet()).is_ok());

        let mut missing = line_jet();
        missing.remove(&(1, 0));
        assert!(matches!(
            Jet::new(q(0, 1), q(0, 1), 1, missing),
            Err(Error::MissingPartial { p: 1, t: 0 })
        ));

        let mut singular = line_jet();
        singular.insert((0, 1), q(0, 1));
        assert!(matches!(
            Jet::new(q(0, 1), q(0, 1), 1, singular),
            Err(Error::SingularJet)
        ));

        let mut off = line_jet();
        off.insert((0, 0), q(1, 2));
        assert!(matches!(
            Jet::new(q(0, 1), q(0, 1), 1, off),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn json_round_trip_and_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let jet: AnyJet = random_rational_jet(&mut rng, 4).unwrap().into();
        assert_eq!(AnyJet::from_json(&jet.to_json()).unwrap(), jet);

        let float =
            r#"{"x0":0,"y0":1,"order":1,"kind":"float","partials":{"0,0":0,"1,0":0.5,"0,1":2}}"#;
        assert!(matches!(
            AnyJet::from_json(float).unwrap(),
            AnyJet::Float(_)
        ));

        let mixed = r#"{"x0":0,"y0":1,"order":1,"kind":"rational","partials":{"0,0":"0","1,0":0.5,"0,1":"2/3"}}"#;
        assert!(matches!(AnyJet::from_json(mixed), Err(Error::MixedKinds)));

        let bad_key =
            r#"{"x0":0,"y0":1,"order":1,"kind":"float","partials":{"0 0":0,"1,0":0.5,"0,1":2}}"#;
        assert!(matches!(AnyJet::from_json(bad_key), Err(Error::Parse(_))));
    }

    #[test]
    fn shift_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let jet = random_rational_jet(&mut rng, 5).unwrap();
            let phi = shift_jet(&jet, 5).unwrap();
            assert!(phi.fx().is_zero());
            for total in 0..=5u32 {
                for l in 0..=total {
                    let r = total - l;
                    if l == 0 {
                        assert_eq!(phi.get(0, r).unwrap(), jet.get(0, r).unwrap());
                    }
                    let block = eval_delta_block(&jet, l, r).unwrap();
                    let expected = block / pow(jet.fy().clone(), l as usize);
                    if (l, r) != (0, 0) {
                        assert_eq!(phi.get(l, r).unwrap(), &expected, "({l},{r})");
                    }
                }
            }
        }
    }
}
