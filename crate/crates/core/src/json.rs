//! Serde helpers. Integers that fit in `i64` are written as JSON numbers,
//! larger ones as decimal strings.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::{ScaledPoly, UnivariateIntPoly};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(c: &BigInt) -> Self {
        c.to_i64()
            .map_or_else(|| IntRepr::Big(c.to_string()), IntRepr::Small)
    }

    fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(v)),
            IntRepr::Big(s) => s
                .parse()
                .map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

pub fn big_uint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    IntRepr::from_big(&BigInt::from(v.clone())).serialize(s)
}

/// `UnivariateIntPoly` as `[[exponent, coefficient], ...]`.
pub mod int_terms {
    use super::*;

    pub fn serialize<S: Serializer>(p: &UnivariateIntPoly, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(u64, IntRepr)> = p
            .terms()
            .iter()
            .map(|(e, c)| (*e, IntRepr::from_big(c)))
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UnivariateIntPoly, D::Error> {
        let v: Vec<(u64, IntRepr)> = Vec::deserialize(d)?;
        let terms = v
            .into_iter()
            .map(|(e, c)| c.into_big::<D::Error>().map(|c| (e, c)))
            .collect::<Result<Vec<_>, _>>()?;
        UnivariateIntPoly::from_terms(terms).map_err(D::Error::custom)
    }
}

/// `Vec<BigInt>` as a JSON array of numbers-or-strings.
pub mod int_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<IntRepr> = v.iter().map(IntRepr::from_big).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<IntRepr> = Vec::deserialize(d)?;
        v.into_iter().map(IntRepr::into_big::<D::Error>).collect()
    }
}

impl Serialize for ScaledPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            numerator: Vec<(u64, IntRepr)>,
            denominator: IntRepr,
            text: String,
        }
        Repr {
            numerator: self
                .numerator
                .terms()
                .iter()
                .map(|(e, c)| (*e, IntRepr::from_big(c)))
                .collect(),
            denominator: IntRepr::from_big(&BigInt::from(self.denominator.clone())),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap(#[serde(with = "int_terms")] UnivariateIntPoly);

    #[test]
    fn small_and_big_coefficients() {
        let p: UnivariateIntPoly = "123456789012345678901234567890*z^3 - 2*z + 1"
            .parse()
            .unwrap();
        let s = serde_json::to_string(&Wrap(p.clone())).unwrap();
        assert_eq!(s, r#"[[3,"123456789012345678901234567890"],[1,-2],[0,1]]"#);
        let back: Wrap = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, p);
    }
}
