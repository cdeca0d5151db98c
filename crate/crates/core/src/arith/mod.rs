//! Exact arithmetic: arbitrary-precision rationals and Euclidean profiles.

mod euclid;
mod rational;

pub use euclid::EuclidProfile;
pub use rational::Rational;

use num_bigint::BigInt;

/// Serde adapter for `BigInt`: a JSON number when it fits in `i64`,
/// a decimal string otherwise. Both forms are accepted on input.
pub mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => x.serialize(s),
            None => s.collect_str(v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(BigInt::from(x)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }

    pub mod vec {
        use super::*;

        #[derive(Serialize)]
        struct Out<'a>(#[serde(with = "super")] &'a BigInt);

        #[derive(Deserialize)]
        struct In(#[serde(with = "super")] BigInt);

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(Out))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Ok(Vec::<In>::deserialize(d)?
                .into_iter()
                .map(|x| x.0)
                .collect())
        }
    }
}

/// `2^e` as a big integer.
pub fn pow2(e: usize) -> BigInt {
    BigInt::from(1u8) << e
}
