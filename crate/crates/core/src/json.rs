//! JSON encoding shared by every file format: rationals are strings `"p/q"`
//! (or `"p"` when integral), vectors are arrays, matrices are arrays of rows.
//! Plain JSON integers are accepted on input.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::exactlin::{format_rational, parse_rational, Matrix, Rational, Vector};

struct RatOut<'a>(&'a Rational);

impl Serialize for RatOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(self.0))
    }
}

struct RatIn(Rational);

impl<'de> Deserialize<'de> for RatIn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(RatIn(crate::exactlin::int(n))),
            Repr::Text(s) => parse_rational(&s)
                .map(RatIn)
                .ok_or_else(|| de::Error::custom(format!("invalid rational {s:?}"))),
        }
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RatOut(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Ok(RatIn::deserialize(d)?.0)
    }
}

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&RatOut(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector, D::Error> {
        Ok(Vec::<RatIn>::deserialize(d)?
            .into_iter()
            .map(|r| r.0)
            .collect())
    }
}

pub mod vectors {
    use super::*;

    struct VecOut<'a>(&'a [Rational]);

    impl Serialize for VecOut<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::vector::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(vs: &[Vector], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(vs.len()))?;
        for v in vs {
            seq.serialize_element(&VecOut(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vector>, D::Error> {
        Ok(Vec::<Vec<RatIn>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(|r| r.0).collect())
            .collect())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        vectors::serialize(&self.row_vectors(), s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = vectors::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(de::Error::custom("matrix rows have different lengths"));
        }
        Ok(Matrix::from_rows(&rows, cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, ratio};

    #[test]
    fn matrix_encoding() {
        let m = Matrix::new(2, 2, vec![ratio(1, 2), int(-3), int(0), ratio(-7, 4)]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[["1/2","-3"],["0","-7/4"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&text).unwrap(), m);
        let plain: Matrix = serde_json::from_str("[[1, 2], [\"3/6\", 4]]").unwrap();
        assert_eq!(plain[(1, 0)], ratio(1, 2));
        assert!(serde_json::from_str::<Matrix>("[[1],[1,2]]").is_err());
        assert!(serde_json::from_str::<Matrix>(r#"[["1/0"]]"#).is_err());
    }
}
