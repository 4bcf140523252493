//! Serde helpers: big integers travel as decimal strings.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

use crate::linalg::IntMatrix;

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

pub mod big_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.rows()))?;
        for i in 0..m.rows() {
            let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(value_to_big).collect::<Result<Vec<_>, String>>())
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }

    pub(crate) fn value_to_big(v: &serde_json::Value) -> Result<BigInt, String> {
        match v {
            serde_json::Value::Number(n) => n.to_string().parse().map_err(|_| format!("non-integer entry {n}")),
            serde_json::Value::String(s) => s.trim().parse().map_err(|_| format!("non-integer entry '{s}'")),
            other => Err(format!("non-integer entry {other}")),
        }
    }
}

pub mod matrix_opt {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<IntMatrix>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(m) => super::matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }
}

pub mod matrix_vec {
    use super::*;
    use serde::Serialize;

    struct Wrap<'a>(&'a IntMatrix);

    impl Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::matrix::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(ms: &[IntMatrix], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(ms.len()))?;
        for m in ms {
            seq.serialize_element(&Wrap(m))?;
        }
        seq.end()
    }
}
