//! Rationals as strings (`"3/2"`, `"-1"`) in JSON; plain integers are also
//! accepted on input.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

use super::poly::Q;
use crate::error::{Error, Result};

pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::parse(1, 1, format!("invalid rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.len() <= 200 && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n) || !ok(d) || d.starts_with('-') {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok(Q::new(n, d))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QIn {
    Int(i64),
    Str(String),
}

fn from_in<E: de::Error>(v: QIn) -> std::result::Result<Q, E> {
    match v {
        QIn::Int(i) => Ok(Q::from_integer(i.into())),
        QIn::Str(s) => parse_q(&s).map_err(E::custom),
    }
}

pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q_to_string(x))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    from_in(QIn::deserialize(d)?)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(x.len()))?;
        for v in x {
            seq.serialize_element(&q_to_string(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<QIn>::deserialize(d)?.into_iter().map(from_in).collect()
    }
}

pub mod pairs {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(x: &[(Q, Q)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(x.len()))?;
        for (a, b) in x {
            seq.serialize_element(&[q_to_string(a), q_to_string(b)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(Q, Q)>, D::Error> {
        Vec::<(QIn, QIn)>::deserialize(d)?
            .into_iter()
            .map(|(a, b)| Ok((from_in(a)?, from_in(b)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::qr;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("-3/6").unwrap(), qr(-1, 2));
        assert_eq!(parse_q(" 7 ").unwrap(), qr(7, 1));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("1/-2").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
        assert_eq!(q_to_string(&qr(4, -6)), "-2/3");
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&q_to_string(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<QIn>::deserialize(d)?.map(from_in).transpose()
    }
}
