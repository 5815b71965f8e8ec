//! Serialization of exact rationals as `"p/q"` strings.

use serde::ser::{SerializeSeq, Serializer};

use crate::rational::{format_rational, Rational};

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&format_rational(q))?;
    }
    seq.end()
}

pub fn rational_matrix<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let strings: Vec<String> = row.iter().map(format_rational).collect();
        seq.serialize_element(&strings)?;
    }
    seq.end()
}
