//! Potential JSON documents and deterministic float formatting.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::potential::Potential;

/// Formats a float with 17 significant digits, independent of locale.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty JSON formatter that writes every `f64` as [`fmt_float`].
struct FixedFloat<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FixedFloat<'_> {
    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Pretty-printed JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Value {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialDoc {
    periods: Vec<usize>,
    #[serde(default = "default_kind")]
    lattice: LatticeKind,
    values: Vec<Value>,
}

fn default_kind() -> LatticeKind {
    LatticeKind::Hypercubic
}

/// Real potentials are written with bare numbers, others with `[re, im]`.
pub fn potential_to_json(v: &Potential) -> Result<String> {
    let real = v.is_real();
    let values = v
        .values()
        .iter()
        .map(|c| if real { Value::Real(c.re) } else { Value::Pair([c.re, c.im]) })
        .collect();
    to_json(&PotentialDoc {
        periods: v.spec().periods().to_vec(),
        lattice: v.spec().kind(),
        values,
    })
}

pub fn potential_from_json(text: &str) -> Result<Potential> {
    let doc: PotentialDoc = serde_json::from_str(text)?;
    let spec = LatticeSpec::new(doc.periods, doc.lattice)?;
    let values = doc
        .values
        .into_iter()
        .map(|x| match x {
            Value::Real(re) => Complex64::new(re, 0.0),
            Value::Pair([re, im]) => Complex64::new(re, im),
        })
        .collect();
    Potential::new(spec, values)
}

pub fn read_potential(path: &std::path::Path) -> Result<Potential> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    potential_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{random_potential, PotentialMode};

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn potential_round_trip() {
        let spec = LatticeSpec::hypercubic(&[2, 3]).unwrap();
        for mode in [PotentialMode::Real, PotentialMode::Complex] {
            let v = random_potential(&spec, 3, &mode).unwrap();
            let text = potential_to_json(&v).unwrap();
            assert_eq!(potential_from_json(&text).unwrap(), v);
            assert_eq!(text, potential_to_json(&v).unwrap());
        }
    }

    #[test]
    fn bare_numbers_and_pairs_mix() {
        let v = potential_from_json(r#"{"periods":[2],"lattice":"hypercubic","values":[1,[0.5,-1]]}"#).unwrap();
        assert_eq!(v.values()[1], Complex64::new(0.5, -1.0));
        let tri = potential_from_json(r#"{"periods":[1,1],"lattice":"triangular","values":[2]}"#).unwrap();
        assert_eq!(tri.spec().kind(), LatticeKind::Triangular);
    }

    #[test]
    fn malformed_documents_fail() {
        assert!(potential_from_json(r#"{"periods":[2],"values":[1]}"#).is_err());
        assert!(potential_from_json(r#"{"periods":[0],"values":[]}"#).is_err());
        assert!(potential_from_json(r#"{"periods":[1],"values":[1],"extra":1}"#).is_err());
        assert!(potential_from_json("not json").is_err());
    }
}
