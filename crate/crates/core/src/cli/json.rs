//! JSON conventions: integers that fit in 64 bits are emitted as numbers and
//! larger ones as decimal strings; rationals are always `"n/d"` strings.

use std::io;

use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::exactarith::{rational_to_string, Integer, Rational};

pub fn ser_int<S: Serializer>(n: &Integer, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.collect_str(n),
    }
}

pub fn ser_int_vec<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for n in v {
        seq.serialize_element(&Int(n))?;
    }
    seq.end()
}

pub fn ser_int_array<S: Serializer>(v: &[Integer; 3], s: S) -> Result<S::Ok, S::Error> {
    ser_int_vec(v, s)
}

pub fn ser_points<S: Serializer>(v: &[[Integer; 3]], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for p in v {
        seq.serialize_element(&IntSlice(p))?;
    }
    seq.end()
}

pub fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

pub fn ser_rational_array<S: Serializer>(v: &[Rational; 3], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(3))?;
    for q in v {
        seq.serialize_element(&rational_to_string(q))?;
    }
    seq.end()
}

/// Borrowed integer with the JSON convention above.
pub struct Int<'a>(pub &'a Integer);

impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_int(self.0, s)
    }
}

pub struct IntSlice<'a>(pub &'a [Integer]);

impl Serialize for IntSlice<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_int_vec(self.0, s)
    }
}

/// Single-line output with a space after every `:` and `,`.
pub struct SpacedFormatter;

impl Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// One-line rendering used by the subcommands.
pub fn to_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Width below which a nested value is kept on one line.
const INLINE_WIDTH: usize = 100;

/// Multi-line rendering used for reports. Nested values that fit in [`INLINE_WIDTH`] stay on one line.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("in-memory serialization");
    let mut out = String::new();
    write_pretty(&v, 0, &mut out);
    out
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    if indent > 0 && (v.is_array() || v.is_object()) {
        let line = to_line(v);
        if 2 * indent + line.len() <= INLINE_WIDTH {
            out.push_str(&line);
            return;
        }
    }
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_pretty(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&to_line(k));
                out.push_str(": ");
                write_pretty(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&to_line(scalar)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample<'a> {
        symbol: i8,
        invariant: &'a str,
        #[serde(serialize_with = "ser_int_vec")]
        values: Vec<Integer>,
    }

    #[test]
    fn spaced_line_format() {
        let big: Integer = "123456789012345678901234567890".parse().unwrap();
        let s = Sample {
            symbol: -1,
            invariant: "1/2",
            values: vec![Integer::from(16), big],
        };
        assert_eq!(
            to_line(&s),
            r#"{"symbol": -1, "invariant": "1/2", "values": [16, "123456789012345678901234567890"]}"#
        );
    }

    #[test]
    fn pretty_keeps_short_values_inline() {
        let long = "x".repeat(90);
        let v =
            serde_json::json!({"b": [[0, 1, 1], [1, 1, 1]], "a": {}, "c": [{"k": long}], "d": "x"});
        assert_eq!(
            to_pretty(&v),
            format!("{{\n  \"b\": [[0, 1, 1], [1, 1, 1]],\n  \"a\": {{}},\n  \"c\": [\n    {{\n      \"k\": \"{long}\"\n    }}\n  ],\n  \"d\": \"x\"\n}}")
        );
    }
}
