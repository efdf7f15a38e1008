//! Pretty-printed JSON with floats at 17 significant digits.
//!
//! `serde_json` normally prints each float as the shortest decimal that
//! parses back to the same bits. The report contract here is a fixed
//! 17-significant-digit scientific form instead — the same shape the CSV
//! writers use — so float fields look identical across output formats and
//! still round-trip bit-exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{Error, Result};

/// Pretty formatter whose only change is rendering floats as `{:.16e}`.
#[derive(Default)]
struct Float17Pretty {
    inner: PrettyFormatter<'static>,
}

impl Formatter for Float17Pretty {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serializes a value as pretty-printed JSON (trailing newline included)
/// with every float at 17 significant digits.
pub fn to_pretty_json17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Float17Pretty::default());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidConfig { reason: format!("JSON serialization failed: {e}") })?;
    out.push(b'\n');
    String::from_utf8(out)
        .map_err(|e| Error::InvalidConfig { reason: format!("JSON output was not UTF-8: {e}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        x: f64,
        n: u64,
        tag: String,
        missing: Option<f64>,
    }

    #[test]
    fn floats_use_seventeen_significant_digits() {
        let text = to_pretty_json17(&Sample {
            x: 0.1,
            n: 7,
            tag: "ok".to_string(),
            missing: None,
        })
        .unwrap();
        assert!(text.contains("\"x\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"n\": 7"), "{text}");
        assert!(text.contains("\"missing\": null"), "{text}");
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn output_parses_back_to_identical_bits() {
        for value in [0.1, -3.25, 1.8265024176719282, f64::MIN_POSITIVE, 1e300] {
            let text = to_pretty_json17(&value).unwrap();
            let back: f64 = serde_json::from_str(text.trim()).unwrap();
            assert_eq!(back.to_bits(), value.to_bits(), "value {value:e} via {text}");
        }
    }

    #[test]
    fn arrays_keep_pretty_layout() {
        let text = to_pretty_json17(&vec![1.5, 2.5]).unwrap();
        assert_eq!(text, "[\n  1.5000000000000000e0,\n  2.5000000000000000e0\n]\n");
    }
}
