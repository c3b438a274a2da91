//! Chain file parsing and lossless numeric output.
//!
//! A chain file holds one number per line (blank lines ignored), or a CSV
//! with a header row when a column name is given. Floats are written with 17
//! significant digits so that every value survives a round trip.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::ChainOutput;

/// `{:.16e}`: 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_value(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("`{}` is not a number", field.trim()) })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, message: format!("`{}` is not finite", field.trim()) });
    }
    Ok(v)
}

/// Parses one value per line.
pub fn parse_chain_lines(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_value(l, i + 1))
        .collect()
}

/// Parses column `column` of a headed CSV.
pub fn parse_chain_csv(text: &str, column: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let idx = reader
        .headers()?
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::Parse { line: 1, message: format!("no column named `{column}`") })?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = record
            .get(idx)
            .ok_or_else(|| Error::Parse { line, message: format!("missing field `{column}`") })?;
        values.push(parse_value(field, line)?);
    }
    Ok(values)
}

pub fn parse_chain(text: &str, column: Option<&str>) -> Result<ChainOutput> {
    let values = match column {
        Some(c) => parse_chain_csv(text, c)?,
        None => parse_chain_lines(text)?,
    };
    ChainOutput::new(values)
}

pub fn read_chain(path: &Path, column: Option<&str>) -> Result<ChainOutput> {
    parse_chain(&fs::read_to_string(path)?, column)
}

/// One value per line.
pub fn chain_to_string(chain: &ChainOutput) -> String {
    let mut out = String::with_capacity(chain.len() * 24);
    for &v in chain.values() {
        out.push_str(&format_f64(v));
        out.push('\n');
    }
    out
}

/// Two-column CSV with a header row.
pub fn pairs_to_csv<X: std::fmt::Display>(header: (&str, &str), rows: impl IntoIterator<Item = (X, f64)>) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (x, v) in rows {
        out.push_str(&format!("{x},{}\n", format_f64(v)));
    }
    out
}

/// Pretty JSON formatter that prints floats with 17 significant digits.
struct LosslessFormatter(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for LosslessFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with 17-significant-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, LosslessFormatter(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            let mantissa = s.split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn line_format() {
        let c = parse_chain("1\n-1\n\n1\n-1\n", None).unwrap();
        assert_eq!(c.values(), &[1.0, -1.0, 1.0, -1.0]);
        let err = parse_chain("1\n2\nx\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_chain("", None).unwrap_err().to_string().contains("chain too short"));
        assert!(parse_chain("1\nnan\n", None).is_err());
    }

    #[test]
    fn csv_format() {
        let text = "iter,x,y\n1,0.5,3\n2,0.25,4\n3,-1,5\n";
        assert_eq!(parse_chain(text, Some("x")).unwrap().values(), &[0.5, 0.25, -1.0]);
        assert!(parse_chain(text, Some("z")).is_err());
        let err = parse_chain("x\n1\n2\nbad\n", Some("x")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn chain_round_trip() {
        let c = ChainOutput::new(vec![0.1, -1e-9, 3.0]).unwrap();
        assert_eq!(parse_chain(&chain_to_string(&c), None).unwrap(), c);
    }

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!({"a": 0.1, "b": [1.0, 2.5e-7], "c": null, "d": 3});
        let s = to_json(&v).unwrap();
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(to_json(&back).unwrap(), s);
    }
}
