//! Deterministic JSON and CSV output.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same `f64`. Non-finite values become `null` in JSON and `NaN`/`inf` in CSV.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::error::{Result, WitnessError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `serde_json` formatter with fixed-precision floats and two-space indent.
struct FixedFloats {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl FixedFloats {
    fn new() -> Self {
        Self {
            inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
        }
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_float(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedFloats::new());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| WitnessError::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json_string(value)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Provenance block at the top of every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header<C: Serialize> {
    pub version: &'static str,
    pub seed: u64,
    pub config: C,
}

impl<C: Serialize> Header<C> {
    pub fn new(seed: u64, config: C) -> Self {
        Self {
            version: VERSION,
            seed,
            config,
        }
    }
}

#[derive(Serialize)]
struct Document<'a, C: Serialize, T: Serialize + ?Sized> {
    header: &'a Header<C>,
    result: &'a T,
}

pub fn json_document<C: Serialize, T: Serialize + ?Sized>(header: &Header<C>, result: &T) -> Result<String> {
    to_json_string(&Document { header, result })
}

/// A CSV table. Cells are preformatted so callers control float precision.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

fn render(cell: Cell) -> String {
    match cell {
        Cell::Float(x) => format_float(x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s,
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row.into_iter().map(render).collect());
    }

    /// Header lines start with `#`, one `key: json` pair per line.
    pub fn to_csv<C: Serialize>(&self, header: &Header<C>) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# version: {}\n", header.version));
        out.push_str(&format!("# seed: {}\n", header.seed));
        let config = serde_json::to_string(&header.config)?;
        out.push_str(&format!("# config: {config}\n"));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Space-separated angle list for a single CSV cell.
pub fn angle_cell(angles: &[f64]) -> Cell {
    Cell::Text(angles.iter().map(|a| format_float(*a)).collect::<Vec<_>>().join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
    struct Sample {
        x: f64,
        v: Vec<f64>,
        name: String,
    }

    #[test]
    fn floats_round_trip_exactly() {
        let s = Sample {
            x: 0.1 + 0.2,
            v: vec![1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0],
            name: "a".into(),
        };
        let text = to_json_string(&s).unwrap();
        assert!(text.contains("3.0000000000000004e-1"));
        let back: Sample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn non_finite_is_null() {
        let text = to_json_string(&vec![f64::NAN, 1.0]).unwrap();
        let back: Vec<Option<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![None, Some(1.0)]);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["omega", "min_expectation", "angles"]);
        t.push(vec![0.5.into(), (-0.25).into(), angle_cell(&[1.0, 2.0])]);
        t.push(vec![1.0.into(), f64::NAN.into(), "x,y".into()]);
        let csv = t.to_csv(&Header::new(7, "cfg")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], format!("# version: {VERSION}"));
        assert_eq!(lines[1], "# seed: 7");
        assert_eq!(lines[3], "omega,min_expectation,angles");
        assert_eq!(
            lines[4],
            "5.0000000000000000e-1,-2.5000000000000000e-1,1.0000000000000000e0 2.0000000000000000e0"
        );
        assert_eq!(lines[5], "1.0000000000000000e0,NaN,\"x,y\"");
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = write_text(Path::new("/nonexistent-dir/x.json"), "{}").unwrap_err();
        match err {
            WitnessError::Io { path, .. } => assert_eq!(path, Path::new("/nonexistent-dir/x.json")),
            other => panic!("{other}"),
        }
    }
}
