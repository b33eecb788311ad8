//! Output documents. Floats are written with 17 significant digits so that
//! every value round-trips exactly and identical jobs give identical bytes.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::CliError;

/// A float serialized as `d.dddddddddddddddde±x`, or `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn rows(m: &isospec::Matrix) -> Vec<Vec<Num>> {
    (0..m.rows()).map(|i| nums(m.row(i))).collect()
}

#[derive(Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
}

impl Header {
    pub fn new(command: &'static str) -> Self {
        Header {
            tool: "isospec",
            version: env!("CARGO_PKG_VERSION"),
            command,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<T> {
    pub header: Header,
    pub result: T,
}

pub fn to_json<T: Serialize>(command: &'static str, result: T) -> Result<String, CliError> {
    let doc = Document {
        header: Header::new(command),
        result,
    };
    let mut out =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

/// One line of the convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub t: f64,
    pub quantity: String,
    pub exact: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

pub fn to_csv(rows: &[CsvRow]) -> Result<String, CliError> {
    let err = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "quantity", "exact", "predicted", "rel_error"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            format_f64(r.t),
            r.quantity.clone(),
            format_f64(r.exact),
            format_f64(r.predicted),
            format_f64(r.rel_error),
        ])
        .map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, -1.0 / 3.0, 5f64.sqrt(), 1e-300, 6.02e23, 0.0] {
            let s = serde_json::to_string(&Num(x)).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back, x, "{s}");
        }
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        assert_eq!(format_f64(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn csv_header_and_quoting() {
        let out = to_csv(&[CsvRow {
            t: 0.1,
            quantity: "height_sq[1]".into(),
            exact: 1.0,
            predicted: 2.0,
            rel_error: 0.5,
        }])
        .unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("t,quantity,exact,predicted,rel_error"));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("1.0000000000000001e-1,height_sq[1],"));
    }
}
