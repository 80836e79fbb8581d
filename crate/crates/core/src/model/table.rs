//! Result tables and their text, CSV and JSON forms.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale, NAT_INF};

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub diagram: String,
    pub quantale: Quantale,
    /// Resource labels.
    pub rows: Vec<String>,
    /// Functionality labels.
    pub cols: Vec<String>,
    pub cells: Vec<Vec<QValue>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    diagram: &'a str,
    rows: &'a [String],
    cols: &'a [String],
    cells: Vec<Vec<Value>>,
}

impl ResultTable {
    pub fn cell(&self, r: &str, f: &str) -> Option<&QValue> {
        let i = self.rows.iter().position(|x| x == r)?;
        let j = self.cols.iter().position(|x| x == f)?;
        Some(&self.cells[i][j])
    }

    /// Cells rendered with 6 significant digits.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|v| self.quantale.render_short(v)).collect())
            .collect()
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let body = self.rendered();
        let mut widths: Vec<usize> = std::iter::once(self.rows.iter().map(|r| r.chars().count()).max().unwrap_or(0))
            .chain(self.cols.iter().map(|c| c.chars().count()))
            .collect();
        for row in &body {
            for (j, c) in row.iter().enumerate() {
                widths[j + 1] = widths[j + 1].max(c.chars().count());
            }
        }
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let mut out = String::new();
        let mut line = pad("", widths[0]);
        for (j, c) in self.cols.iter().enumerate() {
            line.push_str("  ");
            line.push_str(&pad(c, widths[j + 1]));
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
        for (r, row) in self.rows.iter().zip(&body) {
            let mut line = pad(r, widths[0]);
            for (j, c) in row.iter().enumerate() {
                line.push_str("  ");
                line.push_str(&pad(c, widths[j + 1]));
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Model(format!("csv: {e}"));
        let mut header = vec![self.diagram.clone()];
        header.extend(self.cols.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (r, row) in self.rows.iter().zip(self.rendered()) {
            let mut rec = vec![r.clone()];
            rec.extend(row);
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Model(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()?).map_err(|e| Error::Model(format!("cannot write {}: {e}", path.display())))
    }

    fn json_cell(&self, v: &QValue) -> Value {
        match v {
            QValue::Bool(b) => Value::Bool(*b),
            QValue::Real(x) if x.is_finite() => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            QValue::Nat(n) if *n != NAT_INF => Value::from(*n),
            other => Value::String(self.quantale.render_value(other)),
        }
    }

    /// JSON with keys `diagram`, `rows`, `cols`, `cells` in that order; full precision.
    pub fn to_json(&self) -> String {
        let t = JsonTable {
            diagram: &self.diagram,
            rows: &self.rows,
            cols: &self.cols,
            cells: self
                .cells
                .iter()
                .map(|row| row.iter().map(|v| self.json_cell(v)).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&t).expect("tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ResultTable {
        ResultTable {
            diagram: "d".into(),
            quantale: Quantale::cost(),
            rows: vec!["5W".into(), "10W".into()],
            cols: vec!["1 tgt".into(), "2, tgts".into()],
            cells: vec![
                vec![QValue::Real(70.0), QValue::inf()],
                vec![QValue::Real(1.0 / 3.0), QValue::Real(80.0)],
            ],
        }
    }

    #[test]
    fn csv_quoting_and_digits() {
        let csv = table().to_csv().unwrap();
        assert_eq!(csv, "d,1 tgt,\"2, tgts\"\n5W,70,inf\n10W,0.333333,80\n");
    }

    #[test]
    fn json_key_order() {
        let j = table().to_json();
        let (a, b, c, d) = (j.find("diagram"), j.find("rows"), j.find("cols"), j.find("cells"));
        assert!(a < b && b < c && c < d);
        let v: Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["cells"][0][1], "inf");
        assert_eq!(v["cells"][1][0].as_f64().unwrap(), 1.0 / 3.0);
    }
}
