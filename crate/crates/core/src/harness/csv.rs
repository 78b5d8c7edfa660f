//! Fixed-format CSV: header row, `,` separator, `\n` line endings, reals
//! with 9 significant digits (`%.9g` style) and bare integers.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Real(Vec<f64>),
    Int(Vec<i64>),
    Text(Vec<String>),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Real(v) => v.len(),
            ColumnData::Int(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }

    fn render(&self, row: usize, out: &mut String) {
        match self {
            ColumnData::Real(v) => out.push_str(&format_real(v[row])),
            ColumnData::Int(v) => out.push_str(&v[row].to_string()),
            ColumnData::Text(v) => out.push_str(&v[row]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real(mut self, name: &str, values: Vec<f64>) -> Self {
        self.columns.push(Column {
            name: name.to_owned(),
            data: ColumnData::Real(values),
        });
        self
    }

    pub fn int(mut self, name: &str, values: Vec<i64>) -> Self {
        self.columns.push(Column {
            name: name.to_owned(),
            data: ColumnData::Int(values),
        });
        self
    }

    pub fn text(mut self, name: &str, values: Vec<String>) -> Self {
        self.columns.push(Column {
            name: name.to_owned(),
            data: ColumnData::Text(values),
        });
        self
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn column(&self, name: &str) -> Option<&ColumnData> {
        self.columns.iter().find(|c| c.name == name).map(|c| &c.data)
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    /// Keeps only `names`, in that order.
    pub fn select(&self, names: &[String]) -> Result<Table> {
        let columns = names
            .iter()
            .map(|n| {
                self.columns
                    .iter()
                    .find(|c| &c.name == n)
                    .cloned()
                    .ok_or_else(|| {
                        Error::config(format!(
                            "unknown output column `{n}` (available: {})",
                            self.column_names().join(", ")
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Table { columns })
    }

    pub fn render(&self) -> String {
        let rows = self.rows();
        debug_assert!(self.columns.iter().all(|c| c.data.len() == rows));
        let mut out = self.column_names().join(",");
        out.push('\n');
        for row in 0..rows {
            for (i, c) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                c.data.render(row, &mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// `%.9g`: 9 significant digits, trailing zeros trimmed, exponent form
/// outside `1e-5 <= |v| < 1e9`.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, v);
        trim_fraction(&fixed).to_owned()
    } else {
        format!("{}e{}{:02}", trim_fraction(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Splits rendered CSV into its header and rows of raw fields.
pub fn parse_table(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::input("empty CSV"))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<String> = line.split(',').map(str::to_owned).collect();
            if fields.len() == header.len() {
                Ok(fields)
            } else {
                Err(Error::Syntax {
                    line: i + 2,
                    message: format!("expected {} fields, got {}", header.len(), fields.len()),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}
