use std::fmt::Write as _;

use ergolab::Rational;
use serde_json::{json, Map, Value};

/// Fractional digits in decimal renderings.
pub const DECIMAL_PLACES: usize = 15;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Text(String),
    Bool(bool),
    /// Rendered as `p/q` plus a decimal column derived from it.
    Frac(Rational),
    /// A blank fraction cell; both of its columns stay empty.
    NoFrac,
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u128> for Cell {
    fn from(x: u128) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<Rational> for Cell {
    fn from(x: Rational) -> Self {
        Cell::Frac(x)
    }
}

impl From<Option<Rational>> for Cell {
    fn from(x: Option<Rational>) -> Self {
        x.map_or(Cell::NoFrac, Cell::Frac)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Plain,
    Frac,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub kind: ColumnKind,
}

impl Column {
    pub const fn plain(name: &'static str) -> Self {
        Self { name, kind: ColumnKind::Plain }
    }

    pub const fn frac(name: &'static str) -> Self {
        Self { name, kind: ColumnKind::Frac }
    }
}

/// A result table with a fixed column layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

fn decimal(r: &Rational) -> String {
    r.to_decimal_string(DECIMAL_PLACES)
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.columns {
            out.push(c.name.to_string());
            if c.kind == ColumnKind::Frac {
                out.push(format!("{}_decimal", c.name));
            }
        }
        out
    }

    fn flat_row(&self, row: &[Cell]) -> Vec<String> {
        let mut out = Vec::new();
        for (c, cell) in self.columns.iter().zip(row) {
            match (c.kind, cell) {
                (ColumnKind::Frac, Cell::Frac(r)) => {
                    out.push(r.to_fraction_string());
                    out.push(decimal(r));
                }
                (ColumnKind::Frac, _) => {
                    out.push(String::new());
                    out.push(String::new());
                }
                (ColumnKind::Plain, cell) => out.push(match cell {
                    Cell::Int(x) => x.to_string(),
                    Cell::Text(s) => s.clone(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Frac(r) => r.to_fraction_string(),
                    Cell::NoFrac => String::new(),
                }),
            }
        }
        out
    }

    /// UTF-8 CSV with a header row and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.header()).expect("in-memory write");
        for row in &self.rows {
            w.write_record(self.flat_row(row)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Rows as JSON objects keyed by the CSV header.
    pub fn to_json_rows(&self) -> Value {
        let header = self.header();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                let mut names = header.iter();
                for (c, cell) in self.columns.iter().zip(row) {
                    let name = names.next().expect("header").clone();
                    match (c.kind, cell) {
                        (ColumnKind::Frac, cell) => {
                            let dec = names.next().expect("header").clone();
                            let (f, d) = match cell {
                                Cell::Frac(r) => (json!(r.to_fraction_string()), json!(decimal(r))),
                                _ => (Value::Null, Value::Null),
                            };
                            obj.insert(name, f);
                            obj.insert(dec, d);
                        }
                        (ColumnKind::Plain, cell) => {
                            let v = match cell {
                                Cell::Int(x) => json!(x),
                                Cell::Text(s) => json!(s),
                                Cell::Bool(b) => json!(b),
                                Cell::Frac(r) => json!(r.to_fraction_string()),
                                Cell::NoFrac => Value::Null,
                            };
                            obj.insert(name, v);
                        }
                    }
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    /// A fixed-width rendering for terminals.
    pub fn to_text(&self) -> String {
        let header = self.header();
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| self.flat_row(r)).collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in std::iter::once(&header).chain(rows.iter()) {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_expand_to_two_columns() {
        let mut t = Table::new(vec![Column::plain("n"), Column::plain("v"), Column::frac("norm")]);
        t.push(vec![2u64.into(), "T(0,1)".into(), Rational::from(2u32).into()]);
        t.push(vec![3u64.into(), "S".into(), Cell::NoFrac]);
        assert_eq!(t.to_csv(), "n,v,norm,norm_decimal\n2,\"T(0,1)\",2/1,2.0\n3,S,,\n");
        let json = t.to_json_rows();
        assert_eq!(json[0]["norm"], "2/1");
        assert_eq!(json[0]["norm_decimal"], "2.0");
        assert_eq!(json[1]["norm"], Value::Null);
        assert!(t.to_text().starts_with("n  v"));
    }

    #[test]
    fn decimals_come_from_the_fraction() {
        let mut t = Table::new(vec![Column::frac("x")]);
        for r in [Rational::new(1, 128), Rational::new(-1, 3), Rational::new(9, 1024)] {
            t.push(vec![r.into()]);
        }
        assert_eq!(
            t.to_csv(),
            "x,x_decimal\n1/128,0.0078125\n-1/3,-0.333333333333333\n9/1024,0.0087890625\n"
        );
    }
}
