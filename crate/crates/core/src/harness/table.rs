//! Convergence table output.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::convergence::ConvergenceRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::Config(format!("unknown table format `{other}`"))),
        }
    }
}

/// Five significant digits in scientific notation.
pub fn format_error(v: f64) -> String {
    format!("{v:.4e}")
}

pub fn format_order(v: f64) -> String {
    format!("{v:.4}")
}

/// Write `rows` with columns `Nx,Nt,error,order`.
pub fn emit_table<W: Write>(rows: &[ConvergenceRow], format: TableFormat, mut writer: W) -> Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(["Nx", "Nt", "error", "order"])?;
            for r in rows {
                w.write_record([
                    r.nx.to_string(),
                    r.nt.to_string(),
                    format_error(r.error),
                    r.order.map(format_order).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut writer, rows)?;
            writeln!(writer)?;
        }
    }
    Ok(())
}

pub fn read_table<R: Read>(format: TableFormat, reader: R) -> Result<Vec<ConvergenceRow>> {
    match format {
        TableFormat::Csv => {
            let mut r = csv::Reader::from_reader(reader);
            let mut rows = Vec::new();
            for record in r.records() {
                let record = record?;
                let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
                let parse_err = |what: &str, v: &str| Error::Parse(format!("bad {what} `{v}`"));
                let nx = field(0);
                let nt = field(1);
                let error = field(2);
                let order = field(3);
                rows.push(ConvergenceRow {
                    nx: nx.parse().map_err(|_| parse_err("Nx", &nx))?,
                    nt: nt.parse().map_err(|_| parse_err("Nt", &nt))?,
                    error: error.parse().map_err(|_| parse_err("error", &error))?,
                    order: if order.is_empty() {
                        None
                    } else {
                        Some(order.parse().map_err(|_| parse_err("order", &order))?)
                    },
                });
            }
            Ok(rows)
        }
        TableFormat::Json => Ok(serde_json::from_reader(reader)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<ConvergenceRow> {
        vec![
            ConvergenceRow { nx: 100, nt: 250, error: 0.0020733, order: None },
            ConvergenceRow { nx: 200, nt: 500, error: 0.00054068, order: Some(1.9391) },
        ]
    }

    fn emit(rows: &[ConvergenceRow], format: TableFormat) -> String {
        let mut buf = Vec::new();
        emit_table(rows, format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(emit(&[], TableFormat::Csv), "Nx,Nt,error,order\n");
    }

    #[test]
    fn first_row_has_no_order() {
        let text = emit(&rows()[..1], TableFormat::Csv);
        assert_eq!(text.lines().nth(1).unwrap(), "100,250,2.0733e-3,");
    }

    #[test]
    fn round_trips() {
        let text = emit(&rows(), TableFormat::Csv);
        let back = read_table(TableFormat::Csv, text.as_bytes()).unwrap();
        assert_eq!(back, rows());
        assert_eq!(emit(&back, TableFormat::Csv), text);
        let json = emit(&rows(), TableFormat::Json);
        assert_eq!(read_table(TableFormat::Json, json.as_bytes()).unwrap(), rows());
    }
}
