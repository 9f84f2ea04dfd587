//! CSV schemas. Numbers use the shortest representation that parses back to
//! the same `f64`; a leading `#` line documents the axes of sweep files.

use std::io::{self, Read, Write};

use dlf_core::decimation::SpectrumTable;
use dlf_core::oracle::Cluster;

use crate::figures::{ButterflyColumn, FractalColumn};

pub const SPECTRUM_HEADER: [&str; 3] = ["eigenvalue", "multiplicity", "birth_level"];
pub const BUTTERFLY_HEADER: [&str; 4] = ["beta", "eigenvalue", "multiplicity", "birth_level"];
pub const FRACTAL_HEADER: [&str; 4] = ["beta", "lambda_rank", "lambda", "cauchy_gap"];

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn to_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_table<W: Write>(table: &SpectrumTable, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPECTRUM_HEADER).map_err(to_io)?;
    for r in table.rows() {
        w.write_record([num(r.value), r.multiplicity.to_string(), r.birth_level.to_string()])
            .map_err(to_io)?;
    }
    w.flush()
}

/// Oracle clusters have no birth level; the column is left empty.
pub fn write_clusters<W: Write>(clusters: &[Cluster], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPECTRUM_HEADER).map_err(to_io)?;
    for c in clusters {
        w.write_record([num(c.mean), c.size.to_string(), String::new()])
            .map_err(to_io)?;
    }
    w.flush()
}

pub fn write_butterfly<W: Write>(
    columns: &[ButterflyColumn],
    ratio: f64,
    level: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(
        out,
        "# x: beta (radians, beta_m = beta * {ratio:?}^m); y: eigenvalue of the level-{level} Dirichlet operator"
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BUTTERFLY_HEADER).map_err(to_io)?;
    for col in columns {
        for r in col.table.rows() {
            w.write_record([
                num(col.beta),
                num(r.value),
                r.multiplicity.to_string(),
                r.birth_level.to_string(),
            ])
            .map_err(to_io)?;
        }
    }
    w.flush()
}

pub fn write_fractal<W: Write>(
    columns: &[FractalColumn],
    ratio: f64,
    depth: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(
        out,
        "# x: beta (radians, beta_m = beta * {ratio:?}^m); y: renormalized eigenvalue 4^{depth} z"
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FRACTAL_HEADER).map_err(to_io)?;
    for col in columns {
        for (rank, v) in col.spectrum.values.iter().enumerate() {
            w.write_record([
                num(col.beta),
                (rank + 1).to_string(),
                num(v.lambda),
                num(v.cauchy_gap),
            ])
            .map_err(to_io)?;
        }
    }
    w.flush()
}

/// A parsed sweep file.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepData {
    /// `(beta, eigenvalue, multiplicity)`
    Butterfly(Vec<(f64, f64, u64)>),
    /// `(beta, rank, lambda)`
    Fractal(Vec<(f64, usize, f64)>),
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("header {0:?} matches neither the butterfly nor the fractal schema")]
    Schema(Vec<String>),
    #[error("record {record}: {message}")]
    Field { record: usize, message: String },
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, n: usize) -> Result<T, ReadError> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ReadError::Field {
            record: n,
            message: format!("column {} is missing or malformed", i + 1),
        })
}

pub fn read_sweep<R: Read>(input: R) -> Result<SweepData, ReadError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header == BUTTERFLY_HEADER {
        let mut rows = Vec::new();
        for (n, rec) in r.records().enumerate() {
            let rec = rec?;
            rows.push((field(&rec, 0, n + 1)?, field(&rec, 1, n + 1)?, field(&rec, 2, n + 1)?));
        }
        Ok(SweepData::Butterfly(rows))
    } else if header == FRACTAL_HEADER {
        let mut rows = Vec::new();
        for (n, rec) in r.records().enumerate() {
            let rec = rec?;
            rows.push((field(&rec, 0, n + 1)?, field(&rec, 1, n + 1)?, field(&rec, 2, n + 1)?));
        }
        Ok(SweepData::Fractal(rows))
    } else {
        Err(ReadError::Schema(header))
    }
}
