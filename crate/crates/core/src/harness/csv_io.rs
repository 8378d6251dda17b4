//! CSV emission and re-parsing of study results.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::{ConvergenceRecord, EulerRecord};
use crate::error::{Error, Result};

pub const CONVERGENCE_HEADER: &str =
    "problem,scheme,variant,n,h_x,error,observed_order,beta_n,wall_time_s";

pub const EULER_HEADER: &str = "problem,scheme,sweep,n,h_x,h_t,error,observed_order";

/// 17 significant digits, enough to round-trip any `f64`.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn order(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Writes convergence records to any sink.
pub fn write_csv<W: Write>(records: &[ConvergenceRecord], out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(CONVERGENCE_HEADER.split(','))?;
    for r in records {
        w.write_record([
            r.problem.clone(),
            r.scheme.clone(),
            r.variant.clone(),
            r.n.to_string(),
            float(r.h_x),
            float(r.error),
            order(r.observed_order),
            float(r.beta_n),
            float(r.wall_time_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[ConvergenceRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(records, file).map_err(csv_err(path))
}

pub fn write_euler_csv<W: Write>(records: &[EulerRecord], out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(EULER_HEADER.split(','))?;
    for r in records {
        w.write_record([
            r.problem.clone(),
            r.scheme.clone(),
            r.sweep.token().to_string(),
            r.n.to_string(),
            float(r.h_x),
            float(r.h_t),
            float(r.error),
            order(r.observed_order),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_euler_csv(records: &[EulerRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_euler_csv(records, file).map_err(csv_err(path))
}

fn field(row: &csv::StringRecord, i: usize, line: usize) -> Result<&str> {
    row.get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column {i}")))
}

fn number<T: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {line}: invalid {name} '{s}'")))
}

/// Parses a convergence table produced by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut rows = reader.records();
    let header = rows
        .next()
        .ok_or_else(|| Error::Parse("empty input, expected a header".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != CONVERGENCE_HEADER {
        return Err(Error::Parse("unexpected header".into()));
    }
    let mut out = Vec::new();
    for (i, row) in rows.enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        if row.len() != 9 {
            return Err(Error::Parse(format!(
                "line {line}: expected 9 columns, got {}",
                row.len()
            )));
        }
        let order_field = field(&row, 6, line)?;
        out.push(ConvergenceRecord {
            problem: field(&row, 0, line)?.to_string(),
            scheme: field(&row, 1, line)?.to_string(),
            variant: field(&row, 2, line)?.to_string(),
            n: number(field(&row, 3, line)?, "n", line)?,
            h_x: number(field(&row, 4, line)?, "h_x", line)?,
            error: number(field(&row, 5, line)?, "error", line)?,
            observed_order: if order_field.is_empty() {
                None
            } else {
                Some(number(order_field, "observed_order", line)?)
            },
            beta_n: number(field(&row, 7, line)?, "beta_n", line)?,
            wall_time_s: number(field(&row, 8, line)?, "wall_time_s", line)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ConvergenceRecord {
        ConvergenceRecord {
            problem: "P1".into(),
            scheme: "fe-collocation".into(),
            variant: "trapezium".into(),
            n: 32,
            h_x: 0.0625,
            error: 1.0 / 3.0 * 1e-4,
            observed_order: Some(std::f64::consts::LN_2),
            beta_n: 0.1 + 0.2,
            wall_time_s: 1.5e-3,
        }
    }

    #[test]
    fn empty_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CONVERGENCE_HEADER}\n"));
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let mut rows = vec![record(), record()];
        rows[0].observed_order = None;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.lines().nth(1).unwrap().contains(",,"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
        assert_eq!(back[1].error.to_bits(), rows[1].error.to_bits());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_csv("".as_bytes()).is_err());
        assert!(read_csv("a,b\n".as_bytes()).is_err());
        let bad = format!("{CONVERGENCE_HEADER}\nP1,fe,t,x,1,1,,1,1\n");
        assert!(read_csv(bad.as_bytes()).is_err());
    }
}
