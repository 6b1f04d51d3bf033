//! CSV emission and parsing of sweep rows.

use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::sweep::Row;

pub const HEADER: [&str; 13] = [
    "preset",
    "axis",
    "axis_value",
    "trial",
    "estimator",
    "basis",
    "solver",
    "num_pilots",
    "mse_db",
    "ber",
    "ref_ber",
    "seconds",
    "seed",
];

fn csv_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Csv(e.to_string())
}

/// Rows in the given order under the fixed header. Floats use the shortest
/// representation that round-trips, so equal values give equal bytes.
pub fn to_csv_bytes(rows: &[Row]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Err(HarnessError::Csv("no rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.preset.clone(),
            r.axis.clone(),
            r.axis_value.to_string(),
            r.trial.to_string(),
            r.estimator.clone(),
            r.basis.clone(),
            r.solver.clone(),
            r.num_pilots.to_string(),
            r.mse_db.to_string(),
            r.ber.to_string(),
            r.ref_ber.to_string(),
            r.seconds.map(|s| s.to_string()).unwrap_or_default(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(csv_err)
}

pub fn write_csv(rows: &[Row], path: &Path) -> Result<()> {
    let bytes = to_csv_bytes(rows)?;
    std::fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(bytes);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(HarnessError::Csv(format!("unexpected header: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for (idx, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = idx + 2;
        let num = |col: usize| -> Result<f64> {
            rec[col]
                .parse::<f64>()
                .map_err(|_| HarnessError::Csv(format!("line {line}: bad number in column {}", HEADER[col])))
        };
        let int = |col: usize| -> Result<u64> {
            rec[col]
                .parse::<u64>()
                .map_err(|_| HarnessError::Csv(format!("line {line}: bad integer in column {}", HEADER[col])))
        };
        rows.push(Row {
            preset: rec[0].to_string(),
            axis: rec[1].to_string(),
            axis_value: num(2)?,
            trial: int(3)? as usize,
            estimator: rec[4].to_string(),
            basis: rec[5].to_string(),
            solver: rec[6].to_string(),
            num_pilots: int(7)? as usize,
            mse_db: num(8)?,
            ber: num(9)?,
            ref_ber: num(10)?,
            seconds: if rec[11].is_empty() { None } else { Some(num(11)?) },
            seed: int(12)?,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    parse_csv(&bytes)
}
