//! CSV ingestion for real time-series (hourly weather style files).

use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDateTime;

use super::StreamError;

const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

/// Row-major numeric matrix plus aligned timestamps.
#[derive(Debug, Clone)]
pub struct IngestResult {
    pub data: Vec<f64>,
    pub dim: usize,
    pub timestamps: Vec<NaiveDateTime>,
    /// Rows dropped because of missing or unparseable cells.
    pub dropped_rows: usize,
}

impl IngestResult {
    pub fn rows(&self) -> usize {
        self.timestamps.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Read a headered, comma-separated, UTF-8 file. Rows with any missing or
/// non-numeric cell in the selected columns (or an unparseable timestamp) are
/// dropped and counted; zero usable rows is a hard error.
pub fn ingest_csv(
    path: impl AsRef<Path>,
    timestamp_column: &str,
    value_columns: &[String],
) -> Result<IngestResult, StreamError> {
    let file = File::open(path)?;
    ingest_csv_reader(file, timestamp_column, value_columns)
}

pub fn ingest_csv_reader<R: Read>(
    reader: R,
    timestamp_column: &str,
    value_columns: &[String],
) -> Result<IngestResult, StreamError> {
    if value_columns.is_empty() {
        return Err(StreamError::EmptySelection);
    }
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| -> Result<usize, StreamError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| StreamError::MissingColumn(name.to_string()))
    };
    let ts_idx = find(timestamp_column)?;
    let val_idx: Vec<usize> =
        value_columns.iter().map(|c| find(c)).collect::<Result<_, _>>()?;

    let dim = val_idx.len();
    let mut data = Vec::new();
    let mut timestamps = Vec::new();
    let mut dropped = 0usize;
    for record in rdr.records() {
        let record = record?;
        let ts = record
            .get(ts_idx)
            .and_then(|s| NaiveDateTime::parse_from_str(s.trim(), TIMESTAMP_FORMAT).ok());
        let ts = match ts {
            Some(ts) => ts,
            None => {
                dropped += 1;
                continue;
            }
        };
        let mut row = Vec::with_capacity(dim);
        let mut ok = true;
        for &idx in &val_idx {
            match record.get(idx).map(str::trim) {
                Some(cell) if !cell.is_empty() => match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => row.push(v),
                    _ => {
                        ok = false;
                        break;
                    }
                },
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            data.extend(row);
            timestamps.push(ts);
        } else {
            dropped += 1;
        }
    }
    if timestamps.is_empty() {
        return Err(StreamError::NoUsableRows { dropped });
    }
    Ok(IngestResult { data, dim, timestamps, dropped_rows: dropped })
}

/// Debug export of a scalar or vector series as `index,value...` CSV.
pub fn write_series_csv(
    path: impl AsRef<Path>,
    values: &[f64],
    dim: usize,
) -> Result<(), StreamError> {
    let mut w = csv::Writer::from_path(path.as_ref()).map_err(StreamError::Csv)?;
    let mut header = vec!["index".to_string()];
    if dim == 1 {
        header.push("value".to_string());
    } else {
        header.extend((0..dim).map(|j| format!("value{j}")));
    }
    w.write_record(&header)?;
    for (i, row) in values.chunks(dim).enumerate() {
        let mut rec = vec![(i + 1).to_string()];
        rec.extend(row.iter().map(|v| format!("{v}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_rows_with_missing_cells() {
        let csv = "datetime,a,b\n\
                   2014-01-01 00:00:00,1.5,2.0\n\
                   2014-01-01 01:00:00,,2.5\n\
                   2014-01-01 02:00:00,3.0,4.0\n";
        let out = ingest_csv_reader(
            csv.as_bytes(),
            "datetime",
            &["a".to_string(), "b".to_string()],
        )
        .unwrap();
        assert_eq!(out.rows(), 2);
        assert_eq!(out.dropped_rows, 1);
        assert_eq!(out.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn wide_selection_keeps_width() {
        let cols: Vec<String> = (0..36).map(|i| format!("city{i}")).collect();
        let mut csv = format!("datetime,{}\n", cols.join(","));
        for h in 0..3 {
            let vals: Vec<String> = (0..36).map(|i| format!("{}", i as f64 + h as f64)).collect();
            csv.push_str(&format!("2014-01-0{} 00:00:00,{}\n", h + 1, vals.join(",")));
        }
        let out = ingest_csv_reader(csv.as_bytes(), "datetime", &cols).unwrap();
        assert_eq!(out.dim, 36);
        assert_eq!(out.rows(), 3);
    }

    #[test]
    fn empty_selection_is_hard_error() {
        let res = ingest_csv_reader("datetime,a\n2014-01-01 00:00:00,1\n".as_bytes(), "datetime", &[]);
        assert!(matches!(res, Err(StreamError::EmptySelection)));
    }

    #[test]
    fn all_rows_bad_is_hard_error() {
        let csv = "datetime,a\nnot-a-date,1.0\n2014-01-01 00:00:00,oops\n";
        let res = ingest_csv_reader(csv.as_bytes(), "datetime", &["a".to_string()]);
        assert!(matches!(res, Err(StreamError::NoUsableRows { dropped: 2 })));
    }

    #[test]
    fn unknown_column_is_reported() {
        let res = ingest_csv_reader(
            "datetime,a\n2014-01-01 00:00:00,1\n".as_bytes(),
            "datetime",
            &["missing".to_string()],
        );
        match res {
            Err(StreamError::MissingColumn(c)) => assert_eq!(c, "missing"),
            other => panic!("expected MissingColumn, got {other:?}"),
        }
    }
}
