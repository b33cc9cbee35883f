//! CSV ingestion and report export.
//!
//! All emitted files are UTF-8 with LF line endings, a `.` decimal
//! separator, a header row, and reals at full round-trip precision
//! (17 significant digits), so repeated runs diff cleanly.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::separability::{SignalNoiseSplit, WCorrMatrix};
use crate::series::TimeSeries;
use crate::simulation::StudyRow;

/// Formats a real with 17 significant digits, enough for exact f64
/// round-trips.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column reference: a 0-based position, or a name looked up in the
/// header row. Strings that parse as an integer are treated as positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl ColumnSelector {
    fn display(&self) -> String {
        match self {
            ColumnSelector::Index(i) => i.to_string(),
            ColumnSelector::Name(n) => n.clone(),
        }
    }

    /// Resolves to a 0-based position given the header row (if any).
    fn resolve(&self, headers: Option<&csv::StringRecord>) -> Result<usize> {
        match self {
            ColumnSelector::Index(i) => Ok(*i),
            ColumnSelector::Name(name) => {
                let headers = headers.ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "column `{name}` referenced by name but the input has no header row"
                    ))
                })?;
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::ColumnNotFound(name.clone()))
            }
        }
    }
}

/// How to read a series out of a CSV file.
#[derive(Debug, Clone)]
pub struct CsvSpec {
    pub path: PathBuf,
    pub value_column: ColumnSelector,
    pub label_column: Option<ColumnSelector>,
    pub delimiter: u8,
    pub header: bool,
}

impl CsvSpec {
    pub fn new(path: impl Into<PathBuf>, value_column: ColumnSelector) -> Self {
        Self {
            path: path.into(),
            value_column,
            label_column: None,
            delimiter: b',',
            header: true,
        }
    }
}

/// Loads the series described by `spec`, in file order.
///
/// Every value must parse as a finite real; the first offending cell
/// aborts the load with its 1-based data row (header excluded) and
/// column.
pub fn load_csv(spec: &CsvSpec) -> Result<TimeSeries> {
    let file = File::open(&spec.path).map_err(|e| {
        if e.kind() == io::ErrorKind::NotFound {
            Error::FileNotFound(spec.path.display().to_string())
        } else {
            Error::Io(e)
        }
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(spec.header)
        .delimiter(spec.delimiter)
        .flexible(true)
        .from_reader(file);
    let headers = if spec.header {
        Some(reader.headers()?.clone())
    } else {
        None
    };
    let value_at = spec.value_column.resolve(headers.as_ref())?;
    let label_at = spec
        .label_column
        .as_ref()
        .map(|c| c.resolve(headers.as_ref()))
        .transpose()?;

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let cell = record.get(value_at).ok_or_else(|| Error::ParseError {
            row,
            column: spec.value_column.display(),
            value: "<missing>".into(),
        })?;
        let parsed = cell.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        match parsed {
            Some(v) => values.push(v),
            None => {
                return Err(Error::ParseError {
                    row,
                    column: spec.value_column.display(),
                    value: cell.to_string(),
                })
            }
        }
        if let Some(at) = label_at {
            labels.push(record.get(at).unwrap_or("").to_string());
        }
    }
    if label_at.is_some() {
        TimeSeries::with_labels(values, labels)
    } else {
        TimeSeries::new(values)
    }
}

/// Writes the `t, original, signal, residual` table for a split, one row
/// per time point (`t` starting at 1).
pub fn write_reconstruction_csv<W: Write>(
    mut w: W,
    original: &TimeSeries,
    split: &SignalNoiseSplit,
) -> Result<()> {
    writeln!(w, "t,original,signal,residual")?;
    for (t, ((y, s), z)) in original
        .values()
        .iter()
        .zip(split.signal.values())
        .zip(split.residual.values())
        .enumerate()
    {
        writeln!(
            w,
            "{},{},{},{}",
            t + 1,
            fmt_real(*y),
            fmt_real(*s),
            fmt_real(*z)
        )?;
    }
    Ok(())
}

/// Writes the absolute w-correlation matrix with columns `c1..cd`, one row
/// per component.
pub fn write_wcorr_csv<W: Write>(mut w: W, m: &WCorrMatrix) -> Result<()> {
    let header: Vec<String> = (1..=m.dim()).map(|j| format!("c{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|&v| fmt_real(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Writes one row per simulation scenario.
pub fn write_study_csv<W: Write>(mut w: W, rows: &[StudyRow]) -> Result<()> {
    writeln!(
        w,
        "signal,snr,reps,mean_g_hat,sd_g_hat,fwer_hat,mean_g_hc,sd_g_hc,g_star"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.signal,
            fmt_real(r.snr),
            r.reps,
            fmt_real(r.mean_g_hat),
            fmt_real(r.sd_g_hat),
            fmt_real(r.fwer_hat),
            fmt_real(r.mean_g_hc),
            fmt_real(r.sd_g_hc),
            r.g_star
        )?;
    }
    Ok(())
}

/// Path-based convenience wrapper around the `write_*` functions.
pub fn save<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut io::BufWriter<File>) -> Result<()>,
{
    let mut file = io::BufWriter::new(File::create(path)?);
    write(&mut file)?;
    file.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_for(content: &str, dir: &tempfile::TempDir, value: &str) -> CsvSpec {
        let path = dir.path().join("input.csv");
        let mut f = File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        CsvSpec::new(path, value.parse().unwrap())
    }

    #[test]
    fn named_column_load() {
        let dir = tempfile::tempdir().unwrap();
        let spec = spec_for("d,v\na,1\nb,2\nc,3\n", &dir, "v");
        let series = load_csv(&spec).unwrap();
        assert_eq!(series.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn indexed_column_and_labels() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = spec_for("d,v\na,1\nb,2\nc,3\n", &dir, "1");
        spec.label_column = Some("d".parse().unwrap());
        let series = load_csv(&spec).unwrap();
        assert_eq!(series.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            series.labels().unwrap(),
            &["a".to_string(), "b".into(), "c".into()]
        );
    }

    #[test]
    fn unparseable_cell_reports_its_row() {
        let dir = tempfile::tempdir().unwrap();
        let spec = spec_for("v\n1\nx\n3\n", &dir, "v");
        match load_csv(&spec) {
            Err(Error::ParseError { row, column, value }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "v");
                assert_eq!(value, "x");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_cells_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let spec = spec_for("v\n1\ninf\n", &dir, "v");
        assert!(matches!(
            load_csv(&spec),
            Err(Error::ParseError { row: 2, .. })
        ));
    }

    #[test]
    fn missing_file_and_missing_column() {
        let dir = tempfile::tempdir().unwrap();
        let spec = CsvSpec::new(dir.path().join("absent.csv"), "v".parse().unwrap());
        assert!(matches!(load_csv(&spec), Err(Error::FileNotFound(_))));

        let spec = spec_for("a,b\n1,2\n", &dir, "nope");
        assert!(matches!(
            load_csv(&spec),
            Err(Error::ColumnNotFound(name)) if name == "nope"
        ));
    }

    #[test]
    fn empty_input_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let spec = spec_for("v\n", &dir, "v");
        assert!(matches!(load_csv(&spec), Err(Error::EmptySeries)));
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [0.1, -3.5e17, 1.0 / 3.0, 6.02e-23, 0.0] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn reconstruction_rows_line_up() {
        use crate::ssa::{decompose, embed};
        let series =
            TimeSeries::new((1..=12).map(|t| (t as f64 * 0.6).sin() + 1.0).collect()).unwrap();
        let dec = decompose(&embed(&series, 4).unwrap()).unwrap();
        let split = dec.split(1).unwrap();
        let mut buf = Vec::new();
        write_reconstruction_csv(&mut buf, &series, &split).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], "t,original,signal,residual");
        for (t, line) in lines[1..].iter().enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells[0], (t + 1).to_string());
            let y: f64 = cells[1].parse().unwrap();
            let s: f64 = cells[2].parse().unwrap();
            let z: f64 = cells[3].parse().unwrap();
            assert!((y - (s + z)).abs() <= 1e-8 * y.abs().max(1.0));
            assert_eq!(y, series.values()[t]);
        }
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }
}
