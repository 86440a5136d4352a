//! Out-of-core access to the sample: given `N` records on disk and a weight
//! vector, read only the records with a nonzero weight.
//!
//! Supported layouts:
//!
//! * `BinaryF64`: little-endian `f64`, 8 bytes per record, no header. The file
//!   length must be exactly `8·N`. Selected records are read with monotone
//!   seeks, so the bytes read are `8 · distinct selected indices`.
//! * `Csv`: one record per row; a single streaming pass that only parses the
//!   selected cells. Text rows have variable width, so no seeking.
//!
//! Record indices are 0-based.

use std::fs::File;
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bands::Band;
use crate::error::{construction, Error, Result};
use crate::gof::TestResult;
use crate::limitdist::CriticalValue;
use crate::montecarlo::{CoverageReport, LevelReport};
use crate::pointwise::PointwiseCI;
use crate::resample::WeightVector;

const RECORD_BYTES: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    InMemory(Vec<f64>),
    BinaryF64 {
        path: PathBuf,
        n: u64,
    },
    Csv {
        path: PathBuf,
        column: usize,
        header: bool,
        n: u64,
    },
}

/// Counters filled in by [`extract_subsample_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadStats {
    pub bytes_read: u64,
    pub seeks: u64,
    pub records_parsed: u64,
}

impl DataSource {
    pub fn in_memory(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(construction("empty data source"));
        }
        Ok(DataSource::InMemory(values))
    }

    /// Binary source whose record count is taken from the file length.
    pub fn binary(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let len = std::fs::metadata(&path)?.len();
        if len == 0 || len % RECORD_BYTES != 0 {
            return Err(construction(format!(
                "{}: length {len} is not a positive multiple of 8",
                path.display()
            )));
        }
        Ok(DataSource::BinaryF64 {
            n: len / RECORD_BYTES,
            path,
        })
    }

    /// Binary source with a declared record count, checked against the file.
    pub fn binary_with_len(path: impl Into<PathBuf>, n: u64) -> Result<Self> {
        let path = path.into();
        check_binary_len(&path, n)?;
        Ok(DataSource::BinaryF64 { path, n })
    }

    /// CSV source; the record count comes from one counting pass.
    pub fn csv(path: impl Into<PathBuf>, column: usize, header: bool) -> Result<Self> {
        let path = path.into();
        let mut reader = csv_reader(&path, header)?;
        let mut record = csv::ByteRecord::new();
        let mut n = 0u64;
        while reader.read_byte_record(&mut record)? {
            n += 1;
        }
        if n == 0 {
            return Err(construction(format!("{}: no records", path.display())));
        }
        Ok(DataSource::Csv {
            path,
            column,
            header,
            n,
        })
    }

    /// CSV source with a declared record count; checked during extraction.
    pub fn csv_with_len(
        path: impl Into<PathBuf>,
        column: usize,
        header: bool,
        n: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(construction("record count must be positive"));
        }
        Ok(DataSource::Csv {
            path: path.into(),
            column,
            header,
            n,
        })
    }

    pub fn n(&self) -> u64 {
        match self {
            DataSource::InMemory(v) => v.len() as u64,
            DataSource::BinaryF64 { n, .. } | DataSource::Csv { n, .. } => *n,
        }
    }

    /// Reads every record. Only for procedures that need the full sample EDF.
    pub fn read_all(&self) -> Result<Vec<f64>> {
        match self {
            DataSource::InMemory(v) => Ok(v.clone()),
            DataSource::BinaryF64 { path, n } => {
                check_binary_len(path, *n)?;
                let mut bytes = Vec::with_capacity((*n * RECORD_BYTES) as usize);
                File::open(path)?.read_to_end(&mut bytes)?;
                Ok(bytes
                    .chunks_exact(RECORD_BYTES as usize)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                    .collect())
            }
            DataSource::Csv {
                path,
                column,
                header,
                n,
            } => {
                let mut reader = csv_reader(path, *header)?;
                let mut record = csv::ByteRecord::new();
                let mut out = Vec::with_capacity(*n as usize);
                let mut row = 0u64;
                while reader.read_byte_record(&mut record)? {
                    out.push(parse_cell(path, row, record.get(*column))?);
                    row += 1;
                }
                if row != *n {
                    return Err(Error::LengthMismatch {
                        path: path.clone(),
                        expected: *n,
                        found: row,
                    });
                }
                Ok(out)
            }
        }
    }
}

fn check_binary_len(path: &Path, n: u64) -> Result<()> {
    let len = std::fs::metadata(path)?.len();
    if len != n * RECORD_BYTES {
        return Err(Error::LengthMismatch {
            path: path.to_path_buf(),
            expected: n,
            found: len / RECORD_BYTES,
        });
    }
    Ok(())
}

fn csv_reader(path: &Path, header: bool) -> Result<csv::Reader<File>> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?)
}

fn parse_cell(path: &Path, row: u64, cell: Option<&[u8]>) -> Result<f64> {
    let text = cell.map(String::from_utf8_lossy).unwrap_or_default();
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            record: row,
            value: text.into_owned(),
        })
}

/// `(value, count)` for every record with a nonzero weight, in index order.
pub fn extract_subsample(src: &DataSource, w: &WeightVector) -> Result<Vec<(f64, u64)>> {
    extract_subsample_with_stats(src, w).map(|(pairs, _)| pairs)
}

pub fn extract_subsample_with_stats(
    src: &DataSource,
    w: &WeightVector,
) -> Result<(Vec<(f64, u64)>, ReadStats)> {
    if w.population_size() != src.n() {
        return Err(construction(format!(
            "weights address {} records but the source holds {}",
            w.population_size(),
            src.n()
        )));
    }
    let entries = w.entries();
    let mut stats = ReadStats::default();
    let mut out = Vec::with_capacity(entries.len());
    match src {
        DataSource::InMemory(values) => {
            for &(i, c) in entries {
                let v = *values.get(i as usize).ok_or(Error::IndexOutOfRange {
                    index: i,
                    n: src.n(),
                })?;
                out.push((v, c));
            }
        }
        DataSource::BinaryF64 { path, n } => {
            check_binary_len(path, *n)?;
            let mut file = File::open(path)?;
            let mut buf = [0u8; RECORD_BYTES as usize];
            let mut position = 0u64;
            for &(i, c) in entries {
                if i >= *n {
                    return Err(Error::IndexOutOfRange { index: i, n: *n });
                }
                let offset = i * RECORD_BYTES;
                if offset != position {
                    file.seek(SeekFrom::Start(offset))?;
                    stats.seeks += 1;
                }
                file.read_exact(&mut buf)?;
                position = offset + RECORD_BYTES;
                stats.bytes_read += RECORD_BYTES;
                stats.records_parsed += 1;
                out.push((f64::from_le_bytes(buf), c));
            }
        }
        DataSource::Csv {
            path,
            column,
            header,
            n,
        } => {
            let mut reader = csv_reader(path, *header)?;
            let mut record = csv::ByteRecord::new();
            let mut next = entries.iter().peekable();
            let mut row = 0u64;
            while reader.read_byte_record(&mut record)? {
                if let Some(&&(i, c)) = next.peek() {
                    if i == row {
                        out.push((parse_cell(path, row, record.get(*column))?, c));
                        stats.records_parsed += 1;
                        next.next();
                    }
                }
                row += 1;
            }
            stats.bytes_read = reader.position().byte();
            if row != *n {
                return Err(Error::LengthMismatch {
                    path: path.clone(),
                    expected: *n,
                    found: row,
                });
            }
        }
    }
    Ok((out, stats))
}

/// Writes `values` in the `BinaryF64` layout.
pub fn write_binary_f64(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Reports

/// Version of the JSON report layout below.
pub const SCHEMA_VERSION: u32 = 1;

/// A band together with the optional verdict against a supplied truth model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandResult {
    pub band: Band,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers_truth: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum ReportPayload {
    Quantile(CriticalValue),
    Subsample(WeightVector),
    Band(Box<BandResult>),
    Test(TestResult),
    Interval(PointwiseCI),
    Coverage(CoverageReport),
    Level(LevelReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Output of one CLI command.
///
/// * `schema_version`: [`SCHEMA_VERSION`]
/// * `command`: the arguments after the program name
/// * `parameters`: resolved parameter values, keyed by name
/// * `seeds`: every seed that fed a random stream
/// * `result`: `{"type": …, "value": …}`
/// * `timing`: wall-clock time, present only when requested
///
/// Record indices inside results are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub seeds: Vec<u64>,
    pub result: ReportPayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: Vec<String>, result: ReportPayload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            parameters: serde_json::Map::new(),
            seeds: Vec::new(),
            result,
            timing: None,
        }
    }

    pub fn with_parameter(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
