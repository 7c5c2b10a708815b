//! CSV and JSON emission of sweep results.
//!
//! CSV output writes three files next to each other: the per-instance rows at
//! the requested path, per-grid-value means at `<stem>_means.csv`, and the run
//! metadata (RNG, seeds, base scenario) at `<stem>_meta.json`. JSON output is
//! a single document holding all three.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::sweep::{GridMean, InstancePoint, SweepMetadata, SweepResult};
use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// One per-instance row: `sweep_param,grid_value,instance_index,welfare,winner_count,total_payment`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub sweep_param: String,
    pub grid_value: f64,
    pub instance_index: usize,
    pub welfare: f64,
    pub winner_count: usize,
    pub total_payment: f64,
}

/// One per-grid-value row; `winner_count` is a mean and `n_instances` is appended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRecord {
    pub sweep_param: String,
    pub grid_value: f64,
    pub welfare: f64,
    pub winner_count: f64,
    pub total_payment: f64,
    pub n_instances: usize,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    metadata: &'a SweepMetadata,
    points: Vec<PointRecord>,
    means: Vec<MeanRecord>,
}

fn point_record(param: &str, p: &InstancePoint) -> PointRecord {
    PointRecord {
        sweep_param: param.to_owned(),
        grid_value: p.grid_value,
        instance_index: p.instance_index,
        welfare: p.welfare,
        winner_count: p.winner_count,
        total_payment: p.total_payment,
    }
}

fn mean_record(param: &str, m: &GridMean) -> MeanRecord {
    MeanRecord {
        sweep_param: param.to_owned(),
        grid_value: m.grid_value,
        welfare: m.welfare,
        winner_count: m.winner_count,
        total_payment: m.total_payment,
        n_instances: m.n_instances,
    }
}

/// Paths written for a CSV run with points at `destination`.
pub fn csv_companions(destination: &Path) -> (PathBuf, PathBuf) {
    let stem = destination
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    (
        destination.with_file_name(format!("{stem}_means.csv")),
        destination.with_file_name(format!("{stem}_meta.json")),
    )
}

/// Writes `result` and returns every path written.
pub fn emit_results(
    result: &SweepResult,
    format: Format,
    destination: &Path,
) -> Result<Vec<PathBuf>> {
    if result.points.is_empty() {
        return Err(SimError::InvalidSpec("nothing to emit".into()));
    }
    let param = result.param();
    let points: Vec<PointRecord> = result
        .points
        .iter()
        .map(|p| point_record(param, p))
        .collect();
    let means: Vec<MeanRecord> = result.means.iter().map(|m| mean_record(param, m)).collect();

    match format {
        Format::Csv => {
            let (means_path, meta_path) = csv_companions(destination);
            write_csv(destination, &points)?;
            write_csv(&means_path, &means)?;
            write_json(&meta_path, &result.metadata)?;
            Ok(vec![destination.to_owned(), means_path, meta_path])
        }
        Format::Json => {
            let doc = JsonDocument {
                metadata: &result.metadata,
                points,
                means,
            };
            write_json(destination, &doc)?;
            Ok(vec![destination.to_owned()])
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| SimError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| SimError::Csv {
        path: path.to_owned(),
        source,
    };
    let mut writer = csv::Writer::from_writer(create(path)?);
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|source| SimError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut file = create(path)?;
    serde_json::to_writer_pretty(&mut file, value).map_err(|source| SimError::Json {
        path: path.to_owned(),
        source,
    })?;
    file.write_all(b"\n")
        .and_then(|_| file.flush())
        .map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })
}

pub fn read_points<R: Read>(input: R) -> csv::Result<Vec<PointRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn read_means<R: Read>(input: R) -> csv::Result<Vec<MeanRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_paths() {
        let (m, meta) = csv_companions(Path::new("out/run.csv"));
        assert_eq!(m, Path::new("out/run_means.csv"));
        assert_eq!(meta, Path::new("out/run_meta.json"));
    }

    #[test]
    fn format_names() {
        assert_eq!(Format::parse("csv"), Some(Format::Csv));
        assert_eq!(Format::parse("json"), Some(Format::Json));
        assert_eq!(Format::parse("xml"), None);
    }
}
