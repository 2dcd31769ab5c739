//! Covariate CSV: a header `x1,...,xn`, then one subject per row.

use std::io::{Read, Write};
use std::path::Path;

use crate::discrepancy::CovariateSet;
use crate::error::{Error, Result};

pub fn read_covariates_from<R: Read>(reader: R) -> Result<CovariateSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let width = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .len();
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != width {
            return Err(Error::Parse(format!(
                "row {} has {} fields, header has {width}",
                line + 1,
                record.len()
            )));
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("row {}: `{field}` is not a number", line + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    CovariateSet::from_subject_rows(&rows)
}

pub fn read_covariates(path: impl AsRef<Path>) -> Result<CovariateSet> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_covariates_from(file).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_covariates_to<W: Write>(
    x: &CovariateSet,
    writer: W,
) -> std::result::Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record((1..=x.dimension()).map(|k| format!("x{k}")))?;
    for i in 0..x.subjects() {
        wtr.write_record(x.subject_row(i).iter().map(|v| v.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_covariates(x: &CovariateSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_covariates_to(x, file).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}
