use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::alignment::StateSequence;
use crate::error::{Error, Result};

use super::index_ids;

/// Reads a dataset CSV: a header row of individual ids, then one row per
/// time step with one column per individual.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<StateSequence>> {
    read_dataset_from(BufReader::new(File::open(path)?))
}

pub fn read_dataset_from(reader: impl Read) -> Result<Vec<StateSequence>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let ids: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if ids.is_empty() || ids.iter().all(String::is_empty) {
        return Err(Error::Format("dataset has no header row".into()));
    }
    if let Some(k) = ids.iter().position(String::is_empty) {
        return Err(Error::Format(format!("column {} has an empty id", k + 1)));
    }
    index_ids(&ids)?;

    let mut columns = vec![Vec::new(); ids.len()];
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Format(format!(
                    "time step {}, individual `{}`: `{field}` is not a number",
                    row + 1,
                    ids[k]
                ))
            })?;
            columns[k].push(v);
        }
    }
    ids.into_iter()
        .zip(columns)
        .map(|(id, values)| StateSequence::new(id, values))
        .collect()
}

pub fn write_dataset(path: impl AsRef<Path>, sequences: &[StateSequence]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dataset_to(&mut w, sequences)?;
    w.flush()?;
    Ok(())
}

/// Writes sequences of equal length as a dataset CSV.
pub fn write_dataset_to(writer: impl Write, sequences: &[StateSequence]) -> Result<()> {
    let len = sequences.first().map_or(0, StateSequence::len);
    for s in sequences {
        if s.len() != len {
            return Err(Error::LengthMismatch {
                id: s.id().to_owned(),
                expected: len,
                found: s.len(),
            });
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(sequences.iter().map(StateSequence::id))?;
    for t in 0..len {
        w.write_record(sequences.iter().map(|s| s.values()[t].to_string()))?;
    }
    w.flush()?;
    Ok(())
}
