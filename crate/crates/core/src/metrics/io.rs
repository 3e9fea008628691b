use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::EvalReport;

/// One row of an `image_id,score` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub image_id: String,
    pub score: f64,
}

pub fn read_predictions<R: Read>(reader: R) -> Result<Vec<Prediction>, csv::Error> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader)
        .deserialize()
        .collect()
}

pub fn write_predictions<W: Write>(writer: W, rows: &[Prediction]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_csv<W: Write>(writer: W, report: &EvalReport) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(EvalReport::CSV_HEADER)?;
    w.write_record(report.csv_row())?;
    w.flush()?;
    Ok(())
}
