//! Dump a composed stream as CSV.

use std::io::Write;

use anyhow::Result;
use streamlearn::domain::{FeatureValue, StreamSource};
use streamlearn::experiment::{Cell, ExperimentError};

/// Header of attribute names plus `class`, then one instance per row.
/// Numeric values use 6 decimals, nominal values and the class their index.
pub fn write_stream<W: Write>(cell: &Cell, seed: u64, out: W) -> Result<()> {
    let mut stream = cell.stream(seed).map_err(|e: ExperimentError| anyhow::anyhow!(e))?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = stream.schema().attributes().iter().map(|a| a.name.clone()).collect();
    header.push("class".into());
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    while let Some(inst) = stream.next_instance() {
        row.clear();
        row.extend(inst.values.iter().map(|v| match v {
            FeatureValue::Numeric(x) => format!("{x:.6}"),
            FeatureValue::Nominal(i) => i.to_string(),
        }));
        row.push(inst.label.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
