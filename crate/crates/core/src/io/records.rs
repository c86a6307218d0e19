//! CSV persistence. Floats carry 17 significant digits (`{:.16e}`) so that
//! values round-trip and reruns compare byte for byte.

use std::io::Write;
use std::path::Path;

use super::IoError;
use crate::harness::ExperimentRecord;

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn record_header(eps_count: usize) -> Vec<String> {
    let mut header: Vec<String> = ["n", "luxemburg", "modular", "diff_norm"].map(String::from).to_vec();
    header.extend((1..=eps_count).map(|i| format!("gauge_eps{i}")));
    header.push("verdict".into());
    header
}

/// Rows ordered by `n`; one gauge column per configured ε.
pub fn record_rows(records: &[ExperimentRecord], eps_count: usize) -> Result<Vec<Vec<String>>, IoError> {
    let mut sorted: Vec<&ExperimentRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.n);
    sorted
        .iter()
        .map(|r| {
            if r.gauges.len() != eps_count {
                return Err(IoError::Format(format!("record {} has {} gauges, expected {eps_count}", r.n, r.gauges.len())));
            }
            let mut row = vec![r.n.to_string(), format_float(r.luxemburg), format_float(r.modular), format_float(r.diff_norm)];
            row.extend(r.gauges.iter().map(|&g| format_float(g)));
            row.push(r.flag.as_str().into());
            Ok(row)
        })
        .collect()
}

pub fn write_records(records: &[ExperimentRecord], eps_count: usize, path: &Path) -> Result<(), IoError> {
    write_table(path, &record_header(eps_count), &record_rows(records, eps_count)?)
}

pub fn write_table(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_table_to(std::fs::File::create(path)?, header, rows)
}

pub fn write_table_to<W: Write>(out: W, header: &[String], rows: &[Vec<String>]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
