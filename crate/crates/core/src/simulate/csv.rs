use std::io::Write;

use super::compare::ComparisonReport;
use crate::error::{Error, Result};

/// Write `t, error, trace, min_eig` rows with CRLF line endings.
pub fn write_report_csv<W: Write>(report: &ComparisonReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    let wrap = |e: csv::Error| Error::InvalidArgument(format!("CSV output: {e}"));
    w.write_record(["t", "error", "trace", "min_eig"])
        .map_err(wrap)?;
    for k in 0..report.times.len() {
        w.write_record([
            format!("{:.16e}", report.times[k]),
            format!("{:.16e}", report.trace_distance[k]),
            format!("{:.16e}", report.trace[k]),
            format!("{:.16e}", report.min_eig[k]),
        ])
        .map_err(wrap)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("CSV output: {e}")))?;
    Ok(())
}

pub fn report_csv_string(report: &ComparisonReport) -> Result<String> {
    let mut buf = Vec::new();
    write_report_csv(report, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}
