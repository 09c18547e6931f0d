//! CSV emission for experiment records and their summaries.

use crate::experiment::{ExperimentRecord, SummaryRow};
use std::io;
use std::path::{Path, PathBuf};

pub const RECORD_HEADER: [&str; 9] = [
    "method",
    "p",
    "trial",
    "indices",
    "det_index",
    "trace_inv_index",
    "min_eig_index",
    "recon_error",
    "wall_time_s",
];

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn records_csv(records: &[ExperimentRecord]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_HEADER)?;
    for r in records {
        let idx = r
            .indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            r.method.name().to_string(),
            r.p.to_string(),
            r.trial.to_string(),
            idx,
            num(r.det_index),
            num(r.trace_inv_index),
            num(r.min_eig_index),
            num(r.recon_error),
            num(r.wall_time_s),
        ])?;
    }
    into_string(w)
}

pub fn summary_csv(rows: &[SummaryRow]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "p", "metric", "value"])?;
    for r in rows {
        w.write_record([r.method.name().to_string(), r.p.to_string(), r.metric.clone(), num(r.value)])?;
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> io::Result<String> {
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Writes `<stem>.csv` and `<stem>_summary.csv` under `dir`.
pub fn write_experiment(
    dir: &Path,
    stem: &str,
    records: &[ExperimentRecord],
    summary: &[SummaryRow],
) -> io::Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let main = dir.join(format!("{stem}.csv"));
    let side = dir.join(format!("{stem}_summary.csv"));
    std::fs::write(&main, records_csv(records)?)?;
    std::fs::write(&side, summary_csv(summary)?)?;
    Ok((main, side))
}

/// Drops timing: the `wall_time_s` column of record files and the
/// `wall_time_s_*` rows of summary files.
pub fn without_wall_time(csv_text: &str) -> String {
    let mut lines = csv_text.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let cols: Vec<&str> = header.split(',').collect();
    let mut out = String::new();
    if let Some(pos) = cols.iter().position(|c| *c == "wall_time_s") {
        for line in std::iter::once(header).chain(lines) {
            let fields: Vec<&str> = line.split(',').collect();
            let kept: Vec<&str> = fields
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, f)| *f)
                .collect();
            out.push_str(&kept.join(","));
            out.push('\n');
        }
    } else {
        for line in std::iter::once(header).chain(lines) {
            if !line.contains(",wall_time_s_") {
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use greedy_sensors::Method;

    fn rec() -> ExperimentRecord {
        ExperimentRecord {
            method: Method::Ag,
            p: 2,
            trial: 0,
            indices: vec![4, 1],
            det_index: 0.5,
            trace_inv_index: f64::INFINITY,
            min_eig_index: 0.25,
            recon_error: 0.0,
            wall_time_s: 1.5e-6,
        }
    }

    #[test]
    fn record_layout() {
        let text = records_csv(&[rec()]).unwrap();
        assert_eq!(
            text,
            "method,p,trial,indices,det_index,trace_inv_index,min_eig_index,recon_error,wall_time_s\n\
             AG,2,0,4 1,5e-1,inf,2.5e-1,0e0,1.5e-6\n"
        );
        assert_eq!(
            without_wall_time(&text),
            "method,p,trial,indices,det_index,trace_inv_index,min_eig_index,recon_error\n\
             AG,2,0,4 1,5e-1,inf,2.5e-1,0e0\n"
        );
    }

    #[test]
    fn summary_drops_timing_rows() {
        let rows = vec![
            SummaryRow { method: Method::Dg, p: 1, metric: "det_index_mean".into(), value: 2.0 },
            SummaryRow { method: Method::Dg, p: 1, metric: "wall_time_s_mean".into(), value: 0.1 },
        ];
        let text = summary_csv(&rows).unwrap();
        assert_eq!(without_wall_time(&text), "method,p,metric,value\nDG,1,det_index_mean,2e0\n");
    }
}
