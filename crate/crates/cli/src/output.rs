//! CSV and JSON emission. All numbers use Rust's shortest round-trip
//! formatting, so parse → re-emit reproduces files byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use gossip_blocks_core::estimation::Alg1Snapshot;

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Estimator output CSV: one row per snapshot.
pub const ESTIMATOR_HEADER: &str = "t,accuracy,exact,ws_hat,wd_hat,skipped_updates";

pub fn estimator_csv(snapshots: &[Alg1Snapshot]) -> String {
    let mut out = String::from(ESTIMATOR_HEADER);
    out.push('\n');
    for snap in snapshots {
        let accuracy = snap.accuracy.map(fmt_f64).unwrap_or_default();
        let exact = snap
            .exact
            .map(|e| if e { "1" } else { "0" })
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            snap.t,
            accuracy,
            exact,
            fmt_f64(snap.w_s_hat),
            fmt_f64(snap.w_d_hat),
            snap.skipped_updates
        );
    }
    out
}

/// Parsed estimator row, for the round-trip contract.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorRow {
    pub t: u64,
    pub accuracy: Option<f64>,
    pub exact: Option<bool>,
    pub ws_hat: f64,
    pub wd_hat: f64,
    pub skipped_updates: u64,
}

pub fn parse_estimator_csv(text: &str) -> Result<Vec<EstimatorRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == ESTIMATOR_HEADER => {}
        other => return Err(format!("bad estimator header: {other:?}")),
    }
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(format!("bad estimator row: {line:?}"));
        }
        let parse_f = |s: &str| s.parse::<f64>().map_err(|e| format!("{e} in {line:?}"));
        rows.push(EstimatorRow {
            t: fields[0].parse().map_err(|e| format!("{e} in {line:?}"))?,
            accuracy: if fields[1].is_empty() {
                None
            } else {
                Some(parse_f(fields[1])?)
            },
            exact: match fields[2] {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                other => return Err(format!("bad exact flag {other:?}")),
            },
            ws_hat: parse_f(fields[3])?,
            wd_hat: parse_f(fields[4])?,
            skipped_updates: fields[5].parse().map_err(|e| format!("{e} in {line:?}"))?,
        });
    }
    Ok(rows)
}

pub fn emit_estimator_rows(rows: &[EstimatorRow]) -> String {
    let mut out = String::from(ESTIMATOR_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.t,
            row.accuracy.map(fmt_f64).unwrap_or_default(),
            row.exact.map(|e| if e { "1" } else { "0" }).unwrap_or_default(),
            fmt_f64(row.ws_hat),
            fmt_f64(row.wd_hat),
            row.skipped_updates
        );
    }
    out
}

/// Method-comparison CSV: p_t per grid tick per method.
pub const COMPARISON_HEADER: &str = "t,method,p_t";

pub fn comparison_csv(rows: &[(u64, &str, f64)]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for (t, method, p_t) in rows {
        let _ = writeln!(out, "{t},{method},{}", fmt_f64(*p_t));
    }
    out
}

/// Trajectory dump: "t,x_1,...,x_{n_r}".
pub fn trajectory_header(n_r: usize) -> String {
    let mut header = String::from("t");
    for i in 1..=n_r {
        let _ = write!(header, ",x_{i}");
    }
    header
}

pub fn trajectory_csv(n_r: usize, rows: &[(u64, Vec<f64>)]) -> String {
    let mut out = trajectory_header(n_r);
    out.push('\n');
    for (t, states) in rows {
        let _ = write!(out, "{t}");
        for v in states {
            let _ = write!(out, ",{}", fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<(u64, Vec<f64>)>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty trajectory file")?;
    if !header.starts_with("t,x_1") {
        return Err(format!("bad trajectory header: {header:?}"));
    }
    let width = header.split(',').count() - 1;
    let mut rows = Vec::new();
    for line in lines {
        let mut fields = line.split(',');
        let t: u64 = fields
            .next()
            .ok_or("missing t")?
            .parse()
            .map_err(|e| format!("{e} in {line:?}"))?;
        let states: Result<Vec<f64>, String> = fields
            .map(|s| s.parse::<f64>().map_err(|e| format!("{e} in {line:?}")))
            .collect();
        let states = states?;
        if states.len() != width {
            return Err(format!("row at t={t} has {} states, expected {width}", states.len()));
        }
        rows.push((t, states));
    }
    Ok(rows)
}

/// SBM sweep per-run CSV.
pub const SWEEP_RUNS_HEADER: &str = "n,graph,run,accuracy,ratio_rel_error";
/// SBM sweep summary CSV.
pub const SWEEP_SUMMARY_HEADER: &str = "n,mean_accuracy,median_ratio_error";

/// Karate accuracy time-series CSV.
pub const KARATE_HEADER: &str = "t,replication,accuracy";

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)
}
