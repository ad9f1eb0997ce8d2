//! On-disk formats.
//!
//! Snapshots are written as a raw binary payload plus a text header sidecar.
//! The payload is little-endian IEEE-754 doubles, snapshot-major: for each
//! snapshot, rows `i = 1..n_xi` in order, each row holding the `n_x` somatic
//! values. The header states the dimensions, stride, grid bounds and
//! physical parameters, so files are self-describing: `n_snapshots * n_xi *
//! n_x * 8` bytes is exactly the payload length.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use neurofield::stepper::RunRecord;
use neurofield::Mat;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

/// Writes `snapshots.bin` + `snapshots.txt` into `dir`.
pub fn write_snapshots(dir: &Path, cfg: &RunConfig, record: &RunRecord) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    let n_snapshots = record.snapshots.len();
    let (n_xi, n_x) = match record.snapshots.first() {
        Some(s) => (s.values.rows(), s.values.cols()),
        None => (0, 0),
    };

    let mut payload = Vec::with_capacity(n_snapshots * n_xi * n_x * 8);
    for snap in &record.snapshots {
        for i in 0..n_xi {
            for j in 0..n_x {
                payload.extend_from_slice(&snap.values.at(i, j).to_le_bytes());
            }
        }
    }
    fs::write(dir.join("snapshots.bin"), &payload)?;

    let times: Vec<String> = record
        .snapshots
        .iter()
        .map(|s| s.time.to_string())
        .collect();
    let mut header = String::new();
    header.push_str("format = neurofield-snapshots-v1\n");
    header.push_str("layout = snapshot-major, rows i = 1..n_xi, columns j = 1..n_x, f64 little-endian\n");
    header.push_str(&format!("n_snapshots = {n_snapshots}\n"));
    header.push_str(&format!("n_xi = {n_xi}\n"));
    header.push_str(&format!("n_x = {n_x}\n"));
    header.push_str(&format!("snapshot_stride = {}\n", cfg.run.snapshot_stride));
    header.push_str(&format!("tau = {}\n", cfg.run.tau));
    header.push_str(&format!("l_x = {}\n", cfg.grid.l_x));
    header.push_str(&format!("l_xi = {}\n", cfg.grid.l_xi));
    header.push_str(&format!("gamma = {}\n", cfg.model.gamma));
    header.push_str(&format!("nu = {}\n", cfg.model.nu));
    header.push_str(&format!("xi_0 = {}\n", cfg.model.xi_0));
    header.push_str(&format!("eps = {}\n", cfg.model.eps));
    header.push_str(&format!("times = {}\n", times.join(",")));
    fs::write(dir.join("snapshots.txt"), header)?;
    Ok(())
}

/// Reads a snapshot pair back; checks that the header's dimensions consume
/// the payload exactly.
pub fn read_snapshots(dir: &Path) -> CliResult<(BTreeMap<String, String>, Vec<Mat>)> {
    let header_text = fs::read_to_string(dir.join("snapshots.txt"))?;
    let mut header = BTreeMap::new();
    for line in header_text.lines() {
        if let Some(eq) = line.find('=') {
            header.insert(
                line[..eq].trim().to_string(),
                line[eq + 1..].trim().to_string(),
            );
        }
    }
    let get_dim = |key: &str| -> CliResult<usize> {
        header
            .get(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CliError::Config {
                line: None,
                message: format!("snapshot header lacks '{key}'"),
            })
    };
    let n_snapshots = get_dim("n_snapshots")?;
    let n_xi = get_dim("n_xi")?;
    let n_x = get_dim("n_x")?;
    let payload = fs::read(dir.join("snapshots.bin"))?;
    let expected = n_snapshots * n_xi * n_x * 8;
    if payload.len() != expected {
        return Err(CliError::Config {
            line: None,
            message: format!(
                "payload is {} bytes, header implies {expected}",
                payload.len()
            ),
        });
    }
    let mut mats = Vec::with_capacity(n_snapshots);
    let mut off = 0;
    for _ in 0..n_snapshots {
        let mut m = Mat::zeros(n_xi, n_x);
        for i in 0..n_xi {
            for j in 0..n_x {
                let bytes: [u8; 8] = payload[off..off + 8].try_into().unwrap();
                *m.at_mut(i, j) = f64::from_le_bytes(bytes);
                off += 8;
            }
        }
        mats.push(m);
    }
    Ok((header, mats))
}

/// Writes `trace.csv` with one row per time step.
pub fn write_trace(dir: &Path, record: &RunRecord, tau: f64) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join("trace.csv"))?;
    writeln!(f, "step,time,max_abs")?;
    for (n, m) in record.max_abs_trace.iter().enumerate() {
        writeln!(f, "{},{},{}", n, n as f64 * tau, m)?;
    }
    Ok(())
}

/// Writes a CSV file with a header line and `f64` rows.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    writeln!(f, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(f, "{}", line.join(","))?;
    }
    Ok(())
}

/// Writes the resolved configuration next to the outputs.
pub fn write_provenance(dir: &Path, cfg: &RunConfig) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.resolved.txt"), cfg.to_text())?;
    Ok(())
}
