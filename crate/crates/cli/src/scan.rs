//! Multi-threaded scan driver and the per-sample CSV format.

use std::io::Write;
use std::thread;

use anyhow::{anyhow, Result};
use chesswit::chessboard::Slot;
use chesswit::montecarlo::{evaluate_sample, SampleRecord, ScanAccumulator, ScanConfig, ScanSummary};
use chesswit::witness::ChessParams;

use crate::json::fmt17;

const SAMPLES_PER_WORKER: u64 = 512;

/// Evaluates samples on `workers` threads. Records reach `on_record` in
/// index order, so output does not depend on the worker count.
pub fn run_parallel(
    cfg: &ScanConfig,
    workers: usize,
    mut on_record: impl FnMut(&SampleRecord) -> Result<()>,
) -> Result<ScanSummary> {
    cfg.validate()?;
    let workers = workers.max(1) as u64;
    let mut acc = ScanAccumulator::new(cfg.n);
    let mut start = 0;
    while start < cfg.n {
        let end = cfg.n.min(start + workers * SAMPLES_PER_WORKER);
        let per = (end - start).div_ceil(workers);
        let chunks: Vec<_> = thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = (start + w * per).min(end);
                    let hi = (lo + per).min(end);
                    s.spawn(move || (lo..hi).map(|i| evaluate_sample(cfg, i)).collect::<Vec<_>>())
                })
                .collect();
            handles.into_iter().map(|h| h.join()).collect()
        });
        for chunk in chunks {
            for r in chunk.map_err(|_| anyhow!("scan worker panicked"))? {
                let r = r?;
                acc.add(&r)?;
                on_record(&r)?;
            }
        }
        start = end;
    }
    Ok(acc.finish())
}

pub fn csv_header(cfg: &ScanConfig) -> Vec<String> {
    let mut h: Vec<String> = vec!["index".into()];
    match &cfg.qudit {
        None => {
            h.extend(["a", "b", "c", "d"].map(String::from));
            h.extend((1..=4).map(|k| format!("r{k}")));
            h.extend((1..=4).map(|k| format!("phi{k}")));
        }
        Some(l) => {
            h.extend(["dim", "alpha", "beta", "gamma"].map(String::from));
            for j in 0..2 {
                h.extend((0..l.d).map(|k| format!("a{j}_{k}")));
            }
            for j in 0..2 {
                for slot in Slot::ALL {
                    h.push(format!("r{j}_{}", slot.label()));
                    h.push(format!("phi{j}_{}", slot.label()));
                }
            }
        }
    }
    h.extend(
        ["ppt", "min_poly", "min_con", "min_cyl", "min_sph", "det_poly", "det_con", "det_cyl", "det_sph", "det_any"]
            .map(String::from),
    );
    h
}

pub fn csv_row(r: &SampleRecord) -> Vec<String> {
    let mut row = vec![r.index.to_string()];
    match &r.params {
        ChessParams::Qubits(p) => {
            row.extend([p.a, p.b, p.c, p.d].into_iter().chain(p.r).chain(p.phi).map(fmt17));
        }
        ChessParams::Qudit(p) => {
            row.extend([p.d, p.alpha, p.beta, p.gamma].map(|x| x.to_string()));
            row.extend(p.diag.iter().flatten().copied().map(fmt17));
            for j in 0..2 {
                for slot in Slot::ALL {
                    let c = p.coupling(j, slot);
                    row.push(fmt17(c.r));
                    row.push(fmt17(c.phi));
                }
            }
        }
    }
    row.push(true.to_string());
    row.extend(r.minima.iter().copied().map(fmt17));
    row.extend(r.detected.iter().chain([&r.any]).map(|b| (*b as u8).to_string()));
    row
}

/// Runs a scan, streaming records as CSV into `out`.
pub fn scan_to_csv<W: Write>(cfg: &ScanConfig, workers: usize, out: W) -> Result<ScanSummary> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(cfg))?;
    let summary = run_parallel(cfg, workers, |r| Ok(w.write_record(csv_row(r))?))?;
    w.flush()?;
    Ok(summary)
}
