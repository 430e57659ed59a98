//! Trace CSV emission with the fixed schema
//! `k,epoch,block,alpha,f,gap,step_norm,env_grad,env_gap`.
//!
//! Gap cells are left empty when no reference optimum is available;
//! envelope cells are empty at records that were not probed.

use anyhow::Result;
use rcs_core::SolverTrace;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: &str = "k,epoch,block,alpha,f,gap,step_norm,env_grad,env_gap";

pub fn render_trace(
    trace: &SolverTrace,
    epoch_size: usize,
    f_star: Option<f64>,
    envelope: &BTreeMap<usize, (f64, f64)>,
) -> String {
    let mut out = String::with_capacity(64 * (trace.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in &trace.records {
        let epoch = rec.k / epoch_size.max(1);
        let _ = write!(
            out,
            "{},{},{},{},{}",
            rec.k, epoch, rec.block, rec.alpha, rec.objective
        );
        match f_star {
            Some(f_star) => {
                let _ = write!(out, ",{}", rec.objective - f_star);
            }
            None => out.push(','),
        }
        let _ = write!(out, ",{}", rec.step_norm);
        match envelope.get(&rec.k) {
            Some((grad, gap)) => {
                let _ = write!(out, ",{},{}", grad, gap);
            }
            None => out.push_str(",,"),
        }
        out.push('\n');
    }
    out
}

pub fn write_trace(
    path: &Path,
    trace: &SolverTrace,
    epoch_size: usize,
    f_star: Option<f64>,
    envelope: &BTreeMap<usize, (f64, f64)>,
) -> Result<()> {
    std::fs::write(path, render_trace(trace, epoch_size, f_star, envelope))?;
    Ok(())
}
