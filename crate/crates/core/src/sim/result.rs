use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub shots: u64,
    pub failures: u64,
    pub rounds: usize,
    pub p_l: f64,
    pub lfr: f64,
    pub sigma_lfr: f64,
}

pub fn summarize(shots: u64, failures: u64, rounds: usize) -> Result<SimResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    if failures > shots {
        return Err(Error::InvalidArgument("failures exceed shots".into()));
    }
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be positive".into()));
    }
    let p_l = failures as f64 / shots as f64;
    let inv = 1.0 / rounds as f64;
    let lfr = 1.0 - (1.0 - p_l).powf(inv);
    let sigma_lfr = if failures == 0 || failures == shots {
        0.0
    } else {
        inv * (1.0 - p_l).powf(inv - 1.0) * (p_l * (1.0 - p_l) / shots as f64).sqrt()
    };
    Ok(SimResult { shots, failures, rounds, p_l, lfr, sigma_lfr })
}

/// Chance that at least one of `k` unprotected qubits fails.
pub fn grey_line(p: f64, k: usize) -> f64 {
    1.0 - (1.0 - p).powi(k as i32)
}

/// Points where the LFR curve meets the grey line, interpolated linearly in
/// log-log coordinates between grid points. Input must be sorted by `p`.
pub fn pseudothreshold_crossings(points: &[(f64, f64)], k: usize) -> Vec<f64> {
    let f = |&(p, lfr): &(f64, f64)| lfr.ln() - grey_line(p, k).ln();
    let mut out = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        let fi = f(pt);
        if fi == 0.0 {
            out.push(pt.0);
            continue;
        }
        let Some(next) = points.get(i + 1) else { break };
        let fj = f(next);
        if fj == 0.0 || fi.signum() == fj.signum() || fi.is_nan() || fj.is_nan() {
            continue;
        }
        let (lp, lq) = (pt.0.ln(), next.0.ln());
        let p0 = if fi.is_finite() && fj.is_finite() {
            (lp + fi / (fi - fj) * (lq - lp)).exp()
        } else {
            // zero LFR at an end point: fall back to linear interpolation
            let g = |&(p, lfr): &(f64, f64)| lfr - grey_line(p, k);
            let (gi, gj) = (g(pt), g(next));
            pt.0 + gi / (gi - gj) * (next.0 - pt.0)
        };
        out.push(p0);
    }
    out
}
