use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use selfdual_core::sim;
use serde::{Deserialize, Serialize};

use crate::common::{self, required};
use crate::config::merge;
use crate::manifest::Recorder;

#[derive(clap::Args, Debug, Default, Serialize, Deserialize)]
pub struct Args {
    /// JSON config; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// CSV written by `simulate`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Logical qubits; read off the grey column when absent.
    #[arg(long)]
    pub k: Option<usize>,
    /// JSON result destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct Point {
    p: f64,
    #[serde(rename = "LFR")]
    lfr: f64,
    grey: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Report {
    k: usize,
    crossings: Vec<f64>,
}

fn infer_k(points: &[Point]) -> Option<usize> {
    points.iter().find_map(|pt| {
        let g = pt.grey?;
        (pt.p > 0.0 && pt.p < 1.0 && g > 0.0 && g < 1.0).then(|| ((1.0 - g).ln() / (1.0 - pt.p).ln()).round() as usize)
    })
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let path = required(args.csv.clone(), "csv")?;
    let mut reader = csv::Reader::from_path(&path).with_context(|| format!("reading {}", path.display()))?;
    let mut points: Vec<Point> = Vec::new();
    for row in reader.deserialize() {
        points.push(row.with_context(|| format!("parsing {}", path.display()))?);
    }
    if points.len() < 2 {
        bail!("need at least two grid points");
    }
    points.sort_by(|a, b| a.p.total_cmp(&b.p));
    let k = args.k.or_else(|| infer_k(&points)).ok_or_else(|| anyhow!("cannot infer k; pass --k"))?;
    let pts: Vec<(f64, f64)> = points.iter().map(|pt| (pt.p, pt.lfr)).collect();
    let crossings = sim::pseudothreshold_crossings(&pts, k);

    if crossings.is_empty() {
        println!("no crossing in range");
    }
    for p0 in &crossings {
        println!("p0 = {p0:e}");
    }
    let mut rec = Recorder::new("pseudothreshold", &args, None)?;
    if let Some(out) = &args.out {
        let json = serde_json::to_string(&Report { k, crossings })? + "\n";
        rec.write(out, json.as_bytes())?;
    }
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
