use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use selfdual_core::algebra::quotient_dim;
use selfdual_core::distance::{self, ExactOutcome, LogicalSpace};
use selfdual_core::search::Merit;
use selfdual_core::{seed, Error};
use serde::{Deserialize, Serialize};

use crate::common::{self, load_spec, required};
use crate::config::merge;
use crate::manifest::Recorder;

#[derive(clap::Args, Debug, Default, Serialize, Deserialize)]
pub struct Args {
    /// JSON config; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Code spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Codes up to this length get an exact distance.
    #[arg(long)]
    pub exact_max_n: Option<usize>,
    /// Codewords the exact search may visit.
    #[arg(long)]
    pub exact_budget: Option<u64>,
    /// Randomized distance iterations.
    #[arg(long)]
    pub iters: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the report as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub n: usize,
    pub k: usize,
    pub parity: String,
    pub k_max: Option<usize>,
    pub d: usize,
    pub d_exact: bool,
    pub merit: String,
    pub label: String,
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let loaded = load_spec(&required(args.spec.clone(), "spec")?)?;
    let seed = args.seed.unwrap_or(0);
    let mut rec = Recorder::new("params", &args, Some(seed))?;
    let spec = &loaded.spec;
    let code = spec.build()?;

    let k_max = if spec.family.is_translation() {
        Some(quotient_dim(&spec.lattice, &spec.stack_polynomial()?)?)
    } else {
        None
    };
    if let Some(km) = k_max {
        if 2 * km != code.k {
            return Err(Error::Internal(format!("k = {} but 2·k_max = {}", code.k, 2 * km)).into());
        }
    }

    let iters = args.iters.unwrap_or(1000);
    let space = LogicalSpace::of_code(&code)?;
    let mut d = distance::distance_randomized_from(&space, iters.max(1), seed::child(seed, "params-distance"), None)?;
    if code.n <= args.exact_max_n.unwrap_or(40) {
        match distance::distance_exact_with(&space, d.d_upper, args.exact_budget.unwrap_or(distance::DEFAULT_EXACT_BUDGET)) {
            Ok(ExactOutcome::Found(r)) => d = r,
            Ok(ExactOutcome::NotFoundBelow(_)) => return Err(Error::Internal("exact search missed a logical".into()).into()),
            Err(Error::BudgetExhausted { .. }) => eprintln!("warning: exact budget exhausted, reporting an upper bound"),
            Err(e) => return Err(e.into()),
        }
    }

    let bound = if d.exact { "" } else { "<=" };
    let report = Report {
        n: code.n,
        k: code.k,
        parity: code.parity.to_string(),
        k_max,
        d: d.d_upper,
        d_exact: d.exact,
        merit: Merit::new(code.n, code.k, d.d_upper).rounded(),
        label: format!("[[{},{},{}{}]]", code.n, code.k, bound, d.d_upper),
    };

    let mut text = String::new();
    writeln!(text, "{} {}", report.label, report.parity)?;
    writeln!(text, "n = {}", report.n)?;
    writeln!(text, "k = {}", report.k)?;
    match k_max {
        Some(km) => writeln!(text, "k_max = {km} (2·k_max = k)")?,
        None => writeln!(text, "k_max = n/a (reflection family)")?,
    }
    let how = if d.exact { "exact".to_string() } else { format!("upper bound, {iters} iterations, seed {seed}") };
    writeln!(text, "d = {}{} ({how})", bound, report.d)?;
    writeln!(text, "kd^2/n = {}", report.merit)?;
    if let Some(claimed) = loaded.file.d {
        if claimed != report.d {
            writeln!(text, "note: spec lists d = {claimed}")?;
        }
    }
    print!("{text}");
    if let Some(out) = &args.out {
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        rec.write(out, json.as_bytes())?;
    }
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
