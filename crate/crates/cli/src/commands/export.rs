use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use selfdual_core::codes::seed_stabilizer_support;
use selfdual_core::gf2::BinMatrix;
use selfdual_core::io;
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
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// h, logicals or seed-support.
    #[arg(long)]
    pub what: Option<String>,
    /// alist or dense for matrices; seed-support is always JSON.
    #[arg(long)]
    pub format: Option<String>,
    /// Destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn matrix_text(m: &BinMatrix, format: &str) -> Result<String> {
    match format {
        "alist" => Ok(io::to_alist(m)),
        "dense" => Ok(io::to_dense(m)),
        other => Err(anyhow!("unknown format `{other}` (alist, dense)")),
    }
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let loaded = load_spec(&required(args.spec.clone(), "spec")?)?;
    let format = args.format.as_deref().unwrap_or("alist");
    let text = match args.what.as_deref().unwrap_or("h") {
        "h" => matrix_text(&loaded.spec.build()?.h, format)?,
        "logicals" => {
            let code = loaded.spec.build()?;
            matrix_text(&BinMatrix::from_rows(code.n, &code.logicals)?, format)?
        }
        "seed-support" => serde_json::to_string(&seed_stabilizer_support(&loaded.spec)?)? + "\n",
        other => return Err(anyhow!("unknown export `{other}` (h, logicals, seed-support)")),
    };
    let mut rec = Recorder::new("export", &args, None)?;
    common::emit(&mut rec, args.out.as_ref(), text.as_bytes())?;
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
