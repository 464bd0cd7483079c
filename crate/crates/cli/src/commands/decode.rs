use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use selfdual_core::decoder::Decoder;
use selfdual_core::sim::{read_samples, DetectorModel};
use serde::{Deserialize, Serialize};

use crate::common::{self, required, DecoderArgs};
use crate::config::merge;
use crate::manifest::Recorder;

#[derive(clap::Args, Debug, Default, Serialize, Deserialize)]
pub struct Args {
    /// JSON config; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Detector model in text form.
    #[arg(long)]
    pub dem: Option<PathBuf>,
    /// Packed binary samples.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub decoder: DecoderArgs,
    /// JSON result destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Counts {
    pub shots: u64,
    pub failures: u64,
    /// Shots where the decoder found no error matching the syndrome.
    pub invalid: u64,
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let dem_path = required(args.dem.clone(), "dem")?;
    let samples_path = required(args.samples.clone(), "samples")?;
    let text = std::fs::read_to_string(&dem_path).with_context(|| format!("reading {}", dem_path.display()))?;
    let model = DetectorModel::from_text(&text).with_context(|| format!("detector model {}", dem_path.display()))?;
    let file = std::fs::File::open(&samples_path).with_context(|| format!("opening {}", samples_path.display()))?;
    let samples = read_samples(std::io::BufReader::new(file)).with_context(|| format!("samples {}", samples_path.display()))?;
    if samples.detectors.cols() != model.num_detectors || samples.observables.cols() != model.num_observables {
        bail!(
            "samples carry {} detectors and {} observables, model expects {} and {}",
            samples.detectors.cols(),
            samples.observables.cols(),
            model.num_detectors,
            model.num_observables
        );
    }
    let decoder = Decoder::new(&model, args.decoder.config()?)?;
    let mut counts = Counts { shots: samples.shots() as u64, failures: 0, invalid: 0 };
    for s in 0..samples.shots() {
        let out = decoder.decode(&samples.detectors.row(s));
        counts.invalid += !out.valid as u64;
        counts.failures += (out.observables != samples.observables.row(s)) as u64;
    }
    let mut rec = Recorder::new("decode", &args, None)?;
    let json = serde_json::to_string(&counts)? + "\n";
    common::emit(&mut rec, args.out.as_ref(), json.as_bytes())?;
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
