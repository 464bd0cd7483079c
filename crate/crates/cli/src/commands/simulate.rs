use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use selfdual_core::distance::{self, ExactOutcome, LogicalSpace};
use selfdual_core::experiment::{DecodeScope, Experiment};
use selfdual_core::sim::{self, Basis, NoiseKind, NoiseModel};
use selfdual_core::{seed, Error};
use serde::{Deserialize, Serialize};

use crate::common::{self, load_spec, parse_name, required, DecoderArgs};
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
    /// code-capacity, phenomenological or circuit-level.
    #[arg(long)]
    pub noise: Option<String>,
    /// Physical error rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Shots per grid point.
    #[arg(long)]
    pub shots: Option<usize>,
    /// Syndrome rounds; defaults to the code distance.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Memory basis, z or x.
    #[arg(long)]
    pub basis: Option<String>,
    /// Depolarize idle qubits during CNOT layers.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub idle: Option<bool>,
    /// Detectors seen by the decoder: memory-basis or full.
    #[arg(long)]
    pub scope: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub decoder: DecoderArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Row {
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    #[serde(rename = "P_L")]
    pub p_l: f64,
    #[serde(rename = "LFR")]
    pub lfr: f64,
    #[serde(rename = "sigma_LFR")]
    pub sigma_lfr: f64,
    pub grey: f64,
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let loaded = load_spec(&required(args.spec.clone(), "spec")?)?;
    let kind: NoiseKind = required(args.noise.as_deref(), "noise")?.parse()?;
    let grid = required(args.p.clone(), "p")?;
    if grid.is_empty() {
        bail!("empty p grid");
    }
    for &p in &grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p = {p} is outside [0, 1]")).into());
        }
    }
    let shots = args.shots.unwrap_or(10_000);
    if shots == 0 {
        bail!("shots must be positive");
    }
    let seed = args.seed.unwrap_or(0);
    let basis = match args.basis.as_deref().unwrap_or("z") {
        "z" | "Z" => Basis::Z,
        "x" | "X" => Basis::X,
        other => return Err(anyhow!("unknown basis `{other}`")),
    };
    let scope: DecodeScope = match &args.scope {
        Some(s) => parse_name("decode scope", s)?,
        None => DecodeScope::default(),
    };
    let cfg = args.decoder.config()?;
    let code = loaded.spec.build()?;

    let rounds = match args.rounds.or(loaded.file.d) {
        Some(r) => r,
        None => {
            let space = LogicalSpace::of_code(&code)?;
            let bound = distance::distance_randomized_from(&space, 200, seed::child(seed, "simulate-rounds"), None)?;
            let d = if code.n <= 40 {
                match distance::distance_exact_with(&space, bound.d_upper, distance::DEFAULT_EXACT_BUDGET)? {
                    ExactOutcome::Found(r) => r.d_upper,
                    ExactOutcome::NotFoundBelow(_) => bound.d_upper,
                }
            } else {
                bound.d_upper
            };
            eprintln!("rounds = d = {d}");
            d
        }
    };

    let mut rec = Recorder::new("simulate", &args, Some(seed))?;
    rec.resolved(&serde_json::json!({
        "noise": kind,
        "p": grid,
        "shots": shots,
        "rounds": rounds,
        "basis": format!("{basis:?}"),
        "idle": args.idle.unwrap_or(false),
        "scope": scope,
        "decoder": cfg,
    }))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for &p in &grid {
        let noise = NoiseModel::new(kind, p)?.with_idle(args.idle.unwrap_or(false));
        let exp = Experiment::with_scope(&code, noise, rounds, basis, cfg, scope)?;
        let r = exp.run(shots, seed::child(seed, &format!("simulate-p{p:e}")))?;
        let row = Row {
            p,
            shots: r.shots,
            failures: r.failures,
            p_l: r.p_l,
            lfr: r.lfr,
            sigma_lfr: r.sigma_lfr,
            grey: sim::grey_line(p, code.k),
        };
        eprintln!("p = {p:e}: {} / {} failures, LFR {:e}", r.failures, r.shots, r.lfr);
        w.serialize(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("csv: {e}"))?;
    common::emit(&mut rec, args.out.as_ref(), &bytes)?;
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
