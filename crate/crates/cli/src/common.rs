use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use selfdual_core::codes::CodeSpec;
use selfdual_core::decoder::{BpVariant, DecoderConfig};
use selfdual_core::io::SpecFile;
use selfdual_core::Error;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::BudgetExhausted { .. }) => EXIT_BUDGET,
        Some(Error::Internal(_)) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

pub fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing `{flag}` (flag or config key)"))
}

/// Parses a kebab-case name into a serde enum.
pub fn parse_name<T: DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| anyhow!("unknown {what} `{s}`"))
}

pub struct LoadedSpec {
    pub file: SpecFile,
    pub spec: CodeSpec,
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading spec {}", path.display()))?;
    let file = SpecFile::from_json(&text).with_context(|| format!("spec {}", path.display()))?;
    let (spec, warnings) = file.to_spec().with_context(|| format!("spec {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(LoadedSpec { file, spec })
}

/// Decoder flags shared by `simulate` and `decode`.
#[derive(clap::Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct DecoderArgs {
    /// BP iterations.
    #[arg(long)]
    pub bp_iters: Option<usize>,
    /// `min-sum` or `product-sum`.
    #[arg(long)]
    pub bp_variant: Option<String>,
    /// Min-sum scaling factor.
    #[arg(long)]
    pub ms_scale: Option<f64>,
    /// OSD order; 0 is OSD-0.
    #[arg(long)]
    pub osd_order: Option<usize>,
    /// Plain BP without OSD post-processing.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_osd: Option<bool>,
}

impl DecoderArgs {
    pub fn config(&self) -> Result<DecoderConfig> {
        let mut cfg = DecoderConfig::default();
        if let Some(i) = self.bp_iters {
            cfg.bp_iters = i;
        }
        let scale = match cfg.bp_variant {
            BpVariant::MinSum { scale } => self.ms_scale.unwrap_or(scale),
            BpVariant::ProductSum => self.ms_scale.unwrap_or(0.8),
        };
        cfg.bp_variant = match self.bp_variant.as_deref() {
            None | Some("min-sum") => BpVariant::MinSum { scale },
            Some("product-sum") => BpVariant::ProductSum,
            Some(other) => return Err(anyhow!("unknown bp variant `{other}`")),
        };
        if let Some(o) = self.osd_order {
            cfg.osd_order = Some(o);
        }
        if self.no_osd == Some(true) {
            cfg.osd_order = None;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Output target: a file (tracked in the manifest) or stdout.
pub fn emit(rec: &mut crate::manifest::Recorder, out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => rec.write(p, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

pub fn finish(rec: crate::manifest::Recorder, out: Option<&PathBuf>, manifest: Option<&PathBuf>) -> Result<()> {
    match (manifest, out) {
        (Some(m), _) => rec.finish(m),
        (None, Some(o)) => rec.finish(&crate::manifest::default_path(o)),
        (None, None) => Ok(()),
    }
}
