use std::cell::RefCell;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use selfdual_core::codes::Family;
use selfdual_core::io::SpecFile;
use selfdual_core::search::{self, DistanceBudget, ParityFilter, SearchHit, SearchSpace, SearchState, Span};
use serde::{Deserialize, Serialize};

use crate::common::{self, parse_name, required};
use crate::config::{merge, parse_span};
use crate::manifest::Recorder;

#[derive(clap::Args, Debug, Default, Serialize, Deserialize)]
pub struct Args {
    /// JSON config; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// bicycle, bb, twisted-bb or reflection.
    #[arg(long)]
    pub family: Option<String>,
    /// Range of l, e.g. `6..12`.
    #[arg(long)]
    pub l: Option<String>,
    /// Range of m; bicycle codes use 1.
    #[arg(long)]
    pub m: Option<String>,
    /// Twist range for twisted-bb.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Terms per polynomial.
    #[arg(long)]
    pub terms: Option<usize>,
    /// any, odd-only or even-only.
    #[arg(long)]
    pub parity: Option<String>,
    /// Candidates drawn.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Keep symmetry-equivalent candidates.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_symmetry_reduction: Option<bool>,
    /// Randomized distance iterations per candidate.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Iterations of the pruning pre-pass.
    #[arg(long)]
    pub probe_iters: Option<u64>,
    /// Codes up to this length get an exact distance.
    #[arg(long)]
    pub exact_max_n: Option<usize>,
    #[arg(long)]
    pub exact_budget: Option<u64>,
    /// JSON-lines hit stream; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Resumable state; resumed from when it exists.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Final ranked frontier as JSON lines.
    #[arg(long)]
    pub frontier: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    space: SearchSpace,
    budget: DistanceBudget,
    state: SearchState,
}

#[derive(Debug, Serialize)]
struct HitRecord {
    n: usize,
    k: usize,
    d_upper: usize,
    exact: bool,
    parity: String,
    merit: String,
    spec: SpecFile,
}

fn hit_line(h: &SearchHit) -> Result<String> {
    let r = HitRecord {
        n: h.n,
        k: h.k,
        d_upper: h.d_upper,
        exact: h.exact,
        parity: h.parity.to_string(),
        merit: h.merit.rounded(),
        spec: SpecFile::from_spec(&h.spec),
    };
    Ok(serde_json::to_string(&r)? + "\n")
}

fn span(flag: &str, s: Option<&str>, default: Span) -> Result<Span> {
    match s {
        None => Ok(default),
        Some(s) => {
            let (lo, hi) = parse_span(s).map_err(|e| anyhow!("--{flag}: {e}"))?;
            Ok(Span::new(lo, hi))
        }
    }
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let family: Family = required(args.family.as_deref(), "family")?.parse()?;
    let l = span("l", Some(required(args.l.as_deref(), "l")?), Span::single(1))?;
    let m_default = if family == Family::Bicycle { Span::single(1) } else { Span::new(2, 2) };
    let m = span("m", args.m.as_deref(), m_default)?;
    let mut space = SearchSpace::new(family, l, m);
    space.gamma = span("gamma", args.gamma.as_deref(), space.gamma)?;
    if let Some(t) = args.terms {
        space.terms = t;
    }
    if let Some(p) = &args.parity {
        space.parity = parse_name::<ParityFilter>("parity filter", p)?;
    }
    space.budget = args.budget.unwrap_or(space.budget);
    space.seed = args.seed.unwrap_or(0);
    space.reduce_symmetry = !args.no_symmetry_reduction.unwrap_or(false);
    space.validate()?;
    let mut budget = DistanceBudget::default();
    if let Some(i) = args.iters {
        budget.iters = i;
    }
    if let Some(i) = args.probe_iters {
        budget.probe_iters = i;
    }
    if let Some(n) = args.exact_max_n {
        budget.exact_max_n = n;
    }
    if let Some(b) = args.exact_budget {
        budget.exact_budget = b;
    }

    let mut rec = Recorder::new("search", &args, Some(space.seed))?;
    rec.resolved(&serde_json::json!({ "space": space, "distance": budget }))?;
    let mut state = SearchState::default();
    let mut resumed = false;
    if let Some(cp) = args.checkpoint.as_ref().filter(|p| p.exists()) {
        let text = std::fs::read_to_string(cp).with_context(|| format!("reading checkpoint {}", cp.display()))?;
        let saved: Checkpoint = serde_json::from_str(&text).with_context(|| format!("checkpoint {}", cp.display()))?;
        if serde_json::to_value(&saved.space)? != serde_json::to_value(&space)? {
            bail!("checkpoint {} was written for a different search space", cp.display());
        }
        state = saved.state;
        resumed = true;
        eprintln!("resuming at candidate {}", state.cursor);
    }

    let sink: RefCell<Box<dyn Write>> = RefCell::new(match &args.out {
        Some(p) => {
            let f = OpenOptions::new()
                .create(true)
                .write(true)
                .append(resumed)
                .truncate(!resumed)
                .open(p)
                .with_context(|| format!("opening {}", p.display()))?;
            Box::new(f)
        }
        None => Box::new(std::io::stdout()),
    });
    let pending: RefCell<Vec<String>> = RefCell::new(Vec::new());
    let checkpoint = |s: &SearchState| -> selfdual_core::Result<()> {
        let io = |e: std::io::Error| selfdual_core::Error::Io(e);
        let mut out = sink.borrow_mut();
        for line in pending.borrow_mut().drain(..) {
            out.write_all(line.as_bytes()).map_err(io)?;
        }
        out.flush().map_err(io)?;
        if let Some(cp) = &args.checkpoint {
            let saved = Checkpoint { space: space.clone(), budget, state: s.clone() };
            let text = serde_json::to_string(&saved)?;
            let tmp = cp.with_extension("tmp");
            std::fs::write(&tmp, text).map_err(io)?;
            std::fs::rename(&tmp, cp).map_err(io)?;
        }
        Ok(())
    };
    let mut line_err = None;
    search::search_resume(
        &space,
        &budget,
        &mut state,
        |h| match hit_line(h) {
            Ok(l) => pending.borrow_mut().push(l),
            Err(e) => line_err = Some(e),
        },
        checkpoint,
    )?;
    if let Some(e) = line_err {
        return Err(e);
    }
    drop(sink);
    if let Some(cp) = &args.checkpoint {
        if !cp.exists() {
            let saved = Checkpoint { space: space.clone(), budget, state: state.clone() };
            std::fs::write(cp, serde_json::to_string(&saved)?)?;
        }
        rec.track(cp);
    }
    if let Some(p) = &args.out {
        rec.track(p);
    }

    let mut frontier = state.frontier.clone();
    search::rank_hits(&mut frontier);
    eprintln!("{} candidates, frontier of {}", state.cursor, frontier.len());
    if let Some(p) = &args.frontier {
        let mut text = String::new();
        for h in &frontier {
            text += &hit_line(h)?;
        }
        rec.write(p, text.as_bytes())?;
    }
    common::finish(rec, args.out.as_ref().or(args.frontier.as_ref()), args.manifest.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
