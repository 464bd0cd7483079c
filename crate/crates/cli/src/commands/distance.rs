use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use selfdual_core::distance::{self, DistanceResult, Effort, ExactOutcome, LogicalSpace};
use selfdual_core::{seed, Error};
use serde::{Deserialize, Serialize};

use crate::common::{self, load_spec, required, EXIT_BUDGET};
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
    /// `auto` (randomized bound, then exact), `exact` or `randomized`.
    #[arg(long)]
    pub method: Option<String>,
    /// Largest weight the exact search looks at; defaults to n.
    #[arg(long)]
    pub w_max: Option<usize>,
    /// Randomized iterations.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Codewords the exact search may visit.
    #[arg(long)]
    pub exact_budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON record destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Record {
    n: usize,
    k: usize,
    /// Proven lower bound; equals `d_upper` when exact.
    d_lower: usize,
    d_upper: Option<usize>,
    exact: bool,
    budget_exhausted: bool,
    witness: Option<Vec<usize>>,
    effort: Effort,
}

impl Record {
    fn from_result(n: usize, k: usize, r: &DistanceResult) -> Self {
        Record {
            n,
            k,
            d_lower: if r.exact { r.d_upper } else { 1 },
            d_upper: Some(r.d_upper),
            exact: r.exact,
            budget_exhausted: false,
            witness: Some(r.witness.support()),
            effort: r.effort,
        }
    }
}

pub fn run(flags: Args) -> Result<ExitCode> {
    let args = merge(&flags, flags.config.as_deref())?;
    let loaded = load_spec(&required(args.spec.clone(), "spec")?)?;
    let seed = args.seed.unwrap_or(0);
    let mut rec = Recorder::new("distance", &args, Some(seed))?;
    let code = loaded.spec.build()?;
    let space = LogicalSpace::of_code(&code)?;
    let method = args.method.as_deref().unwrap_or("auto");
    let iters = args.iters.unwrap_or(1000);
    let budget = args.exact_budget.unwrap_or(distance::DEFAULT_EXACT_BUDGET);
    let randomized = || distance::distance_randomized_from(&space, iters.max(1), seed::child(seed, "distance"), None);

    let (record, exit) = match method {
        "randomized" => (Record::from_result(code.n, code.k, &randomized()?), ExitCode::SUCCESS),
        "exact" | "auto" => {
            let bound = if method == "auto" { Some(randomized()?) } else { None };
            let w_max = args.w_max.or(bound.as_ref().map(|b| b.d_upper)).unwrap_or(code.n);
            match distance::distance_exact_with(&space, w_max, budget) {
                Ok(ExactOutcome::Found(r)) => (Record::from_result(code.n, code.k, &r), ExitCode::SUCCESS),
                Ok(ExactOutcome::NotFoundBelow(w)) => {
                    let mut r = Record {
                        n: code.n,
                        k: code.k,
                        d_lower: w + 1,
                        d_upper: None,
                        exact: false,
                        budget_exhausted: false,
                        witness: None,
                        effort: Effort::default(),
                    };
                    if let Some(b) = &bound {
                        r.d_upper = Some(b.d_upper);
                        r.witness = Some(b.witness.support());
                    }
                    (r, ExitCode::SUCCESS)
                }
                Err(Error::BudgetExhausted { lower, upper }) => {
                    let best = match (&bound, upper) {
                        (Some(b), Some(u)) if u >= b.d_upper => Some(b),
                        (Some(b), None) => Some(b),
                        _ => None,
                    };
                    let record = Record {
                        n: code.n,
                        k: code.k,
                        d_lower: lower.max(1),
                        d_upper: best.map(|b| b.d_upper).or(upper),
                        exact: false,
                        budget_exhausted: true,
                        witness: best.map(|b| b.witness.support()),
                        effort: best.map(|b| b.effort).unwrap_or_default(),
                    };
                    eprintln!("error: exact budget of {budget} codewords exhausted; partial result written");
                    (record, ExitCode::from(EXIT_BUDGET))
                }
                Err(e) => return Err(e.into()),
            }
        }
        other => return Err(anyhow!("unknown method `{other}` (auto, exact, randomized)")),
    };

    let mut json = serde_json::to_string(&record)?;
    json.push('\n');
    common::emit(&mut rec, args.out.as_ref(), json.as_bytes())?;
    common::finish(rec, args.out.as_ref(), args.manifest.as_ref())?;
    Ok(exit)
}
