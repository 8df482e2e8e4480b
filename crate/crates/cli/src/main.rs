use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use kframes_core::douglas::canonical_kdual;
use kframes_core::frame::{DualPair, IndexSubset, KFrame, OperatorK};
use kframes_core::genlab::io::{read_frame, read_json, read_operator, to_json};
use kframes_core::genlab::{
    check_instance, gen_kframe, gen_operator, gen_parseval_kframe, run_campaign_with, trial_subsets, CampaignConfig,
    CheckOptions, Fault, GenConfig, Instance, SectionReport, SeededRng, SubsetPolicy, TheoremId,
};
use kframes_core::theorems::{check_thm_2_7, v_constants_direct};

#[derive(Parser)]
#[command(name = "kframes", version, about = "Generate K-frames and check identities and inequalities on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random operator, K-frame or Parseval K-frame as JSON.
    Gen(GenArgs),
    /// Run one checker against frame and operator files.
    Check(CheckArgs),
    /// Compute v± for a Parseval K-frame and a subset.
    Vconst(VconstArgs),
    /// Run a seeded campaign over many random instances.
    Campaign(CampaignArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Operator,
    Frame,
    Parseval,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Random,
    ExhaustiveSmall,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Dual,
    Parseval,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    dim: usize,
    /// Number of frame vectors; defaults to the dimension.
    #[arg(long)]
    count: Option<usize>,
    /// Rank of K; defaults to the dimension.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use this operator instead of generating one from the same seed.
    #[arg(long)]
    operator: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    theorem: String,
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    operator: PathBuf,
    /// K-dual vectors in the frame schema; the canonical dual otherwise.
    #[arg(long)]
    dual: Option<PathBuf>,
    /// `all`, `empty` or comma-separated indices; every subset (n ≤ 10) or
    /// 16 random ones otherwise.
    #[arg(long)]
    subset: Option<String>,
    #[arg(long, env = "KFRAMES_TOL")]
    tol: Option<f64>,
    /// Seed for test vectors.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    batch: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VconstArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    operator: PathBuf,
    #[arg(long)]
    subset: String,
    #[arg(long, env = "KFRAMES_TOL")]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    /// JSON campaign config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, env = "KFRAMES_TOL")]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    subset_policy: Option<PolicyArg>,
    /// Comma-separated section ids.
    #[arg(long)]
    theorems: Option<String>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    subsets_per_trial: Option<usize>,
    #[arg(long, value_enum)]
    fault: Option<FaultArg>,
    #[arg(long)]
    fault_size: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Check(a) => check(a),
        Command::Vconst(a) => vconst(a),
        Command::Campaign(a) => campaign(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tolerance(tol: Option<f64>) -> Result<f64> {
    let tol = tol.unwrap_or(kframes_core::DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("tolerance must be a positive number, got {tol}");
    }
    Ok(tol)
}

fn gen(a: GenArgs) -> Result<()> {
    let mut cfg = GenConfig::new(a.seed, a.dim, a.count.unwrap_or(a.dim), a.rank.unwrap_or(a.dim));
    let operator = match &a.operator {
        Some(p) => {
            let k = read_operator(p).with_context(|| format!("reading {}", p.display()))?;
            if k.dim() != a.dim {
                bail!("operator acts on dimension {}, --dim is {}", k.dim(), a.dim);
            }
            cfg.k_rank = cfg.k_rank.min(k.dim());
            Some(k)
        }
        None => None,
    };
    let k = match operator {
        Some(k) => k,
        None => gen_operator(&cfg)?,
    };
    let text = match a.kind {
        GenKind::Operator => to_json(&k)?,
        GenKind::Frame => to_json(&gen_kframe(&cfg, &k)?.with_label(format!("kframe seed={}", a.seed)))?,
        GenKind::Parseval => {
            to_json(&gen_parseval_kframe(&k, cfg.count, a.seed)?.with_label(format!("parseval seed={}", a.seed)))?
        }
    };
    emit(a.out.as_deref(), &(text + "\n"))
}

fn load_pair(frame: &Path, operator: &Path) -> Result<(KFrame, OperatorK)> {
    let f = read_frame(frame).with_context(|| format!("reading {}", frame.display()))?;
    let k = read_operator(operator).with_context(|| format!("reading {}", operator.display()))?;
    if f.dim() != k.dim() {
        bail!("frame lives in dimension {}, operator acts on dimension {}", f.dim(), k.dim());
    }
    Ok((f, k))
}

fn check(a: CheckArgs) -> Result<bool> {
    let id: TheoremId = a.theorem.parse()?;
    let tol = tolerance(a.tol)?;
    if a.batch == 0 {
        bail!("--batch must be positive");
    }
    let (f, k) = load_pair(&a.frame, &a.operator)?;
    let duals = match &a.dual {
        Some(p) => {
            let g = read_frame(p).with_context(|| format!("reading {}", p.display()))?;
            DualPair::new(f.clone(), g.synthesis_matrix().clone(), k.clone(), tol)
        }
        None => canonical_kdual(&f, &k, tol),
    }
    .map(|p| vec![p])
    .map_err(|e| e.to_string());
    let subsets = match &a.subset {
        Some(s) => vec![IndexSubset::parse(s, f.count())?],
        None => trial_subsets(SubsetPolicy::ExhaustiveSmall, f.count(), 16, &mut SeededRng::new(a.seed)),
    };
    let inst = Instance { k, parseval: Some(f.clone()), frame: f, duals };
    let report = check_instance(id, &inst, &subsets, a.seed, CheckOptions { tol, batch: a.batch });
    let text = match a.format {
        Format::Json => to_json(&report)? + "\n",
        Format::Text => section_text(&report),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(report.pass)
}

fn section_text(s: &SectionReport) -> String {
    let mut out = format!(
        "{} checks={} failed={} worst_residual={:.3e} verdict={}\n",
        s.theorem,
        s.checks,
        s.failed,
        s.worst_residual,
        if s.pass { "PASS" } else { "FAIL" }
    );
    for f in &s.failures {
        out += &format!("  subset={}: {}\n", f.subset.as_deref().unwrap_or("-"), f.detail);
    }
    if s.failures_omitted > 0 {
        out += &format!("  ({} more failures not listed)\n", s.failures_omitted);
    }
    out
}

fn vconst(a: VconstArgs) -> Result<bool> {
    let tol = tolerance(a.tol)?;
    let (f, k) = load_pair(&a.frame, &a.operator)?;
    let j = IndexSubset::parse(&a.subset, f.count())?;
    let r = check_thm_2_7(&f, &k, &j, tol)?;
    let text = match a.format {
        Format::Json => to_json(&r)? + "\n",
        Format::Text => {
            let direct = v_constants_direct(&f, &k, &j, tol)?;
            format!(
                "subset      {}\nv_minus     {:.15e}\nv_plus      {:.15e}\ncomplement  v_minus={:.15e} v_plus={:.15e}\n\
                 pencil      v_minus={:.15e} v_plus={:.15e}\nrange dim   {}\n\
                 bound       {:.6e} (kappa(1+kappa)), stated form {:.6e} held={}\nverdict     {}\n",
                j,
                r.v.v_minus,
                r.v.v_plus,
                r.v_complement.v_minus,
                r.v_complement.v_plus,
                direct.v_minus,
                direct.v_plus,
                r.v.restricted_dim,
                r.proof_bound,
                r.stated_bound,
                r.stated_bound_held,
                if r.pass { "PASS" } else { "FAIL" }
            )
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(r.pass)
}

fn campaign(a: CampaignArgs) -> Result<bool> {
    let mut config = match &a.config {
        Some(p) => read_json::<CampaignConfig>(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let dim = a.dim.context("--dim is required without --config")?;
            CampaignConfig::new(GenConfig::new(0, dim, dim, dim))
        }
    };
    let g = &mut config.gen;
    if let Some(d) = a.dim {
        g.dim = d;
        g.count = a.count.unwrap_or(g.count.max(d));
        g.k_rank = a.rank.unwrap_or(g.k_rank.min(d));
    }
    if let Some(n) = a.count {
        g.count = n;
    }
    if let Some(r) = a.rank {
        g.k_rank = r;
    }
    if let Some(s) = a.seed {
        g.seed = s;
    }
    if let Some(t) = a.trials {
        g.trials = t;
    }
    if a.tol.is_some() {
        g.tol = tolerance(a.tol)?;
    }
    if let Some(p) = a.subset_policy {
        g.subset_policy = match p {
            PolicyArg::Random => SubsetPolicy::Random,
            PolicyArg::ExhaustiveSmall => SubsetPolicy::ExhaustiveSmall,
        };
    }
    if let Some(list) = &a.theorems {
        config.theorems = list.split(',').map(str::parse).collect::<kframes_core::Result<_>>()?;
    }
    if let Some(b) = a.batch {
        config.batch = b;
    }
    if let Some(s) = a.subsets_per_trial {
        config.subsets_per_trial = s;
    }
    if let Some(f) = a.fault {
        config.fault = Some(match f {
            FaultArg::Dual => Fault::Dual,
            FaultArg::Parseval => Fault::Parseval,
        });
    }
    if let Some(s) = a.fault_size {
        config.fault_size = s;
    }
    let report = run_campaign_with(&config)?;
    let text = match a.format {
        Format::Json => report.to_json()? + "\n",
        Format::Text => report.to_text(),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(report.all_pass)
}
