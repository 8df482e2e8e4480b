//! Seeded verification campaigns over every registered checker.
//!
//! Trial `t` draws its instance from `trial_seed(seed, t)`, and each section
//! draws its test vectors from a stream salted with the section id, so a
//! section's results do not depend on which other sections run. Sections
//! record a nonnegative residual per check (relative error for identities,
//! relative violation for inequalities, 0/1 for verdict agreement) and keep
//! the worst one together with the trial that produced it.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::gen::{random_kframe, random_operator, random_parseval_kframe, GenConfig, SubsetPolicy};
use super::rng::{trial_seed, SeededRng, GOLDEN};
use crate::douglas::{canonical_kdual, douglas_infimum_check, douglas_solve, parametrized_kdual};
use crate::error::{Error, Result};
use crate::frame::{DualPair, IndexSubset, KFrame, OperatorK};
use crate::jensen::{
    check_jensen_3_1, check_jensen_3_2, check_thm_3_3_i, check_thm_3_3_ii, convex_catalog, operator_convex_catalog,
    PositiveMapFamily, ScalarFunctionSpec,
};
use crate::numkit::{herm_eig, norm, op_norm, CMat, LoewnerReport, C64};
use crate::theorems::{
    check_cor_2_2, check_cor_2_8, check_cor_2_9, check_lemma_2_6, check_thm_2_1, check_thm_2_3, check_thm_2_4,
    check_thm_2_5, check_thm_2_7, IdentityReport, InequalityReport,
};

/// Exhaustive subset enumeration stops above this many frame vectors.
pub const EXHAUSTIVE_MAX_COUNT: usize = 10;

/// Path agreement and affine equalities are held to this fraction of `tol`.
const STRICT_FRACTION: f64 = 0.1;

/// At most this many failures are listed per section; the rest are counted.
const MAX_LISTED_FAILURES: usize = 25;

const SUBSET_SALT: u64 = 0x7375_6273_6574_7321;
const INSTANCE_SALT: u64 = 0x696e_7374_616e_6365;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "thm2.1")]
    Thm21,
    #[serde(rename = "cor2.2")]
    Cor22,
    #[serde(rename = "thm2.3")]
    Thm23,
    #[serde(rename = "thm2.4")]
    Thm24,
    #[serde(rename = "thm2.5")]
    Thm25,
    #[serde(rename = "lem2.6")]
    Lem26,
    #[serde(rename = "thm2.7")]
    Thm27,
    #[serde(rename = "cor2.8")]
    Cor28,
    #[serde(rename = "cor2.9")]
    Cor29,
    #[serde(rename = "jensen3.1")]
    Jensen31,
    #[serde(rename = "jensen3.2")]
    Jensen32,
    #[serde(rename = "thm3.3i")]
    Thm33i,
    #[serde(rename = "thm3.3ii")]
    Thm33ii,
    #[serde(rename = "cor3.4")]
    Cor34,
    #[serde(rename = "douglas")]
    Douglas,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::Thm21,
        TheoremId::Cor22,
        TheoremId::Thm23,
        TheoremId::Thm24,
        TheoremId::Thm25,
        TheoremId::Lem26,
        TheoremId::Thm27,
        TheoremId::Cor28,
        TheoremId::Cor29,
        TheoremId::Jensen31,
        TheoremId::Jensen32,
        TheoremId::Thm33i,
        TheoremId::Thm33ii,
        TheoremId::Cor34,
        TheoremId::Douglas,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm21 => "thm2.1",
            TheoremId::Cor22 => "cor2.2",
            TheoremId::Thm23 => "thm2.3",
            TheoremId::Thm24 => "thm2.4",
            TheoremId::Thm25 => "thm2.5",
            TheoremId::Lem26 => "lem2.6",
            TheoremId::Thm27 => "thm2.7",
            TheoremId::Cor28 => "cor2.8",
            TheoremId::Cor29 => "cor2.9",
            TheoremId::Jensen31 => "jensen3.1",
            TheoremId::Jensen32 => "jensen3.2",
            TheoremId::Thm33i => "thm3.3i",
            TheoremId::Thm33ii => "thm3.3ii",
            TheoremId::Cor34 => "cor3.4",
            TheoremId::Douglas => "douglas",
        }
    }

    /// Sections that require a Parseval K-frame.
    pub fn needs_parseval(self) -> bool {
        matches!(
            self,
            TheoremId::Thm24
                | TheoremId::Thm25
                | TheoremId::Thm27
                | TheoremId::Cor28
                | TheoremId::Cor29
                | TheoremId::Thm33i
                | TheoremId::Thm33ii
                | TheoremId::Cor34
        )
    }

    /// Sections that run once per subset rather than once per trial.
    pub fn uses_subsets(self) -> bool {
        !matches!(self, TheoremId::Lem26 | TheoremId::Jensen31 | TheoremId::Jensen32 | TheoremId::Douglas)
    }

    fn salt(self) -> u64 {
        let pos = TheoremId::ALL.iter().position(|&t| t == self).expect("registered id") as u64;
        (pos + 1).wrapping_mul(GOLDEN).rotate_left(17)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownTheoremId(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Perturb one vector of every generated dual.
    Dual,
    /// Perturb one vector of the generated Parseval K-frame.
    Parseval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(flatten)]
    pub gen: GenConfig,
    #[serde(default = "all_theorems")]
    pub theorems: Vec<TheoremId>,
    /// Random vectors per check of the batch-quantified equivalence.
    #[serde(default = "default_batch")]
    pub batch: usize,
    /// Subsets per trial under the random policy.
    #[serde(default = "default_subsets")]
    pub subsets_per_trial: usize,
    #[serde(default)]
    pub fault: Option<Fault>,
    /// Relative size of an injected fault.
    #[serde(default = "default_fault_size")]
    pub fault_size: f64,
}

fn all_theorems() -> Vec<TheoremId> {
    TheoremId::ALL.to_vec()
}

fn default_batch() -> usize {
    200
}

fn default_subsets() -> usize {
    4
}

fn default_fault_size() -> f64 {
    1e-3
}

impl CampaignConfig {
    pub fn new(gen: GenConfig) -> Self {
        CampaignConfig {
            gen,
            theorems: all_theorems(),
            batch: default_batch(),
            subsets_per_trial: default_subsets(),
            fault: None,
            fault_size: default_fault_size(),
        }
    }

    pub fn with_theorems(mut self, theorems: Vec<TheoremId>) -> Self {
        self.theorems = theorems;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.gen.validate()?;
        if self.theorems.is_empty() {
            return Err(Error::BadConfig("no theorems selected".into()));
        }
        if self.batch == 0 || self.subsets_per_trial == 0 {
            return Err(Error::BadConfig("batch and subsets_per_trial must be positive".into()));
        }
        if !(self.fault_size > 0.0 && self.fault_size.is_finite()) {
            return Err(Error::BadConfig(format!("fault_size must be positive, got {}", self.fault_size)));
        }
        if self.gen.count < self.gen.k_rank {
            return Err(Error::BadConfig(format!(
                "{} vectors cannot form a K-frame for a rank-{} operator",
                self.gen.count, self.gen.k_rank
            )));
        }
        if self.gen.count < self.gen.dim && self.theorems.iter().any(|t| t.needs_parseval()) {
            return Err(Error::BadConfig(format!(
                "Parseval sections need count >= dim, got count {} in dimension {}",
                self.gen.count, self.gen.dim
            )));
        }
        Ok(())
    }
}

/// Reproduction tuple and diagnosis of a failing check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub theorem: TheoremId,
    pub seed: u64,
    pub trial: usize,
    pub trial_seed: u64,
    pub subset: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub theorem: TheoremId,
    pub checks: u64,
    pub passed: u64,
    pub failed: u64,
    pub worst_residual: f64,
    pub worst_trial: Option<usize>,
    pub worst_seed: Option<u64>,
    pub failures: Vec<FailureRecord>,
    pub failures_omitted: u64,
    pub pass: bool,
}

impl SectionReport {
    fn new(theorem: TheoremId) -> Self {
        SectionReport {
            theorem,
            checks: 0,
            passed: 0,
            failed: 0,
            worst_residual: 0.0,
            worst_trial: None,
            worst_seed: None,
            failures: Vec::new(),
            failures_omitted: 0,
            pass: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub sections: Vec<SectionReport>,
    pub total_checks: u64,
    pub total_failed: u64,
    pub all_pass: bool,
    pub wall_clock_seconds: f64,
}

impl CampaignReport {
    pub fn section(&self, id: TheoremId) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.theorem == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON without the wall-clock field: identical configs give identical bytes.
    pub fn to_json_deterministic(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_clock_seconds");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn to_text(&self) -> String {
        let g = &self.config.gen;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "campaign seed={} dim={} count={} k_rank={} trials={} tol={:e} subsets={}{}",
            g.seed,
            g.dim,
            g.count,
            g.k_rank,
            g.trials,
            g.tol,
            match g.subset_policy {
                SubsetPolicy::Random => "random",
                SubsetPolicy::ExhaustiveSmall => "exhaustive-small",
            },
            match self.config.fault {
                Some(Fault::Dual) => " fault=dual",
                Some(Fault::Parseval) => " fault=parseval",
                None => "",
            }
        );
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>8} {:>14} {:>11}  verdict",
            "section", "checks", "failed", "worst_resid", "worst_trial"
        );
        for s in &self.sections {
            let _ = writeln!(
                out,
                "{:<10} {:>8} {:>8} {:>14.3e} {:>11}  {}",
                s.theorem.as_str(),
                s.checks,
                s.failed,
                s.worst_residual,
                s.worst_trial.map_or_else(|| "-".to_string(), |t| t.to_string()),
                if s.pass { "PASS" } else { "FAIL" }
            );
        }
        let listed: Vec<&FailureRecord> = self.sections.iter().flat_map(|s| &s.failures).collect();
        if !listed.is_empty() {
            let _ = writeln!(out, "failures:");
            for f in listed {
                let _ = writeln!(
                    out,
                    "  {} seed={} trial={} trial_seed={} subset={}: {}",
                    f.theorem,
                    f.seed,
                    f.trial,
                    f.trial_seed,
                    f.subset.as_deref().unwrap_or("-"),
                    f.detail
                );
            }
        }
        let _ = writeln!(
            out,
            "overall: {} ({} checks, {} failed, {:.2}s)",
            if self.all_pass { "PASS" } else { "FAIL" },
            self.total_checks,
            self.total_failed,
            self.wall_clock_seconds
        );
        out
    }
}

/// The objects a trial checks against.
#[derive(Clone, Debug)]
pub struct Instance {
    pub k: OperatorK,
    pub frame: KFrame,
    pub parseval: Option<KFrame>,
    /// K-duals of `frame`, or why none could be formed.
    pub duals: std::result::Result<Vec<DualPair>, String>,
}

impl Instance {
    /// Generates `K`, a K-frame with its canonical and one parametrized
    /// K-dual, and (when `count ≥ dim`) a Parseval K-frame.
    pub fn generate(cfg: &GenConfig, seed: u64) -> Result<Instance> {
        let mut rng = SeededRng::new(seed ^ INSTANCE_SALT);
        let k = random_operator(&mut rng, cfg.dim, cfg.k_rank)?;
        let frame = random_kframe(&mut rng, &k, cfg.count)?;
        let z = rng.gaussian_matrix(cfg.count, cfg.dim);
        let parseval = if cfg.count >= cfg.dim { Some(random_parseval_kframe(&mut rng, &k, cfg.count)?) } else { None };
        let duals = vec![canonical_kdual(&frame, &k, cfg.tol)?, parametrized_kdual(&frame, &k, &z, cfg.tol)?];
        Ok(Instance { k, frame, parseval, duals: Ok(duals) })
    }

    /// Adds `size · max(‖v_i‖, ‖V‖_F/√n) · u` to one column `v_i` of each dual
    /// or of the Parseval frame, for a random unit vector `u`.
    pub fn inject(&mut self, fault: Fault, size: f64, rng: &mut SeededRng) -> Result<()> {
        match fault {
            Fault::Dual => {
                if let Ok(duals) = &mut self.duals {
                    for pair in duals.iter_mut() {
                        let g = perturb_column(&pair.dual_vectors, size, rng);
                        *pair = DualPair::from_parts_unchecked(pair.frame.clone(), g, pair.operator.clone())?;
                    }
                }
            }
            Fault::Parseval => {
                if let Some(p) = &self.parseval {
                    let label = p.label.clone();
                    let mut q = KFrame::new(perturb_column(p.synthesis_matrix(), size, rng))?;
                    q.label = label;
                    self.parseval = Some(q);
                }
            }
        }
        Ok(())
    }
}

fn perturb_column(m: &CMat, size: f64, rng: &mut SeededRng) -> CMat {
    let i = rng.below(m.cols());
    let col = m.col(i);
    let scale = norm(&col).max(m.frobenius_norm() / (m.cols() as f64).sqrt());
    let u = super::gen::random_unit_vector(rng, m.rows());
    let mut out = m.clone();
    let moved: Vec<C64> = col.iter().zip(&u).map(|(&c, &d)| c + d * (size * scale)).collect();
    out.set_col(i, &moved);
    out
}

/// Subsets a trial checks: all `2ⁿ` under the exhaustive policy for
/// `n ≤ 10`, otherwise `per_trial` random ones.
pub fn trial_subsets(policy: SubsetPolicy, n: usize, per_trial: usize, rng: &mut SeededRng) -> Vec<IndexSubset> {
    if policy == SubsetPolicy::ExhaustiveSmall && n <= EXHAUSTIVE_MAX_COUNT {
        (0..1u64 << n).map(|mask| IndexSubset::from_mask(mask, n)).collect()
    } else {
        (0..per_trial).map(|_| rng.subset(n)).collect()
    }
}

struct Outcome {
    residual: f64,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn identity(r: &IdentityReport, tol: f64) -> Self {
        let path_ok = r.path_err <= STRICT_FRACTION * tol;
        Outcome {
            residual: r.rel_err.max(r.path_err),
            pass: r.pass && path_ok,
            detail: format!("rel_err={:e} path_err={:e} lhs={} rhs={}", r.rel_err, r.path_err, r.lhs, r.rhs),
        }
    }

    fn inequality(r: &InequalityReport) -> Self {
        Outcome {
            residual: (-r.relative_margin()).max(0.0),
            pass: r.pass,
            detail: format!("lhs={:e} rhs={:e} margin={:e}", r.lhs, r.rhs, r.margin),
        }
    }

    fn loewner(r: &LoewnerReport, what: &str) -> Self {
        Outcome {
            residual: (-r.relative_margin()).max(0.0),
            pass: r.pass,
            detail: format!("{what}: min_eig={:e} scale={:e}", r.min_eig, r.scale),
        }
    }

    /// Affine `h` turns the Loewner comparison into an equality.
    fn loewner_for(r: &LoewnerReport, h: &ScalarFunctionSpec, tol: f64) -> Self {
        let mut o = Outcome::loewner(r, &h.id());
        if h.is_affine() {
            let gap = r.relative_margin().abs();
            o.residual = o.residual.max(gap);
            o.pass &= gap <= STRICT_FRACTION * tol;
        }
        o
    }

    fn both(a: Outcome, b: Outcome) -> Self {
        Outcome {
            residual: a.residual.max(b.residual),
            pass: a.pass && b.pass,
            detail: format!("{}; {}", a.detail, b.detail),
        }
    }

    fn verdict(agree: bool, detail: String) -> Self {
        Outcome { residual: if agree { 0.0 } else { 1.0 }, pass: agree, detail }
    }
}

struct SectionRun {
    report: SectionReport,
    seed: u64,
    trial: usize,
    trial_seed: u64,
}

impl SectionRun {
    fn record(&mut self, subset: Option<&IndexSubset>, outcome: Result<Outcome>) {
        let r = &mut self.report;
        r.checks += 1;
        let (pass, residual, detail) = match outcome {
            Ok(o) => (o.pass, Some(o.residual), o.detail),
            Err(e) => (false, None, format!("error: {e}")),
        };
        if let Some(res) = residual {
            if r.worst_trial.is_none() || res > r.worst_residual {
                r.worst_residual = res;
                r.worst_trial = Some(self.trial);
                r.worst_seed = Some(self.trial_seed);
            }
        }
        if pass {
            r.passed += 1;
            return;
        }
        r.failed += 1;
        r.pass = false;
        if r.failures.len() < MAX_LISTED_FAILURES {
            r.failures.push(FailureRecord {
                theorem: r.theorem,
                seed: self.seed,
                trial: self.trial,
                trial_seed: self.trial_seed,
                subset: subset.map(|s| s.to_string()),
                detail,
            });
        } else {
            r.failures_omitted += 1;
        }
    }
}

/// Knobs shared by campaign trials and single-instance checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub tol: f64,
    pub batch: usize,
}

fn random_psd(rng: &mut SeededRng, d: usize) -> CMat {
    let g = rng.gaussian_matrix(d, d);
    (&g * &g.adjoint()).hermitian_part().scale(1.0 / d as f64)
}

fn jensen_families(rng: &mut SeededRng, d: usize) -> Result<Vec<PositiveMapFamily>> {
    Ok(vec![PositiveMapFamily::random_weights(rng, 3, d)?, PositiveMapFamily::random_congruences(rng, 3, d, d)?])
}

fn parseval_of(inst: &Instance) -> Result<&KFrame> {
    inst.parseval.as_ref().ok_or_else(|| Error::BadConfig("no Parseval K-frame for count < dim".into()))
}

fn run_checks(
    id: TheoremId,
    inst: &Instance,
    subsets: &[IndexSubset],
    rng: &mut SeededRng,
    opts: CheckOptions,
    run: &mut SectionRun,
) {
    let tol = opts.tol;
    let d = inst.frame.dim();
    let k = &inst.k;
    match id {
        TheoremId::Thm21 | TheoremId::Thm23 => {
            let duals = match &inst.duals {
                Ok(d) if !d.is_empty() => d,
                Ok(_) => return run.record(None, Err(Error::BadConfig("no dual supplied".into()))),
                Err(e) => return run.record(None, Err(Error::BadConfig(e.clone()))),
            };
            for (s, j) in subsets.iter().enumerate() {
                let pair = &duals[(run.trial + s) % duals.len()];
                let f = rng.gaussian_vector(d);
                let outcome = if id == TheoremId::Thm21 {
                    check_thm_2_1(pair, j, &f, tol).map(|r| Outcome::identity(&r, tol))
                } else if s % 2 == 0 {
                    // Indicator weights must reproduce the unweighted identity.
                    check_thm_2_3(pair, &j.indicator(), &f, tol).and_then(|r| {
                        let base = check_thm_2_1(pair, j, &f, tol)?;
                        let gap = (r.lhs - base.lhs).norm().max((r.rhs - base.rhs).norm())
                            / (1.0 + base.lhs.norm() + base.rhs.norm());
                        let mut o = Outcome::identity(&r, tol);
                        o.pass &= gap <= 1e-12;
                        o.detail = format!("{} indicator_gap={gap:e}", o.detail);
                        Ok(o)
                    })
                } else {
                    let alpha = rng.gaussian_vector(inst.frame.count());
                    check_thm_2_3(pair, &alpha, &f, tol).map(|r| Outcome::identity(&r, tol))
                };
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Cor22 => {
            for j in subsets {
                let f = rng.gaussian_vector(d);
                run.record(Some(j), check_cor_2_2(&inst.frame, k, j, &f, tol).map(|r| Outcome::identity(&r, tol)));
            }
        }
        TheoremId::Thm24 => {
            for j in subsets {
                let f = rng.gaussian_vector(d);
                let jc = j.complement();
                let e: Vec<usize> = jc.indices().iter().copied().filter(|_| rng.coin()).collect();
                let outcome = parseval_of(inst).and_then(|p| {
                    let e = IndexSubset::new(e, j.count())?;
                    check_thm_2_4(p, k, j, &e, &f, tol).map(|r| Outcome::identity(&r, tol))
                });
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Thm25 => {
            for j in subsets {
                let f = rng.gaussian_vector(d);
                let outcome = parseval_of(inst)
                    .and_then(|p| check_thm_2_5(p, k, j, &f, tol))
                    .map(|(eq, bound)| Outcome::both(Outcome::identity(&eq, tol), Outcome::inequality(&bound)));
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Lem26 => {
            let f = rng.gaussian_vector(d);
            let outcome = check_lemma_2_6(&inst.frame, k, &f, tol)
                .map(|(a, b)| Outcome::both(Outcome::inequality(&a), Outcome::inequality(&b)));
            run.record(None, outcome);
        }
        TheoremId::Thm27 => {
            for j in subsets {
                let outcome = parseval_of(inst).and_then(|p| check_thm_2_7(p, k, j, tol)).map(|r| {
                    let rel = |a: f64, b: f64| (a - b) / (1.0 + b.abs());
                    let mut residual = rel(0.75, r.v.v_minus)
                        .max(rel(r.v.v_minus, r.v.v_plus))
                        .max(rel(r.v.v_plus, r.proof_bound))
                        .max(rel(r.v.v_plus, r.v_complement.v_plus).abs())
                        .max(rel(r.v.v_minus, r.v_complement.v_minus).abs())
                        .max(0.0);
                    if r.trivial_ok.is_some() {
                        residual = residual.max((r.v.v_plus - 1.0).abs()).max((r.v.v_minus - 1.0).abs());
                    }
                    Outcome {
                        residual,
                        pass: r.pass,
                        detail: format!(
                            "v_minus={} v_plus={} complement=({}, {}) proof_bound={} stated_bound_held={}",
                            r.v.v_minus,
                            r.v.v_plus,
                            r.v_complement.v_minus,
                            r.v_complement.v_plus,
                            r.proof_bound,
                            r.stated_bound_held
                        ),
                    }
                });
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Cor28 => {
            for j in subsets {
                let batch: Vec<Vec<C64>> = (0..opts.batch).map(|_| rng.gaussian_vector(d)).collect();
                let outcome = parseval_of(inst).and_then(|p| check_cor_2_8(p, k, j, &batch, tol)).map(|r| {
                    Outcome::verdict(
                        r.agree,
                        format!(
                            "(i)={} (ii)={} (iii)={} v=({}, {}) worst_ii={:e} worst_iii={:e}",
                            r.cond_i, r.cond_ii, r.cond_iii, r.v_minus, r.v_plus, r.worst_ii, r.worst_iii
                        ),
                    )
                });
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Cor29 => {
            for j in subsets {
                let f = rng.gaussian_vector(d);
                let outcome = parseval_of(inst)
                    .and_then(|p| check_cor_2_9(p, k, j, &f, tol))
                    .map(|r| Outcome::verdict(r.agree, format!("holds={:?} residuals={:?}", r.holds, r.residuals)));
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Jensen31 | TheoremId::Jensen32 => {
            let families = match jensen_families(rng, d) {
                Ok(f) => f,
                Err(e) => return run.record(None, Err(e)),
            };
            for phis in &families {
                let a: Vec<CMat> = (0..phis.len()).map(|_| random_psd(rng, d)).collect();
                if id == TheoremId::Jensen31 {
                    for h in operator_convex_catalog() {
                        let outcome = check_jensen_3_1(&a, phis, &h, tol).map(|r| Outcome::loewner_for(&r, &h, tol));
                        run.record(None, outcome);
                    }
                } else {
                    let outcome = spectral_bracket(&a);
                    let (m, big_m) = match outcome {
                        Ok(b) => b,
                        Err(e) => {
                            run.record(None, Err(e));
                            continue;
                        }
                    };
                    for h in convex_catalog() {
                        let outcome =
                            check_jensen_3_2(&a, phis, &h, m, big_m, tol).map(|r| Outcome::loewner_for(&r, &h, tol));
                        run.record(None, outcome);
                    }
                }
            }
        }
        TheoremId::Thm33i => {
            for j in subsets {
                for h in operator_convex_catalog() {
                    let outcome = parseval_of(inst)
                        .and_then(|p| check_thm_3_3_i(p, k, j, &h, tol))
                        .map(|r| Outcome::loewner_for(&r, &h, tol));
                    run.record(Some(j), outcome);
                }
            }
        }
        TheoremId::Thm33ii => {
            for j in subsets {
                for h in convex_catalog() {
                    let outcome = parseval_of(inst)
                        .and_then(|p| check_thm_3_3_ii(p, k, j, &h, tol))
                        .map(|r| Outcome::loewner_for(&r.report, &h, tol));
                    run.record(Some(j), outcome);
                }
            }
        }
        TheoremId::Cor34 => {
            for j in subsets {
                let f = rng.gaussian_vector(d);
                let outcome = parseval_of(inst)
                    .and_then(|p| crate::jensen::check_cor_3_4(p, k, j, &f, tol))
                    .map(|(a, b)| Outcome::both(Outcome::inequality(&a), Outcome::inequality(&b)));
                run.record(Some(j), outcome);
            }
        }
        TheoremId::Douglas => {
            run.record(None, douglas_outcome(k.matrix(), inst.frame.synthesis_matrix(), tol));
            // A constructed solvable pair L₁ = L₂Y with rank-deficient L₂.
            let r = 1 + rng.below(d);
            let l2 = &rng.gaussian_matrix(d, r) * &rng.gaussian_matrix(r, d + 1);
            let l1 = &l2 * &rng.gaussian_matrix(d + 1, d);
            run.record(None, douglas_outcome(&l1, &l2, tol));
        }
    }
}

fn spectral_bracket(a: &[CMat]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for ai in a {
        let e = herm_eig(ai)?;
        lo = lo.min(e.min());
        hi = hi.max(e.max());
    }
    Ok((lo.max(0.0), hi))
}

fn douglas_outcome(l1: &CMat, l2: &CMat, tol: f64) -> Result<Outcome> {
    let sol = douglas_solve(l1, l2, tol)?;
    let inf = douglas_infimum_check(l1, l2, &sol.x, tol)?;
    let l1_norm = op_norm(l1)?;
    let x_norm = sol.norm_sq.sqrt();
    let residual =
        (sol.factor_residual / (1.0 + l1_norm)).max(sol.kernel_match).max(sol.range_residual / (1.0 + x_norm));
    Ok(Outcome {
        residual,
        pass: residual <= tol && sol.range_ok && inf.pass,
        detail: format!(
            "factor={:e} kernel={:e} range={:e} infimum_pass={}",
            sol.factor_residual, sol.kernel_match, sol.range_residual, inf.pass
        ),
    })
}

/// Runs one section against a fixed instance, as trial 0 of `seed`.
pub fn check_instance(
    id: TheoremId,
    inst: &Instance,
    subsets: &[IndexSubset],
    seed: u64,
    opts: CheckOptions,
) -> SectionReport {
    let mut rng = SeededRng::new(seed ^ id.salt());
    let mut run = SectionRun { report: SectionReport::new(id), seed, trial: 0, trial_seed: seed };
    run_checks(id, inst, subsets, &mut rng, opts, &mut run);
    run.report
}

/// `run_campaign_with` on the default options and the named sections.
pub fn run_campaign(cfg: &GenConfig, theorem_set: &[&str]) -> Result<CampaignReport> {
    let theorems = theorem_set.iter().map(|s| s.parse()).collect::<Result<Vec<TheoremId>>>()?;
    run_campaign_with(&CampaignConfig::new(cfg.clone()).with_theorems(theorems))
}

pub fn run_campaign_with(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let g = &config.gen;
    let opts = CheckOptions { tol: g.tol, batch: config.batch };
    let mut theorems = config.theorems.clone();
    theorems.sort();
    theorems.dedup();
    let mut runs: Vec<SectionRun> = theorems
        .iter()
        .map(|&id| SectionRun { report: SectionReport::new(id), seed: g.seed, trial: 0, trial_seed: 0 })
        .collect();

    for trial in 0..g.trials {
        let ts = trial_seed(g.seed, trial as u64);
        let mut inst = Instance::generate(g, ts)?;
        if let Some(fault) = config.fault {
            inst.inject(fault, config.fault_size, &mut SeededRng::new(ts ^ fault_salt(fault)))?;
        }
        let subsets =
            trial_subsets(g.subset_policy, g.count, config.subsets_per_trial, &mut SeededRng::new(ts ^ SUBSET_SALT));
        for run in runs.iter_mut() {
            run.trial = trial;
            run.trial_seed = ts;
            let mut rng = SeededRng::new(ts ^ run.report.theorem.salt());
            run_checks(run.report.theorem, &inst, &subsets, &mut rng, opts, run);
        }
    }

    let sections: Vec<SectionReport> = runs.into_iter().map(|r| r.report).collect();
    let total_checks = sections.iter().map(|s| s.checks).sum();
    let total_failed = sections.iter().map(|s| s.failed).sum();
    Ok(CampaignReport {
        config: config.clone(),
        all_pass: sections.iter().all(|s| s.pass),
        sections,
        total_checks,
        total_failed,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

fn fault_salt(fault: Fault) -> u64 {
    match fault {
        Fault::Dual => 0x6661_756c_7464_7561,
        Fault::Parseval => 0x6661_756c_7470_6172,
    }
}
