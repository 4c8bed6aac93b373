//! Config-driven experiment runner behind the `rvlevy` binary.

mod config;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat, OutputSpec};

use crate::diagnostics::{
    analytic_prediction, breiman_ratio, integral_tail, maximal_product_bound, multiple_jump_trend, one_big_jump_curve,
    tail_equivalence, CountLaw, RatioPoint, Scenario, WeightRule,
};
use crate::error::{Error, Result};
use crate::laws::ScalarLaw;
use crate::levy_sim::IntegrandSampler;
use output::{Sink, Table};

/// Environment variable that overrides the config seed.
pub const SEED_ENV: &str = "RVLEVY_SEED";

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub experiment: ExperimentKind,
    pub duration_secs: f64,
    /// Output files, relative to the output directory.
    pub files: Vec<String>,
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

/// Seed precedence: flag, then environment, then config.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, config: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Validation(vec![format!("{SEED_ENV} must be an unsigned integer, got {v:?}")])),
        None => Ok(config),
    }
}

/// Process exit status for an error: 1 validation, 2 runtime, 3 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_) | Error::Parse { .. } => 1,
        Error::Io { .. } => 3,
        _ => 2,
    }
}

/// Parse and validate a config document without running it.
pub fn validate(text: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::parse(text)
}

fn open_sink(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(Sink, u64)> {
    let seed = opts.seed.unwrap_or(cfg.seed);
    let dir = opts.out_dir.clone().unwrap_or_else(|| cfg.output.dir.clone());
    Ok((Sink::create(dir, cfg.output.format, cfg.hash(), seed)?, seed))
}

fn finish(cfg: &ExperimentConfig, sink: Sink, seed: u64, started: Instant) -> Result<RunManifest> {
    let mut sink = sink;
    let manifest = RunManifest {
        config_hash: cfg.hash(),
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: cfg.experiment,
        duration_secs: started.elapsed().as_secs_f64(),
        files: std::mem::take(&mut sink.files),
    };
    sink.json("manifest.json", &manifest)?;
    Ok(manifest)
}

/// Run the configured experiment and write its outputs and manifest.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let (mut sink, seed) = open_sink(cfg, opts)?;
    match cfg.experiment {
        ExperimentKind::Tails => run_tails(cfg, seed, &mut sink)?,
        ExperimentKind::TailEquivalence => run_tail_equivalence(cfg, seed, &mut sink)?,
        ExperimentKind::Breiman => run_breiman(cfg, seed, &mut sink)?,
        ExperimentKind::OneBigJump => run_one_big_jump(cfg, seed, &mut sink)?,
        ExperimentKind::LemmaChecks => run_lemmas(cfg, seed, &mut sink)?,
        ExperimentKind::Paths => write_paths(cfg, seed, &mut sink)?,
    }
    finish(cfg, sink, seed, started)
}

/// Write sample trajectories of `X`, `Y` and `Y · X` for any config with an integrand.
pub fn dump_paths(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunManifest> {
    if cfg.integrand.is_none() {
        return Err(Error::Validation(vec!["paths needs an integrand".into()]));
    }
    let started = Instant::now();
    let (mut sink, seed) = open_sink(cfg, opts)?;
    write_paths(cfg, seed, &mut sink)?;
    finish(cfg, sink, seed, started)
}

fn scenario(cfg: &ExperimentConfig) -> Result<Scenario> {
    let spec = cfg.integrand.clone().expect("validated");
    Scenario::new(cfg.model.clone(), spec, cfg.grid_size)
}

fn run_tails(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let s = scenario(cfg)?;
    let estimates = integral_tail(&s, cfg.t, &cfg.levels, cfg.n, seed)?;
    let spec = s.integrand().clone();
    let draws = if spec.is_deterministic() { 1 } else { cfg.analytic_mc };
    let sampler = IntegrandSampler::new(spec, cfg.grid_size)?;
    let measure = cfg.model.measure();
    let mut table = Table::new(&[
        "u",
        "estimate",
        "stderr",
        "n_conditioning",
        "hits",
        "analytic",
        "analytic_stderr",
        "ratio",
    ]);
    for e in estimates {
        let a = analytic_prediction(&measure, &sampler, cfg.t, e.level, draws, seed)?;
        table.push(vec![
            e.level.into(),
            e.p_hat.into(),
            e.stderr.into(),
            e.n.into(),
            e.hits.into(),
            a.mean.into(),
            a.stderr.into(),
            (a.mean > 0.0).then(|| e.p_hat / a.mean).into(),
        ]);
    }
    sink.table("tails", &table)
}

fn ratio_table(points: &[RatioPoint], expected: Option<f64>) -> Table {
    let mut table = Table::new(&["u", "estimate", "stderr", "n_conditioning", "numerator_hits", "expected"]);
    for p in points {
        table.push(vec![
            p.level.into(),
            p.ratio.into(),
            p.stderr.into(),
            p.denominator_hits.into(),
            p.numerator_hits.into(),
            expected.into(),
        ]);
    }
    table
}

fn run_tail_equivalence(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let s = scenario(cfg)?;
    let points = tail_equivalence(&s, cfg.t, &cfg.levels, cfg.n, seed)?;
    sink.table("tail_equivalence", &ratio_table(&points, Some(1.0)))
}

fn run_breiman(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let law = cfg.multiplier.expect("validated");
    let alpha = cfg.model.alpha();
    let points = breiman_ratio(alpha, &law, &cfg.levels, cfg.n, seed)?;
    sink.table("breiman", &ratio_table(&points, law.moment(alpha)))
}

fn run_one_big_jump(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let s = scenario(cfg)?;
    let eps = cfg.epsilon.expect("validated");
    let report = one_big_jump_curve(&s, eps, &cfg.levels, cfg.n, seed, cfg.refinement)?;
    let mut table = Table::new(&[
        "curve",
        "u",
        "estimate",
        "stderr",
        "n_conditioning",
        "hits",
        "slope",
        "nonincreasing",
    ]);
    for (name, curve) in report.curves() {
        let slope = curve.slope();
        for (u, e) in curve.levels.iter().zip(&curve.conditional_probs) {
            table.push(vec![
                name.into(),
                (*u).into(),
                e.map(|e| e.p_hat).into(),
                e.map(|e| e.stderr).into(),
                e.map_or(0, |e| e.n).into(),
                e.map_or(0, |e| e.hits).into(),
                slope.into(),
                slope.is_some_and(|s| s <= 0.0).into(),
            ]);
        }
    }
    sink.table("one_big_jump", &table)
}

fn run_lemmas(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let measure = cfg.model.measure();
    let lambda = cfg.model.intensity();
    let points = multiple_jump_trend(&measure, lambda, cfg.beta, &cfg.n_values, cfg.n, seed)?;
    let mut table = Table::new(&["n", "p_n", "closed_form", "estimate", "stderr"]);
    for p in points {
        table.push(vec![
            p.n.into(),
            p.p_n.into(),
            p.closed_form.into(),
            p.estimate.into(),
            p.stderr.into(),
        ]);
    }
    sink.table("multiple_jumps", &table)?;

    let z = ScalarLaw::Pareto { alpha: cfg.model.alpha() };
    let rules = [
        ("constant", WeightRule::Constant { value: 1.0 }),
        ("past_power", WeightRule::PastPower { exponent: 0.5 }),
    ];
    let mut table = Table::new(&[
        "weights",
        "x",
        "lhs",
        "lhs_stderr",
        "rhs",
        "rhs_stderr",
        "bound",
        "holds",
    ]);
    for (name, rule) in rules {
        for &x in &cfg.levels {
            let r = maximal_product_bound(CountLaw::Poisson { mean: lambda }, rule, &z, cfg.n, x, seed)?;
            table.push(vec![
                name.into(),
                x.into(),
                r.lhs.p_hat.into(),
                r.lhs.stderr.into(),
                r.rhs.p_hat.into(),
                r.rhs.stderr.into(),
                r.bound.into(),
                r.holds.into(),
            ]);
        }
    }
    sink.table("maximal_product", &table)
}

fn write_paths(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<()> {
    let s = scenario(cfg)?;
    for rep in 0..cfg.paths {
        let r = s.replicate(seed, rep);
        sink.path(&format!("levy_{rep}"), &r.x)?;
        sink.path(&format!("integrand_{rep}"), &r.y)?;
        sink.path(&format!("integral_{rep}"), &r.w)?;
    }
    Ok(())
}
