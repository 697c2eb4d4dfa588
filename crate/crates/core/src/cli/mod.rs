//! Command-line front end. Every subcommand reads JSON inputs (or a named
//! preset), writes a CSV or JSON document to `--out` or standard output, and
//! maps library errors to exit codes through [`Error::exit_code`].

mod inputs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::detailed_balance::{self, DbReport, DB_TOL};
use crate::divergence::{self, ContrastFn};
use crate::dynamics::markov::RATE_NEG_TOL;
use crate::dynamics::{fisher_trajectory, markov_report, MarkovVerdict};
use crate::error::{Error, Result};
use crate::fisher;
use crate::io::{config_hash, format_float, write_atomic, CsvTable};
use crate::linalg::{self, random};
use crate::monotone::{self, StandardMonotone, Tri};
use crate::recovery;

use inputs::{load_channel, load_dynamics, load_state, load_states, DEFAULT_MONOTONES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "infogeom",
    version,
    about = "Quantum Fisher metrics, dynamics, recovery and detailed balance"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file, written atomically; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 5 when the command's verdict fails.
    #[arg(long, global = true)]
    pub assert: bool,
    /// Overrides the command's verdict tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fisher information, scalar products and divergences of a pair of states.
    Metric {
        /// JSON with `rho` and optionally `sigma`, `delta`, `a`, `b`.
        states: PathBuf,
        #[arg(long = "f", value_delimiter = ',', default_value = DEFAULT_MONOTONES)]
        f: Vec<String>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "relative-entropy,bures,wy,harmonic,sqrt"
        )]
        divergences: Vec<String>,
    },
    /// Fisher information along an evolution with its flux decomposition.
    Evolve {
        #[command(flatten)]
        source: DynamicsSource,
        /// JSON with `pi` and `delta`; defaults to the maximally mixed state.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long = "f", default_value = "bures")]
        f: String,
        #[arg(long = "T", default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        /// Skip the analytic currents; works for monotones without a measure.
        #[arg(long)]
        fd_only: bool,
    },
    /// Rate-sign verdict and Fisher-contraction scan of an evolution.
    Markov {
        #[command(flatten)]
        source: DynamicsSource,
        #[arg(long = "T", default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Spectrum and χ² chain of a generalized Petz recovery.
    Recover {
        /// `amplitude-damping:p` or `depolarizing:lambda` (qubit).
        #[arg(long, conflicts_with = "channel")]
        preset: Option<String>,
        /// JSON with `kraus`, a list of matrices.
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Prior state (matrix JSON); a seeded random full-rank state otherwise.
        #[arg(long)]
        prior: Option<PathBuf>,
        /// Second state (matrix JSON) for the χ² recovery chain.
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long = "f", default_value = "sqrt")]
        f: String,
        #[arg(long, default_value = "sqrt")]
        fprime: String,
    },
    /// Correlation and Fisher detailed-balance verdicts of a generator.
    Dbalance {
        /// `fisher-not-alicki[:beta]`.
        #[arg(long, conflicts_with = "generator")]
        preset: Option<String>,
        #[arg(long)]
        generator: Option<PathBuf>,
        /// Reference state (matrix JSON), required with `--generator`.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Monotones sampled besides the exact selection rule.
        #[arg(long = "f", value_delimiter = ',')]
        f: Option<Vec<String>>,
    },
    /// Bures and Wigner-Yanase distances with samples of the geodesic.
    Geodesic {
        /// JSON with `rho` and `sigma`.
        states: PathBuf,
        #[arg(long, default_value_t = 1000)]
        segments: usize,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Cramér-Rao bounds and the Chernoff exponent along `rho + θ delta`.
    Estimate {
        /// JSON with `rho` and `delta`.
        states: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
        #[arg(long = "f", value_delimiter = ',', default_value = DEFAULT_MONOTONES)]
        f: Vec<String>,
    },
    /// Property table of the monotone catalog.
    Garden,
}

#[derive(Debug, Args)]
pub struct DynamicsSource {
    /// `depolarizing:markov`, `depolarizing:nonmarkov` or `amplitude-damping[:gamma]`.
    #[arg(long, conflicts_with = "generator")]
    pub preset: Option<String>,
    /// Generator JSON (`H`, `jumps`, `rates`, optional `schedule`).
    #[arg(long)]
    pub generator: Option<PathBuf>,
}

/// Everything that determines a run's output, hashed into the headers.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub monotones: Vec<String>,
    pub tolerance: f64,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub seed: u64,
    pub format: Format,
    pub extra: serde_json::Value,
}

impl RunConfig {
    fn new(command: &str, common: &Common, default_tol: f64) -> Self {
        Self {
            command: command.into(),
            inputs: vec![],
            monotones: vec![],
            tolerance: common.tolerance.unwrap_or(default_tol),
            t_max: None,
            dt: None,
            seed: common.seed,
            format: common.format,
            extra: serde_json::Value::Null,
        }
    }

    fn input(mut self, p: &Option<PathBuf>) -> Self {
        if let Some(p) = p {
            self.inputs.push(p.display().to_string());
        }
        self
    }

    /// Checks the grid and resolves every monotone name.
    pub fn validate(&self) -> Result<Vec<StandardMonotone>> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Schema(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::Schema(format!("--dt must be positive, got {dt}")));
            }
        }
        if let Some(t) = self.t_max {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::Schema(format!("--T must be nonnegative, got {t}")));
            }
        }
        self.monotones
            .iter()
            .map(|n| monotone::by_name(n))
            .collect()
    }

    pub fn hash(&self) -> String {
        config_hash(&serde_json::to_string(self).expect("config serializes"))
    }
}

/// A command's result before formatting.
pub struct Output {
    pub table: CsvTable,
    pub json: serde_json::Value,
    /// `Some(message)` when the verdict failed.
    pub failure: Option<String>,
    /// One-line verdict echoed outside the document.
    pub summary: Option<String>,
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    init_threads();
    let (cfg, out) = dispatch(cli)?;
    let c = &cli.common;
    let hash = cfg.hash();
    let mut table = out.table;
    let mut header = vec![
        format!("config-hash {hash}"),
        format!("command {}", cfg.command),
    ];
    header.push(format!("tolerance {}", format_float(cfg.tolerance)));
    if let Some(s) = &out.summary {
        header.push(s.clone());
    }
    header.append(&mut table.comments);
    table.comments = header;
    let text = match c.format {
        Format::Csv => table.render(),
        Format::Json => {
            let doc = json!({
                "config": cfg,
                "config_hash": hash,
                "tolerance": cfg.tolerance,
                "summary": out.summary,
                "result": out.json,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    match &c.out {
        Some(p) => {
            write_atomic(p, &text)?;
            if let Some(s) = &out.summary {
                println!("{s}");
            }
        }
        None => {
            print!("{text}");
            if let Some(s) = &out.summary {
                eprintln!("{s}");
            }
        }
    }
    match out.failure {
        Some(msg) if c.assert => Err(Error::Verdict(msg)),
        _ => Ok(()),
    }
}

/// Sizes the global thread pool from `INFOGEOM_THREADS` when set.
fn init_threads() {
    if let Some(n) = std::env::var("INFOGEOM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn dispatch(cli: &Cli) -> Result<(RunConfig, Output)> {
    let c = &cli.common;
    match &cli.command {
        Command::Metric {
            states,
            f,
            divergences,
        } => {
            let mut cfg = RunConfig::new("metric", c, 1e-9).input(&Some(states.clone()));
            cfg.monotones = f.clone();
            cfg.extra = json!({ "divergences": divergences });
            let fs = cfg.validate()?;
            let out = cmd_metric(&cfg, states, &fs, divergences)?;
            Ok((cfg, out))
        }
        Command::Evolve {
            source,
            state,
            f,
            t_max,
            dt,
            fd_only,
        } => {
            let mut cfg = RunConfig::new("evolve", c, 1e-4)
                .input(&source.generator)
                .input(state);
            cfg.monotones = vec![f.clone()];
            cfg.t_max = Some(*t_max);
            cfg.dt = Some(*dt);
            cfg.extra = json!({ "preset": source.preset, "fd_only": fd_only });
            let fs = cfg.validate()?;
            let out = cmd_evolve(&cfg, source, state, &fs[0], *fd_only)?;
            Ok((cfg, out))
        }
        Command::Markov {
            source,
            t_max,
            dt,
            samples,
        } => {
            let mut cfg = RunConfig::new("markov", c, RATE_NEG_TOL).input(&source.generator);
            cfg.t_max = Some(*t_max);
            cfg.dt = Some(*dt);
            cfg.extra = json!({ "preset": source.preset, "samples": samples });
            cfg.validate()?;
            let out = cmd_markov(&cfg, source, *samples)?;
            Ok((cfg, out))
        }
        Command::Recover {
            preset,
            channel,
            prior,
            sigma,
            f,
            fprime,
        } => {
            let mut cfg = RunConfig::new("recover", c, 1e-9)
                .input(channel)
                .input(prior)
                .input(sigma);
            cfg.monotones = vec![fprime.clone(), f.clone()];
            cfg.extra = json!({ "preset": preset });
            let fs = cfg.validate()?;
            let phi = load_channel(preset.as_deref(), channel.as_deref())?;
            let out = cmd_recover(&cfg, &phi, prior, sigma, &fs[0], &fs[1])?;
            Ok((cfg, out))
        }
        Command::Dbalance {
            preset,
            generator,
            state,
            f,
        } => {
            let mut cfg = RunConfig::new("dbalance", c, DB_TOL)
                .input(generator)
                .input(state);
            let fs = match f {
                Some(names) => {
                    cfg.monotones = names.clone();
                    cfg.validate()?
                }
                None => {
                    let fs = detailed_balance::default_fisher_sample();
                    cfg.monotones = fs.iter().map(|m| m.name.clone()).collect();
                    cfg.validate()?;
                    fs
                }
            };
            cfg.extra = json!({ "preset": preset });
            let out = cmd_dbalance(&cfg, preset.as_deref(), generator, state, &fs)?;
            Ok((cfg, out))
        }
        Command::Geodesic {
            states,
            segments,
            samples,
        } => {
            let mut cfg = RunConfig::new("geodesic", c, 1e-3).input(&Some(states.clone()));
            cfg.extra = json!({ "segments": segments, "samples": samples });
            cfg.validate()?;
            let out = cmd_geodesic(&cfg, states, *segments, *samples)?;
            Ok((cfg, out))
        }
        Command::Estimate { states, eps, f } => {
            let mut cfg =
                RunConfig::new("estimate", c, 5.0 * eps.powi(3)).input(&Some(states.clone()));
            cfg.monotones = f.clone();
            cfg.extra = json!({ "eps": eps });
            let fs = cfg.validate()?;
            let out = cmd_estimate(&cfg, states, *eps, &fs)?;
            Ok((cfg, out))
        }
        Command::Garden => {
            let cfg = RunConfig::new("garden", c, 1e-9);
            cfg.validate()?;
            let out = cmd_garden(&cfg)?;
            Ok((cfg, out))
        }
    }
}

fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn long_table() -> CsvTable {
    CsvTable::with_labels(labels(&["quantity", "name"]), labels(&["value"]))
}

pub fn cmd_metric(
    cfg: &RunConfig,
    states: &std::path::Path,
    fs: &[StandardMonotone],
    divergences: &[String],
) -> Result<Output> {
    let st = load_states(states)?;
    let rho = &st.rho;
    linalg::validate_full_rank(rho)?;
    let delta = st
        .delta
        .clone()
        .or_else(|| st.sigma.as_ref().map(|s| s - rho));
    let delta = delta.ok_or_else(|| Error::Schema("metric needs `sigma` or `delta`".into()))?;
    let a = st.a.clone().unwrap_or_else(|| delta.clone());
    let b = st.b.clone().unwrap_or_else(|| delta.clone());
    let per_f = fs
        .par_iter()
        .map(|f| -> Result<(f64, f64, Option<f64>)> {
            let info = fisher::fisher_information(f, rho, &delta)?;
            let k = fisher::scalar_product(f, rho, &a, &b)?;
            let chi = match &st.sigma {
                Some(s) => divergence::chi2(f, s, rho)?.get(),
                None => None,
            };
            Ok((info, k, chi))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = long_table();
    let mut rows = vec![];
    for (f, (info, k, chi)) in fs.iter().zip(&per_f) {
        t.push_labeled(vec!["fisher".into(), f.name.clone()], vec![*info]);
        t.push_labeled(vec!["scalar_product".into(), f.name.clone()], vec![*k]);
        if st.sigma.is_some() {
            let v = chi.unwrap_or(f64::INFINITY);
            t.push_labeled(vec!["chi2".into(), f.name.clone()], vec![v]);
        }
        rows.push(json!({ "monotone": f.name, "fisher": info, "scalar_product": k, "chi2": chi }));
    }
    let mut divs = vec![];
    if let Some(sigma) = &st.sigma {
        for name in divergences {
            let g = ContrastFn::by_name(name)?;
            let v = divergence::contrast(&g, rho, sigma)?
                .get()
                .unwrap_or(f64::INFINITY);
            t.push_labeled(vec!["divergence".into(), name.clone()], vec![v]);
            divs.push(json!({ "name": name, "value": v }));
        }
        let dists = [
            ("bures", divergence::bures_distance(rho, sigma)?),
            ("wy", divergence::wy_distance(rho, sigma)?),
            ("trace", divergence::trace_distance(rho, sigma)?),
        ];
        for (name, v) in dists {
            t.push_labeled(vec!["distance".into(), name.into()], vec![v]);
            divs.push(json!({ "name": format!("distance:{name}"), "value": v }));
        }
    }
    // every standard monotone lies between the Bures and harmonic extremes
    let lo = fisher::fisher_information(&monotone::bures(), rho, &delta)?;
    let hi = fisher::fisher_information(&monotone::harmonic(), rho, &delta)?;
    let tol = cfg.tolerance * hi.max(1e-300);
    let outside: Vec<&str> = fs
        .iter()
        .zip(&per_f)
        .filter(|(_, (info, _, _))| *info < lo - tol || *info > hi + tol)
        .map(|(f, _)| f.name.as_str())
        .collect();
    let failure = (!outside.is_empty())
        .then(|| format!("Fisher information outside the extremes for {outside:?}"));
    Ok(Output {
        table: t,
        json: json!({ "monotones": rows, "divergences": divs }),
        failure,
        summary: None,
    })
}

pub fn cmd_evolve(
    cfg: &RunConfig,
    source: &DynamicsSource,
    state: &Option<PathBuf>,
    f: &StandardMonotone,
    fd_only: bool,
) -> Result<Output> {
    let dynamics = load_dynamics(source.preset.as_deref(), source.generator.as_deref())?;
    let evo = dynamics.evolution();
    let (pi, delta) = load_state(state.as_deref(), evo.dim())?;
    let rep = fisher_trajectory(
        f,
        &pi,
        &delta,
        evo,
        cfg.t_max.unwrap_or(0.0),
        cfg.dt.unwrap_or(1.0),
        fd_only,
    )?;
    let n_jumps = rep.rates.first().map_or(0, Vec::len);
    let mut cols = labels(&["t", "fisher", "fisher_dot_analytic", "fisher_dot_fd"]);
    for k in 0..n_jumps {
        cols.push(format!("rate_{k}"));
    }
    for k in 0..n_jumps {
        cols.push(format!("current_{k}"));
    }
    let mut t = CsvTable::new(cols);
    t.comment(format!("evolution {}", rep.evolution));
    t.comment(format!("monotone {}", rep.monotone));
    for (k, time) in rep.times.iter().enumerate() {
        let mut row = vec![*time, rep.fisher[k]];
        row.push(rep.analytic.as_ref().map_or(f64::NAN, |a| a[k]));
        row.push(rep.finite_difference[k]);
        if let Some(r) = rep.rates.get(k) {
            row.extend(r);
            row.extend(&rep.currents[k]);
        }
        t.push(row);
    }
    let err = rep.max_relative_error(1e-6);
    let failure = match err {
        Some(e) if !(e < cfg.tolerance) => {
            Some(format!("flux and finite differences differ by {e:.3e}"))
        }
        _ => None,
    };
    if let Some(e) = err {
        t.comment(format!("max relative error {}", format_float(e)));
    }
    Ok(Output {
        table: t,
        json: json!({ "report": rep, "max_relative_error": err }),
        failure,
        summary: None,
    })
}

pub fn cmd_markov(cfg: &RunConfig, source: &DynamicsSource, samples: usize) -> Result<Output> {
    let dynamics = load_dynamics(source.preset.as_deref(), source.generator.as_deref())?;
    let mut g = random::rng(cfg.seed);
    let rep = markov_report(
        dynamics.evolution(),
        cfg.t_max.unwrap_or(0.0),
        cfg.dt.unwrap_or(1.0),
        samples,
        &mut g,
    )?;
    let lowest = rep.min_rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if lowest < -cfg.tolerance {
        MarkovVerdict::NonMarkovian
    } else {
        rep.verdict
    };
    let mut t = CsvTable::new(labels(&["t", "min_rate"]));
    t.comment(format!("evolution {}", rep.evolution));
    if let Some(w) = &rep.fisher_expansion {
        t.comment(format!(
            "fisher expansion at t = {} (sample {})",
            format_float(w.t),
            w.sample
        ));
    }
    for (time, r) in rep.times.iter().zip(&rep.min_rates) {
        t.push(vec![*time, *r]);
    }
    let failure = (verdict != MarkovVerdict::Markovian).then(|| format!("verdict {verdict}"));
    Ok(Output {
        table: t,
        json: json!({ "verdict": verdict, "report": rep }),
        failure,
        summary: Some(format!("verdict: {verdict}")),
    })
}

pub fn cmd_recover(
    cfg: &RunConfig,
    phi: &crate::dynamics::QuantumChannel,
    prior: &Option<PathBuf>,
    sigma: &Option<PathBuf>,
    fprime: &StandardMonotone,
    f: &StandardMonotone,
) -> Result<Output> {
    let pi = match prior {
        Some(p) => inputs::load_matrix_state(p)?,
        None => random::random_state_floor(phi.d_in, 0.05, &mut random::rng(cfg.seed)),
    };
    let rec = recovery::petz_map(fprime, f, &pi, phi)?;
    let spec = recovery::recovery_spectrum(fprime, f, &pi, phi)?;
    let chain = match sigma {
        Some(p) => Some(recovery::chi2_recovery_gap(
            fprime,
            f,
            &pi,
            &inputs::load_matrix_state(p)?,
            phi,
        )?),
        None => None,
    };
    let tol = cfg.tolerance;
    let mut t = CsvTable::new(labels(&["index", "eigenvalue"]));
    t.comment(format!("recovery ({}, {})", rec.fprime, rec.f));
    t.comment(format!(
        "prior residual {}",
        format_float(spec.prior_residual)
    ));
    t.comment(format!(
        "choi min eigenvalue {}",
        format_float(rec.choi_min_eig)
    ));
    if let Some(ch) = &chain {
        t.comment(format!(
            "chi2 chain {} >= {} >= {}",
            format_float(ch.lhs),
            format_float(ch.mid),
            format_float(ch.rhs)
        ));
    }
    for (k, v) in spec.eigenvalues.iter().enumerate() {
        t.push(vec![k as f64, *v]);
    }
    let mut problems = vec![];
    if !spec.within_unit_interval(tol) {
        problems.push("spectrum leaves [0, 1]".to_string());
    }
    if spec.prior_residual > tol {
        problems.push(format!("prior residual {:.3e}", spec.prior_residual));
    }
    if !rec.is_cp() {
        problems.push("recovery is not CP".into());
    }
    if let Some(ch) = &chain {
        if !ch.holds(tol) {
            problems.push("chi2 chain violated".into());
        }
    }
    Ok(Output {
        table: t,
        json: json!({
            "spectrum": spec,
            "choi_min_eig": rec.choi_min_eig,
            "factors_cp": rec.factors_cp,
            "chi2_chain": chain,
        }),
        failure: (!problems.is_empty()).then(|| problems.join("; ")),
        summary: None,
    })
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn cmd_dbalance(
    cfg: &RunConfig,
    preset: Option<&str>,
    generator: &Option<PathBuf>,
    state: &Option<PathBuf>,
    fs: &[StandardMonotone],
) -> Result<Output> {
    let (g, pi) = inputs::load_db_problem(preset, generator.as_deref(), state.as_deref())?;
    let report: DbReport = detailed_balance::db_report(&g, &pi, fs)?;
    let tol = cfg.tolerance;
    let alicki_ok = report.alicki.max() < tol;
    let sel = &report.fisher.selection_rule;
    let rule_ok = sel.forbidden < tol
        && sel.ratio < tol
        && sel.hamiltonian_commutator < tol
        && sel.unitary_dissipator_commutator < tol;
    let fisher_ok = rule_ok
        && report
            .fisher
            .samples
            .iter()
            .all(|s| s.residuals.max() < tol);
    let summary = format!("fisher: {}, alicki: {}", pass(fisher_ok), pass(alicki_ok));
    let mut t = CsvTable::with_labels(
        labels(&["condition", "monotone"]),
        labels(&["normality", "skew", "self_adjoint"]),
    );
    t.comment(format!(
        "modular commutator {}",
        format_float(report.modular_commutator_norm)
    ));
    t.comment(format!(
        "selection rule forbidden {} ratio {} [H,pi] {} [U,D] {}",
        format_float(sel.forbidden),
        format_float(sel.ratio),
        format_float(sel.hamiltonian_commutator),
        format_float(sel.unitary_dissipator_commutator)
    ));
    let a = &report.alicki;
    t.push_labeled(
        labels(&["correlation", "-"]),
        vec![a.normality, a.skew, a.self_adjoint],
    );
    for s in &report.fisher.samples {
        let r = &s.residuals;
        t.push_labeled(
            vec!["fisher".into(), s.monotone.clone()],
            vec![r.normality, r.skew, r.self_adjoint],
        );
    }
    if let Some(st) = &report.structural {
        let terms = st
            .lindblad_terms
            .iter()
            .map(|x| ("jump", x))
            .chain(st.transpose_terms.iter().map(|x| ("transpose", x)));
        for (kind, term) in terms {
            t.comment(format!(
                "structural {kind} omega {} rate {}",
                format_float(term.omega),
                format_float(term.rate)
            ));
        }
    }
    Ok(Output {
        table: t,
        json: json!({ "fisher_holds": fisher_ok, "alicki_holds": alicki_ok, "report": report }),
        failure: (!fisher_ok).then(|| summary.clone()),
        summary: Some(summary),
    })
}

pub fn cmd_geodesic(
    cfg: &RunConfig,
    states: &std::path::Path,
    segments: usize,
    samples: usize,
) -> Result<Output> {
    let st = load_states(states)?;
    let rho = &st.rho;
    let sigma = st
        .sigma
        .as_ref()
        .ok_or_else(|| Error::Schema("geodesic needs `sigma`".into()))?;
    linalg::validate_state(rho)?;
    linalg::validate_state(sigma)?;
    let db = divergence::bures_distance(rho, sigma)?;
    let dwy = divergence::wy_distance(rho, sigma)?;
    let full_rank =
        linalg::validate_full_rank(rho).is_ok() && linalg::validate_full_rank(sigma).is_ok();
    let length = if full_rank && dwy > 0.0 {
        Some(divergence::geodesic::path_length(
            &monotone::wigner_yanase(),
            |s| divergence::wy_geodesic_path(rho, sigma, s),
            segments.max(1),
        )?)
    } else if dwy == 0.0 {
        Some(0.0)
    } else {
        None
    };
    let mut t = CsvTable::new(labels(&[
        "s",
        "bures_from_rho",
        "wy_from_rho",
        "wy_to_sigma",
    ]));
    t.comment(format!("bures distance {}", format_float(db)));
    t.comment(format!("wy distance {}", format_float(dwy)));
    if let Some(l) = length {
        t.comment(format!("wy path length {}", format_float(l)));
    }
    let n = samples.max(2);
    for k in 0..n {
        let s = k as f64 / (n - 1) as f64;
        let p = divergence::wy_geodesic_path(rho, sigma, s)?;
        t.push(vec![
            s,
            divergence::bures_distance(rho, &p)?,
            divergence::wy_distance(rho, &p)?,
            divergence::wy_distance(&p, sigma)?,
        ]);
    }
    let mut problems = vec![];
    if db > dwy + cfg.tolerance {
        problems.push(format!("bures {db} exceeds wy {dwy}"));
    }
    if let Some(l) = length {
        if (l - dwy).abs() > cfg.tolerance * dwy.max(1e-300) {
            problems.push(format!("path length {l} differs from {dwy}"));
        }
    }
    Ok(Output {
        table: t,
        json: json!({ "bures_distance": db, "wy_distance": dwy, "wy_path_length": length }),
        failure: (!problems.is_empty()).then(|| problems.join("; ")),
        summary: None,
    })
}

pub fn cmd_estimate(
    cfg: &RunConfig,
    states: &std::path::Path,
    eps: f64,
    fs: &[StandardMonotone],
) -> Result<Output> {
    let st = load_states(states)?;
    let rho = &st.rho;
    linalg::validate_full_rank(rho)?;
    let delta = st
        .delta
        .as_ref()
        .ok_or_else(|| Error::Schema("estimate needs `delta`".into()))?;
    let infos = fs
        .par_iter()
        .map(|f| fisher::fisher_information(f, rho, delta))
        .collect::<Result<Vec<_>>>()?;
    let rho1 = linalg::hermitize(&(rho + delta.scale(eps)));
    let (s_opt, xi) = divergence::chernoff_optimize(rho, &rho1)?;
    let local = divergence::chernoff_local(rho, delta, eps)?;
    let mut t = long_table();
    let mut rows = vec![];
    for (f, info) in fs.iter().zip(&infos) {
        let bound = if *info > 0.0 {
            1.0 / info
        } else {
            f64::INFINITY
        };
        t.push_labeled(vec!["fisher".into(), f.name.clone()], vec![*info]);
        t.push_labeled(vec!["cramer_rao".into(), f.name.clone()], vec![bound]);
        rows.push(json!({ "monotone": f.name, "fisher": info, "cramer_rao": bound }));
    }
    t.push_labeled(labels(&["chernoff", "exponent"]), vec![xi]);
    t.push_labeled(labels(&["chernoff", "s_opt"]), vec![s_opt]);
    t.push_labeled(labels(&["chernoff", "local"]), vec![local]);
    let gap = (xi - local).abs();
    Ok(Output {
        table: t,
        json: json!({ "monotones": rows, "chernoff": { "exponent": xi, "s_opt": s_opt, "local": local } }),
        failure: (gap > cfg.tolerance)
            .then(|| format!("Chernoff exponent differs from its local form by {gap:.3e}")),
        summary: None,
    })
}

fn tri(t: Tri) -> String {
    serde_json::to_value(t)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

pub fn cmd_garden(cfg: &RunConfig) -> Result<Output> {
    let cat = monotone::catalog();
    let rows: Vec<(bool, f64)> = cat
        .par_iter()
        .map(|f| {
            let standard = f.check_standard().is_ok();
            let norm = f.integrate(|s| 2.0 / (1.0 + s)).unwrap_or(f64::NAN);
            (standard, norm)
        })
        .collect();
    let mut t = CsvTable::with_labels(
        labels(&["monotone", "standard", "cp_plus", "cp_minus"]),
        labels(&["f_at_one", "second_derivative_at_one", "normalization"]),
    );
    let mut js = vec![];
    let mut bad = vec![];
    for (f, (standard, norm)) in cat.iter().zip(&rows) {
        t.push_labeled(
            vec![
                f.name.clone(),
                pass(*standard).into(),
                tri(f.cp_plus),
                tri(f.cp_minus),
            ],
            vec![f.eval(1.0), f.second_derivative_at_one(), *norm],
        );
        if !standard || (norm.is_finite() && (norm - 1.0).abs() > cfg.tolerance) {
            bad.push(f.name.clone());
        }
        js.push(json!({
            "monotone": f.name,
            "standard": standard,
            "cp_plus": f.cp_plus,
            "cp_minus": f.cp_minus,
            "f_at_one": f.eval(1.0),
            "second_derivative_at_one": f.second_derivative_at_one(),
            "normalization": norm.is_finite().then_some(*norm),
        }));
    }
    Ok(Output {
        table: t,
        json: json!({ "catalog": js }),
        failure: (!bad.is_empty()).then(|| format!("catalog entries failing checks: {bad:?}")),
        summary: None,
    })
}
