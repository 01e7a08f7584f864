//! `qcurv`: construct channels, evaluate non-commutative transport metrics,
//! and certify coarse Ricci curvature bounds from JSON experiment specs.
//!
//! Exit codes: 0 success, 1 usage/IO/spec error, 2 certificate failure
//! (an inequality violated beyond tolerance).

mod report;
mod spec;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qcurv_core::channels::{fixed_point_expectation, FixedPointMode};
use qcurv_core::curvature as curv;
use qcurv_core::matcore::DensityState;
use qcurv_core::metrics::{self, MeanKind, DerivationStructure};
use qcurv_core::sample::rng_from_seed;
use report::*;
use spec::*;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcurv", about = "coarse Ricci curvature certificates for quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Task,
    /// experiment specification (JSON)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// output path (defaults to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// mixing-chain length (mixing task)
    #[arg(long, global = true)]
    steps: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Task {
    /// contraction-factor report for the channel
    Curvature,
    /// transport distance between two states
    Wasserstein,
    /// spectral gap on L₂(ω)
    Gap,
    /// transportation-cost inequality certificate
    CertifyTc,
    /// transportation-information inequality certificate
    CertifyTi,
    /// mixing curve: steps against the curvature bound
    Mixing,
    /// intertwining residual report
    Intertwine,
}

impl Task {
    fn name(&self) -> &'static str {
        match self {
            Task::Curvature => "curvature",
            Task::Wasserstein => "wasserstein",
            Task::Gap => "gap",
            Task::CertifyTc => "certify-tc",
            Task::CertifyTi => "certify-ti",
            Task::Mixing => "mixing",
            Task::Intertwine => "intertwine",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, text: String) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load_spec(cli: &Cli, task: Task) -> anyhow::Result<ExperimentSpec> {
    let path = cli
        .spec
        .as_ref()
        .context("--spec PATH is required for this task")?;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let spec: ExperimentSpec = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("at /: schema violation: {e}"))?;
    if let Some(t) = &spec.task {
        if t != task.name() {
            bail!(
                "at /task: spec file says '{t}', but the subcommand is '{}'",
                task.name()
            );
        }
    }
    // QCURV_THREADS caps internal parallelism; the implementation is
    // single-threaded, so any positive value is already honored.
    if let Ok(v) = std::env::var("QCURV_THREADS") {
        let _: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("QCURV_THREADS must be a positive integer"))?;
    }
    Ok(spec)
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let task = cli.command;
    let spec = load_spec(cli, task)?;
    let seed = spec.seed.unwrap_or(cli.seed);
    let tol = spec.tolerance.unwrap_or(cli.tol);
    let mut rng = rng_from_seed(seed);
    let built = spec
        .channel
        .as_ref()
        .map(build_channel)
        .transpose()?;

    match task {
        Task::Curvature => {
            let built = built.context("at /channel: required for curvature")?;
            let rep = if let Some(pspec) = &built.pauli {
                curv::pauli_lipschitz_factor(pspec)?
            } else {
                let sn_spec = spec
                    .metric
                    .as_ref()
                    .and_then(|m| m.seminorm.as_ref())
                    .context("at /metric/seminorm: required for non-Pauli channels")?;
                let sn = build_seminorm(sn_spec, &built)?;
                curv::lipschitz_factor(&built.channel, &sn, &curv::SearchBudget::default(), &mut rng)?
            };
            let body = CurvatureJson {
                kind: "curvature",
                factor_upper: rep.upper_bound_factor,
                factor_lower: rep.lower_bound_factor,
                kappa: rep.kappa,
                witness: rep.witness.as_ref().map(encode_matrix),
                certified: rep.certified,
                method: rep.method.to_string(),
                residuals: ResidualsJson {
                    witness_seminorm: rep.witness_seminorm,
                    witness_image_seminorm: rep.witness_image_seminorm,
                },
            };
            emit(cli, envelope(task, seed, tol, &body)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Task::Wasserstein => {
            let built = built.context("at /channel: required (defines the dimension)")?;
            if spec.states.len() != 2 {
                bail!("at /states: wasserstein needs exactly two states");
            }
            let r1 = build_state(&spec.states[0], &mut rng)?;
            let r2 = build_state(&spec.states[1], &mut rng)?;
            let metric = spec.metric.as_ref().context("at /metric: required")?;
            let body = match metric.metric.as_str() {
                "w1" => {
                    let sn_spec = metric
                        .seminorm
                        .as_ref()
                        .context("at /metric/seminorm: required for w1")?;
                    let sn = build_seminorm(sn_spec, &built)?;
                    let res = metrics::w1_dual(&sn, &r1, &r2)?;
                    TransportJson::from_value(&res.value, res.gap)
                }
                "coupling" => {
                    let cost = match metric.cost.as_deref() {
                        Some("singlet_projector") => singlet_projector(),
                        other => bail!("at /metric/cost: unsupported cost {other:?}"),
                    };
                    let res = metrics::coupling_cost(&cost, &r1, &r2)?;
                    TransportJson::from_value(&res.value, res.gap)
                }
                other => bail!("at /metric/metric: unknown metric '{other}'"),
            };
            emit(cli, envelope(task, seed, tol, &body)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Task::Gap => {
            let built = built.context("at /channel: required for gap")?;
            let omega = built
                .invariant
                .clone()
                .unwrap_or_else(|| DensityState::maximally_mixed(built.channel.dim()));
            let e = if let Some(pspec) = &built.pauli {
                qcurv_core::channels::pauli_conditional_expectation(pspec)
            } else {
                fixed_point_expectation(&built.channel, FixedPointMode::Generic { omega: &omega })?
            };
            let gap = curv::spectral_gap(&built.channel, &omega, &e)?;
            emit(cli, envelope(task, seed, tol, &GapJson { kind: "gap", gap })?)?;
            Ok(ExitCode::SUCCESS)
        }
        Task::CertifyTc => {
            let exps = spec
                .expectations
                .as_ref()
                .context("at /expectations: required for certify-tc")?;
            let dims = exps.dims.clone();
            let es: Vec<_> = (0..dims.len())
                .map(|i| qcurv_core::channels::ConditionalExpectation::site_replacement(&dims, i))
                .collect::<Result<_, _>>()?;
            let sn = metrics::SemiNormSpec::oscillator(dims.clone())?;
            let budget = curv::SearchBudget { restarts: 8, iters: 6 };
            let c = match spec.c {
                Some(c) => c,
                None => curv::measure_tc_constant(&es, &sn, 4, &mut rng)?.max(1.0),
            };
            let kappa = spec.kappa.unwrap_or(0.5);
            let n_samples = spec.samples.unwrap_or(20);
            let d: usize = dims.iter().product();
            let mut worst = f64::INFINITY;
            let mut rows = Vec::new();
            for _ in 0..n_samples {
                let rho = qcurv_core::sample::random_state(&mut rng, d);
                let rep = curv::tc_inequality_check(&es, &sn, kappa, c, &rho, &budget, &mut rng)?;
                if !rep.vacuous {
                    worst = worst.min(rep.slack);
                    rows.push(serde_json::json!({
                        "lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack,
                        "premise_ok": rep.premise_ok,
                    }));
                }
            }
            let passed = worst >= -tol;
            let body = CertificateJson {
                kind: "certify-tc",
                passed,
                worst_slack: worst,
                details: rows,
            };
            emit(cli, envelope(task, seed, tol, &body)?)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Task::CertifyTi => {
            let built = built.context("at /channel: required for certify-ti")?;
            let gen = built
                .generator
                .as_ref()
                .context("at /channel: certify-ti needs a semigroup channel kind")?;
            let d = built.channel.dim();
            if d != 2 {
                bail!("at /channel: certify-ti ships for the qubit depolarizing semigroup");
            }
            let sigma = DensityState::maximally_mixed(2);
            let c = qcurv_core::matcore::cr(1.0 / (2.0 * 2.0f64.sqrt()));
            let ds = DerivationStructure::new(
                vec![
                    qcurv_core::channels::pauli::pauli_matrix(1) * c,
                    qcurv_core::channels::pauli::pauli_matrix(2) * c,
                    qcurv_core::channels::pauli::pauli_matrix(3) * c,
                ],
                vec![0.0; 3],
                MeanKind::WeightedExponential,
                Some(sigma),
            )?;
            let n_samples = spec.samples.unwrap_or(20);
            let mut worst = f64::INFINITY;
            let mut rows = Vec::new();
            for _ in 0..n_samples {
                let rho = qcurv_core::sample::random_state(&mut rng, 2);
                let rep = curv::ti_inequality_check(
                    &ds,
                    gen,
                    spec.c.unwrap_or(1.0),
                    spec.kappa.unwrap_or(1.0),
                    &rho,
                    &[0.25, 1.0, 2.0],
                    &mut rng,
                )?;
                worst = worst.min(rep.slack);
                rows.push(serde_json::json!({
                    "lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack,
                    "dirichlet_identity_defect": rep.dirichlet_identity_defect,
                }));
            }
            let passed = worst >= -tol;
            let body = CertificateJson {
                kind: "certify-ti",
                passed,
                worst_slack: worst,
                details: rows,
            };
            emit(cli, envelope(task, seed, tol, &body)?)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Task::Mixing => {
            let built = built.context("at /channel: required for mixing")?;
            let steps = spec.steps.or(cli.steps).unwrap_or(6);
            let rows: Vec<MixingRowJson> = if let Some(pspec) = &built.pauli {
                let rho = match spec.states.first() {
                    Some(s) => build_state(s, &mut rng)?,
                    None => qcurv_core::sample::random_state(&mut rng, built.channel.dim()),
                };
                curv::pauli_mixing_rows(pspec, &rho, steps)?
                    .into_iter()
                    .map(|r| MixingRowJson {
                        step: r.step,
                        measured: r.measured,
                        bound: r.bound_stated,
                    })
                    .collect()
            } else if let Some(bspec) = &built.bose {
                let sector = bspec.cutoff / 2;
                let r1 = match spec.states.first() {
                    Some(s) => build_state(s, &mut rng)?,
                    None => qcurv_core::sample::random_state_supported(
                        &mut rng,
                        bspec.cutoff + 1,
                        sector + 1,
                        1e-12,
                    ),
                };
                let r2 = match spec.states.get(1) {
                    Some(s) => build_state(s, &mut rng)?,
                    None => qcurv_core::sample::random_state_supported(
                        &mut rng,
                        bspec.cutoff + 1,
                        sector + 1,
                        1e-12,
                    ),
                };
                qcurv_core::cvmodels::mixing_chain(bspec, &built.channel, &r1, &r2, steps)?
                    .into_iter()
                    .map(|r| MixingRowJson {
                        step: r.step,
                        measured: r.measured,
                        bound: r.corollary_bound,
                    })
                    .collect()
            } else {
                bail!("at /channel: mixing supports pauli and bose_beam_splitter channels");
            };
            let monotone = rows.windows(2).all(|w| w[1].bound <= w[0].bound + 1e-12);
            let dominated = rows.iter().all(|r| r.measured <= r.bound + tol);
            if cli.format == "csv" {
                emit(cli, to_csv_mixing(&rows))?;
            } else {
                let body = serde_json::json!({
                    "kind": "mixing",
                    "rows": rows.iter().map(|r| serde_json::json!({
                        "step": r.step, "measured": r.measured, "bound": r.bound,
                    })).collect::<Vec<_>>(),
                    "bound_monotone": monotone,
                    "bound_dominates": dominated,
                });
                emit(cli, envelope(task, seed, tol, &body)?)?;
            }
            Ok(if dominated { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Task::Intertwine => {
            let built = built.context("at /channel: required for intertwine")?;
            let body = if let Some(pspec) = &built.pauli {
                let (ds, hat) = curv::pauli_hat_map(pspec)?;
                let states = curv::sample_states_for(built.channel.dim(), 3, &mut rng);
                let rep = curv::verify_intertwining(&built.channel, &ds, &hat, &states)?;
                IntertwineJson {
                    kind: "intertwine",
                    residual: rep.residual,
                    c_left: Some(rep.c_left),
                    c_right: Some(rep.c_right),
                }
            } else if let Some(bspec) = &built.bose {
                let sector = bspec.cutoff / 2;
                let resid = qcurv_core::cvmodels::intertwining_residual_on_sector(
                    bspec,
                    &built.channel,
                    sector,
                )?;
                IntertwineJson {
                    kind: "intertwine",
                    residual: resid,
                    c_left: None,
                    c_right: None,
                }
            } else {
                bail!("at /channel: intertwine supports pauli and bose_beam_splitter channels");
            };
            emit(cli, envelope(task, seed, tol, &body)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn envelope<T: serde::Serialize>(
    task: Task,
    seed: u64,
    tolerance: f64,
    body: &T,
) -> anyhow::Result<String> {
    let env = ReportEnvelope {
        version: REPORT_VERSION,
        task: task.name().to_string(),
        seed,
        tolerance,
        report: body,
    };
    Ok(serde_json::to_string_pretty(&env)?)
}
