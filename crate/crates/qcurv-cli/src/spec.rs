//! JSON experiment specifications and their validation (errors carry
//! JSON-pointer paths).

use anyhow::{bail, Context};
use qcurv_core::channels::{
    channel_from_kraus, gibbs_state, heat_bath_generator, pauli_channel, Channel, GeneratorSpec,
    HamiltonianSpec, PauliChannelSpec, PauliString,
};
use qcurv_core::cvmodels::{bose_channel, fermi_beam_splitter, thermal_state, BeamSplitterSpec};
use qcurv_core::matcore::{CMatrix, CVector, Complex64, DensityState};
use qcurv_core::metrics::SemiNormSpec;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub task: Option<String>,
    pub channel: Option<ChannelSpecJson>,
    #[serde(default)]
    pub metric: Option<MetricSpecJson>,
    #[serde(default)]
    pub states: Vec<StateJson>,
    #[serde(default)]
    pub expectations: Option<ExpectationsJson>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpecJson {
    Pauli {
        n: usize,
        terms: Vec<PauliTermJson>,
    },
    Gibbs {
        model: String,
        n: usize,
        beta: f64,
        coupling: f64,
        #[serde(default)]
        field: f64,
    },
    Kraus {
        dim: usize,
        /// each operator as rows of [re, im] entries
        kraus: Vec<Vec<Vec<[f64; 2]>>>,
    },
    BoseBeamSplitter {
        lambda: f64,
        cutoff: usize,
        env: EnvJson,
    },
    FermiBeamSplitter {
        n: usize,
        lambda: f64,
    },
    DepolarizingSemigroup {
        dim: usize,
        time: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTermJson {
    pub string: String,
    pub weight: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvJson {
    Thermal { beta: f64 },
    MaximallyMixed,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpecJson {
    pub metric: String,
    #[serde(default)]
    pub seminorm: Option<SemiNormJson>,
    #[serde(default)]
    pub cost: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum SemiNormJson {
    OperatorNorm,
    CommutatorMax { generators: Vec<String> },
    CommutatorL2 { generators: Vec<String> },
    Oscillator { site_dims: Vec<usize> },
    Ornstein { site_dims: Vec<usize> },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateJson {
    MaximallyMixed { dim: usize },
    Computational { dim: usize, index: usize },
    Thermal { beta: f64, cutoff: usize },
    Matrix { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
    Haar { dim: usize },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationsJson {
    pub dims: Vec<usize>,
}

pub struct BuiltChannel {
    pub channel: Channel,
    pub pauli: Option<PauliChannelSpec>,
    pub bose: Option<BeamSplitterSpec>,
    pub generator: Option<GeneratorSpec>,
    pub invariant: Option<DensityState>,
}

pub fn parse_pauli_spec(n: usize, terms: &[PauliTermJson]) -> anyhow::Result<PauliChannelSpec> {
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let s = PauliString::parse(&t.string)
            .with_context(|| format!("at /channel/terms/{i}/string"))?;
        if s.len() != n {
            bail!("at /channel/terms/{i}/string: length {} != n = {n}", s.len());
        }
        if !(t.weight > 0.0) {
            bail!("at /channel/terms/{i}/weight: must be positive, got {}", t.weight);
        }
        parsed.push((s, t.weight));
    }
    PauliChannelSpec::new(parsed).map_err(|e| anyhow::anyhow!("at /channel/terms: {e}"))
}

pub fn build_channel(spec: &ChannelSpecJson) -> anyhow::Result<BuiltChannel> {
    match spec {
        ChannelSpecJson::Pauli { n, terms } => {
            let pspec = parse_pauli_spec(*n, terms)?;
            let channel = pauli_channel(&pspec)?;
            Ok(BuiltChannel {
                channel,
                pauli: Some(pspec),
                bose: None,
                generator: None,
                invariant: Some(DensityState::maximally_mixed(1 << n)),
            })
        }
        ChannelSpecJson::Gibbs {
            model,
            n,
            beta,
            coupling,
            field,
        } => {
            if model != "ising_chain" {
                bail!("at /channel/model: unsupported model '{model}' (expected ising_chain)");
            }
            if *field != 0.0 {
                bail!("at /channel/field: only field = 0 keeps the terms commuting");
            }
            let h = HamiltonianSpec::ising_chain(*n, *coupling, *field);
            let gen = heat_bath_generator(&h, *beta)?;
            let channel = qcurv_core::channels::semigroup_channel(&gen, 1.0)?;
            let omega = gibbs_state(&h.full_matrix()?, *beta)?;
            Ok(BuiltChannel {
                channel,
                pauli: None,
                bose: None,
                generator: Some(gen),
                invariant: Some(omega),
            })
        }
        ChannelSpecJson::Kraus { dim, kraus } => {
            let mut ops = Vec::with_capacity(kraus.len());
            for (ki, rows) in kraus.iter().enumerate() {
                if rows.len() != *dim {
                    bail!("at /channel/kraus/{ki}: expected {dim} rows, got {}", rows.len());
                }
                let mut m = CMatrix::zeros(*dim, *dim);
                for (ri, row) in rows.iter().enumerate() {
                    if row.len() != *dim {
                        bail!(
                            "at /channel/kraus/{ki}/{ri}: expected {dim} entries, got {}",
                            row.len()
                        );
                    }
                    for (ci, &[re, im]) in row.iter().enumerate() {
                        m[(ri, ci)] = Complex64::new(re, im);
                    }
                }
                ops.push(m);
            }
            let channel =
                channel_from_kraus(ops).map_err(|e| anyhow::anyhow!("at /channel/kraus: {e}"))?;
            Ok(BuiltChannel {
                channel,
                pauli: None,
                bose: None,
                generator: None,
                invariant: None,
            })
        }
        ChannelSpecJson::BoseBeamSplitter { lambda, cutoff, env } => {
            let env_state = match env {
                EnvJson::Thermal { beta } => thermal_state(*beta, *cutoff)?,
                EnvJson::MaximallyMixed => DensityState::maximally_mixed(cutoff + 1),
            };
            let bspec = BeamSplitterSpec {
                lambda: *lambda,
                env: env_state,
                cutoff: *cutoff,
            };
            let channel = bose_channel(&bspec)?;
            Ok(BuiltChannel {
                channel,
                pauli: None,
                bose: Some(bspec),
                generator: None,
                invariant: None,
            })
        }
        ChannelSpecJson::FermiBeamSplitter { n, lambda } => {
            let env = DensityState::maximally_mixed(1 << n);
            let fb = fermi_beam_splitter(*lambda, *n, &env)?;
            Ok(BuiltChannel {
                channel: fb.channel,
                pauli: None,
                bose: None,
                generator: None,
                invariant: Some(DensityState::maximally_mixed(1 << n)),
            })
        }
        ChannelSpecJson::DepolarizingSemigroup { dim, time } => {
            let e = qcurv_core::channels::ConditionalExpectation::trace_average(*dim);
            let l = qcurv_core::matcore::SuperOp::new(
                *dim,
                e.channel().superop().matrix()
                    - qcurv_core::matcore::SuperOp::identity(*dim).matrix(),
            )?;
            let gen = GeneratorSpec::new(l, None)?;
            let channel = qcurv_core::channels::semigroup_channel(&gen, *time)?;
            Ok(BuiltChannel {
                channel,
                pauli: None,
                bose: None,
                generator: Some(gen),
                invariant: Some(DensityState::maximally_mixed(*dim)),
            })
        }
    }
}

pub fn build_seminorm(
    sn: &SemiNormJson,
    built: &BuiltChannel,
) -> anyhow::Result<SemiNormSpec> {
    let dim = built.channel.dim();
    let resolve_generators = |names: &[String]| -> anyhow::Result<Vec<CMatrix>> {
        names
            .iter()
            .enumerate()
            .map(|(i, name)| match name.as_str() {
                "a" | "annihilation" => {
                    let bspec = built.bose.as_ref().with_context(|| {
                        format!("at /metric/seminorm/generators/{i}: 'a' needs a bosonic channel")
                    })?;
                    Ok(qcurv_core::cvmodels::fock_ops(bspec.cutoff)?.0)
                }
                "adag" | "a_dagger" | "creation" => {
                    let bspec = built.bose.as_ref().with_context(|| {
                        format!("at /metric/seminorm/generators/{i}: 'adag' needs a bosonic channel")
                    })?;
                    Ok(qcurv_core::cvmodels::fock_ops(bspec.cutoff)?.1)
                }
                s => {
                    let p = PauliString::parse(s)
                        .with_context(|| format!("at /metric/seminorm/generators/{i}"))?;
                    let dense = p.dense();
                    if dense.nrows() != dim {
                        bail!(
                            "at /metric/seminorm/generators/{i}: dimension {} != channel {dim}",
                            dense.nrows()
                        );
                    }
                    Ok(dense)
                }
            })
            .collect()
    };
    let spec = match sn {
        SemiNormJson::OperatorNorm => SemiNormSpec::operator_norm(dim),
        SemiNormJson::CommutatorMax { generators } => {
            SemiNormSpec::commutator_max(resolve_generators(generators)?)?
        }
        SemiNormJson::CommutatorL2 { generators } => {
            SemiNormSpec::commutator_l2(resolve_generators(generators)?)?
        }
        SemiNormJson::Oscillator { site_dims } => SemiNormSpec::oscillator(site_dims.clone())?,
        SemiNormJson::Ornstein { site_dims } => SemiNormSpec::ornstein(site_dims.clone())?,
    };
    if spec.dim() != dim {
        bail!(
            "at /metric/seminorm: semi-norm dimension {} != channel dimension {dim}",
            spec.dim()
        );
    }
    Ok(spec)
}

pub fn build_state(s: &StateJson, rng: &mut impl rand::Rng) -> anyhow::Result<DensityState> {
    Ok(match s {
        StateJson::MaximallyMixed { dim } => DensityState::maximally_mixed(*dim),
        StateJson::Computational { dim, index } => {
            if index >= dim {
                bail!("at /states: computational index {index} out of range {dim}");
            }
            let mut k = CVector::zeros(*dim);
            k[*index] = qcurv_core::matcore::ONE;
            DensityState::pure(&k)?
        }
        StateJson::Thermal { beta, cutoff } => thermal_state(*beta, *cutoff)?,
        StateJson::Matrix { re, im } => {
            let d = re.len();
            if im.len() != d || re.iter().any(|r| r.len() != d) || im.iter().any(|r| r.len() != d) {
                bail!("at /states: matrix must be square with matching re/im parts");
            }
            let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j]));
            DensityState::new(m)?
        }
        StateJson::Haar { dim } => qcurv_core::sample::random_state(rng, *dim),
    })
}

pub fn singlet_projector() -> CMatrix {
    let mut v = CVector::zeros(4);
    v[1] = qcurv_core::matcore::cr(1.0 / 2.0f64.sqrt());
    v[2] = qcurv_core::matcore::cr(-(1.0 / 2.0f64.sqrt()));
    CMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj())
}
