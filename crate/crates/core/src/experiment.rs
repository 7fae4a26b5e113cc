//! Experiment configs, figure presets, and the run pipeline behind the CLI.
//!
//! A config is one flat JSON object. `experiment` selects a built-in preset
//! (`fig1`, `fig2`, `fig3` — two runs each, a `full` and a `dotted` variant)
//! or `custom`; explicit config fields override preset fields, and `--set`
//! overrides are applied to every expanded run. Each run builds its rep,
//! Hamiltonian and chain, evolves the initial coherent state, classifies
//! integrability, counts degrees of freedom, and writes CSV (and a combined
//! SVG when requested).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{
    build_chain, build_su2_irrep, build_su3_symmetric_irrep, build_un_fermion_sector,
    build_un_fundamental, count_idf, tensor_sum_rep, AlgebraRep, ChainId, SubalgebraChain,
};
use crate::coherent::{delta_min, displace, su2_alpha, DisplacementParams};
use crate::dynamics::{evolve, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{C64, CVec};
use crate::models::{classify_integrability, HamiltonianSpec, IntegrabilityVerdict, ModelParams};
use crate::operator::{OperatorMatrix, StateVector};
use crate::plot::{write_svg, Series};

/// Flat JSON experiment description; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// fig1 | fig2 | fig3 | custom (default).
    pub experiment: Option<String>,
    /// single-spin | coupled-spins | lipkin-boson | free-fermions.
    pub model: Option<String>,
    /// su2 | su2xsu2 | su3-symmetric | uN-fundamental | uN-fermion;
    /// inferred from `model` when omitted.
    pub irrep: Option<String>,
    pub j: Option<f64>,
    pub j1: Option<f64>,
    pub j2: Option<f64>,
    pub n_boson: Option<u32>,
    pub n_modes: Option<u32>,
    pub n_particles: Option<u32>,
    pub omega_z: Option<f64>,
    pub omega_x: Option<f64>,
    pub omega: Option<Vec<f64>>,
    pub mu: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    /// Displacement amplitudes [re, im], one per ladder pair.
    pub alpha: Option<Vec<[f64; 2]>>,
    /// Explicit normalized state amplitudes [re, im], full Hilbert dimension.
    pub amplitudes: Option<Vec<[f64; 2]>>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub chain: Option<String>,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub outdir: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Apply one `key=value` override. The value is parsed as JSON when
    /// possible (numbers, arrays, booleans) and as a bare string otherwise.
    pub fn apply_set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects key=value, got `{assignment}`"))
        })?;
        let value = serde_json::from_str::<serde_json::Value>(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let mut doc = serde_json::to_value(&*self)
            .map_err(|e| Error::Config(e.to_string()))?;
        doc.as_object_mut()
            .expect("config serializes to an object")
            .insert(key.to_string(), value);
        *self = serde_json::from_value(doc)
            .map_err(|e| Error::Config(format!("--set {key}: {e}")))?;
        Ok(())
    }

    /// `over`'s present fields layered over `base`.
    fn overlay(base: &Self, over: &Self) -> Result<Self> {
        let mut doc = serde_json::to_value(base).map_err(|e| Error::Config(e.to_string()))?;
        let top = serde_json::to_value(over).map_err(|e| Error::Config(e.to_string()))?;
        let obj = doc.as_object_mut().expect("config serializes to an object");
        for (k, v) in top.as_object().expect("config serializes to an object") {
            if !v.is_null() {
                obj.insert(k.clone(), v.clone());
            }
        }
        serde_json::from_value(doc).map_err(|e| Error::Config(e.to_string()))
    }
}

/// One expanded run: a label, the plot style, and its fully merged config.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub label: String,
    pub dotted: bool,
    pub config: ExperimentConfig,
}

fn preset_runs(name: &str) -> Result<Vec<RunPlan>> {
    let (base, mu_full, mu_dotted) = match name {
        "fig1" => (
            ExperimentConfig {
                experiment: Some("fig1".into()),
                model: Some("single-spin".into()),
                j: Some(3.0),
                omega_z: Some(1.0),
                omega_x: Some(1.0),
                theta: Some(2.0),
                phi: Some(0.0),
                t_max: Some(20.0),
                dt: Some(0.01),
                chain: Some("su2-Jz".into()),
                ..Default::default()
            },
            1.0,
            0.0,
        ),
        "fig2" => (
            ExperimentConfig {
                experiment: Some("fig2".into()),
                model: Some("coupled-spins".into()),
                j1: Some(0.5),
                j2: Some(0.5),
                theta: Some(2.0),
                phi: Some(0.0),
                t_max: Some(20.0),
                dt: Some(0.01),
                chain: Some("su2xsu2-alpha".into()),
                ..Default::default()
            },
            0.5,
            0.0,
        ),
        "fig3" => (
            ExperimentConfig {
                experiment: Some("fig3".into()),
                model: Some("lipkin-boson".into()),
                n_boson: Some(4),
                omega: Some(vec![1.0, 1.0, 1.0]),
                alpha: Some(vec![[0.5, 0.0], [0.0, 0.5]]),
                t_max: Some(20.0),
                dt: Some(0.01),
                chain: Some("su3-isospin".into()),
                ..Default::default()
            },
            1.0 / 6.0,
            0.0,
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown experiment `{other}` (expected fig1, fig2, fig3 or custom)"
            )))
        }
    };
    let mut full = base.clone();
    full.mu = Some(mu_full);
    let mut dotted = base;
    dotted.mu = Some(mu_dotted);
    Ok(vec![
        RunPlan {
            label: "full".into(),
            dotted: false,
            config: full,
        },
        RunPlan {
            label: "dotted".into(),
            dotted: true,
            config: dotted,
        },
    ])
}

/// Expand a config into its run list: presets yield their two variants with
/// the config's own fields layered on top; `custom` yields a single run.
pub fn expand_runs(config: &ExperimentConfig) -> Result<Vec<RunPlan>> {
    match config.experiment.as_deref().unwrap_or("custom") {
        "custom" => Ok(vec![RunPlan {
            label: "run".into(),
            dotted: false,
            config: config.clone(),
        }]),
        preset => preset_runs(preset)?
            .into_iter()
            .map(|mut plan| {
                plan.config = ExperimentConfig::overlay(&plan.config, config)?;
                plan.config.experiment = Some(preset.to_string());
                Ok(plan)
            })
            .collect(),
    }
}

/// Replicate each plan once per μ value, suffixing the labels.
pub fn sweep_over_mu(plans: &[RunPlan], mus: &[f64]) -> Vec<RunPlan> {
    let mut out = Vec::with_capacity(plans.len() * mus.len());
    for mu in mus {
        for plan in plans {
            let mut p = plan.clone();
            p.config.mu = Some(*mu);
            p.label = format!("{}-mu{}", p.label, mu);
            out.push(p);
        }
    }
    out
}

/// Expand, apply `--set` overrides to every run, then apply a μ sweep.
pub fn plan_invocation(
    config: &ExperimentConfig,
    sets: &[String],
    sweep: &[f64],
) -> Result<Vec<RunPlan>> {
    let mut plans = expand_runs(config)?;
    for plan in &mut plans {
        for s in sets {
            plan.config.apply_set(s)?;
        }
    }
    if !sweep.is_empty() {
        plans = sweep_over_mu(&plans, sweep);
    }
    Ok(plans)
}

#[derive(Clone, Debug)]
enum InitialSpec {
    Amplitudes(CVec),
    Alphas(Vec<C64>),
    Angles { theta: f64, phi: f64 },
    Reference,
}

/// A run with its rep, model, chain and grid fully built.
pub struct ResolvedRun {
    pub label: String,
    pub dotted: bool,
    pub experiment: String,
    pub rep: AlgebraRep,
    params: Option<ModelParams>,
    pub chain_id: ChainId,
    initial: InitialSpec,
    pub t_max: f64,
    pub dt: f64,
    csv: Option<String>,
    svg: Option<String>,
    outdir: Option<String>,
}

fn require<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required field `{key}`")))
}

fn two_j_from(j: f64, key: &str) -> Result<u32> {
    if !j.is_finite() || j <= 0.0 {
        return Err(Error::Config(format!("`{key}` must be a positive half-integer")));
    }
    let two = 2.0 * j;
    if (two - two.round()).abs() > 1e-9 || two.round() > u32::MAX as f64 {
        return Err(Error::Config(format!("`{key}` must be a half-integer, got {j}")));
    }
    Ok(two.round() as u32)
}

fn build_rep(config: &ExperimentConfig, family: &str) -> Result<AlgebraRep> {
    match family {
        "su2" => build_su2_irrep(two_j_from(require(config.j, "j")?, "j")?),
        "su2xsu2" => {
            let a = build_su2_irrep(two_j_from(require(config.j1, "j1")?, "j1")?)?;
            let b = build_su2_irrep(two_j_from(require(config.j2, "j2")?, "j2")?)?;
            tensor_sum_rep(&[&a, &b])
        }
        "su3-symmetric" => build_su3_symmetric_irrep(require(config.n_boson, "n_boson")?),
        "uN-fundamental" => build_un_fundamental(require(config.n_modes, "n_modes")?),
        "uN-fermion" => build_un_fermion_sector(
            require(config.n_modes, "n_modes")?,
            require(config.n_particles, "n_particles")?,
        ),
        other => Err(Error::Config(format!("unknown irrep family `{other}`"))),
    }
}

impl RunPlan {
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let config = &self.config;
        let model = config.model.as_deref();
        let family = match (config.irrep.as_deref(), model) {
            (Some(f), _) => f.to_string(),
            (None, Some("single-spin")) => "su2".into(),
            (None, Some("coupled-spins")) => "su2xsu2".into(),
            (None, Some("lipkin-boson")) => "su3-symmetric".into(),
            (None, Some("free-fermions")) => "uN-fermion".into(),
            (None, Some(other)) => {
                return Err(Error::Config(format!("unknown model `{other}`")))
            }
            (None, None) => {
                return Err(Error::Config(
                    "config needs `model` and/or `irrep`".into(),
                ))
            }
        };
        let rep = build_rep(config, &family)?;

        let params = match model {
            Some("single-spin") => Some(ModelParams::SingleSpin {
                omega_z: config.omega_z.unwrap_or(1.0),
                omega_x: config.omega_x.unwrap_or(1.0),
                mu: config.mu.unwrap_or(0.0),
            }),
            Some("coupled-spins") => Some(ModelParams::CoupledSpins {
                mu: config.mu.unwrap_or(0.0),
            }),
            Some("lipkin-boson") => {
                let omega = config.omega.clone().unwrap_or_else(|| vec![1.0; 3]);
                let omega: [f64; 3] = omega.try_into().map_err(|v: Vec<f64>| {
                    Error::Config(format!("`omega` needs 3 entries, got {}", v.len()))
                })?;
                Some(ModelParams::LipkinBoson {
                    omega,
                    mu: config.mu.unwrap_or(0.0),
                })
            }
            Some("free-fermions") => {
                let modes = require(config.n_modes, "n_modes")? as usize;
                Some(ModelParams::FreeFermions {
                    omega: config
                        .omega
                        .clone()
                        .unwrap_or_else(|| (1..=modes).map(|k| k as f64).collect()),
                })
            }
            Some(other) => return Err(Error::Config(format!("unknown model `{other}`"))),
            None => None,
        };

        let chain_id = match config.chain.as_deref() {
            Some(s) => s.parse::<ChainId>()?,
            None => match family.as_str() {
                "su2" => ChainId::Su2Jz,
                "su2xsu2" => ChainId::Su2xSu2Alpha,
                "su3-symmetric" => ChainId::Su3Isospin,
                "uN-fundamental" => ChainId::UnTower,
                "uN-fermion" => ChainId::UnFermionFree,
                _ => unreachable!("family validated above"),
            },
        };

        let initial = if let Some(amp) = &config.amplitudes {
            InitialSpec::Amplitudes(amp.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        } else if let Some(alphas) = &config.alpha {
            InitialSpec::Alphas(alphas.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        } else if let Some(theta) = config.theta {
            InitialSpec::Angles {
                theta,
                phi: config.phi.unwrap_or(0.0),
            }
        } else {
            InitialSpec::Reference
        };

        Ok(ResolvedRun {
            label: self.label.clone(),
            dotted: self.dotted,
            experiment: config
                .experiment
                .clone()
                .unwrap_or_else(|| "custom".into()),
            rep,
            params,
            chain_id,
            initial,
            t_max: config.t_max.unwrap_or(20.0),
            dt: config.dt.unwrap_or(0.01),
            csv: config.csv.clone(),
            svg: config.svg.clone(),
            outdir: config.outdir.clone(),
        })
    }
}

fn suffix_path(path: &str, label: &str) -> PathBuf {
    let p = Path::new(path);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = p.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    p.with_file_name(format!("{stem}-{label}.{ext}"))
}

impl ResolvedRun {
    pub fn params(&self) -> Result<&ModelParams> {
        self.params
            .as_ref()
            .ok_or_else(|| Error::Config("missing required field `model`".into()))
    }

    pub fn hamiltonian(&self) -> Result<OperatorMatrix> {
        HamiltonianSpec {
            rep: &self.rep,
            params: self.params()?,
        }
        .build()
    }

    pub fn chain(&self) -> Result<SubalgebraChain> {
        build_chain(&self.rep, self.chain_id)
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        match &self.initial {
            InitialSpec::Amplitudes(amp) => {
                if amp.len() != self.rep.dim_hilbert() {
                    return Err(Error::DimensionMismatch {
                        expected: self.rep.dim_hilbert(),
                        got: amp.len(),
                    });
                }
                StateVector::new(amp.clone())
            }
            InitialSpec::Alphas(alphas) => {
                displace(&self.rep, &DisplacementParams::new(alphas.clone()))
            }
            InitialSpec::Angles { theta, phi } => {
                if self.rep.factors().iter().any(|f| f.label.spin_j().is_none()) {
                    return Err(Error::Config(
                        "theta/phi initial states need su(2) factors; use `alpha`".into(),
                    ));
                }
                let mut alphas = vec![C64::new(0.0, 0.0); self.rep.ladder_pairs().len()];
                for f in self.rep.factors() {
                    alphas[f.ladder_range.start] = su2_alpha(*theta, *phi);
                }
                displace(&self.rep, &DisplacementParams::new(alphas))
            }
            InitialSpec::Reference => displace(
                &self.rep,
                &DisplacementParams::zero(self.rep.ladder_pairs().len()),
            ),
        }
    }

    pub fn classify(&self) -> Result<IntegrabilityVerdict> {
        let chain = self.chain()?;
        classify_integrability(
            &HamiltonianSpec {
                rep: &self.rep,
                params: self.params()?,
            },
            &chain,
        )
    }

    pub fn idf(&self) -> Result<usize> {
        count_idf(&self.rep, &self.chain()?)
    }

    /// CSV destination under the naming rules: explicit `csv` is used as-is
    /// for a single run and label-suffixed for multi-run invocations; presets
    /// default to `<outdir>/<experiment>-<label>.csv`; custom runs without
    /// `csv` write none.
    pub fn csv_path(&self, multi_run: bool) -> Option<PathBuf> {
        match (&self.csv, self.experiment.as_str()) {
            (Some(path), _) if multi_run => Some(suffix_path(path, &self.label)),
            (Some(path), _) => Some(PathBuf::from(path)),
            (None, "custom") => None,
            (None, _) => {
                let dir = PathBuf::from(self.outdir.as_deref().unwrap_or("."));
                Some(dir.join(format!("{}-{}.csv", self.experiment, self.label)))
            }
        }
    }

    /// Run the full pipeline: classify, count IDF, evolve, write CSV.
    pub fn simulate(&self, multi_run: bool) -> Result<RunSummary> {
        let h = self.hamiltonian()?;
        let verdict = self.classify()?;
        let idf = self.idf()?;
        let psi0 = self.initial_state()?;
        let trajectory = evolve(&h, &psi0, self.t_max, self.dt, &self.rep)?;
        let csv = self.csv_path(multi_run);
        if let Some(path) = &csv {
            write_csv(path, &trajectory)?;
        }
        Ok(RunSummary {
            label: self.label.clone(),
            dotted: self.dotted,
            verdict,
            delta_min: delta_min(&self.rep)?,
            max_delta: trajectory.max_delta(),
            idf,
            csv,
            trajectory,
        })
    }
}

/// Everything `simulate` produced for one run.
pub struct RunSummary {
    pub label: String,
    pub dotted: bool,
    pub verdict: IntegrabilityVerdict,
    pub delta_min: f64,
    pub max_delta: f64,
    pub idf: usize,
    pub csv: Option<PathBuf>,
    pub trajectory: Trajectory,
}

/// `verdict=<...> reason=<...> residual=<...>` (reason=none when
/// nonintegrable; the residual is the deciding test's).
pub fn classify_line(v: &IntegrabilityVerdict) -> String {
    let reason = v
        .reason
        .map(|r| r.to_string())
        .unwrap_or_else(|| "none".into());
    format!(
        "verdict={} reason={} residual={:e}",
        v.verdict,
        reason,
        v.headline_residual()
    )
}

impl RunSummary {
    pub fn line(&self) -> String {
        let mut s = format!("run={} {}", self.label, classify_line(&self.verdict));
        let _ = write!(
            s,
            " delta_min={} max_delta={} idf={}",
            self.delta_min, self.max_delta, self.idf
        );
        if let Some(csv) = &self.csv {
            let _ = write!(s, " csv={}", csv.display());
        }
        s
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

/// Write `t,delta,energy,norm_error` rows; `{}` float formatting is the
/// shortest representation that round-trips.
pub fn write_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    ensure_parent(path)?;
    let mut out = String::with_capacity(32 * traj.len() + 32);
    out.push_str("t,delta,energy,norm_error\n");
    for i in 0..traj.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            traj.times()[i],
            traj.delta_series()[i],
            traj.energy_series()[i],
            traj.norm_error_series()[i]
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Results of one invocation: per-run summaries plus the combined SVG path.
pub struct ExperimentOutput {
    pub summaries: Vec<RunSummary>,
    pub svg: Option<PathBuf>,
}

/// Simulate every plan and render the shared Δ(t) plot when configured.
pub fn execute(plans: &[RunPlan]) -> Result<ExperimentOutput> {
    if plans.is_empty() {
        return Err(Error::Config("no runs to execute".into()));
    }
    let multi = plans.len() > 1;
    let mut summaries = Vec::with_capacity(plans.len());
    let mut svg_path: Option<PathBuf> = None;
    let mut title = String::new();
    for plan in plans {
        let run = plan.resolve()?;
        if svg_path.is_none() {
            svg_path = run.svg.as_deref().map(PathBuf::from);
            title = run.experiment.clone();
        }
        summaries.push(run.simulate(multi)?);
    }
    let svg = match svg_path {
        Some(path) => {
            let series: Vec<Series> = summaries
                .iter()
                .map(|s| Series {
                    label: &s.label,
                    xs: s.trajectory.times(),
                    ys: s.trajectory.delta_series(),
                    dotted: s.dotted,
                })
                .collect();
            write_svg(&path, &title, "t", "Δ(t)", &series)?;
            Some(path)
        }
        None => None,
    };
    Ok(ExperimentOutput { summaries, svg })
}
