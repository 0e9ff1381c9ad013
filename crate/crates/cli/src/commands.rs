//! Command implementations and their JSON config schemas.

use anyhow::{anyhow, bail, Context, Result};
use pingpong_core::adversary::{soundness_experiment, StrategySpec};
use pingpong_core::certify::{
    completeness_verdict, composed_performance_bound, consistency_angle_sum,
    consistency_confidence, consistency_threshold_from_angle, device_angle, performance_bound,
    qg_worked_example, BoundConstants, CertificationReport, CertifyError, DeviceEstimates,
    PerformanceBound, ReportKind,
};
use pingpong_core::channels::QuantumChannel;
use pingpong_core::designs::{verify_state_2design, verify_unitary_2design, PauliStateSet};
use pingpong_core::linalg::gates;
use pingpong_core::protocol::{
    analytic_success_prob, canonical_cliffords, exact_depth_fidelity, format_sig12, RoundNoise,
    TestConfig, TestSpec,
};
use pingpong_core::stats::{rate_by_depth, rate_overall, RateEstimate};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub struct Ctx {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
}

/// Commands return the list of failed checks; empty means success.
pub type Runner = fn(&Ctx) -> Result<Vec<String>>;

impl Ctx {
    fn load_config<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| anyhow!("this command requires --config PATH"))?;
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| anyhow!("invalid config {}: {e}", path.display()))
    }

    /// Seed precedence: --seed flag, then config value, then PINGPONG_SEED.
    fn resolve_seed(&self, from_config: Option<u64>) -> Option<u64> {
        self.seed.or(from_config).or_else(|| {
            std::env::var("PINGPONG_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
    }

    fn require_json_format(&self) -> Result<()> {
        if self.format == Some(OutputFormat::Csv) {
            bail!("this command only emits JSON; drop --format csv");
        }
        Ok(())
    }

    fn emit(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, bytes)
                .with_context(|| format!("writing {}", path.display())),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(bytes)?;
                Ok(())
            }
        }
    }
}

fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

// ---------------------------------------------------------------------------
// run-test
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunTestConfig {
    test: TestSpec,
    /// Two-sided confidence parameter for the summary epsilons.
    #[serde(default = "default_delta")]
    delta: f64,
}

fn default_delta() -> f64 {
    0.01
}

#[derive(Serialize)]
struct DepthRate {
    kappa: usize,
    #[serde(flatten)]
    estimate: RateEstimate,
}

#[derive(Serialize)]
struct RunSummary {
    digest: String,
    seed: u64,
    k: usize,
    n: u64,
    delta: f64,
    analytic_success_prob: f64,
    overall: RateEstimate,
    by_depth: Vec<DepthRate>,
}

pub fn run_test(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let mut cfg: RunTestConfig = ctx.load_config()?;
    cfg.test.seed = ctx.resolve_seed(cfg.test.seed);
    let built: TestConfig = cfg.test.build()?;
    let out = ctx
        .out
        .as_ref()
        .ok_or_else(|| anyhow!("run-test requires --out PATH for the transcript"))?;

    let transcript = pingpong_core::protocol::run_test(&built)?;
    let mut buf = Vec::new();
    transcript.write_to(&mut buf)?;
    fs::write(out, &buf).with_context(|| format!("writing {}", out.display()))?;

    let mut by_depth = Vec::new();
    for kappa in 1..=built.k() {
        if let Ok(est) = rate_by_depth(&transcript, kappa, cfg.delta) {
            by_depth.push(DepthRate {
                kappa,
                estimate: est,
            });
        }
    }
    let summary = RunSummary {
        digest: built.digest().to_string(),
        seed: built.seed(),
        k: built.k(),
        n: built.n(),
        delta: cfg.delta,
        analytic_success_prob: analytic_success_prob(&built)?,
        overall: rate_overall(&transcript, cfg.delta)?,
        by_depth,
    };
    let summary_path = summary_path_for(out);
    fs::write(&summary_path, to_json_bytes(&summary)?)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    Ok(vec![])
}

pub fn summary_path_for(transcript: &Path) -> PathBuf {
    let mut name = transcript.as_os_str().to_os_string();
    name.push(".summary.json");
    PathBuf::from(name)
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertifyConfig {
    mu_est: f64,
    t: f64,
    k: u32,
    n: u64,
    eps: f64,
}

pub fn certify(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let cfg: CertifyConfig = ctx.load_config()?;
    let report = completeness_verdict(cfg.mu_est, cfg.t, cfg.k, cfg.n, cfg.eps)?;
    let failed = !report.verdict;
    ctx.emit(&to_json_bytes(&report)?)?;
    Ok(if failed {
        vec![format!(
            "completeness: mu_est {} below threshold {}",
            report.observed, report.threshold
        )]
    } else {
        vec![]
    })
}

// ---------------------------------------------------------------------------
// consistency
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConsistencyConfig {
    devices: DeviceEstimates,
    kappa: usize,
    /// Observed winning rate for the fixed depth and string.
    observed_rate: f64,
    #[serde(default)]
    eps_rate: f64,
}

pub fn consistency(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let cfg: ConsistencyConfig = ctx.load_config()?;
    let angle = consistency_angle_sum(&cfg.devices, cfg.kappa)?;
    let threshold = consistency_threshold_from_angle(angle, cfg.eps_rate)?;
    let confidence = consistency_confidence(&cfg.devices, cfg.kappa)?;
    let report = CertificationReport {
        kind: ReportKind::Consistency,
        inputs: json!({
            "devices": cfg.devices,
            "kappa": cfg.kappa,
            "observed_rate": cfg.observed_rate,
            "eps_rate": cfg.eps_rate,
            "angle_sum": angle,
        }),
        threshold,
        observed: cfg.observed_rate,
        verdict: cfg.observed_rate >= threshold,
        confidence,
    };
    let failed = !report.verdict;
    ctx.emit(&to_json_bytes(&report)?)?;
    Ok(if failed {
        vec![format!(
            "consistency: observed rate {} below threshold {}",
            report.observed, report.threshold
        )]
    } else {
        vec![]
    })
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundPart {
    kappa: u32,
    r: f64,
    #[serde(default)]
    eps: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundConfig {
    #[serde(default)]
    r_k: Option<f64>,
    #[serde(default)]
    eps_k: f64,
    #[serde(default)]
    k: Option<u32>,
    #[serde(default)]
    parts: Option<Vec<BoundPart>>,
    #[serde(default = "default_true")]
    include_cliff_factor: bool,
    #[serde(default = "default_d")]
    d: u32,
    #[serde(default = "default_cliff")]
    cliff_size: u64,
    /// Executions behind the rate estimate; used for the bound confidence.
    #[serde(default)]
    n_k: Option<u64>,
}

fn default_true() -> bool {
    true
}
fn default_d() -> u32 {
    2
}
fn default_cliff() -> u64 {
    24
}

pub fn bound(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let cfg: BoundConfig = ctx.load_config()?;
    let consts = BoundConstants {
        d: cfg.d,
        cliff_size: cfg.cliff_size,
    };
    let (bound, observed, inputs): (PerformanceBound, f64, serde_json::Value) =
        match (&cfg.parts, cfg.r_k, cfg.k) {
            (Some(parts), None, None) => {
                let tuples: Vec<(u32, f64, f64)> =
                    parts.iter().map(|p| (p.kappa, p.r, p.eps)).collect();
                let b = composed_performance_bound(&tuples, &consts)?;
                let min_r = parts.iter().map(|p| p.r).fold(f64::INFINITY, f64::min);
                (
                    b,
                    min_r,
                    json!({ "parts": tuples, "d": cfg.d, "cliff_size": cfg.cliff_size }),
                )
            }
            (None, Some(r_k), Some(k)) => {
                let b = performance_bound(r_k, cfg.eps_k, k, &consts, cfg.include_cliff_factor)?;
                (
                    b,
                    r_k,
                    json!({
                        "r_k": r_k, "eps_k": cfg.eps_k, "k": k,
                        "include_cliff_factor": cfg.include_cliff_factor,
                        "d": cfg.d, "cliff_size": cfg.cliff_size, "n_k": cfg.n_k,
                    }),
                )
            }
            _ => bail!("bound config needs either `parts` or both `r_k` and `k`"),
        };
    let confidence = match cfg.n_k {
        Some(n) => 1.0 - (-2.0 * n as f64 * cfg.eps_k * cfg.eps_k).exp(),
        None if cfg.eps_k == 0.0 => 1.0,
        None => bail!("bound config with eps_k > 0 needs n_k for the confidence"),
    };
    let report = CertificationReport {
        kind: ReportKind::Performance,
        inputs: json!({ "config": inputs, "vacuous": bound.vacuous }),
        threshold: bound.value,
        observed,
        verdict: !bound.vacuous,
        confidence,
    };
    ctx.emit(&to_json_bytes(&report)?)?;
    Ok(vec![])
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NoiseKind {
    Depolarizing,
    Dephasing,
}

impl NoiseKind {
    fn name(self) -> &'static str {
        match self {
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::Dephasing => "dephasing",
        }
    }

    /// Channel of this kind with average fidelity exactly `r`.
    fn channel_with_fidelity(self, r: f64) -> Result<QuantumChannel> {
        match self {
            // Fbar = (1+p)/2.
            NoiseKind::Depolarizing => {
                let p = 2.0 * r - 1.0;
                if p < 0.0 {
                    bail!("depolarizing fidelity {r} below 1/2 is not constructible");
                }
                Ok(QuantumChannel::depolarizing(p)?)
            }
            // Fbar = q + (1-q)/3.
            NoiseKind::Dephasing => {
                let q = (3.0 * r - 1.0) / 2.0;
                if !(0.0..=1.0).contains(&q) {
                    bail!("dephasing fidelity {r} outside [1/3, 1]");
                }
                Ok(QuantumChannel::dephasing(q)?)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    kinds: Vec<NoiseKind>,
    kappas: Vec<usize>,
    r_grid: Vec<f64>,
    /// Optional input-state dephasing, given as the prepared state's
    /// average fidelity; treated as one extra channel in the bound.
    #[serde(default)]
    input_fidelity: Option<f64>,
    #[serde(default)]
    eps_rate: f64,
}

#[derive(Serialize)]
struct SweepRow {
    kind: &'static str,
    kappa: usize,
    r: f64,
    test_avg_fidelity: f64,
    /// None when the angle sum exceeds pi/2 (bound inapplicable).
    consistency_bound: Option<f64>,
}

fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut cells: Vec<(NoiseKind, usize, f64)> = Vec::new();
    for &kind in &cfg.kinds {
        for &kappa in &cfg.kappas {
            for &r in &cfg.r_grid {
                cells.push((kind, kappa, r));
            }
        }
    }
    cells.sort_by(|a, b| {
        a.0.name()
            .cmp(b.0.name())
            .then(a.1.cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });

    let input_noise = match cfg.input_fidelity {
        Some(f) => Some(NoiseKind::Dephasing.channel_with_fidelity(f)?),
        None => None,
    };

    let mut rows = Vec::with_capacity(cells.len());
    for (kind, kappa, r) in cells {
        let ch = kind.channel_with_fidelity(r)?;
        let noise = RoundNoise {
            memory: ch.clone(),
            gate_noise: ch,
        };
        let test_cfg = TestConfig::new(
            kappa,
            1,
            0,
            vec![noise; kappa],
            input_noise.clone(),
            None,
        )?;
        let fidelity = exact_depth_fidelity(&test_cfg, kappa)?;

        let devices = DeviceEstimates::uniform(r, kappa)?;
        let mut angle = consistency_angle_sum(&devices, kappa)?;
        if let Some(f) = cfg.input_fidelity {
            angle += device_angle(f)?;
        }
        let bound = match consistency_threshold_from_angle(angle, cfg.eps_rate) {
            Ok(v) => Some(v),
            Err(CertifyError::BoundInapplicable(_)) => None,
            Err(e) => return Err(e.into()),
        };
        rows.push(SweepRow {
            kind: kind.name(),
            kappa,
            r,
            test_avg_fidelity: fidelity,
            consistency_bound: bound,
        });
    }
    Ok(rows)
}

pub fn sweep(ctx: &Ctx) -> Result<Vec<String>> {
    let cfg: SweepConfig = ctx.load_config()?;
    let rows = sweep_rows(&cfg)?;
    let bytes = match ctx.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut text = String::from("kind,kappa,r,test_avg_fidelity,consistency_bound\n");
            for row in &rows {
                let bound = row
                    .consistency_bound
                    .map(format_sig12)
                    .unwrap_or_default();
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.kind,
                    row.kappa,
                    format_sig12(row.r),
                    format_sig12(row.test_avg_fidelity),
                    bound
                ));
            }
            text.into_bytes()
        }
        OutputFormat::Json => to_json_bytes(&rows)?,
    };
    ctx.emit(&bytes)?;
    Ok(vec![])
}

// ---------------------------------------------------------------------------
// soundness-sim
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SoundnessConfig {
    k: usize,
    n: u64,
    #[serde(default)]
    seed: Option<u64>,
    strategy: StrategySpec,
    #[serde(default = "default_delta")]
    delta: f64,
}

pub fn soundness_sim(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let cfg: SoundnessConfig = ctx.load_config()?;
    let seed = ctx
        .resolve_seed(cfg.seed)
        .ok_or(pingpong_core::protocol::ProtocolError::MissingSeed)?;
    // Cheaters get noiseless devices: the most stringent bound test.
    let test_cfg = TestConfig::perfect(cfg.k, cfg.n, seed)?;
    let strat = cfg.strategy.build(cfg.k)?;
    let outcome = soundness_experiment(&test_cfg, &strat, cfg.delta)?;
    let report = json!({
        "kind": "soundness",
        "inputs": {
            "k": cfg.k, "n": cfg.n, "seed": seed, "delta": cfg.delta,
            "m": strat.m(),
            "send_rounds": strat.send_rounds().iter().collect::<Vec<_>>(),
            "fallback": strat.fallback(),
        },
        "rate": outcome.rate,
        "bound": outcome.bound,
        "epsilon": outcome.epsilon,
        "violated": outcome.violated,
    });
    ctx.emit(&to_json_bytes(&report)?)?;
    Ok(if outcome.violated {
        vec![format!(
            "soundness: rate {} exceeds bound {}",
            outcome.rate, outcome.bound
        )]
    } else {
        vec![]
    })
}

// ---------------------------------------------------------------------------
// verify-designs
// ---------------------------------------------------------------------------

pub fn verify_designs(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let group = canonical_cliffords();
    let state_ok = verify_state_2design(&PauliStateSet::canonical());
    let probes = [
        QuantumChannel::dephasing(0.3)?,
        QuantumChannel::depolarizing(0.6)?,
        QuantumChannel::unitary(gates::phase_s())?,
    ];
    let unitary_ok = probes
        .iter()
        .all(|p| verify_unitary_2design(group.elements(), p));
    let report = json!({
        "state_2design": state_ok,
        "unitary_2design": unitary_ok,
        "cliff_size": group.len(),
    });
    ctx.emit(&to_json_bytes(&report)?)?;
    let mut failures = Vec::new();
    if !state_ok {
        failures.push("state set is not a projective 2-design".to_string());
    }
    if !unitary_ok {
        failures.push("Clifford set is not a unitary 2-design".to_string());
    }
    if group.len() != 24 {
        failures.push(format!("Clifford group has {} elements", group.len()));
    }
    Ok(failures)
}

// ---------------------------------------------------------------------------
// qg-example
// ---------------------------------------------------------------------------

pub fn qg_example(ctx: &Ctx) -> Result<Vec<String>> {
    ctx.require_json_format()?;
    let qg = qg_worked_example();
    let report = json!({
        "exact": qg.exact_diamond,
        "bound": qg.bound,
        "gate_free": qg.gate_free_bound,
        "memory_fidelity": qg.memory_fidelity,
        "one_minus_r_k": qg.one_minus_r_k,
    });
    ctx.emit(&to_json_bytes(&report)?)?;
    let mut failures = Vec::new();
    if (qg.exact_diamond - 6e-5).abs() > 1e-9 {
        failures.push(format!("exact diamond {} off 6e-5", qg.exact_diamond));
    }
    if (qg.bound - 0.7436).abs() > 5e-4 {
        failures.push(format!("bound {} off 0.7436", qg.bound));
    }
    if (qg.gate_free_bound - 0.0310).abs() > 5e-4 {
        failures.push(format!("gate-free bound {} off 0.0310", qg.gate_free_bound));
    }
    Ok(failures)
}
