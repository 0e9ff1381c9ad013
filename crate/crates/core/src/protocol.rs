//! The teleportation-based ping-pong test engine: samples depth, input
//! state and gate string, evolves the qubit through noisy rounds, performs
//! the verifier's measurement and records outcomes.
//!
//! Every execution draws from its own counter-based RNG stream keyed by
//! (master seed, execution index), so parallel and serial runs produce
//! bit-identical transcripts.

use crate::channels::{
    pauli_eigenstates, twirl_parameter, ChannelError, ChannelSpec, QuantumChannel,
};
use crate::designs::CliffordGroup;
use crate::linalg::{ComplexMatrix, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("k must be at least 1")]
    ZeroDepth,
    #[error("n must be at least 1")]
    ZeroExecutions,
    #[error("expected {expected} per-round noise entries, got {got}")]
    RoundCount { expected: usize, got: usize },
    #[error("execution index {0} outside 1..={1}")]
    BadExecutionIndex(u64, u64),
    #[error("brute-force enumeration supports k <= 2, got {0}")]
    BruteForceDepth(usize),
    #[error("config must set exactly one of `noise` or `per_round_noise`")]
    AmbiguousNoise,
    #[error("no seed: set it in the config, pass --seed, or export PINGPONG_SEED")]
    MissingSeed,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

/// Cached canonical Clifford group (enumeration is deterministic).
pub fn canonical_cliffords() -> &'static CliffordGroup {
    static GROUP: OnceLock<CliffordGroup> = OnceLock::new();
    GROUP.get_or_init(|| CliffordGroup::enumerate().expect("closure of {H,S} has 24 elements"))
}

/// Noise attached to one round: the effective teleport-memory channel and
/// the gate-independent gate noise (applied before the perfect Clifford).
#[derive(Debug, Clone)]
pub struct RoundNoise {
    pub memory: QuantumChannel,
    pub gate_noise: QuantumChannel,
}

impl RoundNoise {
    pub fn perfect() -> Self {
        Self {
            memory: QuantumChannel::identity(2),
            gate_noise: QuantumChannel::identity(2),
        }
    }

    /// The composite per-round channel (gate noise after memory).
    pub fn composite(&self) -> Result<QuantumChannel> {
        Ok(self.gate_noise.compose_after(&self.memory)?)
    }
}

/// Physical timing parameters carried as opaque metadata.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TimingMeta {
    pub tau: f64,
    pub t_send: f64,
    pub t_m: f64,
    pub l_z: f64,
}

/// Fully validated test configuration.
#[derive(Debug, Clone)]
pub struct TestConfig {
    k: usize,
    n: u64,
    seed: u64,
    rounds: Vec<RoundNoise>,
    input_noise: Option<QuantumChannel>,
    timing: Option<TimingMeta>,
    digest: String,
}

impl TestConfig {
    pub fn new(
        k: usize,
        n: u64,
        seed: u64,
        rounds: Vec<RoundNoise>,
        input_noise: Option<QuantumChannel>,
        timing: Option<TimingMeta>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(ProtocolError::ZeroDepth);
        }
        if n == 0 {
            return Err(ProtocolError::ZeroExecutions);
        }
        if rounds.len() != k {
            return Err(ProtocolError::RoundCount {
                expected: k,
                got: rounds.len(),
            });
        }
        let digest = config_digest(k, n, seed, &rounds, &input_noise, &timing);
        Ok(Self {
            k,
            n,
            seed,
            rounds,
            input_noise,
            timing,
            digest,
        })
    }

    /// Same noise in every round.
    pub fn uniform(k: usize, n: u64, seed: u64, noise: RoundNoise) -> Result<Self> {
        Self::new(k, n, seed, vec![noise; k], None, None)
    }

    pub fn perfect(k: usize, n: u64, seed: u64) -> Result<Self> {
        Self::uniform(k, n, seed, RoundNoise::perfect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rounds(&self) -> &[RoundNoise] {
        &self.rounds
    }

    pub fn input_noise(&self) -> Option<&QuantumChannel> {
        self.input_noise.as_ref()
    }

    pub fn timing(&self) -> Option<&TimingMeta> {
        self.timing.as_ref()
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }
}

fn hash_channel(hasher: &mut Sha256, ch: &QuantumChannel) {
    hasher.update(b"ch:");
    for k in ch.kraus() {
        for e in k.entries() {
            hasher.update(e.re.to_bits().to_le_bytes());
            hasher.update(e.im.to_bits().to_le_bytes());
        }
        hasher.update(b"|");
    }
}

fn config_digest(
    k: usize,
    n: u64,
    seed: u64,
    rounds: &[RoundNoise],
    input_noise: &Option<QuantumChannel>,
    timing: &Option<TimingMeta>,
) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("k={k};n={n};seed={seed};"));
    for r in rounds {
        hash_channel(&mut hasher, &r.memory);
        hash_channel(&mut hasher, &r.gate_noise);
    }
    if let Some(ch) = input_noise {
        hasher.update(b"input:");
        hash_channel(&mut hasher, ch);
    }
    if let Some(t) = timing {
        hasher.update(format!(
            "t:{:x},{:x},{:x},{:x}",
            t.tau.to_bits(),
            t.t_send.to_bits(),
            t.t_m.to_bits(),
            t.l_z.to_bits()
        ));
    }
    let out = hasher.finalize();
    format!("{:x}", out)[..16].to_string()
}

/// Per-execution record: sampled depth, input state, gate string, the
/// verifier's success probability and the sampled outcome bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionRecord {
    pub i: u64,
    pub kappa: usize,
    pub state_idx: usize,
    pub gate_idxs: Vec<usize>,
    pub success_prob: f64,
    pub v: bool,
}

/// All records of one test run, replayable bit-exactly from (config, seed).
#[derive(Debug, Clone)]
pub struct Transcript {
    pub config_digest: String,
    pub seed: u64,
    pub k: usize,
    pub records: Vec<ExecutionRecord>,
}

impl Transcript {
    pub fn n(&self) -> u64 {
        self.records.len() as u64
    }

    /// Writes the stable transcript format: one header line followed by one
    /// CSV row per record with 12-significant-digit probabilities.
    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "# pingpong-transcript digest={} seed={} k={} n={}",
            self.config_digest,
            self.seed,
            self.k,
            self.records.len()
        )?;
        for r in &self.records {
            let gates = r
                .gate_idxs
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join("-");
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.i,
                r.kappa,
                r.state_idx,
                gates,
                format_sig12(r.success_prob),
                u8::from(r.v)
            )?;
        }
        Ok(())
    }
}

/// Fixed-width scientific formatting with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

fn execution_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

struct Draw {
    kappa: usize,
    state_idx: usize,
    gate_idxs: Vec<usize>,
    outcome_u: f64,
}

fn draw_execution(cfg_k: usize, seed: u64, i: u64) -> Draw {
    let mut rng = execution_rng(seed, i);
    let kappa = rng.gen_range(1..=cfg_k);
    let state_idx = rng.gen_range(0..6usize);
    let gate_idxs = (0..kappa).map(|_| rng.gen_range(0..24usize)).collect();
    let outcome_u = rng.gen::<f64>();
    Draw {
        kappa,
        state_idx,
        gate_idxs,
        outcome_u,
    }
}

fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(rho).expect("dims match").matmul(&u.adjoint()).expect("dims match")
}

/// The verifier's accept projector: the input state rotated by the ideal
/// Clifford string.
fn accept_projector(state_idx: usize, gate_idxs: &[usize]) -> ComplexMatrix {
    let group = canonical_cliffords();
    let mut target = pauli_eigenstates()[state_idx].projector();
    for &g in gate_idxs {
        target = conjugate(group.gate(g), &target);
    }
    target
}

/// Runs execution `i` (1-based) of the configured test.
pub fn run_execution(cfg: &TestConfig, i: u64) -> Result<ExecutionRecord> {
    if i == 0 || i > cfg.n {
        return Err(ProtocolError::BadExecutionIndex(i, cfg.n));
    }
    let draw = draw_execution(cfg.k, cfg.seed, i);
    let group = canonical_cliffords();

    let mut rho = DensityMatrix::from_pure(&pauli_eigenstates()[draw.state_idx]);
    if let Some(noise) = &cfg.input_noise {
        rho = noise.apply(&rho)?;
    }
    for (j, &g) in draw.gate_idxs.iter().enumerate() {
        let round = &cfg.rounds[j];
        rho = round.memory.apply(&rho)?;
        rho = round.gate_noise.apply(&rho)?;
        rho = DensityMatrix::new(conjugate(group.gate(g), rho.mat()))
            .map_err(ChannelError::from)?;
    }

    let target = accept_projector(draw.state_idx, &draw.gate_idxs);
    let p = rho
        .mat()
        .matmul(&target)
        .map_err(ChannelError::from)?
        .trace()
        .re
        .clamp(0.0, 1.0);
    Ok(ExecutionRecord {
        i,
        kappa: draw.kappa,
        state_idx: draw.state_idx,
        gate_idxs: draw.gate_idxs,
        success_prob: p,
        v: draw.outcome_u < p,
    })
}

/// Runs all `n` executions. Records may be computed concurrently; the
/// result is bit-identical to the serial order.
pub fn run_test(cfg: &TestConfig) -> Result<Transcript> {
    let records: std::result::Result<Vec<ExecutionRecord>, ProtocolError> = (1..=cfg.n)
        .into_par_iter()
        .map(|i| run_execution(cfg, i))
        .collect();
    Ok(Transcript {
        config_digest: cfg.digest.clone(),
        seed: cfg.seed,
        k: cfg.k,
        records: records?,
    })
}

/// Exact average success probability, no sampling.
///
/// Averaging the accept probability over states and gate strings turns
/// every per-round composite into its twirl, a depolarizing channel whose
/// parameters multiply under composition:
/// P = (1/k) sum_kappa (1 + prod_{j<=kappa} p_j)/2, with
/// p_j = 2 Fbar(gate_noise_j . memory_j) - 1 and the input noise folded
/// into round 1.
pub fn analytic_success_prob(cfg: &TestConfig) -> Result<f64> {
    let params = round_twirl_parameters(cfg)?;
    let mut acc = 0.0;
    let mut prod = 1.0;
    for p in &params {
        prod *= p;
        acc += 0.5 * (1.0 + prod);
    }
    Ok(acc / cfg.k as f64)
}

/// Exact double-averaged fidelity of the depth-`kappa` test (fidelity
/// averaged over states and over gate strings).
pub fn exact_depth_fidelity(cfg: &TestConfig, kappa: usize) -> Result<f64> {
    let params = round_twirl_parameters(cfg)?;
    let prod: f64 = params[..kappa].iter().product();
    Ok(0.5 * (1.0 + prod))
}

fn round_twirl_parameters(cfg: &TestConfig) -> Result<Vec<f64>> {
    cfg.rounds
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let mut composite = r.composite()?;
            if j == 0 {
                if let Some(input) = &cfg.input_noise {
                    composite = composite.compose_after(input)?;
                }
            }
            Ok(twirl_parameter(&composite)?)
        })
        .collect()
}

/// Full enumeration of the depth/state/string triple average by direct
/// channel evolution; the independent oracle for [`analytic_success_prob`].
///
/// Enumeration budget: 6 * (24 + 24^2) evaluations, so `k <= 2` only.
pub fn exact_success_prob_bruteforce(cfg: &TestConfig) -> Result<f64> {
    if cfg.k > 2 {
        return Err(ProtocolError::BruteForceDepth(cfg.k));
    }
    let group = canonical_cliffords();
    let states = pauli_eigenstates();
    let mut depth_avg = 0.0;
    for kappa in 1..=cfg.k {
        let mut string_avg = 0.0;
        let strings = 24usize.pow(kappa as u32);
        for code in 0..strings {
            let gate_idxs: Vec<usize> = (0..kappa).map(|j| (code / 24usize.pow(j as u32)) % 24).collect();
            for psi in &states {
                let mut rho = DensityMatrix::from_pure(psi);
                if let Some(noise) = &cfg.input_noise {
                    rho = noise.apply(&rho)?;
                }
                let mut target = psi.projector();
                for (j, &g) in gate_idxs.iter().enumerate() {
                    let round = &cfg.rounds[j];
                    rho = round.memory.apply(&rho)?;
                    rho = round.gate_noise.apply(&rho)?;
                    rho = DensityMatrix::new(conjugate(group.gate(g), rho.mat()))
                        .map_err(ChannelError::from)?;
                    target = conjugate(group.gate(g), &target);
                }
                string_avg += rho
                    .mat()
                    .matmul(&target)
                    .map_err(ChannelError::from)?
                    .trace()
                    .re;
            }
        }
        depth_avg += string_avg / (strings as f64 * 6.0);
    }
    Ok(depth_avg / cfg.k as f64)
}

/// Round-noise literal in JSON config files. Omitted channels mean
/// noiseless.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RoundNoiseSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub memory: Option<ChannelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_noise: Option<ChannelSpec>,
}

impl RoundNoiseSpec {
    pub fn build(&self) -> Result<RoundNoise> {
        let memory = match &self.memory {
            Some(spec) => spec.build()?,
            None => QuantumChannel::identity(2),
        };
        let gate_noise = match &self.gate_noise {
            Some(spec) => spec.build()?,
            None => QuantumChannel::identity(2),
        };
        Ok(RoundNoise { memory, gate_noise })
    }
}

/// Test configuration literal in JSON config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSpec {
    pub k: usize,
    pub n: u64,
    /// Master seed; may be omitted in the file and resolved by the caller
    /// (CLI flag or PINGPONG_SEED fallback).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Uniform noise replicated over all rounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<RoundNoiseSpec>,
    /// Explicit per-round noise; length must equal `k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_round_noise: Option<Vec<RoundNoiseSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_noise: Option<ChannelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingMeta>,
}

impl TestSpec {
    pub fn build(&self) -> Result<TestConfig> {
        let seed = self.seed.ok_or(ProtocolError::MissingSeed)?;
        let rounds = match (&self.noise, &self.per_round_noise) {
            (Some(uniform), None) => vec![uniform.build()?; self.k.max(1)],
            (None, Some(list)) => {
                let built: Result<Vec<RoundNoise>> = list.iter().map(|s| s.build()).collect();
                built?
            }
            (None, None) => vec![RoundNoise::perfect(); self.k.max(1)],
            (Some(_), Some(_)) => return Err(ProtocolError::AmbiguousNoise),
        };
        let input_noise = match &self.input_noise {
            Some(spec) => Some(spec.build()?),
            None => None,
        };
        TestConfig::new(self.k, self.n, seed, rounds, input_noise, self.timing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::PauliChannel;

    fn uniform_cfg(k: usize, n: u64, seed: u64, memory: QuantumChannel) -> TestConfig {
        TestConfig::uniform(
            k,
            n,
            seed,
            RoundNoise {
                memory,
                gate_noise: QuantumChannel::identity(2),
            },
        )
        .unwrap()
    }

    #[test]
    fn perfect_devices_always_win() {
        let cfg = TestConfig::perfect(4, 50, 99).unwrap();
        let t = run_test(&cfg).unwrap();
        for r in &t.records {
            assert_eq!(r.success_prob, 1.0, "execution {}", r.i);
            assert!(r.v);
        }
    }

    #[test]
    fn fully_depolarizing_memory_gives_half() {
        let cfg = uniform_cfg(3, 20, 1, QuantumChannel::depolarizing(0.0).unwrap());
        let t = run_test(&cfg).unwrap();
        for r in &t.records {
            assert!((r.success_prob - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_fixes_z_eigenstate_at_identity_gate() {
        // kappa=1, memory = dephasing(q), psi = |0>, C_1 = I gives success 1.
        let cfg = uniform_cfg(1, 1, 0, QuantumChannel::dephasing(0.8).unwrap());
        let group = canonical_cliffords();
        let psi = pauli_eigenstates()[0].clone();
        let rho = cfg.rounds()[0]
            .memory
            .apply(&DensityMatrix::from_pure(&psi))
            .unwrap();
        let rho = DensityMatrix::new(conjugate(group.gate(0), rho.mat())).unwrap();
        let target = conjugate(group.gate(0), &psi.projector());
        let p = rho.mat().matmul(&target).unwrap().trace().re;
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transcripts_are_deterministic() {
        let cfg = uniform_cfg(3, 25, 1234, QuantumChannel::dephasing(0.9).unwrap());
        let a = run_test(&cfg).unwrap();
        let b = run_test(&cfg).unwrap();
        assert_eq!(a.records, b.records);

        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.write_to(&mut buf_a).unwrap();
        b.write_to(&mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);

        // A different seed changes the draws.
        let cfg2 = uniform_cfg(3, 25, 1235, QuantumChannel::dephasing(0.9).unwrap());
        let c = run_test(&cfg2).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn serial_matches_parallel() {
        let cfg = uniform_cfg(2, 40, 7, QuantumChannel::depolarizing(0.7).unwrap());
        let parallel = run_test(&cfg).unwrap();
        let serial: Vec<ExecutionRecord> = (1..=cfg.n())
            .map(|i| run_execution(&cfg, i).unwrap())
            .collect();
        assert_eq!(parallel.records, serial);
    }

    #[test]
    fn analytic_equals_bruteforce_k1_dephasing() {
        let cfg = uniform_cfg(1, 1, 0, QuantumChannel::dephasing(0.8).unwrap());
        let exact = exact_success_prob_bruteforce(&cfg).unwrap();
        let analytic = analytic_success_prob(&cfg).unwrap();
        assert!((exact - analytic).abs() < 1e-12);
        // Frozen from the oracle: depth-1 average is Fbar = q + (1-q)/3.
        assert!((exact - (0.8 + 0.2 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn analytic_equals_bruteforce_k2_depolarizing() {
        // Enumeration vs the twirl-composition closed form: for per-round
        // depolarizing(p) the depth-kappa fidelity is (1 + p^kappa)/2, so
        // P = ((1+p)/2 + (1+p^2)/2)/2.
        let p = 0.95;
        let cfg = uniform_cfg(2, 1, 0, QuantumChannel::depolarizing(p).unwrap());
        let exact = exact_success_prob_bruteforce(&cfg).unwrap();
        let analytic = analytic_success_prob(&cfg).unwrap();
        assert!((exact - analytic).abs() < 1e-10);
        let closed = 0.5 * ((1.0 + p) / 2.0 + (1.0 + p * p) / 2.0);
        assert!((exact - closed).abs() < 1e-12);
    }

    #[test]
    fn bruteforce_rejects_large_k() {
        let cfg = TestConfig::perfect(3, 1, 0).unwrap();
        assert!(matches!(
            exact_success_prob_bruteforce(&cfg),
            Err(ProtocolError::BruteForceDepth(3))
        ));
    }

    #[test]
    fn perfect_bruteforce_is_one() {
        let cfg = TestConfig::perfect(2, 1, 0).unwrap();
        assert!((exact_success_prob_bruteforce(&cfg).unwrap() - 1.0).abs() < 1e-12);
        assert!((analytic_success_prob(&cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn success_prob_invariant_under_teleport_wrap_of_pauli_memory() {
        // Pauli channels are fixed points of the teleport twirl, so
        // replacing memory by teleport_memory(memory) changes nothing.
        let mem = PauliChannel::dephasing(0.7).unwrap().to_channel();
        let wrapped = crate::channels::teleport_memory(&mem).unwrap();
        let cfg_a = uniform_cfg(2, 1, 0, mem);
        let cfg_b = uniform_cfg(2, 1, 0, wrapped);
        let a = exact_success_prob_bruteforce(&cfg_a).unwrap();
        let b = exact_success_prob_bruteforce(&cfg_b).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            TestConfig::perfect(0, 5, 0),
            Err(ProtocolError::ZeroDepth)
        ));
        assert!(matches!(
            TestConfig::perfect(2, 0, 0),
            Err(ProtocolError::ZeroExecutions)
        ));
        assert!(matches!(
            TestConfig::new(3, 5, 0, vec![RoundNoise::perfect()], None, None),
            Err(ProtocolError::RoundCount { expected: 3, got: 1 })
        ));
        let cfg = TestConfig::perfect(2, 5, 0).unwrap();
        assert!(matches!(
            run_execution(&cfg, 0),
            Err(ProtocolError::BadExecutionIndex(0, 5))
        ));
        assert!(run_execution(&cfg, 6).is_err());
    }

    #[test]
    fn digest_tracks_config_content() {
        let a = TestConfig::perfect(2, 5, 0).unwrap();
        let b = TestConfig::perfect(2, 5, 0).unwrap();
        let c = TestConfig::perfect(2, 5, 1).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
        let d = uniform_cfg(2, 5, 0, QuantumChannel::dephasing(0.5).unwrap());
        assert_ne!(a.digest(), d.digest());
    }

    #[test]
    fn spec_build_round_trip() {
        let json = r#"{
            "k": 2, "n": 10, "seed": 5,
            "noise": {"memory": {"kind": "depolarizing", "p": 0.9}},
            "timing": {"tau": 1.0, "t_send": 0.3, "t_m": 0.5, "l_z": 0.2}
        }"#;
        let spec: TestSpec = serde_json::from_str(json).unwrap();
        let cfg = spec.build().unwrap();
        assert_eq!(cfg.k(), 2);
        assert_eq!(cfg.timing().unwrap().tau, 1.0);

        let bad = r#"{"k": 2, "n": 10, "seed": 5, "unknown": 1}"#;
        assert!(serde_json::from_str::<TestSpec>(bad).is_err());

        let ambiguous: TestSpec = serde_json::from_str(
            r#"{"k": 1, "n": 1, "seed": 0,
                "noise": {}, "per_round_noise": [{}]}"#,
        )
        .unwrap();
        assert!(matches!(ambiguous.build(), Err(ProtocolError::AmbiguousNoise)));
    }

    #[test]
    fn transcript_format_is_frozen() {
        let cfg = uniform_cfg(2, 3, 42, QuantumChannel::depolarizing(0.9).unwrap());
        let t = run_test(&cfg).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with(&format!(
            "# pingpong-transcript digest={} seed=42 k=2 n=3",
            cfg.digest()
        )));
        for (line, r) in lines.zip(&t.records) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 6);
            assert_eq!(cols[0], r.i.to_string());
            assert_eq!(cols[4], format_sig12(r.success_prob));
        }
    }
}
