//! Dishonest-prover strategies for soundness experiments.
//!
//! An m-cheating strategy fixes, before the test starts, the set of rounds
//! in which a sending channel is used. At a sending round the receiving
//! party obtains the sender's state intact; at a non-sending round nothing
//! crosses and the receiver falls back on the best local substitute. Both
//! parties' marginals are tracked; the verifier always measures the party
//! the alternation schedule designates at the sampled depth. Cheaters get
//! noiseless devices, which is the most stringent setting for the bound.

use crate::channels::{ChannelError, QuantumChannel};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::protocol::{self, ExecutionRecord, ProtocolError, TestConfig};
use crate::stats;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("send round {0} outside 1..={1}")]
    SendRoundOutOfRange(usize, usize),
    #[error("send_rounds {0:?} inconsistent with m={1}")]
    BadSendRounds(String, usize),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Stats(#[from] stats::StatsError),
}

pub type Result<T> = std::result::Result<T, AdversaryError>;

/// What the receiving party holds after a round with no sending channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    /// Optimal universal cloning: the receiver's marginal is the held state
    /// with its Bloch vector scaled by 2/3 (clone fidelity 5/6).
    #[serde(rename = "clone")]
    OptimalClone,
    /// Measure in the Z basis, communicate nothing, prepare the diagonal:
    /// average fidelity 2/3 over the Pauli states.
    #[serde(rename = "classical")]
    ClassicalMeasureResend,
    /// Fabricate the maximally mixed state.
    #[serde(rename = "mixed")]
    FabricateMixed,
}

impl Fallback {
    fn receiver_marginal(&self, held: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Fallback::OptimalClone => {
                // Bloch shrink by 2/3 == depolarizing with p = 2/3.
                Ok(QuantumChannel::depolarizing(2.0 / 3.0)?.apply(held)?)
            }
            Fallback::ClassicalMeasureResend => {
                let mut diag = ComplexMatrix::zeros(2);
                diag.set(0, 0, held.mat().get(0, 0));
                diag.set(1, 1, held.mat().get(1, 1));
                Ok(DensityMatrix::new(diag).map_err(ChannelError::from)?)
            }
            Fallback::FabricateMixed => Ok(DensityMatrix::maximally_mixed(2)),
        }
    }
}

/// An m-cheating configuration, fixed prior to the test.
#[derive(Debug, Clone)]
pub struct CheatStrategy {
    send_rounds: BTreeSet<usize>,
    fallback: Fallback,
}

impl CheatStrategy {
    pub fn new(send_rounds: BTreeSet<usize>, fallback: Fallback, k: usize) -> Result<Self> {
        for &r in &send_rounds {
            if r == 0 || r > k {
                return Err(AdversaryError::SendRoundOutOfRange(r, k));
            }
        }
        Ok(Self {
            send_rounds,
            fallback,
        })
    }

    /// Sending channels in rounds 1..=m.
    pub fn first_m(m: usize, fallback: Fallback, k: usize) -> Result<Self> {
        Self::new((1..=m).collect(), fallback, k)
    }

    pub fn m(&self) -> usize {
        self.send_rounds.len()
    }

    pub fn send_rounds(&self) -> &BTreeSet<usize> {
        &self.send_rounds
    }

    pub fn fallback(&self) -> Fallback {
        self.fallback
    }
}

/// Runs one cheating execution against the verifier's sampling.
///
/// The verifier's draws (depth, state, gate string, outcome threshold) use
/// the same counter-based streams as the honest engine, so honest and
/// cheating runs are comparable seed-for-seed.
pub fn run_cheating_execution(
    cfg: &TestConfig,
    strat: &CheatStrategy,
    i: u64,
) -> Result<ExecutionRecord> {
    if i == 0 || i > cfg.n() {
        return Err(AdversaryError::Protocol(ProtocolError::BadExecutionIndex(
            i,
            cfg.n(),
        )));
    }
    let mut rng = cheat_rng(cfg.seed(), i);
    let kappa = rng.gen_range(1..=cfg.k());
    let state_idx = rng.gen_range(0..6usize);
    let gate_idxs: Vec<usize> = (0..kappa).map(|_| rng.gen_range(0..24usize)).collect();
    let outcome_u = rng.gen::<f64>();

    let group = protocol::canonical_cliffords();
    let states = crate::channels::pauli_eigenstates();

    // `held` is the designated outputting party's marginal after each
    // round; the previous holder keeps their state but the alternation
    // schedule never asks them again.
    let mut held = DensityMatrix::from_pure(&states[state_idx]);
    let mut target = states[state_idx].projector();
    for (j, &g) in gate_idxs.iter().enumerate() {
        let round = j + 1;
        if !strat.send_rounds.contains(&round) {
            held = strat.fallback.receiver_marginal(&held)?;
        }
        let gate = group.gate(g);
        let rotated = gate
            .matmul(held.mat())
            .expect("dims match")
            .matmul(&gate.adjoint())
            .expect("dims match");
        held = DensityMatrix::new(rotated).map_err(ChannelError::from)?;
        target = gate
            .matmul(&target)
            .expect("dims match")
            .matmul(&gate.adjoint())
            .expect("dims match");
    }

    let p = held
        .mat()
        .matmul(&target)
        .expect("dims match")
        .trace()
        .re
        .clamp(0.0, 1.0);
    Ok(ExecutionRecord {
        i,
        kappa,
        state_idx,
        gate_idxs,
        success_prob: p,
        v: outcome_u < p,
    })
}

fn cheat_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Outcome of a full soundness experiment against one strategy.
#[derive(Debug, Clone, Serialize)]
pub struct SoundnessOutcome {
    pub rate: f64,
    pub bound: f64,
    pub epsilon: f64,
    pub violated: bool,
}

/// Runs `n` cheating executions and evaluates the m-cheating rate bound
/// R <= (1/k)(m + (5/6)(k - m)) + eps at the requested confidence.
pub fn soundness_experiment(
    cfg: &TestConfig,
    strat: &CheatStrategy,
    delta: f64,
) -> Result<SoundnessOutcome> {
    let records: std::result::Result<Vec<ExecutionRecord>, AdversaryError> = (1..=cfg.n())
        .into_par_iter()
        .map(|i| run_cheating_execution(cfg, strat, i))
        .collect();
    let records = records?;
    let wins = records.iter().filter(|r| r.v).count() as f64;
    let rate = wins / records.len() as f64;
    let epsilon = stats::hoeffding_epsilon(records.len() as u64, delta)?;
    let (m, k) = (strat.m() as f64, cfg.k() as f64);
    let bound = (m + (5.0 / 6.0) * (k - m)) / k + epsilon;
    Ok(SoundnessOutcome {
        rate,
        bound,
        epsilon,
        violated: rate > bound,
    })
}

/// Strategy literal in JSON config files:
/// `{"m": 1, "send_rounds": [1] | "first_m", "fallback": "clone"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub m: usize,
    #[serde(default)]
    pub send_rounds: SendRoundsSpec,
    pub fallback: Fallback,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SendRoundsSpec {
    Keyword(String),
    Explicit(Vec<usize>),
}

impl Default for SendRoundsSpec {
    fn default() -> Self {
        Self::Keyword("first_m".to_string())
    }
}

impl StrategySpec {
    pub fn build(&self, k: usize) -> Result<CheatStrategy> {
        match &self.send_rounds {
            SendRoundsSpec::Keyword(word) if word == "first_m" => {
                CheatStrategy::first_m(self.m, self.fallback, k)
            }
            SendRoundsSpec::Keyword(word) => {
                Err(AdversaryError::BadSendRounds(word.clone(), self.m))
            }
            SendRoundsSpec::Explicit(rounds) => {
                let set: BTreeSet<usize> = rounds.iter().copied().collect();
                if set.len() != self.m {
                    return Err(AdversaryError::BadSendRounds(
                        format!("{rounds:?}"),
                        self.m,
                    ));
                }
                CheatStrategy::new(set, self.fallback, k)
            }
        }
    }
}

/// Average fidelity of the cheating receiver's marginal against the held
/// ideal state, averaged over the six Pauli states. Oracle for the
/// per-fallback constants: 5/6 cloning, 2/3 measure-resend, 1/2 mixed.
pub fn fallback_avg_fidelity(fallback: Fallback) -> Result<f64> {
    let states = crate::channels::pauli_eigenstates();
    let mut acc = 0.0;
    for psi in &states {
        let held = DensityMatrix::from_pure(psi);
        let marginal = fallback.receiver_marginal(&held)?;
        acc += marginal
            .mat()
            .matmul(&psi.projector())
            .expect("dims match")
            .trace()
            .re;
    }
    Ok(acc / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::overlap;
    use num_complex::Complex64;

    #[test]
    fn fallback_fidelity_constants() {
        assert!((fallback_avg_fidelity(Fallback::OptimalClone).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!(
            (fallback_avg_fidelity(Fallback::ClassicalMeasureResend).unwrap() - 2.0 / 3.0).abs()
                < 1e-15
        );
        assert!((fallback_avg_fidelity(Fallback::FabricateMixed).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clone_marginal_is_bloch_shrink() {
        // Bloch contraction check against a hand-built 2/3-shrunk state.
        let psi = &crate::channels::pauli_eigenstates()[2];
        let held = DensityMatrix::from_pure(psi);
        let marginal = Fallback::OptimalClone.receiver_marginal(&held).unwrap();
        let expect = psi
            .projector()
            .scale(Complex64::new(2.0 / 3.0, 0.0))
            .add(&ComplexMatrix::identity(2).scale(Complex64::new(1.0 / 6.0, 0.0)))
            .unwrap();
        assert!(marginal.mat().max_abs_diff(&expect) < 1e-12);
        let f = overlap(marginal.mat(), &psi.projector()).unwrap();
        assert!((f - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn all_send_rounds_reduce_to_honest_perfect() {
        let k = 3;
        let cfg = TestConfig::perfect(k, 30, 21).unwrap();
        let strat = CheatStrategy::first_m(k, Fallback::FabricateMixed, k).unwrap();
        for i in 1..=cfg.n() {
            let r = run_cheating_execution(&cfg, &strat, i).unwrap();
            assert_eq!(r.success_prob, 1.0);
            assert!(r.v);
        }
    }

    #[test]
    fn fabricate_mixed_gives_half() {
        let cfg = TestConfig::perfect(1, 20, 5).unwrap();
        let strat = CheatStrategy::first_m(0, Fallback::FabricateMixed, 1).unwrap();
        for i in 1..=cfg.n() {
            let r = run_cheating_execution(&cfg, &strat, i).unwrap();
            assert!((r.success_prob - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn clone_without_sending_has_success_five_sixths() {
        // k=1, m=0: the receiver holds a 2/3-shrunk clone; after the
        // Clifford the overlap with the ideal target is 5/6 for every draw.
        let cfg = TestConfig::perfect(1, 50, 17).unwrap();
        let strat = CheatStrategy::first_m(0, Fallback::OptimalClone, 1).unwrap();
        for i in 1..=cfg.n() {
            let r = run_cheating_execution(&cfg, &strat, i).unwrap();
            assert!((r.success_prob - 5.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn soundness_bound_holds_on_small_grid() {
        for (k, m) in [(1usize, 0usize), (2, 1), (3, 2)] {
            for fb in [
                Fallback::OptimalClone,
                Fallback::ClassicalMeasureResend,
                Fallback::FabricateMixed,
            ] {
                let cfg = TestConfig::perfect(k, 20_000, 31).unwrap();
                let strat = CheatStrategy::first_m(m, fb, k).unwrap();
                let out = soundness_experiment(&cfg, &strat, 0.01).unwrap();
                assert!(
                    !out.violated,
                    "k={k} m={m} {fb:?}: R={} bound={}",
                    out.rate, out.bound
                );
            }
        }
    }

    #[test]
    fn strategy_validation_and_spec() {
        assert!(CheatStrategy::first_m(3, Fallback::OptimalClone, 2).is_err());
        let spec: StrategySpec = serde_json::from_str(
            r#"{"m": 1, "send_rounds": [2], "fallback": "classical"}"#,
        )
        .unwrap();
        let strat = spec.build(2).unwrap();
        assert_eq!(strat.m(), 1);
        assert!(strat.send_rounds().contains(&2));

        let keyword: StrategySpec = serde_json::from_str(
            r#"{"m": 2, "send_rounds": "first_m", "fallback": "clone"}"#,
        )
        .unwrap();
        let strat = keyword.build(4).unwrap();
        assert_eq!(strat.send_rounds().iter().copied().collect::<Vec<_>>(), vec![1, 2]);

        let defaulted: StrategySpec =
            serde_json::from_str(r#"{"m": 1, "fallback": "mixed"}"#).unwrap();
        assert_eq!(defaulted.build(3).unwrap().m(), 1);
    }
}
