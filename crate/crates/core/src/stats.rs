//! Winning-rate estimators over transcripts and Hoeffding-style confidence
//! machinery.
//!
//! The two-sided convention 1 - 2 exp(-2 n eps^2) is used for estimation;
//! the one-sided 1 - exp(-n eps^2) appears only inside completeness and
//! soundness verdicts (see `certify`), matching how each bound is stated.

use crate::protocol::Transcript;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("parameter {name} = {value} outside its valid range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("filter selected no records")]
    EmptySelection,
}

pub type Result<T> = std::result::Result<T, StatsError>;

/// An empirical winning rate with its Hoeffding half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    /// Fraction of wins over the selected records.
    pub rate: f64,
    /// Number of records the estimate uses.
    pub n_used: u64,
    /// Two-sided Hoeffding half-width at the stated confidence; may exceed
    /// 1 in vacuous regimes and is reported unclamped.
    pub epsilon: f64,
    /// 1 - delta.
    pub confidence: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(StatsError::OutOfRange {
            name: "delta",
            value: delta,
        });
    }
    Ok(())
}

/// Two-sided Hoeffding half-width sqrt(ln(2/delta) / (2n)).
pub fn hoeffding_epsilon(n: u64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(StatsError::OutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    check_delta(delta)?;
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// Minimum executions for accuracy `epsilon` at confidence 1 - delta:
/// ceil(ln(2/delta) / (2 epsilon^2)).
pub fn min_samples(epsilon: f64, delta: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StatsError::OutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    check_delta(delta)?;
    Ok(((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as u64)
}

fn estimate<'a, I>(records: I, delta: f64) -> Result<RateEstimate>
where
    I: Iterator<Item = &'a crate::protocol::ExecutionRecord>,
{
    check_delta(delta)?;
    let mut n = 0u64;
    let mut wins = 0u64;
    for r in records {
        n += 1;
        wins += u64::from(r.v);
    }
    if n == 0 {
        return Err(StatsError::EmptySelection);
    }
    Ok(RateEstimate {
        rate: wins as f64 / n as f64,
        n_used: n,
        epsilon: hoeffding_epsilon(n, delta)?,
        confidence: 1.0 - delta,
    })
}

/// Winning rate over all executions.
pub fn rate_overall(t: &Transcript, delta: f64) -> Result<RateEstimate> {
    estimate(t.records.iter(), delta)
}

/// Winning rate over executions of a fixed depth.
pub fn rate_by_depth(t: &Transcript, kappa: usize, delta: f64) -> Result<RateEstimate> {
    estimate(t.records.iter().filter(|r| r.kappa == kappa), delta)
}

/// Winning rate over executions matching a fixed depth and gate string.
pub fn rate_by_string(
    t: &Transcript,
    kappa: usize,
    gate_idxs: &[usize],
    delta: f64,
) -> Result<RateEstimate> {
    estimate(
        t.records
            .iter()
            .filter(|r| r.kappa == kappa && r.gate_idxs == gate_idxs),
        delta,
    )
}
