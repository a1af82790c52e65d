//! Monte Carlo realization of effective valuations.
//!
//! Outcome pairs are drawn jointly from the exact distribution
//! p(i, j) = Tr(ρ P_i ⊗ Q_j). Randomness comes from ChaCha8 with one
//! counter-based substream per (pair index, batch index), so batches can
//! run in parallel and still reproduce the serial tallies exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::powers::Context;
use crate::relations::{assess_pair, decide, joint_outcome_distribution, tested_pairs, EffectiveOutcome, JointScenario, RelationMode, TestedPair};

/// Recorded in report metadata.
pub const PRNG_NAME: &str = "ChaCha8Rng(seed_from_u64), stream = pair_index << 32 | batch_index";

/// Shots per substream.
pub const BATCH_SHOTS: u64 = 8192;

/// Cells below this probability are never drawn (floating-point noise).
const ZERO_FLOOR: f64 = 1e-12;

/// Draws `shots` samples from a joint table; returns outcome counts.
pub fn sample_table(probs: &[Vec<f64>], shots: u64, seed: u64, pair_index: u32) -> Vec<Vec<u64>> {
    let cols = probs.first().map_or(0, Vec::len);
    let weights: Vec<f64> = probs
        .iter()
        .flatten()
        .map(|&p| if p < ZERO_FLOOR { 0.0 } else { p })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }
    let last_live = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);

    let batches = shots.div_ceil(BATCH_SHOTS);
    let counts = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((pair_index as u64) << 32) | batch);
            let n = BATCH_SHOTS.min(shots - batch * BATCH_SHOTS);
            let mut local = vec![0u64; weights.len()];
            for _ in 0..n {
                let u: f64 = rng.random();
                // first cell whose cumulative mass exceeds u; zero-weight
                // cells share their predecessor's bound and are skipped
                let k = cumulative.partition_point(|&c| c <= u).min(last_live);
                local[k] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; weights.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    counts.chunks(cols.max(1)).map(<[u64]>::to_vec).collect()
}

/// Tallies `shots` joint outcomes of the pair (c1, c2).
pub fn sample_joint(
    s: &JointScenario,
    c1: &Context,
    c2: &Context,
    shots: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<Vec<u64>>> {
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let table = joint_outcome_distribution(s, c1, c2, tol)?;
    Ok(sample_table(&table, shots, seed, 0))
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub seed: u64,
    pub shots: u64,
    pub mode: RelationMode,
    pub pairs: Vec<TestedPair>,
    pub exact: Vec<Vec<Vec<f64>>>,
    pub tallies: Vec<Vec<Vec<u64>>>,
}

/// Samples every pair the scenario's mode tests.
pub fn run_experiment(s: &JointScenario, shots: u64, seed: u64, tol: &Tolerances) -> Result<ExperimentRun> {
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let pairs = tested_pairs(s, tol)?;
    let mut exact = Vec::with_capacity(pairs.len());
    let mut tallies = Vec::with_capacity(pairs.len());
    for (k, p) in pairs.iter().enumerate() {
        let table = joint_outcome_distribution(s, &p.a, &p.b, tol)?;
        tallies.push(sample_table(&table, shots, seed, k as u32));
        exact.push(table);
    }
    Ok(ExperimentRun {
        seed,
        shots,
        mode: s.mode,
        pairs,
        exact,
        tallies,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    /// Total variation between empirical frequencies and the exact table.
    pub per_pair_tv: Vec<f64>,
    pub empirical_effective: bool,
    pub empirical: EffectiveOutcome,
    /// Largest |count − np| / √(np(1−p)) over cells with 0 < p < 1.
    pub z_worst: f64,
    pub stat_threshold: f64,
}

/// Applies the effective-relation rule to sampled frequencies.
pub fn empirical_verdict(run: &ExperimentRun, stat_threshold: f64) -> Result<ConvergenceReport> {
    if run.shots < 100 {
        return Err(Error::Validation(format!(
            "empirical verdicts need at least 100 shots per pair, got {}",
            run.shots
        )));
    }
    let n = run.shots as f64;
    let mut per_pair_tv = Vec::with_capacity(run.pairs.len());
    let mut assessments = Vec::with_capacity(run.pairs.len());
    let mut z_worst: f64 = 0.0;
    for ((pair, tally), exact) in run.pairs.iter().zip(&run.tallies).zip(&run.exact) {
        let freq: Vec<Vec<f64>> = tally
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / n).collect())
            .collect();
        let tv = 0.5
            * freq
                .iter()
                .flatten()
                .zip(exact.iter().flatten())
                .map(|(f, p)| (f - p).abs())
                .sum::<f64>();
        per_pair_tv.push(tv.clamp(0.0, 1.0));
        for (row_c, row_p) in tally.iter().zip(exact) {
            for (&c, &p) in row_c.iter().zip(row_p) {
                if p > ZERO_FLOOR && p < 1.0 - ZERO_FLOOR {
                    let z = (c as f64 - n * p).abs() / (n * p * (1.0 - p)).sqrt();
                    z_worst = z_worst.max(z);
                }
            }
        }
        assessments.push(assess_pair(&freq, &pair.matching, stat_threshold));
    }
    let empirical = decide(run.mode, &run.pairs, &assessments);
    Ok(ConvergenceReport {
        per_pair_tv,
        empirical_effective: empirical.is_related(),
        empirical,
        z_worst,
        stat_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_distribution() {
        let t = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        for seed in [0, 1, 99] {
            assert_eq!(sample_table(&t, 1000, seed, 0), vec![vec![1000, 0], vec![0, 0]]);
        }
    }

    #[test]
    fn zero_cells_are_never_drawn() {
        let t = vec![vec![0.5, 0.0], vec![1e-17, 0.5]];
        let c = sample_table(&t, 50_000, 3, 0);
        assert_eq!(c[0][1], 0);
        assert_eq!(c[1][0], 0);
        assert_eq!(c[0][0] + c[1][1], 50_000);
    }

    #[test]
    fn reproducible_and_stream_separated() {
        let t = vec![vec![0.25; 2]; 2];
        let a = sample_table(&t, 20_000, 42, 0);
        assert_eq!(a, sample_table(&t, 20_000, 42, 0));
        assert_ne!(a, sample_table(&t, 20_000, 42, 1));
        assert_ne!(a, sample_table(&t, 20_000, 43, 0));
        assert_eq!(a.iter().flatten().sum::<u64>(), 20_000);
    }

    #[test]
    fn last_cell_with_zero_weight_gets_nothing() {
        let t = vec![vec![0.3, 0.7, 0.0]];
        let c = sample_table(&t, 10_000, 5, 0);
        assert_eq!(c[0][2], 0);
    }
}
