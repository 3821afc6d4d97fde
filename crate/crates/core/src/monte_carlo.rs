//! Continuous-time Monte Carlo simulation of event overlap.
//!
//! Each trial draws occurrence start times for both events uniformly from
//! the valid placement polytope `{0 <= x_1 < ... < x_n < T, gaps >= t}`
//! (occurrences may overhang past the end of the window) and checks whether
//! any two occurrences intersect. Trials are partitioned into fixed-size
//! chunks, each with its own random substream derived from `(seed, chunk)`,
//! so the result is bit-identical regardless of thread count or execution
//! order.

use crate::domain::{FeasibilityClass, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("trial count must be positive")]
    ZeroTrials,
    #[error("chunk size must be positive")]
    ZeroChunkSize,
    #[error("simulation requires a NORMAL scenario, got {0:?}")]
    NotNormal(FeasibilityClass),
    #[error("no valid placement: total time {total_time} cannot hold {count} occurrences of duration {duration}")]
    NoValidPlacement {
        total_time: f64,
        duration: f64,
        count: u64,
    },
}

/// Sorted start times of one event's occurrences; consecutive starts are at
/// least `duration` apart and all lie in `[0, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSample {
    starts: Vec<f64>,
    duration: f64,
}

impl PlacementSample {
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Draws a uniform sample from the placement polytope by the deflate/inflate
/// construction: `n` independent uniforms on `[0, T - (n-1) t)` are sorted
/// and the i-th is shifted by `(i-1) t`.
pub fn sample_placements(
    total_time: f64,
    duration: f64,
    count: u64,
    rng: &mut impl Rng,
) -> Result<PlacementSample, SimulationError> {
    let mut starts = Vec::with_capacity(count as usize);
    sample_starts_into(&mut starts, total_time, duration, count, rng)?;
    Ok(PlacementSample { starts, duration })
}

fn sample_starts_into(
    starts: &mut Vec<f64>,
    total_time: f64,
    duration: f64,
    count: u64,
    rng: &mut impl Rng,
) -> Result<(), SimulationError> {
    starts.clear();
    if count == 0 {
        return Ok(());
    }
    let span = total_time - (count - 1) as f64 * duration;
    if span <= 0.0 {
        return Err(SimulationError::NoValidPlacement {
            total_time,
            duration,
            count,
        });
    }
    for _ in 0..count {
        starts.push(rng.gen::<f64>() * span);
    }
    starts.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    for (i, s) in starts.iter_mut().enumerate() {
        *s += i as f64 * duration;
    }
    Ok(())
}

/// True iff some A occurrence and some B occurrence intersect on a set of
/// positive length. Intervals are half-open, so mere touching does not count.
pub fn has_overlap(a: &PlacementSample, b: &PlacementSample) -> bool {
    overlap_scan(&a.starts, a.duration, &b.starts, b.duration)
}

fn overlap_scan(a: &[f64], dur_a: f64, b: &[f64], dur_b: f64) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if b[j] < a[i] + dur_a && a[i] < b[j] + dur_b {
            return true;
        }
        if a[i] + dur_a <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    false
}

/// Result of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub hits: u64,
    /// `hits / trials`.
    pub estimate: f64,
    /// Normal-approximation standard error `sqrt(p (1 - p) / trials)`.
    pub std_error: f64,
    /// 95% confidence interval; exact (Clopper-Pearson) when fewer than 10
    /// hits or misses, normal approximation otherwise.
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub chunk_size: u64,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha12Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&chunk.to_le_bytes());
    bytes[16..24].copy_from_slice(b"overlap\0");
    ChaCha12Rng::from_seed(bytes)
}

fn confidence_interval(hits: u64, trials: u64) -> (f64, f64) {
    let p = hits as f64 / trials as f64;
    if hits >= 10 && trials - hits >= 10 {
        let half = 1.959963984540054 * (p * (1.0 - p) / trials as f64).sqrt();
        return ((p - half).max(0.0), (p + half).min(1.0));
    }
    let (h, n) = (hits as f64, trials as f64);
    let low = if hits == 0 {
        0.0
    } else {
        Beta::new(h, n - h + 1.0).unwrap().inverse_cdf(0.025)
    };
    let high = if hits == trials {
        1.0
    } else {
        Beta::new(h + 1.0, n - h).unwrap().inverse_cdf(0.975)
    };
    (low, high)
}

/// Runs `trials` independent overlap trials and reports the hit fraction
/// with its standard error and 95% confidence interval.
///
/// Deterministic given `(scenario, trials, seed, chunk_size)`: each chunk of
/// trials uses an independent substream seeded by `(seed, chunk index)` and
/// chunk hit counts are summed, so any degree of parallelism yields the
/// same report.
pub fn estimate(
    s: &Scenario,
    trials: u64,
    seed: u64,
    chunk_size: u64,
) -> Result<SimulationReport, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::ZeroTrials);
    }
    if chunk_size == 0 {
        return Err(SimulationError::ZeroChunkSize);
    }
    match s.classify() {
        FeasibilityClass::Normal => {}
        class => return Err(SimulationError::NotNormal(class)),
    }
    let n_chunks = trials.div_ceil(chunk_size);
    let hits: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let chunk_trials = chunk_size.min(trials - chunk * chunk_size);
            run_chunk(s, chunk_trials, chunk_rng(seed, chunk))
        })
        .sum();
    let p = hits as f64 / trials as f64;
    let (ci_low, ci_high) = confidence_interval(hits, trials);
    Ok(SimulationReport {
        trials,
        hits,
        estimate: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        ci_low,
        ci_high,
        seed,
        chunk_size,
    })
}

fn run_chunk(s: &Scenario, trials: u64, mut rng: ChaCha12Rng) -> u64 {
    let (a, b) = (s.event_a(), s.event_b());
    let mut starts_a = Vec::with_capacity(a.count() as usize);
    let mut starts_b = Vec::with_capacity(b.count() as usize);
    let mut hits = 0;
    for _ in 0..trials {
        sample_starts_into(&mut starts_a, s.total_time(), a.duration(), a.count(), &mut rng)
            .expect("NORMAL scenario is placeable");
        sample_starts_into(&mut starts_b, s.total_time(), b.duration(), b.count(), &mut rng)
            .expect("NORMAL scenario is placeable");
        if overlap_scan(&starts_a, a.duration(), &starts_b, b.duration()) {
            hits += 1;
        }
    }
    hits
}
