//! Seeded, batch-parallel Monte Carlo.
//!
//! Batch `b` draws from ChaCha8 seeded with `seed` on stream `b`, so each batch
//! is a pure function of `(seed, b)`. Batch statistics are folded in batch
//! order, which makes every estimate bit-identical regardless of how many
//! workers evaluate the batches.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_BATCH_SIZE: u64 = 10_000;

/// Batches evaluated between early-stopping checks. Fixed so that the stopping
/// point does not depend on the worker count.
const WAVE: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCParams {
    pub samples: u64,
    pub seed: u64,
    pub batch_size: u64,
    /// Stop early once the standard error drops to this value.
    pub target_stderr: Option<f64>,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for MCParams {
    fn default() -> Self {
        MCParams {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            batch_size: DEFAULT_BATCH_SIZE,
            target_stderr: None,
            exec: Execution::default(),
        }
    }
}

impl MCParams {
    /// `samples` draws with seed `seed`; the batch size is capped at `samples`.
    pub fn new(samples: u64, seed: u64) -> Self {
        MCParams {
            samples,
            seed,
            batch_size: DEFAULT_BATCH_SIZE.min(samples.max(1)),
            ..Default::default()
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_batch_size(mut self, batch_size: u64) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidParams("batch_size must be at least 1".into()));
        }
        if self.samples < self.batch_size {
            return Err(Error::InvalidParams(format!(
                "samples ({}) must be at least batch_size ({})",
                self.samples, self.batch_size
            )));
        }
        if let Some(t) = self.target_stderr {
            if !(t >= 0.0) {
                return Err(Error::InvalidParams("target_stderr must be nonnegative".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn num_batches(&self) -> u64 {
        self.samples.div_ceil(self.batch_size)
    }

    pub(crate) fn batch_len(&self, b: u64) -> u64 {
        let start = b * self.batch_size;
        self.batch_size.min(self.samples - start)
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Standard error of `mean`, from the spread of batch means.
    pub stderr: f64,
    pub samples_used: u64,
    pub seed: u64,
    /// Draws discarded as measure-zero degeneracies and redrawn.
    pub resamples: u64,
}

impl MCEstimate {
    /// A value known without sampling.
    pub fn exact(value: f64, seed: u64) -> Self {
        MCEstimate { mean: value, stderr: 0.0, samples_used: 0, seed, resamples: 0 }
    }

    /// `factor * self` (stderr scales by `|factor|`).
    pub fn scaled(&self, factor: f64) -> Self {
        MCEstimate { mean: self.mean * factor, stderr: self.stderr * factor.abs(), ..*self }
    }
}

/// The random stream for batch `batch` under `seed`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

#[derive(Clone, Copy, Debug, Default)]
struct BatchStat {
    n: u64,
    sum: f64,
    comp: f64,
    sumsq: f64,
    rejected: u64,
}

impl BatchStat {
    fn push(&mut self, x: f64) {
        // Neumaier summation
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.sumsq += x * x;
        self.n += 1;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }

    fn mean(&self) -> f64 {
        self.total() / self.n as f64
    }
}

/// Averages `draw` over `params.samples` successful draws.
///
/// `draw` returns `None` for a degenerate (measure-zero) sample, which is
/// redrawn and counted. If the rejected fraction exceeds `max_reject_rate`
/// the estimate fails with [`Error::DegenerateSampling`].
pub(crate) fn integrate<F>(params: &MCParams, max_reject_rate: f64, draw: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync + Send,
{
    params.validate()?;
    let nb = params.num_batches();
    let run_batch = |b: u64| -> Result<BatchStat> {
        let mut rng = batch_rng(params.seed, b);
        let len = params.batch_len(b);
        let mut st = BatchStat::default();
        // generous absolute cap so a batch of all-degenerate draws terminates
        let cap = (len as f64 * max_reject_rate).ceil() as u64 + 64;
        while st.n < len {
            match draw(&mut rng) {
                Some(x) => st.push(x),
                None => {
                    st.rejected += 1;
                    if st.rejected > cap {
                        return Err(Error::DegenerateSampling { rejected: st.rejected, drawn: st.rejected + st.n });
                    }
                }
            }
        }
        Ok(st)
    };

    let mut stats: Vec<BatchStat> = Vec::with_capacity(nb as usize);
    let mut next = 0u64;
    while next < nb {
        let wave_end = match params.target_stderr {
            Some(_) => (next + WAVE).min(nb),
            None => nb,
        };
        let wave = map_indexed((wave_end - next) as usize, params.exec, |i| run_batch(next + i as u64));
        for st in wave {
            stats.push(st?);
        }
        next = wave_end;
        if let Some(target) = params.target_stderr {
            if stats.len() >= 2 && combine(&stats, params.seed).stderr <= target {
                break;
            }
        }
    }

    let est = combine(&stats, params.seed);
    let drawn = est.samples_used + est.resamples;
    if est.resamples as f64 > max_reject_rate * drawn as f64 && est.resamples > 0 {
        return Err(Error::DegenerateSampling { rejected: est.resamples, drawn });
    }
    Ok(est)
}

fn combine(stats: &[BatchStat], seed: u64) -> MCEstimate {
    let n: u64 = stats.iter().map(|s| s.n).sum();
    let rejected: u64 = stats.iter().map(|s| s.rejected).sum();
    let mut total = 0.0;
    let mut comp = 0.0;
    for s in stats {
        let x = s.total();
        let t = total + x;
        if f64::abs(total) >= x.abs() {
            comp += (total - t) + x;
        } else {
            comp += (x - t) + total;
        }
        total = t;
    }
    let mean = (total + comp) / n as f64;
    let stderr = if stats.len() >= 2 {
        // weighted batch-means estimator of Var(mean)
        let ss: f64 = stats
            .iter()
            .map(|s| s.n as f64 * (s.mean() - mean).powi(2))
            .sum();
        (ss / ((stats.len() - 1) as f64 * n as f64)).sqrt()
    } else {
        let s = &stats[0];
        if s.n < 2 {
            0.0
        } else {
            let var = ((s.sumsq - s.n as f64 * mean * mean) / (s.n - 1) as f64).max(0.0);
            (var / s.n as f64).sqrt()
        }
    };
    MCEstimate { mean, stderr, samples_used: n, seed, resamples: rejected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn params_validation() {
        assert!(MCParams::new(100, 0).validate().is_ok());
        assert!(MCParams::new(100, 0).with_batch_size(0).validate().is_err());
        assert!(MCParams::new(100, 0).with_batch_size(101).validate().is_err());
    }

    #[test]
    fn uniform_mean() {
        let p = MCParams::new(200_000, 7).with_batch_size(5_000);
        let est = integrate(&p, 0.0, |rng| Some(rng.random::<f64>())).unwrap();
        assert!((est.mean - 0.5).abs() < 4.0 * est.stderr);
        // stderr of a uniform mean is sqrt(1/12 / n)
        let expected = (1.0 / 12.0 / 200_000.0f64).sqrt();
        assert!((est.stderr / expected - 1.0).abs() < 0.3);
        assert_eq!(est.samples_used, 200_000);
    }

    #[test]
    fn constant_has_zero_stderr() {
        let p = MCParams::new(1000, 1).with_batch_size(100);
        let est = integrate(&p, 0.0, |_| Some(3.0)).unwrap();
        assert_eq!(est.mean, 3.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn ragged_last_batch() {
        let p = MCParams::new(1050, 3).with_batch_size(100);
        let est = integrate(&p, 0.0, |rng| Some(rng.random::<f64>())).unwrap();
        assert_eq!(est.samples_used, 1050);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let base = MCParams::new(100_000, 42).with_batch_size(1_000);
        let f = |rng: &mut ChaCha8Rng| Some(rng.random::<f64>().ln());
        let a = integrate(&base.with_exec(Execution::Sequential), 0.0, f).unwrap();
        let b = integrate(&base.with_exec(Execution::Parallel), 0.0, f).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn early_stop() {
        let mut p = MCParams::new(1_000_000, 5).with_batch_size(1_000);
        p.target_stderr = Some(0.01);
        let est = integrate(&p, 0.0, |rng| Some(rng.random::<f64>())).unwrap();
        assert!(est.samples_used < 1_000_000);
        assert!(est.stderr <= 0.01);
        assert_eq!(est.samples_used % (WAVE * 1_000), 0);
    }

    #[test]
    fn rejections_counted_and_capped() {
        let p = MCParams::new(10_000, 9).with_batch_size(1_000);
        let est = integrate(&p, 0.5, |rng| {
            let u = rng.random::<f64>();
            (u > 0.1).then_some(u)
        })
        .unwrap();
        assert!(est.resamples > 0);
        let err = integrate(&p, 1e-3, |rng| {
            let u = rng.random::<f64>();
            (u > 0.1).then_some(u)
        });
        assert!(matches!(err, Err(Error::DegenerateSampling { .. })));
    }
}
