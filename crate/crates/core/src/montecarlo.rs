//! Sampling estimators for the mean and variance of the undetected error
//! probability over a Bernoulli ensemble.
//!
//! Each worker draws from its own ChaCha8 stream selected by
//! `(seed, worker index)`, so a fixed `(seed, workers)` pair reproduces a
//! report exactly regardless of how the workers are scheduled.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::Bsc;
use crate::ensemble::BernoulliEnsemble;
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector, EnumerationGuard, WeightDistribution};
use crate::math;

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Single-pass moments up to the fourth, mergeable across workers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SampleStats {
    count: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
    min: f64,
    max: f64,
}

impl Default for SampleStats {
    fn default() -> Self {
        SampleStats { count: 0, mean: 0.0, m2: 0.0, m3: 0.0, m4: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl SampleStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let term1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += term1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term1;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// Statistics of the concatenation of both samples.
    pub fn merge(&mut self, other: &SampleStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3 + other.m3 + d2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        self.mean = (na * self.mean + nb * other.mean) / n;
        self.count += other.count;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Unbiased sample variance; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn mean_se(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        math::sqrt(self.variance() / self.count as f64)
    }

    /// Standard error of [`SampleStats::variance`] from the fourth central
    /// moment.
    pub fn variance_se(&self) -> f64 {
        if self.count < 4 {
            return 0.0;
        }
        let n = self.count as f64;
        let var = self.variance();
        let mu4 = self.m4 / n;
        let v = (mu4 - (n - 3.0) / (n - 1.0) * var * var) / n;
        math::sqrt(v.max(0.0))
    }
}

/// The RNG stream of one worker.
pub fn substream(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Draws a matrix with every entry independently 1 with probability `k/n`.
pub fn sample_matrix<R: Rng + ?Sized>(ens: &BernoulliEnsemble, rng: &mut R) -> BitMatrix {
    let p = ens.p();
    BitMatrix::from_fn(ens.m() as usize, ens.n() as usize, |_, _| rng.gen_bool(p))
        .expect("ensemble dimensions are nonzero")
}

fn sample_error<R: Rng + ?Sized>(n: usize, eps: f64, rng: &mut R) -> BitVector {
    BitVector::from_bits((0..n).map(|_| rng.gen_bool(eps)))
}

/// Frequency estimate of `P_U(H)` from channel trials.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChannelEstimate {
    pub trials: u64,
    pub undetected: u64,
    pub estimate: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_level: f64,
}

/// Sends `trials` BSC error patterns through `h` and counts the nonzero
/// patterns with zero syndrome.
pub fn estimate_pu_channel<R: Rng + ?Sized>(h: &BitMatrix, eps: f64, trials: u64, rng: &mut R) -> Result<ChannelEstimate> {
    Bsc::new(eps)?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1"));
    }
    let mut undetected = 0u64;
    for _ in 0..trials {
        let e = sample_error(h.cols(), eps, rng);
        if !e.is_zero() && h.annihilates(&e) {
            undetected += 1;
        }
    }
    let estimate = undetected as f64 / trials as f64;
    let se = math::sqrt(estimate * (1.0 - estimate) / trials as f64);
    Ok(ChannelEstimate {
        trials,
        undetected,
        estimate,
        se,
        ci_low: (estimate - Z_95 * se).max(0.0),
        ci_high: (estimate + Z_95 * se).min(1.0),
        ci_level: 0.95,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub ensemble: BernoulliEnsemble,
    pub eps: f64,
    pub matrix_samples: u64,
    /// 0 evaluates `P_U(H)` exactly for every sampled matrix
    pub channel_trials: u64,
    pub seed: u64,
    pub workers: u32,
    pub guard: EnumerationGuard,
}

impl SimConfig {
    pub fn new(ensemble: BernoulliEnsemble, eps: f64, matrix_samples: u64, seed: u64) -> Result<Self> {
        let cfg = SimConfig {
            ensemble,
            eps,
            matrix_samples,
            channel_trials: 0,
            seed,
            workers: 1,
            guard: EnumerationGuard::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Bsc::new(self.eps)?;
        if self.matrix_samples == 0 {
            return Err(Error::InvalidConfig("matrix_samples must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1"));
        }
        Ok(())
    }

    /// Samples drawn by `worker`: an even split with the remainder going to
    /// the lowest indices.
    pub fn worker_samples(&self, worker: u32) -> u64 {
        let w = u64::from(self.workers);
        self.matrix_samples / w + u64::from(u64::from(worker) < self.matrix_samples % w)
    }

    pub fn is_exact(&self) -> bool {
        self.channel_trials == 0
    }
}

/// Per-`eps` accumulators of one worker.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WorkerStats {
    pub pu: SampleStats,
    /// per-matrix `p(1 - p) / (T - 1)`, estimating the channel-sampling
    /// variance `P_U (1 - P_U) / T`
    pub within: SampleStats,
}

impl WorkerStats {
    pub fn merge(&mut self, other: &WorkerStats) {
        self.pu.merge(&other.pu);
        self.within.merge(&other.within);
    }
}

fn exact_weights(h: &BitMatrix, guard: EnumerationGuard) -> Result<WeightDistribution> {
    gf2::weight_distribution_with(h, guard)
}

/// Runs one worker's share for every crossover probability in `eps`. The
/// same sampled matrices serve all of them.
pub fn simulate_worker(cfg: &SimConfig, eps: &[f64], worker: u32) -> Result<Vec<WorkerStats>> {
    cfg.validate()?;
    let channels: Vec<Bsc> = eps.iter().map(|&e| Bsc::new(e)).collect::<Result<_>>()?;
    let mut rng = substream(cfg.seed, u64::from(worker));
    let mut out = alloc::vec![WorkerStats::default(); eps.len()];
    for _ in 0..cfg.worker_samples(worker) {
        let h = sample_matrix(&cfg.ensemble, &mut rng);
        if cfg.is_exact() {
            let dist = exact_weights(&h, cfg.guard)?;
            for (acc, ch) in out.iter_mut().zip(&channels) {
                acc.pu.push(dist.undetected_error_prob(ch));
            }
        } else {
            let t = cfg.channel_trials;
            for (acc, ch) in out.iter_mut().zip(&channels) {
                let est = estimate_pu_channel(&h, ch.eps(), t, &mut rng)?;
                acc.pu.push(est.estimate);
                let within = if t > 1 { est.estimate * (1.0 - est.estimate) / (t - 1) as f64 } else { 0.0 };
                acc.within.push(within);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Channel,
}

/// Mean and variance of `P_U` over sampled matrices.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PuReport {
    pub eps: f64,
    pub mean: f64,
    pub mean_se: f64,
    pub var: f64,
    pub var_se: f64,
    pub samples: u64,
    pub mode: Mode,
    pub seed: u64,
    pub workers: u32,
    pub ci_level: f64,
    pub mean_ci_low: f64,
    pub mean_ci_high: f64,
    /// average channel-sampling variance, channel mode only; subtracting it
    /// from `var` estimates the between-matrix variance
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_var: Option<f64>,
}

/// Combines per-worker results, merged in worker order.
pub fn finish_report(cfg: &SimConfig, eps: f64, stats: &WorkerStats) -> PuReport {
    let pu = &stats.pu;
    PuReport {
        eps,
        mean: pu.mean(),
        mean_se: pu.mean_se(),
        var: pu.variance(),
        var_se: pu.variance_se(),
        samples: pu.count(),
        mode: if cfg.is_exact() { Mode::Exact } else { Mode::Channel },
        seed: cfg.seed,
        workers: cfg.workers,
        ci_level: 0.95,
        mean_ci_low: pu.mean() - Z_95 * pu.mean_se(),
        mean_ci_high: pu.mean() + Z_95 * pu.mean_se(),
        within_var: (!cfg.is_exact()).then(|| stats.within.mean()),
    }
}

/// Sequential reference implementation of a sweep over `eps`; workers are
/// run one after another.
pub fn estimate_pu_sweep(cfg: &SimConfig, eps: &[f64]) -> Result<Vec<PuReport>> {
    let mut total = alloc::vec![WorkerStats::default(); eps.len()];
    for worker in 0..cfg.workers {
        for (acc, s) in total.iter_mut().zip(simulate_worker(cfg, eps, worker)?) {
            acc.merge(&s);
        }
    }
    Ok(eps.iter().zip(&total).map(|(&e, s)| finish_report(cfg, e, s)).collect())
}

pub fn estimate_pu_distribution(cfg: &SimConfig) -> Result<PuReport> {
    Ok(estimate_pu_sweep(cfg, &[cfg.eps])?.remove(0))
}
