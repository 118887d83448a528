//! Thread-parallel drivers over the core computations. Work items are
//! merged in index order, so results do not depend on the thread count
//! except where a worker count also selects random streams.

use std::num::NonZeroUsize;
use std::thread;

use ude_core::ensemble::BernoulliEnsemble;
use ude_core::montecarlo::{self, PuReport, SimConfig, WorkerStats};
use ude_core::oracle::ClassSums;
use ude_core::{Bsc, LogReal};

use crate::error::Result;

pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Evaluates `f(0..jobs)` on up to `workers` threads, returning results in
/// job order.
pub fn map_indexed<T: Send>(jobs: usize, workers: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let workers = workers.clamp(1, jobs.max(1));
    if workers == 1 {
        return (0..jobs).map(f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<T>> = (0..jobs).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| s.spawn(move || (w..jobs).step_by(workers).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|v| v.expect("every job ran")).collect()
}

/// `Var[P_U]` at each crossover probability, with the rows of each double
/// sum spread over threads. Bit-identical to [`BernoulliEnsemble::var_pu`].
pub fn var_pu_sweep(ens: &BernoulliEnsemble, channels: &[Bsc], workers: usize) -> Result<Vec<LogReal>> {
    let n = ens.n() as usize;
    let rows = map_indexed(channels.len() * n, workers, |job| ens.var_pu_row(&channels[job / n], (job % n) as u32 + 1));
    let rows: Vec<LogReal> = rows.into_iter().collect::<ude_core::Result<_>>()?;
    Ok(rows.chunks(n).map(LogReal::sum_slice).collect())
}

/// Oracle class sums with the counter range split into contiguous chunks.
pub fn class_sums(m: u32, n: u32, max_entries: u32, workers: usize) -> Result<ClassSums> {
    let mut total = ClassSums::new(m, n, max_entries)?;
    let count = total.matrix_count();
    let chunks = (workers.max(1) as u64).min(count);
    let bounds = |i: u64| count / chunks * i + (count % chunks).min(i);
    let parts = map_indexed(chunks as usize, workers, |i| -> Result<ClassSums> {
        let mut part = ClassSums::new(m, n, max_entries)?;
        part.accumulate(bounds(i as u64)..bounds(i as u64 + 1))?;
        Ok(part)
    });
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

/// Monte Carlo sweep with one thread per configured worker stream.
pub fn simulate(cfg: &SimConfig, eps: &[f64]) -> Result<Vec<PuReport>> {
    let per_worker = map_indexed(cfg.workers as usize, cfg.workers as usize, |w| {
        montecarlo::simulate_worker(cfg, eps, w as u32)
    });
    let mut total = vec![WorkerStats::default(); eps.len()];
    for stats in per_worker {
        for (acc, s) in total.iter_mut().zip(stats?) {
            acc.merge(&s);
        }
    }
    Ok(eps.iter().zip(&total).map(|(&e, s)| montecarlo::finish_report(cfg, e, s)).collect())
}
