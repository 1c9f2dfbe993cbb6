//! Replica-parallel Monte Carlo drivers.
//!
//! Every replica owns a ChaCha8 stream keyed by `(master seed, cell, replica, domain)`
//! packed as the 32-byte seed, so distinct keys never share a stream. Replica
//! outputs are collected in replica order and folded sequentially; the worker
//! count changes wall time only.

mod dynamic;
mod fixed_time;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::Moments;

pub use dynamic::{
    run_second_moment, run_sup_experiment, run_union_bound, sup_normalizer, union_intervals, SecondMomentReport,
    SupCell, SupRow, UnionBoundReport, UnionInterval,
};
pub use fixed_time::{
    noise_grid, run_noise_sensitivity, run_revealment, run_tail_experiment, NoiseRow, RevealRow, TailRow,
};

/// Keeps experiments with a shared master seed on separate streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[repr(u64)]
pub enum Domain {
    Simulate = 1,
    Sup = 2,
    Tails = 3,
    Noise = 4,
    SecondMoment = 5,
    UnionBound = 6,
    UnionStatic = 7,
    Reveal = 8,
    Spectral = 9,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExperimentPlan {
    pub seed: u64,
    pub reps: u64,
    /// Thread count. Has no effect on results.
    pub workers: usize,
}

impl ExperimentPlan {
    pub fn new(seed: u64, reps: u64) -> Result<Self> {
        if reps < 1 {
            return Err(Error::Parameter("reps must be at least 1".into()));
        }
        Ok(Self { seed, reps, workers: 1 })
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        if workers < 1 {
            return Err(Error::Parameter("workers must be at least 1".into()));
        }
        self.workers = workers;
        Ok(self)
    }

    pub fn rng(&self, domain: Domain, cell: u64, replica: u64) -> ChaCha8Rng {
        replica_rng(self.seed, domain, cell, replica)
    }

    /// Runs `plan.reps` replicas of `job` and returns their outputs in replica order.
    pub fn run_cell<T, F>(&self, domain: Domain, cell: u64, job: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
    {
        let one = |r: u64| job(&mut self.rng(domain, cell, r));
        if self.workers == 1 {
            return (0..self.reps).map(one).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
        pool.install(|| (0..self.reps).into_par_iter().map(one).collect())
    }
}

pub fn replica_rng(seed: u64, domain: Domain, cell: u64, replica: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    key[16..24].copy_from_slice(&replica.to_le_bytes());
    key[24..].copy_from_slice(&(domain as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Point estimate of a cell with its within-cell standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellResult {
    pub estimate: f64,
    pub stderr: f64,
    pub replicas: u64,
}

impl From<Moments> for CellResult {
    fn from(m: Moments) -> Self {
        Self {
            estimate: m.mean,
            stderr: m.stderr(),
            replicas: m.count,
        }
    }
}

impl CellResult {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        values.into_iter().collect::<Moments>().into()
    }

    pub fn indicator(flags: impl IntoIterator<Item = bool>) -> Self {
        Self::of(flags.into_iter().map(|b| f64::from(u8::from(b))))
    }
}

/// `ceil(x)` that forgives round-off just above an integer, e.g. `1000^{2/3}`.
pub fn ceil_size(x: f64) -> u32 {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as u32
}

/// `n^{2/3}`.
pub fn scale(n: u32) -> f64 {
    let c = f64::from(n).cbrt();
    c * c
}
