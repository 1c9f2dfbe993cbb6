//! Experiments that need whole trajectories of the dynamical graph.

use serde::Serialize;

use super::{scale, CellResult, Domain, ExperimentPlan};
use crate::dynamics::{exceptional_set_of, simulate_trajectory, z_statistics};
use crate::error::{Error, Result};
use crate::graph::sample_static;
use crate::stats::{median, Moments};

/// `n^{2/3} log^{1/3} n`, natural logarithm.
pub fn sup_normalizer(n: u32) -> f64 {
    scale(n) * f64::from(n).ln().cbrt()
}

fn require_n(n: u32) -> Result<()> {
    if n < 100 {
        return Err(Error::Parameter(format!("n = {n} is below the supported minimum of 100")));
    }
    Ok(())
}

fn require_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Parameter(format!("beta must be finite and non-negative, got {beta}")));
    }
    Ok(())
}

/// Smallest integer size strictly above `x`.
fn strictly_above(x: f64) -> u32 {
    (x.floor() + 1.0).min(f64::from(u32::MAX)) as u32
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupRow {
    pub n: u32,
    pub beta: f64,
    /// `β n^{2/3} log^{1/3} n`.
    pub threshold: f64,
    /// `P(sup_{t<=1} |L_n(t)| > threshold)`.
    pub exceed: CellResult,
    /// Same event at `t = 0` only.
    pub exceed_at_zero: CellResult,
    /// Lebesgue measure of the exceptional set.
    pub measure: CellResult,
    /// Entry and exit times of the exceptional set inside `(0, 1)`.
    pub switches: CellResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupCell {
    pub n: u32,
    pub normalizer: f64,
    pub median: f64,
    /// `sup_t |L_n(t)| / normalizer`, one per replica in replica order.
    pub normalized: Vec<f64>,
    pub rows: Vec<SupRow>,
}

struct SupReplica {
    sup: u32,
    initial: u32,
    per_beta: Vec<(f64, usize)>,
}

/// One trajectory per replica and `n`; every `β` is read off the same trajectories.
pub fn run_sup_experiment(plan: &ExperimentPlan, ns: &[u32], betas: &[f64]) -> Result<Vec<SupCell>> {
    ns.iter().try_for_each(|&n| require_n(n))?;
    betas.iter().try_for_each(|&b| require_beta(b))?;
    let mut cells = Vec::with_capacity(ns.len());
    for (cell, &n) in ns.iter().enumerate() {
        let normalizer = sup_normalizer(n);
        let thresholds: Vec<f64> = betas.iter().map(|b| b * normalizer).collect();
        let replicas = plan.run_cell(Domain::Sup, cell as u64, |rng| {
            let traj = simulate_trajectory(n, 1.0, rng, &[])?;
            let path = &traj.largest_path;
            let per_beta = thresholds
                .iter()
                .map(|&x| {
                    let set = exceptional_set_of(path, strictly_above(x), path.horizon())?;
                    Ok((set.measure, set.switch_count))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SupReplica {
                sup: path.max(),
                initial: path.initial(),
                per_beta,
            })
        })?;
        let normalized: Vec<f64> = replicas.iter().map(|r| f64::from(r.sup) / normalizer).collect();
        let rows = betas
            .iter()
            .zip(&thresholds)
            .enumerate()
            .map(|(j, (&beta, &x))| SupRow {
                n,
                beta,
                threshold: x,
                exceed: CellResult::indicator(replicas.iter().map(|r| f64::from(r.sup) > x)),
                exceed_at_zero: CellResult::indicator(replicas.iter().map(|r| f64::from(r.initial) > x)),
                measure: CellResult::of(replicas.iter().map(|r| r.per_beta[j].0)),
                switches: CellResult::of(replicas.iter().map(|r| r.per_beta[j].1 as f64)),
            })
            .collect();
        cells.push(SupCell {
            n,
            normalizer,
            median: median(&normalized),
            normalized,
            rows,
        });
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondMomentReport {
    pub n: u32,
    pub beta: f64,
    /// Integer sizes in `[β n^{2/3} log^{1/3} n, 2β n^{2/3} log^{1/3} n]`.
    pub window: (u32, u32),
    pub z1: CellResult,
    pub z1_squared: CellResult,
    pub z1_z2: CellResult,
    /// `1{|C_1(0)| ∈ I}`; its mean is `E[Z_1]` by stationarity.
    pub stationary: CellResult,
    /// `n^2 E[Z_1]^2 / (n E[Z_1^2] + n(n-1) E[Z_1 Z_2])`.
    pub ratio: f64,
    /// Jackknife standard error of `ratio`.
    pub ratio_stderr: f64,
}

fn second_moment_ratio(n: f64, a: f64, b: f64, c: f64) -> f64 {
    n * n * a * a / (n * b + n * (n - 1.0) * c)
}

pub fn run_second_moment(plan: &ExperimentPlan, n: u32, beta: f64) -> Result<SecondMomentReport> {
    require_n(n)?;
    require_beta(beta)?;
    let x = beta * sup_normalizer(n);
    let lo = x.ceil().max(1.0) as u32;
    let hi = (2.0 * x).floor().min(f64::from(n)) as u32;
    if lo > hi {
        return Err(Error::Parameter(format!("size window [{x}, {}] holds no integer in 1..={n}", 2.0 * x)));
    }
    let rows = plan.run_cell(Domain::SecondMoment, u64::from(n), |rng| {
        let traj = simulate_trajectory(n, 1.0, rng, &[1, 2])?;
        let z = z_statistics(&traj, lo..=hi, 1, 2)?;
        let start = traj.probe(1)?.initial();
        Ok((z, (lo..=hi).contains(&start)))
    })?;

    let z1: Moments = rows.iter().map(|(z, _)| z.z_u).collect();
    let z1_squared: Moments = rows.iter().map(|(z, _)| z.z_uu).collect();
    let z1_z2: Moments = rows.iter().map(|(z, _)| z.z_uv).collect();
    let nf = f64::from(n);
    let ratio = second_moment_ratio(nf, z1.mean, z1_squared.mean, z1_z2.mean);

    let count = rows.len() as f64;
    let ratio_stderr = if rows.len() < 2 {
        f64::NAN
    } else {
        let (sa, sb, sc) = (z1.mean * count, z1_squared.mean * count, z1_z2.mean * count);
        let leave_out: Moments = rows
            .iter()
            .map(|(z, _)| {
                let k = count - 1.0;
                second_moment_ratio(nf, (sa - z.z_u) / k, (sb - z.z_uu) / k, (sc - z.z_uv) / k)
            })
            .collect();
        ((count - 1.0) * leave_out.variance() * (count - 1.0) / count).sqrt()
    };
    Ok(SecondMomentReport {
        n,
        beta,
        window: (lo, hi),
        z1: z1.into(),
        z1_squared: z1_squared.into(),
        z1_z2: z1_z2.into(),
        stationary: CellResult::indicator(rows.iter().map(|r| r.1)),
        ratio,
        ratio_stderr,
    })
}

/// `[i n^{-1/3}, (i+1) n^{-1/3}) ∩ [0, horizon)` for `i = 0..=floor(n^{1/3})`, empty pieces dropped.
pub fn union_intervals(n: u32, horizon: f64) -> Vec<(f64, f64)> {
    let root = f64::from(n).cbrt();
    let last = (root + 1e-9).floor() as u32;
    (0..=last)
        .map(|i| (f64::from(i) / root, (f64::from(i + 1) / root).min(horizon)))
        .filter(|&(a, b)| a < b && a < horizon)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionInterval {
    pub index: u32,
    pub start: f64,
    pub end: f64,
    /// Frequency of `{∃t ∈ [start, end): |L_n(t)| > threshold}`.
    pub hits: CellResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionBoundReport {
    pub n: u32,
    pub beta: f64,
    pub threshold: f64,
    pub intervals: Vec<UnionInterval>,
    /// Number of intervals hit per trajectory.
    pub count: CellResult,
    /// Whether any interval was hit.
    pub any: CellResult,
    /// Whether the whole-horizon supremum exceeded the threshold.
    pub sup_exceed: CellResult,
    /// Trajectories where the two previous indicators disagree; always 0.
    pub mismatches: u64,
    /// `1/n + n^{-4/3}`.
    pub static_p: f64,
    /// `P(|L_n| > threshold)` for static `ER(n, static_p)`.
    pub static_exceed: CellResult,
}

pub fn run_union_bound(plan: &ExperimentPlan, n: u32, beta: f64) -> Result<UnionBoundReport> {
    require_n(n)?;
    require_beta(beta)?;
    let threshold = beta * sup_normalizer(n);
    let intervals = union_intervals(n, 1.0);
    let hits = plan.run_cell(Domain::UnionBound, u64::from(n), |rng| {
        let traj = simulate_trajectory(n, 1.0, rng, &[])?;
        let path = &traj.largest_path;
        let per: Vec<bool> = intervals
            .iter()
            .map(|&(a, b)| f64::from(path.max_on(a, b)) > threshold)
            .collect();
        Ok((per, f64::from(path.max()) > threshold))
    })?;
    let nf = f64::from(n);
    let static_p = 1.0 / nf + nf.powf(-4.0 / 3.0);
    let statics = plan.run_cell(Domain::UnionStatic, u64::from(n), |rng| {
        Ok(f64::from(sample_static(n, static_p, 1, rng)?.largest) > threshold)
    })?;

    let any = |row: &(Vec<bool>, bool)| row.0.iter().any(|&h| h);
    Ok(UnionBoundReport {
        n,
        beta,
        threshold,
        intervals: intervals
            .iter()
            .enumerate()
            .map(|(i, &(start, end))| UnionInterval {
                index: i as u32,
                start,
                end,
                hits: CellResult::indicator(hits.iter().map(|r| r.0[i])),
            })
            .collect(),
        count: CellResult::of(hits.iter().map(|r| r.0.iter().filter(|&&h| h).count() as f64)),
        any: CellResult::indicator(hits.iter().map(any)),
        sup_exceed: CellResult::indicator(hits.iter().map(|r| r.1)),
        mismatches: hits.iter().filter(|r| any(r) != r.1).count() as u64,
        static_p,
        static_exceed: CellResult::indicator(statics),
    })
}
