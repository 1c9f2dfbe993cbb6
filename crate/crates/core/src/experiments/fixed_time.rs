//! Experiments on a single static configuration per replica.

use serde::Serialize;

use super::{ceil_size, scale, CellResult, Domain, ExperimentPlan};
use crate::asymptotics::{pittel_component_tail, pittel_largest_tail, TailQuery};
use crate::dynamics::resample_configuration;
use crate::error::{Error, Result};
use crate::graph::{components, sample_er, sample_static};
use crate::revealment::reveal_once;
use crate::stats::{covariance, CovarianceEstimate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub n: u32,
    pub lambda: f64,
    pub a: f64,
    /// Smallest integer size at least `A n^{2/3}`.
    pub threshold: u32,
    pub component: CellResult,
    pub component_formula: f64,
    pub component_ratio: f64,
    pub component_ratio_stderr: f64,
    pub largest: CellResult,
    pub largest_formula: f64,
    pub largest_ratio: f64,
    pub largest_ratio_stderr: f64,
    pub in_window: bool,
}

/// Static `ER(n, 1/n - λ n^{-4/3})` replicas; every `A` is read off the same samples.
pub fn run_tail_experiment(plan: &ExperimentPlan, n: u32, lambda: f64, a_grid: &[f64]) -> Result<Vec<TailRow>> {
    let queries = a_grid
        .iter()
        .map(|&a| {
            let q = TailQuery::new(u64::from(n), lambda, a)?;
            if !q.validity().in_window() {
                return Err(Error::Parameter(format!(
                    "(n = {n}, λ = {lambda}, A = {a}) lies outside the window where the tail formulas apply"
                )));
            }
            Ok(q)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = TailQuery::new(u64::from(n), lambda, 1.0)?.edge_probability();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability { name: "p", value: p });
    }
    let samples = plan.run_cell(Domain::Tails, u64::from(n), |rng| {
        let s = sample_static(n, p, 1, rng)?;
        Ok((s.root_size, s.largest))
    })?;
    queries
        .iter()
        .map(|q| {
            let threshold = ceil_size(q.size());
            let component = CellResult::indicator(samples.iter().map(|s| s.0 >= threshold));
            let largest = CellResult::indicator(samples.iter().map(|s| s.1 >= threshold));
            let cf = pittel_component_tail(q)?;
            let lf = pittel_largest_tail(q)?;
            Ok(TailRow {
                n,
                lambda,
                a: q.a,
                threshold,
                component,
                component_formula: cf.value,
                component_ratio: component.estimate / cf.value,
                component_ratio_stderr: component.stderr / cf.value,
                largest,
                largest_formula: lf.value,
                largest_ratio: largest.estimate / lf.value,
                largest_ratio_stderr: largest.stderr / lf.value,
                in_window: cf.validity.in_window(),
            })
        })
        .collect()
}

/// `{0, n^{-2/3}, n^{-1/3}, n^{-1/6}, n^{-1/8}, 1}`.
pub fn noise_grid(n: u32) -> Vec<f64> {
    let n = f64::from(n);
    vec![0.0, n.powf(-2.0 / 3.0), n.powf(-1.0 / 3.0), n.powf(-1.0 / 6.0), n.powf(-1.0 / 8.0), 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseRow {
    pub n: u32,
    pub a: f64,
    pub eps: f64,
    pub threshold: u32,
    /// `P(F_n = 1)`.
    pub f_mean: CellResult,
    /// `Cov(F_n(ω), F_n(ω_ε))` with `F_n = 1{|L_n| >= a n^{2/3}}`.
    pub cov_f: CovarianceEstimate,
    /// Same for `G_n = (a n^{2/3})^{-1} Σ_v 1{|C_v| >= a n^{2/3}}`.
    pub cov_g: CovarianceEstimate,
}

pub fn run_noise_sensitivity(plan: &ExperimentPlan, n: u32, a: f64, eps_grid: &[f64]) -> Result<Vec<NoiseRow>> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Parameter(format!("a must be positive, got {a}")));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    for &eps in eps_grid {
        crate::error::check_probability("eps", eps)?;
    }
    let unit = a * scale(n);
    let threshold = ceil_size(unit);
    let p = 1.0 / f64::from(n);
    let rows = plan.run_cell(Domain::Noise, u64::from(n), |rng| {
        let omega = sample_er(n, p, rng)?;
        let observe = |config: &crate::graph::Configuration| {
            let view = components(config);
            let f = f64::from(u8::from(view.largest() >= threshold));
            (f, view.vertices_in_components_at_least(threshold) as f64 / unit)
        };
        let base = observe(&omega);
        let noisy = eps_grid
            .iter()
            .map(|&eps| Ok(observe(&resample_configuration(&omega, eps, p, rng)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok((base, noisy))
    })?;
    let f: Vec<f64> = rows.iter().map(|r| r.0 .0).collect();
    let g: Vec<f64> = rows.iter().map(|r| r.0 .1).collect();
    Ok(eps_grid
        .iter()
        .enumerate()
        .map(|(j, &eps)| {
            let fe: Vec<f64> = rows.iter().map(|r| r.1[j].0).collect();
            let ge: Vec<f64> = rows.iter().map(|r| r.1[j].1).collect();
            NoiseRow {
                n,
                a,
                eps,
                threshold,
                f_mean: CellResult::of(f.iter().copied()),
                cov_f: covariance(&f, &fe),
                cov_g: covariance(&g, &ge),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevealRow {
    pub n: u32,
    pub threshold: u32,
    pub p: f64,
    /// Fraction of the `n - 1` slots at vertex 1 revealed per run.
    pub incident: CellResult,
    /// Pooled reveal frequency of a slot away from vertex 1.
    pub off_incident: CellResult,
    /// `off_incident · n^{2/3}`.
    pub scaled: CellResult,
    pub decision: CellResult,
}

/// Breadth-first revealment of `1{|C_1| >= N}` on `ER(n, 1/n)`; `N` defaults to `ceil(n^{2/3})`.
pub fn run_revealment(plan: &ExperimentPlan, n: u32, threshold: Option<u32>) -> Result<RevealRow> {
    if n < 3 {
        return Err(Error::Parameter(format!("n must be at least 3 for an off-vertex orbit, got {n}")));
    }
    let threshold = threshold.unwrap_or_else(|| ceil_size(scale(n)));
    let p = 1.0 / f64::from(n);
    let counts = plan.run_cell(Domain::Reveal, u64::from(n), |rng| reveal_once(n, p, 1, threshold, rng))?;
    let incident_slots = f64::from(n - 1);
    let off_slots = f64::from(n - 1) * f64::from(n - 2) / 2.0;
    let s = scale(n);
    Ok(RevealRow {
        n,
        threshold,
        p,
        incident: CellResult::of(counts.iter().map(|c| c.incident as f64 / incident_slots)),
        off_incident: CellResult::of(counts.iter().map(|c| c.off_incident as f64 / off_slots)),
        scaled: CellResult::of(counts.iter().map(|c| c.off_incident as f64 / off_slots * s)),
        decision: CellResult::indicator(counts.iter().map(|c| c.decision)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tails_small_run() {
        let plan = ExperimentPlan::new(1, 500).unwrap();
        let rows = run_tail_experiment(&plan, 2000, 0.0, &[1.0, 1.2]).unwrap();
        for r in &rows {
            assert!(r.largest.estimate >= r.component.estimate);
            assert!(r.in_window);
        }
        assert!(rows[0].component.estimate >= rows[1].component.estimate);
        assert!(run_tail_experiment(&plan, 2000, 0.0, &[3.0]).is_err());
    }

    #[test]
    fn noise_extremes() {
        let plan = ExperimentPlan::new(2, 200).unwrap();
        let rows = run_noise_sensitivity(&plan, 300, 0.5, &[0.0, 1.0]).unwrap();
        let f = rows[0].f_mean.estimate;
        assert!((rows[0].cov_f.estimate - f * (1.0 - f)).abs() < 1e-12);
        assert!(rows[1].cov_f.estimate.abs() <= 4.0 * rows[1].cov_f.stderr + 1e-12);
        assert!(run_noise_sensitivity(&plan, 300, 0.0, &[0.0]).is_err());
    }

    #[test]
    fn reveal_small_run() {
        let plan = ExperimentPlan::new(4, 300).unwrap();
        let row = run_revealment(&plan, 200, None).unwrap();
        assert_eq!(row.threshold, 35);
        assert!(row.incident.estimate > 0.0);
        assert!(row.off_incident.estimate < row.incident.estimate);
    }
}
