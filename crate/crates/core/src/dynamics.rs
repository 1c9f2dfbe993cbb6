//! Event-driven simulation of the dynamical Erdős–Rényi process.
//!
//! Every edge slot is resampled at rate 1: an absent edge turns on at rate
//! `p`, a present edge turns off at rate `1 - p`. Instead of `m` independent
//! clocks we run two thinned streams: on-candidates at total rate `m p`
//! (uniform slot, rejected if already present) and off-events at rate
//! `|present| (1 - p)` (uniform present edge). Only effective events are
//! recorded.

use std::ops::RangeInclusive;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::graph::{apply_flip, components, sample_er, Configuration, EdgeSlot};

/// Right-continuous piecewise-constant path on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    horizon: f64,
    /// `(start time, value)`; starts strictly increase from 0, neighboring values differ.
    points: Vec<(f64, u32)>,
}

impl StepPath {
    pub fn new(horizon: f64, points: Vec<(f64, u32)>) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::Parameter(format!("horizon must be positive, got {horizon}")));
        }
        match points.first() {
            Some(&(t, _)) if t == 0.0 => {}
            _ => return Err(Error::Parameter("path must start at time 0".into())),
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) || points.last().is_some_and(|p| p.0 >= horizon) {
            return Err(Error::Parameter("path times must increase strictly within [0, horizon)".into()));
        }
        let mut path = Self { horizon, points: Vec::with_capacity(points.len()) };
        for (t, v) in points {
            path.record(t, v);
        }
        Ok(path)
    }

    fn starting_at(horizon: f64, value: u32) -> Self {
        Self { horizon, points: vec![(0.0, value)] }
    }

    fn record(&mut self, t: f64, value: u32) {
        match self.points.last() {
            Some(&(_, last)) if last == value => {}
            _ => self.points.push((t, value)),
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn points(&self) -> &[(f64, u32)] {
        &self.points
    }

    pub fn initial(&self) -> u32 {
        self.points[0].1
    }

    /// Value holding just before the horizon.
    pub fn terminal(&self) -> u32 {
        self.points[self.points.len() - 1].1
    }

    pub fn value_at(&self, t: f64) -> u32 {
        let idx = self.points.partition_point(|&(s, _)| s <= t);
        self.points[idx.saturating_sub(1)].1
    }

    pub fn max(&self) -> u32 {
        self.points.iter().map(|&(_, v)| v).max().unwrap_or(0)
    }

    /// Maximum over `[a, b)`.
    pub fn max_on(&self, a: f64, b: f64) -> u32 {
        let start = self.points.partition_point(|&(s, _)| s <= a).saturating_sub(1);
        self.points[start..]
            .iter()
            .take_while(|&&(s, _)| s < b || s <= a)
            .map(|&(_, v)| v)
            .max()
            .unwrap_or(0)
    }

    /// `(start, end, value)` for each constant piece.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, u32)> + '_ {
        self.points.iter().enumerate().map(|(i, &(t, v))| {
            let end = self.points.get(i + 1).map_or(self.horizon, |p| p.0);
            (t, end, v)
        })
    }

    /// Lebesgue measure of `{t : pred(path(t))}`.
    pub fn time_where(&self, pred: impl Fn(u32) -> bool) -> f64 {
        self.segments().filter(|&(_, _, v)| pred(v)).map(|(a, b, _)| b - a).sum()
    }
}

/// One effective event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub slot: EdgeSlot,
    pub new_state: bool,
    /// `|L_n|` right after the event.
    pub largest: u32,
}

/// Row of the trajectory dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventRow {
    pub time: f64,
    pub edge_u: u32,
    pub edge_v: u32,
    pub new_state: u8,
    pub largest: u32,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub n: u32,
    pub p: f64,
    pub horizon: f64,
    pub events: Vec<Event>,
    pub largest_path: StepPath,
    pub probe_paths: Vec<(u32, StepPath)>,
    pub initial_edges: usize,
    pub final_edges: usize,
}

impl TrajectoryRecord {
    pub fn probe(&self, v: u32) -> Result<&StepPath> {
        self.probe_paths
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, path)| path)
            .ok_or(Error::NotProbed(v))
    }

    /// `sup_t |L_n(t)|` over the event times and `t = 0`.
    pub fn sup_largest(&self) -> u32 {
        self.largest_path.max()
    }

    pub fn event_rows(&self) -> impl Iterator<Item = EventRow> + '_ {
        let space = crate::graph::EdgeSpace::new(self.n).expect("trajectory has n >= 2");
        self.events.iter().map(move |ev| {
            let (u, v) = space.pair(ev.slot).expect("recorded slots are valid");
            EventRow {
                time: ev.time,
                edge_u: u,
                edge_v: v,
                new_state: u8::from(ev.new_state),
                largest: ev.largest,
            }
        })
    }
}

/// Simulates the critical process (`p = 1/n`) started from stationarity.
pub fn simulate_trajectory<R: Rng + ?Sized>(
    n: u32,
    horizon: f64,
    rng: &mut R,
    probes: &[u32],
) -> Result<TrajectoryRecord> {
    simulate_trajectory_with(n, 1.0 / f64::from(n), horizon, rng, probes)
}

/// Simulates dynamical percolation on `K_n` with edge density `p`, started from `ER(n, p)`.
pub fn simulate_trajectory_with<R: Rng + ?Sized>(
    n: u32,
    p: f64,
    horizon: f64,
    rng: &mut R,
    probes: &[u32],
) -> Result<TrajectoryRecord> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Parameter(format!("horizon must be positive, got {horizon}")));
    }
    check_probability("p", p)?;
    if let Some(&v) = probes.iter().find(|&&v| v < 1 || v > n) {
        return Err(Error::InvalidVertex { v, n });
    }

    let mut config = sample_er(n, p, rng)?;
    let mut view = components(&config);
    let m = config.space().m();
    let on_rate = m as f64 * p;

    let mut largest_path = StepPath::starting_at(horizon, view.largest());
    let mut probe_paths: Vec<(u32, StepPath)> = probes
        .iter()
        .map(|&v| (v, StepPath::starting_at(horizon, view.size_of(v))))
        .collect();
    let initial_edges = config.edge_count();
    let mut events = Vec::with_capacity((2.0 * on_rate * (1.0 - p) * horizon) as usize + 16);

    let mut t = 0.0;
    loop {
        let off_rate = config.edge_count() as f64 * (1.0 - p);
        let total = on_rate + off_rate;
        if total <= 0.0 {
            break;
        }
        t += -(1.0 - rng.random::<f64>()).ln() / total;
        if t >= horizon {
            break;
        }
        let (slot, state) = if rng.random::<f64>() * total < on_rate {
            let e = EdgeSlot(rng.random_range(0..m));
            if config.contains(e) {
                continue;
            }
            (e, true)
        } else {
            match config.uniform_present(rng) {
                Some(e) => (e, false),
                None => continue,
            }
        };
        apply_flip(&mut config, &mut view, slot, state)?;
        let largest = view.largest();
        largest_path.record(t, largest);
        for (v, path) in probe_paths.iter_mut() {
            path.record(t, view.size_of(*v));
        }
        events.push(Event { time: t, slot, new_state: state, largest });
    }

    Ok(TrajectoryRecord {
        n,
        p,
        horizon,
        events,
        largest_path,
        probe_paths,
        initial_edges,
        final_edges: config.edge_count(),
    })
}

/// Times at which `|L_n(t)| >= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSet {
    pub threshold: u32,
    /// Disjoint, sorted half-open intervals `[a, b)`.
    pub intervals: Vec<(f64, f64)>,
    pub measure: f64,
    pub delta: f64,
    /// Boundary crossings at times in `(0, delta]` strictly before the horizon.
    pub switch_count: usize,
}

pub fn exceptional_set(traj: &TrajectoryRecord, threshold: u32, delta: f64) -> Result<ExceptionalSet> {
    exceptional_set_of(&traj.largest_path, threshold, delta)
}

pub fn exceptional_set_of(path: &StepPath, threshold: u32, delta: f64) -> Result<ExceptionalSet> {
    if threshold < 1 {
        return Err(Error::Parameter("threshold must be at least 1".into()));
    }
    if !(delta > 0.0 && delta <= path.horizon()) {
        return Err(Error::Parameter(format!("delta must lie in (0, {}], got {delta}", path.horizon())));
    }
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for (a, b, v) in path.segments() {
        if v < threshold {
            continue;
        }
        match intervals.last_mut() {
            Some(last) if last.1 == a => last.1 = b,
            _ => intervals.push((a, b)),
        }
    }
    let measure = intervals.iter().map(|(a, b)| b - a).sum();
    let horizon = path.horizon();
    let switch_count = intervals
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .filter(|&t| t > 0.0 && t < horizon && t <= delta)
        .count();
    Ok(ExceptionalSet {
        threshold,
        intervals,
        measure,
        delta,
        switch_count,
    })
}

/// `omega_eps`: every slot independently rerandomized with probability `eps`.
///
/// A present edge survives with probability `1 - eps (1 - p)`; an absent slot
/// turns on with probability `eps p`. New edges are placed sparsely: their
/// number is binomial over the absent slots and positions are drawn by
/// rejection against the original configuration.
pub fn resample_configuration<R: Rng + ?Sized>(
    config: &Configuration,
    eps: f64,
    p: f64,
    rng: &mut R,
) -> Result<Configuration> {
    check_probability("eps", eps)?;
    check_probability("p", p)?;
    let space = config.space();
    if eps == 0.0 {
        return Ok(config.clone());
    }
    let drop = eps * (1.0 - p);
    let kept = config.edges().iter().copied().filter(|_| !rng.random_bool(drop));
    let mut out = Configuration::from_slots(space, kept)?;

    let absent = space.m() - config.edge_count() as u64;
    let fresh = Binomial::new(absent, eps * p)
        .map_err(|e| Error::Parameter(e.to_string()))?
        .sample(rng);
    let mut chosen = FxHashSet::default();
    while (chosen.len() as u64) < fresh {
        let e = EdgeSlot(rng.random_range(0..space.m()));
        if !config.contains(e) && chosen.insert(e) {
            out.insert(e)?;
        }
    }
    Ok(out)
}

/// Time-integrated occupation statistics of two probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZStatistics {
    pub z_u: f64,
    pub z_v: f64,
    /// `Z_u * Z_v`.
    pub z_uv: f64,
    /// `Z_u^2`.
    pub z_uu: f64,
}

/// `Z_w = ∫ 1{|C_w(t)| ∈ window} dt` for the probes `u` and `v`.
pub fn z_statistics(traj: &TrajectoryRecord, window: RangeInclusive<u32>, u: u32, v: u32) -> Result<ZStatistics> {
    let z_u = traj.probe(u)?.time_where(|s| window.contains(&s));
    let z_v = traj.probe(v)?.time_where(|s| window.contains(&s));
    Ok(ZStatistics {
        z_u,
        z_v,
        z_uv: z_u * z_v,
        z_uu: z_u * z_u,
    })
}
