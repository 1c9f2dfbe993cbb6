//! Breadth-first revealment algorithm for `f_v = 1{|C_v| >= N}`.
//!
//! The algorithm keeps an ordered list of vertices known to lie in `C_v`,
//! starting from `[v]`. At step `i = 1, 2, ...` it declares 1 if the list
//! holds at least `N` vertices, declares 0 if the list holds fewer than `i`
//! vertices (every listed vertex was processed), and otherwise processes the
//! `i`-th listed vertex by querying its edges to every unlisted vertex in
//! ascending label order, appending the neighbors it finds.

use rand::Rng;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::graph::{components, Configuration, EdgeSlot, EdgeSpace};
use crate::spectral::FunctionTable;
use crate::stats::Moments;

/// Presence queries for edge slots; the only access path the algorithm has.
pub trait EdgeOracle {
    fn space(&self) -> EdgeSpace;
    fn query(&mut self, e: EdgeSlot) -> Result<bool>;
}

/// Answers from a materialized configuration and counts the queries.
pub struct ConfigOracle<'a> {
    config: &'a Configuration,
    pub queries: usize,
}

impl<'a> ConfigOracle<'a> {
    pub fn new(config: &'a Configuration) -> Self {
        Self { config, queries: 0 }
    }
}

impl EdgeOracle for ConfigOracle<'_> {
    fn space(&self) -> EdgeSpace {
        self.config.space()
    }

    fn query(&mut self, e: EdgeSlot) -> Result<bool> {
        self.queries += 1;
        Ok(self.config.contains(e))
    }
}

/// Configuration on at most 64 slots given as a bitmask.
#[derive(Debug, Clone, Copy)]
pub struct BitmaskOracle {
    space: EdgeSpace,
    mask: u64,
}

impl BitmaskOracle {
    pub fn new(space: EdgeSpace, mask: u64) -> Result<Self> {
        if space.m() > 64 {
            return Err(Error::TooManyBits { m: space.m() as u32, max: 64 });
        }
        Ok(Self { space, mask })
    }
}

impl EdgeOracle for BitmaskOracle {
    fn space(&self) -> EdgeSpace {
        self.space
    }

    fn query(&mut self, e: EdgeSlot) -> Result<bool> {
        Ok(self.mask >> e.0 & 1 == 1)
    }
}

/// Draws each queried slot as a fresh Bernoulli(`p`).
///
/// Equal in law to querying an `ER(n, p)` sample as long as no slot is asked
/// twice, which the breadth-first algorithm guarantees.
pub struct LazyOracle<'r, R: ?Sized> {
    space: EdgeSpace,
    p: f64,
    rng: &'r mut R,
}

impl<'r, R: Rng + ?Sized> LazyOracle<'r, R> {
    pub fn new(n: u32, p: f64, rng: &'r mut R) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self { space: EdgeSpace::new(n)?, p, rng })
    }
}

impl<R: Rng + ?Sized> EdgeOracle for LazyOracle<'_, R> {
    fn space(&self) -> EdgeSpace {
        self.space
    }

    fn query(&mut self, _e: EdgeSlot) -> Result<bool> {
        Ok(self.rng.random_bool(self.p))
    }
}

/// Result of one run of the breadth-first algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevealTrace {
    pub decision: bool,
    /// Queried slots `J`, in query order.
    pub revealed: Vec<EdgeSlot>,
    pub queries: usize,
    /// Vertices processed before termination.
    pub steps: u32,
    /// Every vertex listed by the end of the run, in listing order.
    pub list: Vec<u32>,
    final_len: usize,
}

impl RevealTrace {
    /// The list as it stood before the last processing step (`S_{tau-1}`).
    pub fn final_list(&self) -> &[u32] {
        &self.list[..self.final_len]
    }
}

struct Exploration {
    decision: bool,
    steps: u32,
    list: Vec<u32>,
    final_len: usize,
}

fn validate(n: u32, v: u32, threshold: u32) -> Result<()> {
    if v < 1 || v > n {
        return Err(Error::InvalidVertex { v, n });
    }
    if threshold < 1 || threshold > n {
        return Err(Error::Parameter(format!("threshold N = {threshold} must lie in 1..={n}")));
    }
    Ok(())
}

fn explore<O: EdgeOracle + ?Sized>(
    oracle: &mut O,
    v: u32,
    threshold: u32,
    mut on_reveal: impl FnMut(EdgeSlot, u32, u32),
) -> Result<Exploration> {
    let space = oracle.space();
    let n = space.n();
    validate(n, v, threshold)?;
    let mut listed = vec![false; n as usize + 1];
    let mut list = vec![v];
    listed[v as usize] = true;
    let mut final_len = 1;
    let mut step: u32 = 1;
    let decision = loop {
        if list.len() >= threshold as usize {
            break true;
        }
        if list.len() < step as usize {
            break false;
        }
        final_len = list.len();
        let x = list[step as usize - 1];
        // Vertices appended below were listed after their edge to x was queried.
        for w in 1..=n {
            if listed[w as usize] {
                continue;
            }
            let e = space.index_unordered(x, w)?;
            on_reveal(e, x, w);
            if oracle.query(e)? {
                listed[w as usize] = true;
                list.push(w);
            }
        }
        step += 1;
    };
    Ok(Exploration {
        decision,
        steps: step - 1,
        list,
        final_len,
    })
}

/// Runs the algorithm against `oracle`, recording every revealed slot.
pub fn bfs_reveal<O: EdgeOracle + ?Sized>(oracle: &mut O, v: u32, threshold: u32) -> Result<RevealTrace> {
    let mut revealed = Vec::new();
    let run = explore(oracle, v, threshold, |e, _, _| revealed.push(e))?;
    Ok(RevealTrace {
        decision: run.decision,
        queries: revealed.len(),
        revealed,
        steps: run.steps,
        list: run.list,
        final_len: run.final_len,
    })
}

/// Bitmask of the slots incident to `v` (`U_v`); requires `m <= 64`.
pub fn incident_mask(space: EdgeSpace, v: u32) -> Result<u64> {
    if space.m() > 64 {
        return Err(Error::TooManyBits { m: space.m() as u32, max: 64 });
    }
    let mut mask = 0u64;
    for w in (1..=space.n()).filter(|&w| w != v) {
        mask |= 1 << space.index_unordered(v, w)?.0;
    }
    Ok(mask)
}

/// Largest `n` accepted by the exhaustive enumeration (`2^21` configurations).
pub const MAX_EXACT_VERTICES: u32 = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactRevealment {
    /// `P(e ∈ J)` per slot.
    pub probabilities: Vec<f64>,
    /// `max_{e ∉ U_v} P(e ∈ J)`.
    pub off_incident: f64,
    /// `P(f_v = 1)`.
    pub decision_probability: f64,
}

/// Exact reveal probabilities by weighted enumeration of all configurations.
pub fn revealment_exact(n: u32, p: f64, v: u32, threshold: u32) -> Result<ExactRevealment> {
    if n > MAX_EXACT_VERTICES {
        return Err(Error::Parameter(format!(
            "exact revealment enumerates 2^(n(n-1)/2) configurations; n = {n} exceeds {MAX_EXACT_VERTICES}"
        )));
    }
    check_probability("p", p)?;
    let space = EdgeSpace::new(n)?;
    validate(n, v, threshold)?;
    let m = space.m() as u32;
    let weights: Vec<f64> = (0..=m as i32).map(|k| p.powi(k) * (1.0 - p).powi(m as i32 - k)).collect();
    let mut probabilities = vec![0.0; m as usize];
    let mut decision_probability = 0.0;
    for mask in 0..1u64 << m {
        let weight = weights[mask.count_ones() as usize];
        if weight == 0.0 {
            continue;
        }
        let mut oracle = BitmaskOracle::new(space, mask)?;
        let run = explore(&mut oracle, v, threshold, |e, _, _| probabilities[e.0 as usize] += weight)?;
        if run.decision {
            decision_probability += weight;
        }
    }
    let incident = incident_mask(space, v)?;
    let off_incident = (0..m as usize)
        .filter(|&e| incident >> e & 1 == 0)
        .map(|e| probabilities[e])
        .fold(0.0, f64::max);
    Ok(ExactRevealment {
        probabilities,
        off_incident,
        decision_probability,
    })
}

/// Truth table of `1{|C_v| >= N}` over all configurations of `K_n`, from full component labelling.
pub fn component_indicator_table(n: u32, v: u32, threshold: u32, p: f64) -> Result<FunctionTable> {
    let space = EdgeSpace::new(n)?;
    validate(n, v, threshold)?;
    let m = space.m() as u32;
    if m > crate::spectral::MAX_BITS {
        return Err(Error::TooManyBits { m, max: crate::spectral::MAX_BITS });
    }
    let values = (0..1u64 << m)
        .map(|mask| {
            let config = Configuration::from_bitmask(space, mask)?;
            Ok(f64::from(u8::from(components(&config).size_of(v) >= threshold)))
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionTable::new(m, p, values)
}

/// Pooled Monte Carlo reveal frequencies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevealmentEstimate {
    pub n: u32,
    pub threshold: u32,
    pub reps: u64,
    /// Mean fraction of `U_v` revealed per run.
    pub incident: Moments,
    /// Mean fraction of the slots off `U_v` revealed per run; by symmetry every
    /// such slot has the same reveal probability, so this estimates `R_{U_v}`.
    pub off_incident: Moments,
    pub decision: Moments,
    /// Per-slot frequencies, kept only when `m <= PER_SLOT_LIMIT`.
    pub per_slot: Option<Vec<f64>>,
}

impl RevealmentEstimate {
    /// Half-width `z * stderr` around the pooled off-`U_v` frequency.
    pub fn off_incident_radius(&self, z: f64) -> f64 {
        z * self.off_incident.stderr()
    }
}

/// Reveal tallies of one run on a lazily sampled `ER(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RevealCounts {
    /// Revealed slots incident to `v`.
    pub incident: u64,
    pub off_incident: u64,
    pub decision: bool,
}

pub fn reveal_once<R: Rng + ?Sized>(n: u32, p: f64, v: u32, threshold: u32, rng: &mut R) -> Result<RevealCounts> {
    let (mut incident, mut off_incident) = (0u64, 0u64);
    let mut oracle = LazyOracle::new(n, p, rng)?;
    let run = explore(&mut oracle, v, threshold, |_, x, w| {
        if x == v || w == v {
            incident += 1;
        } else {
            off_incident += 1;
        }
    })?;
    Ok(RevealCounts {
        incident,
        off_incident,
        decision: run.decision,
    })
}

pub const PER_SLOT_LIMIT: u64 = 1 << 16;

pub fn revealment_estimate<R: Rng + ?Sized>(
    n: u32,
    p: f64,
    v: u32,
    threshold: u32,
    reps: u64,
    rng: &mut R,
) -> Result<RevealmentEstimate> {
    if reps < 1 {
        return Err(Error::Parameter("reps must be at least 1".into()));
    }
    let space = EdgeSpace::new(n)?;
    validate(n, v, threshold)?;
    let incident_slots = f64::from(n - 1);
    let off_slots = (space.m() - u64::from(n - 1)) as f64;
    let mut per_slot = (space.m() <= PER_SLOT_LIMIT).then(|| vec![0u64; space.m() as usize]);

    let mut incident = Moments::default();
    let mut off_incident = Moments::default();
    let mut decision = Moments::default();
    for _ in 0..reps {
        let (mut on_u, mut off_u) = (0u64, 0u64);
        let mut oracle = LazyOracle::new(n, p, rng)?;
        let run = explore(&mut oracle, v, threshold, |e, x, w| {
            if x == v || w == v {
                on_u += 1;
            } else {
                off_u += 1;
            }
            if let Some(counts) = per_slot.as_mut() {
                counts[e.0 as usize] += 1;
            }
        })?;
        incident.push(on_u as f64 / incident_slots);
        off_incident.push(if off_slots > 0.0 { off_u as f64 / off_slots } else { 0.0 });
        decision.push(f64::from(u8::from(run.decision)));
    }
    Ok(RevealmentEstimate {
        n,
        threshold,
        reps,
        incident,
        off_incident,
        decision,
        per_slot: per_slot.map(|c| c.into_iter().map(|k| k as f64 / reps as f64).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: u32, pairs: &[(u32, u32)]) -> Configuration {
        let space = EdgeSpace::new(n).unwrap();
        Configuration::from_slots(space, pairs.iter().map(|&(u, v)| space.index(u, v).unwrap())).unwrap()
    }

    #[test]
    fn hand_traced_example() {
        let config = graph(3, &[(1, 2)]);
        let mut oracle = ConfigOracle::new(&config);
        let trace = bfs_reveal(&mut oracle, 1, 2).unwrap();
        let space = config.space();
        assert!(trace.decision);
        assert_eq!(trace.revealed, vec![space.index(1, 2).unwrap(), space.index(1, 3).unwrap()]);
        assert_eq!(trace.list, vec![1, 2]);
        assert_eq!(trace.final_list(), &[1]);
        assert_eq!(oracle.queries, 2);
    }

    #[test]
    fn trivial_threshold_reveals_nothing() {
        let config = graph(4, &[(1, 2), (2, 3)]);
        let trace = bfs_reveal(&mut ConfigOracle::new(&config), 2, 1).unwrap();
        assert!(trace.decision);
        assert!(trace.revealed.is_empty());
        assert_eq!(trace.steps, 0);
    }

    #[test]
    fn isolated_vertex() {
        let config = graph(5, &[(2, 3), (3, 4)]);
        let trace = bfs_reveal(&mut ConfigOracle::new(&config), 1, 2).unwrap();
        assert!(!trace.decision);
        assert_eq!(trace.queries, 4);
        assert_eq!(trace.final_list(), &[1]);
    }

    #[test]
    fn exact_probabilities_basics() {
        let space = EdgeSpace::new(4).unwrap();
        let incident = incident_mask(space, 1).unwrap();
        let exact = revealment_exact(4, 0.25, 1, 2).unwrap();
        for e in 0..6 {
            if incident >> e & 1 == 1 {
                assert!((exact.probabilities[e] - 1.0).abs() < 1e-14);
            }
        }
        let none = revealment_exact(4, 0.25, 1, 1).unwrap();
        assert!(none.probabilities.iter().all(|&q| q == 0.0));
        assert!(revealment_exact(8, 0.25, 1, 2).is_err());
    }

    #[test]
    fn exact_off_incident_value_k4() {
        // Independent count: with N = 2 on K_4 the algorithm stops after processing
        // vertex 1 unless 1 is isolated, so no edge off U_1 is ever revealed.
        let exact = revealment_exact(4, 0.25, 1, 2).unwrap();
        assert_eq!(exact.off_incident, 0.0);
        // With N = 3, compare against a direct enumeration of the 64 configurations.
        let space = EdgeSpace::new(4).unwrap();
        let e23 = space.index(2, 3).unwrap().0 as usize;
        let p: f64 = 0.25;
        let mut direct = 0.0;
        for mask in 0..64u64 {
            let config = Configuration::from_bitmask(space, mask).unwrap();
            let trace = bfs_reveal(&mut ConfigOracle::new(&config), 1, 3).unwrap();
            if trace.revealed.iter().any(|e| e.0 as usize == e23) {
                direct += p.powi(mask.count_ones() as i32) * (1.0 - p).powi(6 - mask.count_ones() as i32);
            }
        }
        let exact = revealment_exact(4, 0.25, 1, 3).unwrap();
        assert!((exact.probabilities[e23] - direct).abs() < 1e-14);
        // One of 1-2, 1-3 present and the rest of U_1 absent: that neighbor is processed.
        let single = 2.0 * p * (1.0 - p) * (1.0 - p);
        assert!(exact.probabilities[e23] >= single - 1e-14);
    }

    #[test]
    fn decision_matches_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..300 {
            let n = rng.random_range(2..30);
            let config = crate::graph::sample_er(n, 1.2 / f64::from(n), &mut rng).unwrap();
            let view = components(&config);
            let v = rng.random_range(1..=n);
            let threshold = rng.random_range(1..=n);
            let mut oracle = ConfigOracle::new(&config);
            let trace = bfs_reveal(&mut oracle, v, threshold).unwrap();
            assert_eq!(trace.decision, view.size_of(v) >= threshold);
            assert_eq!(trace.queries, oracle.queries);
            assert!(trace.final_list().len() <= threshold as usize);
            assert!(trace.steps <= threshold);
            assert!(trace.list.iter().all(|&w| view.connected(v, w)));
            let mut seen = trace.revealed.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), trace.revealed.len());
        }
    }

    #[test]
    fn estimate_agrees_with_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let (n, p, threshold, reps) = (6u32, 0.3, 3u32, 20_000u64);
        let exact = revealment_exact(n, p, 1, threshold).unwrap();
        let est = revealment_estimate(n, p, 1, threshold, reps, &mut rng).unwrap();
        let freq = est.per_slot.as_ref().unwrap();
        for (q, f) in exact.probabilities.iter().zip(freq) {
            let se = (q * (1.0 - q) / reps as f64).sqrt().max(1e-9);
            assert!((q - f).abs() <= 4.0 * se, "exact {q} estimate {f}");
        }
        let se = est.off_incident.stderr();
        assert!((est.off_incident.mean - exact.off_incident).abs() <= 4.0 * se + 1e-12);
        let se = est.decision.stderr();
        assert!((est.decision.mean - exact.decision_probability).abs() <= 4.0 * se);
    }

    #[test]
    fn indicator_table_matches_algorithm() {
        let table = component_indicator_table(4, 1, 3, 0.25).unwrap();
        let space = EdgeSpace::new(4).unwrap();
        for mask in 0..64u64 {
            let mut oracle = BitmaskOracle::new(space, mask).unwrap();
            let trace = bfs_reveal(&mut oracle, 1, 3).unwrap();
            assert_eq!(table.value(mask as usize), f64::from(u8::from(trace.decision)));
        }
    }
}
