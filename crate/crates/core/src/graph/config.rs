use rand::Rng;
use rustc_hash::FxHashMap;

use super::edge_space::{EdgeSlot, EdgeSpace};
use crate::error::{Error, Result};

/// One instant of the graph: the set of present edges with mirrored adjacency.
///
/// The present set is kept as a dense array (uniform sampling and swap-remove
/// in `O(1)`) plus a slot -> position map.
#[derive(Debug, Clone)]
pub struct Configuration {
    space: EdgeSpace,
    present: Vec<EdgeSlot>,
    position: FxHashMap<u64, usize>,
    adjacency: Vec<Vec<u32>>,
}

impl Configuration {
    pub fn empty(space: EdgeSpace) -> Self {
        Self {
            space,
            present: Vec::new(),
            position: FxHashMap::default(),
            adjacency: vec![Vec::new(); space.n() as usize],
        }
    }

    pub fn from_slots<I: IntoIterator<Item = EdgeSlot>>(space: EdgeSpace, slots: I) -> Result<Self> {
        let mut config = Self::empty(space);
        for e in slots {
            config.insert(e)?;
        }
        Ok(config)
    }

    /// Builds a configuration on `m <= 64` slots from a bitmask (bit `i` = slot `i`).
    pub fn from_bitmask(space: EdgeSpace, mask: u64) -> Result<Self> {
        if space.m() > 64 {
            return Err(Error::TooManyBits { m: space.m() as u32, max: 64 });
        }
        let slots = (0..space.m()).filter(|i| mask >> i & 1 == 1).map(EdgeSlot);
        Self::from_slots(space, slots)
    }

    pub fn space(&self) -> EdgeSpace {
        self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn edge_count(&self) -> usize {
        self.present.len()
    }

    pub fn edges(&self) -> &[EdgeSlot] {
        &self.present
    }

    pub fn contains(&self, e: EdgeSlot) -> bool {
        self.position.contains_key(&e.0)
    }

    /// Neighbors of vertex `v` (1-based).
    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[(v - 1) as usize]
    }

    pub fn uniform_present<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<EdgeSlot> {
        if self.present.is_empty() {
            None
        } else {
            Some(self.present[rng.random_range(0..self.present.len())])
        }
    }

    /// Adds `e`; returns `false` if it was already present.
    pub fn insert(&mut self, e: EdgeSlot) -> Result<bool> {
        let (u, v) = self.space.pair(e)?;
        if self.position.contains_key(&e.0) {
            return Ok(false);
        }
        self.position.insert(e.0, self.present.len());
        self.present.push(e);
        self.adjacency[(u - 1) as usize].push(v);
        self.adjacency[(v - 1) as usize].push(u);
        Ok(true)
    }

    /// Removes `e`; returns `false` if it was absent.
    pub fn remove(&mut self, e: EdgeSlot) -> Result<bool> {
        let (u, v) = self.space.pair(e)?;
        let Some(idx) = self.position.remove(&e.0) else {
            return Ok(false);
        };
        self.present.swap_remove(idx);
        if let Some(moved) = self.present.get(idx) {
            self.position.insert(moved.0, idx);
        }
        detach(&mut self.adjacency[(u - 1) as usize], v);
        detach(&mut self.adjacency[(v - 1) as usize], u);
        Ok(true)
    }

    /// Present slots as a bitmask; only meaningful for `m <= 64`.
    pub fn to_bitmask(&self) -> u64 {
        self.present.iter().fold(0, |acc, e| acc | 1 << e.0)
    }

    pub fn sorted_edges(&self) -> Vec<EdgeSlot> {
        let mut out = self.present.clone();
        out.sort_unstable();
        out
    }
}

fn detach(list: &mut Vec<u32>, w: u32) {
    if let Some(i) = list.iter().position(|&x| x == w) {
        list.swap_remove(i);
    }
}

/// A static `ER(n, p)` configuration.
pub fn sample_er<R: Rng + ?Sized>(n: u32, p: f64, rng: &mut R) -> Result<Configuration> {
    let space = EdgeSpace::new(n)?;
    let mut config = Configuration::empty(space);
    let expected = (p * space.m() as f64).ceil() as usize;
    config.present.reserve(expected);
    config.position.reserve(expected);
    for (e, u, v) in space.sample_edges(p, rng)? {
        config.position.insert(e.0, config.present.len());
        config.present.push(e);
        config.adjacency[(u - 1) as usize].push(v);
        config.adjacency[(v - 1) as usize].push(u);
    }
    Ok(config)
}
