use rand::Rng;

use super::edge_space::EdgeSpace;
use crate::error::Result;

/// Disjoint sets over `0..n` with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns the size of the merged set.
    pub fn union(&mut self, a: u32, b: u32) -> u32 {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return self.size[ra as usize];
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.size[ra as usize]
    }

    pub fn set_size(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }
}

/// Component statistics of one static `ER(n, p)` sample.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticSample {
    /// `|C_1|`.
    pub root_size: u32,
    /// `|L_n|`.
    pub largest: u32,
    /// Vertices in components of size at least the requested threshold.
    pub vertices_at_least: u64,
}

/// Samples `ER(n, p)` edge by edge into a union-find and reports component statistics.
///
/// Equal in law to [`components`](super::components) on [`sample_er`](super::sample_er)
/// but never materializes adjacency; used for large replica counts.
pub fn sample_static<R: Rng + ?Sized>(n: u32, p: f64, threshold: u32, rng: &mut R) -> Result<StaticSample> {
    let space = EdgeSpace::new(n)?;
    let mut sets = DisjointSets::new(n as usize);
    let mut largest = 1;
    for (_, u, v) in space.sample_edges(p, rng)? {
        largest = largest.max(sets.union(u - 1, v - 1));
    }
    let root_size = sets.set_size(0);
    let mut vertices_at_least = 0u64;
    for x in 0..n {
        if sets.parent[x as usize] == x && sets.size[x as usize] >= threshold {
            vertices_at_least += u64::from(sets.size[x as usize]);
        }
    }
    Ok(StaticSample {
        root_size,
        largest,
        vertices_at_least,
    })
}
