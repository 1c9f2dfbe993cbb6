use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Index of a potential edge of `K_n` in lexicographic order of `(u, v)`, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeSlot(pub u64);

/// The `n(n-1)/2` edge slots of the complete graph on vertices `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSpace {
    n: u32,
    m: u64,
}

impl EdgeSpace {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("vertex count must be at least 1".into()));
        }
        let n64 = u64::from(n);
        Ok(Self {
            n,
            m: n64 * (n64 - 1) / 2,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// First slot of the row of pairs `(u, u+1), ..., (u, n)`.
    #[inline]
    fn row_start(&self, u: u32) -> u64 {
        let u = u64::from(u);
        let n = u64::from(self.n);
        (u - 1) * (2 * n - u) / 2
    }

    pub fn index(&self, u: u32, v: u32) -> Result<EdgeSlot> {
        if u < 1 || u >= v || v > self.n {
            return Err(Error::InvalidPair { u, v, n: self.n });
        }
        Ok(EdgeSlot(self.row_start(u) + u64::from(v - u - 1)))
    }

    /// Like [`index`](Self::index) but accepts the endpoints in either order.
    pub fn index_unordered(&self, a: u32, b: u32) -> Result<EdgeSlot> {
        if a < b {
            self.index(a, b)
        } else {
            self.index(b, a)
        }
    }

    pub fn pair(&self, e: EdgeSlot) -> Result<(u32, u32)> {
        if e.0 >= self.m {
            return Err(Error::SlotOutOfRange { slot: e.0, m: self.m });
        }
        // row_start(x + 1) = x(2n - 1 - x)/2; invert the quadratic, then fix rounding.
        let b = 2.0 * f64::from(self.n) - 1.0;
        let disc = (b * b - 8.0 * e.0 as f64).max(0.0);
        let mut u = (((b - disc.sqrt()) / 2.0).floor() as i64 + 1).clamp(1, i64::from(self.n) - 1) as u32;
        while u > 1 && self.row_start(u) > e.0 {
            u -= 1;
        }
        while u + 1 < self.n && self.row_start(u + 1) <= e.0 {
            u += 1;
        }
        let v = u + 1 + (e.0 - self.row_start(u)) as u32;
        Ok((u, v))
    }

    /// Edges of one `ER(n, p)` sample, visited in increasing slot order.
    ///
    /// Gaps between successive present slots are geometric, so the cost is
    /// `O(p m)` in expectation rather than `O(m)`.
    pub fn sample_edges<'a, R: Rng + ?Sized>(&self, p: f64, rng: &'a mut R) -> Result<SkipSampler<'a, R>> {
        check_probability("p", p)?;
        // Inversion: floor(ln U / ln(1 - p)) is Geometric(p) on {0, 1, ...}.
        let gap = (p > 0.0).then(|| (-p).ln_1p());
        Ok(SkipSampler {
            space: *self,
            gap,
            next: 0,
            u: 1,
            rng,
        })
    }
}

/// Lexicographic edge index of the pair `(u, v)` in `K_n`.
pub fn edge_index(u: u32, v: u32, n: u32) -> Result<EdgeSlot> {
    EdgeSpace::new(n)?.index(u, v)
}

/// Iterator over the present edges of a freshly sampled `ER(n, p)`.
pub struct SkipSampler<'a, R: ?Sized> {
    space: EdgeSpace,
    /// `ln(1 - p)`; `None` when `p = 0`.
    gap: Option<f64>,
    next: u64,
    u: u32,
    rng: &'a mut R,
}

impl<R: Rng + ?Sized> Iterator for SkipSampler<'_, R> {
    type Item = (EdgeSlot, u32, u32);

    fn next(&mut self) -> Option<Self::Item> {
        let log_q = self.gap?;
        let u: f64 = self.rng.random();
        let skip = ((1.0 - u).ln() / log_q).floor();
        // `as` saturates, so an astronomically long gap simply runs past `m`.
        let slot = self.next.checked_add(skip as u64)?;
        if slot >= self.space.m {
            self.next = self.space.m;
            return None;
        }
        self.next = slot + 1;
        while self.space.row_start(self.u + 1) <= slot {
            self.u += 1;
        }
        let v = self.u + 1 + (slot - self.space.row_start(self.u)) as u32;
        Some((EdgeSlot(slot), self.u, v))
    }
}
