use super::config::Configuration;
use super::edge_space::EdgeSlot;
use crate::error::{Error, Result};

/// Exact partition of the vertices into connected components.
///
/// Labels are recycled; only the induced partition is meaningful. A size
/// histogram keeps the largest-component query `O(1)`.
#[derive(Debug, Clone)]
pub struct ComponentView {
    label: Vec<u32>,
    size: Vec<u32>,
    free: Vec<u32>,
    histogram: Vec<u32>,
    largest: u32,
    scratch: Scratch,
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    mark: Vec<u32>,
    epoch: u32,
    queue_a: Vec<u32>,
    queue_b: Vec<u32>,
}

impl Scratch {
    fn with_len(n: usize) -> Self {
        Self {
            mark: vec![0; n],
            epoch: 0,
            queue_a: Vec::new(),
            queue_b: Vec::new(),
        }
    }

    /// Two fresh marks distinct from anything currently stored.
    fn fresh_pair(&mut self) -> (u32, u32) {
        if self.epoch >= u32::MAX - 2 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 0;
        }
        self.epoch += 2;
        (self.epoch - 1, self.epoch)
    }
}

/// How an applied flip changed the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipEffect {
    /// Insertion joined two components.
    Merged,
    /// Insertion inside one component, or deletion of a non-bridge.
    Unchanged,
    /// Deletion of a bridge.
    Split,
}

impl ComponentView {
    pub fn n(&self) -> u32 {
        self.label.len() as u32
    }

    #[inline]
    pub fn label(&self, v: u32) -> u32 {
        self.label[(v - 1) as usize]
    }

    /// `|C_v|`.
    #[inline]
    pub fn size_of(&self, v: u32) -> u32 {
        self.size[self.label(v) as usize]
    }

    pub fn connected(&self, u: u32, v: u32) -> bool {
        self.label(u) == self.label(v)
    }

    /// `|L_n|`.
    #[inline]
    pub fn largest(&self) -> u32 {
        self.largest
    }

    pub fn component_count(&self) -> usize {
        self.histogram.iter().map(|&c| c as usize).sum()
    }

    /// Number of components of each size, indexed by size.
    pub fn histogram(&self) -> &[u32] {
        &self.histogram
    }

    /// The multiset of component sizes, largest first.
    pub fn sizes(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.component_count());
        for (s, &c) in self.histogram.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(s as u32, c as usize));
        }
        out
    }

    /// Number of vertices lying in components of size at least `k`.
    pub fn vertices_in_components_at_least(&self, k: u32) -> u64 {
        self.histogram
            .iter()
            .enumerate()
            .skip(k as usize)
            .map(|(s, &c)| s as u64 * u64::from(c))
            .sum()
    }

    /// True iff both views induce the same vertex partition.
    pub fn same_partition(&self, other: &ComponentView) -> bool {
        if self.label.len() != other.label.len() || self.histogram != other.histogram {
            return false;
        }
        let mut forward = vec![u32::MAX; self.size.len()];
        let mut backward = vec![u32::MAX; other.size.len()];
        for (&a, &b) in self.label.iter().zip(&other.label) {
            let (fa, bb) = (&mut forward[a as usize], &mut backward[b as usize]);
            if *fa == u32::MAX && *bb == u32::MAX {
                *fa = b;
                *bb = a;
            } else if *fa != b || *bb != a {
                return false;
            }
        }
        true
    }

    fn alloc_label(&mut self) -> u32 {
        match self.free.pop() {
            Some(l) => l,
            None => {
                self.size.push(0);
                (self.size.len() - 1) as u32
            }
        }
    }

    fn hist_remove(&mut self, s: u32) {
        self.histogram[s as usize] -= 1;
    }

    fn hist_add(&mut self, s: u32) {
        self.histogram[s as usize] += 1;
        self.largest = self.largest.max(s);
    }

    fn settle_largest(&mut self) {
        while self.largest > 0 && self.histogram[self.largest as usize] == 0 {
            self.largest -= 1;
        }
    }

    /// Relabels the component of `start` to `to`, walking the current adjacency.
    fn relabel_from(&mut self, config: &Configuration, start: u32, to: u32) {
        let from = self.label(start);
        let queue = &mut self.scratch.queue_a;
        queue.clear();
        queue.push(start);
        self.label[(start - 1) as usize] = to;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &w in config.neighbors(x) {
                let slot = &mut self.label[(w - 1) as usize];
                if *slot == from {
                    *slot = to;
                    queue.push(w);
                }
            }
        }
    }
}

/// Full recomputation of the component partition by breadth-first search.
pub fn components(config: &Configuration) -> ComponentView {
    let n = config.n() as usize;
    let mut label = vec![u32::MAX; n];
    let mut size = Vec::new();
    let mut histogram = vec![0u32; n + 1];
    let mut queue = Vec::with_capacity(n);
    for root in 1..=n as u32 {
        if label[(root - 1) as usize] != u32::MAX {
            continue;
        }
        let id = size.len() as u32;
        label[(root - 1) as usize] = id;
        queue.clear();
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &w in config.neighbors(x) {
                let slot = &mut label[(w - 1) as usize];
                if *slot == u32::MAX {
                    *slot = id;
                    queue.push(w);
                }
            }
        }
        size.push(queue.len() as u32);
        histogram[queue.len()] += 1;
    }
    let largest = size.iter().copied().max().unwrap_or(0);
    ComponentView {
        label,
        size,
        free: Vec::new(),
        histogram,
        largest,
        scratch: Scratch::with_len(n),
    }
}

/// Sets edge `e` to `new_state`, keeping `view` exact.
///
/// Insertion relabels the smaller of the two components. Deletion runs two
/// interleaved searches from the endpoints; the first to exhaust its side
/// (without meeting the other) is the piece that split off, so the work is
/// proportional to the smaller side.
pub fn apply_flip(
    config: &mut Configuration,
    view: &mut ComponentView,
    e: EdgeSlot,
    new_state: bool,
) -> Result<FlipEffect> {
    if config.contains(e) == new_state {
        return Err(Error::NoOpFlip { slot: e.0, state: new_state });
    }
    let (a, b) = config.space().pair(e)?;
    if new_state {
        let (la, lb) = (view.label(a), view.label(b));
        let effect = if la == lb {
            FlipEffect::Unchanged
        } else {
            let (sa, sb) = (view.size[la as usize], view.size[lb as usize]);
            let (small_root, small, big) = if sa <= sb { (a, la, lb) } else { (b, lb, la) };
            view.relabel_from(config, small_root, big);
            view.hist_remove(sa);
            view.hist_remove(sb);
            view.size[big as usize] = sa + sb;
            view.size[small as usize] = 0;
            view.free.push(small);
            view.hist_add(sa + sb);
            FlipEffect::Merged
        };
        config.insert(e)?;
        Ok(effect)
    } else {
        config.remove(e)?;
        Ok(split_if_bridge(config, view, a, b))
    }
}

fn split_if_bridge(config: &Configuration, view: &mut ComponentView, a: u32, b: u32) -> FlipEffect {
    let (mark_a, mark_b) = view.scratch.fresh_pair();
    let scratch = &mut view.scratch;
    scratch.mark[(a - 1) as usize] = mark_a;
    scratch.mark[(b - 1) as usize] = mark_b;
    scratch.queue_a.clear();
    scratch.queue_b.clear();
    scratch.queue_a.push(a);
    scratch.queue_b.push(b);
    let (mut head_a, mut head_b) = (0usize, 0usize);

    // Side A expands one vertex, then side B; the first empty frontier is the cut-off piece.
    let detached_is_a = loop {
        if head_a == scratch.queue_a.len() {
            break true;
        }
        let x = scratch.queue_a[head_a];
        head_a += 1;
        for &w in config.neighbors(x) {
            let m = &mut scratch.mark[(w - 1) as usize];
            if *m == mark_b {
                return FlipEffect::Unchanged;
            }
            if *m != mark_a {
                *m = mark_a;
                scratch.queue_a.push(w);
            }
        }
        if head_b == scratch.queue_b.len() {
            break false;
        }
        let x = scratch.queue_b[head_b];
        head_b += 1;
        for &w in config.neighbors(x) {
            let m = &mut scratch.mark[(w - 1) as usize];
            if *m == mark_a {
                return FlipEffect::Unchanged;
            }
            if *m != mark_b {
                *m = mark_b;
                scratch.queue_b.push(w);
            }
        }
    };

    let old = view.label(a);
    let old_size = view.size[old as usize];
    let fresh = view.alloc_label();
    let piece = if detached_is_a {
        std::mem::take(&mut view.scratch.queue_a)
    } else {
        std::mem::take(&mut view.scratch.queue_b)
    };
    for &x in &piece {
        view.label[(x - 1) as usize] = fresh;
    }
    let piece_size = piece.len() as u32;
    if detached_is_a {
        view.scratch.queue_a = piece;
    } else {
        view.scratch.queue_b = piece;
    }
    view.size[fresh as usize] = piece_size;
    view.size[old as usize] = old_size - piece_size;
    view.hist_remove(old_size);
    view.hist_add(piece_size);
    view.hist_add(old_size - piece_size);
    view.settle_largest();
    FlipEffect::Split
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(n: u32, pairs: &[(u32, u32)]) -> Configuration {
        let space = EdgeSpace::new(n).unwrap();
        Configuration::from_slots(space, pairs.iter().map(|&(u, v)| space.index(u, v).unwrap())).unwrap()
    }

    #[test]
    fn static_examples() {
        let v = components(&graph(3, &[(1, 2)]));
        assert_eq!(v.sizes(), vec![2, 1]);
        assert_eq!(v.largest(), 2);
        let v = components(&graph(6, &[]));
        assert_eq!(v.sizes(), vec![1; 6]);
        assert_eq!(v.largest(), 1);
        let v = components(&graph(4, &[(1, 2), (2, 3), (3, 4)]));
        assert_eq!(v.sizes(), vec![4]);
    }

    #[test]
    fn flip_examples() {
        let mut c = graph(3, &[]);
        let mut v = components(&c);
        let e12 = c.space().index(1, 2).unwrap();
        assert_eq!(apply_flip(&mut c, &mut v, e12, true).unwrap(), FlipEffect::Merged);
        assert_eq!(v.sizes(), vec![2, 1]);

        let mut c = graph(3, &[(1, 2), (1, 3), (2, 3)]);
        let mut v = components(&c);
        assert_eq!(apply_flip(&mut c, &mut v, e12, false).unwrap(), FlipEffect::Unchanged);
        assert_eq!(v.sizes(), vec![3]);

        let mut c = graph(4, &[(1, 2), (2, 3), (3, 4)]);
        let mut v = components(&c);
        let e23 = c.space().index(2, 3).unwrap();
        assert_eq!(apply_flip(&mut c, &mut v, e23, false).unwrap(), FlipEffect::Split);
        assert_eq!(v.sizes(), vec![2, 2]);
        assert!(v.connected(1, 2) && v.connected(3, 4) && !v.connected(2, 3));
    }

    #[test]
    fn no_op_flip_is_rejected() {
        let mut c = graph(3, &[(1, 2)]);
        let mut v = components(&c);
        let e12 = c.space().index(1, 2).unwrap();
        let e13 = c.space().index(1, 3).unwrap();
        assert_eq!(
            apply_flip(&mut c, &mut v, e12, true),
            Err(Error::NoOpFlip { slot: e12.0, state: true })
        );
        assert!(apply_flip(&mut c, &mut v, e13, false).is_err());
    }

    #[test]
    fn same_partition_ignores_labels() {
        let a = components(&graph(4, &[(1, 2)]));
        let b = components(&graph(4, &[(3, 4)]));
        let c = components(&graph(4, &[(1, 2)]));
        assert!(a.same_partition(&c));
        assert!(!a.same_partition(&b));
    }

    #[test]
    fn insert_then_delete_restores_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(2..40);
            let mut c = crate::graph::sample_er(n, 1.5 / f64::from(n), &mut rng).unwrap();
            let mut v = components(&c);
            let before = v.clone();
            let e = EdgeSlot(rng.random_range(0..c.space().m()));
            if c.contains(e) {
                continue;
            }
            apply_flip(&mut c, &mut v, e, true).unwrap();
            apply_flip(&mut c, &mut v, e, false).unwrap();
            assert!(v.same_partition(&before));
        }
    }

    #[test]
    fn vertices_in_large_components() {
        let v = components(&graph(7, &[(1, 2), (2, 3), (4, 5)]));
        assert_eq!(v.vertices_in_components_at_least(2), 5);
        assert_eq!(v.vertices_in_components_at_least(3), 3);
        assert_eq!(v.vertices_in_components_at_least(4), 0);
    }
}
