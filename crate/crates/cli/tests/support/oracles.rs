//! Brute-force reference computations, written without the library's fast paths.

use erdyn::spectral::FunctionTable;

pub fn weight(omega: usize, m: u32, p: f64) -> f64 {
    (0..m).map(|e| if omega >> e & 1 == 1 { p } else { 1.0 - p }).product()
}

fn r(bit: bool, p: f64) -> f64 {
    if bit {
        ((1.0 - p) / p).sqrt()
    } else {
        -(p / (1.0 - p)).sqrt()
    }
}

pub fn chi(s: usize, omega: usize, m: u32, p: f64) -> f64 {
    (0..m).filter(|e| s >> e & 1 == 1).map(|e| r(omega >> e & 1 == 1, p)).product()
}

/// `chi[s][omega]` for all pairs.
pub fn chi_table(m: u32, p: f64) -> Vec<Vec<f64>> {
    let size = 1usize << m;
    (0..size).map(|s| (0..size).map(|w| chi(s, w, m, p)).collect()).collect()
}


pub fn weights(m: u32, p: f64) -> Vec<f64> {
    (0..1usize << m).map(|w| weight(w, m, p)).collect()
}

/// `f_hat(S) = sum_omega P(omega) f(omega) chi_S(omega)`, all `S`.
pub fn coefficients(values: &[f64], chi: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    chi.iter()
        .map(|row| row.iter().zip(values).zip(weights).map(|((c, v), w)| w * v * c).sum())
        .collect()
}

pub fn values(f: &FunctionTable) -> Vec<f64> {
    f.values().to_vec()
}

/// `E[f(omega) g(omega_eps)]` with the per-bit kernel multiplied out explicitly.
pub fn noisy_product(f: &[f64], g: &[f64], m: u32, p: f64, eps: f64) -> f64 {
    let size = 1usize << m;
    (0..size)
        .map(|w| {
            let inner: f64 = (0..size)
                .map(|w2| {
                    let k: f64 = (0..m)
                        .map(|e| {
                            let (a, b) = (w >> e & 1 == 1, w2 >> e & 1 == 1);
                            let redraw = if b { p } else { 1.0 - p };
                            (1.0 - eps) * f64::from(u8::from(a == b)) + eps * redraw
                        })
                        .product();
                    k * g[w2]
                })
                .sum();
            weight(w, m, p) * f[w] * inner
        })
        .sum()
}

pub fn expectation(f: &[f64], m: u32, p: f64) -> f64 {
    f.iter().enumerate().map(|(w, v)| weight(w, m, p) * v).sum()
}

pub fn increasing(f: &[f64], m: u32) -> bool {
    (0..1usize << m).all(|w| (0..m).all(|e| w >> e & 1 == 1 || f[w | 1 << e] >= f[w] - 1e-12))
}

pub fn jointly_monotone(f: &[f64], g: &[f64], m: u32) -> bool {
    (0..1usize << m).all(|w| {
        (0..m).all(|e| {
            let w2 = w ^ 1 << e;
            (f[w] - f[w2]) * (g[w] - g[w2]) >= 0.0
        })
    })
}

/// Component label of every vertex `1..=n` (index `v - 1`) from an edge list.
pub fn partition(n: u32, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n).collect();
    fn root(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            x = parent[x as usize];
        }
        x
    }
    for &(u, v) in edges {
        let (a, b) = (root(&mut parent, u - 1), root(&mut parent, v - 1));
        if a != b {
            parent[a as usize] = b;
        }
    }
    (0..n).map(|x| root(&mut parent, x)).collect()
}

pub fn component_size(labels: &[u32], v: u32) -> u32 {
    let l = labels[v as usize - 1];
    labels.iter().filter(|&&x| x == l).count() as u32
}
