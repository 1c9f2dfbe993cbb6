//! Fourier analysis on `{0,1}^m` under the product measure with bias `p`.
//!
//! The basis is `chi_S = prod_{e in S} r_e` with `r_e = sqrt((1-p)/p)` on a
//! present bit and `-sqrt(p/(1-p))` on an absent one. Configurations and
//! subsets are both bitmasks over `m <= 25` bits.

mod checks;
pub mod random;

pub use checks::{
    fkg_noise_check, jointly_monotone, noise_expectation_exact, noise_expectation_spectral, pivotal_identity_check,
    pivotal_set, revealment_bound_check, BoundCheck, FkgCheck, IdentityCheck,
};

use crate::error::{Error, Result};

pub const MAX_BITS: u32 = 25;

/// Accumulation tolerance for identities on tables with `m` bits.
pub fn tolerance(m: u32) -> f64 {
    if m <= 12 {
        1e-10
    } else {
        1e-8
    }
}

fn check_bias(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("bias p must lie strictly inside (0, 1), got {p}")))
    }
}

fn check_bits(m: u32) -> Result<()> {
    if m > MAX_BITS {
        Err(Error::TooManyBits { m, max: MAX_BITS })
    } else {
        Ok(())
    }
}

/// `r_e(omega)` for a single bit.
pub fn basis_value(bit: bool, p: f64) -> Result<f64> {
    check_bias(p)?;
    Ok(if bit { ((1.0 - p) / p).sqrt() } else { -(p / (1.0 - p)).sqrt() })
}

/// `chi_S(omega)`.
pub fn chi(subset: usize, omega: usize, p: f64) -> Result<f64> {
    let up = basis_value(true, p)?;
    let down = basis_value(false, p)?;
    let on = (subset & omega).count_ones() as i32;
    let off = (subset & !omega).count_ones() as i32;
    Ok(up.powi(on) * down.powi(off))
}

/// A real function on `{0,1}^m`, indexed by configuration bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    m: u32,
    p: f64,
    values: Vec<f64>,
    boolean: bool,
}

impl FunctionTable {
    pub fn new(m: u32, p: f64, values: Vec<f64>) -> Result<Self> {
        check_bits(m)?;
        check_bias(p)?;
        if values.len() != 1usize << m {
            return Err(Error::Mismatch(format!("{} values for {m} bits", values.len())));
        }
        let boolean = values.iter().all(|&v| v == 0.0 || v == 1.0);
        Ok(Self { m, p, values, boolean })
    }

    pub fn from_fn(m: u32, p: f64, f: impl Fn(usize) -> f64) -> Result<Self> {
        check_bits(m)?;
        Self::new(m, p, (0..1usize << m).map(f).collect())
    }

    pub fn constant(m: u32, p: f64, c: f64) -> Result<Self> {
        Self::from_fn(m, p, |_| c)
    }

    /// `f(omega) = omega(bit)`.
    pub fn dictator(m: u32, p: f64, bit: u32) -> Result<Self> {
        if bit >= m {
            return Err(Error::Parameter(format!("bit {bit} out of range for {m} bits")));
        }
        Self::from_fn(m, p, |w| (w >> bit & 1) as f64)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, omega: usize) -> f64 {
        self.values[omega]
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    /// `P(omega)` under the product measure.
    pub fn probability(&self, omega: usize) -> f64 {
        configuration_probabilities(self.m, self.p)[omega.count_ones() as usize]
    }

    /// `E[f]` by enumeration.
    pub fn expectation(&self) -> f64 {
        self.weighted_sum(|v| v)
    }

    /// `E[f^2]` by enumeration.
    pub fn second_moment(&self) -> f64 {
        self.weighted_sum(|v| v * v)
    }

    fn weighted_sum(&self, map: impl Fn(f64) -> f64) -> f64 {
        let probs = configuration_probabilities(self.m, self.p);
        self.values
            .iter()
            .enumerate()
            .map(|(w, &v)| probs[w.count_ones() as usize] * map(v))
            .sum()
    }

    /// Turning a bit on never decreases the value, up to round-off of order `1e-12`.
    ///
    /// The slack lets tables built by arithmetic (`(f + h) - f`) pass.
    pub fn is_increasing(&self) -> bool {
        (0..self.m).all(|e| {
            let bit = 1usize << e;
            (0..self.values.len()).filter(|w| w & bit == 0).all(|w| {
                let (low, high) = (self.values[w], self.values[w | bit]);
                high >= low - 1e-12 * low.abs().max(1.0)
            })
        })
    }

    /// Pointwise difference `self - other`.
    pub fn difference(&self, other: &FunctionTable) -> Result<FunctionTable> {
        same_shape(self.m, self.p, other.m, other.p)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        FunctionTable::new(self.m, self.p, values)
    }
}

/// `P(omega)` as a function of the number of present bits.
pub(crate) fn configuration_probabilities(m: u32, p: f64) -> Vec<f64> {
    (0..=m as i32).map(|k| p.powi(k) * (1.0 - p).powi(m as i32 - k)).collect()
}

pub(crate) fn same_shape(m1: u32, p1: f64, m2: u32, p2: f64) -> Result<()> {
    if m1 != m2 || p1 != p2 {
        return Err(Error::Mismatch(format!("(m = {m1}, p = {p1}) vs (m = {m2}, p = {p2})")));
    }
    Ok(())
}

/// Fourier coefficients `f_hat(S) = E[f chi_S]`, indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    m: u32,
    p: f64,
    coeffs: Vec<f64>,
}

impl SpectrumTable {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, subset: usize) -> f64 {
        self.coeffs[subset]
    }

    /// `sum_S f_hat(S)^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `sum_{|S| = k, S ∩ excluded = ∅} f_hat(S)^2`.
    pub fn level_energy(&self, k: u32, excluded: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(s, _)| s.count_ones() == k && s & excluded == 0)
            .map(|(_, c)| c * c)
            .sum()
    }
}

/// Exact coefficients by a per-bit butterfly, `O(m 2^m)`.
///
/// Each bit is decomposed on the orthonormal pair `{1, r_e}` of its biased
/// marginal: `(a, b) -> ((1-p) a + p b, sqrt(p(1-p)) (b - a))`.
pub fn transform(f: &FunctionTable) -> SpectrumTable {
    let p = f.p;
    let q = 1.0 - p;
    let s = (p * q).sqrt();
    let mut c = f.values.clone();
    for bit in 0..f.m {
        let half = 1usize << bit;
        for block in (0..c.len()).step_by(half << 1) {
            for i in block..block + half {
                let (a, b) = (c[i], c[i + half]);
                c[i] = q * a + p * b;
                c[i + half] = s * (b - a);
            }
        }
    }
    SpectrumTable { m: f.m, p, coeffs: c }
}

/// `f = sum_S f_hat(S) chi_S`.
pub fn inverse_transform(spectrum: &SpectrumTable) -> FunctionTable {
    let p = spectrum.p;
    let up = ((1.0 - p) / p).sqrt();
    let down = (p / (1.0 - p)).sqrt();
    let mut v = spectrum.coeffs.clone();
    for bit in 0..spectrum.m {
        let half = 1usize << bit;
        for block in (0..v.len()).step_by(half << 1) {
            for i in block..block + half {
                let (c0, c1) = (v[i], v[i + half]);
                v[i] = c0 - down * c1;
                v[i + half] = c0 + up * c1;
            }
        }
    }
    let boolean = v.iter().all(|&x| x == 0.0 || x == 1.0);
    FunctionTable {
        m: spectrum.m,
        p,
        values: v,
        boolean,
    }
}
