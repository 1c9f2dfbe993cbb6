use serde::Serialize;

use super::{check_bits, configuration_probabilities, same_shape, transform, FunctionTable, SpectrumTable};
use crate::error::{check_probability, Error, Result};

/// Largest table size accepted by the `O(4^m)` enumeration.
pub const MAX_EXACT_NOISE_BITS: u32 = 10;

/// Slack for inequalities evaluated in floating point.
const INEQUALITY_SLACK: f64 = 1e-12;

/// `E[f(omega) g(omega_eps)] = sum_S f_hat(S) g_hat(S) (1 - eps)^{|S|}`.
pub fn noise_expectation_spectral(fhat: &SpectrumTable, ghat: &SpectrumTable, eps: f64) -> Result<f64> {
    same_shape(fhat.m, fhat.p, ghat.m, ghat.p)?;
    check_probability("eps", eps)?;
    let decay: Vec<f64> = (0..=fhat.m as i32).map(|k| (1.0 - eps).powi(k)).collect();
    Ok(fhat
        .coeffs
        .iter()
        .zip(&ghat.coeffs)
        .enumerate()
        .map(|(s, (a, b))| a * b * decay[s.count_ones() as usize])
        .sum())
}

/// `E[f(omega) g(omega_eps)]` by summing over all pairs `(omega, omega')`.
///
/// Per bit, `omega'` keeps the value of `omega` with probability `1 - eps`
/// and is otherwise redrawn from the biased marginal.
pub fn noise_expectation_exact(f: &FunctionTable, g: &FunctionTable, eps: f64) -> Result<f64> {
    same_shape(f.m, f.p, g.m, g.p)?;
    check_probability("eps", eps)?;
    if f.m > MAX_EXACT_NOISE_BITS {
        return Err(Error::TooManyBits { m: f.m, max: MAX_EXACT_NOISE_BITS });
    }
    let (m, p) = (f.m, f.p);
    let probs = configuration_probabilities(m, p);
    let powers = |base: f64| -> Vec<f64> { (0..=m as i32).map(|k| base.powi(k)).collect() };
    let stay_on = powers(1.0 - eps + eps * p);
    let stay_off = powers(1.0 - eps + eps * (1.0 - p));
    let turn_on = powers(eps * p);
    let turn_off = powers(eps * (1.0 - p));
    let full = (1usize << m) - 1;

    let mut total = 0.0;
    for (w, &fw) in f.values.iter().enumerate() {
        if fw == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for (w2, &gw2) in g.values.iter().enumerate() {
            let n11 = (w & w2).count_ones() as usize;
            let n00 = (!(w | w2) & full).count_ones() as usize;
            let n01 = (!w & w2).count_ones() as usize;
            let n10 = (w & !w2).count_ones() as usize;
            inner += stay_on[n11] * stay_off[n00] * turn_on[n01] * turn_off[n10] * gw2;
        }
        total += probs[w.count_ones() as usize] * fw * inner;
    }
    Ok(total)
}

/// Bits whose flip changes `f` at `omega`, as a bitmask.
pub fn pivotal_set(f: &FunctionTable, omega: usize) -> usize {
    (0..f.m)
        .map(|e| 1usize << e)
        .filter(|&bit| f.values[omega ^ bit] != f.values[omega])
        .fold(0, |acc, bit| acc | bit)
}

/// Every single-bit increment of `f` and `g` has the same sign (or one is zero).
pub fn jointly_monotone(f: &FunctionTable, g: &FunctionTable) -> Result<bool> {
    if f.m != g.m {
        return Err(Error::Mismatch(format!("{} bits vs {} bits", f.m, g.m)));
    }
    Ok((0..f.m).all(|e| {
        let bit = 1usize << e;
        (0..f.values.len()).all(|w| {
            let df = f.values[w] - f.values[w ^ bit];
            let dg = g.values[w] - g.values[w ^ bit];
            df * dg >= 0.0
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// Both sides of `sum_{S ∋ e} f_hat(S) g_hat(S) = p(1-p) P(e ∈ P_f ∩ P_g)`.
pub fn pivotal_identity_check(f: &FunctionTable, g: &FunctionTable, e: u32) -> Result<IdentityCheck> {
    same_shape(f.m, f.p, g.m, g.p)?;
    if e >= f.m {
        return Err(Error::Parameter(format!("bit {e} out of range for {} bits", f.m)));
    }
    if !f.boolean || !g.boolean {
        return Err(Error::Precondition("pivotality identity needs {0,1}-valued functions"));
    }
    if !jointly_monotone(f, g)? {
        return Err(Error::Precondition("pivotality identity needs jointly monotone functions"));
    }
    let bit = 1usize << e;
    let (fhat, ghat) = (transform(f), transform(g));
    let lhs: f64 = (0..fhat.coeffs.len())
        .filter(|s| s & bit != 0)
        .map(|s| fhat.coeffs[s] * ghat.coeffs[s])
        .sum();
    let probs = configuration_probabilities(f.m, f.p);
    let both_pivotal: f64 = (0..f.values.len())
        .filter(|&w| f.values[w ^ bit] != f.values[w] && g.values[w ^ bit] != g.values[w])
        .map(|w| probs[w.count_ones() as usize])
        .sum();
    let rhs = f.p * (1.0 - f.p) * both_pivotal;
    Ok(IdentityCheck { lhs, rhs, diff: (lhs - rhs).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FkgCheck {
    /// `E[g(omega) g(omega_eps)] - E[g]^2`.
    pub lhs: f64,
    /// `E[f(omega) f(omega_eps)] - E[f]^2`.
    pub rhs: f64,
    pub holds: bool,
}

/// Noise covariance comparison for `f` and `g - f` both increasing.
pub fn fkg_noise_check(f: &FunctionTable, g: &FunctionTable, eps: f64) -> Result<FkgCheck> {
    same_shape(f.m, f.p, g.m, g.p)?;
    if !f.is_increasing() {
        return Err(Error::Precondition("f must be increasing"));
    }
    if !g.difference(f)?.is_increasing() {
        return Err(Error::Precondition("g - f must be increasing"));
    }
    let lhs = noise_expectation_exact(g, g, eps)? - g.expectation().powi(2);
    let rhs = noise_expectation_exact(f, f, eps)? - f.expectation().powi(2);
    Ok(FkgCheck { lhs, rhs, holds: lhs >= rhs - INEQUALITY_SLACK })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    /// `sum_{|S| = k, S ∩ U = ∅} f_hat(S)^2`.
    pub lhs: f64,
    /// `max_{e ∉ U} P(e revealed) E[f^2] k`.
    pub rhs: f64,
    pub holds: bool,
}

/// Level-`k` Fourier weight off `U` against the revealment of an algorithm computing `f`.
pub fn revealment_bound_check(
    f: &FunctionTable,
    reveal_probabilities: &[f64],
    excluded: usize,
    k: u32,
) -> Result<BoundCheck> {
    check_bits(f.m)?;
    if k < 1 {
        return Err(Error::Parameter("level k must be at least 1".into()));
    }
    if reveal_probabilities.len() != f.m as usize {
        return Err(Error::Mismatch(format!(
            "{} reveal probabilities for {} bits",
            reveal_probabilities.len(),
            f.m
        )));
    }
    let revealment = (0..f.m as usize)
        .filter(|&e| excluded >> e & 1 == 0)
        .map(|e| reveal_probabilities[e])
        .fold(0.0, f64::max);
    let lhs = transform(f).level_energy(k, excluded);
    let rhs = revealment * f.second_moment() * f64::from(k);
    Ok(BoundCheck { lhs, rhs, holds: lhs <= rhs + INEQUALITY_SLACK })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::{random_increasing, random_table, random_up_set};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noise_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_table(5, 0.3, &mut rng).unwrap();
        let g = random_table(5, 0.3, &mut rng).unwrap();
        let (fh, gh) = (transform(&f), transform(&g));
        let at_one = noise_expectation_spectral(&fh, &gh, 1.0).unwrap();
        assert!((at_one - f.expectation() * g.expectation()).abs() < 1e-12);
        let at_zero = noise_expectation_spectral(&fh, &gh, 0.0).unwrap();
        let direct: f64 = (0..32).map(|w| f.probability(w) * f.value(w) * g.value(w)).sum();
        assert!((at_zero - direct).abs() < 1e-12);
    }

    #[test]
    fn exact_noise_examples() {
        let one = FunctionTable::constant(4, 0.2, 1.0).unwrap();
        for &eps in &[0.0, 0.3, 1.0] {
            assert!((noise_expectation_exact(&one, &one, eps).unwrap() - 1.0).abs() < 1e-14);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_table(4, 0.2, &mut rng).unwrap();
        assert!((noise_expectation_exact(&f, &f, 0.0).unwrap() - f.second_moment()).abs() < 1e-14);
        // Single bit: p(1 - eps(1 - p)) = p^2 + p(1 - p)(1 - eps).
        let (p, eps) = (0.3, 0.4);
        let d = FunctionTable::dictator(1, p, 0).unwrap();
        let got = noise_expectation_exact(&d, &d, eps).unwrap();
        assert!((got - p * (1.0 - eps * (1.0 - p))).abs() < 1e-15);
        assert!((got - (p * p + p * (1.0 - p) * (1.0 - eps))).abs() < 1e-15);
        let big = FunctionTable::constant(11, 0.2, 1.0).unwrap();
        assert!(noise_expectation_exact(&big, &big, 0.5).is_err());
    }

    #[test]
    fn pivotal_examples() {
        let d = FunctionTable::dictator(3, 0.4, 1).unwrap();
        assert!((0..8).all(|w| pivotal_set(&d, w) == 0b010));
        let c = FunctionTable::constant(3, 0.4, 1.0).unwrap();
        assert!((0..8).all(|w| pivotal_set(&c, w) == 0));
        let and = FunctionTable::from_fn(2, 0.4, |w| f64::from(w == 3)).unwrap();
        assert_eq!(pivotal_set(&and, 0b11), 0b11);
    }

    #[test]
    fn pivotal_identity_examples() {
        let p = 0.35;
        let d = FunctionTable::dictator(3, p, 2).unwrap();
        let check = pivotal_identity_check(&d, &d, 2).unwrap();
        assert!((check.lhs - p * (1.0 - p)).abs() < 1e-14);
        assert!((check.rhs - p * (1.0 - p)).abs() < 1e-14);
        let zero = FunctionTable::constant(3, p, 0.0).unwrap();
        let check = pivotal_identity_check(&zero, &zero, 0).unwrap();
        assert_eq!((check.lhs, check.rhs), (0.0, 0.0));

        let up = FunctionTable::from_fn(2, p, |w| f64::from(w != 0)).unwrap();
        let down = FunctionTable::from_fn(2, p, |w| f64::from(w == 0)).unwrap();
        assert!(matches!(pivotal_identity_check(&up, &down, 0), Err(Error::Precondition(_))));
        let half = FunctionTable::from_fn(2, p, |w| 0.5 * w as f64).unwrap();
        assert!(matches!(pivotal_identity_check(&half, &half, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn joint_monotonicity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = random_up_set(5, 0.3, 3, &mut rng).unwrap();
        let g = random_up_set(5, 0.3, 2, &mut rng).unwrap();
        assert!(jointly_monotone(&f, &g).unwrap());
        let flipped = FunctionTable::from_fn(5, 0.3, |w| 1.0 - f.value(w)).unwrap();
        if f.values().iter().any(|&v| v != f.value(0)) {
            assert!(!jointly_monotone(&f, &flipped).unwrap());
        }
        let c = FunctionTable::constant(5, 0.3, 7.0).unwrap();
        let wild = random_table(5, 0.3, &mut rng).unwrap();
        assert!(jointly_monotone(&wild, &c).unwrap());
    }

    #[test]
    fn fkg_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = random_increasing(4, 0.3, &mut rng).unwrap();
        let same = fkg_noise_check(&f, &f, 0.4).unwrap();
        assert!(same.holds);
        assert_eq!(same.lhs, same.rhs);
        let zero = FunctionTable::constant(4, 0.3, 0.0).unwrap();
        let check = fkg_noise_check(&zero, &f, 0.7).unwrap();
        assert!(check.holds && check.lhs >= 0.0);
        let dec = FunctionTable::from_fn(4, 0.3, |w| -(w.count_ones() as f64)).unwrap();
        assert!(fkg_noise_check(&dec, &f, 0.5).is_err());
    }

    #[test]
    fn bound_with_constant_function() {
        let c = FunctionTable::constant(3, 0.3, 1.0).unwrap();
        let check = revealment_bound_check(&c, &[0.2, 0.5, 0.1], 0b001, 1).unwrap();
        assert!(check.holds);
        assert!(check.lhs.abs() < 1e-14);
        assert!((check.rhs - 0.5).abs() < 1e-14);
        assert!(revealment_bound_check(&c, &[0.2, 0.5, 0.1], 0, 0).is_err());
        assert!(revealment_bound_check(&c, &[0.2], 0, 1).is_err());
    }
}
