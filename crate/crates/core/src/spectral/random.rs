//! Random tables for property tests and exact identity sweeps.

use rand::Rng;

use super::FunctionTable;
use crate::error::Result;

/// Values uniform in `[-1, 1]`.
pub fn random_table<R: Rng + ?Sized>(m: u32, p: f64, rng: &mut R) -> Result<FunctionTable> {
    FunctionTable::new(m, p, (0..1usize << m).map(|_| rng.random_range(-1.0..=1.0)).collect())
}

/// Uniform `{0,1}` values (no monotonicity).
pub fn random_boolean<R: Rng + ?Sized>(m: u32, p: f64, rng: &mut R) -> Result<FunctionTable> {
    FunctionTable::new(m, p, (0..1usize << m).map(|_| f64::from(u8::from(rng.random_bool(0.5)))).collect())
}

/// Indicator of a random up-set: the union of `filters` random principal filters
/// `{omega ⊇ a_j}`.
pub fn random_up_set<R: Rng + ?Sized>(m: u32, p: f64, filters: usize, rng: &mut R) -> Result<FunctionTable> {
    let full = (1usize << m) - 1;
    let generators: Vec<usize> = (0..filters).map(|_| rng.random_range(0..=full)).collect();
    FunctionTable::from_fn(m, p, |w| f64::from(u8::from(generators.iter().any(|&a| w & a == a))))
}

/// Positive combination of random up-set indicators; increasing and real-valued.
pub fn random_increasing<R: Rng + ?Sized>(m: u32, p: f64, rng: &mut R) -> Result<FunctionTable> {
    let terms = rng.random_range(1..=4);
    let mut values = vec![0.0; 1usize << m];
    for _ in 0..terms {
        let weight = rng.random_range(0.1..2.0);
        let filters = rng.random_range(1..=3);
        let up = random_up_set(m, p, filters, rng)?;
        values.iter_mut().zip(up.values()).for_each(|(v, u)| *v += weight * u);
    }
    FunctionTable::new(m, p, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 1..=7 {
            let up = random_up_set(m, 0.2, 3, &mut rng).unwrap();
            assert!(up.is_boolean() && up.is_increasing());
            assert!(random_increasing(m, 0.2, &mut rng).unwrap().is_increasing());
        }
    }
}
