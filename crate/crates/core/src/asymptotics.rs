//! Leading-order tail formulas for critical `ER(n, 1/n - λ n^{-4/3})` and the
//! shapes of the component-size envelopes, constants omitted.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// `β` below which exceptional times occur with high probability: `2 / 3^{2/3}`.
pub const LOWER_BETA: f64 = 0.961_499_713_538_272_2;
/// `β` from which exceptional times are absent with high probability: `2 / 3^{1/3}`.
pub const UPPER_BETA: f64 = 1.386_722_548_701_269_5;

pub fn big_g(lambda: f64, x: f64) -> f64 {
    x * x * x / 8.0 - lambda * x * x / 2.0 + lambda * lambda * x / 2.0
}

pub fn big_g_prime(lambda: f64, x: f64) -> f64 {
    3.0 * x * x / 8.0 - lambda * x + lambda * lambda / 2.0
}

pub fn big_f(lambda: f64, x: f64) -> f64 {
    x * x * x / 6.0 - lambda * x * x / 2.0 + lambda * lambda * x / 2.0
}

/// A point in the critical window. `a` is the size threshold in units of `n^{2/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailQuery {
    pub n: u64,
    pub lambda: f64,
    pub a: f64,
}

/// Whether a query sits where the asymptotics are meant to apply.
///
/// "Much smaller than `n^{1/12}`" is read as a ratio to `n^{1/12}` below `n^{-1/24}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub lambda_small: bool,
    pub a_above_floor: bool,
    pub a_small: bool,
}

impl Validity {
    pub fn in_window(&self) -> bool {
        self.lambda_small && self.a_above_floor && self.a_small
    }
}

impl TailQuery {
    pub fn new(n: u64, lambda: f64, a: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n = {n} must be at least 2")));
        }
        if !lambda.is_finite() || !a.is_finite() || a <= 0.0 {
            return Err(Error::Parameter(format!("need finite λ and A > 0, got λ = {lambda}, A = {a}")));
        }
        Ok(Self { n, lambda, a })
    }

    pub fn scale(&self) -> f64 {
        (self.n as f64).powf(2.0 / 3.0)
    }

    /// Absolute size threshold `k = A n^{2/3}` (real valued).
    pub fn size(&self) -> f64 {
        self.a * self.scale()
    }

    /// `p = 1/n - λ n^{-4/3}`.
    pub fn edge_probability(&self) -> f64 {
        let n = self.n as f64;
        1.0 / n - self.lambda * n.powf(-4.0 / 3.0)
    }

    pub fn validity(&self) -> Validity {
        let n = self.n as f64;
        let ceiling = n.powf(1.0 / 12.0);
        let small = n.powf(-1.0 / 24.0);
        Validity {
            lambda_small: self.lambda.abs() / ceiling < small,
            a_above_floor: (3.0 * self.lambda).min(1.0) <= self.a,
            a_small: self.a / ceiling < small,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailValue {
    pub value: f64,
    pub validity: Validity,
}

fn positive_slope(q: &TailQuery) -> Result<f64> {
    let derivative = big_g_prime(q.lambda, q.a);
    if derivative <= 0.0 {
        return Err(Error::NonPositiveDerivative {
            lambda: q.lambda,
            a: q.a,
            derivative,
        });
    }
    Ok(derivative)
}

/// Leading order of `P(|C_v| >= A n^{2/3})`.
pub fn pittel_component_tail(q: &TailQuery) -> Result<TailValue> {
    let slope = positive_slope(q)?;
    let n = q.n as f64;
    let value = q.a.powf(1.5) / ((8.0 * PI).sqrt() * n.cbrt() * slope) * (-big_g(q.lambda, q.a)).exp();
    Ok(TailValue { value, validity: q.validity() })
}

/// Leading order of `P(L_n >= A n^{2/3})`.
pub fn pittel_largest_tail(q: &TailQuery) -> Result<TailValue> {
    let slope = positive_slope(q)?;
    let value = q.a.sqrt() / ((8.0 * PI).sqrt() * slope) * (-big_g(q.lambda, q.a)).exp();
    Ok(TailValue { value, validity: q.validity() })
}

/// `N^2/n^2 · e^{-N^3/(8n^2)}`: two disjoint sub-threshold components joining past `N`.
pub fn pair_envelope(n: f64, size: f64) -> f64 {
    size * size / (n * n) * (-size.powi(3) / (8.0 * n * n)).exp()
}

/// `(n^{-2/3} N^{-1/2} + N^3/n^3) · e^{-N^3/(8n^2)}`: as above with a third vertex in the smaller piece.
pub fn triple_envelope(n: f64, size: f64) -> f64 {
    (1.0 / (n.powf(2.0 / 3.0) * size.sqrt()) + size.powi(3) / n.powi(3)) * (-size.powi(3) / (8.0 * n * n)).exp()
}

/// Point-mass envelope for `P(|C_v| = k)` below the scaling size: `k^{-3/2} e^{-F_λ(k/n^{2/3})}`.
pub fn point_envelope_small(n: f64, lambda: f64, k: f64) -> f64 {
    k.powf(-1.5) * (-big_f(lambda, k / n.powf(2.0 / 3.0))).exp()
}

/// Point-mass envelope above the scaling size: `k^{3/2}/n^2 · e^{-G_λ(k/n^{2/3})}`.
pub fn point_envelope_large(n: f64, lambda: f64, k: f64) -> f64 {
    k.powf(1.5) / (n * n) * (-big_g(lambda, k / n.powf(2.0 / 3.0))).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelopes {
    pub pair: f64,
    pub triple: f64,
    /// Both point regimes at `k = N` and `λ = 0`.
    pub point_small: f64,
    pub point_large: f64,
}

pub fn bound_envelopes(n: u64, size: u64) -> Result<Envelopes> {
    if size < 1 {
        return Err(Error::Parameter("N must be at least 1".into()));
    }
    let (n, k) = (n as f64, size as f64);
    Ok(Envelopes {
        pair: pair_envelope(n, k),
        triple: triple_envelope(n, k),
        point_small: point_envelope_small(n, 0.0, k),
        point_large: point_envelope_large(n, 0.0, k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_examples() {
        assert_eq!(big_g(0.0, 2.0), 1.0);
        assert_eq!(big_g(1.0, 2.0), 0.0);
        assert!((big_f(0.0, 1.0) - 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(big_f(0.0, 0.0), 0.0);
    }

    #[test]
    fn cubic_inequalities_on_grid() {
        for i in -40..=40 {
            let lambda = f64::from(i) / 8.0;
            for j in 0..=200 {
                let x = f64::from(j) / 20.0;
                assert!(big_f(lambda, x) >= big_g(lambda, x) - 1e-12);
                if lambda <= 0.0 {
                    assert!(big_g_prime(lambda, x) >= 3.0 * x * x / 8.0 - 1e-12);
                }
            }
        }
    }

    #[test]
    fn named_constants() {
        assert!((LOWER_BETA - 2.0 / 3f64.powf(2.0 / 3.0)).abs() < 1e-15);
        assert!((UPPER_BETA - 2.0 / 3f64.cbrt()).abs() < 1e-15);
        assert!(LOWER_BETA < UPPER_BETA);
    }

    #[test]
    fn component_tail_reference_value() {
        let q = TailQuery::new(1_000_000, 0.0, 1.0).unwrap();
        let got = pittel_component_tail(&q).unwrap().value;
        // Written out by hand: 1 / (sqrt(8π) · 100 · 3/8) · e^{-1/8}.
        let expected = 8.0 / (3.0 * (8.0 * PI).sqrt() * 100.0) * (-0.125f64).exp();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 4.69e-3).abs() < 5e-6);
    }

    #[test]
    fn n_scaling_and_ratio_between_parts() {
        let a = TailQuery::new(1_000, 0.3, 1.4).unwrap();
        let b = TailQuery::new(8_000, 0.3, 1.4).unwrap();
        let ta = pittel_component_tail(&a).unwrap().value;
        let tb = pittel_component_tail(&b).unwrap().value;
        assert!((ta / tb - 2.0).abs() < 1e-12);
        let largest = pittel_largest_tail(&a).unwrap().value;
        assert!((largest - ta * 10.0 / 1.4).abs() < 1e-12 * largest);
    }

    #[test]
    fn log_scale_exponent() {
        // With λ = 0 and A = β log^{1/3} n the tail is n^{-1/3-β³/8} times the polylog 8/(3 sqrt(8π) A^{1/2}).
        let beta: f64 = 1.1;
        for e in [4, 6, 9, 12, 15] {
            let n = 10f64.powi(e);
            let a = beta * n.ln().cbrt();
            let tail = pittel_component_tail(&TailQuery::new(n as u64, 0.0, a).unwrap()).unwrap().value;
            let polylog = tail * n.powf(1.0 / 3.0 + beta.powi(3) / 8.0);
            let expected = 8.0 / (3.0 * (8.0 * PI).sqrt() * a.sqrt());
            assert!((polylog / expected - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn largest_tail_bound_shape_at_unit_lambda() {
        // λ = 1, A = β log^{1/3} n against β^{-3/2} n^{-β³/8} e^{β² log^{2/3} n / 2} log^{-1/2} n.
        // The formula equals the shape times 8/(3 sqrt(8π)) · (3A²/8)/G'(A) · e^{-A/2}, so the shape
        // bounds it up to a constant.
        let beta: f64 = 1.5;
        for e in [4, 6, 8, 10, 12] {
            let n = 10f64.powi(e);
            let l = n.ln();
            let a = beta * l.cbrt();
            let tail = pittel_largest_tail(&TailQuery::new(n as u64, 1.0, a).unwrap()).unwrap().value;
            let shape =
                beta.powf(-1.5) * n.powf(-beta.powi(3) / 8.0) * (beta * beta * l.powf(2.0 / 3.0) / 2.0).exp() / l.sqrt();
            let correction = 8.0 / (3.0 * (8.0 * PI).sqrt()) * (3.0 * a * a / 8.0) / big_g_prime(1.0, a) * (-a / 2.0).exp();
            assert!((tail / (shape * correction) - 1.0).abs() < 1e-9);
            assert!(tail / shape < 1.0);
        }
    }

    #[test]
    fn largest_tail_decreases_in_a() {
        for lambda in [-1.0, 0.0, 0.5] {
            let mut last = f64::INFINITY;
            for i in 0..40 {
                let a = 1.5 + f64::from(i) * 0.1;
                let q = TailQuery::new(1 << 40, lambda, a).unwrap();
                let v = pittel_largest_tail(&q).unwrap().value;
                assert!(v < last);
                last = v;
            }
        }
    }

    #[test]
    fn validity_flags() {
        let q = TailQuery::new(100_000, 0.0, 1.5).unwrap();
        assert!(q.validity().in_window());
        let wide = TailQuery::new(100_000, 0.0, 2.0).unwrap();
        assert!(!wide.validity().a_small);
        assert!(pittel_component_tail(&wide).is_ok());
        let low = TailQuery::new(100_000, 0.5, 0.5).unwrap();
        assert!(!low.validity().a_above_floor);
        // 3x²/8 - 4x + 8 has discriminant 16 - 12 > 0, so it is negative near x = 5.
        let bad = TailQuery::new(1000, 4.0, 5.0).unwrap();
        assert!(matches!(pittel_component_tail(&bad), Err(Error::NonPositiveDerivative { .. })));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let q = TailQuery::new(12_345, -0.7, 1.3).unwrap();
        let a = pittel_component_tail(&q).unwrap().value;
        let b = pittel_component_tail(&q).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn envelope_examples() {
        for n in [1e3f64, 1e6, 1e9] {
            let size: f64 = 2.0 * n.powf(2.0 / 3.0);
            let expected = 4.0 * n.powf(-2.0 / 3.0) * (-1f64).exp();
            assert!((pair_envelope(n, size) - expected).abs() < 1e-12 * expected);
        }
        for e in 3..=12 {
            let n = 10f64.powi(e);
            let k = n.powf(2.0 / 3.0);
            let r = point_envelope_small(n, 0.0, k) / point_envelope_large(n, 0.0, k);
            assert!((r - (-1.0f64 / 24.0).exp()).abs() < 1e-9);
            let t = triple_envelope(n, k) / (pair_envelope(n, k) * k / n);
            assert!((t - 2.0).abs() < 1e-9);
        }
        assert!(bound_envelopes(100, 0).is_err());
    }
}
