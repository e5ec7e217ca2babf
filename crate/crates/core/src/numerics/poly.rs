//! Truncated power-series arithmetic.

use crate::scalar::Scalar;

/// Product of two coefficient sequences, keeping degrees `< len`.
pub fn mul_truncated<F: Scalar>(p: &[F], q: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (i, &a) in p.iter().enumerate().take(len) {
        if a == F::zero() {
            continue;
        }
        for (j, &b) in q.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + a * b;
        }
    }
    out
}

/// `p^n` truncated to `len` coefficients, by repeated squaring.
pub fn pow_truncated<F: Scalar>(p: &[F], mut n: usize, len: usize) -> Vec<F> {
    let mut result = vec![F::zero(); len];
    if len == 0 {
        return result;
    }
    result[0] = F::one();
    let mut base: Vec<F> = p.iter().copied().take(len).collect();
    base.resize(len, F::zero());
    while n > 0 {
        if n & 1 == 1 {
            result = mul_truncated(&result, &base, len);
        }
        n >>= 1;
        if n > 0 {
            base = mul_truncated(&base, &base, len);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_power() {
        // (1 + x)^5 = 1 + 5x + 10x^2 + 10x^3 + ...
        let p = pow_truncated(&[1.0_f64, 1.0], 5, 4);
        assert_eq!(p, vec![1.0, 5.0, 10.0, 10.0]);
        assert_eq!(pow_truncated(&[3.0_f64, 1.0], 0, 3), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn power_matches_repeated_product() {
        let p = [0.9_f64, 0.05, 0.03, 0.01];
        let mut acc = vec![1.0, 0.0, 0.0, 0.0];
        for _ in 0..13 {
            acc = mul_truncated(&acc, &p, 4);
        }
        let fast = pow_truncated(&p, 13, 4);
        for (a, b) in acc.iter().zip(&fast) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
        }
    }
}
