//! Prime-field scalars and truncated power series over F_q.
//!
//! q stays below 2^16, so products fit comfortably in u64 and the
//! arithmetic is branch-free modular reduction. Series are dense
//! coefficient vectors of fixed length m + 1, multiplied with truncation
//! at t^{m+1}.

#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub q: u64,
}

impl PrimeField {
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u32) -> u64 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduce a signed integer coefficient into 0..q.
    pub fn reduce_i64(&self, c: i64) -> u64 {
        c.rem_euclid(self.q as i64) as u64
    }
}

/// Reusable buffers for evaluating polynomials on truncated series.
pub struct SeriesScratch {
    pub acc: Vec<u64>,
    pub term: Vec<u64>,
    pub tmp: Vec<u64>,
}

impl SeriesScratch {
    pub fn new(len: usize) -> Self {
        SeriesScratch {
            acc: vec![0; len],
            term: vec![0; len],
            tmp: vec![0; len],
        }
    }
}

/// c = a * b truncated at t^len, written into `out` (len = a.len()).
pub fn series_mul(f: &PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    out.fill(0);
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(out.len() - i) {
            if bj != 0 {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
}

/// Index of the first nonzero coefficient, or `len` when the truncated
/// series is identically zero (order at least len).
pub fn series_order(coeffs: &[u64]) -> usize {
    coeffs
        .iter()
        .position(|&c| c != 0)
        .unwrap_or(coeffs.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops_mod_five() {
        let f = PrimeField { q: 5 };
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.pow(2, 4), 1);
        assert_eq!(f.reduce_i64(-1), 4);
    }

    #[test]
    fn truncated_series_product() {
        let f = PrimeField { q: 3 };
        // (1 + t)(1 + 2t + t^2) = 1 + 3t + 3t^2 + t^3 = 1 + t^3 mod 3.
        let a = [1, 1, 0, 0];
        let b = [1, 2, 1, 0];
        let mut out = [0u64; 4];
        series_mul(&f, &a, &b, &mut out);
        assert_eq!(out, [1, 0, 0, 1]);
    }

    #[test]
    fn order_of_series() {
        assert_eq!(series_order(&[0, 0, 2, 1]), 2);
        assert_eq!(series_order(&[0, 0, 0]), 3);
        assert_eq!(series_order(&[5]), 0);
    }
}
