//! Fixed-order pairwise summation.
//!
//! All floating-point reductions in this crate go through [`pairwise_sum`],
//! whose reduction tree depends only on the slice length. That keeps rounding
//! error at O(log n) ulps instead of O(n) and — more importantly here — makes
//! every accumulated value a pure function of its inputs, independent of
//! platform, allocator, or thread count.

/// Base-case length below which a simple left-to-right fold is used.
const PAIRWISE_BASE: usize = 32;

/// Sums a slice with a fixed split-at-midpoint pairwise reduction.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BASE {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_singleton() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[2.5]), 2.5);
    }

    #[test]
    fn matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn more_accurate_than_naive_on_adversarial_input() {
        // 1 followed by many tiny values that a naive left fold absorbs.
        let mut xs = vec![1.0f64];
        xs.extend(std::iter::repeat(1e-16).take(1 << 20));
        let exact = 1.0 + 1e-16 * (1u64 << 20) as f64;
        let pair = pairwise_sum(&xs);
        assert!((pair - exact).abs() < 1e-12, "pairwise {pair} vs {exact}");
    }
}
