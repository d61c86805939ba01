//! State-space folding for brute-force enumeration.
//!
//! States are indices 0..total in lexicographic coefficient order, least
//! significant digit fastest. The fold hands out contiguous index ranges
//! so per-block scratch buffers can be reused across states. With the
//! `parallel` feature the ranges are digit-aligned leading blocks folded
//! on the rayon pool; the reduction must be associative and commutative
//! (integer sums here), so results are bit-identical regardless of thread
//! count. `threads == 1` always takes the sequential path.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn fold_ranges<T, F, R>(total: u64, block: u64, threads: usize, map: F, reduce: R) -> T
where
    T: Send + Default,
    F: Fn(Range<u64>) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    if threads == 1 || total <= block {
        return map(0..total);
    }
    fold_blocked(total, block, &map, &reduce)
}

#[cfg(feature = "parallel")]
fn fold_blocked<T, F, R>(total: u64, block: u64, map: &F, reduce: &R) -> T
where
    T: Send + Default,
    F: Fn(Range<u64>) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    let blocks = total.div_ceil(block);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * block;
            map(start..(start + block).min(total))
        })
        .reduce(T::default, reduce)
}

#[cfg(not(feature = "parallel"))]
fn fold_blocked<T, F, R>(total: u64, _block: u64, map: &F, _reduce: &R) -> T
where
    T: Send + Default,
    F: Fn(Range<u64>) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    map(0..total)
}

/// Base-q odometer over digit vectors, least significant digit first.
pub(crate) struct Odometer {
    pub digits: Vec<u64>,
    q: u64,
}

impl Odometer {
    /// Digits of `index` in base q, padded to `len`.
    pub fn start(index: u64, q: u64, len: usize) -> Self {
        let mut digits = vec![0u64; len];
        let mut rest = index;
        for slot in digits.iter_mut() {
            *slot = rest % q;
            rest /= q;
        }
        Odometer { digits, q }
    }

    pub fn step(&mut self) {
        for slot in self.digits.iter_mut() {
            *slot += 1;
            if *slot < self.q {
                return;
            }
            *slot = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_with_block(total: u64, block: u64, threads: usize) -> u64 {
        fold_ranges(
            total,
            block,
            threads,
            |range| range.map(|i| (i * i) % 7).sum::<u64>(),
            |a, b| a + b,
        )
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let expected = sum_with_block(10_000, u64::MAX, 1);
        assert_eq!(sum_with_block(10_000, 100, 0), expected);
        assert_eq!(sum_with_block(10_000, 128, 4), expected);
        assert_eq!(sum_with_block(10_000, 100, 1), expected);
    }

    #[test]
    fn odometer_matches_direct_decode() {
        let q = 3u64;
        let len = 4;
        let mut odo = Odometer::start(5, q, len);
        for index in 5..50u64 {
            let mut expected = vec![0u64; len];
            let mut rest = index;
            for slot in expected.iter_mut() {
                *slot = rest % q;
                rest /= q;
            }
            assert_eq!(odo.digits, expected, "index {index}");
            odo.step();
        }
    }
}
