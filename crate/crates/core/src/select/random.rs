use super::{check_count, Method, Recorder, SelectionResult};
use crate::error::Result;
use crate::fisher::{build_measurement, fisher_info, CandidateMatrix};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform sampling without replacement by a partial Fisher-Yates shuffle
/// driven by ChaCha8 seeded from `seed`. Prefixes are consistent: the first
/// `q` picks for `p` sensors equal the picks for `q` sensors.
///
/// `per_step_objective` holds the determinant of each prefix's information
/// matrix.
pub fn select_random<T: Real>(
    cand: &CandidateMatrix<T>,
    p: usize,
    seed: u64,
) -> Result<SelectionResult<T>> {
    check_count(cand, p)?;
    let mut rec = Recorder::start(Method::Random, p);
    let n = cand.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    for k in 0..p {
        let j = rng.random_range(k as u64..n as u64) as usize;
        pool.swap(k, j);
        let prefix = build_measurement(cand, &pool[..=k])?;
        rec.record(pool[k], fisher_info(&prefix)?.det_index());
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn cand(n: usize) -> CandidateMatrix<f64> {
        CandidateMatrix::new(DMatrix::from_fn(n, 2, |i, j| (i + j) as f64 + 1.0)).unwrap()
    }

    #[test]
    fn exhaustive_is_permutation() {
        let res = select_random(&cand(5), 5, 42).unwrap();
        let mut sorted = res.indices.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = select_random(&cand(20), 6, 7).unwrap();
        let b = select_random(&cand(20), 6, 7).unwrap();
        let c = select_random(&cand(20), 6, 8).unwrap();
        assert_eq!(a.indices, b.indices);
        assert_ne!(a.indices, c.indices);
    }

    #[test]
    fn prefix_consistent() {
        let long = select_random(&cand(20), 8, 3).unwrap();
        let short = select_random(&cand(20), 4, 3).unwrap();
        assert_eq!(&long.indices[..4], &short.indices[..]);
    }

    #[test]
    fn uniform_inclusion_frequency() {
        // each index is included with probability p/n = 0.3; over 10⁴ draws
        // the binomial standard error is 0.0046, so ±0.015 is beyond 3σ
        let c = cand(10);
        let draws = 10_000;
        let mut counts = [0usize; 10];
        for seed in 0..draws {
            for i in select_random(&c, 3, seed).unwrap().indices {
                counts[i] += 1;
            }
        }
        for k in counts {
            let freq = k as f64 / draws as f64;
            assert!((freq - 0.3).abs() <= 0.015, "frequency {freq}");
        }
    }
}
