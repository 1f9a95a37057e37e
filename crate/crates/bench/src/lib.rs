//! Workload generators shared by the benchmarks.

use linecollect::instance_io::{generate_random, normalize_instance};
use linecollect::rangemin::{Entry, RangeMinIndex};
use linecollect::NormalizedInstance;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` entries with independent random α and β permutations.
pub fn random_entries(seed: u64, n: usize) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphas: Vec<u32> = (0..n as u32).collect();
    let mut betas: Vec<u32> = (0..n as u32).collect();
    alphas.shuffle(&mut rng);
    betas.shuffle(&mut rng);
    (0..n)
        .map(|i| Entry {
            id: i as u32,
            alpha: alphas[i],
            beta: betas[i],
            value: rng.gen_range(-1000..1000),
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub enum Op {
    Update(u32, i64),
    Deactivate(u32),
    Reactivate(u32),
    Query(u32, u32, u32, u32),
}

/// Uniform mix of updates, deactivations, reactivations and rectangle queries.
pub fn random_ops(seed: u64, n: usize, count: usize) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let n = n as u32;
    (0..count)
        .map(|_| match rng.gen_range(0..4) {
            0 => Op::Update(rng.gen_range(0..n), rng.gen_range(-1000..1000)),
            1 => Op::Deactivate(rng.gen_range(0..n)),
            2 => Op::Reactivate(rng.gen_range(0..n)),
            _ => {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let (c, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
                Op::Query(a.min(b), a.max(b), c.min(d), c.max(d))
            }
        })
        .collect()
}

/// Applies `ops` and returns a checksum of the query answers.
pub fn apply_ops(index: &mut RangeMinIndex, ops: &[Op]) -> i64 {
    let mut sink = 0i64;
    for &op in ops {
        match op {
            Op::Update(id, v) => index.update(id, v).expect("known id"),
            Op::Deactivate(id) => index.deactivate(id).expect("known id"),
            Op::Reactivate(id) => index.reactivate(id).expect("known id"),
            Op::Query(a0, a1, b0, b1) => {
                if let Some((_, v)) = index.query_min(a0, a1, b0, b1) {
                    sink = sink.wrapping_add(v);
                }
            }
        }
    }
    sink
}

/// Random instance with `n` requests over a time horizon of `n / 4`.
pub fn random_instance(seed: u64, n: usize, k: usize) -> NormalizedInstance {
    let horizon = (n as i64 / 4).max(4);
    normalize_instance(&generate_random(seed, n, horizon, 20, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_deterministic() {
        assert_eq!(random_entries(3, 50), random_entries(3, 50));
        let ops = random_ops(3, 50, 200);
        let mut a = RangeMinIndex::build(&random_entries(3, 50)).unwrap();
        let mut b = RangeMinIndex::build(&random_entries(3, 50)).unwrap();
        assert_eq!(apply_ops(&mut a, &ops), apply_ops(&mut b, &ops));
        assert_eq!(random_instance(1, 100, 2), random_instance(1, 100, 2));
    }
}
