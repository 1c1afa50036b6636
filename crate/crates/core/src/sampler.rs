//! Drawing error events from a modified distribution.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Each draw takes
//! one `next_u64`, keeps its top 53 bits as a uniform `u` in `[0, 1)` and
//! returns the first event (in table order) whose cumulative mass exceeds `u`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error_model::ErrorEvent;
use crate::weights::ModifiedDistribution;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn pick(cdf: &[f64], last: usize, u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(last)
}

/// `n` independent draws.
pub fn sample(d: &ModifiedDistribution, seed: u64, n: usize) -> Vec<ErrorEvent> {
    let probs = d.per_event();
    let mut acc = 0.0;
    let cdf: Vec<f64> = probs
        .iter()
        .map(|q| {
            acc += q;
            acc
        })
        .collect();
    // rounding can leave the total just under 1; overflow goes to the last
    // event that has mass
    let last = probs.iter().rposition(|&q| q > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| d.events()[pick(&cdf, last, unit(&mut rng))])
        .collect()
}

/// Seed for task `task` of a parallel run: one SplitMix64 output from
/// `seed + (task + 1) * 0x9E3779B97F4A7C15`.
pub fn split_seed(seed: u64, task: u64) -> u64 {
    let mut z = seed.wrapping_add(task.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` draws split over `tasks` independent streams, concatenated in task
/// order. Task `i` draws `n / tasks` events (the first `n % tasks` draw one
/// more) with seed `split_seed(seed, i)`.
pub fn sample_parallel(d: &ModifiedDistribution, seed: u64, n: usize, tasks: usize) -> Vec<ErrorEvent> {
    let tasks = tasks.max(1);
    (0..tasks)
        .into_par_iter()
        .map(|i| {
            let count = n / tasks + usize::from(i < n % tasks);
            sample(d, split_seed(seed, i as u64), count)
        })
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{AsymptoticState, Outcome};
    use crate::error_model::{ErrorModel, OutcomeTable};
    use crate::glider::GliderId;
    use crate::weights::{modify, WeightRule};

    fn dist(preserving: usize) -> ModifiedDistribution {
        let a = AsymptoticState::new(vec![GliderId::new("A")]);
        let b = AsymptoticState::new(vec![GliderId::new("B")]);
        let mut o = vec![Outcome::Settled(a.clone())];
        o.extend((0..21).map(|i| {
            Outcome::Settled(if i < preserving { a.clone() } else { b.clone() })
        }));
        let t = OutcomeTable::new(ErrorModel::new(0.3, 10).unwrap(), a, o).unwrap();
        modify(&t, &WeightRule::Stability, false).unwrap()
    }

    #[test]
    fn degenerate_distribution() {
        let d = dist(0);
        assert!(sample(&d, 7, 500).iter().all(|e| *e == ErrorEvent::NoError));
    }

    #[test]
    fn same_seed_same_draws() {
        let d = dist(12);
        assert_eq!(sample(&d, 42, 1000), sample(&d, 42, 1000));
        assert_ne!(sample(&d, 42, 1000), sample(&d, 43, 1000));
        assert_eq!(sample_parallel(&d, 42, 1001, 4), sample_parallel(&d, 42, 1001, 4));
        assert_eq!(sample_parallel(&d, 42, 1001, 4).len(), 1001);
    }

    #[test]
    fn zero_mass_events_never_drawn() {
        let d = dist(12);
        for e in sample(&d, 1, 5000) {
            let i = d.events().iter().position(|x| *x == e).unwrap();
            assert!(d.per_event()[i] > 0.0);
        }
    }

    #[test]
    fn frequencies_within_binomial_bounds() {
        let d = dist(12);
        let n = 10_000;
        let draws = sample(&d, 2024, n);
        for (e, &q) in d.events().iter().zip(d.per_event()) {
            let k = draws.iter().filter(|x| *x == e).count();
            let bound = 3.0 * (q * (1.0 - q) / n as f64).sqrt();
            assert!((k as f64 / n as f64 - q).abs() <= bound, "{e}: {k} vs {q}");
        }
    }

    #[test]
    fn split_seeds_differ() {
        let s: Vec<u64> = (0..64).map(|i| split_seed(99, i)).collect();
        let mut u = s.clone();
        u.sort_unstable();
        u.dedup();
        assert_eq!(u.len(), s.len());
        assert_eq!(split_seed(0, 0), 0xE220_A839_7B1D_CDAF);
    }
}
