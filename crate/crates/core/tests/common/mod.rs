//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's tabulation or power code.

#![allow(dead_code)]

use committee_power::Rational;
use num_traits::Zero;

/// All orderings of `0..m`, built by insertion.
pub fn orderings(m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for a in 0..m {
        out = out
            .into_iter()
            .flat_map(|o: Vec<usize>| {
                (0..=o.len()).map(move |pos| {
                    let mut next = o.clone();
                    next.insert(pos, a);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn winner(weights: &[Rational], scores: &[Rational], profile: &[&Vec<usize>]) -> usize {
    let m = scores.len();
    let mut totals = vec![Rational::zero(); m];
    for (w, ranking) in weights.iter().zip(profile) {
        for (pos, &a) in ranking.iter().enumerate() {
            totals[a] += w * &scores[pos];
        }
    }
    let mut best = 0;
    for a in 1..m {
        if totals[a] > totals[best] {
            best = a;
        }
    }
    best
}

/// Swing counts by direct enumeration of every profile, player and
/// alternative ranking.
pub fn swings(weights: &[Rational], scores: &[Rational]) -> Vec<u64> {
    let n = weights.len();
    let rankings = orderings(scores.len());
    let r = rankings.len();
    let mut counts = vec![0u64; n];
    let mut digits = vec![0usize; n];
    'profiles: loop {
        let profile: Vec<&Vec<usize>> = digits.iter().map(|&d| &rankings[d]).collect();
        let base = winner(weights, scores, &profile);
        for i in 0..n {
            for (alt, other) in rankings.iter().enumerate() {
                if alt == digits[i] {
                    continue;
                }
                let mut changed = profile.clone();
                changed[i] = other;
                if winner(weights, scores, &changed) != base {
                    counts[i] += 1;
                }
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < r {
                continue 'profiles;
            }
            *d = 0;
        }
        break;
    }
    counts
}

pub fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// Swing count of a dictator: (m!)^n (m! - (m-1)!).
pub fn dictator_swings(n: u32, m: u64) -> u64 {
    factorial(m).pow(n) * (factorial(m) - factorial(m - 1))
}
