//! Total scores, winners and full winner tables.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Profile, ProfileSpace, RuleMapping, ScoringCommittee};
use crate::rational::{common_denominator, Rational};

/// Per-alternative totals for one profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTotals {
    totals: Vec<Rational>,
}

impl ScoreTotals {
    pub fn totals(&self) -> &[Rational] {
        &self.totals
    }

    pub fn total(&self, alternative: usize) -> &Rational {
        &self.totals[alternative]
    }

    /// Smallest index among the maximal totals.
    pub fn winner(&self) -> usize {
        argmax_first(&self.totals)
    }
}

fn argmax_first<T: PartialOrd>(values: &[T]) -> usize {
    let mut best = 0;
    for (a, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = a;
        }
    }
    best
}

fn check_shape(c: &ScoringCommittee, p: &Profile) -> Result<()> {
    if p.n() != c.n() || p.m() != c.m() {
        return Err(Error::Shape(format!(
            "profile has {} rankings over {} alternatives, committee has {} players and {} alternatives",
            p.n(),
            p.m(),
            c.n(),
            c.m()
        )));
    }
    Ok(())
}

pub fn score_totals(c: &ScoringCommittee, p: &Profile) -> Result<ScoreTotals> {
    check_shape(c, p)?;
    let scores = c.scoring().scores();
    let mut totals = vec![Rational::zero(); c.m()];
    for (w, ranking) in c.weights().iter().zip(p.rankings()) {
        if w.is_zero() {
            continue;
        }
        for (pos, a) in ranking.order().enumerate() {
            totals[a] += w * &scores[pos];
        }
    }
    Ok(ScoreTotals { totals })
}

pub fn winner(c: &ScoringCommittee, p: &Profile) -> Result<usize> {
    Ok(score_totals(c, p)?.winner())
}

/// Magnitude bound on cleared integer weights and scores; keeps every
/// profile total inside `i128`.
const FAST_PATH_LIMIT: i64 = 1 << 56;

/// Committee with denominators cleared: same winners, integer arithmetic.
#[derive(Debug, Clone)]
pub struct IntegerScorer {
    weights: Vec<i64>,
    scores: Vec<i64>,
}

impl IntegerScorer {
    /// `None` when the cleared integers exceed the fast-path range.
    pub fn from_committee(c: &ScoringCommittee) -> Option<Self> {
        let clear = |values: &[Rational]| -> Option<Vec<i64>> {
            let den = Rational::from_integer(common_denominator(values));
            values
                .iter()
                .map(|v| {
                    let scaled: BigInt = (v * &den).to_integer();
                    scaled.to_i64().filter(|x| x.abs() < FAST_PATH_LIMIT)
                })
                .collect()
        };
        Some(IntegerScorer {
            weights: clear(c.weights())?,
            scores: clear(c.scoring().scores())?,
        })
    }

    /// Caller guarantees nonnegative weights and weakly decreasing scores.
    pub fn from_parts(weights: Vec<i64>, scores: Vec<i64>) -> Result<Self> {
        if weights
            .iter()
            .chain(&scores)
            .any(|x| x.abs() >= FAST_PATH_LIMIT)
        {
            return Err(Error::SizeLimit {
                what: "integer weight or score magnitude",
                actual: weights
                    .iter()
                    .chain(&scores)
                    .map(|x| x.unsigned_abs())
                    .max()
                    .unwrap_or(0) as u128,
                bound: FAST_PATH_LIMIT as u128,
            });
        }
        Ok(IntegerScorer { weights, scores })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn scores(&self) -> &[i64] {
        &self.scores
    }

    /// Winner table over `space`, walking profiles in canonical order and
    /// recomputing only the partial sums below the changed digit.
    pub fn tabulate(&self, space: &ProfileSpace) -> Vec<u8> {
        let (n, m, radix) = (space.n(), space.m(), space.radix());
        debug_assert_eq!(n, self.weights.len());
        debug_assert_eq!(m, self.scores.len());

        // contrib[(player * radix + ranking) * m + alternative]
        let rankings: Vec<_> = (0..radix as u64)
            .map(|k| crate::model::Ranking::from_index(m, k).expect("index below m!"))
            .collect();
        let mut contrib = vec![0i128; n * radix * m];
        for (i, &w) in self.weights.iter().enumerate() {
            for (r, ranking) in rankings.iter().enumerate() {
                for (pos, a) in ranking.order().enumerate() {
                    contrib[(i * radix + r) * m + a] = w as i128 * self.scores[pos] as i128;
                }
            }
        }

        let mut digits = vec![0usize; n];
        let mut partial = vec![0i128; (n + 1) * m];
        let refresh = |from: usize, digits: &[usize], partial: &mut [i128]| {
            for j in from..n {
                let base = (j * radix + digits[j]) * m;
                for a in 0..m {
                    partial[(j + 1) * m + a] = partial[j * m + a] + contrib[base + a];
                }
            }
        };
        refresh(0, &digits, &mut partial);

        let mut out = Vec::with_capacity(space.len());
        loop {
            out.push(argmax_first(&partial[n * m..]) as u8);
            let mut level = n;
            loop {
                if level == 0 {
                    return out;
                }
                level -= 1;
                digits[level] += 1;
                if digits[level] < radix {
                    break;
                }
                digits[level] = 0;
            }
            refresh(level, &digits, &mut partial);
        }
    }
}

/// Full winner table of `c`.
pub fn rule_mapping(c: &ScoringCommittee) -> Result<RuleMapping> {
    let space = c.profile_space()?;
    let winners = match IntegerScorer::from_committee(c) {
        Some(fast) => fast.tabulate(&space),
        None => (0..space.len())
            .map(|k| Ok(winner(c, &space.profile_at(k)?)? as u8))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RuleMapping::from_parts_unchecked(c.n(), c.m(), winners))
}

/// Winner table for integer weights under integer scores.
pub fn integer_rule_mapping(weights: &[i64], scores: &[i64]) -> Result<RuleMapping> {
    let space = ProfileSpace::new(weights.len(), scores.len())?;
    let scorer = IntegerScorer::from_parts(weights.to_vec(), scores.to_vec())?;
    Ok(RuleMapping::from_parts_unchecked(
        weights.len(),
        scores.len(),
        scorer.tabulate(&space),
    ))
}
