//! Generalized Penrose-Banzhaf index by exhaustive swing counting.
//!
//! A swing position of player `i` is a profile together with an alternative
//! ranking for `i` that changes the winner when substituted. The index
//! divides the swing count by that of a dictator, `(m!)^n * (m! - (m-1)!)`.
//! Both winners are read from one precomputed [`RuleMapping`]; the perturbed
//! profile is found by replacing player `i`'s digit in the profile index.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{PowerVector, Profile, Ranking, RuleMapping, ScoringCommittee};
use crate::scoring::rule_mapping;

pub fn is_swing(
    mapping: &RuleMapping,
    p: &Profile,
    player: usize,
    alternative: &Ranking,
) -> Result<bool> {
    let space = mapping.space();
    if player >= mapping.n() {
        return Err(Error::Shape(format!(
            "player {player} out of range 0..{}",
            mapping.n()
        )));
    }
    if alternative.len() != mapping.m() {
        return Err(Error::Shape(
            "perturbed ranking has the wrong length".into(),
        ));
    }
    if p.ranking(player) == alternative {
        return Err(Error::Contract(format!(
            "perturbed ranking for player {player} equals the current one"
        )));
    }
    let k = space.index_of(p)?;
    let k2 = space.replace_digit(k, player, alternative.index() as usize);
    Ok(mapping.winner_at(k) != mapping.winner_at(k2))
}

/// Swings of `player` in a tabulated rule.
pub fn mapping_swing_count(mapping: &RuleMapping, player: usize) -> u64 {
    let space = mapping.space();
    let winners = mapping.winners();
    let stride = space.stride(player);
    let radix = space.radix();
    let mut count = 0u64;
    for k in 0..winners.len() {
        let digit = (k / stride) % radix;
        let base = k - digit * stride;
        let here = winners[k];
        count += (0..radix)
            .filter(|&r| r != digit && winners[base + r * stride] != here)
            .count() as u64;
    }
    count
}

pub fn swing_count(c: &ScoringCommittee, player: usize) -> Result<u64> {
    if player >= c.n() {
        return Err(Error::Shape(format!(
            "player {player} out of range 0..{}",
            c.n()
        )));
    }
    Ok(mapping_swing_count(&rule_mapping(c)?, player))
}

/// Power of every player of a tabulated rule.
pub fn mapping_power(mapping: &RuleMapping) -> PowerVector {
    let counts = (0..mapping.n())
        .map(|i| mapping_swing_count(mapping, i))
        .collect();
    PowerVector::new(
        counts,
        PowerVector::dictator_swings(mapping.n(), mapping.m()),
    )
    .expect("swing counts never exceed the dictator count")
}

/// Like [`mapping_power`], counting players in parallel.
pub fn mapping_power_parallel(mapping: &RuleMapping) -> PowerVector {
    let counts = (0..mapping.n())
        .into_par_iter()
        .map(|i| mapping_swing_count(mapping, i))
        .collect();
    PowerVector::new(
        counts,
        PowerVector::dictator_swings(mapping.n(), mapping.m()),
    )
    .expect("swing counts never exceed the dictator count")
}

pub fn pbi(c: &ScoringCommittee) -> Result<PowerVector> {
    let mapping = rule_mapping(c)?;
    Ok(if mapping.len() >= 1 << 16 {
        mapping_power_parallel(&mapping)
    } else {
        mapping_power(&mapping)
    })
}
