//! Committee equivalence, structural equivalence under player relabeling,
//! and equivalence classes of three-player weights on a rational grid.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arrangement;
use crate::error::{Error, Result};
use crate::grid::WeightGrid;
use crate::model::{
    factorial, ProfileSpace, RuleMapping, ScoringCommittee, ScoringVector, MAX_PROFILES,
};
use crate::rational::{common_denominator, Rational};
use crate::scoring::{integer_rule_mapping, rule_mapping, IntegerScorer};

/// Smallest winner table over all player relabelings of a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalMapping {
    n: usize,
    m: usize,
    key: Vec<u8>,
}

impl CanonicalMapping {
    pub fn key(&self) -> &[u8] {
        &self.key
    }

    /// The canonical table as a rule in its own right.
    pub fn to_mapping(&self) -> RuleMapping {
        RuleMapping::from_parts_unchecked(self.n, self.m, self.key.clone())
    }

    /// Short stable digest, handy as a class label.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(&Sha256::digest(&self.key)[..8])
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            items.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Precomputed profile-index maps for every player permutation of a space.
///
/// For permutation `perm`, entry `k'` of the relabeled table reads the
/// original table at the profile whose player `perm[j]` holds the ranking
/// that player `j` holds in profile `k'`.
#[derive(Debug, Clone)]
pub struct Relabeler {
    n: usize,
    m: usize,
    maps: Vec<Vec<u32>>,
}

impl Relabeler {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let space = ProfileSpace::new(n, m)?;
        let group = factorial(n) as u128;
        if group * space.len() as u128 > MAX_PROFILES {
            return Err(Error::SizeLimit {
                what: "relabeling work n! * (m!)^n",
                actual: group * space.len() as u128,
                bound: MAX_PROFILES,
            });
        }
        let maps = permutations(n)
            .into_iter()
            .filter(|perm| perm.iter().enumerate().any(|(j, &p)| j != p))
            .map(|perm| {
                (0..space.len())
                    .map(|k| {
                        (0..n)
                            .map(|j| space.digit(k, j) * space.stride(perm[j]))
                            .sum::<usize>() as u32
                    })
                    .collect()
            })
            .collect();
        Ok(Relabeler { n, m, maps })
    }

    pub fn canonicalize(&self, winners: &[u8]) -> CanonicalMapping {
        let mut best: Vec<u8> = winners.to_vec();
        for map in &self.maps {
            // lexicographic comparison without materializing the candidate
            let mut smaller = false;
            for (k, &src) in map.iter().enumerate() {
                let v = winners[src as usize];
                if v != best[k] {
                    smaller = v < best[k];
                    break;
                }
            }
            if smaller {
                for (slot, &src) in best.iter_mut().zip(map) {
                    *slot = winners[src as usize];
                }
            }
        }
        CanonicalMapping {
            n: self.n,
            m: self.m,
            key: best,
        }
    }
}

pub fn canonical_mapping(mapping: &RuleMapping) -> Result<CanonicalMapping> {
    Ok(Relabeler::new(mapping.n(), mapping.m())?.canonicalize(mapping.winners()))
}

fn check_comparable(c1: &ScoringCommittee, c2: &ScoringCommittee) -> Result<()> {
    if c1.n() != c2.n() || c1.m() != c2.m() {
        return Err(Error::Shape(format!(
            "committees have shapes {}x{} and {}x{}",
            c1.n(),
            c1.m(),
            c2.n(),
            c2.m()
        )));
    }
    if c1.scoring().normalize() != c2.scoring().normalize() {
        return Err(Error::Shape(
            "committees use different scoring rules".into(),
        ));
    }
    Ok(())
}

/// Identical winners on every profile.
pub fn equivalent(c1: &ScoringCommittee, c2: &ScoringCommittee) -> Result<bool> {
    check_comparable(c1, c2)?;
    Ok(rule_mapping(c1)? == rule_mapping(c2)?)
}

/// Identical winners after some relabeling of the players.
pub fn structurally_equivalent(c1: &ScoringCommittee, c2: &ScoringCommittee) -> Result<bool> {
    check_comparable(c1, c2)?;
    let relabeler = Relabeler::new(c1.n(), c1.m())?;
    Ok(relabeler.canonicalize(rule_mapping(c1)?.winners())
        == relabeler.canonicalize(rule_mapping(c2)?.winners()))
}

/// Scoring vector cleared to integers after normalization, e.g. `(20, 7, 0)` for `s = 7/20`.
pub fn integer_scores(scoring: &ScoringVector) -> Result<Vec<i64>> {
    let normalized = scoring.normalize();
    let den = Rational::from_integer(common_denominator(normalized.scores()));
    normalized
        .scores()
        .iter()
        .map(|v| {
            let x: BigInt = (v * &den).to_integer();
            x.to_i64().ok_or_else(|| Error::SizeLimit {
                what: "bit length of a cleared score",
                actual: x.bits() as u128,
                bound: 63,
            })
        })
        .collect()
}

pub fn s_scores(s: &Rational) -> Result<Vec<i64>> {
    integer_scores(&ScoringVector::from_s(s)?)
}

/// One structural class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub key: CanonicalMapping,
    /// Sorted weights of the representative. For classes that occur on the
    /// grid these are the grid numerators over the grid denominator (the
    /// first member in canonical grid order); otherwise they are the reduced
    /// integer weights of an exact arrangement sample.
    pub representative: [u64; 3],
    /// Number of grid points in the class; zero for classes too thin for the grid.
    pub members: u64,
    pub on_grid: bool,
}

impl EquivalenceClass {
    pub fn relative_weights(&self) -> [Rational; 3] {
        let total: u64 = self.representative.iter().sum();
        self.representative
            .map(|w| Rational::new(BigInt::from(w), BigInt::from(total)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClassSet {
    pub s: Rational,
    pub denominator: u32,
    /// Grid classes ordered by the grid index of their representative,
    /// followed by off-grid classes in the same (w1, w2 descending) order.
    pub classes: Vec<EquivalenceClass>,
}

impl EquivalenceClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, key: &CanonicalMapping) -> Option<&EquivalenceClass> {
        self.classes.iter().find(|c| &c.key == key)
    }

    pub fn total_members(&self) -> u64 {
        self.classes.iter().map(|c| c.members).sum()
    }

    /// Classes with at least one grid point.
    pub fn grid_count(&self) -> usize {
        self.classes.iter().filter(|c| c.on_grid).count()
    }
}

struct Partial {
    first: usize,
    representative: [u32; 3],
    members: u64,
}

/// Groups the grid points by the canonical form of their winner table.
/// Only classes that contain a grid point are found.
pub fn enumerate_grid_classes(s: &Rational, grid: &WeightGrid) -> Result<EquivalenceClassSet> {
    let scores = s_scores(s)?;
    let relabeler = Relabeler::new(3, 3)?;
    let space = ProfileSpace::new(3, 3)?;

    // One task per grid row (fixed largest weight), merged in row order.
    let rows: Vec<HashMap<CanonicalMapping, Partial>> = grid
        .rows()
        .into_par_iter()
        .map(|row| {
            let mut local: HashMap<CanonicalMapping, Partial> = HashMap::new();
            let mut last: Option<(Vec<u8>, CanonicalMapping)> = None;
            for (index, point) in grid.row_points(row) {
                let weights: Vec<i64> = point.iter().map(|&w| w as i64).collect();
                let winners = IntegerScorer::from_parts(weights, scores.clone())
                    .expect("grid weights are small")
                    .tabulate(&space);
                let key = match &last {
                    Some((raw, key)) if *raw == winners => key.clone(),
                    _ => {
                        let key = relabeler.canonicalize(&winners);
                        last = Some((winners, key.clone()));
                        key
                    }
                };
                local
                    .entry(key)
                    .and_modify(|p| p.members += 1)
                    .or_insert(Partial {
                        first: index,
                        representative: point,
                        members: 1,
                    });
            }
            local
        })
        .collect();

    let mut merged: HashMap<CanonicalMapping, Partial> = HashMap::new();
    for row in rows {
        for (key, part) in row {
            match merged.get_mut(&key) {
                Some(existing) => {
                    existing.members += part.members;
                    if part.first < existing.first {
                        existing.first = part.first;
                        existing.representative = part.representative;
                    }
                }
                None => {
                    merged.insert(key, part);
                }
            }
        }
    }
    let mut classes: Vec<(usize, EquivalenceClass)> = merged
        .into_iter()
        .map(|(key, p)| {
            (
                p.first,
                EquivalenceClass {
                    key,
                    representative: p.representative.map(u64::from),
                    members: p.members,
                    on_grid: true,
                },
            )
        })
        .collect();
    classes.sort_by_key(|(first, _)| *first);
    Ok(EquivalenceClassSet {
        s: s.clone(),
        denominator: grid.denominator(),
        classes: classes.into_iter().map(|(_, c)| c).collect(),
    })
}

/// Canonical key and sorted weights of one point per face of the boundary
/// arrangement, ordered by relative weights (w1, then w2, descending).
pub fn arrangement_classes(s: &Rational) -> Result<Vec<(CanonicalMapping, [u64; 3])>> {
    let scores = s_scores(s)?;
    let relabeler = Relabeler::new(3, 3)?;
    let mut samples: Vec<[u64; 3]> = arrangement::face_samples(&scores)
        .into_iter()
        .map(|p| {
            let mut w = p.map(|x| u64::try_from(x).expect("face samples are nonnegative"));
            w.sort_unstable_by(|a, b| b.cmp(a));
            w
        })
        .collect();
    samples.sort_by(|a, b| relative_order(b, a));
    samples.dedup();
    samples
        .into_par_iter()
        .map(|w| {
            let weights: Vec<i64> = w
                .iter()
                .map(|&x| {
                    i64::try_from(x).map_err(|_| Error::SizeLimit {
                        what: "arrangement sample weight",
                        actual: x as u128,
                        bound: i64::MAX as u128,
                    })
                })
                .collect::<Result<_>>()?;
            let mapping = integer_rule_mapping(&weights, &scores)?;
            Ok((relabeler.canonicalize(mapping.winners()), w))
        })
        .collect()
}

/// Compares the relative weights `a / sum(a)` and `b / sum(b)` lexicographically.
fn relative_order(a: &[u64; 3], b: &[u64; 3]) -> std::cmp::Ordering {
    let (sa, sb): (u128, u128) = (a.iter().sum::<u64>() as u128, b.iter().sum::<u64>() as u128);
    (0..3)
        .map(|k| (a[k] as u128 * sb).cmp(&(b[k] as u128 * sa)))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// All structural classes for `(1, s, 0)` with three players.
///
/// Grid points give member counts and representatives. Classes that are
/// single points or segments can miss any finite grid, so one exact sample
/// per face of the boundary arrangement is added; classes reached only that
/// way have zero members.
pub fn enumerate_classes(s: &Rational, grid: &WeightGrid) -> Result<EquivalenceClassSet> {
    let mut set = enumerate_grid_classes(s, grid)?;
    let mut known: HashSet<CanonicalMapping> = set.classes.iter().map(|c| c.key.clone()).collect();
    for (key, w) in arrangement_classes(s)? {
        if known.insert(key.clone()) {
            set.classes.push(EquivalenceClass {
                key,
                representative: w,
                members: 0,
                on_grid: false,
            });
        }
    }
    Ok(set)
}

/// Class counts per `s`, in input order.
pub fn class_count_sweep(
    s_values: &[Rational],
    grid: &WeightGrid,
) -> Result<Vec<(Rational, usize)>> {
    s_values
        .iter()
        .map(|s| Ok((s.clone(), enumerate_classes(s, grid)?.len())))
        .collect()
}

/// Default bound on the integer weight sum searched for reference weights.
pub const DEFAULT_MAX_REFERENCE_SUM: u64 = 50;

/// Nonincreasing integer triples with sum `1..=max_sum`, by increasing sum
/// and lexicographically descending within one sum.
pub fn integer_triples(max_sum: u64) -> impl Iterator<Item = [u64; 3]> {
    (1..=max_sum).flat_map(|total| {
        (total.div_ceil(3)..=total).rev().flat_map(move |w1| {
            let rest = total - w1;
            (rest.div_ceil(2)..=w1.min(rest))
                .rev()
                .map(move |w2| [w1, w2, rest - w2])
        })
    })
}

/// Canonical key of every three-player class reachable with integer weights
/// of sum at most `max_sum`, mapped to its minimal-sum reference weights.
#[derive(Debug, Clone)]
pub struct ReferenceTable {
    max_sum: u64,
    table: HashMap<CanonicalMapping, [u64; 3]>,
}

impl ReferenceTable {
    pub fn build(scores: &[i64], max_sum: u64) -> Result<Self> {
        if scores.len() != 3 {
            return Err(Error::Shape(
                "reference weights need three alternatives".into(),
            ));
        }
        let relabeler = Relabeler::new(3, 3)?;
        let triples: Vec<[u64; 3]> = integer_triples(max_sum).collect();
        let keys: Vec<CanonicalMapping> = triples
            .par_iter()
            .map(|t| {
                let weights: Vec<i64> = t.iter().map(|&w| w as i64).collect();
                integer_rule_mapping(&weights, scores).map(|m| relabeler.canonicalize(m.winners()))
            })
            .collect::<Result<_>>()?;
        let mut table = HashMap::new();
        for (key, t) in keys.into_iter().zip(triples) {
            table.entry(key).or_insert(t);
        }
        Ok(ReferenceTable { max_sum, table })
    }

    pub fn lookup(&self, key: &CanonicalMapping) -> Result<[u64; 3]> {
        self.table.get(key).copied().ok_or(Error::NotFound {
            bound: self.max_sum,
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

pub fn minimal_reference_weights(c: &ScoringCommittee) -> Result<[u64; 3]> {
    minimal_reference_weights_bounded(c, DEFAULT_MAX_REFERENCE_SUM)
}

/// Searches sums `1..=max_sum` in order and stops at the first match.
pub fn minimal_reference_weights_bounded(c: &ScoringCommittee, max_sum: u64) -> Result<[u64; 3]> {
    if c.n() != 3 || c.m() != 3 {
        return Err(Error::Shape(
            "reference weights are defined for three players and three alternatives".into(),
        ));
    }
    let scores = integer_scores(c.scoring())?;
    let relabeler = Relabeler::new(3, 3)?;
    let target = relabeler.canonicalize(rule_mapping(c)?.winners());
    for t in integer_triples(max_sum) {
        let weights: Vec<i64> = t.iter().map(|&w| w as i64).collect();
        if relabeler.canonicalize(integer_rule_mapping(&weights, &scores)?.winners()) == target {
            return Ok(t);
        }
    }
    Err(Error::NotFound { bound: max_sum })
}
