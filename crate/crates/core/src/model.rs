//! Rankings, profiles, scoring vectors and committees.
//!
//! Alternatives are numbered `0..m`; alternative `0` wins every tie it is
//! part of. Rankings are enumerated in lexicographic order of their
//! permutation sequences and profiles are numbered mixed-radix with
//! player 0 as the most significant digit.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Largest alternative count accepted by any enumerating operation.
pub const MAX_ALTERNATIVES: usize = 6;

/// Largest profile-space size `(m!)^n` accepted by any tabulating operation.
pub const MAX_PROFILES: u128 = 1 << 31;

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// A strict preference order: `order[0]` is the most preferred alternative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    order: Vec<u8>,
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        if m == 0 || m > u8::MAX as usize {
            return Err(Error::Invalid(format!("ranking length {m} out of range")));
        }
        let mut seen = vec![false; m];
        for &a in &order {
            if a >= m || seen[a] {
                return Err(Error::Invalid(format!(
                    "{order:?} is not a permutation of 0..{m}"
                )));
            }
            seen[a] = true;
        }
        Ok(Ranking {
            order: order.into_iter().map(|a| a as u8).collect(),
        })
    }

    pub fn identity(m: usize) -> Self {
        Ranking {
            order: (0..m as u8).collect(),
        }
    }

    /// The ranking at position `index` of the lexicographic enumeration.
    pub fn from_index(m: usize, index: u64) -> Result<Self> {
        let total = factorial(m);
        if index >= total {
            return Err(Error::OutOfRange { index, len: total });
        }
        let mut pool: Vec<u8> = (0..m as u8).collect();
        let mut order = Vec::with_capacity(m);
        let mut rest = index;
        for k in (0..m).rev() {
            let block = factorial(k);
            let pick = (rest / block) as usize;
            rest %= block;
            order.push(pool.remove(pick));
        }
        Ok(Ranking { order })
    }

    /// Position of this ranking in the lexicographic enumeration (Lehmer code).
    pub fn index(&self) -> u64 {
        let m = self.order.len();
        let mut index = 0;
        for (pos, &a) in self.order.iter().enumerate() {
            let smaller_later = self.order[pos + 1..].iter().filter(|&&b| b < a).count() as u64;
            index += smaller_later * factorial(m - 1 - pos);
        }
        index
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.order.iter().map(|&a| a as usize)
    }

    pub fn alternative_at(&self, position: usize) -> usize {
        self.order[position] as usize
    }

    pub fn position_of(&self, alternative: usize) -> usize {
        self.order
            .iter()
            .position(|&a| a as usize == alternative)
            .expect("alternative out of range")
    }

    pub fn top(&self) -> usize {
        self.order[0] as usize
    }

    pub fn bottom(&self) -> usize {
        self.order[self.order.len() - 1] as usize
    }
}

/// All `m!` rankings in lexicographic order.
pub fn enumerate_rankings(m: usize) -> Result<Vec<Ranking>> {
    enumerate_rankings_capped(m, MAX_ALTERNATIVES)
}

pub fn enumerate_rankings_capped(m: usize, cap: usize) -> Result<Vec<Ranking>> {
    if m == 0 {
        return Err(Error::Invalid(
            "at least one alternative is required".into(),
        ));
    }
    if m > cap {
        return Err(Error::SizeLimit {
            what: "alternative count",
            actual: m as u128,
            bound: cap as u128,
        });
    }
    (0..factorial(m))
        .map(|k| Ranking::from_index(m, k))
        .collect()
}

/// One ranking per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    rankings: Vec<Ranking>,
}

impl Profile {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        let Some(first) = rankings.first() else {
            return Err(Error::Invalid(
                "a profile needs at least one ranking".into(),
            ));
        };
        let m = first.len();
        if rankings.iter().any(|r| r.len() != m) {
            return Err(Error::Shape(
                "rankings cover different alternative counts".into(),
            ));
        }
        Ok(Profile { rankings })
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn m(&self) -> usize {
        self.rankings[0].len()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, player: usize) -> &Ranking {
        &self.rankings[player]
    }

    /// The same profile with `player`'s ranking replaced.
    pub fn with_ranking(&self, player: usize, ranking: Ranking) -> Profile {
        let mut rankings = self.rankings.clone();
        rankings[player] = ranking;
        Profile { rankings }
    }
}

/// Canonical numbering of all `(m!)^n` profiles.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    n: usize,
    m: usize,
    radix: usize,
    len: usize,
}

impl ProfileSpace {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("at least one player is required".into()));
        }
        if m == 0 {
            return Err(Error::Invalid(
                "at least one alternative is required".into(),
            ));
        }
        if m > MAX_ALTERNATIVES {
            return Err(Error::SizeLimit {
                what: "alternative count",
                actual: m as u128,
                bound: MAX_ALTERNATIVES as u128,
            });
        }
        let radix = factorial(m) as u128;
        let mut len: u128 = 1;
        for _ in 0..n {
            len = len.saturating_mul(radix);
            if len > MAX_PROFILES {
                return Err(Error::SizeLimit {
                    what: "profile count (m!)^n",
                    actual: radix.saturating_pow(n as u32),
                    bound: MAX_PROFILES,
                });
            }
        }
        Ok(ProfileSpace {
            n,
            m,
            radix: radix as usize,
            len: len as usize,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `m!`, the number of rankings.
    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Place value of `player`'s digit.
    pub fn stride(&self, player: usize) -> usize {
        self.radix.pow((self.n - 1 - player) as u32)
    }

    /// Ranking index held by `player` in profile `k`.
    pub fn digit(&self, k: usize, player: usize) -> usize {
        (k / self.stride(player)) % self.radix
    }

    /// Index of the profile obtained from `k` by giving `player` ranking `ranking_index`.
    pub fn replace_digit(&self, k: usize, player: usize, ranking_index: usize) -> usize {
        let stride = self.stride(player);
        let current = (k / stride) % self.radix;
        k - current * stride + ranking_index * stride
    }

    pub fn index_of(&self, profile: &Profile) -> Result<usize> {
        if profile.n() != self.n || profile.m() != self.m {
            return Err(Error::Shape(format!(
                "profile is {}x{}, expected {}x{}",
                profile.n(),
                profile.m(),
                self.n,
                self.m
            )));
        }
        Ok(profile
            .rankings()
            .iter()
            .fold(0, |acc, r| acc * self.radix + r.index() as usize))
    }

    pub fn profile_at(&self, k: usize) -> Result<Profile> {
        if k >= self.len {
            return Err(Error::OutOfRange {
                index: k as u64,
                len: self.len as u64,
            });
        }
        let rankings = (0..self.n)
            .map(|i| Ranking::from_index(self.m, self.digit(k, i) as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile { rankings })
    }
}

pub fn profile_index(profile: &Profile, n: usize, m: usize) -> Result<usize> {
    ProfileSpace::new(n, m)?.index_of(profile)
}

pub fn profile_from_index(k: usize, n: usize, m: usize) -> Result<Profile> {
    ProfileSpace::new(n, m)?.profile_at(k)
}

/// Points awarded per rank position, best position first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringVector {
    scores: Vec<Rational>,
}

impl ScoringVector {
    pub fn new(scores: Vec<Rational>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::Invalid(
                "a scoring vector needs at least two entries".into(),
            ));
        }
        if scores.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "scoring vector must be weakly decreasing".into(),
            ));
        }
        if scores[0] == scores[scores.len() - 1] {
            return Err(Error::Invalid("first and last score must differ".into()));
        }
        Ok(ScoringVector { scores })
    }

    /// The three-alternative rule `(1, s, 0)`; `s = 0` is plurality,
    /// `s = 1/2` Borda and `s = 1` antiplurality.
    pub fn from_s(s: &Rational) -> Result<Self> {
        if s.is_negative() || *s > Rational::one() {
            return Err(Error::Invalid(format!("s must lie in [0, 1], got {s}")));
        }
        ScoringVector::new(vec![int(1), s.clone(), int(0)])
    }

    pub fn plurality(m: usize) -> Self {
        let mut scores = vec![int(0); m];
        scores[0] = int(1);
        ScoringVector { scores }
    }

    pub fn antiplurality(m: usize) -> Self {
        let mut scores = vec![int(1); m];
        scores[m - 1] = int(0);
        ScoringVector { scores }
    }

    pub fn borda(m: usize) -> Self {
        ScoringVector {
            scores: (0..m).rev().map(|k| int(k as i64)).collect(),
        }
    }

    pub fn scores(&self) -> &[Rational] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Affine rescaling to first entry 1 and last entry 0.
    pub fn normalize(&self) -> ScoringVector {
        let low = &self.scores[self.scores.len() - 1];
        let span = &self.scores[0] - low;
        ScoringVector {
            scores: self.scores.iter().map(|v| (v - low) / &span).collect(),
        }
    }

    /// The middle entry of a normalized three-entry vector.
    pub fn s_parameter(&self) -> Option<Rational> {
        (self.scores.len() == 3).then(|| self.normalize().scores[1].clone())
    }
}

pub fn normalize_scoring_vector(v: &ScoringVector) -> ScoringVector {
    v.normalize()
}

/// A weighted scoring committee: `weights[i]` multiplies player `i`'s points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringCommittee {
    weights: Vec<Rational>,
    scoring: ScoringVector,
}

impl ScoringCommittee {
    pub fn new(weights: Vec<Rational>, scoring: ScoringVector) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Invalid(
                "a committee needs at least two players".into(),
            ));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::Invalid(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(ScoringCommittee { weights, scoring })
    }

    /// Three alternatives, scoring vector `(1, s, 0)`.
    pub fn with_s(weights: Vec<Rational>, s: &Rational) -> Result<Self> {
        ScoringCommittee::new(weights, ScoringVector::from_s(s)?)
    }

    pub fn from_integers(weights: &[i64], scoring: ScoringVector) -> Result<Self> {
        ScoringCommittee::new(weights.iter().map(|&w| int(w)).collect(), scoring)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.scoring.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn scoring(&self) -> &ScoringVector {
        &self.scoring
    }

    pub fn with_scoring(&self, scoring: ScoringVector) -> ScoringCommittee {
        ScoringCommittee {
            weights: self.weights.clone(),
            scoring,
        }
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<ScoringCommittee> {
        ScoringCommittee::new(weights, self.scoring.clone())
    }

    /// Player `j` of the result carries the weight of player `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> ScoringCommittee {
        ScoringCommittee {
            weights: perm.iter().map(|&p| self.weights[p].clone()).collect(),
            scoring: self.scoring.clone(),
        }
    }

    pub fn profile_space(&self) -> Result<ProfileSpace> {
        ProfileSpace::new(self.n(), self.m())
    }
}

/// The winner of every profile, in canonical profile order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleMapping {
    n: usize,
    m: usize,
    winners: Vec<u8>,
}

impl RuleMapping {
    pub fn new(n: usize, m: usize, winners: Vec<u8>) -> Result<Self> {
        let space = ProfileSpace::new(n, m)?;
        if winners.len() != space.len() {
            return Err(Error::Shape(format!(
                "winner table has {} entries, expected {}",
                winners.len(),
                space.len()
            )));
        }
        if let Some(bad) = winners.iter().find(|&&w| w as usize >= m) {
            return Err(Error::Invalid(format!(
                "winner {bad} is not an alternative of 0..{m}"
            )));
        }
        Ok(RuleMapping { n, m, winners })
    }

    pub(crate) fn from_parts_unchecked(n: usize, m: usize, winners: Vec<u8>) -> Self {
        RuleMapping { n, m, winners }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn winners(&self) -> &[u8] {
        &self.winners
    }

    pub fn winner_at(&self, k: usize) -> usize {
        self.winners[k] as usize
    }

    pub fn len(&self) -> usize {
        self.winners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winners.is_empty()
    }

    pub fn space(&self) -> ProfileSpace {
        ProfileSpace::new(self.n, self.m).expect("mapping dimensions were validated")
    }
}

/// Generalized Penrose-Banzhaf values: swing counts over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerVector {
    swing_counts: Vec<u64>,
    denominator: u64,
}

impl PowerVector {
    pub fn new(swing_counts: Vec<u64>, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Invalid("power denominator must be positive".into()));
        }
        if swing_counts.iter().any(|&c| c > denominator) {
            return Err(Error::Invalid(
                "swing count exceeds the dictator maximum".into(),
            ));
        }
        Ok(PowerVector {
            swing_counts,
            denominator,
        })
    }

    /// `(m!)^n * (m! - (m-1)!)`, the swing count of a dictator.
    pub fn dictator_swings(n: usize, m: usize) -> u64 {
        let f = factorial(m);
        f.pow(n as u32) * (f - factorial(m - 1))
    }

    pub fn swing_counts(&self) -> &[u64] {
        &self.swing_counts
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.swing_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swing_counts.is_empty()
    }

    pub fn value(&self, player: usize) -> Rational {
        Rational::new(self.swing_counts[player].into(), self.denominator.into())
    }

    pub fn values(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    pub fn decimals(&self, places: usize) -> Vec<String> {
        self.values()
            .iter()
            .map(|v| crate::rational::format_decimal(v, places))
            .collect()
    }
}
