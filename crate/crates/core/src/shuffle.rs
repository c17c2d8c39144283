//! Ground-truth shuffle semantics: trajectory-directed interleaving,
//! exhaustive language enumeration and quadratic membership.
//!
//! Everything downstream (grid automata, determinization, the periodic and
//! exponential constructions) is validated against this module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::words::Word;

/// Default limit on `|u| + |v|` for exhaustive enumeration. C(26,13) is about
/// ten million interleavings, which is still seconds at desk scale; anything
/// bigger must opt in explicitly.
pub const DEFAULT_ENUMERATION_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error(
        "trajectory with {zeros} zeros / {ones} ones does not fit |u| = {u_len}, |v| = {v_len}"
    )]
    TrajectoryMismatch {
        zeros: usize,
        ones: usize,
        u_len: usize,
        v_len: usize,
    },
    #[error("invalid trajectory character {found:?} at position {position}: expected '0' or '1'")]
    InvalidTrajectoryChar { found: char, position: usize },
    #[error("enumeration of {total} total letters exceeds the cap of {cap}")]
    EnumerationCapExceeded { total: usize, cap: usize },
}

/// A binary word steering one specific interleaving: a `0` consumes the next
/// letter of the first word, a `1` the next letter of the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    bits: Vec<bool>,
}

impl Trajectory {
    pub fn new(bits: Vec<bool>) -> Self {
        Trajectory { bits }
    }

    pub fn parse(s: &str) -> Result<Self, ShuffleError> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(ShuffleError::InvalidTrajectoryChar { found, position }),
            }
        }
        Ok(Trajectory { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of `0`s, i.e. letters drawn from the first word.
    pub fn zeros(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    /// Number of `1`s, i.e. letters drawn from the second word.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.bits {
            write!(f, "{}", if bit { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A finite set of words with canonical (sorted) iteration order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordSet {
    words: BTreeSet<Word>,
}

impl WordSet {
    pub fn new() -> Self {
        WordSet::default()
    }

    pub fn insert(&mut self, word: Word) -> bool {
        self.words.insert(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn is_subset(&self, other: &WordSet) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn is_proper_subset(&self, other: &WordSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    /// Some word of `self` that `other` lacks, if any.
    pub fn difference_witness(&self, other: &WordSet) -> Option<Word> {
        self.words.iter().find(|w| !other.contains(w)).cloned()
    }

    /// Sorted, newline-delimited rendering for golden files.
    pub fn to_newline_text(&self) -> String {
        let mut out = String::new();
        for word in &self.words {
            out.push_str(&word.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Word> for WordSet {
    fn from_iter<T: IntoIterator<Item = Word>>(iter: T) -> Self {
        WordSet {
            words: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// The unique interleaving of `u` and `v` selected by trajectory `t`.
pub fn shuffle_on_trajectory(u: &Word, v: &Word, t: &Trajectory) -> Result<Word, ShuffleError> {
    let (zeros, ones) = (t.zeros(), t.ones());
    if zeros != u.len() || ones != v.len() {
        return Err(ShuffleError::TrajectoryMismatch {
            zeros,
            ones,
            u_len: u.len(),
            v_len: v.len(),
        });
    }
    let mut letters = Vec::with_capacity(u.len() + v.len());
    let (mut from_u, mut from_v) = (0, 0);
    for &bit in t.bits() {
        if bit {
            letters.push(v.letters()[from_v]);
            from_v += 1;
        } else {
            letters.push(u.letters()[from_u]);
            from_u += 1;
        }
    }
    Ok(Word::from_letters(letters))
}

/// All interleavings of the length-`i` suffix of `u` with the length-`j`
/// suffix of `v`, for selected `(i, j)`. Built layer by layer over `i + j`;
/// when `keep_all` is false only the full pair `(|u|, |v|)` is retained.
fn suffix_shuffle_sets(
    u: &Word,
    v: &Word,
    cap: usize,
    keep_all: bool,
) -> Result<BTreeMap<(usize, usize), WordSet>, ShuffleError> {
    let (m, n) = (u.len(), v.len());
    let total = m + n;
    if total > cap {
        return Err(ShuffleError::EnumerationCapExceeded { total, cap });
    }

    let mut all: BTreeMap<(usize, usize), WordSet> = BTreeMap::new();
    let mut base = WordSet::new();
    base.insert(Word::empty());
    if keep_all || total == 0 {
        all.insert((0, 0), base.clone());
    }
    // Key the previous layer by i alone; j is determined by the layer number.
    let mut prev: BTreeMap<usize, WordSet> = BTreeMap::from([(0, base)]);

    for layer in 1..=total {
        let mut cur: BTreeMap<usize, WordSet> = BTreeMap::new();
        let lo = layer.saturating_sub(n);
        let hi = layer.min(m);
        for i in lo..=hi {
            let j = layer - i;
            let mut set = WordSet::new();
            if i >= 1 {
                let a = u.letters()[m - i];
                if let Some(shorter) = prev.get(&(i - 1)) {
                    for word in shorter.iter() {
                        set.insert(word.prepended(a));
                    }
                }
            }
            if j >= 1 {
                let b = v.letters()[n - j];
                if let Some(shorter) = prev.get(&i) {
                    for word in shorter.iter() {
                        set.insert(word.prepended(b));
                    }
                }
            }
            if keep_all || layer == total {
                all.insert((i, j), set.clone());
            }
            cur.insert(i, set);
        }
        prev = cur;
    }
    Ok(all)
}

/// The exact set `u ⧢ v`, i.e. every `shuffle_on_trajectory` result,
/// deduplicated. Errors loudly instead of truncating when over the cap.
pub fn enumerate_shuffle(u: &Word, v: &Word) -> Result<WordSet, ShuffleError> {
    enumerate_shuffle_capped(u, v, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_shuffle_capped(u: &Word, v: &Word, cap: usize) -> Result<WordSet, ShuffleError> {
    let mut sets = suffix_shuffle_sets(u, v, cap, false)?;
    Ok(sets
        .remove(&(u.len(), v.len()))
        .expect("full pair always computed"))
}

/// Interleavings of every suffix pair at once, keyed by remaining lengths.
pub fn suffix_shuffle_table(
    u: &Word,
    v: &Word,
    cap: usize,
) -> Result<BTreeMap<(usize, usize), WordSet>, ShuffleError> {
    suffix_shuffle_sets(u, v, cap, true)
}

/// Whether `z` is an interleaving of `u` and `v`. Runs in O(|u|·|v|) by
/// pushing the frontier of (consumed-from-u, consumed-from-v) pairs across
/// the positions of `z`; the frontier at position p mirrors the vertical
/// layer p of the grid automaton.
pub fn membership(z: &Word, u: &Word, v: &Word) -> bool {
    let (m, n) = (u.len(), v.len());
    if z.len() != m + n {
        return false;
    }
    // frontier[cu] = reachable with cu letters of u consumed (cv = pos - cu).
    let mut frontier = vec![false; m + 1];
    frontier[0] = true;
    for (pos, &c) in z.letters().iter().enumerate() {
        let mut next = vec![false; m + 1];
        let lo = pos.saturating_sub(n);
        let hi = pos.min(m);
        for cu in lo..=hi {
            if !frontier[cu] {
                continue;
            }
            let cv = pos - cu;
            if cu < m && u.letters()[cu] == c {
                next[cu + 1] = true;
            }
            if cv < n && v.letters()[cv] == c {
                next[cu] = true;
            }
        }
        frontier = next;
    }
    frontier[m]
}

/// The number of trajectories for `(u, v)`: C(|u|+|v|, |u|), exactly.
pub fn trajectory_count(u: &Word, v: &Word) -> BigUint {
    binomial(u.len() + v.len(), u.len())
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut result = BigUint::from(1u32);
    for step in 0..k {
        result = result * BigUint::from(n - step) / BigUint::from(step + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn t(s: &str) -> Trajectory {
        Trajectory::parse(s).unwrap()
    }

    /// Brute-force oracle: walk every bit pattern with the right zero/one
    /// counts and collect the interleavings.
    fn trajectory_enumerate(u: &Word, v: &Word) -> WordSet {
        fn recurse(
            u: &Word,
            v: &Word,
            bits: &mut Vec<bool>,
            zeros_left: usize,
            ones_left: usize,
            out: &mut WordSet,
        ) {
            if zeros_left == 0 && ones_left == 0 {
                let traj = Trajectory::new(bits.clone());
                out.insert(shuffle_on_trajectory(u, v, &traj).unwrap());
                return;
            }
            if zeros_left > 0 {
                bits.push(false);
                recurse(u, v, bits, zeros_left - 1, ones_left, out);
                bits.pop();
            }
            if ones_left > 0 {
                bits.push(true);
                recurse(u, v, bits, zeros_left, ones_left - 1, out);
                bits.pop();
            }
        }
        let mut out = WordSet::new();
        let mut bits = Vec::new();
        recurse(u, v, &mut bits, u.len(), v.len(), &mut out);
        out
    }

    #[test]
    fn shuffle_on_trajectory_examples() {
        assert_eq!(
            shuffle_on_trajectory(&w("ab"), &w("cd"), &t("0101")).unwrap(),
            w("acbd")
        );
        assert_eq!(
            shuffle_on_trajectory(&w("ab"), &w("cd"), &t("0011")).unwrap(),
            w("abcd")
        );
        // Positional consumption: zeros at positions 1,4,6,7 take a,a,b,b
        // from u; ones at 2,3,5 take a,a,b from v.
        assert_eq!(
            shuffle_on_trajectory(&w("aabb"), &w("aab"), &t("0110100")).unwrap(),
            w("aaaabbb")
        );
    }

    #[test]
    fn shuffle_on_trajectory_rejects_mismatch() {
        let err = shuffle_on_trajectory(&w("ab"), &w("cd"), &t("001")).unwrap_err();
        assert!(matches!(err, ShuffleError::TrajectoryMismatch { .. }));
    }

    #[test]
    fn enumerate_examples() {
        let ab = enumerate_shuffle(&w("a"), &w("b")).unwrap();
        assert_eq!(ab, [w("ab"), w("ba")].into_iter().collect());

        let aa = enumerate_shuffle(&w("a"), &w("a")).unwrap();
        assert_eq!(aa, [w("aa")].into_iter().collect());

        // Six trajectories collapse onto two distinct words.
        let abab = enumerate_shuffle(&w("ab"), &w("ab")).unwrap();
        assert_eq!(abab, trajectory_enumerate(&w("ab"), &w("ab")));
        assert_eq!(abab, [w("aabb"), w("abab")].into_iter().collect());
    }

    #[test]
    fn enumerate_matches_trajectory_oracle() {
        let pairs = [
            ("ab", "cd"),
            ("aabb", "aab"),
            ("abc", "cba"),
            ("aaa", "aa"),
            ("ab", ""),
            ("", ""),
            ("babb", "bb"),
        ];
        for (u, v) in pairs {
            let (u, v) = (w(u), w(v));
            assert_eq!(
                enumerate_shuffle(&u, &v).unwrap(),
                trajectory_enumerate(&u, &v),
                "pair ({u}, {v})"
            );
        }
    }

    #[test]
    fn enumerate_cap_is_loud() {
        let long = w("aaaaaaaaaaaaaa"); // 14 letters
        let err = enumerate_shuffle_capped(&long, &long, 26).unwrap_err();
        assert_eq!(
            err,
            ShuffleError::EnumerationCapExceeded { total: 28, cap: 26 }
        );
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&w("acbd"), &w("ab"), &w("cd")));
        assert!(!membership(&w("ba"), &w("ab"), &Word::empty()));
        // Length mismatch rejects immediately.
        assert!(!membership(&w("abc"), &w("ab"), &w("cd")));
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let pairs = [("aab", "abba"), ("ab", "ba"), ("abc", "ac")];
        for (u, v) in pairs {
            let (u, v) = (w(u), w(v));
            let set = enumerate_shuffle(&u, &v).unwrap();
            for z in set.iter() {
                assert!(membership(z, &u, &v), "{z} should be a member");
            }
            // A word of the right length but wrong Parikh vector is never a member.
            let bogus = Word::from_letters(vec![u.letters()[0]; u.len() + v.len()]);
            assert_eq!(membership(&bogus, &u, &v), set.contains(&bogus));
        }
    }

    #[test]
    fn trajectory_count_examples() {
        assert_eq!(trajectory_count(&w("ab"), &w("cd")), BigUint::from(6u32));
        assert_eq!(trajectory_count(&Word::empty(), &w("abc")), BigUint::from(1u32));
        assert_eq!(trajectory_count(&w("aabb"), &w("aab")), BigUint::from(35u32));
    }

    #[test]
    fn suffix_table_matches_direct_enumeration() {
        let (u, v) = (w("bbaa"), w("aab"));
        let table = suffix_shuffle_table(&u, &v, 26).unwrap();
        for i in 0..=u.len() {
            for j in 0..=v.len() {
                let direct = enumerate_shuffle(&u.suffix(i), &v.suffix(j)).unwrap();
                assert_eq!(table[&(i, j)], direct, "suffix pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn wordset_newline_text_golden() {
        let set = enumerate_shuffle(&w("ab"), &w("ab")).unwrap();
        assert_eq!(set.to_newline_text(), "aabb\nabab\n");
    }
}
