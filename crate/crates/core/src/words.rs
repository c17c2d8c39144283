//! Word-level combinatorics: skeletons, letter counts, the suffix order and
//! periodic decomposition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised when constructing letters, alphabets or words.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {found:?} at position {position}: expected an ascii lowercase letter")]
    InvalidLetter { found: char, position: usize },
    #[error("letter '{letter}' does not belong to the declared alphabet")]
    OutsideAlphabet { letter: Letter },
    #[error("duplicate letter '{letter}' in alphabet")]
    DuplicateLetter { letter: Letter },
    #[error("an alphabet needs at least one letter")]
    EmptyAlphabet,
    #[error("'{prefix}' is not a suffix of '{base}'")]
    PrefixNotSuffix { prefix: Word, base: Word },
    #[error("the base of a periodic form must be non-empty")]
    EmptyBase,
}

/// A single letter. Restricted to ascii lowercase so that words render as
/// plain strings, one character per letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(c: char) -> Result<Self, WordError> {
        if c.is_ascii_lowercase() {
            Ok(Letter(c as u8))
        } else {
            Err(WordError::InvalidLetter {
                found: c,
                position: 0,
            })
        }
    }

    pub fn as_char(self) -> char {
        self.0 as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "'{}'", self.as_char())
    }
}

/// An ordered set of distinct letters. Iteration order is the construction
/// order and is stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self, WordError> {
        let mut seen = Vec::new();
        for letter in letters {
            if seen.contains(&letter) {
                return Err(WordError::DuplicateLetter { letter });
            }
            seen.push(letter);
        }
        if seen.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        Ok(Alphabet { letters: seen })
    }

    pub fn parse(s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for (position, c) in s.chars().enumerate() {
            let letter =
                Letter::new(c).map_err(|_| WordError::InvalidLetter { found: c, position })?;
            letters.push(letter);
        }
        Self::new(letters)
    }

    /// The sorted union of the letters occurring in the given words.
    pub fn of_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Result<Self, WordError> {
        let mut letters: Vec<Letter> = words
            .into_iter()
            .flat_map(|w| w.letters().iter().copied())
            .collect();
        letters.sort();
        letters.dedup();
        Self::new(letters)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.letters.contains(&letter)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// A finite word. The empty word is a first-class value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Parse a plain ascii-lowercase string, one character per letter.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            let letter =
                Letter::new(c).map_err(|_| WordError::InvalidLetter { found: c, position })?;
            letters.push(letter);
        }
        Ok(Word { letters })
    }

    /// Parse and additionally require every letter to belong to `alphabet`.
    pub fn over(s: &str, alphabet: &Alphabet) -> Result<Self, WordError> {
        let word = Self::parse(s)?;
        for &letter in &word.letters {
            if !alphabet.contains(letter) {
                return Err(WordError::OutsideAlphabet { letter });
            }
        }
        Ok(word)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn get(&self, index: usize) -> Option<Letter> {
        self.letters.get(index).copied()
    }

    /// The suffix consisting of the last `len` letters.
    pub fn suffix(&self, len: usize) -> Word {
        assert!(len <= self.len(), "suffix longer than the word");
        Word {
            letters: self.letters[self.len() - len..].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn repeat(&self, times: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * times);
        for _ in 0..times {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    pub fn prepended(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Word { letters }
    }

    /// Collapse every maximal run of equal letters to a single letter.
    pub fn skeleton(&self) -> Word {
        let mut letters: Vec<Letter> = Vec::new();
        for &letter in &self.letters {
            if letters.last() != Some(&letter) {
                letters.push(letter);
            }
        }
        Word { letters }
    }

    /// The number of occurrences of `letter`.
    pub fn letter_count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// Whether every letter occurs at most once.
    pub fn is_non_repeating(&self) -> bool {
        let mut seen = Vec::with_capacity(self.len());
        for &letter in &self.letters {
            if seen.contains(&letter) {
                return false;
            }
            seen.push(letter);
        }
        true
    }

    /// Whether each letter forms at most one maximal run, i.e. the skeleton
    /// is non-repeating.
    pub fn has_one_section_per_letter(&self) -> bool {
        self.skeleton().is_non_repeating()
    }

    /// Whether `other` ends with `self`.
    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.len() >= self.len() && other.letters[other.len() - self.len()..] == self.letters[..]
    }

    /// The sorted set of distinct letters of this word.
    pub fn alphabet(&self) -> Result<Alphabet, WordError> {
        Alphabet::of_words([self])
    }

    /// Per-letter occurrence counts.
    pub fn parikh(&self) -> BTreeMap<Letter, usize> {
        let mut counts = BTreeMap::new();
        for &letter in &self.letters {
            *counts.entry(letter).or_insert(0) += 1;
        }
        counts
    }

    pub fn distinct_letter_count(&self) -> usize {
        self.parikh().len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

/// A word written as `prefix · base^exponent` where the prefix is a suffix of
/// the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicForm {
    base: Word,
    prefix: Word,
    exponent: usize,
}

impl PeriodicForm {
    pub fn new(base: Word, prefix: Word, exponent: usize) -> Result<Self, WordError> {
        if base.is_empty() {
            return Err(WordError::EmptyBase);
        }
        if !prefix.is_suffix_of(&base) {
            return Err(WordError::PrefixNotSuffix { prefix, base });
        }
        Ok(PeriodicForm {
            base,
            prefix,
            exponent,
        })
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// Rebuild the word the form describes.
    pub fn expand(&self) -> Word {
        self.prefix.concat(&self.base.repeat(self.exponent))
    }
}

/// Write `u` as `prefix · w^k` with the prefix a (possibly empty, possibly
/// full) suffix of `w`, maximizing `k`. `None` when no such split exists.
pub fn periodic_decompose(u: &Word, w: &Word) -> Option<PeriodicForm> {
    assert!(!w.is_empty(), "period base must be non-empty");
    let n = w.len();
    for k in (0..=u.len() / n).rev() {
        let split = u.len() - k * n;
        let tail_ok = (0..k).all(|block| {
            let start = split + block * n;
            u.letters()[start..start + n] == w.letters()[..]
        });
        if !tail_ok {
            continue;
        }
        let prefix = Word::from_letters(u.letters()[..split].to_vec());
        if prefix.is_suffix_of(w) {
            return Some(PeriodicForm::new(w.clone(), prefix, k).expect("checked suffix"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Independent run-length encoder; the skeleton is its sequence of run letters.
    fn rle_letters(word: &Word) -> Vec<Letter> {
        let mut runs: Vec<(Letter, usize)> = Vec::new();
        for &l in word.letters() {
            match runs.last_mut() {
                Some((r, count)) if *r == l => *count += 1,
                _ => runs.push((l, 1)),
            }
        }
        runs.into_iter().map(|(l, _)| l).collect()
    }

    #[test]
    fn skeleton_examples() {
        assert_eq!(w("bbaa").skeleton(), w("ba"));
        assert_eq!(Word::empty().skeleton(), Word::empty());
        let expected = Word::from_letters(rle_letters(&w("aabbaa")));
        assert_eq!(expected, w("aba"));
        assert_eq!(w("aabbaa").skeleton(), expected);
    }

    #[test]
    fn skeleton_has_no_adjacent_repeats() {
        let word = w("aaabccbba");
        let skel = word.skeleton();
        for pair in skel.letters().windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
    }

    #[test]
    fn letter_count_examples() {
        let b = Letter::new('b').unwrap();
        let a = Letter::new('a').unwrap();
        assert_eq!(w("bbaa").letter_count(b), 2);
        assert_eq!(Word::empty().letter_count(a), 0);
        let word = w("aabababb");
        let by_filter = word.letters().iter().filter(|&&l| l == a).count();
        assert_eq!(by_filter, 4);
        assert_eq!(word.letter_count(a), 4);
    }

    #[test]
    fn non_repeating_examples() {
        assert!(w("abc").is_non_repeating());
        assert!(!w("aabb").is_non_repeating());
        assert!(Word::empty().is_non_repeating());
    }

    #[test]
    fn one_section_per_letter_examples() {
        assert!(w("aabb").has_one_section_per_letter());
        assert!(!w("abab").has_one_section_per_letter());
        assert!(Word::empty().has_one_section_per_letter());
    }

    #[test]
    fn suffix_examples() {
        assert!(w("bc").is_suffix_of(&w("abc")));
        assert!(Word::empty().is_suffix_of(&w("abc")));
        assert!(!w("ab").is_suffix_of(&w("abc")));
    }

    #[test]
    fn periodic_decompose_examples() {
        let form = periodic_decompose(&w("bcabcabc"), &w("abc")).unwrap();
        assert_eq!(form.base(), &w("abc"));
        assert_eq!(form.prefix(), &w("bc"));
        assert_eq!(form.exponent(), 2);

        let form = periodic_decompose(&w("abc"), &w("abc")).unwrap();
        assert_eq!(form.prefix(), &Word::empty());
        assert_eq!(form.exponent(), 1);

        assert!(periodic_decompose(&w("abca"), &w("abc")).is_none());
    }

    #[test]
    fn periodic_decompose_exhaustive_cross_check() {
        // Every reported decomposition must rebuild the input, and no split
        // with a larger exponent may exist.
        let bases = ["ab", "abc", "aab"];
        let words = ["ababab", "bab", "abab", "baabaab", "a", ""];
        for base in bases {
            let base = w(base);
            for word in words {
                let word = w(word);
                let best = periodic_decompose(&word, &base);
                let mut found: Option<usize> = None;
                for k in (0..=word.len() / base.len()).rev() {
                    let tail = base.repeat(k);
                    if !tail.is_suffix_of(&word) {
                        continue;
                    }
                    let prefix =
                        Word::from_letters(word.letters()[..word.len() - tail.len()].to_vec());
                    if prefix.is_suffix_of(&base) {
                        found = Some(k);
                        break;
                    }
                }
                match (best, found) {
                    (Some(form), Some(k)) => {
                        assert_eq!(form.exponent(), k);
                        assert_eq!(form.expand(), word);
                    }
                    (None, None) => {}
                    (best, found) => panic!("mismatch for {word}: {best:?} vs {found:?}"),
                }
            }
        }
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::parse("aba").is_err());
        assert!(Alphabet::parse("").is_err());
        let ab = Alphabet::parse("ab").unwrap();
        assert!(Word::over("abba", &ab).is_ok());
        assert!(Word::over("abc", &ab).is_err());
    }

    #[test]
    fn words_reject_bad_letters() {
        let err = Word::parse("aBc").unwrap_err();
        assert_eq!(
            err,
            WordError::InvalidLetter {
                found: 'B',
                position: 1
            }
        );
    }
}
