//! Word arguments in plain or exponent syntax, e.g. `bc(abc)^2aaaaa`.
//! Groups expand before any computation starts, with a hard cap against
//! accidental blow-ups.

use std::fmt;

use wordshuffle::words::{Letter, Word};

/// Expanded words may not exceed this many letters.
pub const EXPANSION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SpecError {}

fn err(position: usize, message: impl Into<String>) -> SpecError {
    SpecError {
        position,
        message: message.into(),
    }
}

pub fn parse_word_spec(input: &str) -> Result<Word, SpecError> {
    let chars: Vec<char> = input.chars().collect();
    let mut letters: Vec<Letter> = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            'a'..='z' => {
                letters.push(Letter::new(c).expect("lowercase"));
                pos += 1;
            }
            '(' => {
                let group_start = pos + 1;
                let mut end = group_start;
                while end < chars.len() && chars[end] != ')' {
                    end += 1;
                }
                if end == chars.len() {
                    return Err(err(pos, "unclosed '('"));
                }
                if end == group_start {
                    return Err(err(group_start, "empty group"));
                }
                let mut group = Vec::with_capacity(end - group_start);
                for (offset, &gc) in chars[group_start..end].iter().enumerate() {
                    match gc {
                        'a'..='z' => group.push(Letter::new(gc).expect("lowercase")),
                        other => {
                            return Err(err(
                                group_start + offset,
                                format!("invalid letter {other:?} inside group"),
                            ))
                        }
                    }
                }
                pos = end + 1;
                if pos >= chars.len() || chars[pos] != '^' {
                    return Err(err(pos, "expected '^' after ')'"));
                }
                pos += 1;
                let digits_start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == digits_start {
                    return Err(err(digits_start, "expected an exponent after '^'"));
                }
                let exponent: usize = chars[digits_start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err(digits_start, "exponent too large"))?;
                if group.len().saturating_mul(exponent) > EXPANSION_CAP {
                    return Err(err(
                        digits_start,
                        format!("expansion exceeds {EXPANSION_CAP} letters"),
                    ));
                }
                for _ in 0..exponent {
                    letters.extend_from_slice(&group);
                }
            }
            other => {
                return Err(err(
                    pos,
                    format!("invalid character {other:?}: expected a lowercase letter or '('"),
                ))
            }
        }
        if letters.len() > EXPANSION_CAP {
            return Err(err(pos, format!("word exceeds {EXPANSION_CAP} letters")));
        }
    }
    Ok(Word::from_letters(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_grouped_forms() {
        assert_eq!(parse_word_spec("abc").unwrap(), Word::parse("abc").unwrap());
        assert_eq!(
            parse_word_spec("bc(abc)^2").unwrap(),
            Word::parse("bcabcabc").unwrap()
        );
        assert_eq!(
            parse_word_spec("(ab)^2c(ab)^1").unwrap(),
            Word::parse("ababcab").unwrap()
        );
        assert_eq!(parse_word_spec("(ab)^0").unwrap(), Word::empty());
        assert_eq!(parse_word_spec("").unwrap(), Word::empty());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_word_spec("aBc").unwrap_err().position, 1);
        assert_eq!(parse_word_spec("a(bc").unwrap_err().position, 1);
        assert_eq!(parse_word_spec("(ab)2").unwrap_err().position, 4);
        assert_eq!(parse_word_spec("(ab)^").unwrap_err().position, 5);
        assert_eq!(parse_word_spec("()^2").unwrap_err().position, 1);
    }

    #[test]
    fn expansion_cap_is_enforced() {
        assert!(parse_word_spec("(ab)^4999").is_ok());
        assert!(parse_word_spec("(ab)^5001").is_err());
    }
}
