//! Word families with extreme determinization behaviour: the equal-length
//! pair whose minimal DFA grows exponentially, the probe words that certify
//! the growth, and the two-letter-switch neighbour that stays quadratic.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::determinize::{self, DeterminizeError};
use crate::grid::{GridNfa, GridState};
use crate::shuffle;
use crate::words::Word;
use crate::CheckOutcome;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamiliesError {
    #[error("family parameter n must be at least 1 (got {n})")]
    NTooSmall { n: usize },
    #[error("expected {expected} choice bits, got {got}")]
    ChoiceLengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Determinize(#[from] DeterminizeError),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// The equal-length pair whose shuffle needs exponentially many DFA states:
/// `u = (aabb)^n aabbaabb (aabb)^n aaaaa`, `v = (aabb)^n aabababb (aabb)^n
/// bbbbb`. Both have length `8n + 13` and differ from the quadratic
/// neighbour in a single two-letter switch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialPair {
    pub n: usize,
    pub u: Word,
    pub v: Word,
}

fn block() -> Word {
    Word::parse("aabb").expect("static")
}

pub fn exponential_pair(n: usize) -> Result<ExponentialPair, FamiliesError> {
    if n < 1 {
        return Err(FamiliesError::NTooSmall { n });
    }
    let b = block();
    let u = b
        .repeat(n)
        .concat(&Word::parse("aabbaabb").expect("static"))
        .concat(&b.repeat(n))
        .concat(&Word::parse("aaaaa").expect("static"));
    let v = b
        .repeat(n)
        .concat(&Word::parse("aabababb").expect("static"))
        .concat(&b.repeat(n))
        .concat(&Word::parse("bbbbb").expect("static"));
    assert_eq!(u.len(), 8 * n + 13);
    assert_eq!(v.len(), 8 * n + 13);
    Ok(ExponentialPair { n, u, v })
}

/// The same lengths with the two-letter switch reverted:
/// `((aabb)^{2n+2} aaaaa, (aabb)^{2n+2} bbbbb)`. Its minimal DFA stays
/// quadratic.
pub fn quadratic_neighbor(n: usize) -> Result<(Word, Word), FamiliesError> {
    if n < 1 {
        return Err(FamiliesError::NTooSmall { n });
    }
    let body = block().repeat(2 * n + 2);
    let u = body.concat(&Word::parse("aaaaa").expect("static"));
    let v = body.concat(&Word::parse("bbbbb").expect("static"));
    Ok((u, v))
}

/// A probe word: `a (aabb)^n aaa · x_1 … x_{n+1} · bbbb (aabb)^n aaaaa bbbbb`
/// where `x_i = bbbbaaaa` when the i-th choice bit is set and `bbbabaaa`
/// otherwise. Each set bit cuts one diagonal of the run frontier at its prune
/// point, so distinct choices steer the determinized automaton into distinct
/// states; every probe with at least one unset bit keeps a diagonal alive and
/// is a member of the shuffle, while the all-ones probe cuts every diagonal
/// and is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeWord {
    pub n: usize,
    pub choices: Vec<bool>,
    pub word: Word,
}

pub fn probe_word(n: usize, choices: &[bool]) -> Result<ProbeWord, FamiliesError> {
    if n < 1 {
        return Err(FamiliesError::NTooSmall { n });
    }
    if choices.len() != n + 1 {
        return Err(FamiliesError::ChoiceLengthMismatch {
            expected: n + 1,
            got: choices.len(),
        });
    }
    let b = block();
    let mut word = Word::parse("a").expect("static").concat(&b.repeat(n));
    word = word.concat(&Word::parse("aaa").expect("static"));
    for &choice in choices {
        let chunk = if choice { "bbbbaaaa" } else { "bbbabaaa" };
        word = word.concat(&Word::parse(chunk).expect("static"));
    }
    word = word
        .concat(&Word::parse("bbbb").expect("static"))
        .concat(&b.repeat(n))
        .concat(&Word::parse("aaaaabbbbb").expect("static"));
    assert_eq!(word.len(), 2 * (8 * n + 13));
    Ok(ProbeWord {
        n,
        choices: choices.to_vec(),
        word,
    })
}

/// The prefix that completes the duplication stage: `a (aabb)^n aaa`.
pub fn duplication_prefix(n: usize) -> Word {
    Word::parse("a")
        .expect("static")
        .concat(&block().repeat(n))
        .concat(&Word::parse("aaa").expect("static"))
}

/// Lower bound on the minimal DFA size for the exponential pair:
/// `8(n+1) + 13(2^(n+1) - 1) + 10`.
pub fn exp_lower_bound(n: usize) -> u128 {
    assert!(n <= 120, "bound does not fit in u128");
    8 * (n as u128 + 1) + 13 * ((1u128 << (n + 1)) - 1) + 10
}

/// Translate a state written in read-so-far coordinates — `layer` prefixes
/// read plus one, `diag`-th state along the diagonal counted from the
/// u-side, both 1-based — into grid (remaining-suffix) coordinates. This is
/// the single place where the two numbering conventions meet: consumed
/// `(layer - diag, diag - 1)` becomes remaining
/// `(|u| - layer + diag, |v| - diag + 1)`.
pub fn consumed_diag_to_grid(u_len: usize, v_len: usize, layer: usize, diag: usize) -> GridState {
    let consumed_u = layer - diag;
    let consumed_v = diag - 1;
    GridState::new(u_len - consumed_u, v_len - consumed_v)
}

/// The states the duplication stage must end in, in grid coordinates:
/// `n + 1` states on the diagonal of the layer reached after
/// `a (aabb)^n aaa`, at diagonal offsets `3 + 4l` for `0 <= l <= n`.
pub fn expected_after_duplication(pair: &ExponentialPair) -> BTreeSet<GridState> {
    let layer = 4 * pair.n + 5;
    (0..=pair.n)
        .map(|l| consumed_diag_to_grid(pair.u.len(), pair.v.len(), layer, 3 + 4 * l))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    Exponential,
    QuadraticNeighbor,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Exponential => write!(f, "exponential"),
            FamilyKind::QuadraticNeighbor => write!(f, "quadratic"),
        }
    }
}

/// One measured row of the family experiment.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub n: usize,
    pub family: FamilyKind,
    pub u_len: usize,
    pub v_len: usize,
    pub nfa_states: usize,
    /// `None` when the subset construction hit the live-state cap.
    pub subset_dfa_states: Option<usize>,
    pub minimal_dfa_states: Option<usize>,
    /// Lower bound for the exponential family, upper bound for the neighbour.
    pub predicted_or_bound: u128,
    pub wall_time_ms: u128,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    /// Rows that hit the resource cap, by (family, n).
    pub truncated: Vec<(FamilyKind, usize)>,
}

impl ExperimentReport {
    /// Fixed column order: n, family, u_len, v_len, nfa, subset_dfa,
    /// minimal_dfa, predicted_or_bound, wall_time_ms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,family,u_len,v_len,nfa,subset_dfa,minimal_dfa,predicted_or_bound,wall_time_ms\n",
        );
        for row in &self.rows {
            let subset = row
                .subset_dfa_states
                .map(|s| s.to_string())
                .unwrap_or_default();
            let minimal = row
                .minimal_dfa_states
                .map(|s| s.to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.n,
                row.family,
                row.u_len,
                row.v_len,
                row.nfa_states,
                subset,
                minimal,
                row.predicted_or_bound,
                row.wall_time_ms
            ));
        }
        out
    }
}

/// Measure both families for n = 1..=n_max. Rows that exceed the subset cap
/// are preserved with empty size columns and recorded as truncated.
pub fn run_experiment(n_max: usize, subset_cap: usize) -> Result<ExperimentReport, FamiliesError> {
    if n_max < 1 {
        return Err(FamiliesError::NTooSmall { n: n_max });
    }
    let mut report = ExperimentReport::default();
    for family in [FamilyKind::Exponential, FamilyKind::QuadraticNeighbor] {
        for n in 1..=n_max {
            let (u, v, bound) = match family {
                FamilyKind::Exponential => {
                    let pair = exponential_pair(n)?;
                    (pair.u, pair.v, exp_lower_bound(n))
                }
                FamilyKind::QuadraticNeighbor => {
                    let (u, v) = quadratic_neighbor(n)?;
                    let bound = 2 * (u.len() as u128 + 1) * (v.len() as u128 + 1);
                    (u, v, bound)
                }
            };
            let nfa = GridNfa::new(u.clone(), v.clone())?;
            let start = Instant::now();
            let (subset_states, minimal_states) =
                match determinize::subset_construction_capped(&nfa, subset_cap) {
                    Ok(subset) => {
                        let minimal = determinize::minimize(&subset);
                        (Some(subset.state_count()), Some(minimal.state_count()))
                    }
                    Err(DeterminizeError::SubsetCapExceeded { .. }) => {
                        report.truncated.push((family, n));
                        (None, None)
                    }
                    Err(err) => return Err(err.into()),
                };
            report.rows.push(ExperimentRow {
                n,
                family,
                u_len: u.len(),
                v_len: v.len(),
                nfa_states: nfa.state_count(),
                subset_dfa_states: subset_states,
                minimal_dfa_states: minimal_states,
                predicted_or_bound: bound,
                wall_time_ms: start.elapsed().as_millis(),
            });
        }
    }
    Ok(report)
}

/// Verification sweep for the exponential family at one `n`: the minimal DFA
/// beats the closed-form lower bound, the duplication stage ends in exactly
/// the predicted `n + 1` states, every probe is accepted, and distinct probe
/// choices reach distinct determinized states.
pub fn verify_exponential(n: usize, subset_cap: usize) -> Result<Vec<CheckOutcome>, FamiliesError> {
    let pair = exponential_pair(n)?;
    let nfa = GridNfa::new(pair.u.clone(), pair.v.clone())?;
    let subset = determinize::subset_construction_capped(&nfa, subset_cap)?;
    let minimal = determinize::minimize(&subset);
    let mut outcomes = Vec::new();

    let bound = exp_lower_bound(n);
    outcomes.push(CheckOutcome {
        subject: format!("n={n}: minimal size vs lower bound"),
        ok: minimal.state_count() as u128 >= bound,
        detail: format!("minimal {} >= bound {bound}", minimal.state_count()),
    });

    // Duplication stage: the determinized state reached on a(aabb)^n aaa must
    // carry exactly the predicted n + 1 grid labels.
    let prefix = duplication_prefix(n);
    let reached = subset.run(&prefix);
    let expected = expected_after_duplication(&pair);
    let actual: Option<BTreeSet<GridState>> = reached
        .and_then(|state| subset.labels_of(state))
        .map(|labels| labels.iter().copied().collect());
    let dup_ok = actual.as_ref() == Some(&expected);
    outcomes.push(CheckOutcome {
        subject: format!("n={n}: duplication-stage labels"),
        ok: dup_ok && expected.len() == n + 1,
        detail: format!("expected {expected:?}, got {actual:?}"),
    });

    // The frontier route must agree with the instrumented determinization.
    let frontier = nfa.frontier_after(&prefix);
    outcomes.push(CheckOutcome {
        subject: format!("n={n}: frontier agrees with subset labels"),
        ok: actual.as_ref() == Some(&frontier),
        detail: format!("frontier {frontier:?}"),
    });

    // Probe soundness and filtering-stage distinctness. A set bit cuts one
    // diagonal, so exactly the all-ones probe is rejected.
    let mut reached_states = BTreeSet::new();
    let mut membership_as_predicted = true;
    let count = 1usize << (n + 1);
    for mask in 0..count {
        let choices: Vec<bool> = (0..=n).map(|bit| mask >> bit & 1 == 1).collect();
        let probe = probe_word(n, &choices)?;
        let expected_member = choices.iter().any(|&c| !c);
        if shuffle::membership(&probe.word, &pair.u, &pair.v) != expected_member {
            membership_as_predicted = false;
        }
        let filter_len = prefix.len() + 8 * (n + 1);
        let filter_prefix = Word::from_letters(probe.word.letters()[..filter_len].to_vec());
        reached_states.insert(subset.run(&filter_prefix));
    }
    outcomes.push(CheckOutcome {
        subject: format!("n={n}: probes accepted except the all-ones choice"),
        ok: membership_as_predicted,
        detail: format!("{count} probes checked"),
    });
    outcomes.push(CheckOutcome {
        subject: format!("n={n}: distinct choices reach distinct states"),
        ok: reached_states.len() == count && reached_states.contains(&None),
        detail: format!(
            "{} distinct outcomes ({} live states plus one rejection)",
            reached_states.len(),
            reached_states.iter().flatten().count()
        ),
    });

    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_lengths_and_content() {
        let pair = exponential_pair(1).unwrap();
        assert_eq!(pair.u, Word::parse("aabbaabbaabbaabbaaaaa").unwrap());
        assert_eq!(pair.u.len(), 21);
        assert_eq!(pair.v.len(), 21);
        assert!(exponential_pair(0).is_err());
    }

    #[test]
    fn pair_differs_in_exactly_two_positions_from_neighbor() {
        for n in 1..=3 {
            let pair = exponential_pair(n).unwrap();
            let (qu, qv) = quadratic_neighbor(n).unwrap();
            assert_eq!(pair.u, qu, "u agrees with the neighbour");
            assert_eq!(pair.v.len(), qv.len());
            let diffs = pair
                .v
                .letters()
                .iter()
                .zip(qv.letters())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(diffs, 2, "n = {n}");
        }
    }

    #[test]
    fn letter_counts_differ_by_five() {
        // Sanity property: u carries five extra a's, v five extra b's.
        let pair = exponential_pair(2).unwrap();
        let a = crate::words::Letter::new('a').unwrap();
        let b = crate::words::Letter::new('b').unwrap();
        assert_eq!(pair.u.letter_count(a), pair.v.letter_count(a) + 5);
        assert_eq!(pair.v.letter_count(b), pair.u.letter_count(b) + 5);
    }

    #[test]
    fn probe_examples() {
        // The probe for n = 2 with choices 101.
        let probe = probe_word(2, &[true, false, true]).unwrap();
        let expected = Word::parse(
            "aaabbaabbaaabbbbaaaabbbabaaabbbbaaaabbbbaabbaabbaaaaabbbbb",
        )
        .unwrap();
        assert_eq!(probe.word, expected);
        assert!(probe_word(2, &[true]).is_err());
    }

    #[test]
    fn probe_membership_for_n1() {
        // One diagonal survives whenever some bit is unset; the all-ones
        // probe cuts both diagonals and is rejected.
        let pair = exponential_pair(1).unwrap();
        for mask in 0..4usize {
            let choices = vec![mask & 1 == 1, mask >> 1 & 1 == 1];
            let probe = probe_word(1, &choices).unwrap();
            let expected = mask != 3;
            assert_eq!(
                shuffle::membership(&probe.word, &pair.u, &pair.v),
                expected,
                "choices {choices:?}"
            );
        }
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(exp_lower_bound(1), 65);
        assert_eq!(exp_lower_bound(2), 125);
        // Growth: ratio to 2^(n/8-ish) stays bounded below; consecutive
        // values roughly double for large n.
        let mut previous = exp_lower_bound(1);
        for n in 2..=10 {
            let current = exp_lower_bound(n);
            assert!(current > previous);
            previous = current;
        }
        let r9 = exp_lower_bound(10) as f64 / exp_lower_bound(9) as f64;
        assert!(r9 > 1.9 && r9 < 2.1);
    }

    #[test]
    fn experiment_csv_shape() {
        let report = run_experiment(1, 1_000_000).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,family,u_len,v_len,nfa,subset_dfa,minimal_dfa,predicted_or_bound,wall_time_ms"
        );
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("1,exponential,21,21,484,"));
        assert!(csv.contains("1,quadratic,21,21,484,"));
        assert!(report.truncated.is_empty());
    }

    #[test]
    fn experiment_preserves_partial_results_on_cap() {
        let report = run_experiment(1, 8).unwrap();
        assert_eq!(report.truncated.len(), 2);
        assert!(report.rows.iter().all(|row| row.subset_dfa_states.is_none()));
        // Rows are still emitted with empty size cells.
        assert_eq!(report.rows.len(), 2);
    }
}
