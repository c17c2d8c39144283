//! Layer-aware subset construction, partial-DFA minimization, language
//! equivalence, and the closed-form bound on determinization size.
//!
//! All state counts are partial-DFA counts: there is never a dead state, and
//! a missing transition rejects.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use thiserror::Error;

use crate::grid::{GridError, GridNfa, GridState};
use crate::shuffle::WordSet;
use crate::words::{Alphabet, Letter, Word};

/// Default limit on live subsets during capped determinization.
pub const DEFAULT_SUBSET_CAP: usize = 1_000_000;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeterminizeError {
    #[error("subset construction exceeded the live-state cap of {cap}")]
    SubsetCapExceeded { cap: usize },
    #[error("the bound needs n <= m, got m = {m}, n = {n}")]
    BoundArgumentOrder { m: usize, n: usize },
    #[error("state {state} out of range (automaton has {count} states)")]
    BadState { state: StateId, count: usize },
    #[error("duplicate transition from state {state} on '{letter}'")]
    DuplicateTransition { state: StateId, letter: Letter },
    #[error("letter '{letter}' is not in the automaton alphabet")]
    LetterOutsideAlphabet { letter: Letter },
    #[error("the automaton accepts an infinite language")]
    InfiniteLanguage,
    #[error("language enumeration over words of length {len} exceeds the cap of {cap}")]
    LanguageCapExceeded { len: usize, cap: usize },
}

/// How a determinized state breaks the structural obligations of the grid.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisciplineViolation {
    #[error("state {state}: labels {a} and {b} occupy different vertical layers")]
    MixedVerticalLayers { state: StateId, a: GridState, b: GridState },
    #[error("state {state}: labels {a} and {b} have different consumed letter counts")]
    MixedParikhVectors { state: StateId, a: GridState, b: GridState },
    #[error("state {state} carries no labels")]
    EmptyLabel { state: StateId },
}

/// A deterministic, possibly partial automaton. `labels`, when present,
/// records which grid states each state stands for (provenance from the
/// subset construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    transitions: Vec<BTreeMap<Letter, StateId>>,
    initial: StateId,
    finals: BTreeSet<StateId>,
    labels: Option<Vec<Vec<GridState>>>,
}

impl Dfa {
    pub fn from_parts(
        alphabet: Alphabet,
        state_count: usize,
        transitions: impl IntoIterator<Item = (StateId, Letter, StateId)>,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self, DeterminizeError> {
        let mut table: Vec<BTreeMap<Letter, StateId>> = vec![BTreeMap::new(); state_count];
        let check = |state: StateId| -> Result<(), DeterminizeError> {
            if state < state_count {
                Ok(())
            } else {
                Err(DeterminizeError::BadState {
                    state,
                    count: state_count,
                })
            }
        };
        check(initial)?;
        for (from, letter, to) in transitions {
            check(from)?;
            check(to)?;
            if !alphabet.contains(letter) {
                return Err(DeterminizeError::LetterOutsideAlphabet { letter });
            }
            if table[from].insert(letter, to).is_some() {
                return Err(DeterminizeError::DuplicateTransition {
                    state: from,
                    letter,
                });
            }
        }
        let finals: BTreeSet<StateId> = finals.into_iter().collect();
        for &f in &finals {
            check(f)?;
        }
        Ok(Dfa {
            alphabet,
            transitions: table,
            initial,
            finals,
            labels: None,
        })
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals.contains(&state)
    }

    pub fn transition(&self, state: StateId, letter: Letter) -> Option<StateId> {
        self.transitions[state].get(&letter).copied()
    }

    pub fn transitions_from(&self, state: StateId) -> &BTreeMap<Letter, StateId> {
        &self.transitions[state]
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(|t| t.len()).sum()
    }

    pub fn labels(&self) -> Option<&[Vec<GridState>]> {
        self.labels.as_deref()
    }

    pub fn labels_of(&self, state: StateId) -> Option<&[GridState]> {
        self.labels.as_ref().map(|l| l[state].as_slice())
    }

    /// Attach grid-state provenance, one label list per state.
    pub fn attach_labels(&mut self, labels: Vec<Vec<GridState>>) {
        assert_eq!(labels.len(), self.state_count());
        self.labels = Some(labels);
    }

    /// The state reached on `z`, or `None` when a transition is missing.
    pub fn run(&self, z: &Word) -> Option<StateId> {
        let mut state = self.initial;
        for &letter in z.letters() {
            state = self.transition(state, letter)?;
        }
        Some(state)
    }

    /// Standard run; an undefined transition rejects.
    pub fn accepts(&self, z: &Word) -> bool {
        self.run(z).is_some_and(|state| self.is_final(state))
    }

    /// Whether every (state, letter) pair has a transition.
    pub fn is_complete(&self) -> bool {
        self.transitions
            .iter()
            .all(|row| row.len() == self.alphabet.len())
    }

    /// The state count after completion: one extra sink when partial.
    pub fn completed_state_count(&self) -> usize {
        self.state_count() + usize::from(!self.is_complete())
    }

    /// Enumerate the accepted language. Fails on cyclic useful states.
    pub fn enumerate_language(&self, cap: usize) -> Result<WordSet, DeterminizeError> {
        let order = self.topological_order()?;
        let max_len = {
            // Longest path from the initial state, following topological order.
            let mut depth: Vec<Option<usize>> = vec![None; self.state_count()];
            depth[self.initial] = Some(0);
            for &state in &order {
                if let Some(d) = depth[state] {
                    for &target in self.transitions[state].values() {
                        let candidate = d + 1;
                        if depth[target].is_none_or(|existing| existing < candidate) {
                            depth[target] = Some(candidate);
                        }
                    }
                }
            }
            depth.iter().flatten().copied().max().unwrap_or(0)
        };
        if max_len > cap {
            return Err(DeterminizeError::LanguageCapExceeded { len: max_len, cap });
        }
        // Words accepted from each state, in reverse topological order.
        let mut languages: Vec<Option<WordSet>> = vec![None; self.state_count()];
        for &state in order.iter().rev() {
            let mut set = WordSet::new();
            if self.is_final(state) {
                set.insert(Word::empty());
            }
            for (&letter, &target) in &self.transitions[state] {
                let rest = languages[target].as_ref().expect("reverse topological order");
                for word in rest.iter() {
                    set.insert(word.prepended(letter));
                }
            }
            languages[state] = Some(set);
        }
        Ok(languages[self.initial].take().expect("initial computed"))
    }

    fn topological_order(&self) -> Result<Vec<StateId>, DeterminizeError> {
        // Kahn's algorithm over states reachable from the initial state.
        let reachable = self.reachable();
        let mut indegree = vec![0usize; self.state_count()];
        for state in (0..self.state_count()).filter(|&s| reachable[s]) {
            for &target in self.transitions[state].values() {
                indegree[target] += 1;
            }
        }
        let mut queue: VecDeque<StateId> = (0..self.state_count())
            .filter(|&s| reachable[s] && indegree[s] == 0)
            .collect();
        let mut order = Vec::new();
        while let Some(state) = queue.pop_front() {
            order.push(state);
            for &target in self.transitions[state].values() {
                indegree[target] -= 1;
                if indegree[target] == 0 {
                    queue.push_back(target);
                }
            }
        }
        if order.len() != reachable.iter().filter(|&&r| r).count() {
            return Err(DeterminizeError::InfiniteLanguage);
        }
        Ok(order)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(state) = queue.pop_front() {
            for &target in self.transitions[state].values() {
                if !seen[target] {
                    seen[target] = true;
                    queue.push_back(target);
                }
            }
        }
        seen
    }

    fn co_reachable(&self) -> Vec<bool> {
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); self.state_count()];
        for state in 0..self.state_count() {
            for &target in self.transitions[state].values() {
                reverse[target].push(state);
            }
        }
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        for &f in &self.finals {
            seen[f] = true;
        }
        while let Some(state) = queue.pop_front() {
            for &source in &reverse[state] {
                if !seen[source] {
                    seen[source] = true;
                    queue.push_back(source);
                }
            }
        }
        seen
    }
}

/// Accessible-subset determinization of the grid automaton. Never
/// materializes the empty subset, so the result is partial. Every produced
/// state is checked on the spot: its labels must share one vertical layer and
/// one consumed letter-count vector.
pub fn subset_construction(nfa: &GridNfa) -> Dfa {
    subset_construction_capped(nfa, usize::MAX).expect("uncapped")
}

pub fn subset_construction_capped(
    nfa: &GridNfa,
    cap: usize,
) -> Result<Dfa, DeterminizeError> {
    let alphabet = nfa.alphabet();
    let mut index: HashMap<Vec<GridState>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<GridState>> = Vec::new();
    let mut transitions: Vec<BTreeMap<Letter, StateId>> = Vec::new();

    let start = vec![nfa.initial()];
    index.insert(start.clone(), 0);
    subsets.push(start);
    transitions.push(BTreeMap::new());

    let mut queue: VecDeque<StateId> = VecDeque::from([0]);
    while let Some(current) = queue.pop_front() {
        let members = subsets[current].clone();
        let mut by_letter: BTreeMap<Letter, BTreeSet<GridState>> = BTreeMap::new();
        for &state in &members {
            for (letter, target) in nfa.transitions_from(state) {
                by_letter.entry(letter).or_default().insert(target);
            }
        }
        for (letter, targets) in by_letter {
            let subset: Vec<GridState> = targets.into_iter().collect();
            let id = match index.get(&subset) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    if id >= cap {
                        return Err(DeterminizeError::SubsetCapExceeded { cap });
                    }
                    check_subset_disciplines(nfa, id, &subset)
                        .unwrap_or_else(|violation| panic!("subset construction: {violation}"));
                    index.insert(subset.clone(), id);
                    subsets.push(subset);
                    transitions.push(BTreeMap::new());
                    queue.push_back(id);
                    id
                }
            };
            transitions[current].insert(letter, id);
        }
    }

    let final_state = nfa.final_state();
    let finals: BTreeSet<StateId> = subsets
        .iter()
        .enumerate()
        .filter(|(_, subset)| subset.contains(&final_state))
        .map(|(id, _)| id)
        .collect();

    Ok(Dfa {
        alphabet,
        transitions,
        initial: 0,
        finals,
        labels: Some(subsets),
    })
}

fn check_subset_disciplines(
    nfa: &GridNfa,
    state: StateId,
    subset: &[GridState],
) -> Result<(), DisciplineViolation> {
    let Some((&first, rest)) = subset.split_first() else {
        return Err(DisciplineViolation::EmptyLabel { state });
    };
    for &other in rest {
        if other.v_layer() != first.v_layer() {
            return Err(DisciplineViolation::MixedVerticalLayers {
                state,
                a: first,
                b: other,
            });
        }
        if consumed_parikh(nfa, other) != consumed_parikh(nfa, first) {
            return Err(DisciplineViolation::MixedParikhVectors {
                state,
                a: first,
                b: other,
            });
        }
    }
    Ok(())
}

fn consumed_parikh(nfa: &GridNfa, state: GridState) -> BTreeMap<Letter, usize> {
    let consumed_u = &nfa.u().letters()[..nfa.u().len() - state.i];
    let consumed_v = &nfa.v().letters()[..nfa.v().len() - state.j];
    let mut counts = BTreeMap::new();
    for &letter in consumed_u.iter().chain(consumed_v) {
        *counts.entry(letter).or_insert(0) += 1;
    }
    counts
}

/// Re-check the label disciplines of a determinized automaton from its stored
/// labels. States without labels pass vacuously.
pub fn verify_subset_disciplines(dfa: &Dfa, nfa: &GridNfa) -> Result<(), DisciplineViolation> {
    if let Some(labels) = dfa.labels() {
        for (state, subset) in labels.iter().enumerate() {
            check_subset_disciplines(nfa, state, subset)?;
        }
    }
    Ok(())
}

/// The unique minimal partial DFA for the same (finite) language: unreachable
/// and dead states removed, indistinguishable states merged. Idempotent.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let trimmed = trim(dfa);
    quotient(&trimmed, &stable_partition(&trimmed))
}

fn trim(dfa: &Dfa) -> Dfa {
    let reachable = dfa.reachable();
    let co_reachable = dfa.co_reachable();
    let keep: Vec<bool> = reachable
        .iter()
        .zip(&co_reachable)
        .map(|(&r, &c)| r && c)
        .collect();
    if !keep[dfa.initial] {
        // Empty language: a lone initial state.
        return Dfa {
            alphabet: dfa.alphabet.clone(),
            transitions: vec![BTreeMap::new()],
            initial: 0,
            finals: BTreeSet::new(),
            labels: dfa.labels.as_ref().map(|l| vec![l[dfa.initial].clone()]),
        };
    }
    let mut remap: Vec<Option<StateId>> = vec![None; dfa.state_count()];
    let mut next = 0;
    for state in 0..dfa.state_count() {
        if keep[state] {
            remap[state] = Some(next);
            next += 1;
        }
    }
    let mut transitions: Vec<BTreeMap<Letter, StateId>> = vec![BTreeMap::new(); next];
    for state in 0..dfa.state_count() {
        let Some(new_from) = remap[state] else { continue };
        for (&letter, &target) in &dfa.transitions[state] {
            if let Some(new_to) = remap[target] {
                transitions[new_from].insert(letter, new_to);
            }
        }
    }
    let finals = dfa
        .finals
        .iter()
        .filter_map(|&f| remap[f])
        .collect();
    let labels = dfa.labels.as_ref().map(|labels| {
        (0..dfa.state_count())
            .filter(|&s| keep[s])
            .map(|s| labels[s].clone())
            .collect()
    });
    Dfa {
        alphabet: dfa.alphabet.clone(),
        transitions,
        initial: remap[dfa.initial].expect("initial kept"),
        finals,
        labels,
    }
}

/// Moore-style partition refinement: start from the final/non-final split and
/// refine on per-letter successor classes until stable. Missing transitions
/// count as their own pseudo-class.
fn stable_partition(dfa: &Dfa) -> Vec<usize> {
    let count = dfa.state_count();
    let mut classes: Vec<usize> = (0..count).map(|s| usize::from(dfa.is_final(s))).collect();
    let mut class_count = 2;
    loop {
        let mut signature_ids: HashMap<(usize, Vec<(Letter, usize)>), usize> = HashMap::new();
        let mut next_classes = vec![0usize; count];
        for state in 0..count {
            let successor_classes: Vec<(Letter, usize)> = dfa.transitions[state]
                .iter()
                .map(|(&letter, &target)| (letter, classes[target]))
                .collect();
            let signature = (classes[state], successor_classes);
            let next_id = signature_ids.len();
            let id = *signature_ids.entry(signature).or_insert(next_id);
            next_classes[state] = id;
        }
        let next_count = signature_ids.len();
        if next_count == class_count {
            return next_classes;
        }
        class_count = next_count;
        classes = next_classes;
    }
}

fn quotient(dfa: &Dfa, classes: &[usize]) -> Dfa {
    let class_count = classes.iter().copied().max().map_or(0, |m| m + 1);
    let mut representative: Vec<Option<StateId>> = vec![None; class_count];
    for (state, &class) in classes.iter().enumerate() {
        representative[class].get_or_insert(state);
    }
    let mut transitions: Vec<BTreeMap<Letter, StateId>> = vec![BTreeMap::new(); class_count];
    for (class, rep) in representative.iter().enumerate() {
        let rep = rep.expect("every class is inhabited");
        for (&letter, &target) in &dfa.transitions[rep] {
            transitions[class].insert(letter, classes[target]);
        }
    }
    let finals: BTreeSet<StateId> = dfa.finals.iter().map(|&f| classes[f]).collect();
    let labels = dfa.labels.as_ref().map(|labels| {
        let mut merged: Vec<BTreeSet<GridState>> = vec![BTreeSet::new(); class_count];
        for (state, &class) in classes.iter().enumerate() {
            merged[class].extend(labels[state].iter().copied());
        }
        merged
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect()
    });
    Dfa {
        alphabet: dfa.alphabet.clone(),
        transitions,
        initial: classes[dfa.initial],
        finals,
        labels,
    }
}

/// Quadratic distinguishability-table minimizer. Kept as an independent
/// second implementation for cross-checking `minimize`.
pub fn minimize_naive(dfa: &Dfa) -> Dfa {
    let trimmed = trim(dfa);
    let count = trimmed.state_count();
    let mut marked: Vec<Vec<bool>> = (0..count)
        .map(|p| {
            (0..count)
                .map(|q| trimmed.is_final(p) != trimmed.is_final(q))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for p in 0..count {
            for q in 0..p {
                if marked[p][q] {
                    continue;
                }
                let letters: BTreeSet<Letter> = trimmed.transitions[p]
                    .keys()
                    .chain(trimmed.transitions[q].keys())
                    .copied()
                    .collect();
                for letter in letters {
                    let distinguishes = match (
                        trimmed.transition(p, letter),
                        trimmed.transition(q, letter),
                    ) {
                        (Some(tp), Some(tq)) => marked[tp.max(tq)][tp.min(tq)],
                        (None, None) => false,
                        _ => true,
                    };
                    if distinguishes {
                        marked[p][q] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Merge unmarked pairs: class = smallest equivalent state.
    let mut classes: Vec<usize> = (0..count).collect();
    for p in 0..count {
        for q in 0..p {
            if !marked[p][q] && classes[p] == p {
                classes[p] = classes[q];
            }
        }
    }
    // Renumber classes densely in first-occurrence order.
    let mut dense: HashMap<usize, usize> = HashMap::new();
    let classes: Vec<usize> = classes
        .into_iter()
        .map(|c| {
            let next = dense.len();
            *dense.entry(c).or_insert(next)
        })
        .collect();
    quotient(&trimmed, &classes)
}

/// Structural isomorphism of two automata (expects both minimized/trim).
pub fn isomorphic(a: &Dfa, b: &Dfa) -> bool {
    if a.state_count() != b.state_count() || a.finals.len() != b.finals.len() {
        return false;
    }
    let mut pair: Vec<Option<StateId>> = vec![None; a.state_count()];
    pair[a.initial] = Some(b.initial);
    let mut queue = VecDeque::from([a.initial]);
    let mut matched = vec![false; b.state_count()];
    matched[b.initial] = true;
    while let Some(state) = queue.pop_front() {
        let image = pair[state].expect("queued states are paired");
        if a.is_final(state) != b.is_final(image) {
            return false;
        }
        let (row_a, row_b) = (&a.transitions[state], &b.transitions[image]);
        if row_a.len() != row_b.len() {
            return false;
        }
        for (&letter, &target_a) in row_a {
            let Some(&target_b) = row_b.get(&letter) else {
                return false;
            };
            match pair[target_a] {
                Some(existing) => {
                    if existing != target_b {
                        return false;
                    }
                }
                None => {
                    if matched[target_b] {
                        return false;
                    }
                    pair[target_a] = Some(target_b);
                    matched[target_b] = true;
                    queue.push_back(target_a);
                }
            }
        }
    }
    true
}

/// Language equality, decided as isomorphism of the minimized machines.
pub fn equivalent(a: &Dfa, b: &Dfa) -> bool {
    isomorphic(&minimize(a), &minimize(b))
}

/// Upper bound on the subset-construction state count for a grid of
/// dimensions m >= n: `2^(n+1) (m - n + 3) - m - n - 4`. This counts every
/// non-empty subset per vertical layer plus one shared empty set; a partial
/// determinization never materializes the empty set, so its count stays at
/// least one below this value.
pub fn eq1_bound(m: usize, n: usize) -> Result<BigUint, DeterminizeError> {
    if n > m {
        return Err(DeterminizeError::BoundArgumentOrder { m, n });
    }
    let factor = BigUint::from(2u32).pow(n as u32 + 1);
    let product = factor * BigUint::from(m - n + 3);
    let subtrahend = BigUint::from(m + n + 4);
    Ok(product - subtrahend)
}

pub fn eq1_bound_u128(m: usize, n: usize) -> Result<u128, DeterminizeError> {
    let bound = eq1_bound(m, n)?;
    let digits = bound.to_u64_digits();
    match digits.len() {
        0 => Ok(0),
        1 => Ok(digits[0] as u128),
        2 => Ok((digits[1] as u128) << 64 | digits[0] as u128),
        _ => panic!("bound does not fit in u128"),
    }
}

/// Sizes along the pipeline for one word pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeReport {
    pub u: Word,
    pub v: Word,
    pub nfa_states: usize,
    pub subset_dfa_states: usize,
    pub minimal_dfa_states: usize,
    pub formula_prediction: Option<usize>,
    pub eq1_bound: u128,
}

/// Run the whole pipeline on one pair and collect the counts.
pub fn measure_pair(u: &Word, v: &Word) -> Result<SizeReport, GridError> {
    let nfa = GridNfa::new(u.clone(), v.clone())?;
    let subset = subset_construction(&nfa);
    let minimal = minimize(&subset);
    let (m, n) = (u.len().max(v.len()), u.len().min(v.len()));
    Ok(SizeReport {
        u: u.clone(),
        v: v.clone(),
        nfa_states: nfa.state_count(),
        subset_dfa_states: subset.state_count(),
        minimal_dfa_states: minimal.state_count(),
        formula_prediction: None,
        eq1_bound: eq1_bound_u128(m, n).expect("m >= n"),
    })
}

/// Exhaustive bound check over every pair with `|v| <= |u| <= max_len`.
#[derive(Clone, Debug)]
pub struct Eq1Sweep {
    pub pairs_checked: usize,
    pub violations: Vec<String>,
    /// Largest observed subset-count / bound ratio, as evidence of slack.
    pub max_ratio: f64,
    pub max_ratio_pair: Option<(Word, Word)>,
}

pub fn sweep_eq1(alphabet: &Alphabet, max_len: usize) -> Eq1Sweep {
    let mut sweep = Eq1Sweep {
        pairs_checked: 0,
        violations: Vec::new(),
        max_ratio: 0.0,
        max_ratio_pair: None,
    };
    let letters: Vec<Letter> = alphabet.iter().collect();
    for m in 1..=max_len {
        let us = all_words(&letters, m);
        for n in 1..=m {
            let vs = all_words(&letters, n);
            for u in &us {
                for v in &vs {
                    let nfa = GridNfa::new(u.clone(), v.clone()).expect("non-empty");
                    let subset = subset_construction(&nfa);
                    let bound = eq1_bound_u128(m, n).expect("m >= n");
                    sweep.pairs_checked += 1;
                    if subset.state_count() as u128 > bound {
                        sweep
                            .violations
                            .push(format!("({u}, {v}): {} > {bound}", subset.state_count()));
                    }
                    let ratio = subset.state_count() as f64 / bound as f64;
                    if ratio > sweep.max_ratio {
                        sweep.max_ratio = ratio;
                        sweep.max_ratio_pair = Some((u.clone(), v.clone()));
                    }
                }
            }
        }
    }
    sweep
}

/// Every word of exactly `len` letters over the given letters.
pub fn all_words(letters: &[Letter], len: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * letters.len());
        for word in &words {
            for &letter in letters {
                next.push(word.concat(&Word::from_letters(vec![letter])));
            }
        }
        words = next;
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::enumerate_shuffle;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn nfa(u: &str, v: &str) -> GridNfa {
        GridNfa::new(w(u), w(v)).unwrap()
    }

    fn letter(c: char) -> Letter {
        Letter::new(c).unwrap()
    }

    #[test]
    fn subset_of_disjoint_pair_is_the_grid_itself() {
        let a = nfa("ab", "cd");
        let dfa = subset_construction(&a);
        assert_eq!(dfa.state_count(), 9);
        assert!(dfa.labels().unwrap().iter().all(|s| s.len() == 1));
        let minimal = minimize(&dfa);
        assert_eq!(minimal.state_count(), 9);
    }

    #[test]
    fn subset_of_unary_pair_is_a_chain() {
        let a = nfa("a", "a");
        let dfa = subset_construction(&a);
        assert_eq!(dfa.state_count(), 3);
        assert!(dfa.accepts(&w("aa")));
        assert!(!dfa.accepts(&w("a")));
        assert!(!dfa.accepts(&w("aaa")));
    }

    #[test]
    fn subset_preserves_language() {
        for (u, v) in [("bbaa", "aab"), ("aab", "abba"), ("aba", "aba")] {
            let a = nfa(u, v);
            let dfa = subset_construction(&a);
            assert_eq!(
                dfa.enumerate_language(30).unwrap(),
                enumerate_shuffle(&w(u), &w(v)).unwrap(),
                "pair ({u}, {v})"
            );
            verify_subset_disciplines(&dfa, &a).unwrap();
        }
    }

    #[test]
    fn minimize_chain_is_identity() {
        // DFA for the single word aaaa: 5 states, already minimal.
        let a = letter('a');
        let alphabet = Alphabet::parse("a").unwrap();
        let chain = Dfa::from_parts(
            alphabet,
            5,
            (0..4).map(|s| (s, a, s + 1)),
            0,
            [4],
        )
        .unwrap();
        let minimal = minimize(&chain);
        assert_eq!(minimal.state_count(), 5);
        assert!(isomorphic(&minimal, &chain));
    }

    #[test]
    fn minimize_is_idempotent_and_matches_naive() {
        for (u, v) in [("bbaa", "aab"), ("abab", "ba"), ("aabb", "aabb")] {
            let dfa = subset_construction(&nfa(u, v));
            let minimal = minimize(&dfa);
            let again = minimize(&minimal);
            assert_eq!(minimal.state_count(), again.state_count());
            assert!(isomorphic(&minimal, &again));
            let by_table = minimize_naive(&dfa);
            assert_eq!(minimal.state_count(), by_table.state_count(), "({u}, {v})");
            assert!(isomorphic(&minimal, &by_table));
        }
    }

    #[test]
    fn minimize_drops_dead_states() {
        let a = letter('a');
        let b = letter('b');
        let alphabet = Alphabet::parse("ab").unwrap();
        // State 2 is a trap that never reaches the final state 3.
        let dfa = Dfa::from_parts(
            alphabet,
            4,
            [(0, a, 1), (0, b, 2), (1, a, 3), (2, a, 2)],
            0,
            [3],
        )
        .unwrap();
        let minimal = minimize(&dfa);
        assert_eq!(minimal.state_count(), 3);
        assert!(minimal.accepts(&w("aa")));
        assert!(!minimal.accepts(&w("ba")));
    }

    #[test]
    fn equivalence_examples() {
        let d1 = subset_construction(&nfa("bbaa", "aab"));
        assert!(equivalent(&d1, &d1));
        let d2 = subset_construction(&nfa("aab", "bbaa"));
        assert!(equivalent(&d1, &d2), "shuffle commutes");
        let d3 = subset_construction(&nfa("bbaa", "aba"));
        assert!(!equivalent(&d1, &d3));
    }

    #[test]
    fn accepts_examples() {
        let dfa = subset_construction(&nfa("a", "b"));
        assert!(dfa.accepts(&w("ab")));
        assert!(dfa.accepts(&w("ba")));
        assert!(!dfa.accepts(&w("aa")));
        assert!(!dfa.accepts(&w("a")));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(eq1_bound(4, 3).unwrap(), BigUint::from(53u32));
        // n = 0 specializes to m + 2.
        for m in 0..10 {
            assert_eq!(eq1_bound(m, 0).unwrap(), BigUint::from(m + 2));
        }
        assert!(matches!(
            eq1_bound(3, 4),
            Err(DeterminizeError::BoundArgumentOrder { .. })
        ));
    }

    /// The closed form must agree with its summation origin:
    /// 2 Σ_{i=1..n} (2^i - 1) + (m - n + 1)(2^{n+1} - 1) + 1.
    #[test]
    fn bound_matches_summation_form() {
        for m in 0..=12usize {
            for n in 0..=m {
                let mut total = BigUint::from(0u32);
                for i in 1..=n {
                    total += BigUint::from(2u32) * (BigUint::from(2u32).pow(i as u32) - 1u32);
                }
                total += BigUint::from(m - n + 1)
                    * (BigUint::from(2u32).pow(n as u32 + 1) - 1u32);
                total += 1u32;
                assert_eq!(eq1_bound(m, n).unwrap(), total, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn completed_count_adds_sink_when_partial() {
        let dfa = subset_construction(&nfa("ab", "cd"));
        assert!(!dfa.is_complete());
        assert_eq!(dfa.completed_state_count(), dfa.state_count() + 1);
    }

    #[test]
    fn infinite_language_is_detected() {
        let a = letter('a');
        let alphabet = Alphabet::parse("a").unwrap();
        let looping = Dfa::from_parts(alphabet, 1, [(0, a, 0)], 0, [0]).unwrap();
        assert!(matches!(
            looping.enumerate_language(10),
            Err(DeterminizeError::InfiniteLanguage)
        ));
    }
}
