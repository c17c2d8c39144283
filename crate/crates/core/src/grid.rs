//! The naive shuffle NFA: a grid of states indexed by remaining-suffix
//! lengths, with its layer geometry, nondeterministic areas, residual
//! languages and walks.
//!
//! State `(i, j)` means "i letters of u and j letters of v are still to be
//! read"; the initial state is `(|u|, |v|)`, the unique final state `(0, 0)`.
//! The automaton is partial: there is no sink.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::shuffle::{self, ShuffleError, Trajectory, WordSet};
use crate::words::{Alphabet, Letter, Word};

/// Default limit on `|u| + |v|` for walk enumeration.
pub const DEFAULT_WALK_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("the naive shuffle automaton needs non-empty words (|u| = {u_len}, |v| = {v_len})")]
    EmptyWord { u_len: usize, v_len: usize },
    #[error("state ({i},{j}) is outside the ({m}+1)x({n}+1) grid")]
    StateOutOfRange { i: usize, j: usize, m: usize, n: usize },
    #[error("walk enumeration over {total} steps exceeds the cap of {cap}")]
    WalkCapExceeded { total: usize, cap: usize },
    #[error("trajectory does not fit the grid: {0}")]
    BadTrajectory(String),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

/// A grid state: remaining-suffix lengths of the two words.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridState {
    pub i: usize,
    pub j: usize,
}

impl GridState {
    pub fn new(i: usize, j: usize) -> Self {
        GridState { i, j }
    }

    /// Letters still to be read: `i + j`.
    pub fn v_layer(self) -> usize {
        self.i + self.j
    }

    /// Imbalance between the remaining suffixes: `i - j`.
    pub fn h_layer(self) -> isize {
        self.i as isize - self.j as isize
    }
}

impl fmt::Display for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl fmt::Debug for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// The naive shuffle NFA for a pair of non-empty words. Transitions are
/// derived from the words rather than stored: from `(k, l)` the automaton
/// reads the next letter of either remaining suffix and decrements that
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridNfa {
    u: Word,
    v: Word,
}

impl GridNfa {
    pub fn new(u: Word, v: Word) -> Result<Self, GridError> {
        if u.is_empty() || v.is_empty() {
            return Err(GridError::EmptyWord {
                u_len: u.len(),
                v_len: v.len(),
            });
        }
        Ok(GridNfa { u, v })
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn v(&self) -> &Word {
        &self.v
    }

    pub fn initial(&self) -> GridState {
        GridState::new(self.u.len(), self.v.len())
    }

    pub fn final_state(&self) -> GridState {
        GridState::new(0, 0)
    }

    pub fn state_count(&self) -> usize {
        (self.u.len() + 1) * (self.v.len() + 1)
    }

    pub fn states(&self) -> impl Iterator<Item = GridState> + '_ {
        (0..=self.u.len())
            .flat_map(move |i| (0..=self.v.len()).map(move |j| GridState::new(i, j)))
    }

    pub fn contains(&self, state: GridState) -> bool {
        state.i <= self.u.len() && state.j <= self.v.len()
    }

    /// The sorted set of letters occurring in either word.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::of_words([&self.u, &self.v]).expect("non-empty words")
    }

    /// First letter of the length-`i` remaining suffix of `u`.
    pub fn next_u_letter(&self, i: usize) -> Option<Letter> {
        if i >= 1 && i <= self.u.len() {
            Some(self.u.letters()[self.u.len() - i])
        } else {
            None
        }
    }

    /// First letter of the length-`j` remaining suffix of `v`.
    pub fn next_v_letter(&self, j: usize) -> Option<Letter> {
        if j >= 1 && j <= self.v.len() {
            Some(self.v.letters()[self.v.len() - j])
        } else {
            None
        }
    }

    /// The u-consuming transition out of `state`, if any.
    pub fn step_u(&self, state: GridState) -> Option<(Letter, GridState)> {
        self.next_u_letter(state.i)
            .map(|a| (a, GridState::new(state.i - 1, state.j)))
    }

    /// The v-consuming transition out of `state`, if any.
    pub fn step_v(&self, state: GridState) -> Option<(Letter, GridState)> {
        self.next_v_letter(state.j)
            .map(|a| (a, GridState::new(state.i, state.j - 1)))
    }

    /// All (letter, target) transitions out of `state` (at most two).
    pub fn transitions_from(&self, state: GridState) -> Vec<(Letter, GridState)> {
        self.step_u(state)
            .into_iter()
            .chain(self.step_v(state))
            .collect()
    }

    /// Targets reachable from `state` on `letter` (zero, one or two).
    pub fn delta(&self, state: GridState, letter: Letter) -> Vec<GridState> {
        self.transitions_from(state)
            .into_iter()
            .filter(|&(a, _)| a == letter)
            .map(|(_, target)| target)
            .collect()
    }

    pub fn transition_count(&self) -> usize {
        self.states()
            .map(|s| self.transitions_from(s).len())
            .sum()
    }

    /// Whether both outgoing transitions exist and read the same letter.
    pub fn is_nondeterministic_on(&self, state: GridState, letter: Letter) -> bool {
        self.next_u_letter(state.i) == Some(letter) && self.next_v_letter(state.j) == Some(letter)
    }

    /// All nondeterministic areas, in canonical order. Each is a maximal
    /// rectangle of states nondeterministic on one letter: the product of a
    /// maximal run of u-positions with a maximal run of v-positions reading
    /// that letter.
    pub fn find_areas(&self) -> Vec<NondetArea> {
        let mut areas = Vec::new();
        for letter in self.alphabet().iter() {
            let u_runs = letter_runs(&self.u, letter);
            let v_runs = letter_runs(&self.v, letter);
            for &(ulo, uhi) in &u_runs {
                for &(vlo, vhi) in &v_runs {
                    areas.push(NondetArea {
                        letter,
                        top: GridState::new(uhi, vhi),
                        bottom: GridState::new(ulo - 1, vlo - 1),
                    });
                }
            }
        }
        areas.sort();
        debug_assert!(areas
            .iter()
            .all(|a| self.area_check(a.letter, a.top, a.bottom).is_area()));
        areas
    }

    /// Validate one candidate tuple directly against the defining conditions.
    /// This is the brute-force oracle for `find_areas`.
    pub fn area_check(&self, letter: Letter, top: GridState, bottom: GridState) -> AreaCheck {
        let (m, n) = (self.u.len(), self.v.len());
        let bounds_ok = top.i <= m && top.j <= n && bottom.i <= top.i && bottom.j <= top.j;
        let interior_nonempty = bounds_ok && top.i > bottom.i && top.j > bottom.j;
        let mut check = AreaCheck {
            bounds_ok,
            interior_nonempty,
            interior_all_nondeterministic: false,
            boundary_deterministic: false,
            bottom_undefined: false,
        };
        if !bounds_ok {
            return check;
        }
        check.interior_all_nondeterministic = (bottom.i + 1..=top.i).all(|i| {
            (bottom.j + 1..=top.j).all(|j| self.is_nondeterministic_on(GridState::new(i, j), letter))
        });
        let det_on = |state: GridState| -> bool {
            self.delta(state, letter).len() == 1
        };
        let right = GridState::new(top.i + 1, top.j);
        let above = GridState::new(top.i, top.j + 1);
        check.boundary_deterministic = (!self.contains(right) || det_on(right))
            && (!self.contains(above) || det_on(above));
        check.bottom_undefined = self.delta(bottom, letter).is_empty();
        check
    }

    /// The language accepted starting from `(i, j)`: the shuffle of the
    /// corresponding suffixes.
    pub fn residual_language(&self, i: usize, j: usize, cap: usize) -> Result<WordSet, GridError> {
        let (m, n) = (self.u.len(), self.v.len());
        if i > m || j > n {
            return Err(GridError::StateOutOfRange { i, j, m, n });
        }
        Ok(shuffle::enumerate_shuffle_capped(
            &self.u.suffix(i),
            &self.v.suffix(j),
            cap,
        )?)
    }

    /// Residual languages of every state at once.
    pub fn residual_table(&self, cap: usize) -> Result<BTreeMap<GridState, WordSet>, GridError> {
        let table = shuffle::suffix_shuffle_table(&self.u, &self.v, cap)?;
        Ok(table
            .into_iter()
            .map(|((i, j), set)| (GridState::new(i, j), set))
            .collect())
    }

    /// The accepted language, enumerated by following the transition function
    /// itself (not the word semantics), layer by layer. Used to cross-check
    /// the wiring against `enumerate_shuffle`.
    pub fn enumerate_language(&self, cap: usize) -> Result<WordSet, GridError> {
        let total = self.u.len() + self.v.len();
        if total > cap {
            return Err(GridError::Shuffle(ShuffleError::EnumerationCapExceeded {
                total,
                cap,
            }));
        }
        let mut prev: BTreeMap<GridState, WordSet> = BTreeMap::new();
        let mut base = WordSet::new();
        base.insert(Word::empty());
        prev.insert(self.final_state(), base);
        for layer in 1..=total {
            let mut cur: BTreeMap<GridState, WordSet> = BTreeMap::new();
            for state in self.states().filter(|s| s.v_layer() == layer) {
                let mut set = WordSet::new();
                for (letter, target) in self.transitions_from(state) {
                    if let Some(rest) = prev.get(&target) {
                        for word in rest.iter() {
                            set.insert(word.prepended(letter));
                        }
                    }
                }
                cur.insert(state, set);
            }
            prev = cur;
        }
        Ok(prev.remove(&self.initial()).expect("initial state in top layer"))
    }

    /// Frontier of states reachable from the initial state after each prefix
    /// of `z`; entry 0 is the singleton initial frontier.
    pub fn run_frontiers(&self, z: &Word) -> Vec<BTreeSet<GridState>> {
        let mut frontiers = Vec::with_capacity(z.len() + 1);
        let mut current: BTreeSet<GridState> = BTreeSet::from([self.initial()]);
        frontiers.push(current.clone());
        for &letter in z.letters() {
            let mut next = BTreeSet::new();
            for &state in &current {
                for target in self.delta(state, letter) {
                    next.insert(target);
                }
            }
            frontiers.push(next.clone());
            current = next;
        }
        frontiers
    }

    pub fn frontier_after(&self, z: &Word) -> BTreeSet<GridState> {
        self.run_frontiers(z).pop().expect("at least one frontier")
    }

    /// All walks (monotone lattice paths from the initial to the final state).
    pub fn enumerate_walks(&self, cap: usize) -> Result<Vec<Walk>, GridError> {
        let total = self.u.len() + self.v.len();
        if total > cap {
            return Err(GridError::WalkCapExceeded { total, cap });
        }
        let mut walks = Vec::new();
        let mut path = vec![self.initial()];
        self.walk_recurse(&mut path, &mut walks);
        Ok(walks)
    }

    fn walk_recurse(&self, path: &mut Vec<GridState>, out: &mut Vec<Walk>) {
        let state = *path.last().expect("non-empty path");
        if state == self.final_state() {
            out.push(Walk {
                states: path.clone(),
            });
            return;
        }
        if let Some((_, target)) = self.step_u(state) {
            path.push(target);
            self.walk_recurse(path, out);
            path.pop();
        }
        if let Some((_, target)) = self.step_v(state) {
            path.push(target);
            self.walk_recurse(path, out);
            path.pop();
        }
    }
}

fn letter_runs(word: &Word, letter: Letter) -> Vec<(usize, usize)> {
    // Maximal runs of remaining-lengths i (1..=|word|) whose next letter is `letter`.
    let len = word.len();
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for i in 1..=len {
        if word.letters()[len - i] == letter {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            runs.push((s, i - 1));
        }
    }
    if let Some(s) = start {
        runs.push((s, len));
    }
    runs
}

/// Per-condition verdict for one area candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AreaCheck {
    pub bounds_ok: bool,
    pub interior_nonempty: bool,
    pub interior_all_nondeterministic: bool,
    pub boundary_deterministic: bool,
    pub bottom_undefined: bool,
}

impl AreaCheck {
    pub fn is_area(&self) -> bool {
        self.bounds_ok
            && self.interior_nonempty
            && self.interior_all_nondeterministic
            && self.boundary_deterministic
            && self.bottom_undefined
    }
}

/// A maximal rectangle of states, all nondeterministic on one letter, with a
/// deterministic upper boundary and an undefined-transition bottom corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NondetArea {
    pub letter: Letter,
    pub top: GridState,
    pub bottom: GridState,
}

impl NondetArea {
    /// Interior: `top.i >= i > bottom.i`, `top.j >= j > bottom.j`.
    pub fn interior_states(&self) -> Vec<GridState> {
        let mut states = Vec::new();
        for i in self.bottom.i + 1..=self.top.i {
            for j in self.bottom.j + 1..=self.top.j {
                states.push(GridState::new(i, j));
            }
        }
        states
    }

    pub fn entrance_states(&self) -> BTreeSet<GridState> {
        let mut states = BTreeSet::new();
        for j in self.bottom.j..=self.top.j {
            states.insert(GridState::new(self.top.i, j));
        }
        for i in self.bottom.i..=self.top.i {
            states.insert(GridState::new(i, self.top.j));
        }
        states
    }

    pub fn exit_states(&self) -> BTreeSet<GridState> {
        let mut states = BTreeSet::new();
        for j in self.bottom.j..=self.top.j {
            states.insert(GridState::new(self.bottom.i, j));
        }
        for i in self.bottom.i..=self.top.i {
            states.insert(GridState::new(i, self.bottom.j));
        }
        states
    }

    pub fn contains_interior(&self, state: GridState) -> bool {
        state.i > self.bottom.i
            && state.i <= self.top.i
            && state.j > self.bottom.j
            && state.j <= self.top.j
    }
}

impl fmt::Display for NondetArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.letter, self.top, self.bottom)
    }
}

/// A walk: the state sequence of one complete run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    states: Vec<GridState>,
}

impl Walk {
    pub fn states(&self) -> &[GridState] {
        &self.states
    }

    /// Read off the step directions: a u-step is a 0, a v-step a 1.
    pub fn to_trajectory(&self) -> Trajectory {
        let bits = self
            .states
            .windows(2)
            .map(|pair| pair[1].i == pair[0].i)
            .collect();
        Trajectory::new(bits)
    }

    /// Follow a trajectory through the grid from the initial state.
    pub fn from_trajectory(nfa: &GridNfa, t: &Trajectory) -> Result<Walk, GridError> {
        let mut states = vec![nfa.initial()];
        for &bit in t.bits() {
            let state = *states.last().expect("non-empty");
            let step = if bit { nfa.step_v(state) } else { nfa.step_u(state) };
            match step {
                Some((_, target)) => states.push(target),
                None => {
                    return Err(GridError::BadTrajectory(format!(
                        "no {} step at {state}",
                        if bit { "v" } else { "u" }
                    )))
                }
            }
        }
        if *states.last().unwrap() != nfa.final_state() {
            return Err(GridError::BadTrajectory(
                "trajectory does not end at the final state".into(),
            ));
        }
        Ok(Walk { states })
    }

    /// Count how often each vertical and horizontal layer is visited, and
    /// check the structural obligations: every vertical layer exactly once,
    /// every horizontal layer between 0 and the initial imbalance at least
    /// once.
    pub fn layer_visits(&self, nfa: &GridNfa) -> LayerVisitReport {
        let total = nfa.u().len() + nfa.v().len();
        let mut v_counts = vec![0usize; total + 1];
        let mut h_counts: BTreeMap<isize, usize> = BTreeMap::new();
        for &state in &self.states {
            v_counts[state.v_layer()] += 1;
            *h_counts.entry(state.h_layer()).or_insert(0) += 1;
        }
        let every_v_layer_once = v_counts.iter().all(|&c| c == 1);
        let imbalance = nfa.initial().h_layer();
        let (lo, hi) = if imbalance >= 0 { (0, imbalance) } else { (imbalance, 0) };
        let mandatory_h_layers_covered =
            (lo..=hi).all(|layer| h_counts.get(&layer).copied().unwrap_or(0) >= 1);
        LayerVisitReport {
            v_counts,
            h_counts,
            every_v_layer_once,
            mandatory_h_layers_covered,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerVisitReport {
    pub v_counts: Vec<usize>,
    pub h_counts: BTreeMap<isize, usize>,
    pub every_v_layer_once: bool,
    pub mandatory_h_layers_covered: bool,
}
