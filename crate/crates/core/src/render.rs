//! DOT and JSON renderings. Grid automata are pinned to their lattice
//! positions (column `|u| - i`, row `|v| - j`, initial state top-left) so the
//! drawing matches the geometry; both JSON documents carry a schema tag.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::determinize::{Dfa, SizeReport};
use crate::grid::{GridNfa, GridState};
use crate::words::Letter;

pub const NFA_SCHEMA: &str = "wordshuffle/nfa-v1";
pub const DFA_SCHEMA: &str = "wordshuffle/dfa-v1";

/// Rendering switches for the grid picture.
#[derive(Clone, Debug, Default)]
pub struct GridDotOptions {
    /// Fill the interiors of the nondeterministic areas.
    pub shade_areas: bool,
    /// Extra states to shade (e.g. states a construction removes).
    pub shaded_states: BTreeSet<GridState>,
    /// States to mark with a bullet (e.g. states active during a probe run).
    pub bulleted_states: BTreeSet<GridState>,
    /// Transitions to draw dashed (e.g. transitions a construction drops).
    pub dashed_transitions: BTreeSet<(GridState, Letter, GridState)>,
}

fn node_id(state: GridState) -> String {
    format!("s{}_{}", state.i, state.j)
}

/// Render the grid automaton with states pinned at (column |u|-i, row |v|-j).
pub fn grid_to_dot(nfa: &GridNfa, opts: &GridDotOptions) -> String {
    let (m, n) = (nfa.u().len(), nfa.v().len());
    let mut shaded: BTreeSet<GridState> = opts.shaded_states.clone();
    if opts.shade_areas {
        for area in nfa.find_areas() {
            shaded.extend(area.interior_states());
        }
    }
    let mut out = String::new();
    out.push_str("digraph shuffle_nfa {\n");
    out.push_str(&format!(
        "  graph [label=\"u = {}, v = {}\\nstate (i,j): i letters of u and j letters of v remain\", labelloc=\"t\"];\n",
        nfa.u(),
        nfa.v()
    ));
    out.push_str("  node [shape=circle, fontsize=10, width=0.6, fixedsize=true];\n");
    out.push_str("  edge [fontsize=10];\n");
    for state in nfa.states() {
        let x = (m - state.i) as f64 * 1.3;
        let y = state.j as f64 * 1.3;
        let bullet = if opts.bulleted_states.contains(&state) {
            "\\n•"
        } else {
            ""
        };
        let mut attrs = format!("label=\"({},{}){bullet}\", pos=\"{x:.1},{y:.1}!\"", state.i, state.j);
        if shaded.contains(&state) {
            attrs.push_str(", style=filled, fillcolor=gray85");
        }
        if state == nfa.final_state() {
            attrs.push_str(", peripheries=2");
        }
        out.push_str(&format!("  {} [{attrs}];\n", node_id(state)));
    }
    // Arrow into the initial state, pinned just outside the grid.
    out.push_str(&format!(
        "  start [shape=none, label=\"\", width=0, pos=\"-1.3,{:.1}!\"];\n  start -> {};\n",
        n as f64 * 1.3,
        node_id(nfa.initial())
    ));
    for state in nfa.states() {
        for (letter, target) in nfa.transitions_from(state) {
            let style = if opts.dashed_transitions.contains(&(state, letter, target)) {
                ", style=dashed"
            } else {
                ""
            };
            out.push_str(&format!(
                "  {} -> {} [label=\"{letter}\"{style}];\n",
                node_id(state),
                node_id(target)
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Render a DFA left to right; states show their grid labels when available.
pub fn dfa_to_dot(dfa: &Dfa) -> String {
    let mut out = String::new();
    out.push_str("digraph shuffle_dfa {\n  rankdir=LR;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for state in 0..dfa.state_count() {
        let label = match dfa.labels_of(state) {
            Some(labels) if !labels.is_empty() => labels
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(""),
            _ => format!("q{state}"),
        };
        let peripheries = if dfa.is_final(state) { ", peripheries=2" } else { "" };
        out.push_str(&format!("  q{state} [label=\"{label}\"{peripheries}];\n"));
    }
    out.push_str(&format!(
        "  start [shape=none, label=\"\"];\n  start -> q{};\n",
        dfa.initial()
    ));
    for state in 0..dfa.state_count() {
        for (&letter, &target) in dfa.transitions_from(state) {
            out.push_str(&format!("  q{state} -> q{target} [label=\"{letter}\"];\n"));
        }
    }
    out.push_str("}\n");
    out
}

pub fn grid_to_json(nfa: &GridNfa) -> Value {
    let transitions: Vec<Value> = nfa
        .states()
        .flat_map(|state| {
            nfa.transitions_from(state)
                .into_iter()
                .map(move |(letter, target)| {
                    json!([[state.i, state.j], letter.to_string(), [target.i, target.j]])
                })
        })
        .collect();
    json!({
        "schema": NFA_SCHEMA,
        "u": nfa.u().to_string(),
        "v": nfa.v().to_string(),
        "alphabet": nfa.alphabet().to_string(),
        "states": nfa.state_count(),
        "initial": [nfa.initial().i, nfa.initial().j],
        "finals": [[0, 0]],
        "transitions": transitions,
    })
}

pub fn dfa_to_json(dfa: &Dfa) -> Value {
    let transitions: Vec<Value> = (0..dfa.state_count())
        .flat_map(|state| {
            dfa.transitions_from(state)
                .iter()
                .map(move |(&letter, &target)| json!([state, letter.to_string(), target]))
        })
        .collect();
    let labels: Option<Vec<Value>> = dfa.labels().map(|labels| {
        labels
            .iter()
            .map(|states| {
                Value::Array(states.iter().map(|s| json!([s.i, s.j])).collect())
            })
            .collect()
    });
    let mut doc = json!({
        "schema": DFA_SCHEMA,
        "alphabet": dfa.alphabet().to_string(),
        "states": dfa.state_count(),
        "initial": dfa.initial(),
        "finals": dfa.finals().iter().collect::<Vec<_>>(),
        "transitions": transitions,
    });
    if let Some(labels) = labels {
        doc["labels"] = Value::Array(labels);
    }
    doc
}

pub fn size_report_to_json(report: &SizeReport) -> Value {
    json!({
        "u": report.u.to_string(),
        "v": report.v.to_string(),
        "nfa_states": report.nfa_states,
        "subset_dfa_states": report.subset_dfa_states,
        "minimal_dfa_states": report.minimal_dfa_states,
        "formula_prediction": report.formula_prediction,
        "eq1_bound": report.eq1_bound.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinize::{minimize, subset_construction};
    use crate::words::Word;

    fn nfa(u: &str, v: &str) -> GridNfa {
        GridNfa::new(Word::parse(u).unwrap(), Word::parse(v).unwrap()).unwrap()
    }

    #[test]
    fn grid_dot_pins_positions_and_shades_areas() {
        let a = nfa("bbaa", "aab");
        let dot = grid_to_dot(
            &a,
            &GridDotOptions {
                shade_areas: true,
                ..Default::default()
            },
        );
        assert!(dot.starts_with("digraph"));
        // Initial state top-left, final state bottom-right, pinned.
        assert!(dot.contains("s4_3 [label=\"(4,3)\", pos=\"0.0,3.9!\"]"));
        assert!(dot.contains("s0_0 [label=\"(0,0)\", pos=\"5.2,0.0!\", peripheries=2]"));
        // Area interiors are filled.
        assert!(dot.contains("s2_3 [label=\"(2,3)\", pos=\"2.6,3.9!\", style=filled, fillcolor=gray85]"));
        // Deterministic output.
        assert_eq!(
            dot,
            grid_to_dot(
                &a,
                &GridDotOptions {
                    shade_areas: true,
                    ..Default::default()
                }
            )
        );
    }

    #[test]
    fn dot_marks_probe_states() {
        let a = nfa("ab", "cd");
        let opts = GridDotOptions {
            bulleted_states: a.frontier_after(&Word::parse("ac").unwrap()),
            ..Default::default()
        };
        let dot = grid_to_dot(&a, &opts);
        assert!(dot.contains("(1,1)\\n•"));
    }

    /// Construction view: removed states shaded, removed transitions dashed.
    #[test]
    fn dot_draws_a_construction_view() {
        use crate::periodic::{PeriodicConstruction, PeriodicInstance};
        let inst = PeriodicInstance::new(
            Word::parse("abc").unwrap(),
            Word::parse("bc").unwrap(),
            2,
            Word::parse("abc").unwrap(),
            0,
        )
        .unwrap();
        let mut construction = PeriodicConstruction::start(&inst).unwrap();
        construction.prune_below_diagonal();
        construction.prune_above_match_layer(&inst);
        construction.determinize_interior();
        let opts = GridDotOptions {
            shaded_states: construction.pruned_states(),
            dashed_transitions: construction.pruned_transitions(),
            ..Default::default()
        };
        let dot = grid_to_dot(&inst.nfa().unwrap(), &opts);
        assert!(dot.contains("style=filled"));
        assert!(dot.contains("style=dashed"));
    }

    #[test]
    fn json_documents_are_schema_tagged() {
        let a = nfa("ab", "cd");
        let nfa_doc = grid_to_json(&a);
        assert_eq!(nfa_doc["schema"], NFA_SCHEMA);
        assert_eq!(nfa_doc["states"], 9);

        let dfa = minimize(&subset_construction(&a));
        let dfa_doc = dfa_to_json(&dfa);
        assert_eq!(dfa_doc["schema"], DFA_SCHEMA);
        assert_eq!(dfa_doc["states"], 9);
        assert!(dfa_doc["labels"].is_array());
    }
}
