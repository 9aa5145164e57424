//! Networks of timed automata: data model, text format, static analyses.

pub mod corpus;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use parser::{parse_network, ParseError};

pub type ProcId = usize;
pub type ClockId = usize;
pub type ActionId = usize;
/// Index of a state inside its process.
pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "==",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `clock ∼ constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub clock: ClockId,
    pub relation: Relation,
    pub constant: u32,
}

/// Conjunction of atoms; empty means `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Guard {
    pub atoms: Vec<Atom>,
}

impl Guard {
    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub target: StateId,
    pub action: ActionId,
    pub guard: Guard,
    pub resets: Vec<ClockId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub states: Vec<String>,
    pub initial: StateId,
    pub clocks: Vec<ClockId>,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clock {
    pub name: String,
    pub owner: ProcId,
}

/// A validated network. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub name: String,
    pub processes: Vec<Process>,
    pub clocks: Vec<Clock>,
    /// Sorted by name, so ids do not depend on declaration order.
    pub actions: Vec<String>,
    /// `dom[b]`: processes with a `b`-transition, ascending.
    pub dom: Vec<Vec<ProcId>>,
}

/// One state per process, in process order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector(pub Vec<StateId>);

impl StateVector {
    pub fn get(&self, p: ProcId) -> StateId {
        self.0[p]
    }
}

/// An action together with the transition chosen in every process of its
/// domain: one synchronized step of the product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub action: ActionId,
    /// `(process, transition index)`, ascending by process; covers `dom(action)`.
    pub edges: Vec<(ProcId, usize)>,
}

impl Move {
    pub fn processes(&self) -> impl Iterator<Item = ProcId> + '_ {
        self.edges.iter().map(|&(p, _)| p)
    }

    /// Processes shared with `other`?
    pub fn depends_on(&self, other: &Move) -> bool {
        self.processes().any(|p| other.processes().any(|o| o == p))
    }
}

/// Per-clock maximal guard constant; `None` stands for −∞ (never compared).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxConstants {
    pub per_clock: Vec<Option<u32>>,
}

impl MaxConstants {
    pub fn get(&self, clock: ClockId) -> Option<u32> {
        self.per_clock[clock]
    }

    pub fn c_max(&self) -> Option<u32> {
        self.per_clock.iter().flatten().copied().max()
    }
}

/// Partial assignment of states to processes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    pub states: Vec<(ProcId, StateId)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("malformed target item '{0}', expected proc=state")]
    Malformed(String),
    #[error("unknown process '{0}' in target")]
    UnknownProcess(String),
    #[error("unknown state '{state}' of process '{process}' in target")]
    UnknownState { process: String, state: String },
    #[error("empty target")]
    Empty,
}

impl TargetSpec {
    /// Parse `P1=p1,P2=q1`.
    pub fn parse(net: &Network, text: &str) -> Result<TargetSpec, TargetError> {
        let mut states = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (proc_name, state_name) = item
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                .ok_or_else(|| TargetError::Malformed(item.to_string()))?;
            let p = net
                .process_id(proc_name)
                .ok_or_else(|| TargetError::UnknownProcess(proc_name.to_string()))?;
            let s = net.state_id(p, state_name).ok_or_else(|| TargetError::UnknownState {
                process: proc_name.to_string(),
                state: state_name.to_string(),
            })?;
            states.push((p, s));
        }
        if states.is_empty() {
            return Err(TargetError::Empty);
        }
        Ok(TargetSpec { states })
    }

    pub fn matches(&self, q: &StateVector) -> bool {
        self.states.iter().all(|&(p, s)| q.get(p) == s)
    }
}

impl Network {
    pub fn num_processes(&self) -> usize {
        self.processes.len()
    }

    pub fn num_clocks(&self) -> usize {
        self.clocks.len()
    }

    pub fn initial_state(&self) -> StateVector {
        StateVector(self.processes.iter().map(|p| p.initial).collect())
    }

    pub fn dom(&self, action: ActionId) -> &[ProcId] {
        &self.dom[action]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.binary_search_by(|a| a.as_str().cmp(name)).ok()
    }

    pub fn process_id(&self, name: &str) -> Option<ProcId> {
        self.processes.iter().position(|p| p.name == name)
    }

    pub fn clock_id(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|c| c.name == name)
    }

    pub fn state_id(&self, p: ProcId, name: &str) -> Option<StateId> {
        self.processes[p]
            .states
            .iter()
            .position(|s| s == name)
            .map(|i| i as StateId)
    }

    pub fn transition(&self, p: ProcId, index: usize) -> &Transition {
        &self.processes[p].transitions[index]
    }

    /// Process alphabet: the actions labelling its transitions.
    pub fn alphabet(&self, p: ProcId) -> BTreeSet<ActionId> {
        self.processes[p].transitions.iter().map(|t| t.action).collect()
    }

    /// Recompute `dom` from the transition alphabets.
    pub fn derived_dom(&self) -> Vec<Vec<ProcId>> {
        (0..self.actions.len())
            .map(|b| (0..self.processes.len()).filter(|&p| self.alphabet(p).contains(&b)).collect())
            .collect()
    }

    pub fn max_constants(&self) -> MaxConstants {
        let mut per_clock = vec![None; self.clocks.len()];
        for p in &self.processes {
            for t in &p.transitions {
                for a in &t.guard.atoms {
                    let slot: &mut Option<u32> = &mut per_clock[a.clock];
                    *slot = Some(slot.map_or(a.constant, |m| m.max(a.constant)));
                }
            }
        }
        MaxConstants { per_clock }
    }

    /// Every combination of one `b`-transition per process of `dom(b)` that
    /// leaves the current local states. Empty if some process has none.
    pub fn enabled_sync_sets(&self, q: &StateVector, action: ActionId) -> Vec<Move> {
        assert!(action < self.actions.len(), "unknown action id {action}");
        let mut combos: Vec<Vec<(ProcId, usize)>> = vec![Vec::new()];
        for &p in self.dom(action) {
            let options: Vec<usize> = self.processes[p]
                .transitions
                .iter()
                .enumerate()
                .filter(|(_, t)| t.action == action && t.source == q.get(p))
                .map(|(i, _)| i)
                .collect();
            if options.is_empty() {
                return Vec::new();
            }
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |&i| {
                        let mut next = prefix.clone();
                        next.push((p, i));
                        next
                    })
                })
                .collect();
        }
        combos.into_iter().map(|edges| Move { action, edges }).collect()
    }

    /// All moves enabled (discretely) in `q`, ordered by the process that
    /// owns the first transition of the tuple, then by declaration order.
    pub fn successor_moves(&self, q: &StateVector) -> Vec<Move> {
        let mut out = Vec::new();
        for (p, proc_) in self.processes.iter().enumerate() {
            for (i, t) in proc_.transitions.iter().enumerate() {
                if t.source != q.get(p) || self.dom(t.action)[0] != p {
                    continue;
                }
                let others = self.enabled_sync_sets(q, t.action);
                out.extend(others.into_iter().filter(|m| m.edges[0] == (p, i)));
            }
        }
        out
    }

    /// Discrete effect of a move.
    pub fn apply(&self, q: &StateVector, mv: &Move) -> StateVector {
        let mut next = q.clone();
        for &(p, i) in &mv.edges {
            next.0[p] = self.transition(p, i).target;
        }
        next
    }

    pub fn state_label(&self, q: &StateVector) -> String {
        let parts: Vec<&str> = self
            .processes
            .iter()
            .zip(&q.0)
            .map(|(p, &s)| p.states[s as usize].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Action name, with process subscripts when a process has several
    /// transitions on it (`a@P1:2`) so the label identifies the move.
    pub fn move_label(&self, mv: &Move) -> String {
        let name = &self.actions[mv.action];
        let ambiguous = mv.edges.iter().any(|&(p, _)| {
            self.processes[p]
                .transitions
                .iter()
                .filter(|t| t.action == mv.action)
                .count()
                > 1
        });
        if !ambiguous {
            return name.clone();
        }
        let picks: Vec<String> = mv
            .edges
            .iter()
            .map(|&(p, i)| format!("{}:{}", self.processes[p].name, i))
            .collect();
        format!("{name}@{}", picks.join("+"))
    }

    pub fn word_label(&self, word: &[Move]) -> String {
        word.iter().map(|m| self.move_label(m)).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::write_network(self, f)
    }
}
