//! Exact valuations and step-by-step executors for global and local runs.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::dbm::Dbm;
use crate::model::{Move, Network, Relation, StateVector};
use crate::zones::ZoneSpace;

pub type Rational = Ratio<i64>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// One exact value per variable of a zone layout; index 0 is the zero
/// variable and always holds 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Valuation(pub Vec<Rational>);

impl Valuation {
    pub fn zeros(dim: usize) -> Valuation {
        Valuation(vec![rat(0); dim])
    }

    pub fn get(&self, i: usize) -> Rational {
        self.0[i]
    }

    /// Whether the valuation satisfies every entry of `d`.
    pub fn satisfies(&self, d: &Dbm) -> bool {
        assert_eq!(d.dim(), self.0.len(), "layout mismatch");
        (0..d.dim()).all(|i| {
            (0..d.dim()).all(|j| {
                let b = d.get(i, j);
                match b.value() {
                    None => true,
                    Some(c) => {
                        let diff = self.0[i] - self.0[j];
                        if b.is_strict() {
                            diff < rat(c)
                        } else {
                            diff <= rat(c)
                        }
                    }
                }
            })
        })
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0[1..].iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A step of a global timed word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalStep {
    Delay(Rational),
    Act(Move),
}

/// A step of a local timed word: a delay of one process, or an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalStep {
    Delay { process: usize, amount: Rational },
    Act(Move),
}

/// Why a replay stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stuck {
    /// Index of the offending step in the word.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stuck at step {}: {}", self.step, self.reason)
    }
}

/// Configurations after each step, starting with the initial one.
pub type Trace = Vec<(StateVector, Valuation)>;

fn holds(relation: Relation, lhs: Rational, c: u32) -> bool {
    let c = rat(i64::from(c));
    match relation {
        Relation::Lt => lhs < c,
        Relation::Le => lhs <= c,
        Relation::Eq => lhs == c,
        Relation::Ge => lhs >= c,
        Relation::Gt => lhs > c,
    }
}

/// Discrete checks shared by both semantics: the move matches the network
/// and its transitions leave the current local states.
fn check_discrete(net: &Network, q: &StateVector, mv: &Move) -> Result<(), String> {
    if mv.action >= net.actions.len() {
        return Err(format!("unknown action id {}", mv.action));
    }
    let procs: Vec<usize> = mv.processes().collect();
    if procs != net.dom(mv.action) {
        return Err(format!("move on {} does not cover its domain", net.actions[mv.action]));
    }
    for &(p, i) in &mv.edges {
        let t = net
            .processes[p]
            .transitions
            .get(i)
            .ok_or_else(|| format!("process {} has no transition {i}", net.processes[p].name))?;
        if t.action != mv.action {
            return Err(format!("transition {i} of {} is not labelled {}", net.processes[p].name, net.actions[mv.action]));
        }
        if t.source != q.get(p) {
            return Err(format!("{} not enabled: {} is not in its source state", net.move_label(mv), net.processes[p].name));
        }
    }
    Ok(())
}

/// Replay a global timed word from `(q, v)` (global layout).
pub fn exec_global_from(net: &Network, q: &StateVector, v: &Valuation, word: &[GlobalStep]) -> Result<Trace, Stuck> {
    let space = ZoneSpace::new(net);
    let t = ZoneSpace::GLOBAL_REF;
    let mut q = q.clone();
    let mut v = v.clone();
    let mut trace = vec![(q.clone(), v.clone())];
    for (step, s) in word.iter().enumerate() {
        let stuck = |reason: String| Stuck { step, reason };
        match s {
            GlobalStep::Delay(d) => {
                if *d < rat(0) {
                    return Err(stuck(format!("negative delay {d}")));
                }
                v.0[t] += *d;
            }
            GlobalStep::Act(mv) => {
                check_discrete(net, &q, mv).map_err(stuck)?;
                for &(p, i) in &mv.edges {
                    for a in &net.transition(p, i).guard.atoms {
                        let value = v.0[t] - v.0[space.global_offset(a.clock)];
                        if !holds(a.relation, value, a.constant) {
                            return Err(stuck(format!(
                                "guard {}{}{} fails with value {value}",
                                net.clocks[a.clock].name,
                                a.relation.symbol(),
                                a.constant
                            )));
                        }
                    }
                }
                for &(p, i) in &mv.edges {
                    for &x in &net.transition(p, i).resets {
                        v.0[space.global_offset(x)] = v.0[t];
                    }
                }
                q = net.apply(&q, mv);
            }
        }
        trace.push((q.clone(), v.clone()));
    }
    Ok(trace)
}

pub fn exec_global(net: &Network, word: &[GlobalStep]) -> Result<Trace, Stuck> {
    let space = ZoneSpace::new(net);
    exec_global_from(net, &net.initial_state(), &Valuation::zeros(space.global_dim()), word)
}

/// Replay a local timed word from `(q, v)` (local layout).
pub fn exec_local_from(net: &Network, q: &StateVector, v: &Valuation, word: &[LocalStep]) -> Result<Trace, Stuck> {
    let space = ZoneSpace::new(net);
    let mut q = q.clone();
    let mut v = v.clone();
    let mut trace = vec![(q.clone(), v.clone())];
    for (step, s) in word.iter().enumerate() {
        let stuck = |reason: String| Stuck { step, reason };
        match s {
            LocalStep::Delay { process, amount } => {
                if *amount < rat(0) {
                    return Err(stuck(format!("negative delay {amount}")));
                }
                if *process >= net.num_processes() {
                    return Err(stuck(format!("unknown process {process}")));
                }
                v.0[space.local_ref(*process)] += *amount;
            }
            LocalStep::Act(mv) => {
                check_discrete(net, &q, mv).map_err(stuck)?;
                let times: Vec<Rational> = mv.processes().map(|p| v.0[space.local_ref(p)]).collect();
                if times.windows(2).any(|w| w[0] != w[1]) {
                    return Err(stuck(format!("{} with unsynchronized local times {times:?}", net.move_label(mv))));
                }
                for &(p, i) in &mv.edges {
                    for a in &net.transition(p, i).guard.atoms {
                        let value = v.0[space.local_ref(p)] - v.0[space.local_offset(a.clock)];
                        if !holds(a.relation, value, a.constant) {
                            return Err(stuck(format!(
                                "guard {}{}{} fails with value {value}",
                                net.clocks[a.clock].name,
                                a.relation.symbol(),
                                a.constant
                            )));
                        }
                    }
                }
                for &(p, i) in &mv.edges {
                    for &x in &net.transition(p, i).resets {
                        v.0[space.local_offset(x)] = v.0[space.local_ref(p)];
                    }
                }
                q = net.apply(&q, mv);
            }
        }
        trace.push((q.clone(), v.clone()));
    }
    Ok(trace)
}

pub fn exec_local(net: &Network, word: &[LocalStep]) -> Result<Trace, Stuck> {
    let space = ZoneSpace::new(net);
    exec_local_from(net, &net.initial_state(), &Valuation::zeros(space.local_dim()), word)
}

/// `local(v)`: every reference clock takes the global time.
pub fn local_of(space: &ZoneSpace, v: &Valuation) -> Valuation {
    let mut out = Valuation::zeros(space.local_dim());
    for p in 0..space.num_processes() {
        out.0[space.local_ref(p)] = v.0[ZoneSpace::GLOBAL_REF];
    }
    for x in 0..space.num_clocks() {
        out.0[space.local_offset(x)] = v.0[space.global_offset(x)];
    }
    out
}

/// `global(v)` of a synchronized local valuation; `None` otherwise.
pub fn global_of(space: &ZoneSpace, v: &Valuation) -> Option<Valuation> {
    let t = v.0[space.local_ref(0)];
    if (0..space.num_processes()).any(|p| v.0[space.local_ref(p)] != t) {
        return None;
    }
    let mut out = Valuation::zeros(space.global_dim());
    out.0[ZoneSpace::GLOBAL_REF] = t;
    for x in 0..space.num_clocks() {
        out.0[space.global_offset(x)] = v.0[space.local_offset(x)];
    }
    Some(out)
}

/// A global delay becomes one local delay per process.
pub fn expand_global_word(num_processes: usize, word: &[GlobalStep]) -> Vec<LocalStep> {
    word.iter()
        .flat_map(|s| match s {
            GlobalStep::Delay(d) => (0..num_processes).map(|p| LocalStep::Delay { process: p, amount: *d }).collect(),
            GlobalStep::Act(mv) => vec![LocalStep::Act(mv.clone())],
        })
        .collect()
}
