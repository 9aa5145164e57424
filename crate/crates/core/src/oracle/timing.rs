//! Exact difference-constraint solving over the rationals, and scheduling of
//! action words: find execution times making a word a concrete run.
//!
//! This deliberately shares no code with the DBM kernel, so the oracle can
//! cross-check it.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::valuation::{rat, GlobalStep, LocalStep, Rational, Valuation};
use crate::dbm::Dbm;
use crate::model::{Move, Network, StateVector};
use crate::zones::ZoneSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Edge {
    value: Rational,
    strict: bool,
}

impl Edge {
    fn tighter(self, other: Edge) -> bool {
        self.value < other.value || (self.value == other.value && self.strict && !other.strict)
    }

    fn plus(self, other: Edge) -> Edge {
        Edge { value: self.value + other.value, strict: self.strict || other.strict }
    }

    fn negative(self) -> bool {
        self.value < rat(0) || (self.value == rat(0) && self.strict)
    }
}

/// How to choose a value inside a feasible interval.
pub enum Pick<'a> {
    /// The smallest value allowed (or just above it when strict).
    Earliest,
    Random(&'a mut ChaCha8Rng),
}

/// Conjunction of `x_i − x_j ◁ c` over rational variables; `x_0` is fixed at 0.
#[derive(Clone, Debug)]
pub struct DiffSystem {
    n: usize,
    m: Vec<Option<Edge>>,
}

impl DiffSystem {
    pub fn new(n: usize) -> DiffSystem {
        let mut m = vec![None; n * n];
        for i in 0..n {
            m[i * n + i] = Some(Edge { value: rat(0), strict: false });
        }
        DiffSystem { n, m }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `x_i − x_j ≤ c` (or `<` when strict).
    pub fn add(&mut self, i: usize, j: usize, c: Rational, strict: bool) {
        let e = Edge { value: c, strict };
        let slot = &mut self.m[i * self.n + j];
        if slot.is_none_or(|old| e.tighter(old)) {
            *slot = Some(e);
        }
    }

    pub fn add_eq(&mut self, i: usize, j: usize, c: Rational) {
        self.add(i, j, c, false);
        self.add(j, i, -c, false);
    }

    /// Constraints of a DBM, with DBM index `k` mapped to `var(k)`.
    pub fn add_dbm(&mut self, d: &Dbm, var: impl Fn(usize) -> usize) {
        for c in d.finite_entries() {
            self.add(var(c.i), var(c.j), rat(c.bound.value().unwrap()), c.bound.is_strict());
        }
    }

    /// All-pairs shortest paths; false when inconsistent.
    fn close(&mut self) -> bool {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = self.m[i * n + k] else { continue };
                for j in 0..n {
                    let Some(kj) = self.m[k * n + j] else { continue };
                    let via = ik.plus(kj);
                    if self.m[i * n + j].is_none_or(|cur| via.tighter(cur)) {
                        self.m[i * n + j] = Some(via);
                    }
                }
            }
        }
        (0..n).all(|i| !self.m[i * n + i].unwrap().negative())
    }

    pub fn is_satisfiable(&self) -> bool {
        self.clone().close()
    }

    /// A solution, or `None` if there is none. Entry 0 is 0.
    pub fn solve(mut self, pick: &mut Pick<'_>) -> Option<Vec<Rational>> {
        if !self.close() {
            return None;
        }
        let n = self.n;
        let mut values = vec![rat(0); n];
        for (k, slot) in values.iter_mut().enumerate().skip(1) {
            // x_k ≤ m[k][0], x_k ≥ −m[0][k]
            let hi = self.m[k * n];
            let lo = self.m[k].map(|e| Edge { value: -e.value, strict: e.strict });
            let v = choose(lo, hi, pick);
            *slot = v;
            self.add_eq(k, 0, v);
            let ok = self.close();
            debug_assert!(ok, "chosen value must stay consistent");
            if !ok {
                return None;
            }
        }
        Some(values)
    }
}

fn choose(lo: Option<Edge>, hi: Option<Edge>, pick: &mut Pick<'_>) -> Rational {
    let half = Rational::new(1, 2);
    match (lo, hi) {
        (Some(l), Some(h)) => {
            if l.value == h.value {
                return l.value;
            }
            let mid = (l.value + h.value) / rat(2);
            match pick {
                Pick::Earliest => {
                    if l.strict {
                        l.value + (half).min((h.value - l.value) / rat(2))
                    } else {
                        l.value
                    }
                }
                Pick::Random(rng) => {
                    let width = h.value - l.value;
                    let mut options = vec![mid, l.value + width / rat(4), l.value + width * rat(3) / rat(4)];
                    if !l.strict {
                        options.push(l.value);
                    }
                    if !h.strict {
                        options.push(h.value);
                    }
                    let mut k = 1;
                    while l.value + rat(k) < h.value && k <= 4 {
                        options.push(l.value + rat(k));
                        k += 1;
                    }
                    *options.choose(rng).unwrap()
                }
            }
        }
        (Some(l), None) => match pick {
            Pick::Earliest => {
                if l.strict {
                    l.value + half
                } else {
                    l.value
                }
            }
            Pick::Random(rng) => {
                let k = if l.strict { rng.gen_range(1..=8) } else { rng.gen_range(0..=8) };
                l.value + half * rat(k)
            }
        },
        (None, Some(h)) => {
            let k = match pick {
                Pick::Earliest => 2,
                Pick::Random(rng) => {
                    if h.strict {
                        rng.gen_range(1..=8)
                    } else {
                        rng.gen_range(0..=8)
                    }
                }
            };
            h.value - half * rat(k)
        }
        (None, None) => match pick {
            Pick::Earliest => rat(0),
            Pick::Random(rng) => half * rat(rng.gen_range(0..=8)),
        },
    }
}

/// A point of a non-empty DBM.
pub fn sample_point(d: &Dbm, pick: &mut Pick<'_>) -> Option<Valuation> {
    let mut sys = DiffSystem::new(d.dim());
    sys.add_dbm(d, |k| k);
    sys.solve(pick).map(Valuation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Timeline {
    /// One reference clock per process (local layout).
    Local,
    /// A single reference clock (global layout).
    Global,
}

pub enum StartSpec<'a> {
    Valuation(&'a Valuation),
    /// Any valuation of the zone.
    Zone(&'a Dbm),
}

pub enum EndSpec<'a> {
    Free,
    Valuation(&'a Valuation),
    /// All reference clocks equal at the end.
    Synchronized,
}

/// A concrete run: start valuation, execution time of every action, end
/// valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub start: Valuation,
    pub times: Vec<Rational>,
    pub end: Valuation,
}

/// Whether `word` is discretely executable from `q`.
pub fn discretely_enabled(net: &Network, q: &StateVector, word: &[Move]) -> Option<StateVector> {
    let mut q = q.clone();
    for mv in word {
        let ok = mv.processes().collect::<Vec<_>>() == net.dom(mv.action)
            && mv.edges.iter().all(|&(p, i)| {
                net.processes[p].transitions.get(i).is_some_and(|t| t.action == mv.action && t.source == q.get(p))
            });
        if !ok {
            return None;
        }
        q = net.apply(&q, mv);
    }
    Some(q)
}

/// Find execution times making `word` a run from `start` in the given
/// timeline, subject to `end`. Exact: `None` means no such run exists.
pub fn schedule(
    net: &Network,
    timeline: Timeline,
    q: &StateVector,
    start: StartSpec<'_>,
    word: &[Move],
    end: EndSpec<'_>,
    pick: &mut Pick<'_>,
) -> Option<Schedule> {
    discretely_enabled(net, q, word)?;
    let space = ZoneSpace::new(net);
    let k = space.num_processes();
    let (dim, refs) = match timeline {
        Timeline::Local => (space.local_dim(), k),
        Timeline::Global => (space.global_dim(), 1),
    };
    let ref_var = |p: usize| match timeline {
        Timeline::Local => space.local_ref(p),
        Timeline::Global => ZoneSpace::GLOBAL_REF,
    };
    let ref_slot = |p: usize| match timeline {
        Timeline::Local => p,
        Timeline::Global => 0,
    };
    let offset_var = |x: usize| match timeline {
        Timeline::Local => space.local_offset(x),
        Timeline::Global => space.global_offset(x),
    };
    let theta = |i: usize| dim + i;
    let end_var = |r: usize| dim + word.len() + r;
    let mut sys = DiffSystem::new(dim + word.len() + refs);

    match start {
        StartSpec::Valuation(v) => {
            assert_eq!(v.0.len(), dim, "start valuation layout mismatch");
            for i in 1..dim {
                sys.add_eq(i, 0, v.get(i));
            }
        }
        StartSpec::Zone(d) => {
            assert_eq!(d.dim(), dim, "start zone layout mismatch");
            sys.add_dbm(d, |i| i);
        }
    }

    // Last time of each reference slot and last reset time of each clock.
    let mut last_ref: Vec<usize> = (0..refs).map(|r| match timeline {
        Timeline::Local => space.local_ref(r),
        Timeline::Global => ZoneSpace::GLOBAL_REF,
    }).collect();
    let mut last_reset: Vec<usize> = (0..space.num_clocks()).map(offset_var).collect();
    for (i, mv) in word.iter().enumerate() {
        let slots: Vec<usize> = match timeline {
            Timeline::Local => mv.processes().collect(),
            Timeline::Global => vec![0],
        };
        for r in slots {
            sys.add(last_ref[r], theta(i), rat(0), false);
            last_ref[r] = theta(i);
        }
        for &(p, ti) in &mv.edges {
            for a in &net.transition(p, ti).guard.atoms {
                let src = last_reset[a.clock];
                let c = rat(i64::from(a.constant));
                use crate::model::Relation::*;
                match a.relation {
                    Lt => sys.add(theta(i), src, c, true),
                    Le => sys.add(theta(i), src, c, false),
                    Eq => sys.add_eq(theta(i), src, c),
                    Ge => sys.add(src, theta(i), -c, false),
                    Gt => sys.add(src, theta(i), -c, true),
                }
            }
        }
        for &(p, ti) in &mv.edges {
            for &x in &net.transition(p, ti).resets {
                last_reset[x] = theta(i);
            }
        }
    }
    for (r, &last) in last_ref.iter().enumerate() {
        sys.add(last, end_var(r), rat(0), false);
    }
    match end {
        EndSpec::Free => {}
        EndSpec::Synchronized => {
            for r in 1..refs {
                sys.add_eq(end_var(r), end_var(0), rat(0));
            }
        }
        EndSpec::Valuation(v) => {
            assert_eq!(v.0.len(), dim, "end valuation layout mismatch");
            for p in 0..k {
                sys.add_eq(end_var(ref_slot(p)), 0, v.get(ref_var(p)));
            }
            for (x, &src) in last_reset.iter().enumerate() {
                sys.add_eq(src, 0, v.get(offset_var(x)));
            }
        }
    }

    let values = sys.solve(pick)?;
    let start = Valuation(values[..dim].to_vec());
    let times = values[dim..dim + word.len()].to_vec();
    let mut end = Valuation::zeros(dim);
    for p in 0..k {
        end.0[ref_var(p)] = values[end_var(ref_slot(p))];
    }
    for (x, &src) in last_reset.iter().enumerate() {
        end.0[offset_var(x)] = values[src];
    }
    Some(Schedule { start, times, end })
}

/// Local timed word realizing a local-timeline schedule.
pub fn local_word(net: &Network, word: &[Move], s: &Schedule) -> Vec<LocalStep> {
    let space = ZoneSpace::new(net);
    let mut cur: Vec<Rational> = (0..space.num_processes()).map(|p| s.start.get(space.local_ref(p))).collect();
    let mut out = Vec::new();
    for (mv, &th) in word.iter().zip(&s.times) {
        for p in mv.processes() {
            out.push(LocalStep::Delay { process: p, amount: th - cur[p] });
            cur[p] = th;
        }
        out.push(LocalStep::Act(mv.clone()));
    }
    for (p, c) in cur.iter().enumerate() {
        out.push(LocalStep::Delay { process: p, amount: s.end.get(space.local_ref(p)) - *c });
    }
    out
}

/// Global timed word realizing a schedule whose times are non-decreasing.
pub fn global_word(word: &[Move], start_time: Rational, times: &[Rational], end_time: Rational) -> Vec<GlobalStep> {
    let mut cur = start_time;
    let mut out = Vec::new();
    for (mv, &th) in word.iter().zip(times) {
        out.push(GlobalStep::Delay(th - cur));
        out.push(GlobalStep::Act(mv.clone()));
        cur = th;
    }
    out.push(GlobalStep::Delay(end_time - cur));
    out
}
