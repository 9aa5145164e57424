//! Concrete cross-checks between global runs, local runs and zone paths.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::random::random_walk;
use super::timing::{global_word, local_word, sample_point, schedule, EndSpec, Pick, StartSpec, Timeline};
use super::traces::equivalent;
use super::valuation::{exec_global, exec_global_from, exec_local, exec_local_from, expand_global_word, global_of, local_of, rat, Valuation};
use crate::explore::explore_local_raw;
use crate::model::{Move, Network};
use crate::zones::ZoneSpace;

/// Outcome of a batch of checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LawReport {
    pub name: String,
    pub cases: usize,
    /// Samples that could not be instantiated (for example an infeasible
    /// random word) and were not counted.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn new(name: impl Into<String>) -> LawReport {
        LawReport { name: name.into(), ..LawReport::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        // Only the first few failures are kept.
        if !ok && self.failures.len() < 20 {
            self.failures.push(detail());
        }
    }

    pub fn merge(&mut self, other: LawReport) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
    }
}

/// A global run read as a local run ends in `local` of its end valuation.
pub fn check_global_to_local(net: &Network, word: &[Move], rng: &mut ChaCha8Rng, report: &mut LawReport) {
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let v0 = Valuation::zeros(space.global_dim());
    let Some(s) = schedule(net, Timeline::Global, &q0, StartSpec::Valuation(&v0), word, EndSpec::Free, &mut Pick::Random(rng)) else {
        report.skipped += 1;
        return;
    };
    let end_time = s.end.get(ZoneSpace::GLOBAL_REF);
    let gw = global_word(word, rat(0), &s.times, end_time);
    let label = net.word_label(word);
    let global = match exec_global(net, &gw) {
        Ok(trace) => trace.last().unwrap().1.clone(),
        Err(e) => {
            report.check(false, || format!("{label}: scheduled global run {e}"));
            return;
        }
    };
    let lw = expand_global_word(net.num_processes(), &gw);
    match exec_local(net, &lw) {
        Ok(trace) => {
            let end = &trace.last().unwrap().1;
            let expected = local_of(&space, &global);
            report.check(*end == expected, || format!("{label}: local end {end:?} differs from local(global end) {expected:?}"));
        }
        Err(e) => report.check(false, || format!("{label}: expanded local run {e}")),
    }
}

/// A synchronized local run reordered by execution time is an equivalent
/// global run with the same end valuation.
pub fn check_local_to_global(net: &Network, word: &[Move], rng: &mut ChaCha8Rng, report: &mut LawReport) {
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let v0 = Valuation::zeros(space.local_dim());
    let Some(s) = schedule(net, Timeline::Local, &q0, StartSpec::Valuation(&v0), word, EndSpec::Synchronized, &mut Pick::Random(rng)) else {
        report.skipped += 1;
        return;
    };
    let label = net.word_label(word);
    let lw = local_word(net, word, &s);
    let local_end = match exec_local(net, &lw) {
        Ok(trace) => trace.last().unwrap().1.clone(),
        Err(e) => {
            report.check(false, || format!("{label}: scheduled local run {e}"));
            return;
        }
    };
    let Some(global_end) = global_of(&space, &local_end) else {
        report.check(false, || format!("{label}: end {local_end:?} is not synchronized"));
        return;
    };
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&i| s.times[i]);
    let w: Vec<Move> = order.iter().map(|&i| word[i].clone()).collect();
    let times: Vec<_> = order.iter().map(|&i| s.times[i]).collect();
    if !equivalent(word, &w, net.num_processes()) {
        report.check(false, || format!("{label}: time order {} is not equivalent", net.word_label(&w)));
        return;
    }
    let gw = global_word(&w, rat(0), &times, global_end.get(ZoneSpace::GLOBAL_REF));
    match exec_global(net, &gw) {
        Ok(trace) => {
            let end = &trace.last().unwrap().1;
            report.check(*end == global_end, || format!("{label}: global end {end:?} differs from {global_end:?}"));
        }
        Err(e) => report.check(false, || format!("{label}: reordered global run {} {e}", net.word_label(&w))),
    }
}

/// Swapping two adjacent independent actions of a local run, keeping their
/// execution times, reaches the same configuration.
pub fn check_independence(net: &Network, word: &[Move], rng: &mut ChaCha8Rng, report: &mut LawReport) {
    let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| !word[i].depends_on(&word[i + 1])) else {
        report.skipped += 1;
        return;
    };
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let v0 = Valuation::zeros(space.local_dim());
    let Some(s) = schedule(net, Timeline::Local, &q0, StartSpec::Valuation(&v0), word, EndSpec::Free, &mut Pick::Random(rng)) else {
        report.skipped += 1;
        return;
    };
    let mut swapped = word.to_vec();
    swapped.swap(i, i + 1);
    let mut s2 = s.clone();
    s2.times.swap(i, i + 1);
    let label = net.word_label(word);
    let a = exec_local(net, &local_word(net, word, &s));
    let b = exec_local(net, &local_word(net, &swapped, &s2));
    match (a, b) {
        (Ok(ta), Ok(tb)) => {
            let (ea, eb) = (ta.last().unwrap(), tb.last().unwrap());
            report.check(ea == eb, || format!("{label}: swapping positions {i},{} changes the end {:?} to {:?}", i + 1, ea.1, eb.1));
        }
        (Err(e), _) => report.check(false, || format!("{label}: original run {e}")),
        (_, Err(e)) => report.check(false, || format!("{label}: swapped run {e}")),
    }
}

/// Every valuation of a local-zone-graph node is reachable along its path
/// (post), every run from a start valuation along the path ends in the
/// node's zone (pre), and a path with an empty zone has no run.
pub fn check_zone_runs(net: &Network, depth: usize, rng: &mut ChaCha8Rng, report: &mut LawReport) {
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let z0 = space.initial_local_zone();
    for path in explore_local_raw(net, depth) {
        let label = net.word_label(&path.word);
        let Some(target) = sample_point(path.zone.dbm(), &mut Pick::Random(rng)) else {
            report.check(false, || format!("{label}: cannot sample its non-empty zone"));
            continue;
        };
        match schedule(net, Timeline::Local, &q0, StartSpec::Zone(z0.dbm()), &path.word, EndSpec::Valuation(&target), &mut Pick::Random(rng)) {
            None => report.check(false, || format!("{label}: zone point {target:?} has no run")),
            Some(s) => {
                let run = exec_local_from(net, &q0, &s.start, &local_word(net, &path.word, &s));
                let ok = s.start.satisfies(z0.dbm()) && run.as_ref().is_ok_and(|t| t.last().unwrap().1 == target);
                report.check(ok, || format!("{label}: run to {target:?} does not replay: {run:?}"));
            }
        }

        let Some(start) = sample_point(z0.dbm(), &mut Pick::Random(rng)) else { continue };
        if let Some(s) = schedule(net, Timeline::Local, &q0, StartSpec::Valuation(&start), &path.word, EndSpec::Free, &mut Pick::Random(rng)) {
            let end = s.end.clone();
            report.check(end.satisfies(path.zone.dbm()), || format!("{label}: run end {end:?} outside the zone"));
        }

        if path.word.len() < depth {
            for mv in net.successor_moves(&path.q) {
                if space.local_step(net, &path.zone, &mv).is_some() {
                    continue;
                }
                let mut word = path.word.clone();
                word.push(mv);
                let found = schedule(net, Timeline::Local, &q0, StartSpec::Zone(z0.dbm()), &word, EndSpec::Free, &mut Pick::Earliest);
                report.check(found.is_none(), || format!("{}: empty zone but a run exists", net.word_label(&word)));
            }
        }
    }
}

/// Replay a witness as a global run: true when some timing realizes it.
pub fn replay_witness(net: &Network, witness: &[Move]) -> Result<Valuation, String> {
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let v0 = Valuation::zeros(space.global_dim());
    let s = schedule(net, Timeline::Global, &q0, StartSpec::Valuation(&v0), witness, EndSpec::Free, &mut Pick::Earliest)
        .ok_or_else(|| format!("no timing realizes {}", net.word_label(witness)))?;
    let gw = global_word(witness, rat(0), &s.times, s.end.get(ZoneSpace::GLOBAL_REF));
    let trace = exec_global_from(net, &q0, &v0, &gw).map_err(|e| e.to_string())?;
    Ok(trace.last().unwrap().1.clone())
}

/// Run translation and independence checks over `samples` random walks.
pub fn check_translations(net: &Network, samples: usize, max_len: usize, rng: &mut ChaCha8Rng) -> LawReport {
    let mut report = LawReport::new("run translation");
    for _ in 0..samples {
        let word = random_walk(net, rng, max_len);
        check_global_to_local(net, &word, rng, &mut report);
        check_local_to_global(net, &word, rng, &mut report);
        check_independence(net, &word, rng, &mut report);
    }
    report
}
