//! Property suites over seeded random inputs, returning reports instead of
//! panicking so the CLI and the acceptance target can print them.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::minea::{region_equiv, RegionMode};
use super::random::{random_network, random_walk, RandomShape};
use super::timing::{sample_point, DiffSystem, Pick};
use super::traces::{trace_class, DEFAULT_TRACE_BOUND};
use super::translation::{check_translations, check_zone_runs, replay_witness, LawReport};
use super::valuation::{Rational, Valuation};
use crate::dbm::{Bound, Constraint, Dbm};
use crate::explore::{audit_local_sync, explore_global, explore_local_raw, explore_local_sync, SearchOptions, Verdict};
use crate::model::{Move, Network, StateVector, TargetSpec};
use crate::zones::{GlobalZone, LocalZone, ZoneSpace};

fn random_dbm(rng: &mut ChaCha8Rng, dim: usize) -> Dbm {
    loop {
        let n = rng.gen_range(1..=2 * dim);
        let cs: Vec<Constraint> = (0..n)
            .map(|_| {
                let i = rng.gen_range(0..dim);
                let j = (i + rng.gen_range(1..dim)) % dim;
                Constraint::new(i, j, Bound::new(rng.gen_range(-4..=4), rng.gen_bool(0.3)))
            })
            .collect();
        if let Some(d) = Dbm::from_constraints(dim, &cs) {
            return d;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Valuation {
    let mut v = Valuation::zeros(dim);
    for x in v.0.iter_mut().skip(1) {
        *x = Rational::new(rng.gen_range(-2..=12), 2);
    }
    v
}

/// Canonical form, inclusion and subtraction laws on random DBMs.
pub fn dbm_laws(rng: &mut ChaCha8Rng, cases: usize) -> LawReport {
    let mut r = LawReport::new("dbm");
    for _ in 0..cases {
        let dim = rng.gen_range(2..=4);
        let (a, b, c) = (random_dbm(rng, dim), random_dbm(rng, dim), random_dbm(rng, dim));
        r.check(a.clone().canonicalize().as_ref() == Some(&a), || format!("canonicalize not idempotent on {a:?}"));
        r.check(a.includes(&a), || "includes not reflexive".into());
        r.check(!(a.includes(&b) && b.includes(&a)) || a == b, || "includes not antisymmetric".into());
        r.check(!(a.includes(&b) && b.includes(&c)) || a.includes(&c), || "includes not transitive".into());
        let i = rng.gen_range(1..dim);
        let j = rng.gen_range(0..dim);
        let fu = a.free_upper(i);
        r.check(fu.is_canonical(), || "free_upper output not canonical".into());
        if i != j {
            let asg = a.assign(i, j);
            r.check(asg.is_canonical(), || "assign output not canonical".into());
        }
        let pieces = a.subtract(&b);
        for _ in 0..20 {
            let p = random_point(rng, dim);
            let lhs = p.satisfies(&a) && !p.satisfies(&b);
            let rhs = pieces.iter().any(|d| p.satisfies(d));
            r.check(lhs == rhs, || format!("subtract disagrees at {p:?}"));
        }
        if a.includes(&b) {
            if let Some(p) = sample_point(&b, &mut Pick::Random(rng)) {
                r.check(p.satisfies(&a), || format!("point {p:?} of an included zone lies outside"));
            }
        }
    }
    r
}

/// Shape, idempotence and translation laws on zones reached by random walks.
pub fn zone_laws(net: &Network, rng: &mut ChaCha8Rng, walks: usize) -> LawReport {
    let mut r = LawReport::new("zones");
    let space = ZoneSpace::new(net);
    let m = space.max_constants().clone();
    for _ in 0..walks {
        let word = random_walk(net, rng, 6);
        let mut lz = Some(space.initial_local_zone());
        let mut gz = Some(space.initial_global_zone());
        for mv in &word {
            if let Some(z) = lz.take() {
                lz = space.local_step(net, &z, mv);
            }
            if let Some(z) = gz.take() {
                gz = space.global_step(net, &z, mv);
            }
            if let Some(z) = &lz {
                local_zone_laws(&space, z, &mut r);
            }
            if let Some(g) = &gz {
                global_zone_laws(&space, g, &m, rng, &mut r);
            }
        }
    }
    r
}

fn local_zone_laws(space: &ZoneSpace, z: &LocalZone, r: &mut LawReport) {
    let d = z.dbm();
    let shape = (0..space.num_processes()).all(|p| {
        let t = space.local_ref(p);
        (0..d.dim()).all(|y| y == t || d.get(t, y) == Bound::INFINITY)
    });
    r.check(shape, || format!("elapsed zone has a bounded reference row: {:?}", d.describe(&space.local_layout())));
    r.check(space.offsets_below_refs_local(z), || "an offset exceeds its reference clock".into());
    r.check(space.local_elapse(z) == *z, || "local_elapse not idempotent".into());
    if let Some(s) = space.sync(z) {
        r.check(space.offsets_below_refs_local(&s), || "sync breaks offset ≤ reference".into());
        r.check(space.sync(&s).as_ref() == Some(&s), || "sync not idempotent".into());
    }
}

fn global_zone_laws(space: &ZoneSpace, g: &GlobalZone, m: &crate::model::MaxConstants, rng: &mut ChaCha8Rng, r: &mut LawReport) {
    let back = space.global_of_sync(&space.local_of_global(g));
    r.check(back.as_ref() == Some(g), || format!("global_of_sync(local_of_global(G)) differs for {:?}", g.dbm().describe(&space.global_layout())));
    let cz = space.to_clock_zone(g);
    let ex = space.extra_m(&cz);
    r.check(ex.includes(&cz), || "extra_m shrinks a zone".into());
    r.check(crate::zones::extra_m(&ex, m) == ex, || "extra_m not idempotent".into());
    for _ in 0..5 {
        let v = random_point(rng, space.global_dim());
        let mut clocks = Valuation::zeros(space.clock_dim());
        for x in 0..space.num_clocks() {
            clocks.0[space.clock_var(x)] = v.get(ZoneSpace::GLOBAL_REF) - v.get(space.global_offset(x));
        }
        let in_global = v.satisfies(g.dbm());
        let in_clock = clocks.satisfies(cz.dbm());
        // Clock zones forget absolute time, so only one direction is exact.
        r.check(!in_global || in_clock, || format!("{v:?} in G but its clock valuation is not in the clock zone"));
    }
    // Conversely every clock point is the clock valuation of some point of G.
    if let Some(p) = sample_point(cz.dbm(), &mut Pick::Random(rng)) {
        let mut sys = DiffSystem::new(space.global_dim());
        sys.add_dbm(g.dbm(), |i| i);
        for x in 0..space.num_clocks() {
            sys.add_eq(ZoneSpace::GLOBAL_REF, space.global_offset(x), p.get(space.clock_var(x)));
        }
        r.check(sys.is_satisfiable(), || format!("clock point {p:?} has no global preimage"));
    }
}

/// Zones of all equivalent words agree, and swapping an adjacent
/// independent pair keeps the zone, over the raw local unfolding.
pub fn commutativity_laws(net: &Network, depth: usize) -> LawReport {
    let mut r = LawReport::new("local zone commutativity");
    let paths = explore_local_raw(net, depth);
    let by_word: HashMap<Vec<Move>, (StateVector, LocalZone)> =
        paths.iter().map(|p| (p.word.clone(), (p.q.clone(), p.zone.clone()))).collect();
    for p in &paths {
        let label = net.word_label(&p.word);
        for i in 0..p.word.len().saturating_sub(1) {
            if p.word[i].depends_on(&p.word[i + 1]) {
                continue;
            }
            let mut w = p.word.clone();
            w.swap(i, i + 1);
            let same = by_word.get(&w).is_some_and(|(q, z)| *q == p.q && *z == p.zone);
            r.check(same, || format!("{label}: swapping positions {i},{} changes the node", i + 1));
        }
        match trace_class(&p.word, DEFAULT_TRACE_BOUND) {
            Ok(class) => {
                let same = class.iter().all(|w| by_word.get(w).is_some_and(|(q, z)| *q == p.q && *z == p.zone));
                r.check(same, || format!("{label}: an equivalent word reaches a different node"));
            }
            Err(e) => r.check(false, || format!("{label}: {e}")),
        }
    }
    r
}

/// One target per local state of every process.
pub fn single_state_targets(net: &Network) -> Vec<TargetSpec> {
    let mut out = Vec::new();
    for p in &net.processes {
        for s in &p.states {
            if let Ok(t) = TargetSpec::parse(net, &format!("{}={}", p.name, s)) {
                out.push(t);
            }
        }
    }
    out
}

/// Audit, parity, reduction and witness replay of both engines.
pub fn explore_laws(net: &Network, targets: &[TargetSpec]) -> LawReport {
    let mut r = LawReport::new("explore");
    let opts = SearchOptions { exhaustive: true, ..SearchOptions::default() };
    let (Ok(local), Ok(global)) = (explore_local_sync(net, None, &opts), explore_global(net, None, &opts)) else {
        r.skipped += 1;
        return r;
    };
    let audit = audit_local_sync(net, &local);
    r.check(audit.is_empty(), || format!("{}: audit {}", net.name, audit[0]));
    r.check(local.stats.stored <= global.stats.stored, || {
        format!("{}: local stores {} > global {}", net.name, local.stats.stored, global.stats.stored)
    });
    let early = SearchOptions::default();
    for t in targets {
        let (Ok(l), Ok(g)) = (explore_local_sync(net, Some(t), &early), explore_global(net, Some(t), &early)) else {
            r.skipped += 1;
            continue;
        };
        r.check(l.verdict == g.verdict, || format!("{}: verdicts differ ({} vs {})", net.name, l.verdict, g.verdict));
        let early_audit = audit_local_sync(net, &l);
        r.check(early_audit.is_empty(), || format!("{}: audit fails after early stop: {}", net.name, early_audit[0]));
        for w in [&l.witness, &g.witness].into_iter().flatten() {
            let replay = replay_witness(net, w);
            r.check(replay.is_ok(), || format!("{}: witness {} does not replay: {:?}", net.name, net.word_label(w), replay.err()));
        }
        if l.verdict == Verdict::Reachable {
            r.check(l.witness.is_some() && g.witness.is_some(), || "reachable without witness".into());
        }
    }
    r
}

/// Reflexivity, symmetry and transitivity of the region-style equivalence.
pub fn region_laws(rng: &mut ChaCha8Rng, cases: usize) -> LawReport {
    let mut r = LawReport::new("region equivalence");
    for _ in 0..cases {
        let dim = rng.gen_range(2..=5);
        let cmax = rng.gen_range(0..=3);
        // Small values so equivalent triples are actually drawn.
        let point = |rng: &mut ChaCha8Rng| {
            let mut v = Valuation::zeros(dim);
            for x in v.0.iter_mut().skip(1) {
                *x = Rational::new(rng.gen_range(0..=6), 2);
            }
            v
        };
        let (a, b, c) = (point(rng), point(rng), point(rng));
        for mode in [RegionMode::Literal, RegionMode::Refined] {
            r.check(region_equiv(&a, &a, cmax, mode), || format!("not reflexive on {a:?}"));
            r.check(region_equiv(&a, &b, cmax, mode) == region_equiv(&b, &a, cmax, mode), || "not symmetric".into());
            let chain = region_equiv(&a, &b, cmax, mode) && region_equiv(&b, &c, cmax, mode);
            r.check(!chain || region_equiv(&a, &c, cmax, mode), || format!("not transitive on {a:?} {b:?} {c:?}"));
        }
    }
    r
}

/// Zone/run agreement and run translation on `samples` random networks plus
/// the given ones.
pub fn run_laws(nets: &[Network], rng: &mut ChaCha8Rng, samples: usize) -> LawReport {
    let mut r = LawReport::new("runs");
    for net in nets {
        check_zone_runs(net, 4, rng, &mut r);
        r.merge(check_translations(net, samples, 6, rng));
    }
    for _ in 0..samples / 10 {
        let net = random_network(rng, RandomShape::default());
        check_zone_runs(&net, 3, rng, &mut r);
        r.merge(check_translations(&net, 10, 5, rng));
    }
    r
}
