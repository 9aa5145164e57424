//! Batch drivers over the oracle checks, shared by the CLI, the acceptance
//! target and the benches.

use serde::Serialize;

use super::aggregation::check_aggregation_theorem;
use super::laws;
use super::minea::{demo_minea_maximization_flaw, demo_region_flaw};
use super::random::{discrete_words, random_network, RandomShape};
use super::translation::LawReport;
use crate::batch::{batch_map, item_rng, Execution};
use crate::bench::{generate, BenchSpec, Family};
use crate::model::{corpus, parse_network, Network};

/// Longest word checked on random networks.
pub const RANDOM_WORD_LEN: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<LawReport>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<LawReport>) -> SuiteReport {
        let passed = checks.iter().all(LawReport::passed);
        SuiteReport { suite: suite.to_string(), passed, checks }
    }
}

fn aggregation_over(net: &Network, words: &[Vec<crate::model::Move>], report: &mut LawReport) {
    for u in words {
        match check_aggregation_theorem(net, u) {
            Ok(v) => report.check(v.passed(), || format!("{}: {v:?}", net.name)),
            Err(e) => report.check(false, || format!("{}: {e}", net.name)),
        }
    }
}

/// Aggregated-zone checks on the two figures and on `count` random
/// acyclic networks with every word of length at most five.
pub fn aggregation_suite(count: usize, seed: u64, exec: Execution) -> SuiteReport {
    let mut figures = LawReport::new("aggregation: figures");
    let fig1 = corpus::fig1();
    let ab: Vec<_> = discrete_words(&fig1, 2).into_iter().filter(|w| w.len() == 2).collect();
    aggregation_over(&fig1, &ab, &mut figures);
    let fig2 = corpus::fig2();
    aggregation_over(&fig2, &discrete_words(&fig2, 4), &mut figures);

    let seeds: Vec<usize> = (0..count).collect();
    let per_net = batch_map(&seeds, exec, |i, _| {
        let mut rng = item_rng(seed, i);
        let net = random_network(&mut rng, RandomShape::default());
        let mut r = LawReport::new("");
        aggregation_over(&net, &discrete_words(&net, RANDOM_WORD_LEN), &mut r);
        r
    });
    let mut random = LawReport::new(format!("aggregation: {count} random networks"));
    for r in per_net {
        random.merge(r);
    }
    SuiteReport::new("aggregation", vec![figures, random])
}

/// Zone/run agreement, run translation and independence on the corpus and
/// on random networks; `count` random walks per corpus network.
pub fn runs_suite(count: usize, seed: u64) -> SuiteReport {
    let mut rng = item_rng(seed, 0);
    let nets: Vec<Network> = corpus::all().into_iter().map(|(_, n)| n).collect();
    let r = if count == 0 { LawReport::new("runs") } else { laws::run_laws(&nets, &mut rng, count) };
    SuiteReport::new("runs", vec![r])
}

/// The two unsound-abstraction reproductions.
pub fn flaws_suite() -> SuiteReport {
    let mut maxim = LawReport::new("maximization flaw");
    let demo = demo_minea_maximization_flaw();
    maxim.check(demo.is_ok(), || demo.as_ref().err().cloned().unwrap_or_default());
    let mut region = LawReport::new("region equivalence flaw");
    let r = demo_region_flaw();
    region.check(r.passed, || format!("{r:?}"));
    SuiteReport::new("flaws", vec![maxim, region])
}

/// The corpus plus the smallest instance of every benchmark family.
pub fn test_networks() -> Vec<(String, Network)> {
    let mut nets: Vec<(String, Network)> = corpus::all().into_iter().map(|(n, net)| (n.to_string(), net)).collect();
    for family in Family::ALL {
        let (text, _) = generate(BenchSpec { family, size: 2 }).expect("size 2 is supported");
        let net = parse_network(&text).expect("generated models parse");
        nets.push((format!("{family}2"), net));
    }
    nets
}

/// Commutativity and trace invariance of local zones on every test
/// network, over all words up to `depth`.
pub fn commutativity_suite(depth: usize, exec: Execution) -> SuiteReport {
    let nets = test_networks();
    let checks = batch_map(&nets, exec, |_, (name, net)| {
        let mut r = laws::commutativity_laws(net, depth);
        r.name = format!("commutativity: {name}");
        r
    });
    SuiteReport::new("commutativity", checks)
}

/// DBM, zone, exploration and oracle property suites under one seed.
pub fn property_suite(seed: u64, exec: Execution) -> SuiteReport {
    let mut rng = item_rng(seed, 0);
    let mut checks = vec![laws::dbm_laws(&mut rng, 300), laws::region_laws(&mut rng, 500)];
    let mut nets: Vec<Network> = test_networks().into_iter().map(|(_, n)| n).collect();
    for i in 0..20 {
        nets.push(random_network(&mut item_rng(seed, 1000 + i), RandomShape::default()));
    }
    let zone_and_explore = batch_map(&nets, exec, |i, net| {
        let mut rng = item_rng(seed, 2000 + i);
        let mut z = laws::zone_laws(net, &mut rng, 30);
        z.merge(laws::commutativity_laws(net, 4));
        (z, laws::explore_laws(net, &laws::single_state_targets(net)))
    });
    let mut zones = LawReport::new("zones");
    let mut explore = LawReport::new("explore");
    for (z, e) in zone_and_explore {
        zones.merge(z);
        explore.merge(e);
    }
    checks.push(zones);
    checks.push(explore);
    let corpus_nets: Vec<Network> = corpus::all().into_iter().map(|(_, n)| n).collect();
    checks.push(laws::run_laws(&corpus_nets, &mut rng, 100));
    SuiteReport::new("properties", checks)
}
