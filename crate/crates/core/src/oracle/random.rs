//! Seeded random networks and discrete walks for property checks.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::model::{parse_network, Move, Network};

/// Shape limits of generated networks.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub min_processes: usize,
    pub max_processes: usize,
    pub max_transitions: usize,
    pub max_constant: u32,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { min_processes: 2, max_processes: 3, max_transitions: 6, max_constant: 4 }
    }
}

/// Source text of a random acyclic network. Every transition goes from a
/// lower to a higher state index; actions are either private or drawn from
/// a small shared pool.
pub fn random_network_source(rng: &mut ChaCha8Rng, shape: RandomShape) -> String {
    let k = rng.gen_range(shape.min_processes..=shape.max_processes);
    let shared = ["s0", "s1"];
    let relations = ["<", "<=", "==", ">=", ">"];
    let mut out = String::from("system random\n");
    for p in 0..k {
        writeln!(out, "process P{p}").unwrap();
    }
    let mut clocks = Vec::new();
    for p in 0..k {
        let n = rng.gen_range(1..=2);
        let names: Vec<String> = (0..n).map(|i| format!("x{p}_{i}")).collect();
        for c in &names {
            writeln!(out, "clock P{p} {c}").unwrap();
        }
        clocks.push(names);
    }
    for (p, own) in clocks.iter().enumerate() {
        let states = rng.gen_range(2..=4);
        writeln!(out, "state P{p} s{p}_0 initial").unwrap();
        for s in 1..states {
            writeln!(out, "state P{p} s{p}_{s}").unwrap();
        }
        let count = rng.gen_range(1..=shape.max_transitions);
        for j in 0..count {
            let src = rng.gen_range(0..states - 1);
            let tgt = rng.gen_range(src + 1..states);
            let action = if rng.gen_bool(0.35) { shared.choose(rng).unwrap().to_string() } else { format!("l{p}_{j}") };
            write!(out, "trans P{p} s{p}_{src} s{p}_{tgt} {action}").unwrap();
            let atoms = rng.gen_range(0..=2);
            if atoms > 0 {
                let parts: Vec<String> = (0..atoms)
                    .map(|_| {
                        let c = own.choose(rng).unwrap();
                        let r = relations.choose(rng).unwrap();
                        format!("{c}{r}{}", rng.gen_range(0..=shape.max_constant))
                    })
                    .collect();
                write!(out, " guard{{{}}}", parts.join("&&")).unwrap();
            }
            let resets: Vec<&String> = own.iter().filter(|_| rng.gen_bool(0.4)).collect();
            if !resets.is_empty() {
                let names: Vec<&str> = resets.iter().map(|s| s.as_str()).collect();
                write!(out, " reset{{{}}}", names.join(",")).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn random_network(rng: &mut ChaCha8Rng, shape: RandomShape) -> Network {
    let src = random_network_source(rng, shape);
    parse_network(&src).unwrap_or_else(|e| panic!("generator produced an invalid network: {e}\n{src}"))
}

/// A discretely executable word of length at most `max_len` from the
/// initial state, ignoring timing.
pub fn random_walk(net: &Network, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Move> {
    let len = rng.gen_range(0..=max_len);
    let mut q = net.initial_state();
    let mut word = Vec::new();
    for _ in 0..len {
        let moves = net.successor_moves(&q);
        let Some(mv) = moves.choose(rng) else { break };
        q = net.apply(&q, mv);
        word.push(mv.clone());
    }
    word
}

/// Every discretely executable word of length at most `max_len`.
pub fn discrete_words(net: &Network, max_len: usize) -> Vec<Vec<Move>> {
    let mut out = vec![(Vec::new(), net.initial_state())];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            let (word, q) = out[i].clone();
            for mv in net.successor_moves(&q) {
                let mut w = word.clone();
                let next = net.apply(&q, &mv);
                w.push(mv);
                out.push((w, next));
            }
        }
        start = end;
    }
    out.into_iter().map(|(w, _)| w).collect()
}
