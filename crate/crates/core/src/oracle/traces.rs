//! Trace equivalence: permutations of adjacent moves with disjoint domains.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::Move;

pub const DEFAULT_TRACE_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("word of length {len} exceeds the trace class bound {bound}")]
pub struct TraceBoundExceeded {
    pub len: usize,
    pub bound: usize,
}

/// Every word equivalent to `u`, in lexicographic order of moves.
pub fn trace_class(u: &[Move], bound: usize) -> Result<Vec<Vec<Move>>, TraceBoundExceeded> {
    if u.len() > bound {
        return Err(TraceBoundExceeded { len: u.len(), bound });
    }
    let mut seen: BTreeSet<Vec<Move>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.to_vec());
    queue.push_back(u.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if w[i].depends_on(&w[i + 1]) {
                continue;
            }
            let mut swapped = w.clone();
            swapped.swap(i, i + 1);
            if seen.insert(swapped.clone()) {
                queue.push_back(swapped);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Equivalence by per-process projections, which characterizes trace
/// equivalence when independence means disjoint process sets.
pub fn equivalent(u: &[Move], w: &[Move], num_processes: usize) -> bool {
    if u.len() != w.len() {
        return false;
    }
    let proj = |word: &[Move], p: usize| -> Vec<Move> {
        word.iter().filter(|m| m.processes().any(|q| q == p)).cloned().collect()
    };
    let mut a: Vec<Move> = u.to_vec();
    let mut b: Vec<Move> = w.to_vec();
    a.sort();
    b.sort();
    a == b && (0..num_processes).all(|p| proj(u, p) == proj(w, p))
}
