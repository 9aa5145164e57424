//! Brute-force aggregated zones: the union of the global zones reached by
//! every interleaving of a word, compared against one local-zone path.

use serde::Serialize;

use super::traces::{trace_class, TraceBoundExceeded, DEFAULT_TRACE_BOUND};
use crate::dbm::Dbm;
use crate::model::{Move, Network, StateVector};
use crate::zones::{GlobalZone, ZoneSpace};

/// A finite union of same-layout zones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Federation {
    pub dim: usize,
    pub members: Vec<Dbm>,
}

impl Federation {
    pub fn empty(dim: usize) -> Federation {
        Federation { dim, members: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, d: Dbm) {
        assert_eq!(d.dim(), self.dim, "layout mismatch");
        assert!(!d.is_empty(), "federation members are non-empty");
        if !self.members.contains(&d) {
            self.members.push(d);
        }
    }

    /// `zone ∖ ⋃ members` as disjoint pieces.
    pub fn subtract_from(&self, zone: &Dbm) -> Vec<Dbm> {
        let mut pieces = vec![zone.clone()];
        for m in &self.members {
            pieces = pieces.iter().flat_map(|p| p.subtract(m)).collect();
            if pieces.is_empty() {
                break;
            }
        }
        pieces
    }

    /// Whether the union equals `zone` exactly.
    pub fn equals_zone(&self, zone: &Dbm) -> bool {
        self.members.iter().all(|m| zone.includes(m)) && self.subtract_from(zone).is_empty()
    }
}

/// Global zone reached along `word` from `(q, z)`, if non-empty.
pub fn global_path(net: &Network, space: &ZoneSpace, q: &StateVector, z: &GlobalZone, word: &[Move]) -> Option<GlobalZone> {
    let mut q = q.clone();
    let mut z = z.clone();
    for mv in word {
        if net.enabled_sync_sets(&q, mv.action).iter().all(|m| m != mv) {
            return None;
        }
        z = space.global_step(net, &z, mv)?;
        q = net.apply(&q, mv);
    }
    Some(z)
}

/// Union of the end zones of all interleavings of `u` from `(q, z)`.
pub fn mz_bruteforce(net: &Network, q: &StateVector, z: &GlobalZone, u: &[Move]) -> Result<Federation, TraceBoundExceeded> {
    let space = ZoneSpace::new(net);
    let mut fed = Federation::empty(space.global_dim());
    for w in trace_class(u, DEFAULT_TRACE_BOUND)? {
        if let Some(end) = global_path(net, &space, q, z, &w) {
            fed.push(end.into_dbm());
        }
    }
    Ok(fed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum AggregationVerdict {
    Pass,
    Fail { reason: String },
}

impl AggregationVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AggregationVerdict::Pass)
    }
}

/// Compare the synchronized end zone of the local path along `u` with the
/// brute-force union over the interleavings of `u`, from the initial node.
pub fn check_aggregation_theorem(net: &Network, u: &[Move]) -> Result<AggregationVerdict, TraceBoundExceeded> {
    let space = ZoneSpace::new(net);
    let q0 = net.initial_state();
    let z0 = space.initial_global_zone();
    let fed = mz_bruteforce(net, &q0, &z0, u)?;

    let mut local = Some(space.local_elapse(&space.local_of_global(&z0)));
    let mut q = q0;
    for mv in u {
        let Some(z) = &local else { break };
        if net.enabled_sync_sets(&q, mv.action).iter().all(|m| m != mv) {
            local = None;
            break;
        }
        local = space.local_step(net, z, mv);
        q = net.apply(&q, mv);
    }
    let synced = local.as_ref().and_then(|z| space.global_of_sync(z));
    let label = net.word_label(u);
    let verdict = match synced {
        None if fed.is_empty() => AggregationVerdict::Pass,
        None => AggregationVerdict::Fail {
            reason: format!("{label}: local path has no synchronized valuation but {} interleavings reach a zone", fed.members.len()),
        },
        Some(_) if fed.is_empty() => AggregationVerdict::Fail {
            reason: format!("{label}: synchronized local zone is non-empty but no interleaving is feasible"),
        },
        Some(g) => {
            let layout = space.global_layout();
            if let Some(m) = fed.members.iter().find(|m| !g.dbm().includes(m)) {
                AggregationVerdict::Fail {
                    reason: format!("{label}: interleaving zone {:?} not included in {:?}", m.describe(&layout), g.dbm().describe(&layout)),
                }
            } else {
                let rest = fed.subtract_from(g.dbm());
                if rest.is_empty() {
                    AggregationVerdict::Pass
                } else {
                    AggregationVerdict::Fail {
                        reason: format!("{label}: {:?} is not covered by any interleaving", rest[0].describe(&layout)),
                    }
                }
            }
        }
    };
    Ok(verdict)
}
