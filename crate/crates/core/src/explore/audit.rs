use std::fmt;

use crate::model::Network;
use crate::zones::{LocalZone, ZoneSpace};

use super::{NodeId, SearchResult, Status};

/// A structural defect of a finished local sync graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    /// Condition label, `C0`..`C4`.
    pub condition: &'static str,
    pub node: NodeId,
    pub detail: String,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at node {}: {}", self.condition, self.node, self.detail)
    }
}

/// Check the local sync graph conditions on a search result:
///
/// - C0: every cover link points at an existing node;
/// - C1: node 0 is the uncovered initial node;
/// - C2: parent links lead back to the root along genuine local steps;
/// - C3: expanded uncovered nodes carry every non-empty successor, and
///   every uncovered node is expanded when the search ran to completion;
/// - C4: each covered node is sync-subsumed by the uncovered node its
///   cover chain ends in, and has no successors unless it was covered
///   after its own expansion (retro-cover mode only).
pub fn audit_local_sync(net: &Network, result: &SearchResult<LocalZone>) -> Vec<AuditViolation> {
    let space = ZoneSpace::new(net);
    let graph = &result.graph;
    let mut out = Vec::new();
    let mut fail = |condition, node, detail: String| out.push(AuditViolation { condition, node, detail });

    if graph.is_empty() {
        fail("C1", 0, "graph has no root".into());
        return out;
    }
    let root = graph.node(0);
    if root.q != net.initial_state() || root.zone != space.initial_local_zone() || root.parent.is_some() {
        fail("C1", 0, "root is not the initial node".into());
    }
    if root.status != Status::Uncovered {
        fail("C1", 0, "root is covered".into());
    }

    for (id, node) in graph.nodes.iter().enumerate() {
        if let Status::CoveredBy(c) = node.status {
            if c >= graph.len() || c == id {
                fail("C0", id, format!("invalid cover link to {c}"));
                continue;
            }
        }

        if id != 0 {
            match &node.parent {
                None => fail("C2", id, "no parent".into()),
                Some((p, mv)) => {
                    if *p >= id {
                        fail("C2", id, format!("parent {p} created after child"));
                    }
                    let parent = graph.node(*p);
                    if !parent.children.iter().any(|(m, c)| m == mv && *c == id) {
                        fail("C2", id, "parent does not list this node".into());
                    }
                    if net.apply(&parent.q, mv) != node.q || space.local_step(net, &parent.zone, mv).as_ref() != Some(&node.zone) {
                        fail("C2", id, "parent edge is not a local step".into());
                    }
                }
            }
        }

        match node.status {
            Status::Uncovered => {
                if !node.expanded {
                    if result.complete {
                        fail("C3", id, "uncovered node never expanded".into());
                    }
                    continue;
                }
                for mv in net.successor_moves(&node.q) {
                    let Some(zone) = space.local_step(net, &node.zone, &mv) else { continue };
                    let q2 = net.apply(&node.q, &mv);
                    let present = node
                        .children
                        .iter()
                        .any(|(m, c)| *m == mv && graph.node(*c).q == q2 && graph.node(*c).zone == zone);
                    if !present {
                        fail("C3", id, format!("missing successor on {}", net.move_label(&mv)));
                    }
                }
            }
            Status::CoveredBy(_) => {
                let fin = graph.final_cover(id);
                let coverer = graph.node(fin);
                if coverer.q != node.q {
                    fail("C4", id, format!("covered by node {fin} with a different state"));
                } else if !space.sync_subsume(&node.zone, &coverer.zone) {
                    fail("C4", id, format!("not subsumed by final cover {fin}"));
                }
                let may_have_children = result.retro_cover && (node.expanded || !result.complete);
                if !node.children.is_empty() && !may_have_children {
                    fail("C4", id, "covered node has successors".into());
                }
            }
        }
    }
    out
}
