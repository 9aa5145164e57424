//! Zone-graph exploration: breadth-first search with subsumption over either
//! global zones or local zones, statistics, DOT export and graph audit.

mod audit;
mod dot;
mod raw;
mod semantics;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::debug;

use crate::dbm::BOUND_LIMIT;
use crate::model::{Move, Network, StateVector, TargetSpec};
use crate::zones::{GlobalZone, LocalZone};

pub use audit::{audit_local_sync, AuditViolation};
pub use dot::export_dot;
pub use raw::{explore_local_raw, RawPath};
pub use semantics::{GlobalSemantics, LocalSyncSemantics};

pub type NodeId = usize;

/// Successor relation and subsumption test of one kind of zone graph.
pub trait Semantics {
    type Zone: Clone + Eq + Hash + fmt::Debug;
    /// What subsumption compares; computed once per node.
    type Key;

    fn initial(&self) -> Self::Zone;
    fn step(&self, zone: &Self::Zone, mv: &Move) -> Option<Self::Zone>;
    /// Key of a node when it is the candidate for being covered.
    fn candidate_key(&self, zone: &Self::Zone) -> Self::Key;
    /// Key of a node when it is the one covering (abstraction applied).
    fn covering_key(&self, zone: &Self::Zone) -> Self::Key;
    fn is_covered_by(&self, candidate: &Self::Key, covering: &Self::Key) -> bool;
    fn describe(&self, zone: &Self::Zone) -> Vec<String>;
    /// Largest constant magnitude in the zone, for overflow detection.
    fn magnitude(&self, zone: &Self::Zone) -> i64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Reachable,
    Unreachable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Reachable => "reachable",
            Verdict::Unreachable => "unreachable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Uncovered,
    CoveredBy(NodeId),
}

#[derive(Clone, Debug)]
pub struct Node<Z> {
    pub q: StateVector,
    pub zone: Z,
    pub status: Status,
    pub parent: Option<(NodeId, Move)>,
    /// Transition edges, in generation order. May point at earlier nodes
    /// when a successor was structurally equal to a stored one.
    pub children: Vec<(Move, NodeId)>,
    pub expanded: bool,
}

/// The explored graph. Node 0 is the root.
#[derive(Clone, Debug)]
pub struct SearchGraph<Z> {
    pub nodes: Vec<Node<Z>>,
}

impl<Z> SearchGraph<Z> {
    pub fn node(&self, id: NodeId) -> &Node<Z> {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Moves along parent edges from the root to `id`.
    pub fn path_to(&self, mut id: NodeId) -> Vec<Move> {
        let mut word = Vec::new();
        while let Some((parent, mv)) = &self.nodes[id].parent {
            word.push(mv.clone());
            id = *parent;
        }
        word.reverse();
        word
    }

    /// Follow covered-by links to the node that finally covers `id`.
    pub fn final_cover(&self, mut id: NodeId) -> NodeId {
        let mut hops = 0;
        while let Status::CoveredBy(next) = self.nodes[id].status {
            id = next;
            hops += 1;
            assert!(hops <= self.nodes.len(), "cycle in covered-by links");
        }
        id
    }

    pub fn uncovered_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.status == Status::Uncovered).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub verdict: Verdict,
    /// Root plus every non-empty successor generated.
    pub visited: u64,
    /// Nodes inserted in the store as uncovered.
    pub stored: u64,
    pub frontier_max: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SearchResult<Z> {
    pub verdict: Verdict,
    /// Moves from the initial state to a target state.
    pub witness: Option<Vec<Move>>,
    pub stats: Stats,
    pub graph: SearchGraph<Z>,
    /// Whether every uncovered node was expanded.
    pub complete: bool,
    pub retro_cover: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExploreError {
    #[error("zone constants exceeded {limit} after {visited} nodes")]
    BoundOverflow { limit: i64, visited: u64 },
    #[error("timeout after {seconds:.1}s ({visited} nodes visited)")]
    Timeout { seconds: f64, visited: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Keep exploring after the target is found.
    pub exhaustive: bool,
    /// Mark stored nodes covered when a newcomer subsumes them.
    pub retro_cover: bool,
    pub timeout: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { exhaustive: false, retro_cover: true, timeout: None }
    }
}

struct Stored<K> {
    id: NodeId,
    candidate: K,
    covering: K,
}

/// Breadth-first search with subsumption.
pub fn search<S: Semantics>(
    sem: &S,
    net: &Network,
    target: Option<&TargetSpec>,
    opts: &SearchOptions,
) -> Result<SearchResult<S::Zone>, ExploreError> {
    let started = Instant::now();
    let deadline = opts.timeout.map(|t| started + t);
    let mut graph = SearchGraph { nodes: Vec::new() };
    let mut store: HashMap<StateVector, Vec<Stored<S::Key>>> = HashMap::new();
    let mut frontier: VecDeque<NodeId> = VecDeque::new();
    let mut stats = Stats { verdict: Verdict::Unreachable, visited: 1, stored: 1, frontier_max: 1, seconds: 0.0 };
    let mut witness = None;

    let q0 = net.initial_state();
    let z0 = sem.initial();
    store.entry(q0.clone()).or_default().push(Stored {
        id: 0,
        candidate: sem.candidate_key(&z0),
        covering: sem.covering_key(&z0),
    });
    let root_hit = target.is_some_and(|t| t.matches(&q0));
    graph.nodes.push(Node { q: q0, zone: z0, status: Status::Uncovered, parent: None, children: Vec::new(), expanded: false });
    frontier.push_back(0);
    if root_hit {
        stats.verdict = Verdict::Reachable;
        witness = Some(Vec::new());
    }
    let mut stop = root_hit && !opts.exhaustive;
    let mut interrupted = false;

    while !stop {
        let Some(id) = frontier.pop_front() else { break };
        if graph.nodes[id].status != Status::Uncovered {
            continue;
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Err(ExploreError::Timeout { seconds: started.elapsed().as_secs_f64(), visited: stats.visited });
            }
        }
        let q = graph.nodes[id].q.clone();
        for mv in net.successor_moves(&q) {
            let Some(zone) = sem.step(&graph.nodes[id].zone, &mv) else { continue };
            if sem.magnitude(&zone) > BOUND_LIMIT {
                return Err(ExploreError::BoundOverflow { limit: BOUND_LIMIT, visited: stats.visited });
            }
            stats.visited += 1;
            let q2 = net.apply(&q, &mv);
            let hit = target.is_some_and(|t| t.matches(&q2));
            if hit && witness.is_none() {
                stats.verdict = Verdict::Reachable;
                let mut word = graph.path_to(id);
                word.push(mv.clone());
                witness = Some(word);
            }

            let bucket = store.entry(q2.clone()).or_default();
            if let Some(existing) = bucket.iter().find(|s| graph.nodes[s.id].zone == zone) {
                let existing = existing.id;
                graph.nodes[id].children.push((mv, existing));
            } else {
                let candidate = sem.candidate_key(&zone);
                let new_id = graph.nodes.len();
                let cover = bucket.iter().find(|s| sem.is_covered_by(&candidate, &s.covering)).map(|s| s.id);
                let status = match cover {
                    Some(c) => Status::CoveredBy(c),
                    None => {
                        let covering = sem.covering_key(&zone);
                        if opts.retro_cover {
                            // The root stays uncovered so the graph keeps its entry point.
                            bucket.retain(|s| {
                                let covered = s.id != 0 && sem.is_covered_by(&s.candidate, &covering);
                                if covered {
                                    graph.nodes[s.id].status = Status::CoveredBy(new_id);
                                }
                                !covered
                            });
                        }
                        bucket.push(Stored { id: new_id, candidate, covering });
                        stats.stored += 1;
                        frontier.push_back(new_id);
                        Status::Uncovered
                    }
                };
                graph.nodes.push(Node {
                    q: q2,
                    zone,
                    status,
                    parent: Some((id, mv.clone())),
                    children: Vec::new(),
                    expanded: false,
                });
                graph.nodes[id].children.push((mv, new_id));
            }
            if hit && !opts.exhaustive {
                stop = true;
                break;
            }
        }
        // A node cut short by an early stop counts as unexpanded.
        graph.nodes[id].expanded = !stop;
        interrupted |= stop;
        stats.frontier_max = stats.frontier_max.max(frontier.len() as u64);
    }

    let complete = !interrupted && frontier.iter().all(|&id| graph.nodes[id].status != Status::Uncovered);
    stats.seconds = started.elapsed().as_secs_f64();
    debug!(visited = stats.visited, stored = stats.stored, complete, "search finished");
    Ok(SearchResult { verdict: stats.verdict, witness, stats, graph, complete, retro_cover: opts.retro_cover })
}

/// Global zone graph with subsumption on extrapolated clock zones.
pub fn explore_global(
    net: &Network,
    target: Option<&TargetSpec>,
    opts: &SearchOptions,
) -> Result<SearchResult<GlobalZone>, ExploreError> {
    search(&GlobalSemantics::new(net), net, target, opts)
}

/// Local zone graph with subsumption on synchronized projections.
pub fn explore_local_sync(
    net: &Network,
    target: Option<&TargetSpec>,
    opts: &SearchOptions,
) -> Result<SearchResult<LocalZone>, ExploreError> {
    search(&LocalSyncSemantics::new(net), net, target, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Global,
    Local,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Global => "global",
            Algorithm::Local => "local",
        })
    }
}

/// Engine-independent summary of a run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stats: Stats,
    pub witness: Option<Vec<Move>>,
    pub dot: String,
}

/// Run either engine and keep what the front end needs.
pub fn run(
    net: &Network,
    algorithm: Algorithm,
    target: Option<&TargetSpec>,
    opts: &SearchOptions,
    want_dot: bool,
) -> Result<Outcome, ExploreError> {
    match algorithm {
        Algorithm::Global => {
            let sem = GlobalSemantics::new(net);
            let r = search(&sem, net, target, opts)?;
            let dot = if want_dot { export_dot(net, &sem, &r.graph) } else { String::new() };
            Ok(Outcome { stats: r.stats, witness: r.witness, dot })
        }
        Algorithm::Local => {
            let sem = LocalSyncSemantics::new(net);
            let r = search(&sem, net, target, opts)?;
            let dot = if want_dot { export_dot(net, &sem, &r.graph) } else { String::new() };
            Ok(Outcome { stats: r.stats, witness: r.witness, dot })
        }
    }
}
