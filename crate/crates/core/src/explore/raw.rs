use crate::model::{Move, Network, StateVector};
use crate::zones::{LocalZone, ZoneSpace};

/// One path of the unabstracted local zone graph.
#[derive(Clone, Debug)]
pub struct RawPath {
    pub word: Vec<Move>,
    pub q: StateVector,
    pub zone: LocalZone,
}

/// Every local-zone-graph path of length at most `depth` from the initial
/// node, with its end node. Paths through empty zones are cut.
pub fn explore_local_raw(net: &Network, depth: usize) -> Vec<RawPath> {
    let space = ZoneSpace::new(net);
    let mut out = vec![RawPath { word: Vec::new(), q: net.initial_state(), zone: space.initial_local_zone() }];
    let mut layer_start = 0;
    for _ in 0..depth {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            let path = out[i].clone();
            for mv in net.successor_moves(&path.q) {
                if let Some(zone) = space.local_step(net, &path.zone, &mv) {
                    let q = net.apply(&path.q, &mv);
                    let mut word = path.word.clone();
                    word.push(mv);
                    out.push(RawPath { word, q, zone });
                }
            }
        }
        layer_start = layer_end;
    }
    out
}
