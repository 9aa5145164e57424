use crate::dbm::VariableLayout;
use crate::model::{Move, Network};
use crate::zones::{ClockZone, GlobalZone, LocalZone, ZoneSpace};

use super::Semantics;

/// Global zones; subsumption `Z ⊆ extra_m(Z')` on clock values.
pub struct GlobalSemantics<'a> {
    net: &'a Network,
    space: ZoneSpace,
    layout: VariableLayout,
}

impl<'a> GlobalSemantics<'a> {
    pub fn new(net: &'a Network) -> Self {
        let space = ZoneSpace::new(net);
        let layout = space.global_layout();
        GlobalSemantics { net, space, layout }
    }

    pub fn space(&self) -> &ZoneSpace {
        &self.space
    }
}

impl Semantics for GlobalSemantics<'_> {
    type Zone = GlobalZone;
    type Key = ClockZone;

    fn initial(&self) -> GlobalZone {
        self.space.initial_global_zone()
    }

    fn step(&self, zone: &GlobalZone, mv: &Move) -> Option<GlobalZone> {
        self.space.global_step(self.net, zone, mv)
    }

    fn candidate_key(&self, zone: &GlobalZone) -> ClockZone {
        self.space.to_clock_zone(zone)
    }

    fn covering_key(&self, zone: &GlobalZone) -> ClockZone {
        self.space.extra_m(&self.space.to_clock_zone(zone))
    }

    fn is_covered_by(&self, candidate: &ClockZone, covering: &ClockZone) -> bool {
        covering.includes(candidate)
    }

    fn describe(&self, zone: &GlobalZone) -> Vec<String> {
        zone.dbm().describe(&self.layout)
    }

    fn magnitude(&self, zone: &GlobalZone) -> i64 {
        zone.dbm().max_abs_constant()
    }
}

/// Local zones; subsumption compares synchronized projections.
pub struct LocalSyncSemantics<'a> {
    net: &'a Network,
    space: ZoneSpace,
    layout: VariableLayout,
}

impl<'a> LocalSyncSemantics<'a> {
    pub fn new(net: &'a Network) -> Self {
        let space = ZoneSpace::new(net);
        let layout = space.local_layout();
        LocalSyncSemantics { net, space, layout }
    }

    pub fn space(&self) -> &ZoneSpace {
        &self.space
    }
}

impl Semantics for LocalSyncSemantics<'_> {
    type Zone = LocalZone;
    /// `None` when the zone has no synchronized valuation.
    type Key = Option<ClockZone>;

    fn initial(&self) -> LocalZone {
        self.space.initial_local_zone()
    }

    fn step(&self, zone: &LocalZone, mv: &Move) -> Option<LocalZone> {
        self.space.local_step(self.net, zone, mv)
    }

    fn candidate_key(&self, zone: &LocalZone) -> Option<ClockZone> {
        self.space.sync_clock_zone(zone)
    }

    fn covering_key(&self, zone: &LocalZone) -> Option<ClockZone> {
        self.space.sync_clock_zone(zone).map(|c| self.space.extra_m(&c))
    }

    fn is_covered_by(&self, candidate: &Option<ClockZone>, covering: &Option<ClockZone>) -> bool {
        match (candidate, covering) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(c), Some(e)) => e.includes(c),
        }
    }

    fn describe(&self, zone: &LocalZone) -> Vec<String> {
        zone.dbm().describe(&self.layout)
    }

    fn magnitude(&self, zone: &LocalZone) -> i64 {
        zone.dbm().max_abs_constant()
    }
}
