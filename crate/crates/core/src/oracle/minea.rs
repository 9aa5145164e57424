//! Reproductions of two unsound abstractions of local zones: a region-style
//! equivalence that is not preserved by local delays, and zone maximization
//! that makes an unreachable state reachable.

use serde::Serialize;

use super::traces::equivalent;
use super::valuation::{rat, Rational, Valuation};
use crate::dbm::{Bound, Dbm};
use crate::explore::{explore_global, explore_local_sync, search, SearchOptions, Semantics, Verdict};
use crate::model::{corpus, Move, Network, TargetSpec};
use crate::zones::{LocalZone, ZoneSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionMode {
    /// Floors of all pairwise differences, as literally defined.
    Literal,
    /// Floors plus whether the difference is an integer.
    Refined,
}

#[derive(PartialEq, Eq)]
enum DiffClass {
    Above,
    Below,
    Exact(i64, bool),
}

fn classify(d: Rational, cmax: i64, mode: RegionMode) -> DiffClass {
    let f = d.floor().to_integer();
    if f > cmax {
        DiffClass::Above
    } else if f < -cmax {
        DiffClass::Below
    } else {
        let integral = mode == RegionMode::Refined && d.is_integer();
        DiffClass::Exact(f, integral)
    }
}

/// Region-style equivalence over all ordered pairs of non-zero variables
/// (offsets and reference clocks alike).
pub fn region_equiv(v1: &Valuation, v2: &Valuation, cmax: i64, mode: RegionMode) -> bool {
    assert_eq!(v1.0.len(), v2.0.len(), "layout mismatch");
    let n = v1.0.len();
    (1..n).all(|a| {
        (1..n).all(|b| a == b || classify(v1.get(a) - v1.get(b), cmax, mode) == classify(v2.get(a) - v2.get(b), cmax, mode))
    })
}

/// `{k/2 | 0 ≤ k ≤ 16} ∪ {9}`.
pub fn delay_grid() -> Vec<Rational> {
    let mut g: Vec<Rational> = (0..=16).map(|k| Rational::new(k, 2)).collect();
    g.push(rat(9));
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionFlawReport {
    pub cmax: i64,
    pub start_equivalent_literal: bool,
    pub start_equivalent_refined: bool,
    pub grid_size: usize,
    /// Delays `δ'` with `v1 +₁ 2 ≃ v2 +₁ δ'`, as strings.
    pub admissible_literal: Vec<String>,
    pub admissible_refined: Vec<String>,
    pub passed: bool,
}

/// Two equivalent valuations whose successors under a local delay of one
/// process have no equivalent counterpart.
pub fn demo_region_flaw() -> RegionFlawReport {
    // Two processes with one clock each: layout 0, t1, t2, x~, y~.
    let space = ZoneSpace::new(&corpus::fig1());
    let cmax = 3;
    let mk = |t2: i64| {
        let mut v = Valuation::zeros(space.local_dim());
        v.0[space.local_ref(1)] = rat(t2);
        v
    };
    let v1 = mk(4);
    let v2 = mk(5);
    let delay = |v: &Valuation, d: Rational| {
        let mut w = v.clone();
        w.0[space.local_ref(0)] += d;
        w
    };
    let moved = delay(&v1, rat(2));
    let admissible = |mode| -> Vec<String> {
        delay_grid()
            .into_iter()
            .filter(|&d| region_equiv(&moved, &delay(&v2, d), cmax, mode))
            .map(|d| d.to_string())
            .collect()
    };
    let start_equivalent_literal = region_equiv(&v1, &v2, cmax, RegionMode::Literal);
    let start_equivalent_refined = region_equiv(&v1, &v2, cmax, RegionMode::Refined);
    let admissible_literal = admissible(RegionMode::Literal);
    let admissible_refined = admissible(RegionMode::Refined);
    let passed = start_equivalent_literal && start_equivalent_refined && admissible_refined.is_empty();
    RegionFlawReport {
        cmax,
        start_equivalent_literal,
        start_equivalent_refined,
        grid_size: delay_grid().len(),
        admissible_literal,
        admissible_refined,
        passed,
    }
}

/// Widen every entry of the canonical input once: bounds above `cmax`
/// become infinite, bounds below `−cmax` become `< −cmax`.
pub fn maximize_zone(z: &LocalZone, cmax: i64) -> LocalZone {
    let src = z.dbm();
    let n = src.dim();
    let mut d = src.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(c) = src.get(i, j).value() {
                if c > cmax {
                    d.set(i, j, Bound::INFINITY);
                } else if c < -cmax {
                    d.set(i, j, Bound::strict(-cmax));
                }
            }
        }
    }
    LocalZone::from_raw(d).expect("widening cannot empty a zone")
}

/// Local zone graph where every zone is maximized and termination uses
/// plain inclusion between maximized zones.
pub struct MaximizedSemantics<'a> {
    net: &'a Network,
    space: ZoneSpace,
    cmax: i64,
}

impl<'a> MaximizedSemantics<'a> {
    pub fn new(net: &'a Network) -> Self {
        let space = ZoneSpace::new(net);
        let cmax = space.max_constants().c_max().map_or(0, i64::from);
        MaximizedSemantics { net, space, cmax }
    }
}

impl Semantics for MaximizedSemantics<'_> {
    type Zone = LocalZone;
    type Key = LocalZone;

    fn initial(&self) -> LocalZone {
        maximize_zone(&self.space.initial_local_zone(), self.cmax)
    }

    fn step(&self, zone: &LocalZone, mv: &Move) -> Option<LocalZone> {
        self.space.local_step(self.net, zone, mv).map(|z| maximize_zone(&z, self.cmax))
    }

    fn candidate_key(&self, zone: &LocalZone) -> LocalZone {
        zone.clone()
    }

    fn covering_key(&self, zone: &LocalZone) -> LocalZone {
        zone.clone()
    }

    fn is_covered_by(&self, candidate: &LocalZone, covering: &LocalZone) -> bool {
        covering.includes(candidate)
    }

    fn describe(&self, zone: &LocalZone) -> Vec<String> {
        zone.dbm().describe(&self.space.local_layout())
    }

    fn magnitude(&self, zone: &LocalZone) -> i64 {
        zone.dbm().max_abs_constant()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximizationReport {
    pub local_sync: Verdict,
    pub global: Verdict,
    pub maximized: Verdict,
    pub spurious_witness: Option<String>,
}

/// Run the three engines on the two-process network where the joint action
/// needs local times 4 and 5 to coincide. Errors if any verdict deviates
/// from (unreachable, unreachable, reachable).
pub fn demo_minea_maximization_flaw() -> Result<MaximizationReport, String> {
    let net = corpus::fig2();
    let target = TargetSpec::parse(&net, "P1=p2,P2=q3").map_err(|e| e.to_string())?;
    let opts = SearchOptions::default();
    let local = explore_local_sync(&net, Some(&target), &opts).map_err(|e| e.to_string())?;
    let global = explore_global(&net, Some(&target), &opts).map_err(|e| e.to_string())?;
    let maximized = search(&MaximizedSemantics::new(&net), &net, Some(&target), &opts).map_err(|e| e.to_string())?;
    let report = MaximizationReport {
        local_sync: local.verdict,
        global: global.verdict,
        maximized: maximized.verdict,
        spurious_witness: maximized.witness.as_ref().map(|w| net.word_label(w)),
    };
    if report.local_sync != Verdict::Unreachable || report.global != Verdict::Unreachable {
        return Err(format!("exact engines disagree with the expected verdict: {report:?}"));
    }
    if report.maximized != Verdict::Reachable {
        return Err(format!("maximized exploration did not reach the target: {report:?}"));
    }
    let witness = maximized.witness.unwrap_or_default();
    let expected: Vec<Move> = ["b1", "b2", "a1", "c"]
        .iter()
        .map(|name| {
            let a = net.action_id(name).unwrap();
            witness.iter().find(|m| m.action == a).cloned().ok_or_else(|| format!("witness lacks {name}"))
        })
        .collect::<Result<_, _>>()?;
    if !equivalent(&witness, &expected, net.num_processes()) {
        return Err(format!("unexpected spurious path {}", net.word_label(&witness)));
    }
    Ok(report)
}

/// The zone at `(p0, q2)` after `b1 b2` from the initial node.
pub fn fig2_zone_after_b1b2() -> (LocalZone, Dbm) {
    let net = corpus::fig2();
    let space = ZoneSpace::new(&net);
    let mut z = space.initial_local_zone();
    let mut q = net.initial_state();
    for name in ["b1", "b2"] {
        let a = net.action_id(name).unwrap();
        let mv = net.enabled_sync_sets(&q, a).remove(0);
        z = space.local_step(&net, &z, &mv).expect("b1 b2 is feasible");
        q = net.apply(&q, &mv);
    }
    let maximized = maximize_zone(&z, 3);
    (z, maximized.into_dbm())
}
