//! Acceptance gate: one PASS/FAIL line per criterion, with pinned limits.
//!
//! Runs without the libtest harness so the lines always reach stdout; exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use lzg::batch::Execution;
use lzg::bench::{self, DEFAULT_TIMEOUT};
use lzg::dbm::{Bound, Constraint, Dbm};
use lzg::explore::{explore_global, explore_local_sync, SearchOptions, Verdict};
use lzg::model::{corpus, TargetSpec};
use lzg::oracle::{demo_minea_maximization_flaw, demo_region_flaw, suites};
use lzg::zones::{GlobalZone, LocalZone, ZoneSpace};

const SEED: u64 = 42;
const RANDOM_NETWORKS: usize = 200;
const COMMUTATIVITY_DEPTH: usize = 5;
const PARALLEL6_MAX_RATIO: f64 = 1.0 / 5.0;

const LIMIT_FIG1: Duration = Duration::from_secs(1);
const LIMIT_AGGREGATION: Duration = Duration::from_secs(60);
const LIMIT_FLAWS: Duration = Duration::from_secs(1);
const LIMIT_COMMUTATIVITY: Duration = Duration::from_secs(30);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(120);

struct Gate {
    failed: Vec<String>,
}

impl Gate {
    fn record(&mut self, id: &str, title: &str, started: Instant, limit: Option<Duration>, result: Result<String, String>) {
        let elapsed = started.elapsed();
        let over = limit.filter(|&l| elapsed > l);
        let (ok, detail) = match (result, over) {
            (Ok(d), None) => (true, d),
            (Ok(d), Some(l)) => (false, format!("{d}; took {elapsed:.2?}, limit {l:?}")),
            (Err(d), _) => (false, d),
        };
        let limit = limit.map(|l| format!(" (limit {l:?})")).unwrap_or_default();
        println!("{} {id} {title}: {detail} [{elapsed:.2?}{limit}]", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn le(i: usize, j: usize, c: i64) -> Constraint {
    Constraint::new(i, j, Bound::weak(c))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fig1_graphs() -> Result<String, String> {
    let net = corpus::fig1();
    let space = ZoneSpace::new(&net);
    let target = TargetSpec::parse(&net, "P1=p1,P2=q1").map_err(|e| e.to_string())?;
    let opts = SearchOptions { exhaustive: true, ..SearchOptions::default() };

    let g = explore_global(&net, Some(&target), &opts).map_err(|e| e.to_string())?;
    ensure(g.stats.stored == 5, || format!("global stored {} (want 5)", g.stats.stored))?;
    // global layout: 0, t, x~, y~
    let gz = |cs: &[Constraint]| GlobalZone::from_dbm(Dbm::from_constraints(space.global_dim(), cs).unwrap());
    let leaves = [
        gz(&[le(2, 1, 0), le(3, 2, 0), le(3, 0, 0), le(0, 3, 0)]),
        gz(&[le(3, 1, 0), le(2, 3, 0), le(2, 0, 0), le(0, 2, 0)]),
        gz(&[le(3, 1, 0), le(2, 3, 0), le(0, 2, 0)]),
        gz(&[le(2, 1, 0), le(3, 2, 0), le(0, 3, 0)]),
    ];
    let got: Vec<&GlobalZone> = g.graph.nodes[1..].iter().map(|n| &n.zone).collect();
    ensure(got == leaves.iter().collect::<Vec<_>>(), || "global zones differ from the expected four".into())?;

    let l = explore_local_sync(&net, Some(&target), &opts).map_err(|e| e.to_string())?;
    ensure(l.stats.stored == 4, || format!("local stored {} (want 4)", l.stats.stored))?;
    // local layout: 0, t1, t2, x~, y~
    let leaf = LocalZone::from_dbm(
        Dbm::from_constraints(space.local_dim(), &[le(3, 1, 0), le(0, 3, 0), le(4, 2, 0), le(0, 4, 0)]).unwrap(),
    );
    let joint: Vec<&LocalZone> = l.graph.nodes.iter().filter(|n| n.children.is_empty()).map(|n| &n.zone).collect();
    ensure(joint == vec![&leaf], || format!("local leaves {joint:?}"))?;
    Ok("global stores 5 with the four expected zones, local stores 4 with one aggregated leaf".into())
}

fn flaws() -> Result<String, String> {
    let m = demo_minea_maximization_flaw()?;
    ensure(
        m.local_sync == Verdict::Unreachable && m.global == Verdict::Unreachable && m.maximized == Verdict::Reachable,
        || format!("{m:?}"),
    )?;
    let r = demo_region_flaw();
    ensure(r.start_equivalent_refined && r.admissible_refined.is_empty(), || format!("{r:?}"))?;
    Ok(format!(
        "verdicts ({}, {}, {}) via {}; region: start equivalent, 0 of {} delays admissible",
        m.local_sync,
        m.global,
        m.maximized,
        m.spurious_witness.unwrap_or_default(),
        r.grid_size
    ))
}

fn suite_result(report: &suites::SuiteReport) -> Result<String, String> {
    let cases: usize = report.checks.iter().map(|c| c.cases).sum();
    let failures: Vec<String> =
        report.checks.iter().filter(|c| !c.passed()).map(|c| format!("{}: {:?}", c.name, c.failures.first())).collect();
    if report.passed {
        Ok(format!("{cases} cases, 0 failures"))
    } else {
        Err(failures.join("; "))
    }
}

fn reduction() -> Result<String, String> {
    let report = bench::run_suite(&bench::standard_suite(), DEFAULT_TIMEOUT, Execution::Parallel);
    println!("{}", report.render_table());
    let mut ratio = None;
    for (g, l) in report.pairs() {
        let name = format!("{} {}", g.family, g.size);
        let ((gv, _, gs), (lv, _, ls)) = match (g.counts(), l.counts()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(format!("{name}: did not finish within {DEFAULT_TIMEOUT:?}")),
        };
        ensure(gv == lv, || format!("{name}: verdicts differ ({gv} vs {lv})"))?;
        ensure(ls <= gs, || format!("{name}: local stored {ls} > global {gs}"))?;
        if g.family == bench::Family::Fischer {
            ensure(ls == gs, || format!("{name}: stored differs ({gs} vs {ls})"))?;
        }
        if g.family == bench::Family::Parallel && g.size == 6 {
            let r = ls as f64 / gs as f64;
            ensure(r <= PARALLEL6_MAX_RATIO, || format!("{name}: ratio {r:.4} above {PARALLEL6_MAX_RATIO}"))?;
            ratio = Some(r);
        }
    }
    let ratio = ratio.ok_or("parallel 6 missing from the suite")?;
    Ok(format!("{} instances agree, local <= global, parallel 6 ratio 1/{:.1}", report.pairs().len(), 1.0 / ratio))
}

fn readme_note() -> Result<String, String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    let text = std::fs::read_to_string(path).map_err(|e| format!("README: {e}"))?.to_lowercase();
    ensure(text.contains("absolute node counts") && text.contains("not reproducible"), || {
        "README lacks the note on absolute node counts".into()
    })?;
    Ok("README documents that absolute node counts are not reproducible".into())
}

fn main() {
    let mut gate = Gate { failed: Vec::new() };

    let t = Instant::now();
    gate.record("1", "fig1 graphs", t, Some(LIMIT_FIG1), fig1_graphs());

    let t = Instant::now();
    let r = suites::aggregation_suite(RANDOM_NETWORKS, SEED, Execution::Parallel);
    gate.record("2", "aggregated-zone theorem", t, Some(LIMIT_AGGREGATION), suite_result(&r));

    let t = Instant::now();
    gate.record("3", "flaw reproductions", t, Some(LIMIT_FLAWS), flaws());

    let t = Instant::now();
    let r = suites::commutativity_suite(COMMUTATIVITY_DEPTH, Execution::Parallel);
    gate.record("4", "commutativity and trace invariance", t, Some(LIMIT_COMMUTATIVITY), suite_result(&r));

    let t = Instant::now();
    gate.record("5", "verdict parity and reduction", t, None, reduction());

    let t = Instant::now();
    gate.record("6", "absolute counts documented", t, None, readme_note());

    let t = Instant::now();
    let r = suites::property_suite(SEED, Execution::Parallel);
    gate.record("7", "property suites", t, Some(LIMIT_PROPERTIES), suite_result(&r));

    if !gate.failed.is_empty() {
        eprintln!("failed criteria: {}", gate.failed.join(", "));
        std::process::exit(1);
    }
}
