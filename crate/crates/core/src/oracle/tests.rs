use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{discrete_words, random_network, RandomShape};
use super::*;
use crate::dbm::{Bound, Constraint, Dbm};
use crate::model::{corpus, parse_network, Move, Network};
use crate::zones::ZoneSpace;

fn mv(net: &Network, name: &str) -> Move {
    let a = net.action_id(name).unwrap();
    let mut q = net.initial_state();
    // Find the move from any reachable state; corpus actions have one edge each.
    loop {
        if let Some(m) = net.enabled_sync_sets(&q, a).into_iter().next() {
            return m;
        }
        let next = net.successor_moves(&q).into_iter().next().expect("action never enabled");
        q = net.apply(&q, &next);
    }
}

fn word(net: &Network, names: &str) -> Vec<Move> {
    let mut q = net.initial_state();
    names
        .split_whitespace()
        .map(|n| {
            let m = net.enabled_sync_sets(&q, net.action_id(n).unwrap()).remove(0);
            q = net.apply(&q, &m);
            m
        })
        .collect()
}

fn d(x: i64) -> GlobalStep {
    GlobalStep::Delay(rat(x))
}

#[test]
fn global_runs_respect_guard_order() {
    let net = corpus::intro();
    let (a, b) = (mv(&net, "a"), mv(&net, "b"));
    assert!(exec_global(&net, &[d(0), GlobalStep::Act(a.clone()), d(2), GlobalStep::Act(b.clone())]).is_ok());
    let err = exec_global(&net, &[d(2), GlobalStep::Act(b), d(0), GlobalStep::Act(a)]).unwrap_err();
    assert_eq!(err.step, 3);
    assert!(err.reason.contains("guard"), "{}", err.reason);
}

#[test]
fn empty_word_keeps_initial_valuation() {
    let net = corpus::fig1();
    let trace = exec_global(&net, &[]).unwrap();
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0].1, Valuation::zeros(ZoneSpace::new(&net).global_dim()));
}

#[test]
fn local_runs_allow_ba() {
    let net = corpus::intro();
    let (a, b) = (mv(&net, "a"), mv(&net, "b"));
    let m = net.process_id("P2").unwrap();
    let lw = [LocalStep::Delay { process: m, amount: rat(2) }, LocalStep::Act(b), LocalStep::Act(a)];
    assert!(exec_local(&net, &lw).is_ok());
}

#[test]
fn global_delay_expands_to_local_delays() {
    let net = corpus::intro();
    let space = ZoneSpace::new(&net);
    let gw = [d(0), GlobalStep::Act(mv(&net, "a")), d(2), GlobalStep::Act(mv(&net, "b")), d(1)];
    let g = exec_global(&net, &gw).unwrap();
    let l = exec_local(&net, &expand_global_word(net.num_processes(), &gw)).unwrap();
    assert_eq!(l.last().unwrap().1, local_of(&space, &g.last().unwrap().1));
}

#[test]
fn shared_action_needs_synchronized_times() {
    let net = corpus::fig2();
    let w = word(&net, "a1 b1 b2 c");
    let prefix = |p1_wait: i64| {
        vec![
            LocalStep::Delay { process: 0, amount: rat(2) },
            LocalStep::Act(w[0].clone()),
            LocalStep::Delay { process: 1, amount: rat(2) },
            LocalStep::Act(w[1].clone()),
            LocalStep::Delay { process: 1, amount: rat(3) },
            LocalStep::Act(w[2].clone()),
            LocalStep::Delay { process: 0, amount: rat(p1_wait) },
            LocalStep::Act(w[3].clone()),
        ]
    };
    // P1 satisfies x==2 at local time 4 while P2 is at 5.
    let early = exec_local(&net, &prefix(2)).unwrap_err();
    assert!(early.reason.contains("unsynchronized"), "{early}");
    let late = exec_local(&net, &prefix(3)).unwrap_err();
    assert!(late.reason.contains("guard"), "{late}");
}

#[test]
fn fig2_has_no_global_run_to_p2() {
    let net = corpus::fig2();
    let q0 = net.initial_state();
    let space = ZoneSpace::new(&net);
    let v0 = Valuation::zeros(space.global_dim());
    for w in discrete_words(&net, 4) {
        let s = schedule(&net, Timeline::Global, &q0, StartSpec::Valuation(&v0), &w, EndSpec::Free, &mut Pick::Earliest);
        if w.iter().any(|m| net.actions[m.action] == "c") {
            assert!(s.is_none(), "{} should be infeasible", net.word_label(&w));
        }
    }
    // a1 c alone is fine for P1's constraints.
    let lw = local_word(
        &net,
        &word(&net, "a1"),
        &schedule(&net, Timeline::Local, &q0, StartSpec::Valuation(&Valuation::zeros(space.local_dim())), &word(&net, "a1"), EndSpec::Free, &mut Pick::Earliest)
            .unwrap(),
    );
    assert!(exec_local(&net, &lw).is_ok());
}

#[test]
fn trace_classes() {
    let net = corpus::fig1();
    let ab = word(&net, "a b");
    let class = trace_class(&ab, DEFAULT_TRACE_BOUND).unwrap();
    assert_eq!(class.len(), 2);
    assert!(class.contains(&ab));
    assert!(class.contains(&vec![ab[1].clone(), ab[0].clone()]));
    assert_eq!(trace_class(&ab[..1], 8).unwrap(), vec![ab[..1].to_vec()]);
    assert!(trace_class(&ab, 1).is_err());

    // a on P0, b on P1, c on P0 and P1.
    let src = "process A\nprocess B\nclock A x\nclock B y\nstate A a0 initial\nstate A a1\nstate A a2\n\
               state B b0 initial\nstate B b1\nstate B b2\ntrans A a0 a1 a\ntrans B b0 b1 b\n\
               trans A a1 a2 c\ntrans B b1 b2 c\n";
    let net = parse_network(src).unwrap();
    let abc = word(&net, "a b c");
    let class = trace_class(&abc, 8).unwrap();
    let labels: Vec<String> = class.iter().map(|w| net.word_label(w)).collect();
    assert_eq!(labels.len(), 2);
    assert!(labels.contains(&"a b c".to_string()) && labels.contains(&"b a c".to_string()));
    assert!(equivalent(&abc, &class[0], 2) && equivalent(&abc, &class[1], 2));
}

#[test]
fn fig1_aggregated_zone() {
    let net = corpus::fig1();
    let space = ZoneSpace::new(&net);
    let ab = word(&net, "a b");
    let fed = mz_bruteforce(&net, &net.initial_state(), &space.initial_global_zone(), &ab).unwrap();
    assert_eq!(fed.members.len(), 2);
    // t ≥ x̃ ≥ 0, t ≥ ỹ ≥ 0.
    let (t, x, y) = (ZoneSpace::GLOBAL_REF, space.global_offset(0), space.global_offset(1));
    let g = Dbm::from_constraints(
        space.global_dim(),
        &[
            Constraint::new(x, t, Bound::LE_ZERO),
            Constraint::new(y, t, Bound::LE_ZERO),
            Constraint::new(0, x, Bound::LE_ZERO),
            Constraint::new(0, y, Bound::LE_ZERO),
        ],
    )
    .unwrap();
    assert!(fed.equals_zone(&g));
    for u in ["a b", "b a"] {
        assert_eq!(check_aggregation_theorem(&net, &word(&net, u)).unwrap(), AggregationVerdict::Pass);
    }
}

#[test]
fn infeasible_word_gives_empty_federation() {
    let net = corpus::fig2();
    let space = ZoneSpace::new(&net);
    let u = word(&net, "a1 b1 b2 c");
    let fed = mz_bruteforce(&net, &net.initial_state(), &space.initial_global_zone(), &u).unwrap();
    assert!(fed.is_empty());
    assert!(check_aggregation_theorem(&net, &u).unwrap().passed());
}

#[test]
fn aggregation_on_fig2_words() {
    let net = corpus::fig2();
    for u in discrete_words(&net, 4) {
        let v = check_aggregation_theorem(&net, &u).unwrap();
        assert!(v.passed(), "{v:?}");
    }
}

#[test]
fn aggregation_on_random_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let net = random_network(&mut rng, RandomShape::default());
        for u in discrete_words(&net, 3) {
            let v = check_aggregation_theorem(&net, &u).unwrap();
            assert!(v.passed(), "{v:?}\n{net}");
        }
    }
}

#[test]
fn region_counterexample() {
    let report = demo_region_flaw();
    assert!(report.start_equivalent_refined && report.start_equivalent_literal);
    assert!(report.admissible_refined.is_empty(), "{:?}", report.admissible_refined);
    assert!(report.admissible_literal.is_empty(), "{:?}", report.admissible_literal);
    assert_eq!(report.grid_size, 18);
    assert!(report.passed);
    let v = Valuation(vec![rat(0), Rational::new(3, 2), rat(7)]);
    assert!(region_equiv(&v, &v, 3, RegionMode::Refined));
}

#[test]
fn ordered_pairs_separate_integers_from_fractions() {
    // floor(1) = floor(3/2) but floor(-1) != floor(-3/2).
    let a = Valuation(vec![rat(0), rat(1), rat(0)]);
    let b = Valuation(vec![rat(0), Rational::new(3, 2), rat(0)]);
    assert!(!region_equiv(&a, &b, 3, RegionMode::Literal));
    assert!(!region_equiv(&a, &b, 3, RegionMode::Refined));
    let c = Valuation(vec![rat(0), Rational::new(5, 4), rat(0)]);
    assert!(region_equiv(&c, &b, 3, RegionMode::Literal));
}

#[test]
fn maximization_widens_fig2_zone() {
    let (z, widened) = fig2_zone_after_b1b2();
    let net = corpus::fig2();
    let space = ZoneSpace::new(&net);
    let (x, _y, zc) = (space.local_offset(0), space.local_offset(1), space.local_offset(2));
    assert_eq!(z.dbm().get(zc, x), Bound::weak(5));
    assert_eq!(widened.get(zc, x), Bound::INFINITY);
    assert_eq!(widened.get(x, zc), Bound::strict(-3));
    assert!(widened.includes(z.dbm()));
    let small = space.initial_local_zone();
    assert_eq!(maximize_zone(&small, 3), small);
}

#[test]
fn maximization_flaw_verdicts() {
    let report = demo_minea_maximization_flaw().unwrap();
    assert_eq!(report.local_sync, report.global);
    let w = report.spurious_witness.unwrap();
    assert!(w.contains("b1") && w.contains("a1") && w.ends_with('c'), "{w}");
}

#[test]
fn diff_system_is_exact() {
    let mut s = DiffSystem::new(3);
    s.add(1, 0, rat(1), true); // x1 < 1
    s.add(0, 1, rat(0), true); // x1 > 0
    s.add_eq(2, 1, Rational::new(1, 3));
    let v = s.clone().solve(&mut Pick::Earliest).unwrap();
    assert!(v[1] > rat(0) && v[1] < rat(1));
    assert_eq!(v[2] - v[1], Rational::new(1, 3));
    s.add(1, 2, rat(0), false);
    assert!(s.is_satisfiable());
    s.add(1, 2, rat(-1), false);
    assert!(!s.is_satisfiable());
}

#[test]
fn translation_and_zone_run_checks_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (_, net) in corpus::all() {
        let mut r = check_translations(&net, 40, 5, &mut rng);
        check_zone_runs(&net, 4, &mut rng, &mut r);
        assert!(r.passed(), "{}: {:?}", net.name, r.failures);
        assert!(r.cases > 0);
    }
}

#[test]
fn law_suites_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    assert!(laws::dbm_laws(&mut rng, 200).passed());
    assert!(laws::region_laws(&mut rng, 300).passed());
    for (_, net) in corpus::all() {
        let r = laws::zone_laws(&net, &mut rng, 30);
        assert!(r.passed(), "{:?}", r.failures);
        let r = laws::commutativity_laws(&net, 5);
        assert!(r.passed(), "{:?}", r.failures);
        let r = laws::explore_laws(&net, &laws::single_state_targets(&net));
        assert!(r.passed(), "{:?}", r.failures);
    }
}

#[test]
fn witnesses_replay() {
    let net = corpus::fig1();
    let end = replay_witness(&net, &word(&net, "a b")).unwrap();
    assert_eq!(end.0.len(), ZoneSpace::new(&net).global_dim());
    assert!(replay_witness(&corpus::fig2(), &word(&corpus::fig2(), "a1 b1 b2")).is_ok());
}

#[test]
fn suites_pass_at_small_scale() {
    use crate::batch::Execution;
    let s = suites::aggregation_suite(10, 42, Execution::Parallel);
    assert!(s.passed, "{:?}", s.checks);
    assert!(suites::flaws_suite().passed);
    assert!(suites::commutativity_suite(4, Execution::Parallel).passed);
    let r = suites::runs_suite(0, 1);
    assert!(r.passed && r.checks[0].cases == 0);
}
