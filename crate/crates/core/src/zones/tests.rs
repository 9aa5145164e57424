use super::*;
use crate::model::corpus;
use crate::model::parse_network;
use proptest::prelude::*;

fn le(i: usize, j: usize, c: i64) -> Constraint {
    Constraint::new(i, j, Bound::weak(c))
}

fn lt(i: usize, j: usize, c: i64) -> Constraint {
    Constraint::new(i, j, Bound::strict(c))
}

fn local(space: &ZoneSpace, cs: &[Constraint]) -> LocalZone {
    LocalZone::from_dbm(Dbm::from_constraints(space.local_dim(), cs).unwrap())
}

fn global(space: &ZoneSpace, cs: &[Constraint]) -> GlobalZone {
    GlobalZone::from_dbm(Dbm::from_constraints(space.global_dim(), cs).unwrap())
}

fn clock(space: &ZoneSpace, cs: &[Constraint]) -> ClockZone {
    ClockZone::from_dbm(Dbm::from_constraints(space.clock_dim(), cs).unwrap())
}

/// Fig. 1 layout: 0, t1, t2, x~, y~.
const T1: usize = 1;
const T2: usize = 2;
const XO: usize = 3;
const YO: usize = 4;

fn fig1() -> (Network, ZoneSpace) {
    let net = corpus::fig1();
    let space = ZoneSpace::new(&net);
    (net, space)
}

/// `{t1 ≥ x~ ≥ 0, t2 ≥ y~ ≥ 0}`
fn fig1_leaf(space: &ZoneSpace) -> LocalZone {
    local(space, &[le(XO, T1, 0), le(0, XO, 0), le(YO, T2, 0), le(0, YO, 0)])
}

#[test]
fn initial_local_zone_fig1() {
    let (_, space) = fig1();
    let expected = local(&space, &[le(XO, T1, 0), le(XO, 0, 0), le(0, XO, 0), le(YO, T2, 0), le(YO, 0, 0), le(0, YO, 0)]);
    assert_eq!(space.initial_local_zone(), expected);
    assert!(space.is_elapsed(&expected));
}

#[test]
fn initial_local_zone_single_process_and_clockless() {
    let net = parse_network("process P\nclock P x\nclock P y\nstate P s initial\n").unwrap();
    let space = ZoneSpace::new(&net);
    let z = space.initial_local_zone();
    assert_eq!(z.dbm().get(2, 3), Bound::LE_ZERO);
    assert_eq!(z.dbm().get(0, 1), Bound::LE_ZERO);
    assert!(z.dbm().get(1, 0).is_infinite());

    let net = parse_network("process P\nprocess Q\nclock Q x\nstate P s initial\nstate Q r initial\n").unwrap();
    let space = ZoneSpace::new(&net);
    let z = space.initial_local_zone();
    assert_eq!(z.dbm().get(0, 1), Bound::LE_ZERO);
    assert_eq!(z.dbm().get(1, 0), Bound::INFINITY);
    assert_eq!(z.dbm().get(1, 2), Bound::INFINITY);
}

#[test]
fn guard_translation() {
    let net = corpus::fig2();
    let space = ZoneSpace::new(&net);
    // layout: 0, t1, t2, x~, y~, z~
    let a1 = &net.transition(0, 0).guard;
    assert_eq!(space.guard_local(a1), vec![le(1, 3, 2), le(3, 1, -2)]);
    assert!(space.guard_local(&Guard::default()).is_empty());

    let net = corpus::intro();
    let space = ZoneSpace::new(&net);
    let mut g = net.transition(0, 0).guard.clone();
    g.atoms.extend(net.transition(1, 0).guard.atoms.iter().copied());
    assert_eq!(space.guard_local(&g), vec![le(T1, XO, 1), le(YO, T2, -2)]);
}

#[test]
fn reset_in_fig1_root() {
    let (_, space) = fig1();
    let root = space.initial_local_zone();
    let r = space.apply_reset_local(&root, &[0]);
    assert_eq!(r.dbm().get(XO, T1), Bound::LE_ZERO);
    assert_eq!(r.dbm().get(T1, XO), Bound::LE_ZERO);
    assert_eq!(r.dbm().get(YO, 0), Bound::LE_ZERO);
    assert_eq!(r.dbm().get(YO, T2), Bound::LE_ZERO);
    assert_eq!(space.apply_reset_local(&root, &[]), root);
}

#[test]
fn fig1_local_steps_commute() {
    let (net, space) = fig1();
    let root = space.initial_local_zone();
    let moves = net.successor_moves(&net.initial_state());
    let (a, b) = (&moves[0], &moves[1]);
    let za = space.local_step(&net, &root, a).unwrap();
    let zab = space.local_step(&net, &za, b).unwrap();
    let zb = space.local_step(&net, &root, b).unwrap();
    let zba = space.local_step(&net, &zb, a).unwrap();
    assert_eq!(zab, zba);
    assert_eq!(zab, fig1_leaf(&space));
    assert!(space.sync_subsume(&zab, &zba));
    assert!(space.sync_subsume(&zba, &zab));
}

#[test]
fn sync_examples() {
    let (_, space) = fig1();
    let leaf = fig1_leaf(&space);
    let s = space.sync(&leaf).unwrap();
    let expected = local(&space, &[le(XO, T1, 0), le(0, XO, 0), le(YO, T2, 0), le(0, YO, 0), le(T1, T2, 0), le(T2, T1, 0)]);
    assert_eq!(s, expected);
    assert_eq!(space.sync(&s).unwrap(), s);

    let apart = local(&space, &[le(0, T1, -5), le(T2, 0, 3)]);
    assert_eq!(space.sync(&apart), None);
    assert_eq!(space.global_of_sync(&apart), None);
}

#[test]
fn global_of_sync_examples() {
    let (_, space) = fig1();
    // global layout: 0, t, x~, y~
    let g = space.global_of_sync(&fig1_leaf(&space)).unwrap();
    assert_eq!(g, global(&space, &[le(2, 1, 0), le(0, 2, 0), le(3, 1, 0), le(0, 3, 0)]));

    let root_g = space.global_of_sync(&space.initial_local_zone()).unwrap();
    assert_eq!(root_g, space.initial_global_zone());
}

#[test]
fn local_of_global_example() {
    let (_, space) = fig1();
    // {t ≥ x~ ≥ y~ = 0}
    let g = global(&space, &[le(2, 1, 0), le(3, 2, 0), le(3, 0, 0), le(0, 3, 0)]);
    let l = space.local_of_global(&g);
    let expected = local(&space, &[le(T1, T2, 0), le(T2, T1, 0), le(XO, T1, 0), le(YO, XO, 0), le(YO, 0, 0), le(0, YO, 0)]);
    assert_eq!(l, expected);
    assert_eq!(space.global_of_sync(&l).unwrap(), g);
    assert_eq!(space.local_of_global(&space.initial_global_zone()), space.sync(&space.initial_local_zone()).unwrap());
}

#[test]
fn clock_zone_examples() {
    let (_, space) = fig1();
    let cz = space.to_clock_zone(&space.initial_global_zone());
    assert_eq!(cz, clock(&space, &[le(1, 2, 0), le(2, 1, 0), le(0, 1, 0)]));

    // {t − x~ = 2}, y~ pinned below t
    let g = global(&space, &[le(1, 2, 2), le(2, 1, -2), le(3, 1, 0)]);
    let cz = space.to_clock_zone(&g);
    assert_eq!(cz.dbm().get(1, 0), Bound::weak(2));
    assert_eq!(cz.dbm().get(0, 1), Bound::weak(-2));
}

fn one_clock_constants(m: u32) -> MaxConstants {
    MaxConstants { per_clock: vec![Some(m)] }
}

#[test]
fn extra_m_examples() {
    let m = one_clock_constants(3);
    let le5 = ClockZone::from_dbm(Dbm::from_constraints(2, &[le(1, 0, 5), le(0, 1, 0)]).unwrap());
    let w = extra_m(&le5, &m);
    assert_eq!(w, ClockZone::from_dbm(Dbm::unconstrained(2).constrain(le(0, 1, 0)).unwrap()));
    assert_eq!(extra_m(&w, &m), w);

    let small = ClockZone::from_dbm(Dbm::from_constraints(2, &[le(1, 0, 2), le(0, 1, -1)]).unwrap());
    assert_eq!(extra_m(&small, &m), small);

    let ge4 = ClockZone::from_dbm(Dbm::from_constraints(2, &[le(0, 1, -4)]).unwrap());
    let expected = ClockZone::from_dbm(Dbm::from_constraints(2, &[lt(0, 1, -3)]).unwrap());
    assert_eq!(extra_m(&ge4, &m), expected);
}

#[test]
fn subsumption_reflexive_and_strict() {
    let net = corpus::fig2();
    let space = ZoneSpace::new(&net);
    let root = space.initial_local_zone();
    assert!(space.sync_subsume(&root, &root));

    // layout 0, t1, t2, x~, y~, z~ ; candidate allows z up to 3, established only up to 1
    let base = [le(3, 1, 0), le(4, 2, 0), le(5, 2, 0), le(0, 3, 0), le(0, 4, 0), le(0, 5, 0)];
    let mut small = base.to_vec();
    small.push(le(2, 5, 1));
    let mut big = base.to_vec();
    big.push(le(2, 5, 3));
    let small = local(&space, &small);
    let big = local(&space, &big);
    assert!(space.sync_subsume(&small, &big));
    assert!(!space.sync_subsume(&big, &small));
    // witness: a synchronized point of `big` outside extra_m(small)
    let cand = space.sync_clock_zone(&big).unwrap();
    let est = space.extra_m(&space.sync_clock_zone(&small).unwrap());
    assert!(!cand.dbm().subtract(est.dbm()).is_empty());
}

#[test]
fn empty_sync_subsumption() {
    let (_, space) = fig1();
    let apart = local(&space, &[le(0, T1, -5), le(T2, 0, 3)]);
    let leaf = fig1_leaf(&space);
    assert!(space.sync_subsume(&apart, &leaf));
    assert!(!space.sync_subsume(&leaf, &apart));
}

#[test]
fn global_steps_fig1_leaves_differ() {
    let (net, space) = fig1();
    let root = space.initial_global_zone();
    let moves = net.successor_moves(&net.initial_state());
    let ab = space.global_step(&net, &space.global_step(&net, &root, &moves[0]).unwrap(), &moves[1]).unwrap();
    let ba = space.global_step(&net, &space.global_step(&net, &root, &moves[1]).unwrap(), &moves[0]).unwrap();
    assert_ne!(ab, ba);
    let ca = space.extra_m(&space.to_clock_zone(&ab));
    let cb = space.extra_m(&space.to_clock_zone(&ba));
    assert!(!ca.includes(&space.to_clock_zone(&ba)));
    assert!(!cb.includes(&space.to_clock_zone(&ab)));
}

fn arb_clock_zone(n: usize) -> impl Strategy<Value = ClockZone> {
    let dim = n + 1;
    prop::collection::vec((0..dim, 0..dim, -8i64..=8, any::<bool>()), 0..6).prop_filter_map("empty", move |cs| {
        let mut all: Vec<Constraint> = cs.into_iter().map(|(i, j, c, s)| Constraint::new(i, j, Bound::new(c, s))).collect();
        all.extend((1..dim).map(|x| le(0, x, 0)));
        Dbm::from_constraints(dim, &all).map(ClockZone::from_dbm)
    })
}

fn arb_constants(n: usize) -> impl Strategy<Value = MaxConstants> {
    prop::collection::vec(prop::option::of(0u32..=5), n).prop_map(|per_clock| MaxConstants { per_clock })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

    #[test]
    fn extra_m_grows_and_is_idempotent(z in arb_clock_zone(3), m in arb_constants(3)) {
        let w = extra_m(&z, &m);
        prop_assert!(w.includes(&z));
        prop_assert_eq!(extra_m(&w, &m), w);
    }

    #[test]
    fn extra_m_is_monotone(a in arb_clock_zone(2), b in arb_clock_zone(2), m in arb_constants(2)) {
        if let Some(d) = a.dbm().intersect(b.dbm()) {
            let inner = ClockZone::from_dbm(d);
            prop_assert!(extra_m(&a, &m).includes(&extra_m(&inner, &m)));
        }
    }
}
