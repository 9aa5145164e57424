//! Zones over offset variables, with one reference clock per process (local
//! zones) or a single shared one (global zones), plus the plain clock-value
//! view used for extrapolation and subsumption.
//!
//! Variable indices:
//! - local:  `0`, `t_1 .. t_k`, then one offset per clock
//! - global: `0`, `t`, then one offset per clock
//! - clock:  `0`, then one value per clock

use crate::dbm::{Bound, Constraint, Dbm, VariableLayout, ZERO};
use crate::model::{Atom, ClockId, Guard, MaxConstants, Move, Network, ProcId, Relation};

/// Canonical, non-empty DBM over the local layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalZone(Dbm);

/// Canonical, non-empty DBM over the global layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlobalZone(Dbm);

/// Canonical, non-empty DBM over clock values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClockZone(Dbm);

macro_rules! zone_common {
    ($t:ty) => {
        impl $t {
            /// Wrap a DBM. Panics unless it is canonical and non-empty.
            pub fn from_dbm(d: Dbm) -> Self {
                assert!(!d.is_empty() && d.is_canonical(), "zone must be canonical and non-empty");
                Self(d)
            }

            /// Canonicalize `d` first; `None` if it denotes the empty set.
            pub fn from_raw(d: Dbm) -> Option<Self> {
                d.canonicalize().map(Self)
            }

            pub fn dbm(&self) -> &Dbm {
                &self.0
            }

            pub fn into_dbm(self) -> Dbm {
                self.0
            }

            pub fn includes(&self, inner: &Self) -> bool {
                self.0.includes(&inner.0)
            }
        }
    };
}

zone_common!(LocalZone);
zone_common!(GlobalZone);
zone_common!(ClockZone);

/// Guard atom as difference constraints `reference − offset ∼ c`.
fn atom_constraints(reference: usize, offset: usize, a: &Atom) -> Vec<Constraint> {
    let c = i64::from(a.constant);
    let upper = |b| Constraint::new(reference, offset, b);
    let lower = |b| Constraint::new(offset, reference, b);
    match a.relation {
        Relation::Lt => vec![upper(Bound::strict(c))],
        Relation::Le => vec![upper(Bound::weak(c))],
        Relation::Eq => vec![upper(Bound::weak(c)), lower(Bound::weak(-c))],
        Relation::Ge => vec![lower(Bound::weak(-c))],
        Relation::Gt => vec![lower(Bound::strict(-c))],
    }
}

/// Index arithmetic and zone operations for one network.
#[derive(Clone, Debug)]
pub struct ZoneSpace {
    num_processes: usize,
    owner: Vec<ProcId>,
    process_names: Vec<String>,
    clock_names: Vec<String>,
    max: MaxConstants,
}

impl ZoneSpace {
    pub fn new(net: &Network) -> ZoneSpace {
        ZoneSpace {
            num_processes: net.num_processes(),
            owner: net.clocks.iter().map(|c| c.owner).collect(),
            process_names: net.processes.iter().map(|p| p.name.clone()).collect(),
            clock_names: net.clocks.iter().map(|c| c.name.clone()).collect(),
            max: net.max_constants(),
        }
    }

    pub fn num_processes(&self) -> usize {
        self.num_processes
    }

    pub fn num_clocks(&self) -> usize {
        self.owner.len()
    }

    pub fn max_constants(&self) -> &MaxConstants {
        &self.max
    }

    pub fn owner(&self, clock: ClockId) -> ProcId {
        self.owner[clock]
    }

    pub fn local_dim(&self) -> usize {
        1 + self.num_processes + self.num_clocks()
    }

    pub fn global_dim(&self) -> usize {
        2 + self.num_clocks()
    }

    pub fn clock_dim(&self) -> usize {
        1 + self.num_clocks()
    }

    /// Local index of `t_p`.
    pub fn local_ref(&self, p: ProcId) -> usize {
        1 + p
    }

    /// Local index of the offset of `clock`.
    pub fn local_offset(&self, clock: ClockId) -> usize {
        1 + self.num_processes + clock
    }

    /// Global index of `t`.
    pub const GLOBAL_REF: usize = 1;

    pub fn global_offset(&self, clock: ClockId) -> usize {
        2 + clock
    }

    pub fn clock_var(&self, clock: ClockId) -> usize {
        1 + clock
    }

    pub fn local_layout(&self) -> VariableLayout {
        let refs = (1..=self.num_processes).map(|p| format!("t{p}"));
        let offs = self.clock_names.iter().map(|c| format!("{c}~"));
        VariableLayout::new(refs.chain(offs))
    }

    pub fn global_layout(&self) -> VariableLayout {
        let offs = self.clock_names.iter().map(|c| format!("{c}~"));
        VariableLayout::new(std::iter::once("t".to_string()).chain(offs))
    }

    pub fn clock_layout(&self) -> VariableLayout {
        VariableLayout::new(self.clock_names.iter().cloned())
    }

    pub fn process_name(&self, p: ProcId) -> &str {
        &self.process_names[p]
    }

    // ----- local zones -----

    /// Every offset and reference at 0, then local time elapse.
    pub fn initial_local_zone(&self) -> LocalZone {
        self.local_elapse(&LocalZone(Dbm::zero(self.local_dim())))
    }

    /// `t_p − x̃ ∼ c` for each atom `x ∼ c` with `x` owned by `p`.
    pub fn guard_local(&self, g: &Guard) -> Vec<Constraint> {
        g.atoms
            .iter()
            .flat_map(|a| atom_constraints(self.local_ref(self.owner(a.clock)), self.local_offset(a.clock), a))
            .collect()
    }

    /// Let every process clock run independently.
    pub fn local_elapse(&self, z: &LocalZone) -> LocalZone {
        let mut d = z.0.clone();
        for p in 0..self.num_processes {
            d = d.free_upper(self.local_ref(p));
        }
        LocalZone(d)
    }

    /// `x̃ := t_p` for each reset clock.
    pub fn apply_reset_local(&self, z: &LocalZone, resets: &[ClockId]) -> LocalZone {
        let mut d = z.0.clone();
        for &x in resets {
            d = d.assign(self.local_offset(x), self.local_ref(self.owner(x)));
        }
        LocalZone(d)
    }

    fn equal_refs(&self, procs: impl IntoIterator<Item = ProcId>) -> Vec<Constraint> {
        let mut procs = procs.into_iter();
        let Some(first) = procs.next() else {
            return Vec::new();
        };
        let a = self.local_ref(first);
        procs
            .flat_map(|p| {
                let b = self.local_ref(p);
                [Constraint::new(a, b, Bound::LE_ZERO), Constraint::new(b, a, Bound::LE_ZERO)]
            })
            .collect()
    }

    /// Synchronized valuations of `z`: all reference clocks equal.
    pub fn sync(&self, z: &LocalZone) -> Option<LocalZone> {
        z.0.constrain_all(&self.equal_refs(0..self.num_processes)).map(LocalZone)
    }

    /// One synchronized step: intersect guards and `t_p = t_q` over the
    /// domain, reset, then let local time elapse.
    pub fn local_step(&self, net: &Network, z: &LocalZone, mv: &Move) -> Option<LocalZone> {
        let mut cs = self.equal_refs(mv.processes());
        for &(p, i) in &mv.edges {
            cs.extend(self.guard_local(&net.transition(p, i).guard));
        }
        let guarded = LocalZone(z.0.constrain_all(&cs)?);
        let mut d = guarded;
        for &(p, i) in &mv.edges {
            d = self.apply_reset_local(&d, &net.transition(p, i).resets);
        }
        Some(self.local_elapse(&d))
    }

    /// Whether `z` has the shape of a local-time-elapsed zone: no upper
    /// bound on any `t_i − y`.
    pub fn is_elapsed(&self, z: &LocalZone) -> bool {
        (0..self.num_processes).all(|p| {
            let i = self.local_ref(p);
            (0..self.local_dim()).all(|j| j == i || z.0.get(i, j).is_infinite())
        })
    }

    /// `x̃ ≤ t_p` for every clock `x` of every process `p`.
    pub fn offsets_below_refs_local(&self, z: &LocalZone) -> bool {
        (0..self.num_clocks()).all(|x| {
            z.0.get(self.local_offset(x), self.local_ref(self.owner(x))) <= Bound::LE_ZERO
        })
    }

    // ----- global zones -----

    pub fn initial_global_zone(&self) -> GlobalZone {
        self.elapse_global(&GlobalZone(Dbm::zero(self.global_dim())))
    }

    pub fn guard_global(&self, g: &Guard) -> Vec<Constraint> {
        g.atoms
            .iter()
            .flat_map(|a| atom_constraints(Self::GLOBAL_REF, self.global_offset(a.clock), a))
            .collect()
    }

    pub fn elapse_global(&self, z: &GlobalZone) -> GlobalZone {
        GlobalZone(z.0.free_upper(Self::GLOBAL_REF))
    }

    pub fn apply_reset_global(&self, z: &GlobalZone, resets: &[ClockId]) -> GlobalZone {
        let mut d = z.0.clone();
        for &x in resets {
            d = d.assign(self.global_offset(x), Self::GLOBAL_REF);
        }
        GlobalZone(d)
    }

    /// Guard, reset, elapse.
    pub fn global_step(&self, net: &Network, z: &GlobalZone, mv: &Move) -> Option<GlobalZone> {
        let mut cs = Vec::new();
        for &(p, i) in &mv.edges {
            cs.extend(self.guard_global(&net.transition(p, i).guard));
        }
        let mut d = GlobalZone(z.0.constrain_all(&cs)?);
        for &(p, i) in &mv.edges {
            d = self.apply_reset_global(&d, &net.transition(p, i).resets);
        }
        Some(self.elapse_global(&d))
    }

    pub fn offsets_below_ref_global(&self, z: &GlobalZone) -> bool {
        (0..self.num_clocks()).all(|x| z.0.get(self.global_offset(x), Self::GLOBAL_REF) <= Bound::LE_ZERO)
    }

    // ----- translations -----

    /// Synchronize, then merge all reference clocks into `t`.
    pub fn global_of_sync(&self, z: &LocalZone) -> Option<GlobalZone> {
        let s = self.sync(z)?;
        // After sync every t_p row and column coincide; read them off t_1.
        let src = |g: usize| match g {
            ZERO => ZERO,
            Self::GLOBAL_REF => self.local_ref(0),
            _ => self.local_offset(g - 2),
        };
        let n = self.global_dim();
        let mut d = Dbm::unconstrained(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d.set(i, j, s.0.get(src(i), src(j)));
                }
            }
        }
        Some(GlobalZone(d))
    }

    /// Give every process the global reference, tied together by equalities.
    pub fn local_of_global(&self, z: &GlobalZone) -> LocalZone {
        let target = |g: usize, p: ProcId| match g {
            ZERO => ZERO,
            Self::GLOBAL_REF => self.local_ref(p),
            _ => self.local_offset(g - 2),
        };
        let mut cs = self.equal_refs(0..self.num_processes);
        for c in z.0.finite_entries() {
            cs.push(Constraint::new(target(c.i, 0), target(c.j, 0), c.bound));
        }
        LocalZone(Dbm::from_constraints(self.local_dim(), &cs).expect("a non-empty global zone maps to a non-empty local zone"))
    }

    /// Plain clock values `x = t − x̃`. Constraints on the absolute time
    /// stamps have no clock counterpart and are dropped.
    pub fn to_clock_zone(&self, z: &GlobalZone) -> ClockZone {
        let n = self.clock_dim();
        // Clock index -> the global variable subtracted from t.
        let var = |c: usize| if c == ZERO { Self::GLOBAL_REF } else { self.global_offset(c - 1) };
        let mut d = Dbm::unconstrained(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    // (t − v_i) − (t − v_j) = v_j − v_i
                    d.set(i, j, z.0.get(var(j), var(i)));
                }
            }
        }
        ClockZone(d)
    }

    /// Clock-value projection of the synchronized part, if any.
    pub fn sync_clock_zone(&self, z: &LocalZone) -> Option<ClockZone> {
        self.global_of_sync(z).map(|g| self.to_clock_zone(&g))
    }

    /// Maximal-constant extrapolation.
    pub fn extra_m(&self, z: &ClockZone) -> ClockZone {
        extra_m(z, &self.max)
    }

    /// `clock(global(sync(candidate))) ⊆ extra_m(clock(global(sync(established))))`.
    pub fn sync_subsume(&self, candidate: &LocalZone, established: &LocalZone) -> bool {
        let Some(cand) = self.sync_clock_zone(candidate) else {
            return true;
        };
        match self.sync_clock_zone(established) {
            Some(est) => self.extra_m(&est).includes(&cand),
            None => false,
        }
    }
}

/// Per-variable extrapolation bound on the clock layout, zero variable
/// first. Never-compared clocks get 0: their exact value stops mattering but
/// their order relative to 0 is kept.
pub fn extrapolation_bounds(m: &MaxConstants) -> Vec<i64> {
    std::iter::once(0)
        .chain(m.per_clock.iter().map(|c| c.map_or(0, i64::from)))
        .collect()
}

/// Classical maximal-constant extrapolation of a clock zone: upper bounds
/// beyond `M(x)` are dropped, lower bounds beyond `M(y)` are relaxed to
/// `> M(y)`.
pub fn extra_m(z: &ClockZone, m: &MaxConstants) -> ClockZone {
    let bounds = extrapolation_bounds(m);
    let n = z.0.dim();
    assert_eq!(bounds.len(), n, "constants do not match the clock layout");
    let mut d = z.0.clone();
    let mut changed = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = d.get(i, j);
            if b.is_infinite() {
                continue;
            }
            if i != ZERO && b > Bound::weak(bounds[i]) {
                d.set(i, j, Bound::INFINITY);
                changed = true;
            } else if j != ZERO && b < Bound::strict(-bounds[j]) {
                d.set(i, j, Bound::strict(-bounds[j]));
                changed = true;
            }
        }
    }
    if !changed {
        return z.clone();
    }
    ClockZone(d.canonicalize().expect("widening cannot empty a zone"))
}

#[cfg(test)]
mod tests;
