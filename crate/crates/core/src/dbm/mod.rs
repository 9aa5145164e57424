//! Difference bound matrices over an indexed set of variables.
//!
//! Entry `(i, j)` bounds `var_i − var_j`. Index 0 is the zero variable, a
//! constant 0 that lets absolute constraints be written as differences.
//! All zone flavours in [`crate::zones`] are thin wrappers around [`Dbm`].

mod bound;

use std::fmt;

pub use bound::{Bound, BOUND_LIMIT};

/// Index of the zero variable in every layout.
pub const ZERO: usize = 0;

/// Names of the variables indexed by a [`Dbm`], used for printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    names: Vec<String>,
}

impl VariableLayout {
    /// `names` excludes the zero variable, which is prepended.
    pub fn new<I, S>(names: I) -> VariableLayout
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut all = vec!["0".to_string()];
        all.extend(names.into_iter().map(Into::into));
        VariableLayout { names: all }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A single difference constraint `var_i − var_j ◁ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub i: usize,
    pub j: usize,
    pub bound: Bound,
}

impl Constraint {
    pub fn new(i: usize, j: usize, bound: Bound) -> Constraint {
        Constraint { i, j, bound }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dbm {
    dim: usize,
    entries: Vec<Bound>,
}

impl Dbm {
    /// Every variable free; diagonal `(≤, 0)`.
    pub fn unconstrained(dim: usize) -> Dbm {
        assert!(dim >= 1, "a DBM needs at least the zero variable");
        let mut entries = vec![Bound::INFINITY; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Bound::LE_ZERO;
        }
        Dbm { dim, entries }
    }

    /// The single point where every variable equals 0.
    pub fn zero(dim: usize) -> Dbm {
        assert!(dim >= 1, "a DBM needs at least the zero variable");
        Dbm {
            dim,
            entries: vec![Bound::LE_ZERO; dim * dim],
        }
    }

    /// A matrix denoting the empty set.
    pub fn empty(dim: usize) -> Dbm {
        let mut d = Dbm::unconstrained(dim);
        d.set(0, 0, Bound::LT_ZERO);
        d
    }

    /// Canonical DBM of the conjunction of `constraints`, or `None` if empty.
    pub fn from_constraints(dim: usize, constraints: &[Constraint]) -> Option<Dbm> {
        let mut d = Dbm::unconstrained(dim);
        for c in constraints {
            let slot = &mut d.entries[c.i * dim + c.j];
            *slot = (*slot).min(c.bound);
        }
        d.canonicalize()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.entries[i * self.dim + j]
    }

    /// Raw write. The result is generally not canonical.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.entries[i * self.dim + j] = b;
    }

    /// True when some diagonal entry is below `(≤, 0)`.
    pub fn is_empty(&self) -> bool {
        (0..self.dim).any(|i| self.get(i, i) < Bound::LE_ZERO)
    }

    /// Largest magnitude of a finite entry.
    pub fn max_abs_constant(&self) -> i64 {
        self.entries
            .iter()
            .filter_map(|b| b.value())
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }

    /// All-pairs tightening (Floyd–Warshall). `None` on a negative cycle.
    pub fn canonicalize(mut self) -> Option<Dbm> {
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.entries[i * n + k];
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let kj = self.entries[k * n + j];
                    if kj.is_infinite() {
                        continue;
                    }
                    let through = ik + kj;
                    if through < self.entries[i * n + j] {
                        self.entries[i * n + j] = through;
                    }
                }
            }
            if (0..n).any(|i| self.entries[i * n + i] < Bound::LE_ZERO) {
                return None;
            }
        }
        for i in 0..n {
            if self.entries[i * n + i] < Bound::LE_ZERO {
                return None;
            }
            self.entries[i * n + i] = Bound::LE_ZERO;
        }
        Some(self)
    }

    /// Whether every entry is already as tight as the triangle inequality allows.
    pub fn is_canonical(&self) -> bool {
        let n = self.dim;
        if (0..n).any(|i| self.get(i, i) != Bound::LE_ZERO) {
            return false;
        }
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    if self.get(i, k) + self.get(k, j) < self.get(i, j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Intersect a canonical DBM with `var_i − var_j ◁ c`, re-tightening
    /// incrementally through the new edge.
    pub fn constrain(&self, c: Constraint) -> Option<Dbm> {
        let mut d = self.clone();
        if d.constrain_in_place(c) {
            Some(d)
        } else {
            None
        }
    }

    /// Apply every constraint in turn; `None` as soon as one empties the zone.
    pub fn constrain_all(&self, constraints: &[Constraint]) -> Option<Dbm> {
        let mut d = self.clone();
        for &c in constraints {
            if !d.constrain_in_place(c) {
                return None;
            }
        }
        Some(d)
    }

    /// In-place [`Dbm::constrain`]; returns false (leaving garbage) when empty.
    pub fn constrain_in_place(&mut self, c: Constraint) -> bool {
        let n = self.dim;
        assert!(c.i < n && c.j < n, "constraint index outside the layout");
        if c.bound + self.get(c.j, c.i) < Bound::LE_ZERO {
            return false;
        }
        if c.bound >= self.get(c.i, c.j) {
            return true;
        }
        self.set(c.i, c.j, c.bound);
        // Shortest paths that now route through the edge i -> j.
        let col_i: Vec<Bound> = (0..n).map(|k| self.get(k, c.i)).collect();
        let row_j: Vec<Bound> = (0..n).map(|l| self.get(c.j, l)).collect();
        for (k, &ki) in col_i.iter().enumerate() {
            if ki.is_infinite() {
                continue;
            }
            let via = ki + c.bound;
            for (l, &jl) in row_j.iter().enumerate() {
                if jl.is_infinite() {
                    continue;
                }
                let through = via + jl;
                if through < self.get(k, l) {
                    self.set(k, l, through);
                }
            }
        }
        true
    }

    /// Set inclusion for canonical DBMs of the same layout: `inner ⊆ self`.
    pub fn includes(&self, inner: &Dbm) -> bool {
        assert_eq!(self.dim, inner.dim, "layout mismatch in inclusion test");
        inner
            .entries
            .iter()
            .zip(&self.entries)
            .all(|(a, b)| a <= b)
    }

    /// Intersection of two canonical DBMs.
    pub fn intersect(&self, other: &Dbm) -> Option<Dbm> {
        assert_eq!(self.dim, other.dim, "layout mismatch in intersection");
        let mut d = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && other.get(i, j) < d.get(i, j) && !d.constrain_in_place(Constraint::new(i, j, other.get(i, j))) {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// Let `var_i` grow arbitrarily: erase every upper bound `var_i − y`.
    ///
    /// On a canonical input the result is canonical without re-closure.
    pub fn free_upper(&self, i: usize) -> Dbm {
        let mut d = self.clone();
        for j in 0..self.dim {
            if j != i {
                d.set(i, j, Bound::INFINITY);
            }
        }
        d
    }

    /// `var_i := var_j`. Copies row and column `j` into `i`, which on a
    /// canonical input equals erasing `var_i` and adding `var_i = var_j`.
    pub fn assign(&self, i: usize, j: usize) -> Dbm {
        assert_ne!(i, j, "assignment of a variable to itself");
        let mut d = self.clone();
        for k in 0..self.dim {
            d.set(i, k, self.get(j, k));
            d.set(k, i, self.get(k, j));
        }
        d.set(i, i, Bound::LE_ZERO);
        d.set(i, j, Bound::LE_ZERO);
        d.set(j, i, Bound::LE_ZERO);
        d
    }

    /// `self ∖ other` as a list of pairwise-disjoint canonical DBMs.
    ///
    /// Piece `k` is `self ∧ c_1 ∧ … ∧ c_{k−1} ∧ ¬c_k` over the finite
    /// off-diagonal constraints `c` of `other`.
    pub fn subtract(&self, other: &Dbm) -> Vec<Dbm> {
        assert_eq!(self.dim, other.dim, "layout mismatch in subtraction");
        if other.is_empty() {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = other.get(i, j);
                if i == j || b >= rest.get(i, j) {
                    continue;
                }
                let negated = b.complement().expect("finite by the check above");
                if let Some(piece) = rest.constrain(Constraint::new(j, i, negated)) {
                    pieces.push(piece);
                }
                if !rest.constrain_in_place(Constraint::new(i, j, b)) {
                    return pieces;
                }
            }
        }
        pieces
    }

    /// Finite off-diagonal entries as `(i, j, bound)`.
    pub fn finite_entries(&self) -> impl Iterator<Item = Constraint> + '_ {
        (0..self.dim).flat_map(move |i| {
            (0..self.dim).filter_map(move |j| {
                let b = self.get(i, j);
                (i != j && !b.is_infinite()).then_some(Constraint::new(i, j, b))
            })
        })
    }

    /// Human-readable constraint list using `layout` names.
    pub fn describe(&self, layout: &VariableLayout) -> Vec<String> {
        assert_eq!(layout.dim(), self.dim);
        let mut out = Vec::new();
        for c in self.finite_entries() {
            let v = c.bound.value().unwrap();
            let op = if c.bound.is_strict() { "<" } else { "<=" };
            let text = if c.j == ZERO {
                format!("{} {op} {v}", layout.name(c.i))
            } else if c.i == ZERO {
                let op = if c.bound.is_strict() { ">" } else { ">=" };
                format!("{} {op} {}", layout.name(c.j), -v)
            } else {
                format!("{} - {} {op} {v}", layout.name(c.i), layout.name(c.j))
            };
            out.push(text);
        }
        out
    }
}

impl fmt::Debug for Dbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dbm[{}]", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format!("{:>6}", self.get(i, j).to_string())).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn le(i: usize, j: usize, c: i64) -> Constraint {
        Constraint::new(i, j, Bound::weak(c))
    }

    fn lt(i: usize, j: usize, c: i64) -> Constraint {
        Constraint::new(i, j, Bound::strict(c))
    }

    /// Membership of a point with coordinates `p[k] / 2`; `p[0]` is the zero variable.
    fn contains_half(d: &Dbm, p: &[i64]) -> bool {
        (0..d.dim()).all(|i| {
            (0..d.dim()).all(|j| {
                let b = d.get(i, j);
                match b.value() {
                    None => true,
                    Some(c) if b.is_strict() => p[i] - p[j] < 2 * c,
                    Some(c) => p[i] - p[j] <= 2 * c,
                }
            })
        })
    }

    /// Every half-integer point of `[-range, range]^(dim-1)`.
    fn grid(dim: usize, range: i64) -> Vec<Vec<i64>> {
        let mut pts = vec![vec![0i64]];
        for _ in 1..dim {
            let mut next = Vec::new();
            for p in &pts {
                for v in -2 * range..=2 * range {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts
    }

    #[test]
    fn canonical_identity_is_unchanged() {
        let d = Dbm::unconstrained(3);
        assert_eq!(d.clone().canonicalize(), Some(d));
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        assert_eq!(Dbm::from_constraints(2, &[le(1, 0, 2), le(0, 1, -3)]), None);
    }

    #[test]
    fn transitive_bound_is_tightened() {
        // a = 1, b = 2, c = 3
        let d = Dbm::from_constraints(4, &[le(1, 2, 1), le(2, 3, 1)]).unwrap();
        assert_eq!(d.get(1, 3), Bound::weak(2));
        assert!(d.get(3, 1).is_infinite());
    }

    #[test]
    fn constrain_examples() {
        let free = Dbm::unconstrained(2);
        let x5 = free.constrain(le(1, 0, 5)).unwrap();
        assert_eq!(x5.get(1, 0), Bound::weak(5));
        assert!(x5.constrain(le(0, 1, -6)).is_none());

        let ab = Dbm::from_constraints(3, &[le(1, 2, 2)]).unwrap();
        let eq = ab.constrain(le(2, 1, -2)).unwrap();
        assert_eq!(eq.get(1, 2), Bound::weak(2));
        assert_eq!(eq.get(2, 1), Bound::weak(-2));
        let direct = Dbm::from_constraints(3, &[le(1, 2, 2), le(2, 1, -2)]).unwrap();
        assert_eq!(eq, direct);
    }

    #[test]
    fn includes_examples() {
        let x5 = Dbm::from_constraints(2, &[le(1, 0, 5)]).unwrap();
        let x3 = Dbm::from_constraints(2, &[le(1, 0, 3)]).unwrap();
        assert!(x5.includes(&x5));
        assert!(x5.includes(&x3));
        assert!(!x3.includes(&x5));
    }

    #[test]
    fn free_upper_initial_zone() {
        // layout: 0, t, x~ ; {t - x~ = 0, x~ = 0}
        let point = Dbm::from_constraints(3, &[le(1, 2, 0), le(2, 1, 0), le(2, 0, 0), le(0, 2, 0)]).unwrap();
        let up = point.free_upper(1);
        let expected = Dbm::from_constraints(3, &[le(2, 0, 0), le(0, 2, 0), le(2, 1, 0)]).unwrap();
        assert_eq!(up, expected);
        assert_eq!(up.free_upper(1), up);
    }

    #[test]
    fn free_upper_by_sampling() {
        // {a = 3, b = 5}; freeing a keeps b = 5 and a >= 3
        let d = Dbm::from_constraints(3, &[le(1, 0, 3), le(0, 1, -3), le(2, 0, 5), le(0, 2, -5)]).unwrap();
        let up = d.free_upper(1);
        for p in grid(3, 8) {
            let a = p[1];
            let b = p[2];
            let expected = b == 10 && a >= 6;
            assert_eq!(contains_half(&up, &p), expected, "{p:?}");
        }
    }

    #[test]
    fn assign_examples() {
        // layout: 0, t_p, x~ ; {t_p - x~ >= 2}
        let d = Dbm::from_constraints(3, &[le(2, 1, -2), le(0, 1, 0), le(0, 2, 0)]).unwrap();
        let r = d.assign(2, 1);
        assert_eq!(r.get(2, 1), Bound::LE_ZERO);
        assert_eq!(r.get(1, 2), Bound::LE_ZERO);
        assert_eq!(r.assign(2, 1), r);
        for p in grid(3, 4) {
            if contains_half(&r, &p) {
                assert_eq!(p[1], p[2]);
            }
        }
    }

    #[test]
    fn subtract_examples() {
        let z = Dbm::from_constraints(2, &[le(1, 0, 2), le(0, 1, 0)]).unwrap();
        assert!(z.subtract(&z).is_empty());
        assert_eq!(z.subtract(&Dbm::empty(2)), vec![z.clone()]);
        let small = Dbm::from_constraints(2, &[le(1, 0, 1), le(0, 1, 0)]).unwrap();
        let diff = z.subtract(&small);
        let expected = Dbm::from_constraints(2, &[le(1, 0, 2), lt(0, 1, -1)]).unwrap();
        assert_eq!(diff, vec![expected]);
    }

    fn arb_constraint(dim: usize) -> impl Strategy<Value = Constraint> {
        (0..dim, 0..dim, -4i64..=4, any::<bool>()).prop_map(|(i, j, c, s)| Constraint::new(i, j, Bound::new(c, s)))
    }

    fn arb_dbm(dim: usize) -> impl Strategy<Value = Dbm> {
        prop::collection::vec(arb_constraint(dim), 0..7)
            .prop_filter_map("empty", move |cs| Dbm::from_constraints(dim, &cs))
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn canonicalize_is_idempotent(d in arb_dbm(4)) {
            prop_assert!(d.is_canonical());
            prop_assert_eq!(d.clone().canonicalize(), Some(d));
        }

        #[test]
        fn incremental_constrain_matches_full_closure(d in arb_dbm(4), c in arb_constraint(4)) {
            let mut raw = d.clone();
            raw.set(c.i, c.j, raw.get(c.i, c.j).min(c.bound));
            prop_assert_eq!(d.constrain(c), raw.canonicalize());
        }

        #[test]
        fn includes_is_a_partial_order(a in arb_dbm(3), b in arb_dbm(3), c in arb_dbm(3)) {
            prop_assert!(a.includes(&a));
            if a.includes(&b) && b.includes(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.includes(&b) && b.includes(&c) {
                prop_assert!(a.includes(&c));
            }
        }

        #[test]
        fn includes_agrees_with_sampling(a in arb_dbm(3), b in arb_dbm(3)) {
            let escapes = grid(3, 12).into_iter().any(|p| contains_half(&b, &p) && !contains_half(&a, &p));
            prop_assert_eq!(a.includes(&b), !escapes);
        }

        #[test]
        fn free_upper_and_assign_stay_canonical(d in arb_dbm(4), i in 1usize..4, j in 0usize..4) {
            let up = d.free_upper(i);
            prop_assert!(up.is_canonical());
            if i != j {
                let asg = d.assign(i, j);
                prop_assert!(asg.is_canonical());
                // erase-then-constrain route
                let mut erased = d.clone();
                for k in 0..4 {
                    if k != i {
                        erased.set(i, k, Bound::INFINITY);
                        erased.set(k, i, Bound::INFINITY);
                    }
                }
                let other = erased
                    .canonicalize()
                    .and_then(|e| e.constrain_all(&[le(i, j, 0), le(j, i, 0)]));
                prop_assert_eq!(Some(asg), other);
            }
        }

        #[test]
        fn subtract_is_exact(a in arb_dbm(3), b in arb_dbm(3)) {
            let pieces = a.subtract(&b);
            for p in &pieces {
                prop_assert!(p.is_canonical());
            }
            for p in grid(3, 12) {
                let expected = contains_half(&a, &p) && !contains_half(&b, &p);
                let hits = pieces.iter().filter(|z| contains_half(z, &p)).count();
                prop_assert_eq!(expected, hits > 0);
                prop_assert!(hits <= 1, "pieces overlap at {:?}", p);
            }
        }
    }
}
