use std::fmt;
use std::ops::Add;

/// Largest magnitude a finite bound may carry.
///
/// Guard constants are small naturals, so anything near this limit means a
/// malformed model or constants drifting without bound. Exploration checks
/// zones against it and aborts instead of letting arithmetic wrap.
pub const BOUND_LIMIT: i64 = 1 << 40;

/// An upper bound `(◁, c)` on a difference of two variables, or infinity.
///
/// Encoded as `2c + 1` for a weak bound (`≤ c`) and `2c` for a strict bound
/// (`< c`), so the derived integer order is the bound order:
/// `(<, c) < (≤, c) < (<, c + 1)` and infinity is the maximum.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(i64);

impl Bound {
    pub const INFINITY: Bound = Bound(i64::MAX);
    pub const LE_ZERO: Bound = Bound(1);
    pub const LT_ZERO: Bound = Bound(0);

    pub fn weak(value: i64) -> Bound {
        assert!(value.abs() <= BOUND_LIMIT, "bound constant {value} out of range");
        Bound(value * 2 + 1)
    }

    pub fn strict(value: i64) -> Bound {
        assert!(value.abs() <= BOUND_LIMIT, "bound constant {value} out of range");
        Bound(value * 2)
    }

    pub fn new(value: i64, strict: bool) -> Bound {
        if strict {
            Bound::strict(value)
        } else {
            Bound::weak(value)
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Bound::INFINITY
    }

    /// The constant `c`, or `None` for infinity.
    pub fn value(self) -> Option<i64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0 >> 1)
        }
    }

    pub fn is_strict(self) -> bool {
        !self.is_infinite() && self.0 & 1 == 0
    }

    pub fn checked_add(self, other: Bound) -> Option<Bound> {
        if self.is_infinite() || other.is_infinite() {
            return Some(Bound::INFINITY);
        }
        let value = (self.0 >> 1).checked_add(other.0 >> 1)?;
        let raw = value.checked_mul(2)?.checked_add(self.0 & other.0 & 1)?;
        if raw == i64::MAX {
            return None;
        }
        Some(Bound(raw))
    }

    /// The bound of the complementary half-space.
    ///
    /// `¬(x − y ◁ c)` is `y − x ◁' −c` with the strictness flipped. Returns
    /// `None` for infinity, whose complement is empty.
    pub fn complement(self) -> Option<Bound> {
        let c = self.value()?;
        Some(Bound::new(-c, !self.is_strict()))
    }
}

impl Add for Bound {
    type Output = Bound;

    fn add(self, other: Bound) -> Bound {
        self.checked_add(other)
            .unwrap_or_else(|| panic!("bound arithmetic overflow: {self:?} + {other:?}"))
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "<inf"),
            Some(c) if self.is_strict() => write!(f, "<{c}"),
            Some(c) => write!(f, "<={c}"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
