//! Small networks shipped with the library, used by demos and tests.

use super::{parse_network, Network};

pub const FIG1_SOURCE: &str = include_str!("../../models/fig1.ta");
pub const FIG2_SOURCE: &str = include_str!("../../models/fig2.ta");
pub const INTRO_SOURCE: &str = include_str!("../../models/intro.ta");

fn load(source: &str) -> Network {
    parse_network(source).expect("bundled model parses")
}

/// Two processes with one local action each (`a` resets `x`, `b` resets `y`).
pub fn fig1() -> Network {
    load(FIG1_SOURCE)
}

/// Two processes that must meet on `c` after diverging local histories.
pub fn fig2() -> Network {
    load(FIG2_SOURCE)
}

/// `a` guarded by `x <= 1`, `b` guarded by `y >= 2`, no shared action.
pub fn intro() -> Network {
    load(INTRO_SOURCE)
}

pub fn all() -> Vec<(&'static str, Network)> {
    vec![("fig1", fig1()), ("fig2", fig2()), ("intro", intro())]
}
