use std::fmt;

use super::Network;

/// Print in the input grammar. Clock lines follow global clock order, so the
/// output reparses to a structurally equal network.
pub(super) fn write_network(net: &Network, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "system {}", net.name)?;
    for p in &net.processes {
        writeln!(f, "process {}", p.name)?;
    }
    for c in &net.clocks {
        writeln!(f, "clock {} {}", net.processes[c.owner].name, c.name)?;
    }
    for p in &net.processes {
        for (i, s) in p.states.iter().enumerate() {
            if i as u32 == p.initial {
                writeln!(f, "state {} {} initial", p.name, s)?;
            } else {
                writeln!(f, "state {} {}", p.name, s)?;
            }
        }
    }
    for p in &net.processes {
        for t in &p.transitions {
            write!(
                f,
                "trans {} {} {} {}",
                p.name,
                p.states[t.source as usize],
                p.states[t.target as usize],
                net.actions[t.action]
            )?;
            if !t.guard.is_true() {
                let atoms: Vec<String> = t
                    .guard
                    .atoms
                    .iter()
                    .map(|a| format!("{}{}{}", net.clocks[a.clock].name, a.relation.symbol(), a.constant))
                    .collect();
                write!(f, " guard{{{}}}", atoms.join("&&"))?;
            }
            if !t.resets.is_empty() {
                let names: Vec<&str> = t.resets.iter().map(|&c| net.clocks[c].name.as_str()).collect();
                write!(f, " reset{{{}}}", names.join(","))?;
            }
            writeln!(f)?;
        }
    }
    Ok(())
}
