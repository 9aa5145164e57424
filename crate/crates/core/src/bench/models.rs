//! Scalable model families. Each generator returns model text whose header
//! describes the encoding and names the checked target.

use std::fmt::Write as _;

/// Incremental model text writer.
struct Text {
    head: String,
    body: String,
}

impl Text {
    fn new(name: &str, header: &[&str], target: &str) -> Text {
        let mut head = String::new();
        for line in header {
            writeln!(head, "# {line}").unwrap();
        }
        writeln!(head, "# target: {target}").unwrap();
        writeln!(head, "system {name}").unwrap();
        Text { head, body: String::new() }
    }

    fn process(&mut self, p: &str) {
        writeln!(self.head, "process {p}").unwrap();
    }

    fn clock(&mut self, p: &str, c: &str) {
        writeln!(self.head, "clock {p} {c}").unwrap();
    }

    fn states(&mut self, p: &str, states: &[String]) {
        for (i, s) in states.iter().enumerate() {
            let init = if i == 0 { " initial" } else { "" };
            writeln!(self.body, "state {p} {s}{init}").unwrap();
        }
    }

    fn trans(&mut self, p: &str, src: &str, tgt: &str, action: &str, guard: &str, reset: &str) {
        write!(self.body, "trans {p} {src} {tgt} {action}").unwrap();
        if !guard.is_empty() {
            write!(self.body, " guard{{{guard}}}").unwrap();
        }
        if !reset.is_empty() {
            write!(self.body, " reset{{{reset}}}").unwrap();
        }
        self.body.push('\n');
    }

    fn finish(self) -> String {
        self.head + &self.body
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Clients that each prepare on their own clock and then take a shared lock.
pub fn parallel(n: usize) -> (String, String) {
    let target = "C0=cs,C1=cs".to_string();
    let mut t = Text::new(
        &format!("parallel{n}"),
        &[
            &format!("Parallel, {n} clients and one lock."),
            "Client i: idle -start_i (reset x_i)-> ready -acq_i (x_i<=2, with lock, reset x_i)-> cs",
            "          cs -rel_i (x_i>=1, with lock)-> done.",
            "Lock: free -acq_i-> busy_i -rel_i-> free.",
            "start_i are private, so their interleavings are independent.",
        ],
        &target,
    );
    let clients = names("C", n);
    for c in &clients {
        t.process(c);
    }
    t.process("Lock");
    for (i, c) in clients.iter().enumerate() {
        t.clock(c, &format!("x{i}"));
    }
    for (i, c) in clients.iter().enumerate() {
        let x = format!("x{i}");
        t.states(c, &["idle".into(), "ready".into(), "cs".into(), "done".into()]);
        t.trans(c, "idle", "ready", &format!("start{i}"), "", &x);
        t.trans(c, "ready", "cs", &format!("acq{i}"), &format!("{x}<=2"), &x);
        t.trans(c, "cs", "done", &format!("rel{i}"), &format!("{x}>=1"), "");
    }
    let mut lock_states = vec!["free".to_string()];
    lock_states.extend((0..n).map(|i| format!("busy{i}")));
    t.states("Lock", &lock_states);
    for i in 0..n {
        t.trans("Lock", "free", &format!("busy{i}"), &format!("acq{i}"), "", "");
        t.trans("Lock", &format!("busy{i}"), "free", &format!("rel{i}"), "", "");
    }
    (t.finish(), target)
}

/// Fischer's protocol with the shared `id` register as an automaton.
pub fn fischer(n: usize) -> (String, String) {
    let target = "P0=cs,P1=cs".to_string();
    let mut t = Text::new(
        &format!("fischer{n}"),
        &[
            &format!("Fischer mutual exclusion, {n} processes; delay bound 2."),
            "Process i: A -try_i (id==0, reset x_i)-> B -set_i (x_i<=2, id:=i, reset x_i)-> C",
            "           C -enter_i (x_i>2, id==i)-> cs -exit_i (id:=0)-> A",
            "           C -retry_i (x_i>2, id!=i)-> A.",
            "Id register: one state per value, reads are self-loops.",
            "Every action involves the register, so no two actions are independent.",
        ],
        &target,
    );
    let procs = names("P", n);
    for p in &procs {
        t.process(p);
    }
    t.process("Id");
    for (i, p) in procs.iter().enumerate() {
        t.clock(p, &format!("x{i}"));
    }
    for (i, p) in procs.iter().enumerate() {
        let x = format!("x{i}");
        t.states(p, &["A".into(), "B".into(), "C".into(), "cs".into()]);
        t.trans(p, "A", "B", &format!("try{i}"), "", &x);
        t.trans(p, "B", "C", &format!("set{i}"), &format!("{x}<=2"), &x);
        t.trans(p, "C", "cs", &format!("enter{i}"), &format!("{x}>2"), "");
        t.trans(p, "C", "A", &format!("retry{i}"), &format!("{x}>2"), "");
        t.trans(p, "cs", "A", &format!("exit{i}"), "", "");
    }
    // id = 0 is `id0`; id = i + 1 is `id{i+1}`.
    let values: Vec<String> = (0..=n).map(|v| format!("id{v}")).collect();
    t.states("Id", &values);
    for i in 0..n {
        let own = format!("id{}", i + 1);
        t.trans("Id", "id0", "id0", &format!("try{i}"), "", "");
        for v in &values {
            t.trans("Id", v, &own, &format!("set{i}"), "", "");
            t.trans("Id", v, "id0", &format!("exit{i}"), "", "");
            if *v != own {
                t.trans("Id", v, v, &format!("retry{i}"), "", "");
            }
        }
        t.trans("Id", &own, &own, &format!("enter{i}"), "", "");
    }
    (t.finish(), target)
}

/// Philosophers that put their left fork back when the right one does not
/// come within a bound.
pub fn dining(n: usize) -> (String, String) {
    let target = "P0=eat,P1=eat".to_string();
    let mut t = Text::new(
        &format!("dining{n}"),
        &[
            &format!("Dining philosophers with timeout, {n} philosophers and {n} forks."),
            "Philosopher i: think -hungry_i (reset x_i)-> hungry -left_i (with fork i, reset x_i)-> hasL",
            "               hasL -right_i (x_i<=2, with fork i+1, reset x_i)-> eat",
            "               hasL -giveup_i (x_i>2, with fork i)-> think",
            "               eat -done_i (x_i>=1, with forks i and i+1)-> think.",
            "Fork j: free -left_j/giveup_j|done_j-> ... as left fork of j, free -right_{j-1}/done_{j-1} as right fork.",
        ],
        &target,
    );
    let phils = names("P", n);
    let forks = names("F", n);
    for p in phils.iter().chain(&forks) {
        t.process(p);
    }
    for (i, p) in phils.iter().enumerate() {
        t.clock(p, &format!("x{i}"));
    }
    for (i, p) in phils.iter().enumerate() {
        let x = format!("x{i}");
        t.states(p, &["think".into(), "hungry".into(), "hasL".into(), "eat".into()]);
        t.trans(p, "think", "hungry", &format!("hungry{i}"), "", &x);
        t.trans(p, "hungry", "hasL", &format!("left{i}"), "", &x);
        t.trans(p, "hasL", "eat", &format!("right{i}"), &format!("{x}<=2"), &x);
        t.trans(p, "hasL", "think", &format!("giveup{i}"), &format!("{x}>2"), "");
        t.trans(p, "eat", "think", &format!("done{i}"), &format!("{x}>=1"), "");
    }
    for (j, f) in forks.iter().enumerate() {
        let prev = (j + n - 1) % n;
        t.states(f, &["free".into(), "byL".into(), "byR".into()]);
        t.trans(f, "free", "byL", &format!("left{j}"), "", "");
        t.trans(f, "byL", "free", &format!("giveup{j}"), "", "");
        t.trans(f, "byL", "free", &format!("done{j}"), "", "");
        t.trans(f, "free", "byR", &format!("right{prev}"), "", "");
        t.trans(f, "byR", "free", &format!("done{prev}"), "", "");
    }
    (t.finish(), target)
}

/// Stations that compute locally and then report to a collector in a
/// time window.
pub fn corsso(n: usize) -> (String, String) {
    let target = "S0=sent,S1=sent".to_string();
    let mut t = Text::new(
        &format!("corsso{n}"),
        &[
            &format!("Sensor/collector protocol, {n} stations and one collector."),
            "Station i: init -sense_i (reset x_i)-> data -compute_i (x_i>=1, reset x_i)-> ready",
            "           ready -report_i (x_i<=3, with collector, reset x_i)-> sent",
            "           sent -commit_i (x_i>=1, with collector)-> init",
            "           ready -late_i (x_i>3)-> err.",
            "Collector: idle -report_i-> got_i -commit_i-> idle.",
            "The collector serves one report at a time, so two stations are never both in sent.",
        ],
        &target,
    );
    let st = names("S", n);
    for s in &st {
        t.process(s);
    }
    t.process("Col");
    for (i, s) in st.iter().enumerate() {
        t.clock(s, &format!("x{i}"));
    }
    for (i, s) in st.iter().enumerate() {
        let x = format!("x{i}");
        t.states(s, &["init".into(), "data".into(), "ready".into(), "sent".into(), "err".into()]);
        t.trans(s, "init", "data", &format!("sense{i}"), "", &x);
        t.trans(s, "data", "ready", &format!("compute{i}"), &format!("{x}>=1"), &x);
        t.trans(s, "ready", "sent", &format!("report{i}"), &format!("{x}<=3"), &x);
        t.trans(s, "sent", "init", &format!("commit{i}"), &format!("{x}>=1"), "");
        t.trans(s, "ready", "err", &format!("late{i}"), &format!("{x}>3"), "");
    }
    let mut col = vec!["idle".to_string()];
    col.extend((0..n).map(|i| format!("got{i}")));
    t.states("Col", &col);
    for i in 0..n {
        t.trans("Col", "idle", &format!("got{i}"), &format!("report{i}"), "", "");
        t.trans("Col", &format!("got{i}"), "idle", &format!("commit{i}"), "", "");
    }
    (t.finish(), target)
}

/// Processes entering a critical region in turn, arbitrated by a token.
pub fn critical(n: usize) -> (String, String) {
    let target = "P0=cs,P1=cs".to_string();
    let mut t = Text::new(
        &format!("critical{n}"),
        &[
            &format!("Critical region with a token arbiter, {n} processes."),
            "Process i: idle -req_i (reset x_i)-> wait -enter_i (x_i<=2, arbiter at i, reset x_i)-> cs",
            "           cs -leave_i (x_i>=1, arbiter i -> i+1)-> idle",
            "           wait -timeout_i (x_i>2)-> idle.",
            "Arbiter: at_i -enter_i-> in_i -leave_i-> at_{i+1}; at_i -pass_i-> at_{i+1} when process i is idle.",
        ],
        &target,
    );
    let procs = names("P", n);
    for p in &procs {
        t.process(p);
    }
    t.process("Arb");
    for (i, p) in procs.iter().enumerate() {
        t.clock(p, &format!("x{i}"));
    }
    for (i, p) in procs.iter().enumerate() {
        let x = format!("x{i}");
        t.states(p, &["idle".into(), "wait".into(), "cs".into()]);
        t.trans(p, "idle", "wait", &format!("req{i}"), "", &x);
        t.trans(p, "wait", "cs", &format!("enter{i}"), &format!("{x}<=2"), &x);
        t.trans(p, "cs", "idle", &format!("leave{i}"), &format!("{x}>=1"), "");
        t.trans(p, "wait", "idle", &format!("timeout{i}"), &format!("{x}>2"), "");
        t.trans(p, "idle", "idle", &format!("pass{i}"), "", "");
    }
    let mut arb = Vec::new();
    for i in 0..n {
        arb.push(format!("at{i}"));
        arb.push(format!("in{i}"));
    }
    t.states("Arb", &arb);
    for i in 0..n {
        let next = format!("at{}", (i + 1) % n);
        t.trans("Arb", &format!("at{i}"), &format!("in{i}"), &format!("enter{i}"), "", "");
        t.trans("Arb", &format!("in{i}"), &next, &format!("leave{i}"), "", "");
        t.trans("Arb", &format!("at{i}"), &next, &format!("pass{i}"), "", "");
    }
    (t.finish(), target)
}
