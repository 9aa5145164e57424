use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Atom, Clock, Guard, Network, Process, Relation, Transition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Validation { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Validation { line, .. } => *line,
        }
    }

    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. } | ParseError::Validation { column, .. } => *column,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ParseError::Syntax { message, .. } | ParseError::Validation { message, .. } => message,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Loc {
    line: usize,
    column: usize,
}

impl Loc {
    fn syntax(self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.column, message: message.into() }
    }

    fn invalid(self, message: impl Into<String>) -> ParseError {
        ParseError::Validation { line: self.line, column: self.column, message: message.into() }
    }
}

#[derive(Debug)]
struct Token<'a> {
    text: &'a str,
    loc: Loc,
}

/// Split a comment-free line into words. `guard{...}` and `reset{...}` are
/// single tokens even when they contain spaces.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token<'_>>, ParseError> {
    let bytes = line.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let loc = Loc { line: line_no, column: start + 1 };
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'{' {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'{' {
            match line[i..].find('}') {
                Some(off) => i += off + 1,
                None => return Err(loc.syntax("unterminated '{'")),
            }
            if i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                let loc = Loc { line: line_no, column: i + 1 };
                return Err(loc.syntax("expected whitespace after '}'"));
            }
        }
        tokens.push(Token { text: &line[start..i], loc });
    }
    Ok(tokens)
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn ident<'a>(tok: &Token<'a>, what: &str) -> Result<&'a str, ParseError> {
    if is_ident(tok.text) {
        Ok(tok.text)
    } else {
        Err(tok.loc.syntax(format!("invalid {what} identifier '{}'", tok.text)))
    }
}

/// Body of `keyword{...}` with the column where the body starts.
fn braced<'a>(tok: &Token<'a>, keyword: &str) -> Option<(&'a str, Loc)> {
    let rest = tok.text.strip_prefix(keyword)?.strip_prefix('{')?;
    let body = rest.strip_suffix('}')?;
    Some((body, Loc { line: tok.loc.line, column: tok.loc.column + keyword.len() + 1 }))
}

fn parse_atom(text: &str, loc: Loc) -> Result<(&str, Relation, u32), ParseError> {
    let text = text.trim();
    let op_start = text
        .find(['<', '>', '='])
        .ok_or_else(|| loc.syntax(format!("atom '{text}' has no comparison operator")))?;
    let (clock, rest) = text.split_at(op_start);
    let (relation, value) = if let Some(v) = rest.strip_prefix("<=") {
        (Relation::Le, v)
    } else if let Some(v) = rest.strip_prefix(">=") {
        (Relation::Ge, v)
    } else if let Some(v) = rest.strip_prefix("==") {
        (Relation::Eq, v)
    } else if let Some(v) = rest.strip_prefix('<') {
        (Relation::Lt, v)
    } else if let Some(v) = rest.strip_prefix('>') {
        (Relation::Gt, v)
    } else {
        return Err(loc.syntax(format!("unknown operator in atom '{text}'")));
    };
    let clock = clock.trim();
    let value = value.trim();
    if !is_ident(clock) {
        return Err(loc.syntax(format!("invalid clock identifier '{clock}' in atom")));
    }
    if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
        return Err(loc.syntax(format!("expected a natural constant in atom '{text}'")));
    }
    let constant = value
        .parse::<u32>()
        .map_err(|_| loc.syntax(format!("constant '{value}' too large")))?;
    Ok((clock, relation, constant))
}

struct Builder {
    name: Option<String>,
    processes: Vec<Process>,
    process_loc: Vec<Loc>,
    clocks: Vec<Clock>,
    clock_index: HashMap<String, usize>,
    /// Transitions with action names still unresolved.
    pending: Vec<(usize, Transition, String)>,
}

impl Builder {
    fn process(&self, tok: &Token<'_>) -> Result<usize, ParseError> {
        let name = ident(tok, "process")?;
        self.processes
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| tok.loc.invalid(format!("undeclared process {name}")))
    }

    fn state(&self, p: usize, tok: &Token<'_>) -> Result<u32, ParseError> {
        let name = ident(tok, "state")?;
        self.processes[p]
            .states
            .iter()
            .position(|s| s == name)
            .map(|i| i as u32)
            .ok_or_else(|| {
                tok.loc
                    .invalid(format!("undeclared state {name} of process {}", self.processes[p].name))
            })
    }

    fn owned_clock(&self, p: usize, name: &str, loc: Loc) -> Result<usize, ParseError> {
        let c = *self
            .clock_index
            .get(name)
            .ok_or_else(|| loc.invalid(format!("undeclared clock {name}")))?;
        if self.clocks[c].owner != p {
            return Err(loc.invalid(format!(
                "clock {name} not owned by process {}",
                self.processes[p].name
            )));
        }
        Ok(c)
    }

    fn line(&mut self, tokens: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &tokens[0];
        let arity = |lo: usize, hi: usize| -> Result<(), ParseError> {
            if tokens.len() < lo || tokens.len() > hi {
                let loc = tokens.get(hi).map_or(head.loc, |t| t.loc);
                return Err(loc.syntax(format!("wrong number of fields for '{}'", head.text)));
            }
            Ok(())
        };
        match head.text {
            "system" => {
                arity(2, 2)?;
                let name = ident(&tokens[1], "system")?;
                if self.name.is_some() {
                    return Err(head.loc.invalid("duplicate system declaration"));
                }
                self.name = Some(name.to_string());
            }
            "process" => {
                arity(2, 2)?;
                let name = ident(&tokens[1], "process")?;
                if self.processes.iter().any(|p| p.name == name) {
                    return Err(tokens[1].loc.invalid(format!("duplicate process {name}")));
                }
                self.processes.push(Process {
                    name: name.to_string(),
                    states: Vec::new(),
                    initial: u32::MAX,
                    clocks: Vec::new(),
                    transitions: Vec::new(),
                });
                self.process_loc.push(head.loc);
            }
            "clock" => {
                arity(3, 3)?;
                let p = self.process(&tokens[1])?;
                let name = ident(&tokens[2], "clock")?;
                if self.clock_index.contains_key(name) {
                    return Err(tokens[2].loc.invalid(format!("duplicate clock {name}")));
                }
                let id = self.clocks.len();
                self.clocks.push(Clock { name: name.to_string(), owner: p });
                self.clock_index.insert(name.to_string(), id);
                self.processes[p].clocks.push(id);
            }
            "state" => {
                arity(3, 4)?;
                let p = self.process(&tokens[1])?;
                let name = ident(&tokens[2], "state")?;
                let initial = match tokens.get(3) {
                    None => false,
                    Some(t) if t.text == "initial" => true,
                    Some(t) => return Err(t.loc.syntax(format!("expected 'initial', found '{}'", t.text))),
                };
                let proc_ = &mut self.processes[p];
                if proc_.states.iter().any(|s| s == name) {
                    return Err(tokens[2]
                        .loc
                        .invalid(format!("duplicate state {name} in process {}", proc_.name)));
                }
                if initial {
                    if proc_.initial != u32::MAX {
                        return Err(tokens[3]
                            .loc
                            .invalid(format!("process {} has more than one initial state", proc_.name)));
                    }
                    proc_.initial = proc_.states.len() as u32;
                }
                proc_.states.push(name.to_string());
            }
            "trans" => {
                arity(5, 7)?;
                let p = self.process(&tokens[1])?;
                let source = self.state(p, &tokens[2])?;
                let target = self.state(p, &tokens[3])?;
                let action = ident(&tokens[4], "action")?.to_string();
                let mut guard = Guard::default();
                let mut resets = Vec::new();
                let mut seen_guard = false;
                let mut seen_reset = false;
                for tok in &tokens[5..] {
                    if let Some((body, loc)) = braced(tok, "guard") {
                        if seen_guard || seen_reset {
                            return Err(tok.loc.syntax("guard must come once, before reset"));
                        }
                        seen_guard = true;
                        if body.trim().is_empty() {
                            return Err(loc.syntax("empty guard"));
                        }
                        for atom in body.split("&&") {
                            let (clock, relation, constant) = parse_atom(atom, loc)?;
                            let clock = self.owned_clock(p, clock, loc)?;
                            guard.atoms.push(Atom { clock, relation, constant });
                        }
                    } else if let Some((body, loc)) = braced(tok, "reset") {
                        if seen_reset {
                            return Err(tok.loc.syntax("duplicate reset"));
                        }
                        seen_reset = true;
                        for name in body.split(',').map(str::trim) {
                            if !is_ident(name) {
                                return Err(loc.syntax(format!("invalid clock identifier '{name}' in reset")));
                            }
                            let c = self.owned_clock(p, name, loc)?;
                            if !resets.contains(&c) {
                                resets.push(c);
                            }
                        }
                    } else {
                        return Err(tok
                            .loc
                            .syntax(format!("expected guard{{...}} or reset{{...}}, found '{}'", tok.text)));
                    }
                }
                let t = Transition { source, target, action: usize::MAX, guard, resets };
                self.pending.push((p, t, action));
            }
            other => return Err(head.loc.syntax(format!("unknown declaration '{other}'"))),
        }
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<Network, ParseError> {
        if self.processes.is_empty() {
            return Err(Loc { line: last_line.max(1), column: 1 }.invalid("network declares no process"));
        }
        let mut processes = self.processes;
        for (p, loc) in processes.iter().zip(&self.process_loc) {
            if p.initial == u32::MAX {
                return Err(loc.invalid(format!("process {} has no initial state", p.name)));
            }
        }
        let names: BTreeMap<&str, usize> = self
            .pending
            .iter()
            .map(|(_, _, a)| a.as_str())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let actions: Vec<String> = names.keys().map(|s| s.to_string()).collect();
        let mut dom = vec![Vec::new(); actions.len()];
        for (p, mut t, action) in self.pending.iter().cloned() {
            t.action = names[action.as_str()];
            if !dom[t.action].contains(&p) {
                dom[t.action].push(p);
            }
            processes[p].transitions.push(t);
        }
        for d in &mut dom {
            d.sort_unstable();
        }
        Ok(Network {
            name: self.name.unwrap_or_else(|| "network".to_string()),
            processes,
            clocks: self.clocks,
            actions,
            dom,
        })
    }
}

/// Parse and validate a network description.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut builder = Builder {
        name: None,
        processes: Vec::new(),
        process_loc: Vec::new(),
        clocks: Vec::new(),
        clock_index: HashMap::new(),
        pending: Vec::new(),
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split_once('#').map_or(raw, |(code, _)| code);
        let tokens = tokenize(line, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        builder.line(&tokens)?;
    }
    builder.finish(last_line)
}
