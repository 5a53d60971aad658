//! Kripke structures, turn-based game structures, and their text format.
//!
//! A structure is a set of named states, one of them initial, a transition
//! relation, and a labeling that maps every state to the set of atomic
//! propositions true in it. Structures are plain data: build them directly,
//! or parse them from the line-oriented text format described below.
//!
//! ```text
//! # comment
//! state s init : p q
//! state t : q
//! prop r
//! edge s t
//! edge t s
//! ```
//!
//! `prop` declares a proposition that no state carries, so it can still be
//! used in formulas. Game structures add `player <name>` and
//! `turn <state> <player>` lines. Printing is deterministic and
//! `parse(print(m))` reproduces the structure exactly.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Name of a state. Ordered lexicographically, which fixes the iteration
/// order everywhere a structure is traversed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Self {
        StateId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId::new(s)
    }
}

/// An edge of the transition relation.
pub type Edge = (StateId, StateId);

/// A finite Kripke structure.
///
/// Fields are public; [`KripkeStructure::validate`] reports every internal
/// inconsistency as data, and the operations below assume a structure that
/// validates cleanly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    pub initial: StateId,
    pub states: BTreeSet<StateId>,
    pub transitions: BTreeSet<Edge>,
    /// One entry per state, possibly empty.
    pub labels: BTreeMap<StateId, BTreeSet<String>>,
    /// The proposition universe. Always a superset of every label.
    pub ap: BTreeSet<String>,
}

/// One internal inconsistency found by [`KripkeStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("initial state `{0}` is not a declared state")]
    InitialUndeclared(StateId),
    #[error("edge `{0} -> {1}` mentions undeclared state `{2}`")]
    EdgeEndpointUndeclared(StateId, StateId, StateId),
    #[error("state `{0}` has no label entry")]
    MissingLabelRow(StateId),
    #[error("label entry for `{0}` does not name a declared state")]
    LabelRowUndeclared(StateId),
    #[error("state `{0}` is labeled with `{1}` which is outside the proposition set")]
    LabelOutsideAp(StateId, String),
    #[error("name `{0}` contains whitespace or a reserved character")]
    IllegalName(String),
    #[error("no state is declared")]
    NoStates,
    #[error("turn function has no entry for state `{0}`")]
    MissingTurn(StateId),
    #[error("turn entry for `{0}` names unknown state")]
    TurnRowUndeclared(StateId),
    #[error("turn of `{0}` is `{1}` which is not a declared player")]
    TurnOutsidePlayers(StateId, String),
    #[error("no player is declared")]
    NoPlayers,
}

fn name_ok(name: &str) -> bool {
    !name.is_empty() && !name.contains(char::is_whitespace) && !name.contains([':', '#'])
}

/// Smallest possible state id, used as a range lower bound.
fn first_state() -> StateId {
    StateId(String::new())
}

impl KripkeStructure {
    /// Checks every representation invariant and returns all violations.
    /// An empty vector means the structure is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Violation::NoStates);
        }
        for s in &self.states {
            if !name_ok(s.as_str()) {
                out.push(Violation::IllegalName(s.as_str().to_string()));
            }
            if !self.labels.contains_key(s) {
                out.push(Violation::MissingLabelRow(s.clone()));
            }
        }
        for p in &self.ap {
            if !name_ok(p) {
                out.push(Violation::IllegalName(p.clone()));
            }
        }
        if !self.states.contains(&self.initial) {
            out.push(Violation::InitialUndeclared(self.initial.clone()));
        }
        for (a, b) in &self.transitions {
            for end in [a, b] {
                if !self.states.contains(end) {
                    out.push(Violation::EdgeEndpointUndeclared(a.clone(), b.clone(), end.clone()));
                }
            }
        }
        for (s, props) in &self.labels {
            if !self.states.contains(s) {
                out.push(Violation::LabelRowUndeclared(s.clone()));
            }
            for p in props {
                if !self.ap.contains(p) {
                    out.push(Violation::LabelOutsideAp(s.clone(), p.clone()));
                }
            }
        }
        out
    }

    /// True when every state has at least one outgoing transition. Temporal
    /// operators are only meaningful on total structures.
    pub fn is_total(&self) -> bool {
        self.states.iter().all(|s| self.successors(s).next().is_some())
    }

    /// The states directly reachable from `s` in one step, in order.
    pub fn successors<'a>(&'a self, s: &'a StateId) -> impl Iterator<Item = &'a StateId> {
        self.transitions
            .range((s.clone(), first_state())..)
            .take_while(move |(a, _)| a == s)
            .map(|(_, b)| b)
    }

    /// The states with an edge into `s`.
    pub fn predecessors<'a>(&'a self, s: &'a StateId) -> impl Iterator<Item = &'a StateId> {
        self.transitions.iter().filter(move |(_, b)| b == s).map(|(a, _)| a)
    }

    /// Whether `self` is a substructure of `other`: same initial state, a
    /// subset of its states and transitions, and labels that agree on the
    /// retained states over the same proposition set.
    pub fn is_substructure(&self, other: &KripkeStructure) -> bool {
        self.initial == other.initial
            && self.states.is_subset(&other.states)
            && self.transitions.is_subset(&other.transitions)
            && self.ap == other.ap
            && self
                .states
                .iter()
                .all(|s| self.labels.get(s).is_some() && self.labels.get(s) == other.labels.get(s))
    }

    /// The set of states reachable from the initial state using only the
    /// given edges. Callers pass a subset of `self.transitions`; this is how
    /// a satisfying assignment's retained edges are turned back into a
    /// substructure.
    pub fn reachable(&self, edges: &BTreeSet<Edge>) -> BTreeSet<StateId> {
        debug_assert!(edges.is_subset(&self.transitions));
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        if self.states.contains(&self.initial) {
            seen.insert(self.initial.clone());
            queue.push_back(self.initial.clone());
        }
        while let Some(s) = queue.pop_front() {
            for (a, b) in edges.range((s.clone(), first_state())..) {
                if a != &s {
                    break;
                }
                if seen.insert(b.clone()) {
                    queue.push_back(b.clone());
                }
            }
        }
        seen
    }

    /// Restricts the structure to `keep` edges: states become the states
    /// reachable from the initial state via `keep`, labels are restricted
    /// accordingly. The proposition set is unchanged.
    pub fn restrict_to(&self, keep: &BTreeSet<Edge>) -> KripkeStructure {
        let states = self.reachable(keep);
        let transitions = keep
            .iter()
            .filter(|(a, b)| states.contains(a) && states.contains(b))
            .cloned()
            .collect();
        let labels = self
            .labels
            .iter()
            .filter(|(s, _)| states.contains(*s))
            .map(|(s, l)| (s.clone(), l.clone()))
            .collect();
        KripkeStructure {
            initial: self.initial.clone(),
            states,
            transitions,
            labels,
            ap: self.ap.clone(),
        }
    }

    /// Parses the text format. Rejects game directives; use
    /// [`GameStructure::parse`] for structures with turns.
    pub fn parse(text: &str) -> Result<KripkeStructure, ParseError> {
        let (kripke, game) = parse_lines(text)?;
        if let Some(line) = game.first_game_line {
            return Err(ParseError::new(
                line,
                "`turn`/`player` lines belong to game structures; use the game parser",
            ));
        }
        Ok(kripke)
    }

    /// Renders the canonical text form: states in order, then orphan
    /// propositions, then edges.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            out.push_str("state ");
            out.push_str(s.as_str());
            if *s == self.initial {
                out.push_str(" init");
            }
            out.push_str(" :");
            if let Some(props) = self.labels.get(s) {
                for p in props {
                    out.push(' ');
                    out.push_str(p);
                }
            }
            out.push('\n');
        }
        let labeled: BTreeSet<&String> = self.labels.values().flatten().collect();
        for p in &self.ap {
            if !labeled.contains(p) {
                out.push_str("prop ");
                out.push_str(p);
                out.push('\n');
            }
        }
        for (a, b) in &self.transitions {
            out.push_str("edge ");
            out.push_str(a.as_str());
            out.push(' ');
            out.push_str(b.as_str());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for KripkeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

/// A turn-based game structure: a Kripke structure together with a player
/// set and a turn function that assigns an owner to every state. The owner
/// of a state chooses which outgoing transition is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameStructure {
    pub kripke: KripkeStructure,
    pub players: BTreeSet<String>,
    pub turn: BTreeMap<StateId, String>,
}

impl GameStructure {
    /// Checks the base structure plus the game invariants: at least one
    /// player, a turn for every state, and turns drawn from the player set.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.kripke.validate();
        if self.players.is_empty() {
            out.push(Violation::NoPlayers);
        }
        for p in &self.players {
            if !name_ok(p) {
                out.push(Violation::IllegalName(p.clone()));
            }
        }
        for s in &self.kripke.states {
            match self.turn.get(s) {
                None => out.push(Violation::MissingTurn(s.clone())),
                Some(p) if !self.players.contains(p) => {
                    out.push(Violation::TurnOutsidePlayers(s.clone(), p.clone()))
                }
                _ => {}
            }
        }
        for s in self.turn.keys() {
            if !self.kripke.states.contains(s) {
                out.push(Violation::TurnRowUndeclared(s.clone()));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<GameStructure, ParseError> {
        let (kripke, game) = parse_lines(text)?;
        let mut players = game.players;
        for p in game.turn.values() {
            players.insert(p.clone());
        }
        Ok(GameStructure { kripke, players, turn: game.turn })
    }

    pub fn print(&self) -> String {
        let mut out = self.kripke.print();
        for p in &self.players {
            out.push_str("player ");
            out.push_str(p);
            out.push('\n');
        }
        for (s, p) in &self.turn {
            out.push_str("turn ");
            out.push_str(s.as_str());
            out.push(' ');
            out.push_str(p);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for GameStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

/// Structure file error, with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

struct GameLines {
    players: BTreeSet<String>,
    turn: BTreeMap<StateId, String>,
    first_game_line: Option<usize>,
}

fn parse_lines(text: &str) -> Result<(KripkeStructure, GameLines), ParseError> {
    let mut states = BTreeSet::new();
    let mut labels: BTreeMap<StateId, BTreeSet<String>> = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    let mut ap = BTreeSet::new();
    let mut initial: Option<(StateId, usize)> = None;
    let mut game =
        GameLines { players: BTreeSet::new(), turn: BTreeMap::new(), first_game_line: None };

    // Edges and turns may mention states declared later, so they are checked
    // after the whole file has been read.
    let mut pending_edges: Vec<(usize, StateId, StateId)> = Vec::new();
    let mut pending_turns: Vec<(usize, StateId, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "state" => {
                let mut rest = &tokens[1..];
                let name = *rest
                    .first()
                    .ok_or_else(|| ParseError::new(line_no, "`state` needs a name"))?;
                if !name_ok(name) || name == "init" {
                    return Err(ParseError::new(line_no, format!("illegal state name `{name}`")));
                }
                rest = &rest[1..];
                let id = StateId::new(name);
                if !states.insert(id.clone()) {
                    return Err(ParseError::new(line_no, format!("state `{name}` declared twice")));
                }
                if rest.first() == Some(&"init") {
                    if let Some((_, prev)) = &initial {
                        return Err(ParseError::new(
                            line_no,
                            format!("second `init` marker (first on line {prev})"),
                        ));
                    }
                    initial = Some((id.clone(), line_no));
                    rest = &rest[1..];
                }
                if rest.first() == Some(&":") {
                    rest = &rest[1..];
                } else if !rest.is_empty() {
                    return Err(ParseError::new(line_no, "expected `:` before the label list"));
                }
                let mut props = BTreeSet::new();
                for p in rest {
                    if !name_ok(p) {
                        return Err(ParseError::new(line_no, format!("illegal proposition `{p}`")));
                    }
                    props.insert(p.to_string());
                    ap.insert(p.to_string());
                }
                labels.insert(id, props);
            }
            "edge" => {
                if tokens.len() != 3 {
                    return Err(ParseError::new(line_no, "`edge` needs exactly two states"));
                }
                pending_edges.push((line_no, StateId::new(tokens[1]), StateId::new(tokens[2])));
            }
            "prop" => {
                if tokens.len() != 2 {
                    return Err(ParseError::new(line_no, "`prop` needs exactly one name"));
                }
                if !name_ok(tokens[1]) {
                    return Err(ParseError::new(
                        line_no,
                        format!("illegal proposition `{}`", tokens[1]),
                    ));
                }
                ap.insert(tokens[1].to_string());
            }
            "player" => {
                if tokens.len() != 2 {
                    return Err(ParseError::new(line_no, "`player` needs exactly one name"));
                }
                if !name_ok(tokens[1]) {
                    return Err(ParseError::new(
                        line_no,
                        format!("illegal player name `{}`", tokens[1]),
                    ));
                }
                game.first_game_line.get_or_insert(line_no);
                game.players.insert(tokens[1].to_string());
            }
            "turn" => {
                if tokens.len() != 3 {
                    return Err(ParseError::new(line_no, "`turn` needs a state and a player"));
                }
                game.first_game_line.get_or_insert(line_no);
                pending_turns.push((line_no, StateId::new(tokens[1]), tokens[2].to_string()));
            }
            other => {
                return Err(ParseError::new(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    for (line_no, a, b) in pending_edges {
        for end in [&a, &b] {
            if !states.contains(end) {
                return Err(ParseError::new(
                    line_no,
                    format!("edge mentions undeclared state `{end}`"),
                ));
            }
        }
        if !transitions.insert((a.clone(), b.clone())) {
            return Err(ParseError::new(line_no, format!("duplicate edge `{a} {b}`")));
        }
    }
    for (line_no, s, p) in pending_turns {
        if !states.contains(&s) {
            return Err(ParseError::new(line_no, format!("turn mentions undeclared state `{s}`")));
        }
        if game.turn.insert(s.clone(), p).is_some() {
            return Err(ParseError::new(line_no, format!("duplicate turn for `{s}`")));
        }
    }

    let (initial, _) = initial
        .ok_or_else(|| ParseError::new(text.lines().count().max(1), "no state is marked `init`"))?;
    Ok((KripkeStructure { initial, states, transitions, labels, ap }, game))
}
