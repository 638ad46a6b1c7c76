//! Processes: locations, edges and their labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::{GuardExpr, UpdateStmt};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Binary,
    Broadcast,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Channel {
    pub name: String,
    pub kind: ChannelKind,
}

impl Channel {
    pub fn binary(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: ChannelKind::Binary }
    }

    pub fn broadcast(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: ChannelKind::Broadcast }
    }
}

/// Synchronisation label of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SyncAction {
    None,
    Emit(String),
    Receive(String),
}

impl SyncAction {
    pub fn emit(channel: impl Into<String>) -> Self {
        SyncAction::Emit(channel.into())
    }

    pub fn receive(channel: impl Into<String>) -> Self {
        SyncAction::Receive(channel.into())
    }

    pub fn channel(&self) -> Option<&str> {
        match self {
            SyncAction::None => None,
            SyncAction::Emit(c) | SyncAction::Receive(c) => Some(c),
        }
    }
}

impl fmt::Display for SyncAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyncAction::None => Ok(()),
            SyncAction::Emit(c) => write!(f, "{c}!"),
            SyncAction::Receive(c) => write!(f, "{c}?"),
        }
    }
}

/// Nondeterministic choice of a value in `lo..=hi` written to `var` when the edge fires.
///
/// The value is bound before the edge's guard is evaluated, so the guard may test it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Select {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
}

impl Select {
    pub fn new(var: impl Into<String>, lo: i64, hi: i64) -> Self {
        Self { var: var.into(), lo, hi }
    }

    pub fn values(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Select {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : [{},{}]", self.var, self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub aliases: Vec<String>,
    pub committed: bool,
    pub urgent: bool,
    pub initial: bool,
}

impl Location {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), aliases: Vec::new(), committed: false, urgent: false, initial: false }
    }

    pub fn initial(mut self) -> Self {
        self.initial = true;
        self
    }

    pub fn committed(mut self) -> Self {
        self.committed = true;
        self
    }

    pub fn urgent(mut self) -> Self {
        self.urgent = true;
        self
    }

    pub fn with_aliases<I, S>(mut self, aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aliases = aliases.into_iter().map(Into::into).collect();
        self
    }

    /// Case-insensitive match against the name and every alias.
    pub fn answers_to(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub guard: GuardExpr,
    pub sync: SyncAction,
    pub update: UpdateStmt,
    pub select: Option<Select>,
}

impl Edge {
    pub fn new(source: usize, target: usize) -> Self {
        Self {
            source,
            target,
            guard: GuardExpr::True,
            sync: SyncAction::None,
            update: UpdateStmt::empty(),
            select: None,
        }
    }

    pub fn with_sync(mut self, sync: SyncAction) -> Self {
        self.sync = sync;
        self
    }

    pub fn with_guard(mut self, guard: GuardExpr) -> Self {
        self.guard = guard;
        self
    }

    pub fn with_update(mut self, update: UpdateStmt) -> Self {
        self.update = update;
        self
    }

    pub fn with_select(mut self, select: Option<Select>) -> Self {
        self.select = select;
        self
    }

    /// True if the edge carries anything beyond its sync label.
    pub fn is_guarded(&self) -> bool {
        !self.guard.is_true() || !self.update.is_empty() || self.select.is_some()
    }
}

/// A single process of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    aliases: Vec<String>,
    locations: Vec<Location>,
    edges: Vec<Edge>,
    initial: usize,
    outgoing: Vec<Vec<usize>>,
}

impl Automaton {
    pub fn new(name: impl Into<String>, locations: Vec<Location>, edges: Vec<Edge>) -> Result<Self, ModelError> {
        let name = name.into();
        let initials: Vec<usize> = locations.iter().enumerate().filter(|(_, l)| l.initial).map(|(i, _)| i).collect();
        if initials.len() != 1 {
            return Err(ModelError::InitialLocation { automaton: name, count: initials.len() });
        }
        for (i, loc) in locations.iter().enumerate() {
            if loc.committed && loc.urgent {
                return Err(ModelError::CommittedAndUrgent { automaton: name, location: loc.name.clone() });
            }
            let clash = locations[..i]
                .iter()
                .any(|other| std::iter::once(&loc.name).chain(&loc.aliases).any(|n| other.answers_to(n)));
            if clash {
                return Err(ModelError::DuplicateName { kind: "location", name: format!("{name}.{}", loc.name) });
            }
        }
        let mut outgoing = vec![Vec::new(); locations.len()];
        for (i, e) in edges.iter().enumerate() {
            for endpoint in [e.source, e.target] {
                if endpoint >= locations.len() {
                    return Err(ModelError::UnknownLocation { automaton: name, location: format!("#{endpoint}") });
                }
            }
            if let Some(sel) = &e.select {
                if sel.lo > sel.hi {
                    return Err(ModelError::InvalidSelect {
                        automaton: name,
                        reason: format!("empty range in `{sel}`"),
                    });
                }
            }
            outgoing[e.source].push(i);
        }
        Ok(Self { name, aliases: Vec::new(), locations, edges, initial: initials[0], outgoing })
    }

    pub fn with_aliases<I, S>(mut self, aliases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aliases = aliases.into_iter().map(Into::into).collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    /// Exact match on the name or an alias.
    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn location(&self, id: usize) -> &Location {
        &self.locations[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Edge indices leaving `location`, in declaration order.
    pub fn outgoing(&self, location: usize) -> &[usize] {
        &self.outgoing[location]
    }

    /// Exact lookup by canonical name.
    pub fn location_id(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.name == name)
    }

    /// Case-insensitive lookup over names and aliases.
    pub fn find_location(&self, name: &str) -> Option<usize> {
        self.location_id(name).or_else(|| self.locations.iter().position(|l| l.answers_to(name)))
    }

    /// Follows emitting edges labelled with `channels` from the initial location.
    pub fn follow_emissions(&self, channels: &[&str]) -> Option<usize> {
        let mut at = self.initial;
        for ch in channels {
            let e = self.outgoing[at]
                .iter()
                .map(|&i| &self.edges[i])
                .find(|e| matches!(&e.sync, SyncAction::Emit(c) if c == ch))?;
            at = e.target;
        }
        Some(at)
    }

    /// Copy of this automaton with a different edge list.
    pub(crate) fn with_edges(&self, edges: Vec<Edge>) -> Result<Self, ModelError> {
        Ok(Self::new(self.name.clone(), self.locations.clone(), edges)?.with_aliases(self.aliases.clone()))
    }

    pub(crate) fn location_or_err(&self, name: &str) -> Result<usize, ModelError> {
        self.location_id(name).ok_or_else(|| ModelError::UnknownLocation {
            automaton: self.name.clone(),
            location: name.to_string(),
        })
    }

    /// Replaces guard, update and select of the unique edge matching the selector.
    ///
    /// The edge must currently be unguarded.
    pub fn attach_guard(
        &self,
        selector: &EdgeSelector,
        guard: GuardExpr,
        update: UpdateStmt,
        select: Option<Select>,
    ) -> Result<Self, ModelError> {
        let idx = selector.resolve(self)?;
        let edge = &self.edges[idx];
        if edge.is_guarded() {
            return Err(ModelError::AlreadyGuarded {
                automaton: self.name.clone(),
                edge: selector.to_string(),
            });
        }
        let mut edges = self.edges.clone();
        let e = &mut edges[idx];
        e.guard = guard;
        e.update = update;
        e.select = select;
        self.with_edges(edges)
    }

    /// Appends an edge between two existing locations.
    pub fn add_edge(
        &self,
        source: &str,
        target: &str,
        guard: GuardExpr,
        sync: SyncAction,
        update: UpdateStmt,
    ) -> Result<Self, ModelError> {
        let source_id = self.location_or_err(source)?;
        let target_id = self.location_or_err(target)?;
        let edge = Edge::new(source_id, target_id).with_guard(guard).with_sync(sync).with_update(update);
        if self.edges.contains(&edge) {
            return Err(ModelError::DuplicateEdge {
                automaton: self.name.clone(),
                edge: format!("{source} -> {target}"),
            });
        }
        let mut edges = self.edges.clone();
        edges.push(edge);
        self.with_edges(edges)
    }

    pub fn emits(&self) -> bool {
        self.edges.iter().any(|e| matches!(e.sync, SyncAction::Emit(_)))
    }

    pub fn receives(&self) -> bool {
        self.edges.iter().any(|e| matches!(e.sync, SyncAction::Receive(_)))
    }
}

/// Picks one edge by its endpoints and, optionally, its channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSelector {
    pub source: String,
    pub target: String,
    pub channel: Option<String>,
}

impl EdgeSelector {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        Self { source: source.into(), target: target.into(), channel: None }
    }

    pub fn on_channel(mut self, channel: impl Into<String>) -> Self {
        self.channel = Some(channel.into());
        self
    }

    pub fn resolve(&self, automaton: &Automaton) -> Result<usize, ModelError> {
        let no_edge = || ModelError::NoSuchEdge { automaton: automaton.name.clone(), edge: self.to_string() };
        let (Some(s), Some(t)) = (automaton.location_id(&self.source), automaton.location_id(&self.target)) else {
            return Err(no_edge());
        };
        let matches: Vec<usize> = automaton
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.source == s && e.target == t)
            .filter(|(_, e)| self.channel.as_deref().is_none_or(|c| e.sync.channel() == Some(c)))
            .map(|(i, _)| i)
            .collect();
        match matches.as_slice() {
            [] => Err(no_edge()),
            [one] => Ok(*one),
            _ => Err(ModelError::AmbiguousEdge { automaton: automaton.name.clone(), edge: self.to_string() }),
        }
    }
}

impl fmt::Display for EdgeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)?;
        if let Some(c) = &self.channel {
            write!(f, " [{c}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CmpOp;

    fn chain() -> Automaton {
        Automaton::new(
            "p",
            vec![Location::new("Idle").initial().committed(), Location::new("s1"), Location::new("Share").committed()],
            vec![
                Edge::new(0, 1).with_sync(SyncAction::emit("health")),
                Edge::new(1, 2).with_sync(SyncAction::emit("t_family")),
                Edge::new(2, 0).with_sync(SyncAction::emit("done")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn structural_checks() {
        let none = Automaton::new("p", vec![Location::new("a")], vec![]);
        assert!(matches!(none, Err(ModelError::InitialLocation { count: 0, .. })));
        let two = Automaton::new("p", vec![Location::new("a").initial(), Location::new("b").initial()], vec![]);
        assert!(matches!(two, Err(ModelError::InitialLocation { count: 2, .. })));
        let both = Automaton::new("p", vec![Location::new("a").initial().committed().urgent()], vec![]);
        assert!(matches!(both, Err(ModelError::CommittedAndUrgent { .. })));
        let dup = Automaton::new("p", vec![Location::new("a").initial(), Location::new("A")], vec![]);
        assert!(matches!(dup, Err(ModelError::DuplicateName { .. })));
        let dangling = Automaton::new("p", vec![Location::new("a").initial()], vec![Edge::new(0, 3)]);
        assert!(matches!(dangling, Err(ModelError::UnknownLocation { .. })));
        let bad_select =
            Automaton::new("p", vec![Location::new("a").initial()], vec![Edge::new(0, 0).with_select(Some(Select::new("d", 3, 1)))]);
        assert!(matches!(bad_select, Err(ModelError::InvalidSelect { .. })));
    }

    #[test]
    fn attach_guard_replaces_labels() {
        let a = chain();
        let g = GuardExpr::cmp("counter", CmpOp::Lt, 2);
        let b = a
            .attach_guard(&EdgeSelector::new("s1", "Share"), g.clone(), UpdateStmt::increment("counter"), None)
            .unwrap();
        assert_eq!(b.edges()[1].guard, g);
        assert_eq!(b.edges()[1].sync, SyncAction::emit("t_family"));
        assert_eq!(a.edges()[1].guard, GuardExpr::True);

        let again = b.attach_guard(&EdgeSelector::new("s1", "Share"), GuardExpr::True, UpdateStmt::empty(), None);
        assert!(matches!(again, Err(ModelError::AlreadyGuarded { .. })));
        let missing = a.attach_guard(&EdgeSelector::new("s9", "Share"), g, UpdateStmt::empty(), None);
        assert!(matches!(missing, Err(ModelError::NoSuchEdge { .. })));
    }

    #[test]
    fn add_edge_rules() {
        let a = chain();
        let repaired = a
            .add_edge("s1", "Idle", GuardExpr::cmp("counter", CmpOp::Ge, 2), SyncAction::emit("done"), UpdateStmt::empty())
            .unwrap();
        assert_eq!(repaired.edges().len(), 4);
        assert_eq!(repaired.outgoing(1), &[1, 3]);
        let dup = repaired.add_edge(
            "s1",
            "Idle",
            GuardExpr::cmp("counter", CmpOp::Ge, 2),
            SyncAction::emit("done"),
            UpdateStmt::empty(),
        );
        assert!(matches!(dup, Err(ModelError::DuplicateEdge { .. })));
        let self_loop = a.add_edge("Idle", "Idle", GuardExpr::True, SyncAction::None, UpdateStmt::empty());
        assert!(self_loop.is_ok());
        let unknown = a.add_edge("Nowhere", "Idle", GuardExpr::True, SyncAction::None, UpdateStmt::empty());
        assert!(matches!(unknown, Err(ModelError::UnknownLocation { .. })));
    }

    #[test]
    fn ambiguous_selector_needs_channel() {
        let a = Automaton::new(
            "p",
            vec![Location::new("x").initial(), Location::new("y")],
            vec![Edge::new(0, 1).with_sync(SyncAction::emit("a")), Edge::new(0, 1).with_sync(SyncAction::emit("b"))],
        )
        .unwrap();
        assert!(matches!(EdgeSelector::new("x", "y").resolve(&a), Err(ModelError::AmbiguousEdge { .. })));
        assert_eq!(EdgeSelector::new("x", "y").on_channel("b").resolve(&a).unwrap(), 1);
    }

    #[test]
    fn follow_emissions_walks_the_chain() {
        let a = chain();
        assert_eq!(a.follow_emissions(&["health"]), Some(1));
        assert_eq!(a.follow_emissions(&["health", "t_family"]), Some(2));
        assert_eq!(a.follow_emissions(&["finance"]), None);
    }
}
