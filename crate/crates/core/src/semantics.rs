//! Operational semantics of a network.
//!
//! Steps are internal moves, binary hand-shakes (one emitter, one receiver)
//! or broadcasts (one emitter with every process that has an enabled
//! receive; the others do not block). While any process sits in a committed
//! location, only steps with at least one participating edge leaving a
//! committed location are allowed. Urgent locations carry no extra meaning
//! in the untimed setting.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{apply_update, eval_guard, ChannelKind, Edge, ModelError, Network, SyncAction, Valuation};

/// Global state: one location per process plus the variable values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub locations: Vec<usize>,
    pub valuation: Valuation,
}

impl Configuration {
    pub fn location_of(&self, process: usize) -> usize {
        self.locations[process]
    }

    pub fn describe(&self, network: &Network) -> String {
        let mut out = String::new();
        for (p, &l) in self.locations.iter().enumerate() {
            if p > 0 {
                out.push(' ');
            }
            let proc = network.process(p);
            let _ = write!(out, "{}.{}", proc.name(), proc.location(l).name);
        }
        if !self.valuation.is_empty() {
            let _ = write!(out, " | {}", self.valuation);
        }
        out
    }
}

/// One edge taking part in a step, with its select value if it has one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Firing {
    pub process: usize,
    pub edge: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Internal { firing: Firing },
    BinarySync { channel: String, emitter: Firing, receiver: Firing },
    Broadcast { channel: String, emitter: Firing, receivers: Vec<Firing> },
}

impl Step {
    /// Participating edges, initiator first.
    pub fn firings(&self) -> Vec<Firing> {
        match self {
            Step::Internal { firing } => vec![*firing],
            Step::BinarySync { emitter, receiver, .. } => vec![*emitter, *receiver],
            Step::Broadcast { emitter, receivers, .. } => std::iter::once(*emitter).chain(receivers.iter().copied()).collect(),
        }
    }

    pub fn channel(&self) -> Option<&str> {
        match self {
            Step::Internal { .. } => None,
            Step::BinarySync { channel, .. } | Step::Broadcast { channel, .. } => Some(channel),
        }
    }

    pub fn is_broadcast_on(&self, name: &str) -> bool {
        matches!(self, Step::Broadcast { channel, .. } if channel == name)
    }

    /// Human-readable form, e.g. `finance: user Idle -> s2; information_type Information_Type -> Finance`.
    pub fn describe(&self, network: &Network) -> String {
        let moves: Vec<String> = self
            .firings()
            .iter()
            .map(|f| {
                let p = network.process(f.process);
                let e = p.edge(f.edge);
                let mut s = format!("{} {} -> {}", p.name(), p.location(e.source).name, p.location(e.target).name);
                if let (Some(sel), Some(v)) = (&e.select, f.select) {
                    let _ = write!(s, " {{{}={v}}}", sel.var);
                }
                s
            })
            .collect();
        let head = match self {
            Step::Internal { .. } => "tau".to_string(),
            Step::BinarySync { channel, .. } => channel.clone(),
            Step::Broadcast { channel, .. } => format!("{channel} (broadcast)"),
        };
        format!("{head}: {}", moves.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("firing {step:?} failed: {error}")]
    Step { step: Step, error: ModelError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("choice {index} out of range ({available} available)")]
    ChoiceOutOfRange { index: usize, available: usize },
    #[error("trace step {index} is not a valid successor")]
    InvalidReplay { index: usize },
}

pub fn initial_config(network: &Network) -> Configuration {
    Configuration {
        locations: network.processes().iter().map(|p| p.initial()).collect(),
        valuation: network.initial_valuation(),
    }
}

fn select_values(edge: &Edge) -> Vec<Option<i64>> {
    match &edge.select {
        None => vec![None],
        Some(sel) => sel.values().map(Some).collect(),
    }
}

fn with_select(edge: &Edge, value: Option<i64>, valuation: &Valuation) -> Valuation {
    match (&edge.select, value) {
        (Some(sel), Some(v)) => {
            let mut next = valuation.clone();
            next.set(sel.var.clone(), v);
            next
        }
        _ => valuation.clone(),
    }
}

/// Edges of `process` that could fire now, expanded per select value.
fn enabled_firings<'n>(
    network: &'n Network,
    config: &Configuration,
    process: usize,
) -> Result<Vec<(Firing, &'n Edge)>, ModelError> {
    let proc = network.process(process);
    let mut out = Vec::new();
    for &ei in proc.outgoing(config.locations[process]) {
        let edge = proc.edge(ei);
        for value in select_values(edge) {
            if eval_guard(&edge.guard, &with_select(edge, value, &config.valuation))? {
                out.push((Firing { process, edge: ei, select: value }, edge));
            }
        }
    }
    Ok(out)
}

fn fire(network: &Network, config: &Configuration, step: &Step) -> Result<Configuration, SemanticsError> {
    let mut next = config.clone();
    for f in step.firings() {
        let edge = network.process(f.process).edge(f.edge);
        let wrap = |error| SemanticsError::Step { step: step.clone(), error };
        if let (Some(sel), Some(v)) = (&edge.select, f.select) {
            next.valuation.assign(network.variables(), &sel.var, v).map_err(wrap)?;
        }
        next.valuation = apply_update(&edge.update, &next.valuation, network.variables()).map_err(wrap)?;
        next.locations[f.process] = edge.target;
    }
    Ok(next)
}

fn is_committed(network: &Network, config: &Configuration, process: usize) -> bool {
    network.process(process).location(config.locations[process]).committed
}

/// Enabled steps only, with their resulting configurations, in a fixed order.
pub fn successors(network: &Network, config: &Configuration) -> Result<Vec<(Step, Configuration)>, SemanticsError> {
    let n = network.processes().len();
    let enabled: Vec<Vec<(Firing, &Edge)>> =
        (0..n).map(|p| enabled_firings(network, config, p)).collect::<Result<_, _>>()?;
    let receivers_on = |channel: &str, q: usize| -> Vec<Firing> {
        enabled[q]
            .iter()
            .filter(|(_, e)| matches!(&e.sync, SyncAction::Receive(c) if c == channel))
            .map(|(f, _)| *f)
            .collect()
    };

    let mut steps = Vec::new();
    for p in 0..n {
        for &(firing, edge) in &enabled[p] {
            match &edge.sync {
                SyncAction::None => steps.push(Step::Internal { firing }),
                SyncAction::Receive(_) => {}
                SyncAction::Emit(ch) => match network.channel_kind(ch) {
                    Some(ChannelKind::Binary) => {
                        for q in (0..n).filter(|&q| q != p) {
                            for receiver in receivers_on(ch, q) {
                                steps.push(Step::BinarySync { channel: ch.clone(), emitter: firing, receiver });
                            }
                        }
                    }
                    Some(ChannelKind::Broadcast) => {
                        let groups: Vec<Vec<Firing>> =
                            (0..n).filter(|&q| q != p).map(|q| receivers_on(ch, q)).filter(|g| !g.is_empty()).collect();
                        for receivers in cartesian(&groups) {
                            steps.push(Step::Broadcast { channel: ch.clone(), emitter: firing, receivers });
                        }
                    }
                    None => {
                        return Err(ModelError::UndeclaredChannel {
                            process: network.process(p).name().to_string(),
                            channel: ch.clone(),
                        }
                        .into())
                    }
                },
            }
        }
    }

    if (0..n).any(|p| is_committed(network, config, p)) {
        steps.retain(|s| {
            s.firings().iter().any(|f| {
                let edge = network.process(f.process).edge(f.edge);
                network.process(f.process).location(edge.source).committed
            })
        });
    }

    steps
        .into_iter()
        .map(|s| {
            let next = fire(network, config, &s)?;
            Ok((s, next))
        })
        .collect()
}

fn cartesian(groups: &[Vec<Firing>]) -> Vec<Vec<Firing>> {
    let mut out: Vec<Vec<Firing>> = vec![Vec::new()];
    for g in groups {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                g.iter().map(move |f| {
                    let mut v = prefix.clone();
                    v.push(*f);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn is_deadlock(network: &Network, config: &Configuration) -> Result<bool, SemanticsError> {
    Ok(successors(network, config)?.is_empty())
}

/// A run of the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub initial: Configuration,
    pub steps: Vec<(Step, Configuration)>,
    /// For lasso-shaped evidence: the index (0 = initial) of the configuration
    /// the final configuration loops back to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_start: Option<usize>,
}

impl Trace {
    pub fn new(initial: Configuration) -> Self {
        Self { initial, steps: Vec::new(), cycle_start: None }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Initial configuration followed by every step's result.
    pub fn configurations(&self) -> impl Iterator<Item = &Configuration> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|(_, c)| c))
    }

    pub fn last(&self) -> &Configuration {
        self.steps.last().map_or(&self.initial, |(_, c)| c)
    }

    /// Location names of one process along the trace.
    pub fn location_sequence<'n>(&self, network: &'n Network, process: usize) -> Vec<&'n str> {
        self.configurations()
            .map(|c| network.process(process).location(c.locations[process]).name.as_str())
            .collect()
    }

    /// Checks that every recorded step is a successor of its predecessor and
    /// that any cycle annotation closes.
    pub fn replay(&self, network: &Network) -> Result<(), SemanticsError> {
        let mut current = &self.initial;
        for (i, (step, next)) in self.steps.iter().enumerate() {
            let ok = successors(network, current)?.iter().any(|(s, c)| s == step && c == next);
            if !ok {
                return Err(SemanticsError::InvalidReplay { index: i });
            }
            current = next;
        }
        if let Some(k) = self.cycle_start {
            let closes = self.configurations().nth(k).is_some_and(|c| c == self.last());
            if !closes || self.is_empty() {
                return Err(SemanticsError::InvalidReplay { index: self.steps.len() });
            }
        }
        Ok(())
    }
}

pub type StateId = usize;

/// Result of an exhaustive breadth-first exploration.
#[derive(Debug, Clone)]
pub struct StateSpace {
    states: Vec<Configuration>,
    index: HashMap<Configuration, StateId>,
    parent: Vec<Option<(StateId, Step)>>,
    depth: Vec<usize>,
    edges: Vec<Vec<(Step, StateId)>>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Configurations in discovery order; depth is non-decreasing along it.
    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &Configuration {
        &self.states[id]
    }

    pub fn id_of(&self, config: &Configuration) -> Option<StateId> {
        self.index.get(config).copied()
    }

    /// BFS layer of a state.
    pub fn depth(&self, id: StateId) -> usize {
        self.depth[id]
    }

    pub fn parent(&self, id: StateId) -> Option<&(StateId, Step)> {
        self.parent[id].as_ref()
    }

    pub fn successors(&self, id: StateId) -> &[(Step, StateId)] {
        &self.edges[id]
    }

    pub fn is_deadlock(&self, id: StateId) -> bool {
        self.edges[id].is_empty()
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Shortest trace from the initial configuration to `id`.
    pub fn trace_to(&self, id: StateId) -> Trace {
        let mut rev = Vec::new();
        let mut at = id;
        while let Some((p, step)) = &self.parent[at] {
            rev.push((step.clone(), self.states[at].clone()));
            at = *p;
        }
        rev.reverse();
        Trace { initial: self.states[0].clone(), steps: rev, cycle_start: None }
    }
}

/// Breadth-first exploration of every reachable configuration.
pub fn explore(network: &Network) -> Result<StateSpace, SemanticsError> {
    let init = initial_config(network);
    let mut space = StateSpace {
        states: vec![init.clone()],
        index: HashMap::from([(init, 0)]),
        parent: vec![None],
        depth: vec![0],
        edges: Vec::new(),
    };
    let mut i = 0;
    while i < space.states.len() {
        let succ = successors(network, &space.states[i])?;
        let mut out = Vec::with_capacity(succ.len());
        for (step, next) in succ {
            let id = match space.index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = space.states.len();
                    space.index.insert(next.clone(), id);
                    space.states.push(next);
                    space.parent.push(Some((i, step.clone())));
                    space.depth.push(space.depth[i] + 1);
                    id
                }
            };
            out.push((step, id));
        }
        space.edges.push(out);
        i += 1;
    }
    Ok(space)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub trace: Trace,
    /// The run stopped early because no step was enabled.
    pub deadlocked: bool,
}

/// Seeded random walk choosing uniformly among successors.
pub fn simulate(network: &Network, seed: u64, max_steps: usize) -> Result<Simulation, SemanticsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Trace::new(initial_config(network));
    let mut current = trace.initial.clone();
    for _ in 0..max_steps {
        let mut succ = successors(network, &current)?;
        if succ.is_empty() {
            return Ok(Simulation { trace, deadlocked: true });
        }
        let pick = rng.gen_range(0..succ.len());
        let (step, next) = succ.swap_remove(pick);
        current = next.clone();
        trace.steps.push((step, next));
    }
    let deadlocked = successors(network, &current)?.is_empty();
    Ok(Simulation { trace, deadlocked })
}

/// One entry of the interactive stepping menu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choice {
    pub index: usize,
    pub label: String,
    pub step: Step,
    pub target: Configuration,
}

/// Successors with stable indices and labels.
pub fn step_choices(network: &Network, config: &Configuration) -> Result<Vec<Choice>, SemanticsError> {
    Ok(successors(network, config)?
        .into_iter()
        .enumerate()
        .map(|(index, (step, target))| Choice { index, label: step.describe(network), step, target })
        .collect())
}

/// Takes choice `index` from `config`.
pub fn take_choice(network: &Network, config: &Configuration, index: usize) -> Result<Choice, SemanticsError> {
    let mut choices = step_choices(network, config)?;
    let available = choices.len();
    if index >= available {
        return Err(SemanticsError::ChoiceOutOfRange { index, available });
    }
    Ok(choices.swap_remove(index))
}
