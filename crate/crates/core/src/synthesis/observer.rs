//! Observer processes and network assembly.

use super::alphabet::SymbolMapping;
use super::SynthesisError;
use crate::model::{
    Automaton, Channel, ChannelKind, Edge, Factor, InformationType, Location, ModelError, Network, RecipientRole,
    SyncAction, TrustSource, VariableDecl,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObserverKind {
    InformationType,
    TrustSource,
    RecipientRole,
}

impl ObserverKind {
    pub const ALL: [ObserverKind; 3] =
        [ObserverKind::InformationType, ObserverKind::TrustSource, ObserverKind::RecipientRole];

    pub fn process_name(self) -> &'static str {
        match self {
            ObserverKind::InformationType => "information_type",
            ObserverKind::TrustSource => "trust_source",
            ObserverKind::RecipientRole => "recipient_role",
        }
    }

    pub fn process_aliases(self) -> &'static [&'static str] {
        match self {
            ObserverKind::InformationType => &["info_type"],
            _ => &[],
        }
    }

    pub fn hub_name(self) -> &'static str {
        match self {
            ObserverKind::InformationType => "Information_Type",
            ObserverKind::TrustSource => "Trust_Source",
            ObserverKind::RecipientRole => "Recipient_Role",
        }
    }
}

fn spokes<F: Factor>(channel: impl Fn(F) -> String) -> Vec<(Location, String)> {
    F::ALL
        .iter()
        .map(|&v| (Location::new(v.location_name()).with_aliases(v.location_aliases().iter().copied()), channel(v)))
        .collect()
}

/// Hub-and-spoke process that follows one factor.
///
/// Each spoke is entered on the factor's channel and left on the done channel.
pub fn build_observer(kind: ObserverKind, mapping: &SymbolMapping) -> Automaton {
    let spokes = match kind {
        ObserverKind::InformationType => spokes::<InformationType>(|v| mapping.info_channel(v).to_string()),
        ObserverKind::TrustSource => spokes::<TrustSource>(|v| mapping.trust_channel(v).to_string()),
        ObserverKind::RecipientRole => spokes::<RecipientRole>(|v| mapping.recipient_channel(v).to_string()),
    };
    let mut locations = vec![Location::new(kind.hub_name()).initial()];
    let mut edges = Vec::new();
    let mut returns = Vec::new();
    for (loc, channel) in spokes {
        let id = locations.len();
        locations.push(loc);
        edges.push(Edge::new(0, id).with_sync(SyncAction::receive(channel)));
        returns.push(Edge::new(id, 0).with_sync(SyncAction::receive(mapping.done_channel())));
    }
    edges.extend(returns);
    Automaton::new(kind.process_name(), locations, edges)
        .expect("observer structure is valid")
        .with_aliases(kind.process_aliases().iter().copied())
}

/// The eleven factor channels (binary) and the done channel (broadcast).
pub fn standard_channels(mapping: &SymbolMapping) -> Vec<Channel> {
    let mut out: Vec<Channel> =
        super::alphabet::Symbol::all().map(|s| Channel::binary(mapping.channel(s))).collect();
    out.push(Channel::broadcast(mapping.done_channel()));
    out
}

/// Composes the behavioural process with its observers, in that order.
pub fn assemble_network(
    behavioral: Automaton,
    observers: Vec<Automaton>,
    variables: Vec<VariableDecl>,
    channels: Vec<Channel>,
    mapping: &SymbolMapping,
) -> Result<Network, SynthesisError> {
    if let Some(done) = channels.iter().find(|c| c.name == mapping.done_channel()) {
        if done.kind != ChannelKind::Broadcast {
            return Err(SynthesisError::DoneNotBroadcast(done.name.clone()));
        }
    }
    let mut processes = vec![behavioral];
    processes.extend(observers);
    Network::new(processes, channels, variables).map_err(|e: ModelError| e.into())
}
