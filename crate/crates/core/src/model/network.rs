use super::automaton::{Automaton, Channel, ChannelKind, SyncAction};
use super::expr::{Valuation, VariableDecl};
use super::ModelError;

/// Parallel composition of processes sharing channels and bounded variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    processes: Vec<Automaton>,
    channels: Vec<Channel>,
    variables: Vec<VariableDecl>,
}

impl Network {
    pub fn new(
        processes: Vec<Automaton>,
        channels: Vec<Channel>,
        variables: Vec<VariableDecl>,
    ) -> Result<Self, ModelError> {
        for (i, p) in processes.iter().enumerate() {
            let names = std::iter::once(p.name()).chain(p.aliases().iter().map(String::as_str));
            for n in names {
                if processes[..i].iter().any(|q| q.answers_to(n)) {
                    return Err(ModelError::DuplicateName { kind: "process", name: n.to_string() });
                }
            }
        }
        for (i, c) in channels.iter().enumerate() {
            if channels[..i].iter().any(|d| d.name == c.name) {
                return Err(ModelError::DuplicateName { kind: "channel", name: c.name.clone() });
            }
        }
        for (i, v) in variables.iter().enumerate() {
            v.validate()?;
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(ModelError::DuplicateName { kind: "variable", name: v.name.clone() });
            }
        }

        let net = Self { processes, channels, variables };
        for p in &net.processes {
            for e in p.edges() {
                if let Some(ch) = e.sync.channel() {
                    if net.channel(ch).is_none() {
                        return Err(ModelError::UndeclaredChannel {
                            process: p.name().to_string(),
                            channel: ch.to_string(),
                        });
                    }
                }
                for var in e.guard.variables().into_iter().chain(e.update.variables()) {
                    net.variable_or_err(var)?;
                }
                if let Some(sel) = &e.select {
                    let decl = net.variable_or_err(&sel.var)?;
                    if !(decl.contains(sel.lo) && decl.contains(sel.hi)) {
                        return Err(ModelError::InvalidSelect {
                            automaton: p.name().to_string(),
                            reason: format!("`{sel}` exceeds declared range [{},{}]", decl.min, decl.max),
                        });
                    }
                }
            }
        }
        Ok(net)
    }

    pub fn processes(&self) -> &[Automaton] {
        &self.processes
    }

    pub fn process(&self, id: usize) -> &Automaton {
        &self.processes[id]
    }

    /// Index of the process with this name or alias.
    pub fn process_index(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.answers_to(name))
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn channel_kind(&self, name: &str) -> Option<ChannelKind> {
        self.channel(name).map(|c| c.kind)
    }

    pub fn variables(&self) -> &[VariableDecl] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name == name)
    }

    fn variable_or_err(&self, name: &str) -> Result<&VariableDecl, ModelError> {
        self.variable(name).ok_or_else(|| ModelError::UndeclaredVariable(name.to_string()))
    }

    pub fn initial_valuation(&self) -> Valuation {
        Valuation::initial(&self.variables)
    }

    /// Replaces one process, re-running all network checks.
    pub fn with_process(&self, index: usize, process: Automaton) -> Result<Self, ModelError> {
        let mut processes = self.processes.clone();
        processes[index] = process;
        Self::new(processes, self.channels.clone(), self.variables.clone())
    }

    pub fn with_variables(&self, variables: Vec<VariableDecl>) -> Result<Self, ModelError> {
        Self::new(self.processes.clone(), self.channels.clone(), variables)
    }

    /// True when some process has a receive edge on `channel`.
    pub fn has_receiver(&self, channel: &str) -> bool {
        self.processes
            .iter()
            .flat_map(|p| p.edges())
            .any(|e| matches!(&e.sync, SyncAction::Receive(c) if c == channel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CmpOp, Edge, GuardExpr, Location, Select, UpdateStmt};

    fn proc(name: &str, edges: Vec<Edge>) -> Automaton {
        Automaton::new(name, vec![Location::new("a").initial(), Location::new("b")], edges).unwrap()
    }

    #[test]
    fn rejects_bad_networks() {
        let dup = Network::new(vec![proc("user", vec![]), proc("user", vec![])], vec![], vec![]);
        assert!(matches!(dup, Err(ModelError::DuplicateName { kind: "process", .. })));

        let alias_clash =
            Network::new(vec![proc("user", vec![]), proc("obs", vec![]).with_aliases(["user"])], vec![], vec![]);
        assert!(alias_clash.is_err());

        let undeclared = Network::new(vec![proc("user", vec![Edge::new(0, 1).with_sync(SyncAction::emit("x"))])], vec![], vec![]);
        assert!(matches!(undeclared, Err(ModelError::UndeclaredChannel { .. })));

        let var = Network::new(
            vec![proc("user", vec![Edge::new(0, 1).with_guard(GuardExpr::cmp("n", CmpOp::Lt, 1))])],
            vec![],
            vec![],
        );
        assert!(matches!(var, Err(ModelError::UndeclaredVariable(n)) if n == "n"));

        let upd = Network::new(vec![proc("user", vec![Edge::new(0, 1).with_update(UpdateStmt::increment("n"))])], vec![], vec![]);
        assert!(upd.is_err());

        let sel = Network::new(
            vec![proc("user", vec![Edge::new(0, 1).with_select(Some(Select::new("day", 0, 7)))])],
            vec![],
            vec![VariableDecl::new("day", 1, 7, 1).unwrap()],
        );
        assert!(matches!(sel, Err(ModelError::InvalidSelect { .. })));
    }

    #[test]
    fn lookups() {
        let n = Network::new(
            vec![proc("information_type", vec![]).with_aliases(["info_type"])],
            vec![Channel::broadcast("done")],
            vec![VariableDecl::new("day", 1, 7, 3).unwrap()],
        )
        .unwrap();
        assert_eq!(n.process_index("info_type"), Some(0));
        assert_eq!(n.process_index("Info_Type"), None);
        assert_eq!(n.channel_kind("done"), Some(ChannelKind::Broadcast));
        assert_eq!(n.initial_valuation().get("day"), Some(3));
    }
}
