use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{file_error, write_file, IoError};
use crate::model::{Automaton, Network};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One `digraph` for a process.
///
/// Committed locations are drawn as double circles with a `C` mark, urgent
/// ones with a `U` mark; the initial location is bold. Edge labels stack
/// select, guard, sync and update.
pub fn automaton_dot(automaton: &Automaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(automaton.name()));
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, l) in automaton.locations().iter().enumerate() {
        let mut attrs = vec![format!("label={}", quote(&l.name))];
        if l.committed {
            attrs.push("shape=doublecircle".into());
            attrs.push("xlabel=\"C\"".into());
        }
        if l.urgent {
            attrs.push("xlabel=\"U\"".into());
        }
        if l.initial {
            attrs.push("style=bold".into());
        }
        let _ = writeln!(s, "  n{i} [{}];", attrs.join(", "));
    }
    for e in automaton.edges() {
        let mut parts = Vec::new();
        if let Some(sel) = &e.select {
            parts.push(sel.to_string());
        }
        if !e.guard.is_true() {
            parts.push(e.guard.to_string());
        }
        let sync = e.sync.to_string();
        if !sync.is_empty() {
            parts.push(sync);
        }
        if !e.update.is_empty() {
            parts.push(e.update.to_string());
        }
        let label = quote(&parts.join("\n")).replace('\n', "\\n");
        let _ = writeln!(s, "  n{} -> n{} [label={label}];", e.source, e.target);
    }
    s.push_str("}\n");
    s
}

/// Writes `<process>.dot` for every process into `dir`, returning the paths in
/// process order.
pub fn export_dot(network: &Network, dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    std::fs::create_dir_all(dir).map_err(|e| file_error(dir, e))?;
    network
        .processes()
        .iter()
        .map(|p| {
            let path = dir.join(format!("{}.dot", p.name()));
            write_file(&path, &automaton_dot(p))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Factor, FactorTriple, InformationType as I, RecipientRole as R, TrustSource as T};
    use crate::synthesis::{build_observer, synthesize_triples, ObserverKind, SymbolMapping, SynthesisOptions};
    use std::collections::BTreeSet;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn behavioral_graph() {
        let shared = BTreeSet::from([
            FactorTriple::new(I::Relationship, T::Expert, R::Family),
            FactorTriple::new(I::Health, T::Family, R::Family),
            FactorTriple::new(I::Finance, T::Expert, R::Friend),
        ]);
        let net = synthesize_triples(&shared, &SymbolMapping::standard(), &SynthesisOptions::default()).unwrap().network;
        let dot = automaton_dot(net.process(0));
        assert_eq!(count(&dot, " [label=") - count(&dot, " -> "), 7);
        assert_eq!(count(&dot, "label=\"done!\""), 1);
        assert_eq!(count(&dot, "doublecircle"), 2);
        assert!(dot.contains("n0 [label=\"Idle\", shape=doublecircle, xlabel=\"C\", style=bold];"));
        assert!(dot.contains("label=\"finance!\""));
    }

    #[test]
    fn observer_graph() {
        let dot = automaton_dot(&build_observer(ObserverKind::InformationType, &SymbolMapping::standard()));
        assert_eq!(count(&dot, " -> "), 6);
        assert_eq!(count(&dot, " [label=") - count(&dot, " -> "), 4);
        for v in I::ALL {
            assert!(dot.contains(&format!("label=\"{}\"", v.location_name())));
        }
    }

    #[test]
    fn empty_language_is_single_node() {
        let net = synthesize_triples(&BTreeSet::new(), &SymbolMapping::standard(), &SynthesisOptions::default())
            .unwrap()
            .network;
        let dot = automaton_dot(net.process(0));
        assert_eq!(count(&dot, " -> "), 0);
        assert_eq!(count(&dot, " [label="), 1);
    }
}
