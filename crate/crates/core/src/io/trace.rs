use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, write_file, IoError};
use crate::model::Network;
use crate::semantics::{Configuration, Step, Trace};

pub const TRACE_FORMAT: &str = "privcheck-trace";
const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    /// JSON, readable with [`read_trace`].
    Structured,
}

/// Human-readable listing: a header with the initial configuration, then per
/// step the fired transition and the resulting configuration.
pub fn trace_to_text(trace: &Trace, network: &Network) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "trace: {} step{}", trace.len(), if trace.len() == 1 { "" } else { "s" });
    let _ = writeln!(s, "initial: {}", trace.initial.describe(network));
    for (i, (step, config)) in trace.steps.iter().enumerate() {
        if trace.cycle_start == Some(i) {
            s.push_str("-- cycle start --\n");
        }
        let _ = writeln!(s, "{:>3}. {}", i + 1, step.describe(network));
        let _ = writeln!(s, "     {}", config.describe(network));
    }
    if let Some(c) = trace.cycle_start {
        let _ = writeln!(s, "-- cycle: steps {}..{} repeat --", c + 1, trace.len());
    }
    s
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    format: String,
    version: u32,
    initial: StateDoc,
    steps: Vec<StepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle_start: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    describe: String,
    #[serde(flatten)]
    config: Configuration,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    describe: String,
    step: Step,
    state: StateDoc,
}

/// Pretty JSON carrying the raw steps and configurations plus their
/// descriptions; the descriptions are ignored when reading back.
pub fn trace_to_json(trace: &Trace, network: &Network) -> String {
    let state = |c: &Configuration| StateDoc { describe: c.describe(network), config: c.clone() };
    let doc = TraceDoc {
        format: TRACE_FORMAT.into(),
        version: TRACE_VERSION,
        initial: state(&trace.initial),
        steps: trace
            .steps
            .iter()
            .map(|(step, c)| StepDoc { describe: step.describe(network), step: step.clone(), state: state(c) })
            .collect(),
        cycle_start: trace.cycle_start,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("trace documents always serialize");
    s.push('\n');
    s
}

pub fn trace_from_json(text: &str) -> Result<Trace, IoError> {
    let doc: TraceDoc = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    if doc.format != TRACE_FORMAT {
        return Err(IoError::Format { expected: TRACE_FORMAT, found: doc.format });
    }
    if doc.version != TRACE_VERSION {
        return Err(IoError::Version { what: "trace", found: doc.version, expected: TRACE_VERSION });
    }
    Ok(Trace {
        initial: doc.initial.config,
        steps: doc.steps.into_iter().map(|s| (s.step, s.state.config)).collect(),
        cycle_start: doc.cycle_start,
    })
}

pub fn write_trace(trace: &Trace, network: &Network, format: TraceFormat, path: &Path) -> Result<(), IoError> {
    let text = match format {
        TraceFormat::Text => trace_to_text(trace, network),
        TraceFormat::Structured => trace_to_json(trace, network),
    };
    write_file(path, &text)
}

/// Reads a structured trace and checks that it replays on `network`.
pub fn read_trace(path: &Path, network: &Network) -> Result<Trace, IoError> {
    let trace = trace_from_json(&read_file(path)?)?;
    trace.replay(network)?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{initial_config, simulate};
    use crate::synthesis::{synthesize_triples, SymbolMapping, SynthesisOptions};

    fn net() -> Network {
        let shared = crate::scenario::shared_triples();
        let base =
            synthesize_triples(&shared, &SymbolMapping::standard(), &SynthesisOptions::default()).unwrap().network;
        crate::scenario::apply_guards(&base, (1, 7)).unwrap()
    }

    #[test]
    fn empty_trace_is_header_only() {
        let n = net();
        let text = trace_to_text(&Trace::new(initial_config(&n)), &n);
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("trace: 0 steps\ninitial: user.Idle "));
    }

    #[test]
    fn structured_round_trip_replays() {
        let n = net();
        let sim = simulate(&n, 7, 40).unwrap();
        let json = trace_to_json(&sim.trace, &n);
        let back = trace_from_json(&json).unwrap();
        assert_eq!(back, sim.trace);
        back.replay(&n).unwrap();
        assert_eq!(trace_to_json(&back, &n), json);
        let text = trace_to_text(&sim.trace, &n);
        assert_eq!(text.lines().count(), 2 + 2 * sim.trace.len());
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let n = net();
        let sim = simulate(&n, 1, 5).unwrap();
        let mut t = sim.trace.clone();
        t.steps[0].1.valuation.set("counter", 1);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.json");
        std::fs::write(&p, trace_to_json(&t, &n)).unwrap();
        assert!(matches!(read_trace(&p, &n), Err(IoError::Semantics(_))));
    }
}
