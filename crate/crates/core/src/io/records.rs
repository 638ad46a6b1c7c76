use std::path::Path;

use super::{read_file, IoError};
use crate::model::{check_consistency, DisclosureRecord, Factor, FactorTriple, InformationType, RecipientRole, TrustSource};

pub const RECORD_HEADER: [&str; 6] =
    ["user_id", "scenario_id", "information_type", "trust_source", "recipient_role", "decision"];

/// Reads a record file; see [`parse_records`].
pub fn load_records(path: &Path) -> Result<Vec<DisclosureRecord>, IoError> {
    parse_records(&read_file(path)?)
}

/// Parses disclosure records in file order.
///
/// Fields are taken verbatim (no trimming). Errors name the 1-based line.
/// Contradictory decisions for one user and triple are rejected.
pub fn parse_records(text: &str) -> Result<Vec<DisclosureRecord>, IoError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(&e))?.clone();
    if header.iter().ne(RECORD_HEADER) {
        return Err(IoError::Header {
            expected: RECORD_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(&e))?;
        let line = row.position().map_or(0, |p| p.line());
        let err = |message: String| IoError::Record { line, message };
        let user_id = &row[0];
        if user_id.is_empty() {
            return Err(err("empty user_id".into()));
        }
        let scenario_id =
            row[1].parse::<u32>().map_err(|_| err(format!("scenario_id `{}` is not a non-negative integer", &row[1])))?;
        let info_type = token::<InformationType>(&row[2], "information_type").map_err(err)?;
        let trust_source = token::<TrustSource>(&row[3], "trust_source").map_err(err)?;
        let recipient_role = token::<RecipientRole>(&row[4], "recipient_role").map_err(err)?;
        let shared = match &row[5] {
            "1" => true,
            "0" => false,
            other => return Err(err(format!("decision `{other}` must be 1 or 0"))),
        };
        out.push(DisclosureRecord::new(
            user_id,
            scenario_id,
            FactorTriple::new(info_type, trust_source, recipient_role),
            shared,
        ));
    }
    check_consistency(&out)?;
    Ok(out)
}

fn token<F: Factor>(value: &str, column: &str) -> Result<F, String> {
    F::from_token(value).ok_or_else(|| {
        let known: Vec<&str> = F::ALL.iter().map(|v| v.token()).collect();
        format!("unknown {column} `{value}` (expected one of {})", known.join(", "))
    })
}

fn csv_error(e: &csv::Error) -> IoError {
    IoError::Record { line: e.position().map_or(0, |p| p.line()), message: e.to_string() }
}
