//! Situational factors of a disclosure decision and the survey records built from them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Kind of personal information being disclosed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InformationType {
    Health,
    Finance,
    Relationship,
}

/// Who advised the user to share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TrustSource {
    Family,
    Friend,
    Expert,
    SelfSearch,
}

/// Who would receive the information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RecipientRole {
    Family,
    Friend,
    Colleague,
    OnlineService,
}

/// Shared surface of the three factor enumerations.
pub trait Factor: Copy + Ord + fmt::Debug + 'static {
    /// Every value, in the fixed iteration order.
    const ALL: &'static [Self];

    /// Lowercase token used in record files.
    fn token(self) -> &'static str;

    /// Name of the observer location that tracks this value.
    fn location_name(self) -> &'static str;

    /// Alternative spellings accepted for the observer location.
    fn location_aliases(self) -> &'static [&'static str] {
        &[]
    }

    fn from_token(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|v| v.token() == token)
    }
}

impl Factor for InformationType {
    const ALL: &'static [Self] = &[Self::Health, Self::Finance, Self::Relationship];

    fn token(self) -> &'static str {
        match self {
            Self::Health => "health",
            Self::Finance => "finance",
            Self::Relationship => "relationship",
        }
    }

    fn location_name(self) -> &'static str {
        match self {
            Self::Health => "Health",
            Self::Finance => "Finance",
            Self::Relationship => "Relationship",
        }
    }
}

impl Factor for TrustSource {
    const ALL: &'static [Self] = &[Self::Family, Self::Friend, Self::Expert, Self::SelfSearch];

    fn token(self) -> &'static str {
        match self {
            Self::Family => "family",
            Self::Friend => "friend",
            Self::Expert => "expert",
            Self::SelfSearch => "self",
        }
    }

    fn location_name(self) -> &'static str {
        match self {
            Self::Family => "Family",
            Self::Friend => "Friend",
            Self::Expert => "Expert",
            Self::SelfSearch => "Self_Search",
        }
    }

    fn location_aliases(self) -> &'static [&'static str] {
        match self {
            Self::SelfSearch => &["SelfSearch", "Self"],
            _ => &[],
        }
    }
}

impl Factor for RecipientRole {
    const ALL: &'static [Self] = &[Self::Family, Self::Friend, Self::Colleague, Self::OnlineService];

    fn token(self) -> &'static str {
        match self {
            Self::Family => "family",
            Self::Friend => "friend",
            Self::Colleague => "colleague",
            Self::OnlineService => "online",
        }
    }

    fn location_name(self) -> &'static str {
        match self {
            Self::Family => "Family",
            Self::Friend => "Friend",
            Self::Colleague => "Colleague",
            Self::OnlineService => "Online_Service",
        }
    }

    fn location_aliases(self) -> &'static [&'static str] {
        match self {
            Self::OnlineService => &["OnlineService", "Online"],
            _ => &[],
        }
    }
}

macro_rules! display_via_location_name {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.location_name())
            }
        }
    )*};
}

display_via_location_name!(InformationType, TrustSource, RecipientRole);

/// One combination of the three situational factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactorTriple {
    pub info_type: InformationType,
    pub trust_source: TrustSource,
    pub recipient_role: RecipientRole,
}

impl FactorTriple {
    pub const fn new(
        info_type: InformationType,
        trust_source: TrustSource,
        recipient_role: RecipientRole,
    ) -> Self {
        Self { info_type, trust_source, recipient_role }
    }

    /// All 48 triples in lexicographic factor order.
    pub fn all() -> impl Iterator<Item = FactorTriple> {
        InformationType::ALL.iter().flat_map(|&it| {
            TrustSource::ALL.iter().flat_map(move |&ts| {
                RecipientRole::ALL.iter().map(move |&rr| FactorTriple::new(it, ts, rr))
            })
        })
    }
}

impl fmt::Display for FactorTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.info_type, self.trust_source, self.recipient_role)
    }
}

/// One survey response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisclosureRecord {
    pub user_id: String,
    pub scenario_id: u32,
    pub triple: FactorTriple,
    pub shared: bool,
}

impl DisclosureRecord {
    pub fn new(user_id: impl Into<String>, scenario_id: u32, triple: FactorTriple, shared: bool) -> Self {
        Self { user_id: user_id.into(), scenario_id, triple, shared }
    }
}

/// Checks that no user answered the same triple both ways.
pub fn check_consistency(records: &[DisclosureRecord]) -> Result<(), ModelError> {
    let mut seen: BTreeMap<(&str, FactorTriple), (u32, bool)> = BTreeMap::new();
    for r in records {
        match seen.get(&(r.user_id.as_str(), r.triple)) {
            Some(&(scenario, shared)) if shared != r.shared => {
                return Err(ModelError::ConflictingRecords {
                    user: r.user_id.clone(),
                    triple: r.triple,
                    first_scenario: scenario,
                    second_scenario: r.scenario_id,
                });
            }
            Some(_) => {}
            None => {
                seen.insert((r.user_id.as_str(), r.triple), (r.scenario_id, r.shared));
            }
        }
    }
    Ok(())
}

/// Records belonging to `user`, in input order.
pub fn records_for_user<'a>(
    records: &'a [DisclosureRecord],
    user: &'a str,
) -> impl Iterator<Item = &'a DisclosureRecord> + 'a {
    records.iter().filter(move |r| r.user_id == user)
}
