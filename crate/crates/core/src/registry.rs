//! Reference data: the politician registry and the PartyFacts map.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::text::fold_key;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceInterval {
    pub electorate: String,
    pub party: String,
    pub from: NaiveDate,
    pub to: Option<NaiveDate>,
}

impl ServiceInterval {
    /// Inclusive at both ends; an open end means still serving.
    pub fn covers(&self, date: NaiveDate) -> bool {
        self.from <= date && self.to.is_none_or(|t| date <= t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Politician {
    pub unique_id: String,
    pub surname: String,
    pub first_names: Vec<String>,
    pub gender: Option<String>,
    pub name_id: Option<String>,
    pub intervals: Vec<ServiceInterval>,
    pub born: Option<NaiveDate>,
    pub died: Option<NaiveDate>,
}

impl Politician {
    /// `Surname, First, MP`, the long form used in transcripts.
    pub fn full_name(&self) -> String {
        match self.first_names.first() {
            Some(first) => format!("{}, {}, MP", self.surname, first),
            None => format!("{}, MP", self.surname),
        }
    }

    pub fn interval_on(&self, date: NaiveDate) -> Option<&ServiceInterval> {
        self.intervals.iter().find(|i| i.covers(date))
    }

    pub fn serving_on(&self, date: NaiveDate) -> bool {
        self.interval_on(date).is_some()
    }

    pub fn alive_on(&self, date: NaiveDate) -> bool {
        self.born.is_none_or(|b| b <= date) && self.died.is_none_or(|d| date <= d)
    }

    /// Checks the per-entry invariants, returning a reason on failure.
    pub fn check(&self) -> Result<(), String> {
        if self.unique_id.is_empty() {
            return Err("empty uniqueID".into());
        }
        for i in &self.intervals {
            if let Some(to) = i.to {
                if to < i.from {
                    return Err(format!("service interval ends {to} before it starts {}", i.from));
                }
            }
        }
        if let (Some(b), Some(d)) = (self.born, self.died) {
            if d < b {
                return Err(format!("died {d} before born {b}"));
            }
        }
        Ok(())
    }

    /// Whether the given-name tokens written in a transcript (full names,
    /// single initials or run-together initials) fit this person.
    pub fn matches_given(&self, given: &[&str]) -> bool {
        given.iter().all(|g| {
            let g = g.trim_end_matches('.');
            if g.is_empty() {
                return true;
            }
            let folded = fold_key(g);
            let initials: String = self
                .first_names
                .iter()
                .filter_map(|f| fold_key(f).chars().next())
                .collect();
            self.first_names.iter().any(|f| fold_key(f) == folded)
                || (folded.chars().count() == 1 && initials.contains(folded.as_str()))
                || (g.chars().count() <= 3
                    && g.chars().all(|c| c.is_ascii_uppercase())
                    && initials.starts_with(folded.as_str()))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("uniqueID {0:?} appears more than once")]
    DuplicateUniqueID(String),
    #[error("party abbreviation {0:?} appears more than once")]
    DuplicatePartyAbbreviation(String),
    #[error("entry {id:?}: {reason}")]
    InvalidEntry { id: String, reason: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PoliticianRegistry {
    entries: Vec<Politician>,
    by_unique: BTreeMap<String, usize>,
    by_name_id: BTreeMap<String, usize>,
    by_surname: BTreeMap<String, Vec<usize>>,
}

impl PoliticianRegistry {
    pub fn new(entries: Vec<Politician>) -> Result<Self, RegistryError> {
        let mut reg = PoliticianRegistry::default();
        for p in entries {
            p.check().map_err(|reason| RegistryError::InvalidEntry {
                id: p.unique_id.clone(),
                reason,
            })?;
            let idx = reg.entries.len();
            if reg.by_unique.insert(p.unique_id.clone(), idx).is_some() {
                return Err(RegistryError::DuplicateUniqueID(p.unique_id));
            }
            if let Some(id) = &p.name_id {
                reg.by_name_id.insert(id.clone(), idx);
            }
            reg.by_surname.entry(fold_key(&p.surname)).or_default().push(idx);
            reg.entries.push(p);
        }
        Ok(reg)
    }

    pub fn entries(&self) -> &[Politician] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn by_unique_id(&self, id: &str) -> Option<&Politician> {
        self.by_unique.get(id).map(|&i| &self.entries[i])
    }

    pub fn by_name_id(&self, id: &str) -> Option<&Politician> {
        self.by_name_id.get(id).map(|&i| &self.entries[i])
    }

    pub fn has_name_id(&self, id: &str) -> bool {
        self.by_name_id.contains_key(id)
    }

    /// Everyone (past or present) sharing a surname, compared without
    /// diacritics or case.
    pub fn with_surname(&self, surname: &str) -> impl Iterator<Item = &Politician> {
        self.by_surname
            .get(&fold_key(surname))
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
    }

    /// Candidates for a written name with the title already removed. The
    /// longest trailing run of tokens that is a known surname is taken as the
    /// surname; any earlier tokens must fit the person's given names.
    pub fn candidates(&self, tokens: &[&str]) -> Vec<&Politician> {
        for k in (1..=tokens.len()).rev() {
            let surname = tokens[tokens.len() - k..].join(" ");
            if let Some(ids) = self.by_surname.get(&fold_key(&surname)) {
                let given = &tokens[..tokens.len() - k];
                return ids
                    .iter()
                    .map(|&i| &self.entries[i])
                    .filter(|p| p.matches_given(given))
                    .collect();
            }
        }
        Vec::new()
    }

    /// Copy of the registry with one entry replaced, used to inject
    /// reference-data defects.
    pub fn with_replaced(&self, replacement: Politician) -> Result<Self, RegistryError> {
        let entries = self
            .entries
            .iter()
            .map(|p| {
                if p.unique_id == replacement.unique_id {
                    replacement.clone()
                } else {
                    p.clone()
                }
            })
            .collect();
        PoliticianRegistry::new(entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyFactsRow {
    pub partyfacts_id: Option<i64>,
    pub party_abb_hansard: String,
    pub party_abb_auspol: String,
    pub party_name_auspol: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartyFactsMap {
    rows: Vec<PartyFactsRow>,
    index: BTreeMap<String, usize>,
}

impl PartyFactsMap {
    pub fn new(rows: Vec<PartyFactsRow>) -> Result<Self, RegistryError> {
        let mut index = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            if index.insert(r.party_abb_hansard.clone(), i).is_some() {
                return Err(RegistryError::DuplicatePartyAbbreviation(
                    r.party_abb_hansard.clone(),
                ));
            }
        }
        Ok(PartyFactsMap { rows, index })
    }

    pub fn rows(&self) -> &[PartyFactsRow] {
        &self.rows
    }

    pub fn get(&self, party_abb: &str) -> Option<&PartyFactsRow> {
        self.index.get(party_abb).map(|&i| &self.rows[i])
    }

    /// Exact match on the Hansard abbreviation; unknown or empty gives null.
    pub fn partyfacts_id(&self, party_abb: &str) -> Option<i64> {
        self.get(party_abb).and_then(|r| r.partyfacts_id)
    }

    /// Registry-style abbreviation for a Hansard party, falling back to the
    /// Hansard spelling.
    pub fn canonical_abb<'a>(&'a self, party_abb: &'a str) -> &'a str {
        match self.get(party_abb) {
            Some(r) if !r.party_abb_auspol.is_empty() => &r.party_abb_auspol,
            _ => party_abb,
        }
    }
}

/// Splits `Surname, Given Names, MP` into surname and given names.
pub fn split_full_name(full: &str) -> Option<(String, Vec<String>)> {
    let mut parts = full.split(',').map(str::trim);
    let surname = parts.next().filter(|s| !s.is_empty())?;
    let given = parts
        .next()
        .filter(|g| *g != "MP")
        .map(|g| g.split_whitespace().map(ToString::to_string).collect())
        .unwrap_or_default();
    Some((surname.to_string(), given))
}
