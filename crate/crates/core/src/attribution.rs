//! Speaker identity, filled details and interjection flags.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::registry::{split_full_name, PartyFactsMap, Politician, PoliticianRegistry};
use crate::segment::{
    strip_parentheticals, Attendee, RawStatement, StatementKind, TalkerFields, TalkerPattern,
    BUSINESS_START, STAGE_DIRECTION, TITLES,
};
use crate::text::fold_key;

/// Who a surface form refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupRow {
    pub surface_form: String,
    pub full_name: String,
    pub name_id: Option<String>,
    pub electorate: Option<String>,
    pub party: Option<String>,
    pub gender: Option<String>,
    pub unique_id: Option<String>,
}

impl LookupRow {
    fn same_person(&self, other: &LookupRow) -> bool {
        match (&self.unique_id, &other.unique_id) {
            (Some(a), Some(b)) => return a == b,
            _ => {}
        }
        match (&self.name_id, &other.name_id) {
            (Some(a), Some(b)) => a == b,
            _ => self.full_name == other.full_name,
        }
    }
}

/// One day's resolvable surface forms. Forms that point at more than one
/// person are kept as tombstones so they never resolve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LookupTable {
    surfaces: BTreeMap<String, Option<LookupRow>>,
    keys: BTreeMap<String, Option<LookupRow>>,
    patterns: BTreeMap<String, LookupRow>,
}

fn insert(map: &mut BTreeMap<String, Option<LookupRow>>, key: String, row: LookupRow) {
    match map.get(&key) {
        None => {
            map.insert(key, Some(row));
        }
        Some(Some(old)) if !old.same_person(&row) => {
            map.insert(key, None);
        }
        _ => {}
    }
}

fn surface_key(surface: &str) -> String {
    fold_key(&strip_parentheticals(surface))
}

impl LookupTable {
    /// Resolved rows, one per distinct surface form.
    pub fn rows(&self) -> impl Iterator<Item = &LookupRow> {
        self.surfaces.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.rows().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, surface: &str) -> Option<&LookupRow> {
        self.surfaces.get(&surface_key(surface))?.as_ref()
    }

    pub fn by_key(&self, key: &str) -> Option<&LookupRow> {
        self.keys.get(key)?.as_ref()
    }

    pub fn by_pattern(&self, raw_pattern: &str) -> Option<&LookupRow> {
        self.patterns.get(raw_pattern)
    }
}

fn registry_entry<'r>(f: &TalkerFields, registry: &'r PoliticianRegistry) -> Option<&'r Politician> {
    if let Some(p) = f.member_name_id().and_then(|id| registry.by_name_id(id)) {
        return Some(p);
    }
    let (surname, given) = split_full_name(f.name.as_deref()?)?;
    let mut tokens: Vec<&str> = given.iter().map(String::as_str).collect();
    tokens.extend(surname.split_whitespace());
    match registry.candidates(&tokens).as_slice() {
        [p] => Some(p),
        _ => None,
    }
}

/// Identity carried by a talker element. Only `uniqueID` and gender come
/// from the registry here; other gaps are left for
/// [`fill_missing_details`].
pub fn identify_talker(f: &TalkerFields, registry: &PoliticianRegistry) -> LookupRow {
    let entry = registry_entry(f, registry);
    LookupRow {
        surface_form: f.surface().unwrap_or_default().to_string(),
        full_name: f
            .name
            .clone()
            .or_else(|| entry.map(Politician::full_name))
            .or_else(|| f.display_name.clone())
            .unwrap_or_default(),
        name_id: f.member_name_id().map(String::from),
        electorate: f.electorate.clone(),
        party: f.party.clone(),
        gender: entry.and_then(|p| p.gender.clone()),
        unique_id: entry.map(|p| p.unique_id.clone()),
    }
}

fn from_registry(surface: &str, p: &Politician) -> LookupRow {
    LookupRow {
        surface_form: surface.to_string(),
        full_name: p.full_name(),
        name_id: p.name_id.clone(),
        electorate: None,
        party: None,
        gender: p.gender.clone(),
        unique_id: Some(p.unique_id.clone()),
    }
}

fn name_tokens(surface: &str) -> Vec<&str> {
    let mut tokens: Vec<&str> = surface.split_whitespace().collect();
    if tokens.first().is_some_and(|t| TITLES.contains(t)) {
        tokens.remove(0);
    }
    tokens
}

/// Unique registry match for a written name such as `Mr T. SMITH`.
pub fn resolve_in_registry<'r>(surface: &str, registry: &'r PoliticianRegistry) -> Option<&'r Politician> {
    let bare = strip_parentheticals(surface);
    let tokens = name_tokens(&bare);
    if tokens.is_empty() {
        return None;
    }
    match registry.candidates(&tokens).as_slice() {
        [p] => Some(p),
        _ => None,
    }
}

/// First parenthetical of a presiding form that is not a clock time.
pub fn presiding_officeholder(surface: &str) -> Option<&str> {
    let mut rest = surface;
    while let Some(open) = rest.find('(') {
        let close = rest[open..].find(')')? + open;
        let inner = rest[open + 1..close].trim();
        if !inner.is_empty() && !inner.chars().all(|c| c.is_ascii_digit() || c == ':' || c == '.') {
            return Some(inner);
        }
        rest = &rest[close + 1..];
    }
    None
}

fn wants_lookup(st: &RawStatement) -> bool {
    !st.is_non_speech() && !st.general
}

/// Build the day's table from talkers first, then registry matches for
/// every remaining surface form.
pub fn build_lookup_table(
    statements: &[RawStatement],
    patterns: &[TalkerPattern],
    registry: &PoliticianRegistry,
) -> LookupTable {
    let mut t = LookupTable::default();
    for st in statements.iter().filter(|s| wants_lookup(s) && !s.presiding) {
        let Some(f) = &st.talker else { continue };
        let row = identify_talker(f, registry);
        for form in [&f.display_name, &f.name].into_iter().flatten() {
            insert(&mut t.surfaces, surface_key(form), LookupRow { surface_form: form.clone(), ..row.clone() });
        }
        if let Some(a) = Attendee::from_talker(f, registry) {
            insert(&mut t.keys, a.key, row);
        }
    }
    for p in patterns {
        if !p.fields.display_name.as_deref().is_some_and(crate::segment::is_presiding) {
            t.patterns.insert(p.raw_pattern.clone(), identify_talker(&p.fields, registry));
        }
    }
    for st in statements.iter().filter(|s| wants_lookup(s)) {
        let form = if st.presiding {
            match presiding_officeholder(&st.surface_name) {
                Some(f) => f,
                None => continue,
            }
        } else {
            st.surface_name.as_str()
        };
        let k = surface_key(form);
        if k.is_empty() || t.surfaces.contains_key(&k) {
            continue;
        }
        match resolve_in_registry(form, registry) {
            Some(p) => {
                t.surfaces.insert(k, Some(from_registry(form, p)));
            }
            None => {
                t.surfaces.insert(k, None);
            }
        }
    }
    t
}

/// A statement with identity and flags; one output row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributedStatement {
    pub raw: RawStatement,
    pub name: String,
    pub name_id: Option<String>,
    pub electorate: Option<String>,
    pub party: Option<String>,
    pub gender: Option<String>,
    pub unique_id: Option<String>,
    pub in_gov: u8,
    pub first_speech: u8,
    pub interject: u8,
    pub question: u8,
    pub answer: u8,
    pub q_in_writing: u8,
    pub div_flag: u8,
    pub partyfacts_id: Option<i64>,
}

impl AttributedStatement {
    fn bare(raw: RawStatement, name: String) -> Self {
        let (in_gov, first_speech) = raw
            .talker
            .as_ref()
            .map_or((0, 0), |f| (f.in_gov as u8, f.first_speech as u8));
        AttributedStatement {
            name,
            name_id: None,
            electorate: None,
            party: None,
            gender: None,
            unique_id: None,
            in_gov,
            first_speech,
            interject: 0,
            question: 0,
            answer: 0,
            q_in_writing: raw.in_writing as u8,
            div_flag: 0,
            partyfacts_id: None,
            raw,
        }
    }

    fn apply(&mut self, row: &LookupRow) {
        self.name = row.full_name.clone();
        self.name_id = row.name_id.clone();
        self.electorate = row.electorate.clone();
        self.party = row.party.clone();
        self.gender = row.gender.clone();
        self.unique_id = row.unique_id.clone();
    }

    pub fn is_resolved(&self) -> bool {
        self.unique_id.is_some() || self.name_id.is_some()
    }

    /// Stage directions and business start carry no speaker.
    pub fn is_non_speech(&self) -> bool {
        self.raw.is_non_speech()
    }

    fn same_speaker(&self, other: &AttributedStatement) -> bool {
        if let (Some(a), Some(b)) = (&self.unique_id, &other.unique_id) {
            return a == b;
        }
        if let (Some(a), Some(b)) = (&self.name_id, &other.name_id) {
            return a == b;
        }
        self.name == other.name || self.raw.surface_name == other.raw.surface_name
    }
}

/// Attach identities. Rows with their own talker use it; others go through
/// the lexicon key, then the surface form. Presiding forms resolve only
/// through their parenthetical officeholder, else keep the role label.
pub fn resolve_speakers(
    statements: Vec<RawStatement>,
    table: &LookupTable,
    registry: &PoliticianRegistry,
) -> Vec<AttributedStatement> {
    statements
        .into_iter()
        .map(|raw| {
            let label = match raw.kind {
                StatementKind::BusinessStart => BUSINESS_START.to_string(),
                StatementKind::StageDirection => STAGE_DIRECTION.to_string(),
                _ => raw.surface_name.clone(),
            };
            if raw.is_non_speech() {
                return AttributedStatement::bare(raw, label);
            }
            let found: Option<LookupRow> = if raw.presiding {
                let own = raw
                    .talker
                    .as_ref()
                    .filter(|f| f.member_name_id().is_some())
                    .map(|f| identify_talker(f, registry));
                own.or_else(|| {
                    presiding_officeholder(&raw.surface_name).and_then(|o| table.lookup(o).cloned())
                })
            } else if raw.general {
                None
            } else if let Some(f) = &raw.talker {
                Some(identify_talker(f, registry))
            } else {
                raw.key
                    .as_deref()
                    .and_then(|k| table.by_key(k))
                    .or_else(|| table.lookup(&raw.surface_name))
                    .cloned()
            };
            let name = if label.is_empty() {
                raw.talker
                    .as_ref()
                    .and_then(|f| f.surface())
                    .unwrap_or_default()
                    .to_string()
            } else {
                label
            };
            let mut st = AttributedStatement::bare(raw, name);
            if let Some(row) = found {
                st.apply(&row);
            }
            st
        })
        .collect()
}

fn speaker_surname_form(st: &AttributedStatement) -> Option<String> {
    if st.is_non_speech() || st.raw.general {
        return None;
    }
    let form = if st.raw.presiding {
        presiding_officeholder(&st.raw.surface_name)?
    } else {
        st.raw.surface_name.as_str()
    };
    Some(strip_parentheticals(form))
}

/// Upgrade short forms to a same-day full identity, fill gaps from the
/// registry, attach PartyFacts ids and recompute interjection flags.
/// Applying it twice gives the same result as once.
pub fn fill_missing_details(
    records: &mut [AttributedStatement],
    registry: &PoliticianRegistry,
    partyfacts: &PartyFactsMap,
    date: NaiveDate,
) {
    // surname -> distinct resolved people that day
    let mut by_surname: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if !r.is_resolved() {
            continue;
        }
        let surname = r
            .unique_id
            .as_deref()
            .and_then(|u| registry.by_unique_id(u))
            .map(|p| p.surname.clone())
            .or_else(|| split_full_name(&r.name).map(|(s, _)| s));
        if let Some(s) = surname {
            let list = by_surname.entry(fold_key(&s)).or_default();
            if !list.iter().any(|&j| records[j].same_speaker(r)) {
                list.push(i);
            }
        }
    }
    let mut upgrades: Vec<(usize, usize)> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        if r.is_resolved() {
            continue;
        }
        let Some(form) = speaker_surname_form(r) else { continue };
        let tokens = name_tokens(&form);
        for k in (1..=tokens.len()).rev() {
            let surname = fold_key(&tokens[tokens.len() - k..].join(" "));
            let Some(list) = by_surname.get(&surname) else { continue };
            let given = &tokens[..tokens.len() - k];
            let fits: Vec<usize> = list
                .iter()
                .copied()
                .filter(|&j| {
                    given.is_empty()
                        || records[j]
                            .unique_id
                            .as_deref()
                            .and_then(|u| registry.by_unique_id(u))
                            .is_some_and(|p| p.matches_given(given))
                })
                .collect();
            if let [j] = fits.as_slice() {
                upgrades.push((i, *j));
            }
            break;
        }
    }
    for (i, j) in upgrades {
        let src = records[j].clone();
        let r = &mut records[i];
        r.name = src.name;
        r.name_id = src.name_id;
        r.unique_id = src.unique_id;
        r.gender = src.gender;
        r.electorate = src.electorate;
        r.party = src.party;
    }

    for r in records.iter_mut() {
        let entry = r
            .unique_id
            .as_deref()
            .and_then(|u| registry.by_unique_id(u))
            .or_else(|| r.name_id.as_deref().and_then(|n| registry.by_name_id(n)));
        if let Some(p) = entry {
            r.unique_id.get_or_insert_with(|| p.unique_id.clone());
            if r.name_id.is_none() {
                r.name_id = p.name_id.clone();
            }
            if r.gender.is_none() {
                r.gender = p.gender.clone();
            }
            if let Some(iv) = p.interval_on(date) {
                r.electorate.get_or_insert_with(|| iv.electorate.clone());
                r.party.get_or_insert_with(|| iv.party.clone());
            }
        }
        r.partyfacts_id = r.party.as_deref().and_then(|p| map_partyfacts(p, partyfacts));
    }
    flag_interjections(records);
}

/// Within each speech, everyone but the floor-holder and the chair is
/// interjecting. The floor-holder is the speaker of the first opening row.
pub fn flag_interjections(records: &mut [AttributedStatement]) {
    let mut start = 0;
    while start < records.len() {
        let no = records[start].raw.speech_no;
        let end = start
            + records[start..]
                .iter()
                .take_while(|r| r.raw.speech_no == no)
                .count();
        let group = &mut records[start..end];
        let opener = group
            .iter()
            .position(|r| r.raw.kind == StatementKind::Opening)
            .or_else(|| group.iter().position(|r| !r.is_non_speech()));
        let opener = opener.map(|i| group[i].clone());
        for r in group.iter_mut() {
            let floor = opener.as_ref().is_some_and(|o| r.same_speaker(o));
            r.interject = (!r.is_non_speech() && !r.raw.presiding && !floor) as u8;
        }
        start = end;
    }
}

/// Exact match on the Hansard party abbreviation.
pub fn map_partyfacts(party_abb: &str, map: &PartyFactsMap) -> Option<i64> {
    map.partyfacts_id(party_abb)
}

/// People seen in a set of rows; used by the validator and statistics.
pub fn distinct_speakers(records: &[AttributedStatement]) -> BTreeSet<String> {
    records
        .iter()
        .filter(|r| !r.is_non_speech())
        .map(|r| r.unique_id.clone().unwrap_or_else(|| r.name.clone()))
        .collect()
}
