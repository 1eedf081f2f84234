use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use aho_corasick::{AhoCorasick, AhoCorasickBuilder, MatchKind};

use crate::registry::{split_full_name, PoliticianRegistry};
use crate::text::hansard_upper;

use super::talker::TalkerFields;

/// Titles that may precede a member's name.
pub const TITLES: &[&str] = &["Mr", "Mrs", "Ms", "Miss", "Dr"];

/// Forms for the presiding officer. Matched without regard to ASCII case.
pub const PRESIDING_HONORIFICS: &[&str] = &[
    "The SPEAKER",
    "The DEPUTY SPEAKER",
    "The ACTING DEPUTY SPEAKER",
    "The ACTING SPEAKER",
    "Mr SPEAKER",
    "Madam SPEAKER",
    "Mr DEPUTY SPEAKER",
    "Madam DEPUTY SPEAKER",
    "Mrs DEPUTY SPEAKER",
    "Mr ACTING DEPUTY SPEAKER",
    "Madam ACTING DEPUTY SPEAKER",
];

/// Statements attributed to a group rather than a person.
pub const GENERAL_INTERJECTIONS: &[&str] = &[
    "An opposition member",
    "An honourable member",
    "A government member",
    "Opposition members",
    "Government members",
    "Honourable members",
    "Members of the opposition",
    "A member",
];

pub fn is_presiding(surface: &str) -> bool {
    let bare = strip_parentheticals(surface);
    PRESIDING_HONORIFICS
        .iter()
        .any(|h| h.eq_ignore_ascii_case(bare.trim()))
}

pub fn is_general(surface: &str, general: &[String]) -> bool {
    general.iter().any(|g| g.eq_ignore_ascii_case(surface.trim()))
}

/// Text with every `( ... )` group removed and whitespace tidied.
pub fn strip_parentheticals(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut depth = 0usize;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' if depth > 0 => depth -= 1,
            _ if depth == 0 => out.push(ch),
            _ => {}
        }
    }
    crate::text::normalize_whitespace(&out)
}

/// One person seen on the day, with the key used to tie name variants,
/// skeleton talkers and lookup rows together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attendee {
    pub key: String,
    pub surname: String,
    pub first_names: Vec<String>,
    /// Forms copied verbatim from the transcript (display names).
    pub written: Vec<String>,
}

impl Attendee {
    /// Resolve a talker to an attendee: by name id, then by its long name
    /// against the registry, then by the long name alone.
    pub fn from_talker(fields: &TalkerFields, registry: &PoliticianRegistry) -> Option<Attendee> {
        if fields.is_presiding() {
            return None;
        }
        let written: Vec<String> = fields.display_name.iter().cloned().collect();
        if let Some(p) = fields.member_name_id().and_then(|id| registry.by_name_id(id)) {
            return Some(Attendee {
                key: p.unique_id.clone(),
                surname: p.surname.clone(),
                first_names: p.first_names.clone(),
                written,
            });
        }
        let (surname, given) = split_full_name(fields.name.as_deref()?)?;
        let mut tokens: Vec<&str> = given.iter().map(String::as_str).collect();
        tokens.extend(surname.split_whitespace());
        let cands = registry.candidates(&tokens);
        if let [p] = cands.as_slice() {
            return Some(Attendee {
                key: p.unique_id.clone(),
                surname: p.surname.clone(),
                first_names: p.first_names.clone(),
                written,
            });
        }
        Some(Attendee {
            key: fields.name.clone()?,
            surname,
            first_names: given,
            written,
        })
    }
}

#[derive(Debug, Clone)]
pub struct NameVariantLexicon {
    variants: BTreeMap<String, Option<String>>,
    general: Vec<String>,
    names: Vec<String>,
    names_ac: Option<AhoCorasick>,
    folded: Vec<String>,
    folded_ac: Option<AhoCorasick>,
}

/// A lexicon entry found in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LexMatch {
    pub start: usize,
    pub end: usize,
    pub pattern: usize,
    pub folded: bool,
}

impl NameVariantLexicon {
    /// Lexicon holding the given name variants plus the presiding honorifics
    /// and general interjection phrases.
    pub fn from_variants(variants: BTreeMap<String, Option<String>>, general: &[String]) -> Self {
        let names: Vec<String> = variants.keys().cloned().collect();
        let mut folded: Vec<String> = PRESIDING_HONORIFICS.iter().map(|s| s.to_string()).collect();
        folded.extend(general.iter().cloned());
        let build = |pats: &[String], ci: bool| {
            (!pats.is_empty()).then(|| {
                AhoCorasickBuilder::new()
                    .ascii_case_insensitive(ci)
                    .match_kind(MatchKind::Standard)
                    .build(pats)
                    .expect("lexicon automaton")
            })
        };
        NameVariantLexicon {
            names_ac: build(&names, false),
            folded_ac: build(&folded, true),
            variants,
            general: general.to_vec(),
            names,
            folded,
        }
    }

    /// Only general interjection phrases and honorifics, no member names.
    pub fn general_only(general: &[String]) -> Self {
        Self::from_variants(BTreeMap::new(), general)
    }

    pub fn variants(&self) -> &BTreeMap<String, Option<String>> {
        &self.variants
    }

    pub fn general_interjections(&self) -> &[String] {
        &self.general
    }

    /// Key for a member variant; `None` for unknown or ambiguous forms.
    pub fn key_of(&self, variant: &str) -> Option<&str> {
        self.variants.get(variant).and_then(|k| k.as_deref())
    }

    pub(crate) fn pattern(&self, m: &LexMatch) -> &str {
        if m.folded {
            &self.folded[m.pattern]
        } else {
            &self.names[m.pattern]
        }
    }

    /// All (overlapping) occurrences of lexicon entries.
    pub(crate) fn find_all(&self, text: &str) -> Vec<LexMatch> {
        let mut out = Vec::new();
        for (ac, folded) in [(&self.names_ac, false), (&self.folded_ac, true)] {
            if let Some(ac) = ac {
                for m in ac.find_overlapping_iter(text) {
                    out.push(LexMatch {
                        start: m.start(),
                        end: m.end(),
                        pattern: m.pattern().as_usize(),
                        folded,
                    });
                }
            }
        }
        out.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
        out
    }
}

/// All written forms of one attendee's name.
pub fn name_variants(a: &Attendee) -> Vec<String> {
    let mut out: Vec<String> = a.written.clone();
    let s = a.surname.as_str();
    let s_up = hansard_upper(s);
    let mut given_forms: Vec<(String, String)> = Vec::new();
    if let Some(first) = a.first_names.first() {
        given_forms.push((first.clone(), hansard_upper(first)));
    }
    if a.first_names.len() > 1 {
        let all = a.first_names.join(" ");
        let up = hansard_upper(&all);
        given_forms.push((all, up));
    }
    let initials: Vec<char> = a
        .first_names
        .iter()
        .filter_map(|f| f.chars().next())
        .flat_map(char::to_uppercase)
        .collect();
    let mut initial_forms: Vec<String> = Vec::new();
    if let Some(i) = initials.first() {
        initial_forms.push(format!("{i}"));
        initial_forms.push(format!("{i}."));
    }
    if initials.len() > 1 {
        initial_forms.push(initials.iter().collect());
        initial_forms.push(
            initials
                .iter()
                .map(|c| format!("{c}."))
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    for t in TITLES {
        let t_up = t.to_uppercase();
        out.push(format!("{t} {s}"));
        out.push(format!("{t} {s_up}"));
        out.push(format!("{t_up} {s_up}"));
        for (g, g_up) in &given_forms {
            out.push(format!("{t} {g} {s}"));
            out.push(format!("{t} {g} {s_up}"));
            out.push(format!("{t} {g_up} {s_up}"));
            out.push(format!("{t_up} {g_up} {s_up}"));
        }
        for i in &initial_forms {
            out.push(format!("{t} {i} {s}"));
            out.push(format!("{t} {i} {s_up}"));
            out.push(format!("{t_up} {i} {s_up}"));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Variants for every attendee plus the general interjection list. A form
/// shared by two attendees stays in the lexicon for splitting but carries no
/// key.
pub fn build_name_variant_lexicon(attendees: &[Attendee], general: &[String]) -> NameVariantLexicon {
    let mut variants: BTreeMap<String, Option<String>> = BTreeMap::new();
    for a in attendees {
        for v in name_variants(a) {
            variants
                .entry(v)
                .and_modify(|k| {
                    if k.as_deref() != Some(a.key.as_str()) {
                        *k = None;
                    }
                })
                .or_insert_with(|| Some(a.key.clone()));
        }
    }
    NameVariantLexicon::from_variants(variants, general)
}

pub fn default_general_interjections() -> Vec<String> {
    GENERAL_INTERJECTIONS.iter().map(|s| s.to_string()).collect()
}
