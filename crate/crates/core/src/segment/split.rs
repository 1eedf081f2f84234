//! Splitting running text wherever a speaker name opens a new statement.
//!
//! A name counts as a statement opener only when it stands at the start of
//! the text or a line, or right after closing punctuation or a dash, and is
//! followed (after optional parentheticals) by a colon or by "interjecting".

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::text::normalize_whitespace;

use super::lexicon::{NameVariantLexicon, PRESIDING_HONORIFICS, TITLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitForm {
    /// `Name (...): text`: the name prefix is not part of the body.
    Colon,
    /// `Name interjecting—`: the whole phrase is the body.
    Interjecting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    /// Name as written, with the officeholder parenthetical for presiding
    /// forms. `None` for leading text with no name.
    pub surface: Option<String>,
    /// Attendee key when the name came from the lexicon unambiguously.
    pub key: Option<String>,
    pub form: Option<SplitForm>,
    pub presiding: bool,
    pub general: bool,
    pub body: String,
    /// Byte offset of the split point in the source text.
    pub start: usize,
}

#[derive(Debug, Clone)]
struct Split {
    start: usize,
    name_end: usize,
    body_start: usize,
    form: SplitForm,
    surface: String,
    key: Option<String>,
    presiding: bool,
    general: bool,
}

const GUARD_PUNCT: &[char] = &['.', '!', '?', '—', '–', '-', ':', ';', ')', '"', '”', '\'', '’'];

fn guard_ok(text: &str, start: usize) -> bool {
    let before = text[..start].trim_end_matches([' ', '\t']);
    match before.chars().next_back() {
        None | Some('\n') => true,
        Some(c) => GUARD_PUNCT.contains(&c),
    }
}

fn boundary_after(text: &str, end: usize) -> bool {
    !text[end..].chars().next().is_some_and(char::is_alphanumeric)
}

fn is_time(inner: &str) -> bool {
    let t = inner.trim();
    !t.is_empty()
        && t.chars().any(|c| c == ':' || c == '.')
        && t.chars().all(|c| c.is_ascii_digit() || c == ':' || c == '.')
}

struct Look<'a> {
    form: SplitForm,
    body_start: usize,
    parens: Vec<&'a str>,
}

fn lookahead(text: &str, pos: usize) -> Option<Look<'_>> {
    let mut p = pos;
    let mut parens = Vec::new();
    loop {
        let rest = &text[p..];
        let trimmed = rest.trim_start_matches([' ', '\t']);
        let q = p + (rest.len() - trimmed.len());
        if trimmed.starts_with('(') && parens.len() < 3 {
            let close = trimmed.find(')')?;
            let inner = &trimmed[1..close];
            if inner.contains('(') || close > 160 {
                return None;
            }
            parens.push(inner);
            p = q + close + 1;
            continue;
        }
        if trimmed.starts_with(':') {
            let after = &text[q + 1..];
            let body_start = q + 1 + (after.len() - after.trim_start().len());
            return Some(Look { form: SplitForm::Colon, body_start, parens });
        }
        if q > pos {
            if let Some(r) = trimmed.strip_prefix("interjecting") {
                if !r.chars().next().is_some_and(char::is_alphanumeric) {
                    return Some(Look { form: SplitForm::Interjecting, body_start: q, parens });
                }
            }
        }
        return None;
    }
}

fn presiding_surface(name: &str, parens: &[&str]) -> String {
    match parens.iter().find(|p| !is_time(p)) {
        Some(p) => format!("{} ({})", name, normalize_whitespace(p)),
        None => String::from(name),
    }
}

fn lexicon_splits(text: &str, lex: &NameVariantLexicon) -> Vec<Split> {
    let matches = lex.find_all(text);
    let mut out = Vec::new();
    let mut cursor = 0usize;
    let mut i = 0;
    while i < matches.len() {
        let start = matches[i].start;
        let mut j = i;
        while j < matches.len() && matches[j].start == start {
            j += 1;
        }
        if start >= cursor && guard_ok(text, start) {
            // candidates at this start are sorted longest first
            for m in &matches[i..j] {
                if !boundary_after(text, m.end) {
                    continue;
                }
                let Some(look) = lookahead(text, m.end) else {
                    continue;
                };
                let pattern = lex.pattern(m);
                let written = &text[m.start..m.end];
                let presiding = m.folded
                    && PRESIDING_HONORIFICS
                        .iter()
                        .any(|h| h.eq_ignore_ascii_case(pattern));
                let general = m.folded && !presiding;
                let surface = if presiding {
                    presiding_surface(written, &look.parens)
                } else {
                    String::from(written)
                };
                let key = (!m.folded)
                    .then(|| lex.key_of(pattern).map(String::from))
                    .flatten();
                cursor = match look.form {
                    SplitForm::Colon => look.body_start,
                    SplitForm::Interjecting => m.end,
                };
                out.push(Split {
                    start,
                    name_end: m.end,
                    body_start: look.body_start,
                    form: look.form,
                    surface,
                    key,
                    presiding,
                    general,
                });
                break;
            }
        }
        i = j;
    }
    out
}

/// Title followed by capitalised words, for names missing from the lexicon.
fn residual_splits(text: &str, taken: &[Split]) -> Vec<Split> {
    let covered = |pos: usize| {
        taken
            .iter()
            .any(|s| s.start <= pos && pos < s.body_start.max(s.name_end))
    };
    let mut out = Vec::new();
    let mut skip_until = 0usize;
    for (pos, _) in text.char_indices() {
        if pos < skip_until || covered(pos) || !guard_ok(text, pos) {
            continue;
        }
        let Some(title) = TITLES
            .iter()
            .find(|t| text[pos..].starts_with(*t) && text[pos + t.len()..].starts_with(' '))
        else {
            continue;
        };
        let mut ends = Vec::new();
        let mut p = pos + title.len();
        while ends.len() < 4 {
            let rest = &text[p..];
            let Some(word) = rest.strip_prefix(' ') else { break };
            if !word.chars().next().is_some_and(char::is_uppercase) {
                break;
            }
            let len: usize = word
                .chars()
                .take_while(|c| c.is_alphabetic() || matches!(c, '\'' | '’' | '-' | '.'))
                .map(char::len_utf8)
                .sum();
            p += 1 + len;
            ends.push(p);
        }
        for &end in ends.iter().rev() {
            if let Some(look) = lookahead(text, end) {
                let surface = String::from(&text[pos..end]);
                let general = false;
                out.push(Split {
                    start: pos,
                    name_end: end,
                    body_start: look.body_start,
                    form: look.form,
                    surface,
                    key: None,
                    presiding: false,
                    general,
                });
                skip_until = look.body_start.max(end);
                break;
            }
        }
    }
    out
}

/// Split `text` at every accepted speaker name. The residual pass, when
/// enabled, also splits at title-plus-capitalised-name openers that the
/// lexicon does not know. Fragments with empty bodies are dropped.
pub fn split_text(text: &str, lex: &NameVariantLexicon, residual: bool) -> Vec<Fragment> {
    let mut splits = lexicon_splits(text, lex);
    if residual {
        let extra = residual_splits(text, &splits);
        splits.extend(extra);
        splits.sort_by_key(|s| s.start);
    }
    let mut out = Vec::new();
    let first = splits.first().map_or(text.len(), |s| s.start);
    let lead = normalize_whitespace(&text[..first]);
    if !lead.is_empty() {
        out.push(Fragment {
            surface: None,
            key: None,
            form: None,
            presiding: false,
            general: false,
            body: lead,
            start: 0,
        });
    }
    for (k, s) in splits.iter().enumerate() {
        let end = splits.get(k + 1).map_or(text.len(), |n| n.start);
        let from = match s.form {
            SplitForm::Colon => s.body_start.min(end),
            SplitForm::Interjecting => s.start,
        };
        let body = normalize_whitespace(&text[from..end]);
        if body.is_empty() {
            continue;
        }
        out.push(Fragment {
            surface: Some(s.surface.clone()),
            key: s.key.clone(),
            form: Some(s.form),
            presiding: s.presiding,
            general: s.general,
            body,
            start: s.start,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::lexicon::{build_name_variant_lexicon, default_general_interjections, Attendee};
    use alloc::string::ToString;
    use alloc::vec;

    fn lex() -> NameVariantLexicon {
        let a = |key: &str, s: &str, f: &str| Attendee {
            key: key.into(),
            surname: s.into(),
            first_names: vec![f.to_string()],
            written: vec![],
        };
        build_name_variant_lexicon(
            &[a("VM", "Van Manen", "Bert"), a("AA", "Albanese", "Anthony"), a("TS", "Smith", "Tony")],
            &default_general_interjections(),
        )
    }

    const VAN_MANEN: &str = "Mr VAN MANEN (Forde—Chief Government Whip) (13:59): It's a great pleasure to share with the House that Windaroo Valley State High School has qualified for the finals of the Australian Space Design Competition, to begin in January next year. The competition is regarded as the premier STEM competition for high school students and is recognised by universities around the country. The students are required to respond to industry-level engineering and requests for tender for design and—The SPEAKER: Order! In accordance with standing order 43, the time for members' statements has concluded.";

    #[test]
    fn van_manen_passage() {
        let f = split_text(VAN_MANEN, &lex(), true);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].surface.as_deref(), Some("Mr VAN MANEN"));
        assert_eq!(f[0].key.as_deref(), Some("VM"));
        assert!(f[0].body.starts_with("It's a great pleasure"));
        assert!(f[0].body.ends_with("for design and—"));
        assert_eq!(f[1].surface.as_deref(), Some("The SPEAKER"));
        assert!(f[1].presiding);
        assert!(f[1].body.starts_with("Order! In accordance with standing order 43"));
    }

    #[test]
    fn mentions_do_not_split() {
        let text = "I agree, as Mr Albanese said yesterday, that Mr Smith: is wrong. Mr Albanese would know.";
        let f = split_text(text, &lex(), true);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].surface, None);
    }

    #[test]
    fn no_names_single_fragment() {
        let f = split_text("Just words here.", &lex(), true);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].body, "Just words here.");
    }

    #[test]
    fn interjecting_keeps_phrase_and_longest_wins() {
        let text = "Mr SMITH: First point.\nMr Albanese interjecting—\nMr Tony SMITH: Second point.\nOpposition members interjecting—\nMr SMITH: Done.";
        let f = split_text(text, &lex(), true);
        let got: Vec<_> = f
            .iter()
            .map(|f| (f.surface.clone().unwrap(), f.body.clone()))
            .collect();
        assert_eq!(
            got,
            [
                ("Mr SMITH".to_string(), "First point.".to_string()),
                ("Mr Albanese".into(), "Mr Albanese interjecting—".into()),
                ("Mr Tony SMITH".into(), "Second point.".into()),
                ("Opposition members".into(), "Opposition members interjecting—".into()),
                ("Mr SMITH".into(), "Done.".into()),
            ]
        );
        assert!(f[3].general);
        assert_eq!(f[2].key.as_deref(), Some("TS"));
    }

    #[test]
    fn presiding_parenthetical_kept_time_dropped() {
        let text = "Opening words.\nThe DEPUTY SPEAKER (Ms Vamvakinou) (10:02): Order!";
        let f = split_text(text, &lex(), true);
        assert_eq!(f[1].surface.as_deref(), Some("The DEPUTY SPEAKER (Ms Vamvakinou)"));
        assert_eq!(f[1].body, "Order!");
    }

    #[test]
    fn residual_pass_catches_unknown_names() {
        let text = "Opening words.\nMr KATTER (Kennedy) (10:02): A point of order.\nDr Bob JONES interjecting—";
        let f = split_text(text, &lex(), true);
        assert_eq!(f.len(), 3);
        assert_eq!(f[1].surface.as_deref(), Some("Mr KATTER"));
        assert_eq!(f[1].body, "A point of order.");
        assert_eq!(f[2].surface.as_deref(), Some("Dr Bob JONES"));
        let f = split_text(text, &lex(), false);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn suffix_boundary() {
        let f = split_text("Words.\nMr Smithers: hello", &lex(), false);
        assert_eq!(f.len(), 1);
    }
}
