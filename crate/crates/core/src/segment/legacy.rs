use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::text::{is_dash, normalize_whitespace};
use crate::xml::{NodeId, Tree, Venue};

use super::lexicon::NameVariantLexicon;
use super::split::split_text;
use super::talker::TalkerPattern;
use super::{RawStatement, StatementKind};

/// A literal text substitution applied to flattened debate text before
/// splitting, for known transcription errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixRule {
    pub find: String,
    pub replace: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LegacyOutcome {
    pub statements: Vec<RawStatement>,
    /// Raw patterns that had no inline occurrence.
    pub missing: Vec<String>,
    /// Fix rules that changed the text.
    pub fixes_fired: Vec<String>,
}

fn strip_lead(s: &str) -> String {
    s.trim_start_matches(|c: char| is_dash(c) || c.is_whitespace())
        .to_string()
}

fn skip_titles(tree: &Tree, n: NodeId) -> bool {
    tree.is(n, "debateinfo") || tree.is(n, "subdebateinfo")
}

/// Split the flattened text of one debate at each talker pattern, consuming
/// the first occurrence after the previous one. Patterns and titles are
/// removed from the bodies. Text ahead of the first pattern becomes a
/// stage-direction row; general interjection phrases are split off by a
/// second pass.
pub fn split_legacy_debate(
    tree: &Tree,
    debate: NodeId,
    patterns: &[TalkerPattern],
    general: &NameVariantLexicon,
    venue: Venue,
    fixes: &[FixRule],
) -> LegacyOutcome {
    let mut out = LegacyOutcome::default();
    let mut text = tree.flatten(debate, skip_titles);
    for rule in fixes {
        if !rule.find.is_empty() && text.contains(&rule.find) {
            text = text.replace(&rule.find, &rule.replace);
            out.fixes_fired.push(rule.find.clone());
        }
    }

    // (pattern index, start, end); end is None when the pattern is missing
    let mut anchors: Vec<(usize, usize, Option<usize>)> = Vec::new();
    let mut cursor = 0usize;
    for (i, p) in patterns.iter().enumerate() {
        match text[cursor..].find(&p.raw_pattern) {
            Some(off) => {
                let start = cursor + off;
                cursor = start + p.raw_pattern.len();
                anchors.push((i, start, Some(cursor)));
            }
            None => {
                log::warn!("talker pattern not found inline: {}", p.raw_pattern);
                out.missing.push(p.raw_pattern.clone());
                anchors.push((i, cursor, None));
            }
        }
    }

    let first = anchors.iter().find(|a| a.2.is_some()).map_or(text.len(), |a| a.1);
    let preamble = normalize_whitespace(&text[..first]);
    if !preamble.is_empty() {
        let mut st = RawStatement::new(StatementKind::StageDirection, venue, String::new(), preamble);
        st.surface_name = super::STAGE_DIRECTION.to_string();
        out.statements.push(st);
    }

    let mut page: Option<String> = None;
    for (k, &(i, _, end)) in anchors.iter().enumerate() {
        let p = &patterns[i];
        if p.fields.page_no.is_some() {
            page = p.fields.page_no.clone();
        }
        let mut row = pattern_row(tree, p, venue, page.clone());
        match end {
            Some(body_start) => {
                let next = anchors[k + 1..]
                    .iter()
                    .find(|a| a.2.is_some())
                    .map_or(text.len(), |a| a.1);
                let piece = &text[body_start..next];
                let mut pieces = split_text(piece, general, false).into_iter();
                let mut split_off = Vec::new();
                for frag in pieces.by_ref() {
                    if frag.surface.is_none() {
                        row.body = strip_lead(&frag.body);
                    } else {
                        let mut st = RawStatement::new(
                            StatementKind::InterjectionCandidate,
                            venue,
                            frag.surface.clone().unwrap_or_default(),
                            frag.body,
                        );
                        st.page_no = page.clone();
                        st.source = row.source;
                        st.qa = row.qa;
                        st.presiding = frag.presiding;
                        st.general = frag.general;
                        split_off.push(st);
                    }
                }
                if !row.body.is_empty() {
                    out.statements.push(row);
                }
                out.statements.extend(split_off);
            }
            None => {
                let own = tree
                    .parent(p.talker)
                    .map(|start| tree.flatten(start, |t, n| t.is(n, "talker")))
                    .unwrap_or_default();
                let own = strip_lead(&normalize_whitespace(&own));
                if own.is_empty() {
                    continue;
                }
                if let Some(prev) = out.statements.last_mut() {
                    if let Some(pos) = prev.body.find(&own) {
                        let mut b = prev.body.clone();
                        b.replace_range(pos..pos + own.len(), " ");
                        prev.body = normalize_whitespace(&b);
                    }
                    if prev.body.is_empty() {
                        out.statements.pop();
                    }
                }
                row.body = own;
                out.statements.push(row);
            }
        }
    }
    out
}

fn pattern_row(tree: &Tree, p: &TalkerPattern, venue: Venue, page: Option<String>) -> RawStatement {
    let kind = match tree.name(p.container) {
        Some("interjection") => StatementKind::InterjectionCandidate,
        Some("continuation") => StatementKind::Continuation,
        _ => StatementKind::Opening,
    };
    let surface = p.fields.surface().unwrap_or_default().to_string();
    let mut st = RawStatement::new(kind, venue, surface, String::new());
    st.presiding = p.fields.is_presiding();
    st.time_stamp = p.fields.time.clone();
    st.page_no = page;
    st.talker = Some(p.fields.clone());
    st.source = p.speech;
    st.qa = p.qa;
    st
}
