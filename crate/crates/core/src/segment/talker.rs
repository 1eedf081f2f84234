use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::xml::{NodeId, Tree};

/// Speaker metadata from one `talker` element, read from its child nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TalkerFields {
    pub time: Option<String>,
    pub page_no: Option<String>,
    pub name: Option<String>,
    pub display_name: Option<String>,
    pub name_id: Option<String>,
    pub electorate: Option<String>,
    pub party: Option<String>,
    pub role: Option<String>,
    pub in_gov: bool,
    pub first_speech: bool,
}

/// Name id transcripts use for the chair rather than a member.
pub const CHAIR_NAME_ID: &str = "10000";

impl TalkerFields {
    pub fn read(tree: &Tree, talker: NodeId) -> TalkerFields {
        let mut f = TalkerFields::default();
        for c in tree.child_elements(talker) {
            let text = {
                let t = crate::text::normalize_whitespace(&tree.text_content(c));
                (!t.is_empty()).then_some(t)
            };
            match tree.name(c).unwrap_or_default() {
                "time.stamp" => f.time = text,
                "page.no" => f.page_no = text,
                "name" => match tree.attr(c, "role") {
                    Some("metadata") => f.name = text,
                    Some("display") => f.display_name = text,
                    _ if f.name.is_none() && text.as_deref().is_some_and(|t| t.contains(',')) => {
                        f.name = text
                    }
                    _ if f.display_name.is_none() => f.display_name = text,
                    _ => {}
                },
                "name.id" => f.name_id = text,
                "electorate" => f.electorate = text,
                "party" => f.party = text,
                "role" => f.role = text,
                "in.gov" => f.in_gov = text.as_deref() == Some("1"),
                "first.speech" => f.first_speech = text.as_deref() == Some("1"),
                _ => {}
            }
        }
        f
    }

    /// Name id with the chair placeholder removed.
    pub fn member_name_id(&self) -> Option<&str> {
        self.name_id.as_deref().filter(|id| *id != CHAIR_NAME_ID)
    }

    /// The chair rather than a member speaking.
    pub fn is_presiding(&self) -> bool {
        self.display_name.as_deref().is_some_and(super::lexicon::is_presiding)
            || self.name_id.as_deref() == Some(CHAIR_NAME_ID)
    }

    /// Best written form: the display name, else the long name.
    pub fn surface(&self) -> Option<&str> {
        self.display_name.as_deref().or(self.name.as_deref())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QaSource {
    None,
    Question,
    Answer,
}

/// A talker as it appears inline in legacy transcripts: all of its fields
/// run together, ahead of the statement text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TalkerPattern {
    pub raw_pattern: String,
    pub fields: TalkerFields,
    pub talker: NodeId,
    /// Element holding the `talk.start` (speech, interjection, question, ...).
    pub container: NodeId,
    /// Nearest speech, question or answer element, if any.
    pub speech: Option<NodeId>,
    pub qa: QaSource,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TalkerPatterns {
    pub patterns: Vec<TalkerPattern>,
    /// Indices into `patterns` of those found under question elements.
    pub question: Vec<usize>,
    /// Indices into `patterns` of those found under answer elements.
    pub answer: Vec<usize>,
    /// Talkers with no content, skipped.
    pub empty: Vec<NodeId>,
}

/// Every `talk.start/talker` below `root`, in document order.
pub fn extract_talker_patterns(tree: &Tree, root: NodeId) -> TalkerPatterns {
    let mut out = TalkerPatterns::default();
    for start in tree.descendants(root).filter(|&n| tree.is(n, "talk.start")) {
        let Some(talker) = tree.child_element(start, "talker") else {
            continue;
        };
        let raw = tree.flatten(talker, |_, _| false);
        if raw.trim().is_empty() {
            log::warn!("empty talker at byte {}", tree.offset(talker));
            out.empty.push(talker);
            continue;
        }
        let container = tree.parent(start).unwrap_or(root);
        let speech = if tree
            .name(container)
            .is_some_and(|n| matches!(n, "speech" | "question" | "answer"))
        {
            Some(container)
        } else {
            tree.nearest_ancestor(container, &["speech", "question", "answer"])
        };
        let qa_node = if tree.is(container, "question") || tree.is(container, "answer") {
            Some(container)
        } else {
            tree.nearest_ancestor(container, &["question", "answer"])
        };
        let qa = match qa_node.and_then(|n| tree.name(n)) {
            Some("question") => QaSource::Question,
            Some("answer") => QaSource::Answer,
            _ => QaSource::None,
        };
        let idx = out.patterns.len();
        match qa {
            QaSource::Question => out.question.push(idx),
            QaSource::Answer => out.answer.push(idx),
            QaSource::None => {}
        }
        out.patterns.push(TalkerPattern {
            raw_pattern: raw,
            fields: TalkerFields::read(tree, talker),
            talker,
            container,
            speech,
            qa,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE_TALKER: &str = "<talk.start><talker><time.stamp>09:31:00</time.stamp><page.no>10261</page.no>\
        <name role=\"metadata\">Costello, Peter, MP</name><name role=\"display\">Mr COSTELLO</name>\
        <name.id>CT4</name.id><electorate>Higgins</electorate><party>LP</party><role>Treasurer</role>\
        <in.gov>1</in.gov><first.speech>0</first.speech></talker><para>—I move.</para></talk.start>";

    #[test]
    fn sample_talker_pattern_and_fields() {
        let xml = alloc::format!("<answer>{SAMPLE_TALKER}</answer>");
        let t = Tree::parse(&xml).unwrap();
        let pats = extract_talker_patterns(&t, t.document());
        assert_eq!(pats.patterns.len(), 1);
        let p = &pats.patterns[0];
        assert_eq!(
            p.raw_pattern,
            "09:31:0010261Costello, Peter, MPMr COSTELLOCT4HigginsLPTreasurer10"
        );
        assert_eq!(p.fields.display_name.as_deref(), Some("Mr COSTELLO"));
        assert_eq!(p.fields.electorate.as_deref(), Some("Higgins"));
        assert_eq!(p.fields.party.as_deref(), Some("LP"));
        assert!(p.fields.in_gov && !p.fields.first_speech);
        assert_eq!(pats.answer, [0]);
        assert_eq!(p.qa, QaSource::Answer);
    }

    #[test]
    fn empty_talkers_are_recorded() {
        let t = Tree::parse("<speech><talk.start><talker/></talk.start></speech>").unwrap();
        let pats = extract_talker_patterns(&t, t.document());
        assert!(pats.patterns.is_empty());
        assert_eq!(pats.empty.len(), 1);
    }

    #[test]
    fn no_talkers() {
        let t = Tree::parse("<debate><para>x</para></debate>").unwrap();
        assert_eq!(extract_talker_patterns(&t, t.document()), TalkerPatterns::default());
    }
}
