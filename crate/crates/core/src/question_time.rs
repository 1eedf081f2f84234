//! Question and answer flags, questions in writing, misflag repair.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::attribution::AttributedStatement;
use crate::segment::{QaSource, RawStatement, StatementKind, TalkerFields};
use crate::text::{is_dash, normalize_whitespace, straighten_quotes};
use crate::xml::{enumerate_proceedings, ProceedingKind, TranscriptDocument};

pub const DEFAULT_QA_PHRASE: &str =
    "has provided the following answer to the honourable member's question";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaDirection {
    QuestionToAnswer,
    AnswerToQuestion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaHeuristic {
    pub direction: QaDirection,
    pub phrase: String,
}

/// Phrases that reveal a misflagged row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaHeuristics {
    rules: Vec<QaHeuristic>,
}

impl Default for QaHeuristics {
    fn default() -> Self {
        QaHeuristics {
            rules: alloc::vec![QaHeuristic {
                direction: QaDirection::QuestionToAnswer,
                phrase: DEFAULT_QA_PHRASE.to_string(),
            }],
        }
    }
}

impl QaHeuristics {
    pub fn new(rules: Vec<QaHeuristic>) -> Self {
        QaHeuristics { rules }
    }

    pub fn rules(&self) -> &[QaHeuristic] {
        &self.rules
    }

    /// One rule per line: a direction marker (`Q>A`, `Q->A`, `Q→A` or the
    /// reverse) then the phrase. Blank lines and `#` comments are skipped.
    pub fn parse(config: &str) -> Result<Self, String> {
        let mut rules = Vec::new();
        for (n, line) in config.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (marker, phrase) = line
                .split_once(|c: char| c.is_whitespace() || c == '|' || c == '\t')
                .ok_or_else(|| format!("line {}: expected a direction marker and a phrase", n + 1))?;
            let direction = match marker.trim() {
                "Q>A" | "Q->A" | "Q→A" => QaDirection::QuestionToAnswer,
                "A>Q" | "A->Q" | "A→Q" => QaDirection::AnswerToQuestion,
                other => return Err(format!("line {}: unknown direction {other:?}", n + 1)),
            };
            let phrase = phrase.trim().trim_start_matches('|').trim();
            if phrase.is_empty() {
                return Err(format!("line {}: empty phrase", n + 1));
            }
            rules.push(QaHeuristic {
                direction,
                phrase: phrase.to_string(),
            });
        }
        Ok(QaHeuristics { rules })
    }
}

/// Set question/answer flags from the element each row came from. A body
/// that occurs under both a question and an answer is reported and settled
/// by the row's own position.
pub fn flag_questions_answers(records: &mut [AttributedStatement]) -> Vec<String> {
    let mut q_bodies = BTreeSet::new();
    let mut a_bodies = BTreeSet::new();
    for r in records.iter().filter(|r| !r.is_non_speech()) {
        match r.raw.qa {
            QaSource::Question => {
                q_bodies.insert(r.raw.body.clone());
            }
            QaSource::Answer => {
                a_bodies.insert(r.raw.body.clone());
            }
            QaSource::None => {}
        }
    }
    let mut notes = Vec::new();
    for r in records.iter_mut() {
        if r.is_non_speech() {
            r.question = 0;
            r.answer = 0;
            continue;
        }
        if r.raw.qa != QaSource::None && q_bodies.contains(&r.raw.body) && a_bodies.contains(&r.raw.body) {
            notes.push(format!(
                "AmbiguousMatch: body {:?} occurs under a question and an answer; kept {:?} by position",
                r.raw.body.chars().take(60).collect::<String>(),
                r.raw.qa
            ));
        }
        r.question = (r.raw.qa == QaSource::Question) as u8;
        r.answer = (r.raw.qa == QaSource::Answer) as u8;
    }
    notes
}

/// One row per question and answer under `answers.to.questions`, in order.
pub fn extract_questions_in_writing(doc: &TranscriptDocument) -> Vec<RawStatement> {
    let tree = doc.tree();
    let mut out = Vec::new();
    for p in enumerate_proceedings(doc).into_iter().filter(|p| p.in_writing) {
        let qa = match p.kind {
            ProceedingKind::Question => QaSource::Question,
            ProceedingKind::Answer => QaSource::Answer,
            _ => continue,
        };
        let talker = tree.first_descendant(p.node, "talker");
        let fields = talker.map(|t| TalkerFields::read(tree, t));
        let body = normalize_whitespace(&tree.flatten(p.node, |t, n| t.is(n, "talker")));
        let body = body
            .trim_start_matches(|c: char| is_dash(c) || c.is_whitespace())
            .to_string();
        if body.is_empty() {
            continue;
        }
        let surface = fields
            .as_ref()
            .and_then(|f| f.surface())
            .unwrap_or_default()
            .to_string();
        let mut st = RawStatement::new(StatementKind::Opening, p.venue, surface, body);
        st.in_writing = true;
        st.qa = qa;
        st.source = Some(p.node);
        st.page_no = fields.as_ref().and_then(|f| f.page_no.clone());
        st.time_stamp = fields.as_ref().and_then(|f| f.time.clone());
        st.presiding = fields
            .as_ref()
            .and_then(|f| f.display_name.as_deref())
            .is_some_and(crate::segment::is_presiding);
        st.talker = fields;
        out.push(st);
    }
    out
}

/// Re-code rows whose body gives away the other role. Returns one note per
/// change; a second run changes nothing.
pub fn correct_qa_misflags(records: &mut [AttributedStatement], heuristics: &QaHeuristics) -> Vec<String> {
    let phrases: Vec<(QaDirection, String)> = heuristics
        .rules
        .iter()
        .map(|h| (h.direction, straighten_quotes(&h.phrase).into_owned()))
        .collect();
    let mut notes = Vec::new();
    for r in records.iter_mut() {
        if r.question == 0 && r.answer == 0 {
            continue;
        }
        let body = straighten_quotes(&r.raw.body);
        for (dir, phrase) in &phrases {
            let hit = body.contains(phrase.as_str());
            match dir {
                QaDirection::QuestionToAnswer if hit && r.question == 1 => {
                    r.question = 0;
                    r.answer = 1;
                }
                QaDirection::AnswerToQuestion if hit && r.answer == 1 => {
                    r.answer = 0;
                    r.question = 1;
                }
                _ => continue,
            }
            notes.push(format!("qa re-flag {dir:?} by {phrase:?} (speech {})", r.raw.speech_no));
            break;
        }
    }
    notes
}
