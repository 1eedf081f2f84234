//! One sitting day from bytes to a finished table.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::attribution::{
    build_lookup_table, fill_missing_details, resolve_speakers, AttributedStatement,
};
use crate::divisions::{flag_division_rows, parse_divisions, DivisionRecord};
use crate::error::DayError;
use crate::question_time::{
    correct_qa_misflags, extract_questions_in_writing, flag_questions_answers, QaHeuristics,
};
use crate::registry::{PartyFactsMap, PoliticianRegistry};
use crate::segment::{
    assign_order, build_name_variant_lexicon, default_general_interjections,
    extract_talker_patterns, number_speeches, separate_stage_directions, split_legacy_debate,
    split_modern_speech, Attendee, FixRule, NameVariantLexicon, QaSource, RawStatement,
    SkeletonEntry, SkeletonKind, StageDirectionLexicon, StatementKind, TalkerFields,
    TalkerPattern, BUSINESS_START,
};
use crate::table::{assemble_daily_table, DailyTable};
use crate::text::normalize_whitespace;
use crate::topics::{extract_debate_topics, DebateTopic};
use crate::xml::{
    enumerate_proceedings, parse_document, NodeId, ProceedingKind, SchemaEra, TranscriptDocument,
    Venue,
};

/// Reference data and configuration shared by every day of a run.
#[derive(Debug, Clone)]
pub struct DayConfig {
    pub registry: PoliticianRegistry,
    pub partyfacts: PartyFactsMap,
    pub stage_directions: StageDirectionLexicon,
    pub qa_heuristics: QaHeuristics,
    pub general_interjections: Vec<String>,
    /// Text fixes for legacy transcripts, keyed by the era they apply to.
    pub fix_rules: BTreeMap<SchemaEra, Vec<FixRule>>,
}

impl Default for DayConfig {
    fn default() -> Self {
        DayConfig {
            registry: PoliticianRegistry::default(),
            partyfacts: PartyFactsMap::default(),
            stage_directions: StageDirectionLexicon::default(),
            qa_heuristics: QaHeuristics::default(),
            general_interjections: default_general_interjections(),
            fix_rules: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DayOutput {
    /// Date the day was requested under (file name), else the header date.
    pub date: NaiveDate,
    pub header_date: NaiveDate,
    pub era: SchemaEra,
    pub table: DailyTable,
    pub divisions: Vec<DivisionRecord>,
    pub topics: Vec<DebateTopic>,
    /// Warnings and every correction rule that fired.
    pub notes: Vec<String>,
}

/// Parse, segment, attribute, flag and assemble one day.
pub fn process_day(bytes: &[u8], expected_date: Option<NaiveDate>, cfg: &DayConfig) -> Result<DayOutput, DayError> {
    let doc = parse_document(bytes)?;
    process_document(&doc, expected_date, cfg)
}

pub fn process_document(
    doc: &TranscriptDocument,
    expected_date: Option<NaiveDate>,
    cfg: &DayConfig,
) -> Result<DayOutput, DayError> {
    let header_date = doc.header()?.session_date;
    let era = doc.era()?;
    doc.chamber_root()?;
    let date = expected_date.unwrap_or(header_date);
    let mut notes: Vec<String> = doc.warnings().to_vec();

    let (rows, patterns) = if era.is_modern() {
        (modern_rows(doc, cfg), Vec::new())
    } else {
        legacy_rows(doc, era, cfg, &mut notes)
    };
    let before = rows.len();
    let mut rows = separate_stage_directions(rows, &cfg.stage_directions);
    if rows.len() != before {
        notes.push(format!("stage directions separated: {}", rows.len() - before));
    }
    rows.extend(extract_questions_in_writing(doc));
    number_speeches(&mut rows);
    let rows = assign_order(rows);

    let table = build_lookup_table(&rows, &patterns, &cfg.registry);
    let mut records: Vec<AttributedStatement> = resolve_speakers(rows, &table, &cfg.registry);
    notes.extend(flag_questions_answers(&mut records));
    notes.extend(correct_qa_misflags(&mut records, &cfg.qa_heuristics));
    flag_division_rows(&mut records);
    fill_missing_details(&mut records, &cfg.registry, &cfg.partyfacts, header_date);

    let table = assemble_daily_table(date, &records)?;
    let (divisions, div_notes) = parse_divisions(doc, date);
    let (topics, topic_notes) = extract_debate_topics(doc, date);
    notes.extend(div_notes);
    notes.extend(topic_notes);
    for n in &notes {
        log::info!("{date}: {n}");
    }
    Ok(DayOutput {
        date,
        header_date,
        era,
        table,
        divisions,
        topics,
        notes,
    })
}

fn business_start(doc: &TranscriptDocument, node: NodeId, venue: Venue) -> Option<RawStatement> {
    let body = normalize_whitespace(&doc.tree().flatten(node, |_, _| false));
    (!body.is_empty()).then(|| {
        RawStatement::new(StatementKind::BusinessStart, venue, BUSINESS_START.to_string(), body)
    })
}

fn qa_of(kind: ProceedingKind) -> QaSource {
    match kind {
        ProceedingKind::Question => QaSource::Question,
        ProceedingKind::Answer => QaSource::Answer,
        _ => QaSource::None,
    }
}

/// Everyone with a talker on the day, merged by key.
pub fn day_attendees(doc: &TranscriptDocument, registry: &PoliticianRegistry) -> Vec<Attendee> {
    let tree = doc.tree();
    let mut by_key: BTreeMap<String, Attendee> = BTreeMap::new();
    for t in tree.descendants(tree.document()).filter(|&n| tree.is(n, "talker")) {
        let Some(a) = Attendee::from_talker(&TalkerFields::read(tree, t), registry) else {
            continue;
        };
        by_key
            .entry(a.key.clone())
            .and_modify(|e| {
                for w in &a.written {
                    if !e.written.contains(w) {
                        e.written.push(w.clone());
                    }
                }
            })
            .or_insert(a);
    }
    by_key.into_values().collect()
}

fn skeleton_entry(tree: &crate::xml::Tree, node: NodeId, kind: SkeletonKind, registry: &PoliticianRegistry) -> Option<SkeletonEntry> {
    let talker = tree
        .child_element(node, "talk.start")
        .and_then(|s| tree.child_element(s, "talker"))?;
    let fields = TalkerFields::read(tree, talker);
    let key = Attendee::from_talker(&fields, registry).map(|a| a.key);
    Some(SkeletonEntry { kind, fields, key })
}

fn modern_speech(
    doc: &TranscriptDocument,
    node: NodeId,
    kind: ProceedingKind,
    venue: Venue,
    lexicon: &NameVariantLexicon,
    registry: &PoliticianRegistry,
) -> Vec<RawStatement> {
    let tree = doc.tree();
    let opener = skeleton_entry(tree, node, SkeletonKind::Opening, registry).unwrap_or(SkeletonEntry {
        kind: SkeletonKind::Opening,
        fields: TalkerFields::default(),
        key: None,
    });
    let skeleton: Vec<SkeletonEntry> = tree
        .child_elements(node)
        .filter_map(|c| match tree.name(c) {
            Some("interjection") => skeleton_entry(tree, c, SkeletonKind::Interjection, registry),
            Some("continuation") => skeleton_entry(tree, c, SkeletonKind::Continuation, registry),
            _ => None,
        })
        .collect();
    let text = match tree.child_element(node, "talk.text") {
        Some(t) => tree.flatten(t, |_, _| false),
        None => tree.flatten(node, |t, n| {
            t.is(n, "talker") || t.is(n, "interjection") || t.is(n, "continuation")
        }),
    };
    let mut rows = split_modern_speech(&text, lexicon, &opener, &skeleton, venue);
    for r in &mut rows {
        r.source = Some(node);
        r.qa = qa_of(kind);
    }
    rows
}

fn modern_rows(doc: &TranscriptDocument, cfg: &DayConfig) -> Vec<RawStatement> {
    let attendees = day_attendees(doc, &cfg.registry);
    let lexicon = build_name_variant_lexicon(&attendees, &cfg.general_interjections);
    let mut rows = Vec::new();
    for p in enumerate_proceedings(doc).into_iter().filter(|p| !p.in_writing) {
        match p.kind {
            ProceedingKind::BusinessStart => rows.extend(business_start(doc, p.node, p.venue)),
            k if k.opens_speech() => {
                rows.extend(modern_speech(doc, p.node, k, p.venue, &lexicon, &cfg.registry))
            }
            _ => {}
        }
    }
    rows
}

fn legacy_rows(
    doc: &TranscriptDocument,
    era: SchemaEra,
    cfg: &DayConfig,
    notes: &mut Vec<String>,
) -> (Vec<RawStatement>, Vec<TalkerPattern>) {
    let tree = doc.tree();
    let general = NameVariantLexicon::general_only(&cfg.general_interjections);
    let fixes = cfg.fix_rules.get(&era).map(Vec::as_slice).unwrap_or(&[]);
    let mut rows = Vec::new();
    let mut all_patterns = Vec::new();
    for p in enumerate_proceedings(doc).into_iter().filter(|p| !p.in_writing) {
        match p.kind {
            ProceedingKind::BusinessStart => rows.extend(business_start(doc, p.node, p.venue)),
            ProceedingKind::Debate
                if tree.ancestors(p.node).skip(1).all(|a| !tree.is(a, "debate")) =>
            {
                let pats = extract_talker_patterns(tree, p.node);
                let out = split_legacy_debate(tree, p.node, &pats.patterns, &general, p.venue, fixes);
                for m in &out.missing {
                    notes.push(format!("PatternNotFound: {m}"));
                }
                for f in &out.fixes_fired {
                    notes.push(format!("fix rule fired: {f:?}"));
                }
                rows.extend(out.statements);
                all_patterns.extend(pats.patterns);
            }
            _ => {}
        }
    }
    (rows, all_patterns)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODERN: &str = r#"<hansard><session.header><date>2021-11-30</date><parliament.no>46</parliament.no><chamber>House of Reps</chamber></session.header>
<chamber.xscript><business.start><para>The SPEAKER took the chair at 12:00.</para></business.start>
<debate><debateinfo><title>BILLS</title><page.no>1</page.no></debateinfo>
<speech><talk.start><talker><time.stamp>12:01:00</time.stamp><page.no>1</page.no><name role="metadata">Van Manen, Bert, MP</name><name role="display">Mr VAN MANEN</name><name.id>HWQ</name.id><electorate>Forde</electorate><party>LP</party></talker></talk.start>
<talk.text><body><p>Mr VAN MANEN (Forde) (12:01): I commend the bill. Question agreed to.</p><p>The SPEAKER: Order! In accordance with standing order 43, members may make statements.</p></body></talk.text></speech>
</debate></chamber.xscript></hansard>"#;

    #[test]
    fn modern_day_end_to_end() {
        let out = process_day(MODERN.as_bytes(), None, &DayConfig::default()).unwrap();
        assert_eq!(out.era, SchemaEra::ModernFedChamb);
        let rows: Vec<_> = out
            .table
            .rows
            .iter()
            .map(|r| (r.name.as_str(), r.body.as_str(), r.interject, r.speech_no))
            .collect();
        assert_eq!(
            rows,
            [
                ("business start", "The SPEAKER took the chair at 12:00.", 0, 1),
                ("Van Manen, Bert, MP", "I commend the bill.", 0, 1),
                ("stage direction", "Question agreed to.", 0, 1),
                ("The SPEAKER", "Order! In accordance with standing order 43, members may make statements.", 0, 1),
            ]
        );
        assert_eq!(out.topics.len(), 1);
    }
}
