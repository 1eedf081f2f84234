use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::tree::{NodeId, Tree};
use crate::error::ParseError;
use crate::text::{decode_transcript, normalize_whitespace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchemaEra {
    ModernFedChamb,
    ModernMainComm,
    LegacyInline,
    LegacyEarly,
}

impl SchemaEra {
    pub const ALL: [SchemaEra; 4] = [
        SchemaEra::ModernFedChamb,
        SchemaEra::ModernMainComm,
        SchemaEra::LegacyInline,
        SchemaEra::LegacyEarly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemaEra::ModernFedChamb => "ModernFedChamb",
            SchemaEra::ModernMainComm => "ModernMainComm",
            SchemaEra::LegacyInline => "LegacyInline",
            SchemaEra::LegacyEarly => "LegacyEarly",
        }
    }

    pub fn is_modern(self) -> bool {
        matches!(self, SchemaEra::ModernFedChamb | SchemaEra::ModernMainComm)
    }

    pub fn is_legacy(self) -> bool {
        !self.is_modern()
    }

    /// Element that holds the second debate venue in documents of this era.
    pub fn second_venue_tag(self) -> &'static str {
        match self {
            SchemaEra::ModernFedChamb => FEDCHAMB,
            _ => MAINCOMM,
        }
    }

    /// Inclusive date range documents of this era are expected to carry.
    pub fn date_range(self) -> (NaiveDate, NaiveDate) {
        match self {
            SchemaEra::ModernFedChamb => (FEDCHAMB_FROM, LAST_SITTING),
            SchemaEra::ModernMainComm => (MAINCOMM_FROM, MAINCOMM_TO),
            SchemaEra::LegacyInline => (INLINE_FROM, LEGACY_TO),
            SchemaEra::LegacyEarly => (FIRST_SITTING, EARLY_TO),
        }
    }

    /// The era a sitting date falls in, or `None` inside the window no
    /// description covers.
    pub fn for_date(date: NaiveDate) -> Option<SchemaEra> {
        if date >= FEDCHAMB_FROM {
            Some(SchemaEra::ModernFedChamb)
        } else if date >= MAINCOMM_FROM {
            Some(SchemaEra::ModernMainComm)
        } else if date > LEGACY_TO {
            None
        } else if date >= INLINE_FROM {
            Some(SchemaEra::LegacyInline)
        } else {
            Some(SchemaEra::LegacyEarly)
        }
    }
}

impl fmt::Display for SchemaEra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemaEra {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SchemaEra::ALL
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown schema era {s:?}"))
    }
}

pub(crate) const FEDCHAMB: &str = "fedchamb.xscript";
pub(crate) const MAINCOMM: &str = "maincomm.xscript";
pub(crate) const CHAMBER: &str = "chamber.xscript";
pub(crate) const ANSWERS: &str = "answers.to.questions";

const fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    match NaiveDate::from_ymd_opt(y, m, d) {
        Some(d) => d,
        None => panic!("bad constant date"),
    }
}

pub const FIRST_SITTING: NaiveDate = ymd(1998, 3, 2);
pub const LAST_SITTING: NaiveDate = ymd(2022, 9, 8);
const EARLY_TO: NaiveDate = ymd(1999, 12, 31);
const INLINE_FROM: NaiveDate = ymd(2000, 1, 1);
const LEGACY_TO: NaiveDate = ymd(2011, 3, 24);
const MAINCOMM_FROM: NaiveDate = ymd(2011, 5, 10);
const MAINCOMM_TO: NaiveDate = ymd(2012, 6, 28);
const FEDCHAMB_FROM: NaiveDate = ymd(2012, 8, 14);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionHeader {
    pub session_date: NaiveDate,
    pub raw_date: String,
    pub parliament_no: Option<String>,
    pub chamber_label: Option<String>,
    pub other: BTreeMap<String, String>,
}

/// Accepts ISO dates and the spelled-out forms found in older headers.
pub fn parse_session_date(raw: &str) -> Option<NaiveDate> {
    let raw = normalize_whitespace(raw);
    const FORMATS: &[&str] = &[
        "%Y-%m-%d",
        "%d/%m/%Y",
        "%d %B %Y",
        "%A, %d %B %Y",
        "%A %d %B %Y",
        "%d-%b-%Y",
        "%Y%m%d",
    ];
    FORMATS
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(&raw, f).ok())
}

#[derive(Debug, Clone)]
pub struct TranscriptDocument {
    tree: Tree,
    header: Result<SessionHeader, ParseError>,
    era: Result<SchemaEra, ParseError>,
    chamber_root: Option<NodeId>,
    fedchamb_root: Option<NodeId>,
    answers_root: Option<NodeId>,
    transcoded: bool,
    warnings: Vec<String>,
}

impl TranscriptDocument {
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn header(&self) -> Result<&SessionHeader, ParseError> {
        self.header.as_ref().map_err(Clone::clone)
    }

    pub fn session_date(&self) -> Option<NaiveDate> {
        self.header.as_ref().ok().map(|h| h.session_date)
    }

    pub fn era(&self) -> Result<SchemaEra, ParseError> {
        self.era.clone()
    }

    pub fn chamber_root(&self) -> Result<NodeId, ParseError> {
        self.chamber_root.ok_or(ParseError::MissingChamber)
    }

    pub fn fedchamb_root(&self) -> Option<NodeId> {
        self.fedchamb_root
    }

    pub fn answers_root(&self) -> Option<NodeId> {
        self.answers_root
    }

    /// Bytes were not UTF-8 and were read as Latin-1.
    pub fn transcoded(&self) -> bool {
        self.transcoded
    }

    /// Era-probe disagreements and similar non-fatal observations.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

pub fn parse_document(bytes: &[u8]) -> Result<TranscriptDocument, ParseError> {
    let (text, transcoded) = decode_transcript(bytes);
    let tree = Tree::parse(&text)?;
    let root = tree
        .root_element()
        .ok_or_else(|| ParseError::MissingRoot(String::new()))?;
    if !tree.is(root, "hansard") {
        return Err(ParseError::MissingRoot(
            tree.name(root).unwrap_or_default().to_string(),
        ));
    }
    let header = read_header(&tree, root);
    let venue = |name: &str| {
        tree.child_element(root, name)
            .or_else(|| tree.first_descendant(root, name))
    };
    let chamber_root = venue(CHAMBER);
    let fedchamb_root = venue(FEDCHAMB).or_else(|| venue(MAINCOMM));
    let answers_root = venue(ANSWERS);
    let mut warnings = Vec::new();
    if transcoded {
        warnings.push("input was not UTF-8; decoded as Latin-1".to_string());
    }
    let date = header.as_ref().ok().map(|h| h.session_date);
    let era = detect_era(&tree, date, &mut warnings);
    Ok(TranscriptDocument {
        tree,
        header,
        era,
        chamber_root,
        fedchamb_root,
        answers_root,
        transcoded,
        warnings,
    })
}

fn read_header(tree: &Tree, root: NodeId) -> Result<SessionHeader, ParseError> {
    let header = tree
        .child_element(root, "session.header")
        .ok_or(ParseError::MissingHeader)?;
    let raw_date = tree
        .child_text(header, "date")
        .ok_or(ParseError::MissingHeader)?;
    let session_date =
        parse_session_date(&raw_date).ok_or_else(|| ParseError::BadHeaderDate(raw_date.clone()))?;
    let mut other = BTreeMap::new();
    for c in tree.child_elements(header) {
        let name = tree.name(c).unwrap_or_default();
        if !matches!(name, "date" | "parliament.no" | "chamber") {
            other.insert(
                name.to_string(),
                normalize_whitespace(&tree.text_content(c)),
            );
        }
    }
    Ok(SessionHeader {
        session_date,
        raw_date,
        parliament_no: tree.child_text(header, "parliament.no"),
        chamber_label: tree.child_text(header, "chamber"),
        other,
    })
}

/// Structural observations used to classify a document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EraProbe {
    pub fedchamb: bool,
    pub maincomm: bool,
    pub has_speeches: bool,
    pub talk_text: bool,
}

impl EraProbe {
    pub fn of(tree: &Tree) -> EraProbe {
        let mut p = EraProbe::default();
        for n in tree.descendants(tree.document()) {
            match tree.name(n) {
                Some(FEDCHAMB) => p.fedchamb = true,
                Some(MAINCOMM) => p.maincomm = true,
                Some("speech" | "question" | "answer") => {
                    if tree.nearest_ancestor(n, &[ANSWERS]).is_none() {
                        p.has_speeches = true;
                    }
                }
                Some("talk.text") => {
                    let parent = tree.parent(n).and_then(|p| tree.name(p));
                    if matches!(parent, Some("speech" | "question" | "answer")) {
                        p.talk_text = true;
                    }
                }
                _ => {}
            }
        }
        p
    }

    /// Classification from structure, using the date only to choose between
    /// eras the structure cannot tell apart.
    pub fn classify(self, date: Option<NaiveDate>) -> Option<SchemaEra> {
        if self.fedchamb {
            return Some(SchemaEra::ModernFedChamb);
        }
        let date_era = date.and_then(SchemaEra::for_date);
        if self.has_speeches && self.talk_text {
            if self.maincomm {
                return Some(SchemaEra::ModernMainComm);
            }
            return date.map(|d| {
                if d >= FEDCHAMB_FROM {
                    SchemaEra::ModernFedChamb
                } else {
                    SchemaEra::ModernMainComm
                }
            });
        }
        if self.has_speeches {
            return date.map(|d| {
                if d >= INLINE_FROM {
                    SchemaEra::LegacyInline
                } else {
                    SchemaEra::LegacyEarly
                }
            });
        }
        match (self.maincomm, date_era) {
            (true, Some(e)) if e.is_legacy() => Some(e),
            (true, _) => Some(SchemaEra::ModernMainComm),
            (false, e) => e,
        }
    }
}

pub fn detect_era(
    tree: &Tree,
    date: Option<NaiveDate>,
    warnings: &mut Vec<String>,
) -> Result<SchemaEra, ParseError> {
    let era = EraProbe::of(tree)
        .classify(date)
        .ok_or(ParseError::UndetectableEra)?;
    if let Some(d) = date {
        match SchemaEra::for_date(d) {
            Some(expected) if expected != era => {
                let msg = format!("structure indicates {era} but date {d} indicates {expected}");
                log::warn!("{msg}");
                warnings.push(msg);
            }
            None => {
                let msg = format!("date {d} falls between documented eras; classified as {era}");
                log::warn!("{msg}");
                warnings.push(msg);
            }
            _ => {}
        }
    }
    Ok(era)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(date: &str, body: &str) -> TranscriptDocument {
        let xml = format!(
            "<hansard><session.header><date>{date}</date><parliament.no>46</parliament.no></session.header>{body}</hansard>"
        );
        parse_document(xml.as_bytes()).unwrap()
    }

    const MODERN: &str = "<chamber.xscript><debate><speech><talk.start/><talk.text><body>x</body></talk.text></speech></debate></chamber.xscript>";
    const LEGACY: &str = "<chamber.xscript><debate><speech><talk.start><para>x</para></talk.start></speech></debate></chamber.xscript>";

    #[test]
    fn header_date_is_read() {
        let d = doc("2020-02-25", "<chamber.xscript/>");
        let h = d.header().unwrap();
        assert_eq!(h.session_date, NaiveDate::from_ymd_opt(2020, 2, 25).unwrap());
        assert_eq!(h.parliament_no.as_deref(), Some("46"));
    }

    #[test]
    fn minimal_document_parses_with_deferred_errors() {
        let d = parse_document(b"<hansard/>").unwrap();
        assert_eq!(d.chamber_root(), Err(ParseError::MissingChamber));
        assert_eq!(d.header().unwrap_err(), ParseError::MissingHeader);
        assert_eq!(d.era(), Err(ParseError::UndetectableEra));
    }

    #[test]
    fn wrong_root_is_rejected() {
        assert_eq!(
            parse_document(b"<senate/>").unwrap_err(),
            ParseError::MissingRoot("senate".into())
        );
    }

    #[test]
    fn era_boundaries() {
        let fed = format!("{MODERN}<fedchamb.xscript/>");
        assert_eq!(doc("2012-08-14", &fed).era(), Ok(SchemaEra::ModernFedChamb));
        let mc = format!("{MODERN}<maincomm.xscript/>");
        assert_eq!(doc("2011-05-10", &mc).era(), Ok(SchemaEra::ModernMainComm));
        assert_eq!(doc("2012-06-28", &mc).era(), Ok(SchemaEra::ModernMainComm));
        assert_eq!(doc("1998-03-02", LEGACY).era(), Ok(SchemaEra::LegacyEarly));
        assert_eq!(doc("2000-01-01", LEGACY).era(), Ok(SchemaEra::LegacyInline));
        assert_eq!(doc("2011-03-24", LEGACY).era(), Ok(SchemaEra::LegacyInline));
    }

    #[test]
    fn structure_beats_date_with_warning() {
        let d = doc("2005-06-01", MODERN);
        assert_eq!(d.era(), Ok(SchemaEra::ModernMainComm));
        assert_eq!(d.warnings().len(), 1);
        let d = doc("2011-04-12", LEGACY);
        assert_eq!(d.era(), Ok(SchemaEra::LegacyInline));
        assert!(d.warnings()[0].contains("between documented eras"));
    }

    #[test]
    fn native_header_dates() {
        assert_eq!(
            parse_session_date("Tuesday, 25 February 2020"),
            NaiveDate::from_ymd_opt(2020, 2, 25)
        );
        assert_eq!(
            parse_session_date("25/02/2020"),
            NaiveDate::from_ymd_opt(2020, 2, 25)
        );
        assert_eq!(parse_session_date("2020-02-30"), None);
    }
}
