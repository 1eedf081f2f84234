//! Turning speech content into one row per statement.

mod legacy;
mod lexicon;
mod modern;
mod order;
mod split;
mod stage;
mod talker;

use alloc::string::String;

use crate::xml::{NodeId, Venue};

pub use legacy::{split_legacy_debate, FixRule, LegacyOutcome};
pub use lexicon::{
    build_name_variant_lexicon, default_general_interjections, is_general, is_presiding,
    name_variants, strip_parentheticals, Attendee, NameVariantLexicon, GENERAL_INTERJECTIONS,
    PRESIDING_HONORIFICS, TITLES,
};
pub use modern::{split_modern_speech, SkeletonEntry, SkeletonKind};
pub use order::{assign_order, number_speeches};
pub use split::{split_text, Fragment, SplitForm};
pub use stage::{
    separate_stage_directions, StageDirectionLexicon, DEFAULT_STAGE_DIRECTIONS, STAGE_DIRECTION,
};
pub use talker::{
    extract_talker_patterns, QaSource, TalkerFields, TalkerPattern, TalkerPatterns, CHAIR_NAME_ID,
};

pub const BUSINESS_START: &str = "business start";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatementKind {
    BusinessStart,
    Opening,
    Continuation,
    InterjectionCandidate,
    StageDirection,
}

/// A statement before speaker resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStatement {
    pub speech_no: u32,
    pub seq_in_speech: u32,
    pub surface_name: String,
    pub body: String,
    pub time_stamp: Option<String>,
    pub page_no: Option<String>,
    pub kind: StatementKind,
    pub venue: Venue,
    pub in_writing: bool,
    /// Speech, question or answer element the statement belongs to.
    pub source: Option<NodeId>,
    /// Structured talker fields when the statement has its own talker.
    pub talker: Option<TalkerFields>,
    /// Attendee key from the name lexicon.
    pub key: Option<String>,
    pub presiding: bool,
    pub general: bool,
    pub qa: QaSource,
}

impl RawStatement {
    pub fn new(kind: StatementKind, venue: Venue, surface_name: String, body: String) -> Self {
        RawStatement {
            speech_no: 0,
            seq_in_speech: 0,
            surface_name,
            body,
            time_stamp: None,
            page_no: None,
            kind,
            venue,
            in_writing: false,
            source: None,
            talker: None,
            key: None,
            presiding: false,
            general: false,
            qa: QaSource::None,
        }
    }

    /// A stage-direction row in the same speech and on the same page.
    pub fn stage_direction_row(&self, body: String) -> RawStatement {
        RawStatement {
            speech_no: self.speech_no,
            page_no: self.page_no.clone(),
            source: self.source,
            ..RawStatement::new(
                StatementKind::StageDirection,
                self.venue,
                String::from(STAGE_DIRECTION),
                body,
            )
        }
    }

    pub fn is_non_speech(&self) -> bool {
        matches!(
            self.kind,
            StatementKind::BusinessStart | StatementKind::StageDirection
        )
    }
}
