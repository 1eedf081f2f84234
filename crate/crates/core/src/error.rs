use alloc::string::String;

use crate::xml::SchemaEra;

/// Failures while turning raw bytes into a [`crate::xml::TranscriptDocument`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed XML at byte {offset}: {message}")]
    MalformedXml { offset: usize, message: String },
    #[error("root element is <{0}>, expected <hansard>")]
    MissingRoot(String),
    #[error("document has no session.header/date")]
    MissingHeader,
    #[error("session date {0:?} is not a calendar date")]
    BadHeaderDate(String),
    #[error("no schema era probe matched")]
    UndetectableEra,
    #[error("document has no chamber.xscript")]
    MissingChamber,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("fixtures cannot be generated for {0:?}")]
    UnsupportedEra(SchemaEra),
    #[error("fixture spec needs at least one debate")]
    NoDebates,
    #[error("interjection rate {0} is outside [0, 1]")]
    BadRate(String),
}

/// A table that breaks the output schema. Emission for the day is aborted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaViolation {
    #[error("row {row}: order {found} where {expected} was expected")]
    OrderGap { row: usize, expected: i64, found: i64 },
    #[error("row {row}: speech_no decreased from {previous} to {found}")]
    SpeechNoDecreased { row: usize, previous: i64, found: i64 },
    #[error("row {row}: empty body")]
    EmptyBody { row: usize },
    #[error("row {row}: question and answer both set")]
    QuestionAndAnswer { row: usize },
    #[error("row {row}: {name:?} row flagged as interjection")]
    FlaggedNonSpeech { row: usize, name: String },
    #[error("row {row}: {column} is {value}, expected 0 or 1")]
    BadFlag { row: usize, column: &'static str, value: i32 },
    #[error("row {row}: speech_no {found} is below 1")]
    SpeechNoBelowOne { row: usize, found: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("no daily tables given")]
    Empty,
    #[error("two daily tables claim {0}")]
    DuplicateDate(chrono::NaiveDate),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DayError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Schema(#[from] SchemaViolation),
}
