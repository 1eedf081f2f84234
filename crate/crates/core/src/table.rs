//! The per-statement output schema and its tables.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::attribution::AttributedStatement;
use crate::error::{CorpusError, SchemaViolation};
use crate::segment::{BUSINESS_START, STAGE_DIRECTION};
use crate::xml::Venue;

/// Column names in output order.
pub const COLUMNS: [&str; 20] = [
    "name",
    "order",
    "speech_no",
    "page.no",
    "time.stamp",
    "name.id",
    "electorate",
    "party",
    "in.gov",
    "first.speech",
    "body",
    "fedchamb_flag",
    "question",
    "answer",
    "q_in_writing",
    "gender",
    "uniqueID",
    "interject",
    "div_flag",
    "partyfacts_id",
];

pub const DATE_COLUMN: &str = "date";

/// One statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebateRecord {
    pub name: String,
    pub order: i64,
    pub speech_no: i64,
    pub page_no: Option<String>,
    pub time_stamp: Option<String>,
    pub name_id: Option<String>,
    pub electorate: Option<String>,
    pub party: Option<String>,
    pub in_gov: i32,
    pub first_speech: i32,
    pub body: String,
    pub fedchamb_flag: i32,
    pub question: i32,
    pub answer: i32,
    pub q_in_writing: i32,
    pub gender: Option<String>,
    pub unique_id: Option<String>,
    pub interject: i32,
    pub div_flag: i32,
    pub partyfacts_id: Option<i64>,
}

fn opt_int<T: core::str::FromStr>(s: &str, col: &str) -> Result<Option<T>, String> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| format!("{col}: {s:?} is not an integer"))
}

fn int<T: core::str::FromStr>(s: &str, col: &str) -> Result<T, String> {
    opt_int(s, col)?.ok_or_else(|| format!("{col}: missing value"))
}

fn opt_text(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

impl DebateRecord {
    pub fn is_non_speech(&self) -> bool {
        self.name == STAGE_DIRECTION || self.name == BUSINESS_START
    }

    pub fn flags(&self) -> [(&'static str, i32); 8] {
        [
            ("in.gov", self.in_gov),
            ("first.speech", self.first_speech),
            ("fedchamb_flag", self.fedchamb_flag),
            ("question", self.question),
            ("answer", self.answer),
            ("q_in_writing", self.q_in_writing),
            ("interject", self.interject),
            ("div_flag", self.div_flag),
        ]
    }

    /// Values as text in column order; missing values are `None`.
    pub fn to_fields(&self) -> [Option<String>; 20] {
        let s = |v: &str| Some(v.to_string());
        let n = |v: i64| Some(v.to_string());
        [
            s(&self.name),
            n(self.order),
            n(self.speech_no),
            self.page_no.clone(),
            self.time_stamp.clone(),
            self.name_id.clone(),
            self.electorate.clone(),
            self.party.clone(),
            n(self.in_gov.into()),
            n(self.first_speech.into()),
            s(&self.body),
            n(self.fedchamb_flag.into()),
            n(self.question.into()),
            n(self.answer.into()),
            n(self.q_in_writing.into()),
            self.gender.clone(),
            self.unique_id.clone(),
            n(self.interject.into()),
            n(self.div_flag.into()),
            self.partyfacts_id.map(|v| v.to_string()),
        ]
    }

    /// Inverse of [`DebateRecord::to_fields`], reading empty text as missing.
    pub fn from_fields(f: &[&str]) -> Result<Self, String> {
        if f.len() != COLUMNS.len() {
            return Err(format!("expected {} fields, found {}", COLUMNS.len(), f.len()));
        }
        Ok(DebateRecord {
            name: f[0].to_string(),
            order: int(f[1], COLUMNS[1])?,
            speech_no: int(f[2], COLUMNS[2])?,
            page_no: opt_text(f[3]),
            time_stamp: opt_text(f[4]),
            name_id: opt_text(f[5]),
            electorate: opt_text(f[6]),
            party: opt_text(f[7]),
            in_gov: int(f[8], COLUMNS[8])?,
            first_speech: int(f[9], COLUMNS[9])?,
            body: f[10].to_string(),
            fedchamb_flag: int(f[11], COLUMNS[11])?,
            question: int(f[12], COLUMNS[12])?,
            answer: int(f[13], COLUMNS[13])?,
            q_in_writing: int(f[14], COLUMNS[14])?,
            gender: opt_text(f[15]),
            unique_id: opt_text(f[16]),
            interject: int(f[17], COLUMNS[17])?,
            div_flag: int(f[18], COLUMNS[18])?,
            partyfacts_id: opt_int(f[19], COLUMNS[19])?,
        })
    }

    fn from_statement(order: usize, st: &AttributedStatement) -> Self {
        DebateRecord {
            name: st.name.clone(),
            order: order as i64,
            speech_no: st.raw.speech_no.into(),
            page_no: st.raw.page_no.clone(),
            time_stamp: st.raw.time_stamp.clone(),
            name_id: st.name_id.clone(),
            electorate: st.electorate.clone(),
            party: st.party.clone(),
            in_gov: st.in_gov.into(),
            first_speech: st.first_speech.into(),
            body: st.raw.body.clone(),
            fedchamb_flag: (st.raw.venue == Venue::FederationChamber) as i32,
            question: st.question.into(),
            answer: st.answer.into(),
            q_in_writing: st.q_in_writing.into(),
            gender: st.gender.clone(),
            unique_id: st.unique_id.clone(),
            interject: st.interject.into(),
            div_flag: st.div_flag.into(),
            partyfacts_id: st.partyfacts_id,
        }
    }
}

/// One sitting day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyTable {
    pub date: NaiveDate,
    pub rows: Vec<DebateRecord>,
}

impl DailyTable {
    /// Checks every schema invariant, reporting the first breach.
    pub fn validate(&self) -> Result<(), SchemaViolation> {
        let mut prev_speech = None;
        for (i, r) in self.rows.iter().enumerate() {
            if r.order != i as i64 + 1 {
                return Err(SchemaViolation::OrderGap { row: i, expected: i as i64 + 1, found: r.order });
            }
            if r.speech_no < 1 {
                return Err(SchemaViolation::SpeechNoBelowOne { row: i, found: r.speech_no });
            }
            if let Some(p) = prev_speech {
                if r.speech_no < p {
                    return Err(SchemaViolation::SpeechNoDecreased { row: i, previous: p, found: r.speech_no });
                }
            }
            prev_speech = Some(r.speech_no);
            if r.body.trim().is_empty() {
                return Err(SchemaViolation::EmptyBody { row: i });
            }
            for (column, value) in r.flags() {
                if value != 0 && value != 1 {
                    return Err(SchemaViolation::BadFlag { row: i, column, value });
                }
            }
            if r.question == 1 && r.answer == 1 {
                return Err(SchemaViolation::QuestionAndAnswer { row: i });
            }
            if r.interject == 1 && r.is_non_speech() {
                return Err(SchemaViolation::FlaggedNonSpeech { row: i, name: r.name.clone() });
            }
        }
        Ok(())
    }
}

/// Number the day's statements and check the result. Any breach aborts the
/// day.
pub fn assemble_daily_table(date: NaiveDate, statements: &[AttributedStatement]) -> Result<DailyTable, SchemaViolation> {
    let table = DailyTable {
        date,
        rows: statements
            .iter()
            .enumerate()
            .map(|(i, st)| DebateRecord::from_statement(i + 1, st))
            .collect(),
    };
    table.validate()?;
    Ok(table)
}

/// Many days, in date order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusTable {
    pub days: Vec<DailyTable>,
}

impl CorpusTable {
    pub fn row_count(&self) -> usize {
        self.days.iter().map(|d| d.rows.len()).sum()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.days.iter().map(|d| d.date)
    }

    pub fn rows(&self) -> impl Iterator<Item = (NaiveDate, &DebateRecord)> {
        self.days.iter().flat_map(|d| d.rows.iter().map(move |r| (d.date, r)))
    }

    /// Regroup flat `(date, record)` rows, keeping first-seen date order.
    pub fn from_rows(rows: Vec<(NaiveDate, DebateRecord)>) -> Self {
        let mut days: Vec<DailyTable> = Vec::new();
        for (date, r) in rows {
            match days.last_mut() {
                Some(d) if d.date == date => d.rows.push(r),
                _ => days.push(DailyTable { date, rows: alloc::vec![r] }),
            }
        }
        CorpusTable { days }
    }
}

/// Concatenate days in date order. Two tables for one date is an error.
pub fn build_corpus(mut days: Vec<DailyTable>) -> Result<CorpusTable, CorpusError> {
    if days.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut seen = BTreeSet::new();
    for d in &days {
        if !seen.insert(d.date) {
            return Err(CorpusError::DuplicateDate(d.date));
        }
    }
    days.sort_by_key(|d| d.date);
    Ok(CorpusTable { days })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn record(order: i64, speech: i64) -> DebateRecord {
        DebateRecord {
            name: "Costello, Peter, MP".into(),
            order,
            speech_no: speech,
            page_no: Some("10261".into()),
            time_stamp: Some("NaN:28:00".into()),
            name_id: Some("CT4".into()),
            electorate: Some("Higgins".into()),
            party: Some("LP".into()),
            in_gov: 1,
            first_speech: 0,
            body: "Words, \"quoted\"\nover lines.".into(),
            fedchamb_flag: 0,
            question: 0,
            answer: 0,
            q_in_writing: 0,
            gender: None,
            unique_id: Some("Costello1957".into()),
            interject: 0,
            div_flag: 0,
            partyfacts_id: Some(1491),
        }
    }

    fn day(date: &str, n: i64) -> DailyTable {
        DailyTable {
            date: NaiveDate::parse_from_str(date, "%Y-%m-%d").unwrap(),
            rows: (1..=n).map(|i| record(i, 1)).collect(),
        }
    }

    #[test]
    fn fields_round_trip() {
        let r = record(1, 1);
        let f = r.to_fields();
        let texts: Vec<&str> = f.iter().map(|v| v.as_deref().unwrap_or("")).collect();
        assert_eq!(DebateRecord::from_fields(&texts).unwrap(), r);
        assert_eq!(r.to_fields()[4].as_deref(), Some("NaN:28:00"));
    }

    #[test]
    fn schema_checks() {
        let mut t = day("2020-02-25", 3);
        assert!(t.validate().is_ok());
        t.rows[1].order = 5;
        assert!(matches!(t.validate(), Err(SchemaViolation::OrderGap { row: 1, .. })));
        let mut t = day("2020-02-25", 2);
        t.rows[0].question = 1;
        t.rows[0].answer = 1;
        assert!(matches!(t.validate(), Err(SchemaViolation::QuestionAndAnswer { .. })));
        let mut t = day("2020-02-25", 2);
        t.rows[1].name = STAGE_DIRECTION.into();
        t.rows[1].interject = 1;
        assert!(matches!(t.validate(), Err(SchemaViolation::FlaggedNonSpeech { .. })));
        let mut t = day("2020-02-25", 2);
        t.rows[0].div_flag = 2;
        assert!(matches!(t.validate(), Err(SchemaViolation::BadFlag { column: "div_flag", .. })));
        assert!(assemble_daily_table(t.date, &[]).unwrap().rows.is_empty());
    }

    #[test]
    fn corpus_additivity_and_duplicates() {
        let c = build_corpus(vec![day("2020-02-27", 30), day("2020-02-25", 10), day("2020-02-26", 20)]).unwrap();
        assert_eq!(c.row_count(), 60);
        assert_eq!(c.dates().count(), 3);
        assert!(c.dates().zip(c.dates().skip(1)).all(|(a, b)| a < b));
        let flat: Vec<_> = c.rows().map(|(d, r)| (d, r.clone())).collect();
        assert_eq!(CorpusTable::from_rows(flat), c);
        assert!(matches!(
            build_corpus(vec![day("2020-02-25", 1), day("2020-02-25", 2)]),
            Err(CorpusError::DuplicateDate(_))
        ));
    }
}
