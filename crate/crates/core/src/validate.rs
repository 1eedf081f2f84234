//! Technical validation tests and summary statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::registry::{PartyFactsMap, PoliticianRegistry};
use crate::table::{CorpusTable, DailyTable, DebateRecord};
use crate::xml::Venue;

pub const TIME_EXPIRED: &str = "(Time expired)";

/// The eight checks, numbered as in the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TestId {
    HeaderDate = 1,
    AdjacentDuplicate = 2,
    TimeExpiredSuffix = 3,
    TimestampFormat = 4,
    SinglePartyElectorate = 5,
    KnownNameId = 6,
    Alive = 7,
    Serving = 8,
}

impl TestId {
    pub const ALL: [TestId; 8] = [
        TestId::HeaderDate,
        TestId::AdjacentDuplicate,
        TestId::TimeExpiredSuffix,
        TestId::TimestampFormat,
        TestId::SinglePartyElectorate,
        TestId::KnownNameId,
        TestId::Alive,
        TestId::Serving,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn description(self) -> &'static str {
        match self {
            TestId::HeaderDate => "file date matches session header date",
            TestId::AdjacentDuplicate => "no two adjacent rows share a body",
            TestId::TimeExpiredSuffix => "\"(Time expired)\" only ends a body",
            TestId::TimestampFormat => "timestamps are HH:MM:SS",
            TestId::SinglePartyElectorate => "one party and electorate per person per day",
            TestId::KnownNameId => "name.id is in the registry",
            TestId::Alive => "speakers are alive on the day",
            TestId::Serving => "speakers are serving MPs on the day",
        }
    }

    /// Advisory tests report findings without failing a run.
    pub fn advisory(self) -> bool {
        self == TestId::AdjacentDuplicate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub test: TestId,
    pub date: NaiveDate,
    /// `order` values of the rows involved; empty for day-level findings.
    pub orders: Vec<i64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test: TestId,
    pub passed: bool,
    pub advisory: bool,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tests: Vec<TestOutcome>,
}

impl ValidationReport {
    pub fn outcome(&self, test: TestId) -> &TestOutcome {
        self.tests.iter().find(|t| t.test == test).expect("all tests run")
    }

    /// Tests with at least one finding.
    pub fn failing(&self) -> Vec<TestId> {
        self.tests.iter().filter(|t| !t.passed).map(|t| t.test).collect()
    }

    /// True when no non-advisory test has findings.
    pub fn ok(&self) -> bool {
        self.tests.iter().all(|t| t.passed || t.advisory)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.tests.iter().flat_map(|t| t.findings.iter())
    }

    /// One line per finding: test, date, orders, detail.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in self.findings() {
            let orders: Vec<String> = f.orders.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{}\t{}\t{}\t{}\n", f.test.number(), f.date, orders.join(","), f.detail));
        }
        out
    }
}

/// What the validator needs from one parsed day.
#[derive(Debug, Clone, Copy)]
pub struct DayEvidence<'a> {
    pub table: &'a DailyTable,
    pub header_date: NaiveDate,
}

/// Members of the House on a date.
pub fn chamber_size(date: NaiveDate) -> usize {
    if date >= NaiveDate::from_ymd_opt(2019, 5, 18).expect("valid") {
        151
    } else if date >= NaiveDate::from_ymd_opt(2001, 11, 10).expect("valid") {
        150
    } else {
        148
    }
}

/// `HH:MM:SS` with two digits each and valid ranges.
pub fn is_valid_timestamp(t: &str) -> bool {
    let b = t.as_bytes();
    if b.len() != 8 || b[2] != b':' || b[5] != b':' {
        return false;
    }
    let num = |i: usize| -> Option<u32> {
        let (x, y) = (b[i], b[i + 1]);
        (x.is_ascii_digit() && y.is_ascii_digit()).then(|| u32::from(x - b'0') * 10 + u32::from(y - b'0'))
    };
    matches!((num(0), num(3), num(6)), (Some(h), Some(m), Some(s)) if h < 24 && m < 60 && s < 60)
}

fn person_key(r: &DebateRecord) -> Option<String> {
    if r.is_non_speech() {
        return None;
    }
    r.unique_id
        .clone()
        .or_else(|| r.name_id.clone())
        .or_else(|| r.name.contains(',').then(|| r.name.clone()))
}

fn check_day(day: &DayEvidence<'_>, registry: &PoliticianRegistry, out: &mut BTreeMap<TestId, Vec<Finding>>) {
    let t = day.table;
    let date = t.date;
    let mut push = |test: TestId, orders: Vec<i64>, detail: String| {
        out.entry(test).or_default().push(Finding { test, date, orders, detail });
    };

    if day.header_date != date {
        push(TestId::HeaderDate, Vec::new(), format!("header date {} differs from file date", day.header_date));
    }
    for w in t.rows.windows(2) {
        if w[0].body == w[1].body {
            push(TestId::AdjacentDuplicate, alloc::vec![w[0].order, w[1].order], "adjacent rows share a body".into());
        }
    }
    for r in &t.rows {
        if r.body.contains(TIME_EXPIRED) && !r.body.trim_end().ends_with(TIME_EXPIRED) {
            push(TestId::TimeExpiredSuffix, alloc::vec![r.order], "text follows \"(Time expired)\"".into());
        }
        if let Some(ts) = &r.time_stamp {
            if !is_valid_timestamp(ts) {
                push(TestId::TimestampFormat, alloc::vec![r.order], format!("timestamp {ts:?}"));
            }
        }
        if let Some(id) = &r.name_id {
            if !registry.has_name_id(id) {
                push(TestId::KnownNameId, alloc::vec![r.order], format!("name.id {id:?} not in registry"));
            }
        }
        if let Some(p) = r.unique_id.as_deref().and_then(|u| registry.by_unique_id(u)) {
            if !p.alive_on(date) {
                push(TestId::Alive, alloc::vec![r.order], format!("{} not alive on this date", p.unique_id));
            }
            if !p.serving_on(date) {
                push(TestId::Serving, alloc::vec![r.order], format!("{} not serving on this date", p.unique_id));
            }
        }
    }

    let mut pairs: BTreeMap<String, (BTreeSet<(Option<&str>, Option<&str>)>, Vec<i64>)> = BTreeMap::new();
    for r in &t.rows {
        if r.party.is_none() && r.electorate.is_none() {
            continue;
        }
        if let Some(k) = person_key(r) {
            let e = pairs.entry(k).or_default();
            e.0.insert((r.party.as_deref(), r.electorate.as_deref()));
            e.1.push(r.order);
        }
    }
    for (k, (set, orders)) in pairs {
        if set.len() > 1 {
            push(TestId::SinglePartyElectorate, orders, format!("{k} has {} party/electorate pairs", set.len()));
        }
    }

    let chamber: BTreeSet<String> = t
        .rows
        .iter()
        .filter(|r| r.fedchamb_flag == 0 && r.q_in_writing == 0)
        .filter_map(person_key)
        .collect();
    let size = chamber_size(date);
    if chamber.len() > size {
        push(TestId::Serving, Vec::new(), format!("{} distinct speakers exceed a House of {size}", chamber.len()));
    }
}

/// Run all eight tests over the given days.
pub fn run_validation(days: &[DayEvidence<'_>], registry: &PoliticianRegistry) -> ValidationReport {
    let mut found: BTreeMap<TestId, Vec<Finding>> = BTreeMap::new();
    for d in days {
        check_day(d, registry, &mut found);
    }
    ValidationReport {
        tests: TestId::ALL
            .iter()
            .map(|&test| {
                let findings = found.remove(&test).unwrap_or_default();
                TestOutcome {
                    test,
                    passed: findings.is_empty(),
                    advisory: test.advisory(),
                    findings,
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyStats {
    pub date: NaiveDate,
    pub venue: Venue,
    pub speeches: u32,
    pub unique_names: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub daily: Vec<DailyStats>,
    /// Speeches by the floor-holder's party, keyed by registry abbreviation.
    pub party_totals: BTreeMap<String, u64>,
}

impl SummaryStats {
    pub fn mean_unique_names(&self, venue: Venue) -> Option<f64> {
        let v: Vec<u32> = self.daily.iter().filter(|d| d.venue == venue).map(|d| d.unique_names).collect();
        (!v.is_empty()).then(|| v.iter().map(|&x| f64::from(x)).sum::<f64>() / v.len() as f64)
    }

    pub fn total_speeches(&self) -> u64 {
        self.daily.iter().map(|d| u64::from(d.speeches)).sum()
    }
}

fn venue_of(r: &DebateRecord) -> Venue {
    if r.fedchamb_flag == 1 {
        Venue::FederationChamber
    } else {
        Venue::Chamber
    }
}

/// Speech and speaker counts per day and venue, and speeches per party.
/// Questions in writing are left out; a speech belongs to the party of its
/// first speaking row.
pub fn compute_summary_stats(corpus: &CorpusTable, partyfacts: &PartyFactsMap) -> SummaryStats {
    let mut stats = SummaryStats::default();
    for day in &corpus.days {
        let mut speeches: BTreeMap<Venue, BTreeSet<i64>> = BTreeMap::new();
        let mut names: BTreeMap<Venue, BTreeSet<String>> = BTreeMap::new();
        // speech -> (order, party) of its earliest speaking row
        let mut floor: BTreeMap<i64, (i64, Option<&str>)> = BTreeMap::new();
        for r in day.rows.iter().filter(|r| r.q_in_writing == 0) {
            speeches.entry(venue_of(r)).or_default().insert(r.speech_no);
            if let Some(k) = person_key(r).filter(|_| r.unique_id.is_some() || r.name_id.is_some()) {
                names.entry(venue_of(r)).or_default().insert(k);
            }
            if !r.is_non_speech() {
                let e = floor.entry(r.speech_no).or_insert((r.order, r.party.as_deref()));
                if r.order < e.0 {
                    *e = (r.order, r.party.as_deref());
                }
            }
        }
        for venue in [Venue::Chamber, Venue::FederationChamber] {
            let s = speeches.get(&venue).map_or(0, BTreeSet::len);
            if s == 0 {
                continue;
            }
            stats.daily.push(DailyStats {
                date: day.date,
                venue,
                speeches: s as u32,
                unique_names: names.get(&venue).map_or(0, BTreeSet::len) as u32,
            });
        }
        for party in floor.into_values().filter_map(|(_, p)| p) {
            *stats.party_totals.entry(partyfacts.canonical_abb(party).to_string()).or_default() += 1;
        }
    }
    stats
}
