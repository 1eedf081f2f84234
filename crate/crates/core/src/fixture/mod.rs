//! Seeded synthetic sitting days with known answers.
//!
//! [`generate_fixture`] writes a transcript in the layout of a chosen schema
//! era and, alongside it, the table, divisions and topics a correct parse
//! must produce. The expected values are built from what the generator put
//! in the document, not by running any parsing code.

mod defects;
mod roster;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use chrono::{Datelike, Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divisions::DivisionRecord;
use crate::question_time::DEFAULT_QA_PHRASE;
use crate::segment::QaSource;
use crate::table::{DailyTable, DebateRecord};
use crate::text::straighten_quotes;
use crate::topics::DebateTopic;
use crate::xml::{SchemaEra, Venue};

pub use defects::{inject_defect, DefectCase, DefectClass, DefectError};
pub use roster::{fixture_partyfacts, fixture_registry};
use roster::{speakers, Member, DEPUTY, FIG_OPENER, ROSTER};

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub era: SchemaEra,
    pub seed: u64,
    pub n_debates: usize,
    /// Chance that each turn after the opening is an interjection.
    pub interjection_rate: f64,
    pub include_fedchamb: bool,
    pub include_divisions: bool,
}

impl FixtureSpec {
    pub fn new(era: SchemaEra, seed: u64) -> Self {
        FixtureSpec {
            era,
            seed,
            n_debates: 3,
            interjection_rate: 0.35,
            include_fedchamb: true,
            include_divisions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FixtureError {
    #[error("interjection rate {0} is outside [0, 1]")]
    BadRate(f64),
    #[error("a fixture needs at least one debate")]
    NoDebates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub spec: FixtureSpec,
    pub date: NaiveDate,
    pub xml: String,
    pub truth: DailyTable,
    pub divisions: Vec<DivisionRecord>,
    pub topics: Vec<DebateTopic>,
}

impl Fixture {
    pub fn bytes(&self) -> &[u8] {
        self.xml.as_bytes()
    }
}

pub fn generate_fixture(spec: &FixtureSpec) -> Result<Fixture, FixtureError> {
    if !(0.0..=1.0).contains(&spec.interjection_rate) {
        return Err(FixtureError::BadRate(spec.interjection_rate));
    }
    if spec.n_debates == 0 {
        return Err(FixtureError::NoDebates);
    }
    let mut g = Gen::new(spec);
    g.day();
    let truth = DailyTable {
        date: g.date,
        rows: g.finish_rows(),
    };
    Ok(Fixture {
        spec: spec.clone(),
        date: g.date,
        xml: g.xml.0,
        truth,
        divisions: g.divisions,
        topics: g.topics,
    })
}

const WORDS: &[&str] = &[
    "the", "bill", "government", "budget", "people", "community", "policy", "reform", "funding",
    "electorate", "families", "workers", "program", "investment", "schools", "hospitals", "roads",
    "region", "future", "plan", "jobs", "economy", "support", "measure", "amendment", "committee",
    "report", "record", "local", "national", "important", "simple", "serious", "clear", "fair",
    "strong", "new", "every", "this", "that", "our", "their", "will", "must", "should", "has",
    "delivers", "protects", "ignores", "builds", "cuts", "restores", "funds", "reviews", "affects",
    "across", "for", "with", "under", "after", "before", "through", "and", "but", "because",
    "water", "energy", "health", "housing", "farmers", "small", "business", "tax", "trade",
];

const TOPICS: &[&str] = &[
    "BILLS", "MINISTERIAL STATEMENTS", "COMMITTEES", "PETITIONS", "MATTERS OF PUBLIC IMPORTANCE",
    "PRIVATE MEMBERS' BUSINESS", "CONSTITUENCY STATEMENTS", "ADJOURNMENT",
];

const SUBTOPICS: &[&str] = &[
    "Second Reading", "Consideration in Detail", "Report", "Economy", "Health", "Infrastructure",
    "Education", "Water Policy", "Trade", "Energy Prices",
];

const PREAMBLES: &[&str] = &["Second Reading", "Consideration in Detail", "Cognate bills"];
const STAGES: &[&str] = &["Question agreed to.", "Bill read a second time.", "Debate adjourned."];
const DIV_RESULTS: &[&str] = &["Question agreed to.", "Question negatived."];
const GENERAL_INTERJECTING: &[&str] = &["Opposition members", "Honourable members", "Government members"];
const GENERAL_COLON: &[&str] = &["An opposition member", "An honourable member", "A government member"];
const TIME_EXPIRED: &str = "(Time expired)";

#[derive(Debug, Clone, PartialEq)]
enum Who {
    Business,
    Stage,
    Member(usize),
    Presiding { surface: String, holder: Option<usize> },
    General(String),
}

#[derive(Debug, Clone)]
struct GtRow {
    who: Who,
    opening: bool,
    speech: Option<u32>,
    page: Option<String>,
    time: Option<String>,
    body: String,
    venue: Venue,
    qa: QaSource,
    in_writing: bool,
    in_gov: bool,
    first_speech: bool,
}

#[derive(Debug, Clone, Default)]
struct Talker {
    time: Option<String>,
    page: Option<String>,
    name: String,
    display: String,
    name_id: String,
    electorate: Option<String>,
    party: Option<String>,
    role: Option<String>,
    in_gov: bool,
    first_speech: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chair {
    Speaker,
    DeputyNamed,
    DeputyBare,
}

impl Chair {
    fn surface(self) -> String {
        match self {
            Chair::Speaker => "The SPEAKER".into(),
            Chair::DeputyNamed => format!("The DEPUTY SPEAKER ({} {})", ROSTER[DEPUTY].title, ROSTER[DEPUTY].surname),
            Chair::DeputyBare => "The DEPUTY SPEAKER".into(),
        }
    }

    fn key(self) -> &'static str {
        match self {
            Chair::Speaker => "the speaker",
            _ => "the deputy speaker",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Turn {
    Opening,
    Continuation,
    Member(usize),
    Chair(Chair),
    General,
}

/// One statement inside a speech as the generator plans it.
#[derive(Debug, Clone)]
struct Frag {
    turn: Turn,
    /// Name as written ahead of the statement; empty for the opening.
    surface: String,
    interjecting: bool,
    paras: Vec<String>,
    skeleton: bool,
    talker: Option<Talker>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Extras {
    stage: Option<&'static str>,
    time_expired: bool,
    qa_phrase: bool,
    followed_by_division: bool,
}

struct Xml(String);

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

impl Xml {
    fn open(&mut self, tag: &str) {
        self.0.push('<');
        self.0.push_str(tag);
        self.0.push('>');
    }

    fn open_with(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.0.push('<');
        self.0.push_str(tag);
        for (k, v) in attrs {
            self.0.push_str(&format!(" {k}=\"{}\"", esc(v)));
        }
        self.0.push('>');
    }

    fn close(&mut self, tag: &str) {
        self.0.push_str("</");
        self.0.push_str(tag);
        self.0.push_str(">\n");
    }

    fn leaf(&mut self, tag: &str, text: &str) {
        self.open(tag);
        self.text(text);
        self.0.push_str("</");
        self.0.push_str(tag);
        self.0.push('>');
    }

    fn leaf_with(&mut self, tag: &str, attrs: &[(&str, &str)], text: &str) {
        self.open_with(tag, attrs);
        self.text(text);
        self.0.push_str("</");
        self.0.push_str(tag);
        self.0.push('>');
    }

    fn text(&mut self, t: &str) {
        self.0.push_str(&esc(t));
    }
}

struct Gen {
    rng: ChaCha8Rng,
    era: SchemaEra,
    spec: FixtureSpec,
    date: NaiveDate,
    xml: Xml,
    rows: Vec<GtRow>,
    speech: u32,
    minutes: u32,
    page: u32,
    attendees: BTreeSet<usize>,
    used: BTreeSet<String>,
    topics: Vec<DebateTopic>,
    divisions: Vec<DivisionRecord>,
    venue: Venue,
    qa: QaSource,
    divisions_left: u32,
    fig_pending: bool,
    had_time_expired: bool,
}

fn pick_date(rng: &mut ChaCha8Rng, era: SchemaEra) -> NaiveDate {
    let (from, to) = match era {
        SchemaEra::LegacyEarly => (ymd(1998, 3, 2), ymd(1999, 12, 9)),
        SchemaEra::LegacyInline => (ymd(2000, 2, 15), ymd(2011, 3, 24)),
        SchemaEra::ModernMainComm => (ymd(2011, 5, 10), ymd(2012, 6, 28)),
        SchemaEra::ModernFedChamb => (ymd(2012, 8, 14), ymd(2022, 9, 8)),
    };
    let span = (to - from).num_days();
    let mut d = from + Duration::days(rng.gen_range(0..=span));
    // sittings run Monday to Thursday
    while d.weekday().number_from_monday() > 4 {
        d = if d + Duration::days(3) <= to { d + Duration::days(3) } else { d - Duration::days(3) };
    }
    d
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

fn member_talker(m: &Member) -> Talker {
    Talker {
        name: m.full_name(),
        display: m.display(),
        name_id: m.name_id.into(),
        electorate: Some(m.electorate.into()),
        party: Some(m.party.into()),
        role: m.role.map(Into::into),
        in_gov: m.in_gov(),
        ..Default::default()
    }
}

impl Gen {
    fn new(spec: &FixtureSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let date = pick_date(&mut rng, spec.era);
        let legacy = spec.era.is_legacy();
        Gen {
            rng,
            era: spec.era,
            spec: spec.clone(),
            date,
            xml: Xml(String::new()),
            rows: Vec::new(),
            speech: 0,
            minutes: if legacy { 9 * 60 + 30 } else { 9 * 60 },
            page: if legacy { 10261 } else { 1 },
            attendees: BTreeSet::new(),
            used: BTreeSet::new(),
            topics: Vec::new(),
            divisions: Vec::new(),
            venue: Venue::Chamber,
            qa: QaSource::None,
            divisions_left: if spec.include_divisions { 2 } else { 0 },
            fig_pending: legacy,
            had_time_expired: false,
        }
    }

    fn legacy(&self) -> bool {
        self.era.is_legacy()
    }

    fn tick(&mut self) -> String {
        self.minutes += self.rng.gen_range(1..=4);
        let m = self.minutes.min(23 * 60 + 59);
        format!("{:02}:{:02}:00", m / 60, m % 60)
    }

    fn page_no(&mut self) -> String {
        if self.rng.gen_bool(0.2) {
            self.page += 1;
        }
        self.page.to_string()
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn sentence(&mut self) -> String {
        let n = self.rng.gen_range(6..=13);
        let mut words: Vec<&str> = (0..n).map(|_| *WORDS.choose(&mut self.rng).unwrap()).collect();
        let first = words[0];
        let mut s = String::new();
        let mut cs = first.chars();
        if let Some(c) = cs.next() {
            s.extend(c.to_uppercase());
            s.push_str(cs.as_str());
        }
        words.remove(0);
        for w in words {
            s.push(' ');
            s.push_str(w);
        }
        s.push('.');
        s
    }

    /// Written name of someone already on the day, for mentions in prose.
    fn mention(&mut self) -> Option<String> {
        let people: Vec<usize> = self.attendees.iter().copied().collect();
        let p = *people.choose(&mut self.rng)?;
        let m = &ROSTER[p];
        Some(format!("I note that {} {} raised this last week.", m.title, m.surname))
    }

    fn para(&mut self) -> String {
        loop {
            let n = self.rng.gen_range(1..=3);
            let mut parts: Vec<String> = (0..n).map(|_| self.sentence()).collect();
            if self.chance(0.15) {
                if let Some(m) = self.mention() {
                    parts.insert(self.rng.gen_range(0..=parts.len()), m);
                }
            }
            if self.chance(0.1) {
                let mut cs = parts[0].chars();
                let first: String = cs.next().into_iter().flat_map(char::to_lowercase).collect();
                parts[0] = format!("Mr Speaker, {first}{}", cs.as_str());
            }
            let p = parts.join(" ");
            if self.used.insert(p.clone()) {
                return p;
            }
        }
    }

    fn short(&mut self) -> String {
        loop {
            let p = self.sentence();
            if self.used.insert(p.clone()) {
                return p;
            }
        }
    }

    fn written_forms(&mut self, p: usize) -> String {
        let m = &ROSTER[p];
        let forms = [
            m.display(),
            format!("{} {}", m.title, m.surname),
            format!("{} {} {}", m.title, m.first_names[0], m.surname),
            format!("{} {}. {}", m.title, m.first_names[0].chars().next().unwrap(), m.surname),
        ];
        forms.choose(&mut self.rng).unwrap().clone()
    }

    fn other_speaker(&mut self, not: usize) -> usize {
        let pool: Vec<usize> = speakers().into_iter().filter(|&i| i != not).collect();
        *pool.choose(&mut self.rng).unwrap()
    }

    fn chair_for_venue(&mut self) -> Chair {
        let roll: f64 = self.rng.gen();
        match self.venue {
            Venue::Chamber if roll < 0.8 => Chair::Speaker,
            Venue::Chamber => Chair::DeputyNamed,
            _ if roll < 0.7 => Chair::DeputyNamed,
            _ => Chair::DeputyBare,
        }
    }

    fn chair_talker(&mut self, chair: Chair) -> Talker {
        let time = Some(self.tick());
        let page = Some(self.page_no());
        if self.legacy() && chair != Chair::Speaker {
            let mut t = member_talker(&ROSTER[DEPUTY]);
            t.display = "The DEPUTY SPEAKER".into();
            t.time = time;
            t.page = page;
            return t;
        }
        let (name, display) = match chair {
            Chair::Speaker => ("SPEAKER, The", "The SPEAKER"),
            _ => ("DEPUTY SPEAKER, The", "The DEPUTY SPEAKER"),
        };
        Talker {
            time,
            page,
            name: name.into(),
            display: display.into(),
            name_id: crate::segment::CHAIR_NAME_ID.into(),
            ..Default::default()
        }
    }

    fn talker_xml(&mut self, t: &Talker) {
        self.xml.open("talker");
        let legacy = self.legacy();
        if !legacy {
            if let Some(p) = &t.page {
                self.xml.leaf("page.no", p);
            }
        }
        if let Some(ts) = &t.time {
            self.xml.leaf("time.stamp", ts);
        }
        if legacy {
            if let Some(p) = &t.page {
                self.xml.leaf("page.no", p);
            }
        }
        self.xml.leaf_with("name", &[("role", "metadata")], &t.name);
        self.xml.leaf_with("name", &[("role", "display")], &t.display);
        self.xml.leaf("name.id", &t.name_id);
        if let Some(e) = &t.electorate {
            self.xml.leaf("electorate", e);
        }
        if let Some(p) = &t.party {
            self.xml.leaf("party", p);
        }
        if let Some(r) = &t.role {
            self.xml.leaf("role", r);
        }
        self.xml.leaf("in.gov", if t.in_gov { "1" } else { "0" });
        self.xml.leaf("first.speech", if t.first_speech { "1" } else { "0" });
        self.xml.close("talker");
    }

    fn note_attendee(&mut self, t: &Talker) {
        if t.name_id == crate::segment::CHAIR_NAME_ID || t.display.starts_with("The ") {
            return;
        }
        if let Some(i) = ROSTER.iter().position(|m| m.name_id == t.name_id) {
            self.attendees.insert(i);
        }
    }

    // ---- day layout ----

    fn day(&mut self) {
        let date = self.date.format("%Y-%m-%d").to_string();
        self.xml.0.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        self.xml.open_with("hansard", &[("version", "2.1")]);
        self.xml.open("session.header");
        self.xml.leaf("date", &date);
        let parl = self.rng.gen_range(38..=47).to_string();
        self.xml.leaf("parliament.no", &parl);
        self.xml.leaf("session.no", "1");
        self.xml.leaf("period.no", "1");
        self.xml.leaf("chamber", "REPS");
        let p = self.page.to_string();
        self.xml.leaf("page.no", &p);
        self.xml.leaf("proof", "0");
        self.xml.close("session.header");

        self.venue = Venue::Chamber;
        self.xml.open("chamber.xscript");
        self.business_start("The SPEAKER took the chair at 9.30 am and read prayers.");
        let qa_at = (self.spec.n_debates >= 2).then_some(1);
        for d in 0..self.spec.n_debates {
            if Some(d) == qa_at {
                self.question_time();
            } else {
                self.debate();
            }
        }
        self.xml.close("chamber.xscript");

        if self.spec.include_fedchamb {
            self.venue = Venue::FederationChamber;
            let tag = self.era.second_venue_tag();
            self.xml.open(tag);
            let m = &ROSTER[DEPUTY];
            let opening = format!(
                "The DEPUTY SPEAKER ({} {}) took the chair at 4 pm.",
                m.title, m.surname
            );
            self.business_start(&opening);
            let n = self.rng.gen_range(1..=2);
            for _ in 0..n {
                self.debate();
            }
            self.xml.close(tag);
            self.venue = Venue::Chamber;
        }
        self.in_writing();
        self.xml.close("hansard");
    }

    fn business_start(&mut self, text: &str) {
        let day = self.date.format("%A, %-d %B %Y").to_string();
        self.xml.open("business.start");
        self.xml.leaf("day.start", &day);
        self.xml.open("para");
        self.xml.text(text);
        self.xml.close("para");
        self.xml.close("business.start");
        self.rows.push(GtRow {
            who: Who::Business,
            opening: false,
            speech: None,
            page: None,
            time: None,
            body: format!("{day} {text}"),
            venue: self.venue,
            qa: QaSource::None,
            in_writing: false,
            in_gov: false,
            first_speech: false,
        });
    }

    fn info(&mut self, tag: &str, title: &str) {
        let page = self.page_no();
        self.xml.open(tag);
        self.xml.leaf("title", title);
        self.xml.leaf("page.no", &page);
        if self.chance(0.3) {
            self.xml.leaf("page.no", &page);
        }
        self.xml.close(tag);
        let title = title.to_string();
        self.topics.push(DebateTopic {
            date: self.date,
            item_index: self.topics.len() as u32 + 1,
            title,
            page_no: Some(page),
        });
    }

    fn debate(&mut self) {
        self.xml.open("debate");
        let title = *TOPICS.choose(&mut self.rng).unwrap();
        self.info("debateinfo", title);
        if self.chance(0.5) {
            let pre = *PREAMBLES.choose(&mut self.rng).unwrap();
            self.xml.open("debate.text");
            self.xml.leaf("para", pre);
            self.xml.close("debate.text");
            if self.legacy() {
                self.rows.push(GtRow {
                    who: Who::Stage,
                    opening: false,
                    speech: None,
                    page: None,
                    time: None,
                    body: pre.into(),
                    venue: self.venue,
                    qa: QaSource::None,
                    in_writing: false,
                    in_gov: false,
                    first_speech: false,
                });
            }
        }
        if self.chance(0.5) {
            self.xml.open("subdebate.1");
            let sub = *SUBTOPICS.choose(&mut self.rng).unwrap();
            self.info("subdebateinfo", sub);
            self.speeches();
            if self.chance(0.3) {
                self.xml.open("subdebate.2");
                self.xml.open("subdebateinfo");
                self.xml.leaf("title", "Amendments");
                self.xml.close("subdebateinfo");
                self.speeches();
                self.xml.close("subdebate.2");
            }
            self.xml.close("subdebate.1");
        } else {
            self.speeches();
        }
        self.xml.close("debate");
    }

    fn speeches(&mut self) {
        let n = self.rng.gen_range(1..=3);
        for _ in 0..n {
            let division = self.venue == Venue::Chamber && self.divisions_left > 0 && self.chance(0.4);
            let mut extras = Extras {
                followed_by_division: division,
                ..Default::default()
            };
            if !division {
                if self.chance(0.35) {
                    extras.stage = Some(*STAGES.choose(&mut self.rng).unwrap());
                }
                extras.time_expired = self.chance(0.3) || !self.had_time_expired;
                self.had_time_expired = true;
            }
            let opener = if self.fig_pending {
                self.fig_pending = false;
                FIG_OPENER
            } else {
                *speakers().choose(&mut self.rng).unwrap()
            };
            self.speech("speech", opener, extras);
            if division {
                self.divisions_left -= 1;
                self.division();
            }
        }
    }

    fn question_time(&mut self) {
        self.xml.open("debate");
        self.info("debateinfo", "QUESTIONS WITHOUT NOTICE");
        let n = self.rng.gen_range(1..=2);
        for _ in 0..n {
            self.xml.open("subdebate.1");
            let sub = *SUBTOPICS.choose(&mut self.rng).unwrap();
            self.info("subdebateinfo", sub);
            let asker = self.pick(|m| !m.in_gov());
            let minister = self.pick(Member::in_gov);
            self.qa = QaSource::Question;
            let qa_phrase = self.chance(0.4);
            self.speech(
                "question",
                asker,
                Extras {
                    qa_phrase,
                    ..Default::default()
                },
            );
            self.qa = QaSource::Answer;
            let time_expired = self.chance(0.3);
            self.speech(
                "answer",
                minister,
                Extras {
                    time_expired,
                    ..Default::default()
                },
            );
            self.qa = QaSource::None;
            self.xml.close("subdebate.1");
        }
        self.xml.close("debate");
    }

    fn pick(&mut self, f: impl Fn(&Member) -> bool) -> usize {
        let pool: Vec<usize> = speakers().into_iter().filter(|&i| f(&ROSTER[i])).collect();
        *pool.choose(&mut self.rng).unwrap()
    }

    // ---- speeches ----

    fn plan(&mut self, opener: usize) -> Vec<Turn> {
        let n = self.rng.gen_range(0..=4);
        let mut turns = vec![Turn::Opening];
        for _ in 0..n {
            let last = *turns.last().unwrap();
            let interject = self.rng.gen::<f64>() < self.spec.interjection_rate;
            let t = if interject {
                if last != Turn::General && self.chance(0.3) {
                    Turn::General
                } else {
                    Turn::Member(self.other_speaker(opener))
                }
            } else if matches!(last, Turn::Opening | Turn::Continuation) || self.chance(0.5) {
                Turn::Chair(self.chair_for_venue())
            } else {
                Turn::Continuation
            };
            turns.push(t);
        }
        turns
    }

    fn speech(&mut self, tag: &str, opener: usize, extras: Extras) {
        self.speech += 1;
        let speech_no = self.speech;
        let attendees_before = self.attendees.clone();
        let fig = opener == FIG_OPENER && self.legacy() && self.speech == 1;

        let mut open_t = member_talker(&ROSTER[opener]);
        if fig {
            self.minutes = 9 * 60 + 31;
            open_t.time = Some("09:31:00".into());
            open_t.page = Some("10261".into());
            open_t.in_gov = true;
        } else {
            open_t.time = Some(self.tick());
            open_t.page = Some(self.page_no());
            open_t.first_speech = self.chance(0.05);
        }

        let mut turns = self.plan(opener);
        if extras.followed_by_division && turns.last() == Some(&Turn::General) {
            // keep the division out of a group interjection's text
            turns.push(Turn::Continuation);
        }
        let mut frags: Vec<Frag> = Vec::with_capacity(turns.len());
        for t in &turns {
            frags.push(self.frag(*t, opener));
        }
        // Unmatched written names are only safe when no later statement by
        // the same person has a skeleton entry to steal.
        let legacy = self.legacy();
        let mut later: BTreeSet<String> = BTreeSet::new();
        for f in frags.iter_mut().skip(1).rev() {
            let key = match f.turn {
                Turn::General => {
                    f.skeleton = false;
                    continue;
                }
                Turn::Opening => unreachable!(),
                Turn::Continuation => format!("m{opener}"),
                Turn::Member(p) => format!("m{p}"),
                Turn::Chair(c) => c.key().into(),
            };
            let known = match f.turn {
                Turn::Member(p) => attendees_before.contains(&p),
                _ => true,
            };
            let skip = !legacy && !later.contains(&key) && known && self.rng.gen_bool(0.25);
            f.skeleton = !skip;
            if f.skeleton {
                later.insert(key);
            }
        }
        // Talkers in document order so times increase.
        for f in frags.iter_mut().skip(1) {
            if !f.skeleton {
                continue;
            }
            let t = match f.turn {
                Turn::Continuation => {
                    let mut t = member_talker(&ROSTER[opener]);
                    t.time = Some(self.tick());
                    t.page = Some(self.page_no());
                    t
                }
                Turn::Member(p) => {
                    let mut t = member_talker(&ROSTER[p]);
                    t.in_gov = ROSTER[p].in_gov();
                    t.role = None;
                    if legacy && self.rng.gen_bool(0.3) {
                        t.electorate = None;
                        t.party = None;
                    } else {
                        t.time = Some(self.tick());
                    }
                    t.page = Some(self.page_no());
                    t
                }
                Turn::Chair(c) => self.chair_talker(c),
                _ => unreachable!(),
            };
            f.talker = Some(t);
        }
        if extras.time_expired {
            let last = frags[0].paras.last_mut().unwrap();
            last.push(' ');
            last.push_str(TIME_EXPIRED);
        }
        if extras.qa_phrase {
            let s = format!("The minister {DEFAULT_QA_PHRASE}.");
            frags[0].paras.push(s);
        }
        let last_general = matches!(frags.last().map(|f| f.turn), Some(Turn::General));
        let stage = extras.stage.filter(|_| !last_general);

        self.note_attendee(&open_t);
        for f in &frags {
            if let Some(t) = &f.talker {
                self.note_attendee(t);
            }
        }

        if legacy {
            self.emit_legacy(tag, &open_t, &frags, stage);
        } else {
            self.emit_modern(tag, &open_t, &frags, stage);
        }
        self.truth_rows(speech_no, opener, &open_t, &frags, stage);
    }

    fn frag(&mut self, turn: Turn, opener: usize) -> Frag {
        let mut f = Frag {
            turn,
            surface: String::new(),
            interjecting: false,
            paras: Vec::new(),
            skeleton: true,
            talker: None,
        };
        match turn {
            Turn::Opening => {
                let n = self.rng.gen_range(1..=3);
                f.paras = (0..n).map(|_| self.para()).collect();
            }
            Turn::Continuation => {
                f.surface = self.written_forms(opener);
                f.paras = vec![self.para()];
            }
            Turn::Member(p) => {
                if self.chance(0.35) {
                    let m = &ROSTER[p];
                    f.surface = format!("{} {}", m.title, m.surname);
                    f.interjecting = true;
                } else {
                    f.surface = self.written_forms(p);
                    f.paras = vec![self.short()];
                }
            }
            Turn::Chair(c) => {
                f.surface = c.surface();
                let s = self.short();
                f.paras = vec![format!("Order! {s}")];
            }
            Turn::General => {
                if self.chance(0.6) {
                    f.surface = (*GENERAL_INTERJECTING.choose(&mut self.rng).unwrap()).into();
                    f.interjecting = true;
                } else {
                    f.surface = (*GENERAL_COLON.choose(&mut self.rng).unwrap()).into();
                    f.paras = vec![self.short()];
                }
            }
        }
        f
    }

    fn frag_text(f: &Frag) -> String {
        if f.interjecting {
            format!("{} interjecting—", f.surface)
        } else {
            f.paras.join(" ")
        }
    }

    fn emit_modern(&mut self, tag: &str, open_t: &Talker, frags: &[Frag], stage: Option<&str>) {
        self.xml.open(tag);
        self.xml.open("talk.start");
        self.talker_xml(open_t);
        self.xml.close("talk.start");
        self.xml.open("talk.text");
        self.xml.open("body");
        let m = &ROSTER[match frags[0].turn {
            Turn::Opening => open_index(open_t),
            _ => unreachable!(),
        }];
        for (i, f) in frags.iter().enumerate() {
            if i == 0 {
                let paren = match m.role {
                    Some(r) => format!("({}—{})", m.electorate, r),
                    None => format!("({})", m.electorate),
                };
                let hm = &open_t.time.as_deref().unwrap_or("00:00:00")[..5];
                self.xml.open_with("p", &[("class", "HPS-Normal")]);
                self.xml.open_with("span", &[("class", "HPS-Normal")]);
                self.xml.open_with("a", &[("href", m.name_id), ("type", "MemberSpeech")]);
                self.xml.leaf_with("span", &[("class", "HPS-MemberSpeech")], &open_t.display);
                self.xml.0.push_str("</a> ");
                self.xml.leaf_with("span", &[("class", "HPS-Electorate")], &paren);
                self.xml.text(" ");
                self.xml.leaf_with("span", &[("class", "HPS-Time")], &format!("({hm})"));
                self.xml.text(&format!(": {}", f.paras[0]));
                self.xml.0.push_str("</span>");
                self.xml.close("p");
                for p in &f.paras[1..] {
                    self.xml.leaf("p", p);
                }
                continue;
            }
            self.xml.open_with("p", &[("class", "HPS-Normal")]);
            self.xml.open_with("span", &[("class", "HPS-Normal")]);
            if f.interjecting {
                self.xml.text(&Self::frag_text(f));
            } else {
                let kind = match f.turn {
                    Turn::Member(_) => "MemberInterjecting",
                    Turn::Continuation => "MemberContinuation",
                    Turn::Chair(_) => "OfficeInterjecting",
                    _ => "GeneralIInterjecting",
                };
                self.xml.open_with("a", &[("type", kind)]);
                self.xml.leaf_with("span", &[("class", &format!("HPS-{kind}"))], &format!("{}:", f.surface));
                self.xml.0.push_str("</a>");
                self.xml.text(&format!("  {}", f.paras[0]));
            }
            self.xml.0.push_str("</span>");
            self.xml.close("p");
            for p in f.paras.iter().skip(1) {
                self.xml.leaf("p", p);
            }
        }
        if let Some(s) = stage {
            self.xml.leaf("p", s);
        }
        self.xml.close("body");
        self.xml.close("talk.text");
        for f in frags.iter().skip(1) {
            let Some(t) = &f.talker else { continue };
            let el = if f.turn == Turn::Continuation { "continuation" } else { "interjection" };
            self.xml.open(el);
            self.xml.open("talk.start");
            self.talker_xml(t);
            self.xml.close("talk.start");
            self.xml.open("talk.text");
            self.xml.open("body");
            self.xml.leaf("p", &Self::frag_text(f));
            self.xml.close("body");
            self.xml.close("talk.text");
            self.xml.close(el);
        }
        self.xml.close(tag);
    }

    fn emit_legacy(&mut self, tag: &str, open_t: &Talker, frags: &[Frag], stage: Option<&str>) {
        self.xml.open(tag);
        self.xml.open("talk.start");
        self.talker_xml(open_t);
        self.xml.leaf("para", &format!("—{}", frags[0].paras[0]));
        self.xml.close("talk.start");
        for p in &frags[0].paras[1..] {
            self.xml.leaf("para", p);
        }
        for f in &frags[1..] {
            match (&f.talker, f.turn) {
                (_, Turn::General) => {
                    if f.interjecting {
                        self.xml.leaf("para", &Self::frag_text(f));
                    } else {
                        self.xml.leaf("para", &format!("{}: {}", f.surface, f.paras[0]));
                    }
                }
                (Some(t), turn) => {
                    let el = if turn == Turn::Continuation { "continuation" } else { "interjection" };
                    self.xml.open(el);
                    self.xml.open("talk.start");
                    self.talker_xml(t);
                    self.xml.leaf("para", &format!("—{}", Self::frag_text(f)));
                    self.xml.close("talk.start");
                    self.xml.close(el);
                }
                (None, _) => unreachable!("legacy statements always carry a talker"),
            }
        }
        if let Some(s) = stage {
            self.xml.leaf("para", s);
        }
        self.xml.close(tag);
    }

    fn truth_rows(&mut self, speech_no: u32, opener: usize, open_t: &Talker, frags: &[Frag], stage: Option<&str>) {
        let legacy = self.legacy();
        let qa = self.qa;
        let venue = self.venue;
        let mut page = open_t.page.clone();
        for (i, f) in frags.iter().enumerate() {
            let who = match f.turn {
                Turn::Opening | Turn::Continuation => Who::Member(opener),
                Turn::Member(p) => Who::Member(p),
                Turn::General => Who::General(f.surface.clone()),
                Turn::Chair(c) => {
                    let holder = if legacy {
                        (c != Chair::Speaker).then_some(DEPUTY)
                    } else {
                        (c == Chair::DeputyNamed).then_some(DEPUTY)
                    };
                    let surface = if legacy {
                        f.talker.as_ref().map(|t| t.display.clone()).unwrap_or_default()
                    } else {
                        strip_time_paren(&f.surface)
                    };
                    Who::Presiding { surface, holder }
                }
            };
            let talker = if i == 0 { Some(open_t) } else { f.talker.as_ref() };
            if let Some(p) = talker.and_then(|t| t.page.clone()) {
                if legacy {
                    page = Some(p);
                }
            }
            let row_page = if legacy {
                page.clone()
            } else {
                talker.and_then(|t| t.page.clone()).or_else(|| open_t.page.clone())
            };
            self.rows.push(GtRow {
                who,
                opening: i == 0,
                speech: Some(speech_no),
                page: row_page,
                time: talker.and_then(|t| t.time.clone()),
                body: Self::frag_text(f),
                venue,
                qa,
                in_writing: false,
                in_gov: talker.is_some_and(|t| t.in_gov),
                first_speech: talker.is_some_and(|t| t.first_speech),
            });
        }
        if let Some(s) = stage {
            let last = self.rows.last().unwrap().clone();
            self.rows.push(GtRow {
                who: Who::Stage,
                opening: false,
                time: None,
                body: s.into(),
                in_gov: false,
                first_speech: false,
                ..last
            });
        }
    }

    // ---- divisions ----

    fn division(&mut self) {
        let time = self.tick();
        let hm = &time[..5];
        let mut pool = speakers();
        pool.shuffle(&mut self.rng);
        let na = self.rng.gen_range(2..=5);
        let nn = self.rng.gen_range(2..=5);
        let np = if self.chance(0.5) { self.rng.gen_range(1..=2) } else { 0 };
        let mut it = pool.into_iter().map(|i| {
            let m = &ROSTER[i];
            format!("{}, {}.", m.surname, m.first_names[0].chars().next().unwrap())
        });
        let ayes: Vec<String> = it.by_ref().take(na).collect();
        let noes: Vec<String> = it.by_ref().take(nn).collect();
        let pairs: Vec<String> = it.by_ref().take(np).collect();
        let result = *DIV_RESULTS.choose(&mut self.rng).unwrap();
        let header = format!("The House divided. [{hm}]");
        let mut pieces: Vec<String> = vec![time.clone(), header.clone()];

        self.xml.open("division");
        self.xml.open("division.header");
        self.xml.leaf("time.stamp", &time);
        self.xml.leaf("para", &header);
        self.xml.close("division.header");
        self.xml.open("division.data");
        for (tag, title, names) in [("ayes", "AYES", &ayes), ("noes", "NOES", &noes), ("pairs", "PAIRS", &pairs)] {
            if names.is_empty() {
                continue;
            }
            let n = names.len().to_string();
            self.xml.open(tag);
            self.xml.leaf("num.votes", &n);
            self.xml.leaf("title", title);
            self.xml.open("names");
            for name in names {
                self.xml.leaf("name", name);
            }
            self.xml.close("names");
            self.xml.close(tag);
            pieces.push(n);
            pieces.push(title.into());
            pieces.extend(names.iter().cloned());
        }
        self.xml.close("division.data");
        self.xml.open("division.result");
        self.xml.leaf("para", result);
        self.xml.close("division.result");
        self.xml.close("division");

        self.divisions.push(DivisionRecord {
            date: self.date,
            div_num: self.divisions.len() as u32 + 1,
            time_stamp: Some(time),
            num_votes_ayes: ayes.len() as u32,
            num_votes_noes: noes.len() as u32,
            num_votes_pairs: pairs.len() as u32,
            names_ayes: ayes,
            names_noes: noes,
            names_pairs: pairs,
            result: result.into(),
        });
        if self.legacy() {
            // The division's text runs on from the statement before it and
            // its result is then peeled off as a stage direction.
            let last = self.rows.last_mut().unwrap();
            last.body.push(' ');
            last.body.push_str(&pieces.join(" "));
            let last = last.clone();
            self.rows.push(GtRow {
                who: Who::Stage,
                opening: false,
                time: None,
                body: result.into(),
                in_gov: false,
                first_speech: false,
                ..last
            });
        }
    }

    // ---- questions in writing ----

    fn in_writing(&mut self) {
        self.xml.open("answers.to.questions");
        self.xml.open("debate");
        self.info("debateinfo", "QUESTIONS IN WRITING");
        let n = self.rng.gen_range(1..=2);
        for _ in 0..n {
            self.xml.open("subdebate.1");
            let sub = *SUBTOPICS.choose(&mut self.rng).unwrap();
            self.info("subdebateinfo", sub);
            for (tag, qa) in [("question", QaSource::Question), ("answer", QaSource::Answer)] {
                let who = if qa == QaSource::Question {
                    self.pick(|m| !m.in_gov())
                } else {
                    self.pick(Member::in_gov)
                };
                let mut t = member_talker(&ROSTER[who]);
                t.page = Some(self.page_no());
                let mut paras = vec![self.para()];
                if qa == QaSource::Answer && self.chance(0.5) {
                    paras.insert(0, format!("The Minister {DEFAULT_QA_PHRASE}."));
                }
                if self.chance(0.5) {
                    paras.push(self.para());
                }
                self.speech += 1;
                self.xml.open(tag);
                self.xml.open("talk.start");
                self.talker_xml(&t);
                self.xml.leaf("para", &paras[0]);
                self.xml.close("talk.start");
                for p in &paras[1..] {
                    self.xml.leaf("para", p);
                }
                self.xml.close(tag);
                self.rows.push(GtRow {
                    who: Who::Member(who),
                    opening: true,
                    speech: Some(self.speech),
                    page: t.page.clone(),
                    time: None,
                    body: paras.join(" "),
                    venue: Venue::Chamber,
                    qa,
                    in_writing: true,
                    in_gov: t.in_gov,
                    first_speech: false,
                });
            }
            self.xml.close("subdebate.1");
        }
        self.xml.close("debate");
        self.xml.close("answers.to.questions");
    }

    // ---- expected table ----

    fn finish_rows(&mut self) -> Vec<DebateRecord> {
        let rows = core::mem::take(&mut self.rows);
        let mut speech: Vec<u32> = vec![0; rows.len()];
        let mut next = 0;
        for (i, r) in rows.iter().enumerate().rev() {
            if let Some(s) = r.speech {
                next = s;
            }
            speech[i] = r.speech.unwrap_or(next);
        }
        let mut prev = 1;
        for s in speech.iter_mut() {
            if *s == 0 {
                *s = prev;
            }
            prev = *s;
        }
        let opener_of = |no: u32| {
            rows.iter()
                .zip(&speech)
                .find(|(r, &s)| s == no && r.opening)
                .map(|(r, _)| r.who.clone())
        };
        let pf = fixture_partyfacts();
        let phrase = straighten_quotes(DEFAULT_QA_PHRASE).into_owned();
        rows.iter()
            .zip(&speech)
            .enumerate()
            .map(|(i, (r, &no))| {
                let person = match &r.who {
                    Who::Member(p) => Some(*p),
                    Who::Presiding { holder, .. } => *holder,
                    _ => None,
                };
                let name = match (&r.who, person) {
                    (Who::Business, _) => crate::segment::BUSINESS_START.into(),
                    (Who::Stage, _) => crate::segment::STAGE_DIRECTION.into(),
                    (_, Some(p)) => ROSTER[p].full_name(),
                    (Who::Presiding { surface, .. }, None) => surface.clone(),
                    (Who::General(s), _) => s.clone(),
                    (Who::Member(_), None) => unreachable!(),
                };
                let non_speech = matches!(r.who, Who::Business | Who::Stage);
                let interject = match &r.who {
                    Who::Member(p) => opener_of(no) != Some(Who::Member(*p)),
                    Who::General(_) => true,
                    _ => false,
                };
                let mut question = !non_speech && r.qa == QaSource::Question;
                let mut answer = !non_speech && r.qa == QaSource::Answer;
                if question && straighten_quotes(&r.body).contains(phrase.as_str()) {
                    question = false;
                    answer = true;
                }
                let m = person.map(|p| &ROSTER[p]);
                DebateRecord {
                    name,
                    order: i as i64 + 1,
                    speech_no: no as i64,
                    page_no: r.page.clone(),
                    time_stamp: r.time.clone(),
                    name_id: m.map(|m| m.name_id.into()),
                    electorate: m.map(|m| m.electorate.into()),
                    party: m.map(|m| m.party.into()),
                    in_gov: r.in_gov as i32,
                    first_speech: r.first_speech as i32,
                    body: r.body.clone(),
                    fedchamb_flag: (r.venue == Venue::FederationChamber) as i32,
                    question: question as i32,
                    answer: answer as i32,
                    q_in_writing: r.in_writing as i32,
                    gender: m.map(|m| m.gender.into()),
                    unique_id: m.map(|m| m.unique_id.into()),
                    interject: interject as i32,
                    div_flag: r.body.contains(crate::divisions::HOUSE_DIVIDED) as i32,
                    partyfacts_id: m.and_then(|m| pf.partyfacts_id(m.party)),
                }
            })
            .collect()
    }
}

fn open_index(t: &Talker) -> usize {
    ROSTER.iter().position(|m| m.name_id == t.name_id).expect("opener is on the roster")
}

/// `The SPEAKER (14:02)` -> `The SPEAKER`; other parentheses stay.
fn strip_time_paren(s: &str) -> String {
    match s.rfind(" (") {
        Some(i) if s[i + 2..].trim_end_matches(')').chars().all(|c| c.is_ascii_digit() || c == ':') => {
            s[..i].to_string()
        }
        _ => s.to_string(),
    }
}
