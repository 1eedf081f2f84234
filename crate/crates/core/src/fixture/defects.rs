//! Single planted defects, each aimed at one validation test.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::{Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Fixture;
use crate::error::DayError;
use crate::pipeline::{process_day, DayConfig};
use crate::registry::{PoliticianRegistry, RegistryError};
use crate::table::DailyTable;
use crate::validate::TestId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DefectClass {
    WrongHeaderDate,
    AdjacentDuplicate,
    SplitMissTimeExpired,
    MalformedTimestamp,
    DualParty,
    CorruptedNameId,
    DeceasedSpeaker,
    NonServingSpeaker,
}

impl DefectClass {
    pub const ALL: [DefectClass; 8] = [
        DefectClass::WrongHeaderDate,
        DefectClass::AdjacentDuplicate,
        DefectClass::SplitMissTimeExpired,
        DefectClass::MalformedTimestamp,
        DefectClass::DualParty,
        DefectClass::CorruptedNameId,
        DefectClass::DeceasedSpeaker,
        DefectClass::NonServingSpeaker,
    ];

    /// The one validation test that should catch this defect.
    pub fn expected_test(self) -> TestId {
        match self {
            DefectClass::WrongHeaderDate => TestId::HeaderDate,
            DefectClass::AdjacentDuplicate => TestId::AdjacentDuplicate,
            DefectClass::SplitMissTimeExpired => TestId::TimeExpiredSuffix,
            DefectClass::MalformedTimestamp => TestId::TimestampFormat,
            DefectClass::DualParty => TestId::SinglePartyElectorate,
            DefectClass::CorruptedNameId => TestId::KnownNameId,
            DefectClass::DeceasedSpeaker => TestId::Alive,
            DefectClass::NonServingSpeaker => TestId::Serving,
        }
    }
}

/// A day with one defect planted, ready for validation.
#[derive(Debug, Clone)]
pub struct DefectCase {
    pub class: DefectClass,
    pub table: DailyTable,
    pub header_date: NaiveDate,
    pub registry: PoliticianRegistry,
    /// What was changed, for reports.
    pub detail: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DefectError {
    #[error("fixture has no row suitable for {0:?}")]
    NoTarget(DefectClass),
    #[error(transparent)]
    Day(#[from] DayError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// Parse the fixture, then plant `class` in the day input (header, rows) or
/// in a copy of the registry.
pub fn inject_defect(
    class: DefectClass,
    fixture: &Fixture,
    cfg: &DayConfig,
    seed: u64,
) -> Result<DefectCase, DefectError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let date = fixture.date;
    let no_target = || DefectError::NoTarget(class);

    if class == DefectClass::WrongHeaderDate {
        let shifted = date + Duration::days(1);
        let xml = fixture.xml.replacen(
            &format!("<date>{}</date>", date.format("%Y-%m-%d")),
            &format!("<date>{}</date>", shifted.format("%Y-%m-%d")),
            1,
        );
        let out = process_day(xml.as_bytes(), Some(date), cfg)?;
        return Ok(DefectCase {
            class,
            table: out.table,
            header_date: out.header_date,
            registry: cfg.registry.clone(),
            detail: format!("header date set to {shifted}"),
        });
    }

    let out = process_day(fixture.bytes(), Some(date), cfg)?;
    let mut table = out.table;
    let mut registry = cfg.registry.clone();
    let rows = &mut table.rows;
    let detail = match class {
        DefectClass::WrongHeaderDate => unreachable!(),
        DefectClass::AdjacentDuplicate => {
            let i = (0..rows.len().saturating_sub(1))
                .collect::<Vec<_>>()
                .choose(&mut rng)
                .copied()
                .ok_or_else(no_target)?;
            rows[i + 1].body = rows[i].body.clone();
            format!("row {} repeats row {}", rows[i + 1].order, rows[i].order)
        }
        DefectClass::SplitMissTimeExpired => {
            let cands: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].body.ends_with("(Time expired)")).collect();
            let i = *cands.choose(&mut rng).ok_or_else(no_target)?;
            rows[i].body.push_str(" Honourable members interjecting—");
            format!("row {} runs on past (Time expired)", rows[i].order)
        }
        DefectClass::MalformedTimestamp => {
            let cands: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].time_stamp.is_some()).collect();
            let i = *cands.choose(&mut rng).ok_or_else(no_target)?;
            let bad = ["13:445:00", "NaN:28:00", "09:NaN:00", "25:10:00"].choose(&mut rng).unwrap();
            rows[i].time_stamp = Some(bad.to_string());
            format!("row {} time.stamp set to {bad}", rows[i].order)
        }
        DefectClass::DualParty => {
            let mut people: Vec<&str> = rows.iter().filter_map(|r| r.unique_id.as_deref()).collect();
            people.sort();
            people.dedup();
            let multi: Vec<String> = people
                .into_iter()
                .filter(|u| rows.iter().filter(|r| r.unique_id.as_deref() == Some(u) && r.party.is_some()).count() >= 2)
                .map(ToString::to_string)
                .collect();
            let who = multi.choose(&mut rng).ok_or_else(no_target)?;
            let i = rows.iter().rposition(|r| r.unique_id.as_deref() == Some(who.as_str())).unwrap();
            let new = if rows[i].party.as_deref() == Some("IND") { "ALP" } else { "IND" };
            rows[i].party = Some(new.into());
            format!("{who} recorded as {new} on row {}", rows[i].order)
        }
        DefectClass::CorruptedNameId => {
            let cands: Vec<usize> = (0..rows.len())
                .filter(|&i| rows[i].name_id.as_deref().is_some_and(|n| n.contains('0')))
                .collect();
            let i = *cands.choose(&mut rng).ok_or_else(no_target)?;
            let old = rows[i].name_id.clone().unwrap();
            let new = old.replacen('0', "O", 1);
            rows[i].name_id = Some(new.clone());
            format!("row {} name.id {old} -> {new}", rows[i].order)
        }
        DefectClass::DeceasedSpeaker | DefectClass::NonServingSpeaker => {
            let mut ids: Vec<&str> = rows.iter().filter_map(|r| r.unique_id.as_deref()).collect();
            ids.sort();
            ids.dedup();
            let who = ids.choose(&mut rng).ok_or_else(no_target)?.to_string();
            let mut p = registry.by_unique_id(&who).ok_or_else(no_target)?.clone();
            if class == DefectClass::DeceasedSpeaker {
                let died = date - Duration::days(30);
                if p.born.is_some_and(|b| b > died) {
                    return Err(no_target());
                }
                p.died = Some(died);
                registry = registry.with_replaced(p)?;
                format!("{who} recorded as died {died}")
            } else {
                let end = date - Duration::days(1);
                for iv in &mut p.intervals {
                    if iv.to.is_none_or(|t| t >= date) {
                        if iv.from > end {
                            return Err(no_target());
                        }
                        iv.to = Some(end);
                    }
                }
                registry = registry.with_replaced(p)?;
                format!("{who} service recorded as ending {end}")
            }
        }
    };
    Ok(DefectCase {
        class,
        table,
        header_date: out.header_date,
        registry,
        detail,
    })
}
