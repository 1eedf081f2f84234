use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::registry::{PartyFactsMap, PartyFactsRow, Politician, PoliticianRegistry, ServiceInterval};
use crate::text::hansard_upper;

pub(crate) struct Member {
    pub unique_id: &'static str,
    pub surname: &'static str,
    pub first_names: &'static [&'static str],
    pub title: &'static str,
    pub gender: &'static str,
    pub name_id: &'static str,
    pub electorate: &'static str,
    pub party: &'static str,
    pub role: Option<&'static str>,
    pub born: (i32, u32, u32),
    /// Never attends; shares a surname with a speaker.
    pub decoy: bool,
}

const fn m(
    unique_id: &'static str,
    surname: &'static str,
    first_names: &'static [&'static str],
    title: &'static str,
    gender: &'static str,
    name_id: &'static str,
    electorate: &'static str,
    party: &'static str,
    born: (i32, u32, u32),
) -> Member {
    Member {
        unique_id,
        surname,
        first_names,
        title,
        gender,
        name_id,
        electorate,
        party,
        role: None,
        born,
        decoy: false,
    }
}

pub(crate) const ROSTER: &[Member] = &[
    Member {
        role: Some("Treasurer"),
        ..m("Costello1957", "Costello", &["Peter", "Howard"], "Mr", "male", "CT4", "Higgins", "LP", (1957, 8, 14))
    },
    m("VanManen1958", "Van Manen", &["Bert"], "Mr", "male", "HWQ", "Forde", "LP", (1958, 9, 23)),
    m("Albanese1963", "Albanese", &["Anthony", "Norman"], "Mr", "male", "R36", "Grayndler", "ALP", (1963, 3, 2)),
    m("Vamvakinou1959", "Vamvakinou", &["Maria"], "Ms", "female", "HWK", "Calwell", "ALP", (1959, 11, 1)),
    m("McCormack1964", "McCormack", &["Michael", "Francis"], "Mr", "male", "0J4", "Riverina", "NATS", (1964, 8, 16)),
    m("Ashworth-Lee1968", "Ashworth-Lee", &["Kate"], "Ms", "female", "AL7", "Moreton", "ALP", (1968, 2, 9)),
    m("ODowd1950", "O'Dowd", &["Kenneth"], "Mr", "male", "0K8", "Flynn", "LP", (1950, 6, 30)),
    m("Smith1967", "Smith", &["Tony"], "Mr", "male", "E0J", "Casey", "LP", (1967, 6, 13)),
    Member {
        decoy: true,
        ..m("Smith1945", "Smith", &["Warren"], "Mr", "male", "ZW2", "Lyons", "ALP", (1945, 1, 2))
    },
    m("Katter1945", "Katter", &["Bob"], "Mr", "male", "HX4", "Kennedy", "KAP", (1945, 5, 22)),
    m("Bandt1972", "Bandt", &["Adam"], "Mr", "male", "M3C", "Melbourne", "AG", (1972, 3, 11)),
    m("Wilkie1961", "Wilkie", &["Andrew"], "Mr", "male", "M3H", "Denison", "IND", (1961, 11, 8)),
    m("Hunt1965", "Hunt", &["Gregory", "Andrew"], "Mr", "male", "00AMV", "Flinders", "LP", (1965, 11, 18)),
    m("Gillard1961", "Gillard", &["Julia", "Eileen"], "Ms", "female", "83L", "Lalor", "ALP", (1961, 9, 29)),
    m("Abbott1957", "Abbott", &["Anthony", "John"], "Mr", "male", "EZ5", "Warringah", "LP", (1957, 11, 4)),
    m("Bishop1956", "Bishop", &["Julie", "Isabel"], "Ms", "female", "83P", "Curtin", "LP", (1956, 7, 17)),
];

pub(crate) const SERVICE_FROM: (i32, u32, u32) = (1996, 3, 2);

/// Index of the member whose deputy-chair form is used in text.
pub(crate) const DEPUTY: usize = 3;
pub(crate) const FIG_OPENER: usize = 0;

fn ymd((y, mo, d): (i32, u32, u32)) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, mo, d).expect("roster date")
}

impl Member {
    pub fn full_name(&self) -> String {
        alloc::format!("{}, {}, MP", self.surname, self.first_names[0])
    }

    /// `Mr ALBANESE`, `Mr TONY SMITH` where the surname is shared.
    pub fn display(&self) -> String {
        if self.surname == "Smith" {
            alloc::format!("{} {} {}", self.title, hansard_upper(self.first_names[0]), hansard_upper(self.surname))
        } else {
            alloc::format!("{} {}", self.title, hansard_upper(self.surname))
        }
    }

    pub fn in_gov(&self) -> bool {
        matches!(self.party, "LP" | "NATS")
    }

    pub fn politician(&self) -> Politician {
        let intervals = if self.decoy {
            vec![ServiceInterval {
                electorate: self.electorate.to_string(),
                party: self.party.to_string(),
                from: ymd((1983, 3, 5)),
                to: Some(ymd((1995, 12, 31))),
            }]
        } else {
            vec![ServiceInterval {
                electorate: self.electorate.to_string(),
                party: self.party.to_string(),
                from: ymd(SERVICE_FROM),
                to: None,
            }]
        };
        Politician {
            unique_id: self.unique_id.to_string(),
            surname: self.surname.to_string(),
            first_names: self.first_names.iter().map(|s| s.to_string()).collect(),
            gender: Some(self.gender.to_string()),
            name_id: Some(self.name_id.to_string()),
            intervals,
            born: Some(ymd(self.born)),
            died: None,
        }
    }
}

/// Registry covering every person the fixtures can mention.
pub fn fixture_registry() -> PoliticianRegistry {
    PoliticianRegistry::new(ROSTER.iter().map(Member::politician).collect()).expect("fixture roster is consistent")
}

/// Party map for the fixture roster. The ids are placeholders.
pub fn fixture_partyfacts() -> PartyFactsMap {
    let row = |id: Option<i64>, h: &str, a: &str, n: &str| PartyFactsRow {
        partyfacts_id: id,
        party_abb_hansard: h.to_string(),
        party_abb_auspol: a.to_string(),
        party_name_auspol: n.to_string(),
    };
    PartyFactsMap::new(vec![
        row(Some(101), "LP", "LIB", "Liberal Party of Australia"),
        row(Some(102), "ALP", "ALP", "Australian Labor Party"),
        row(Some(103), "NATS", "NPA", "National Party of Australia"),
        row(Some(104), "AG", "GRN", "Australian Greens"),
        row(Some(105), "KAP", "KAP", "Katter's Australian Party"),
        row(None, "IND", "IND", "Independent"),
    ])
    .expect("fixture party map is consistent")
}

pub(crate) fn speakers() -> Vec<usize> {
    (0..ROSTER.len()).filter(|&i| !ROSTER[i].decoy).collect()
}
