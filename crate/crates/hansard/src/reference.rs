//! Politician and party reference files.
//!
//! Politicians: one row per person. A person with several seats or parties
//! over time lists them `;`-separated, position-aligned across `electorate`,
//! `party`, `electorateFrom` and `electorateTo`. `firstNames` is
//! space-separated. Dates are ISO-8601; empty means open or absent.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use hansard_core::registry::{
    PartyFactsMap, PartyFactsRow, Politician, PoliticianRegistry, RegistryError, ServiceInterval,
};
use serde::Serialize;

pub const POLITICIAN_COLUMNS: [&str; 11] = [
    "uniqueID",
    "surname",
    "firstNames",
    "gender",
    "nameID",
    "electorate",
    "party",
    "electorateFrom",
    "electorateTo",
    "born",
    "died",
];

pub const PARTYFACTS_COLUMNS: [&str; 4] = [
    "partyfacts_id",
    "party_abb_hansard",
    "party_abb_auspol",
    "party_name_auspol",
];

#[derive(Debug, thiserror::Error)]
pub enum ReferenceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {detail}")]
    SchemaMismatch { path: PathBuf, detail: String },
    #[error("{path}: uniqueID {id:?} appears more than once")]
    DuplicateUniqueID { path: PathBuf, id: String },
    #[error("{path}: {source}")]
    Registry {
        path: PathBuf,
        #[source]
        source: RegistryError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// 1-based line in the file, header being line 1.
    pub line: u64,
    pub key: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub loaded: usize,
    pub rejected: Vec<Rejection>,
}

impl LoadReport {
    pub fn balanced(&self) -> bool {
        self.loaded + self.rejected.len() == self.rows_read
    }
}

/// Pick the delimiter that splits the header line most.
pub fn sniff_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    [b',', b'\t', b'|']
        .into_iter()
        .max_by_key(|&d| header.bytes().filter(|&b| b == d).count())
        .unwrap_or(b',')
}

fn open_reader<'a>(path: &Path, text: &'a str) -> csv::Reader<&'a [u8]> {
    log::debug!("reading {}", path.display());
    csv::ReaderBuilder::new()
        .delimiter(sniff_delimiter(text))
        .flexible(false)
        .from_reader(text.trim_start_matches('\u{feff}').as_bytes())
}

fn read_text(path: &Path) -> Result<String, ReferenceError> {
    fs::read_to_string(path).map_err(|source| ReferenceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn column_index(
    path: &Path,
    headers: &csv::StringRecord,
    wanted: &[&str],
) -> Result<Vec<usize>, ReferenceError> {
    wanted
        .iter()
        .map(|w| {
            headers
                .iter()
                .position(|h| h.trim() == *w)
                .ok_or_else(|| ReferenceError::SchemaMismatch {
                    path: path.to_path_buf(),
                    detail: format!("missing column {w:?}"),
                })
        })
        .collect()
}

fn date_field(raw: &str, what: &str) -> Result<Option<NaiveDate>, String> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .map(Some)
        .map_err(|_| format!("{what} {raw:?} is not a date"))
}

fn opt(raw: &str) -> Option<String> {
    let t = raw.trim();
    (!t.is_empty()).then(|| t.to_string())
}

fn politician_from(fields: &[&str]) -> Result<Politician, String> {
    let [unique_id, surname, first, gender, name_id, electorate, party, from, to, born, died] =
        fields
    else {
        return Err("wrong field count".into());
    };
    let unique_id = opt(unique_id).ok_or("empty uniqueID")?;
    let surname = opt(surname).ok_or("empty surname")?;
    let split = |s: &str| -> Vec<String> {
        if s.trim().is_empty() {
            Vec::new()
        } else {
            s.split(';').map(|p| p.trim().to_string()).collect()
        }
    };
    let (els, parties, froms, tos) = (split(electorate), split(party), split(from), split(to));
    let n = els.len().max(parties.len()).max(froms.len());
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n {
        let get = |v: &Vec<String>| v.get(i).cloned().unwrap_or_default();
        let from = date_field(&get(&froms), "electorateFrom")?
            .ok_or_else(|| format!("interval {} has no electorateFrom", i + 1))?;
        intervals.push(ServiceInterval {
            electorate: get(&els),
            party: get(&parties),
            from,
            to: date_field(&get(&tos), "electorateTo")?,
        });
    }
    if tos.len() > n {
        return Err("more electorateTo values than intervals".into());
    }
    let p = Politician {
        unique_id,
        surname,
        first_names: first.split_whitespace().map(str::to_string).collect(),
        gender: opt(gender),
        name_id: opt(name_id),
        intervals,
        born: date_field(born, "born")?,
        died: date_field(died, "died")?,
    };
    p.check()?;
    Ok(p)
}

/// Load the politicians file. Rows that cannot be read become rejections;
/// a repeated uniqueID fails the whole load.
pub fn load_politicians(path: &Path) -> Result<(PoliticianRegistry, LoadReport), ReferenceError> {
    let text = read_text(path)?;
    let mut rdr = open_reader(path, &text);
    let csv_err = |source| ReferenceError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let idx = column_index(path, &headers, &POLITICIAN_COLUMNS)?;
    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        report.rows_read += 1;
        let line = rec.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = idx.iter().map(|&i| rec.get(i).unwrap_or("")).collect();
        let key = fields[0].trim().to_string();
        if !key.is_empty() && !seen.insert(key.clone()) {
            return Err(ReferenceError::DuplicateUniqueID {
                path: path.to_path_buf(),
                id: key,
            });
        }
        match politician_from(&fields) {
            Ok(p) => entries.push(p),
            Err(reason) => {
                log::warn!("{}:{line}: rejected {key:?}: {reason}", path.display());
                report.rejected.push(Rejection { line, key, reason });
            }
        }
    }
    report.loaded = entries.len();
    let registry = PoliticianRegistry::new(entries).map_err(|source| ReferenceError::Registry {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((registry, report))
}

/// Load the party map. The header must be exactly the four known columns.
pub fn load_partyfacts(path: &Path) -> Result<(PartyFactsMap, LoadReport), ReferenceError> {
    let text = read_text(path)?;
    let mut rdr = open_reader(path, &text);
    let csv_err = |source| ReferenceError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let mut got: Vec<&str> = headers.iter().map(str::trim).collect();
    got.sort_unstable();
    let mut want = PARTYFACTS_COLUMNS.to_vec();
    want.sort_unstable();
    if got != want {
        return Err(ReferenceError::SchemaMismatch {
            path: path.to_path_buf(),
            detail: format!("expected columns {PARTYFACTS_COLUMNS:?}, found {:?}", headers.iter().collect::<Vec<_>>()),
        });
    }
    let idx = column_index(path, &headers, &PARTYFACTS_COLUMNS)?;
    let mut report = LoadReport::default();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        report.rows_read += 1;
        let line = rec.position().map_or(0, |p| p.line());
        let f: Vec<&str> = idx.iter().map(|&i| rec.get(i).unwrap_or("").trim()).collect();
        let key = f[1].to_string();
        let id = match f[0] {
            "" | "NA" => Ok(None),
            s => s.parse::<i64>().map(Some).map_err(|_| format!("partyfacts_id {s:?} is not an integer")),
        };
        let row = id.and_then(|id| {
            if key.is_empty() {
                return Err("empty party_abb_hansard".to_string());
            }
            Ok(PartyFactsRow {
                partyfacts_id: id,
                party_abb_hansard: key.clone(),
                party_abb_auspol: f[2].to_string(),
                party_name_auspol: f[3].to_string(),
            })
        });
        match row {
            Ok(r) => rows.push(r),
            Err(reason) => report.rejected.push(Rejection { line, key, reason }),
        }
    }
    report.loaded = rows.len();
    let map = PartyFactsMap::new(rows).map_err(|source| ReferenceError::Registry {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((map, report))
}

fn write_csv<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [String; N]>,
) -> Result<(), ReferenceError> {
    let io = |source| ReferenceError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = crate::output::csv_writer(Vec::new());
    let csv_err = |source| ReferenceError::Csv {
        path: path.to_path_buf(),
        source,
    };
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| io(e.into_error()))?;
    crate::output::write_atomic(path, &bytes).map_err(io)
}

pub fn write_politicians(registry: &PoliticianRegistry, path: &Path) -> Result<(), ReferenceError> {
    let d = |d: Option<NaiveDate>| d.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
    let join = |f: &dyn Fn(&ServiceInterval) -> String, p: &Politician| {
        p.intervals.iter().map(f).collect::<Vec<_>>().join(";")
    };
    write_csv(
        path,
        POLITICIAN_COLUMNS,
        registry.entries().iter().map(|p| {
            [
                p.unique_id.clone(),
                p.surname.clone(),
                p.first_names.join(" "),
                p.gender.clone().unwrap_or_default(),
                p.name_id.clone().unwrap_or_default(),
                join(&|i| i.electorate.clone(), p),
                join(&|i| i.party.clone(), p),
                join(&|i| d(Some(i.from)), p),
                join(&|i| d(i.to), p),
                d(p.born),
                d(p.died),
            ]
        }),
    )
}

pub fn write_partyfacts(map: &PartyFactsMap, path: &Path) -> Result<(), ReferenceError> {
    write_csv(
        path,
        PARTYFACTS_COLUMNS,
        map.rows().iter().map(|r| {
            [
                r.partyfacts_id.map(|i| i.to_string()).unwrap_or_default(),
                r.party_abb_hansard.clone(),
                r.party_abb_auspol.clone(),
                r.party_name_auspol.clone(),
            ]
        }),
    )
}
