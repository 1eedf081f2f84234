//! Batch orchestration: plan day jobs, run them on a worker pool with day
//! isolation, write outputs and a run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use chrono::NaiveDate;
use hansard_core::error::CorpusError;
use hansard_core::pipeline::{process_day, DayConfig, DayOutput};
use hansard_core::table::build_corpus;
use hansard_core::validate::{compute_summary_stats, run_validation, DayEvidence, ValidationReport};
use hansard_core::xml::Venue;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{load_day_config, ConfigError, ConfigPaths};
use crate::fetch::{FetchError, Fetcher, SourceLocator, Transport, UreqTransport, DEFAULT_URL_TEMPLATE};
use crate::output::{
    self, corpus_file_name, daily_file_name, date_in_name, write_corpus, write_daily, write_divisions,
    write_topics, Format, OutputError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_TOTAL: i32 = 4;

pub const MANIFEST_FILE: &str = "run_manifest.json";
pub const REPORT_STEM: &str = "validation_report";
pub const STATS_FILE: &str = "summary_stats.json";

#[derive(Debug, Clone)]
pub enum Inputs {
    Range { from: NaiveDate, to: NaiveDate },
    Files(Vec<PathBuf>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Inputs,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub paths: ConfigPaths,
    pub jobs: usize,
    pub force: bool,
    pub no_timestamp: bool,
    pub cache_dir: PathBuf,
    pub url_template: String,
}

impl RunConfig {
    pub fn new(inputs: Inputs, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            inputs,
            out_dir: out_dir.into(),
            formats: vec![Format::Csv, Format::Parquet],
            paths: ConfigPaths::default(),
            jobs: 1,
            force: false,
            no_timestamp: false,
            cache_dir: crate::fetch::default_cache_dir(),
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if let Inputs::Range { from, to } = self.inputs {
            if from > to {
                return Err(ConfigError::Usage(format!("--from {from} is after --to {to}")));
            }
        }
        if let Inputs::Files(f) = &self.inputs {
            if f.is_empty() {
                return Err(ConfigError::Usage("no input files".into()));
            }
        }
        if self.jobs == 0 {
            return Err(ConfigError::Usage("--jobs must be at least 1".into()));
        }
        fs::create_dir_all(&self.out_dir).map_err(|source| ConfigError::Io {
            path: self.out_dir.clone(),
            source,
        })
    }
}

#[derive(Debug, Clone)]
pub struct DayJob {
    pub key: String,
    /// From the file name or the requested date; used over the header date.
    pub expected: Option<NaiveDate>,
    pub locator: SourceLocator,
}

pub fn plan_jobs(inputs: &Inputs) -> Vec<DayJob> {
    match inputs {
        Inputs::Range { from, to } => from
            .iter_days()
            .take_while(|d| d <= to)
            .map(|d| DayJob {
                key: d.to_string(),
                expected: Some(d),
                locator: SourceLocator::remote(d),
            })
            .collect(),
        Inputs::Files(files) => files
            .iter()
            .map(|p| {
                let expected = date_in_name(p);
                DayJob {
                    key: p.to_string_lossy().into_owned(),
                    expected,
                    locator: SourceLocator::local(expected.unwrap_or_default(), p),
                }
            })
            .collect(),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DayFailure {
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error(transparent)]
    Day(#[from] hansard_core::error::DayError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("internal error: {0}")]
    Panic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DayStatus {
    Ok,
    Skipped,
    NoSitting,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub key: String,
    pub date: Option<NaiveDate>,
    pub status: DayStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub era: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub header_date: Option<NaiveDate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Warnings and correction rules that fired on this day.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub days: Vec<ManifestEntry>,
    pub counts: BTreeMap<String, usize>,
    pub outputs: Vec<String>,
    pub exit_code: i32,
}

/// Result of a run: the exit code plus what was written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub manifest: Manifest,
}

struct Processed {
    job: DayJob,
    result: Result<DayOutput, DayFailure>,
}

fn entry_for(p: &Processed) -> ManifestEntry {
    let mut e = ManifestEntry {
        key: p.job.key.clone(),
        date: p.job.expected,
        status: DayStatus::Ok,
        era: None,
        header_date: None,
        rows: None,
        outputs: Vec::new(),
        error: None,
        notes: Vec::new(),
    };
    match &p.result {
        Ok(out) => {
            e.date = Some(out.date);
            e.era = Some(out.era.as_str().to_string());
            e.header_date = Some(out.header_date);
            e.rows = Some(out.table.rows.len());
            e.notes = out.notes.clone();
        }
        Err(DayFailure::Fetch(FetchError::NotFound(msg))) => {
            e.status = DayStatus::NoSitting;
            e.error = Some(msg.clone());
        }
        Err(err) => {
            e.status = DayStatus::Failed;
            e.error = Some(err.to_string());
        }
    }
    e
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool")
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

fn load_and_process<T: Transport>(job: &DayJob, fetcher: &Fetcher<T>, cfg: &DayConfig) -> Result<DayOutput, DayFailure> {
    let bytes = fetcher.fetch(&job.locator)?;
    let out = process_day(&bytes, job.expected, cfg)?;
    for note in &out.notes {
        log::info!("{}: {note}", out.date);
    }
    Ok(out)
}

/// Fetch and parse every job; one day's failure never touches another's.
fn process_jobs<T: Transport>(
    jobs: Vec<DayJob>,
    fetcher: &Fetcher<T>,
    cfg: &DayConfig,
    threads: usize,
    after: &(dyn Fn(&DayOutput) -> Result<Vec<PathBuf>, OutputError> + Sync),
) -> Vec<(Processed, Vec<PathBuf>)> {
    pool(threads).install(|| {
        jobs.into_par_iter()
            .map(|job| {
                let caught = catch_unwind(AssertUnwindSafe(|| {
                    let out = load_and_process(&job, fetcher, cfg)?;
                    let written = after(&out)?;
                    Ok((out, written))
                }));
                let (result, written) = match caught {
                    Ok(Ok((out, w))) => (Ok(out), w),
                    Ok(Err(e)) => (Err(e), Vec::new()),
                    Err(p) => (Err(DayFailure::Panic(panic_message(p))), Vec::new()),
                };
                if let Err(e) = &result {
                    match e {
                        DayFailure::Fetch(FetchError::NotFound(_)) => log::info!("{}: {e}", job.key),
                        _ => log::error!("{}: {e}", job.key),
                    }
                }
                (Processed { job, result }, written)
            })
            .collect()
    })
}

fn exit_code_for(entries: &[ManifestEntry]) -> i32 {
    let count = |s| entries.iter().filter(|e| e.status == s).count();
    let (ok, skipped, failed) = (count(DayStatus::Ok), count(DayStatus::Skipped), count(DayStatus::Failed));
    if failed == 0 {
        EXIT_OK
    } else if ok + skipped == 0 {
        EXIT_TOTAL
    } else {
        EXIT_PARTIAL
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn finish(cfg: &RunConfig, command: &str, mut days: Vec<ManifestEntry>, outputs: Vec<PathBuf>, exit_code: i32) -> Result<RunOutcome, ConfigError> {
    days.sort_by(|a, b| (a.date, &a.key).cmp(&(b.date, &b.key)));
    let mut counts = BTreeMap::new();
    for d in &days {
        let k = serde_json::to_value(d.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        *counts.entry(k).or_insert(0) += 1;
    }
    let manifest = Manifest {
        command: command.to_string(),
        generated_unix: (!cfg.no_timestamp)
            .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)),
        days,
        counts,
        outputs: outputs.iter().map(|p| file_name(p)).collect(),
        exit_code,
    };
    let path = cfg.out_dir.join(MANIFEST_FILE);
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    output::write_atomic(&path, &json).map_err(|source| ConfigError::Io { path, source })?;
    Ok(RunOutcome { exit_code, manifest })
}

fn make_fetcher(cfg: &RunConfig) -> Fetcher<UreqTransport> {
    Fetcher::online(cfg.cache_dir.clone()).with_url_template(cfg.url_template.clone())
}

fn outputs_complete(cfg: &RunConfig, date: NaiveDate) -> bool {
    cfg.formats
        .iter()
        .all(|&f| cfg.out_dir.join(daily_file_name(date, f)).is_file())
}

/// parse: one table per day in every requested format.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    run_pipeline_with(cfg, &make_fetcher(cfg))
}

pub fn run_pipeline_with<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<RunOutcome, ConfigError> {
    cfg.check()?;
    let day_cfg = load_day_config(&cfg.paths)?.day;
    let (todo, done): (Vec<_>, Vec<_>) = plan_jobs(&cfg.inputs)
        .into_iter()
        .partition(|j| cfg.force || !j.expected.is_some_and(|d| outputs_complete(cfg, d)));
    let mut entries: Vec<ManifestEntry> = done
        .into_iter()
        .map(|j| {
            let date = j.expected.expect("skipped jobs are dated");
            log::info!("{}: outputs exist, skipping", j.key);
            ManifestEntry {
                key: j.key,
                date: Some(date),
                status: DayStatus::Skipped,
                era: None,
                header_date: None,
                rows: None,
                outputs: cfg.formats.iter().map(|&f| daily_file_name(date, f)).collect(),
                error: None,
                notes: Vec::new(),
            }
        })
        .collect();
    let write = |out: &DayOutput| write_daily(&out.table, &cfg.out_dir, &cfg.formats);
    let mut all_outputs = Vec::new();
    for (p, written) in process_jobs(todo, fetcher, &day_cfg, cfg.jobs, &write) {
        let mut e = entry_for(&p);
        e.outputs = written.iter().map(|w| file_name(w)).collect();
        all_outputs.extend(written);
        entries.push(e);
    }
    let code = exit_code_for(&entries);
    all_outputs.sort();
    finish(cfg, "parse", entries, all_outputs, code)
}

fn parse_all<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<(Vec<DayOutput>, Vec<ManifestEntry>), ConfigError> {
    cfg.check()?;
    let day_cfg = load_day_config(&cfg.paths)?.day;
    let none = |_: &DayOutput| Ok(Vec::new());
    let mut outs = Vec::new();
    let mut entries = Vec::new();
    for (p, _) in process_jobs(plan_jobs(&cfg.inputs), fetcher, &day_cfg, cfg.jobs, &none) {
        entries.push(entry_for(&p));
        if let Ok(o) = p.result {
            outs.push(o);
        }
    }
    outs.sort_by_key(|o| o.date);
    Ok((outs, entries))
}

/// validate: run the eight checks over every parsed day.
pub fn run_validate(cfg: &RunConfig) -> Result<(RunOutcome, ValidationReport), ConfigError> {
    run_validate_with(cfg, &make_fetcher(cfg))
}

pub fn run_validate_with<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<(RunOutcome, ValidationReport), ConfigError> {
    let registry = load_day_config(&cfg.paths)?.day.registry;
    let (outs, entries) = parse_all(cfg, fetcher)?;
    let evidence: Vec<DayEvidence<'_>> = outs
        .iter()
        .map(|o| DayEvidence {
            table: &o.table,
            header_date: o.header_date,
        })
        .collect();
    let report = run_validation(&evidence, &registry);
    let txt = cfg.out_dir.join(format!("{REPORT_STEM}.txt"));
    let json = cfg.out_dir.join(format!("{REPORT_STEM}.json"));
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ConfigError::Io { path, source }
    };
    output::write_atomic(&txt, report.to_text().as_bytes()).map_err(io(&txt))?;
    output::write_atomic(&json, &serde_json::to_vec_pretty(&report).expect("report serializes")).map_err(io(&json))?;
    let mut code = exit_code_for(&entries);
    if code == EXIT_OK && !report.ok() {
        code = EXIT_PARTIAL;
    }
    let outcome = finish(cfg, "validate", entries, vec![txt, json], code)?;
    Ok((outcome, report))
}

/// topics: one table of debate titles across all days.
pub fn run_topics(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    run_topics_with(cfg, &make_fetcher(cfg))
}

pub fn run_topics_with<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<RunOutcome, ConfigError> {
    let (outs, entries) = parse_all(cfg, fetcher)?;
    let topics: Vec<_> = outs.into_iter().flat_map(|o| o.topics).collect();
    let mut code = exit_code_for(&entries);
    let written = match write_topics(&topics, &cfg.out_dir, &cfg.formats) {
        Ok(w) => w,
        Err(e) => {
            log::error!("{e}");
            code = EXIT_TOTAL;
            Vec::new()
        }
    };
    finish(cfg, "topics", entries, written, code)
}

/// divisions: list-column Parquet plus the one-voter-per-row CSV.
pub fn run_divisions(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    run_divisions_with(cfg, &make_fetcher(cfg))
}

pub fn run_divisions_with<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<RunOutcome, ConfigError> {
    let (outs, entries) = parse_all(cfg, fetcher)?;
    let records: Vec<_> = outs.into_iter().flat_map(|o| o.divisions).collect();
    let mut code = exit_code_for(&entries);
    let written = match write_divisions(&records, &cfg.out_dir) {
        Ok(w) => w,
        Err(e) => {
            log::error!("{e}");
            code = EXIT_TOTAL;
            Vec::new()
        }
    };
    finish(cfg, "divisions", entries, written, code)
}

/// Daily output files in `dir`, one per date; Parquet preferred over CSV.
pub fn find_daily_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut by_date: BTreeMap<NaiveDate, PathBuf> = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let name = file_name(&path);
        let Some(date) = date_in_name(&path) else { continue };
        let is_parquet = name == daily_file_name(date, Format::Parquet);
        if !is_parquet && name != daily_file_name(date, Format::Csv) {
            continue;
        }
        if is_parquet || !by_date.contains_key(&date) {
            by_date.insert(date, path);
        }
    }
    Ok(by_date.into_values().collect())
}

/// corpus: concatenate daily files. Explicit `--files` are taken as given,
/// so two files for one date are an error.
pub fn run_corpus(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    if cfg.jobs == 0 {
        return Err(ConfigError::Usage("--jobs must be at least 1".into()));
    }
    fs::create_dir_all(&cfg.out_dir).map_err(|source| ConfigError::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let files = match &cfg.inputs {
        Inputs::Files(f) => f.clone(),
        Inputs::Range { from, to } => find_daily_files(&cfg.out_dir)
            .map_err(|source| ConfigError::Io {
                path: cfg.out_dir.clone(),
                source,
            })?
            .into_iter()
            .filter(|p| date_in_name(p).is_some_and(|d| (*from..=*to).contains(&d)))
            .collect(),
    };
    let mut entries = Vec::new();
    let mut tables = Vec::new();
    for f in &files {
        let mut e = ManifestEntry {
            key: f.to_string_lossy().into_owned(),
            date: date_in_name(f),
            status: DayStatus::Ok,
            era: None,
            header_date: None,
            rows: None,
            outputs: Vec::new(),
            error: None,
            notes: Vec::new(),
        };
        match output::read_daily(f) {
            Ok(t) => {
                e.rows = Some(t.rows.len());
                tables.push(t);
            }
            Err(err) => {
                log::error!("{err}");
                e.status = DayStatus::Failed;
                e.error = Some(err.to_string());
            }
        }
        entries.push(e);
    }
    let mut code = exit_code_for(&entries);
    let written = match build_corpus(tables) {
        Ok(corpus) => match write_corpus(&corpus, &cfg.out_dir, &cfg.formats) {
            Ok(w) => w,
            Err(e) => {
                log::error!("{e}");
                code = EXIT_TOTAL;
                Vec::new()
            }
        },
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            code = match e {
                CorpusError::DuplicateDate(_) | CorpusError::Empty => EXIT_TOTAL,
            };
            Vec::new()
        }
    };
    finish(cfg, "corpus", entries, written, code)
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsSummary {
    pub corpus_file: String,
    pub days: usize,
    pub rows: usize,
    pub total_speeches: u64,
    pub mean_unique_names_chamber: Option<f64>,
    pub mean_unique_names_federation_chamber: Option<f64>,
    pub stats: hansard_core::validate::SummaryStats,
}

/// stats: needs a corpus file already in the output directory.
pub fn run_stats(cfg: &RunConfig) -> Result<(RunOutcome, StatsSummary), ConfigError> {
    let path = [Format::Parquet, Format::Csv]
        .iter()
        .map(|&f| cfg.out_dir.join(corpus_file_name(f)))
        .find(|p| p.is_file())
        .ok_or_else(|| {
            ConfigError::Usage(format!(
                "no {} or {} in {}; run `corpus` first",
                corpus_file_name(Format::Parquet),
                corpus_file_name(Format::Csv),
                cfg.out_dir.display()
            ))
        })?;
    let partyfacts = load_day_config(&ConfigPaths {
        partyfacts: cfg.paths.partyfacts.clone(),
        ..ConfigPaths::default()
    })?
    .day
    .partyfacts;
    let corpus = output::read_corpus(&path).map_err(|e| ConfigError::Invalid {
        path: path.clone(),
        detail: e.to_string(),
    })?;
    let stats = compute_summary_stats(&corpus, &partyfacts);
    let summary = StatsSummary {
        corpus_file: file_name(&path),
        days: corpus.days.len(),
        rows: corpus.row_count(),
        total_speeches: stats.total_speeches(),
        mean_unique_names_chamber: stats.mean_unique_names(Venue::Chamber),
        mean_unique_names_federation_chamber: stats.mean_unique_names(Venue::FederationChamber),
        stats,
    };
    let out = cfg.out_dir.join(STATS_FILE);
    output::write_atomic(&out, &serde_json::to_vec_pretty(&summary).expect("stats serialize"))
        .map_err(|source| ConfigError::Io { path: out.clone(), source })?;
    let outcome = finish(cfg, "stats", Vec::new(), vec![out], EXIT_OK)?;
    Ok((outcome, summary))
}

/// fetch: warm the cache for a date range.
pub fn run_fetch(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    run_fetch_with(cfg, &make_fetcher(cfg))
}

pub fn run_fetch_with<T: Transport>(cfg: &RunConfig, fetcher: &Fetcher<T>) -> Result<RunOutcome, ConfigError> {
    cfg.check()?;
    let Inputs::Range { .. } = cfg.inputs else {
        return Err(ConfigError::Usage("fetch needs --from/--to".into()));
    };
    let jobs = plan_jobs(&cfg.inputs);
    let entries: Vec<ManifestEntry> = pool(cfg.jobs).install(|| {
        jobs.into_par_iter()
            .map(|job| {
                let result = fetcher.fetch(&job.locator).map(|_| ()).map_err(DayFailure::from);
                let mut e = ManifestEntry {
                    key: job.key.clone(),
                    date: job.expected,
                    status: DayStatus::Ok,
                    era: None,
                    header_date: None,
                    rows: None,
                    outputs: Vec::new(),
                    error: None,
                    notes: Vec::new(),
                };
                match result {
                    Ok(()) => e.outputs.push(file_name(&fetcher.cache_path(job.locator.sitting_date))),
                    Err(DayFailure::Fetch(FetchError::NotFound(m))) => {
                        e.status = DayStatus::NoSitting;
                        e.error = Some(m);
                    }
                    Err(err) => {
                        log::error!("{}: {err}", job.key);
                        e.status = DayStatus::Failed;
                        e.error = Some(err.to_string());
                    }
                }
                e
            })
            .collect()
    });
    let code = exit_code_for(&entries);
    finish(cfg, "fetch", entries, Vec::new(), code)
}
