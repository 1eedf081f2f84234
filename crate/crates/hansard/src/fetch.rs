//! Sitting-day acquisition: remote download with an on-disk cache, local
//! files, and generated fixtures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use chrono::NaiveDate;
use hansard_core::fixture::{generate_fixture, FixtureSpec};
use hansard_core::xml::{parse_document, SchemaEra, FIRST_SITTING, LAST_SITTING};

pub const DEFAULT_URL_TEMPLATE: &str =
    "https://parlinfo.aph.gov.au/parlInfo/download/chamber/hansardr/{date}/toc_unixml/{date}.xml";

pub const CACHE_ENV: &str = "HANSARD_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Remote,
    LocalPath,
    /// `uri_or_path` is `ERA:SEED`.
    Fixture,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLocator {
    pub sitting_date: NaiveDate,
    pub origin: Origin,
    pub uri_or_path: String,
}

impl SourceLocator {
    pub fn remote(date: NaiveDate) -> Self {
        SourceLocator {
            sitting_date: date,
            origin: Origin::Remote,
            uri_or_path: String::new(),
        }
    }

    pub fn local(date: NaiveDate, path: impl AsRef<Path>) -> Self {
        SourceLocator {
            sitting_date: date,
            origin: Origin::LocalPath,
            uri_or_path: path.as_ref().to_string_lossy().into_owned(),
        }
    }

    pub fn fixture(era: SchemaEra, seed: u64) -> Self {
        let date = generate_fixture(&FixtureSpec::new(era, seed))
            .map(|f| f.date)
            .unwrap_or(FIRST_SITTING);
        SourceLocator {
            sitting_date: date,
            origin: Origin::Fixture,
            uri_or_path: format!("{}:{seed}", era.as_str()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("no transcript for {0}")]
    NotFound(String),
    #[error("transport failure: {0}")]
    TransportFailure(String),
    #[error("cached file {0} is not a readable transcript")]
    CacheCorruption(PathBuf),
    #[error("cache i/o on {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// Anything that can GET a URL. Swapped for a mock in tests.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<HttpResponse, String>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

const MAX_BODY: u64 = 256 * 1024 * 1024;

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        UreqTransport { agent }
    }
}

impl Default for UreqTransport {
    fn default() -> Self {
        UreqTransport::new(Duration::from_secs(120))
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .with_config()
            .limit(MAX_BODY)
            .read_to_vec()
            .map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

/// `$HANSARD_CACHE_DIR`, else `~/.cache/hansard`, else `./.hansard-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => PathBuf::from(home).join(".cache").join("hansard"),
        None => PathBuf::from(".hansard-cache"),
    }
}

/// Cheap check that bytes are a transcript we can open.
pub fn looks_like_transcript(bytes: &[u8]) -> bool {
    parse_document(bytes).is_ok()
}

pub struct Fetcher<T: Transport = UreqTransport> {
    transport: T,
    cache_dir: PathBuf,
    url_template: String,
}

impl Fetcher<UreqTransport> {
    pub fn online(cache_dir: PathBuf) -> Self {
        Fetcher::new(UreqTransport::default(), cache_dir)
    }
}

impl<T: Transport> Fetcher<T> {
    pub fn new(transport: T, cache_dir: PathBuf) -> Self {
        Fetcher {
            transport,
            cache_dir,
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
        }
    }

    pub fn with_url_template(mut self, template: impl Into<String>) -> Self {
        self.url_template = template.into();
        self
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn cache_path(&self, date: NaiveDate) -> PathBuf {
        self.cache_dir.join(format!("{}.xml", date.format("%Y-%m-%d")))
    }

    pub fn url_for(&self, date: NaiveDate) -> String {
        self.url_template.replace("{date}", &date.format("%Y-%m-%d").to_string())
    }

    pub fn fetch(&self, loc: &SourceLocator) -> Result<Vec<u8>, FetchError> {
        match loc.origin {
            Origin::LocalPath => fs::read(&loc.uri_or_path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => FetchError::NotFound(loc.uri_or_path.clone()),
                _ => FetchError::Cache {
                    path: PathBuf::from(&loc.uri_or_path),
                    source: e,
                },
            }),
            Origin::Fixture => fixture_bytes(&loc.uri_or_path),
            Origin::Remote => self.fetch_remote(loc.sitting_date),
        }
    }

    fn fetch_remote(&self, date: NaiveDate) -> Result<Vec<u8>, FetchError> {
        if !(FIRST_SITTING..=LAST_SITTING).contains(&date) {
            return Err(FetchError::NotFound(format!("{date} is outside the covered period")));
        }
        let path = self.cache_path(date);
        match fs::read(&path) {
            Ok(bytes) => {
                if !looks_like_transcript(&bytes) {
                    return Err(FetchError::CacheCorruption(path));
                }
                log::debug!("cache hit {}", path.display());
                return Ok(bytes);
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(FetchError::Cache { path, source: e }),
        }
        let url = self.url_for(date);
        log::info!("GET {url}");
        let resp = self.transport.get(&url).map_err(FetchError::TransportFailure)?;
        match resp.status {
            200..=299 => {}
            404 | 410 => return Err(FetchError::NotFound(date.to_string())),
            s => return Err(FetchError::TransportFailure(format!("HTTP {s} for {url}"))),
        }
        // Non-sitting days come back as an HTML page rather than an error.
        if !looks_like_transcript(&resp.body) {
            return Err(FetchError::NotFound(date.to_string()));
        }
        self.store(&path, &resp.body)?;
        Ok(resp.body)
    }

    fn store(&self, path: &Path, bytes: &[u8]) -> Result<(), FetchError> {
        let io = |source| FetchError::Cache {
            path: path.to_path_buf(),
            source,
        };
        fs::create_dir_all(&self.cache_dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.cache_dir).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }
}

fn fixture_bytes(key: &str) -> Result<Vec<u8>, FetchError> {
    let bad = || FetchError::NotFound(format!("fixture {key:?}"));
    let (era, seed) = key.split_once(':').ok_or_else(bad)?;
    let era = SchemaEra::from_str(era).map_err(|_| bad())?;
    let seed: u64 = seed.parse().map_err(|_| bad())?;
    let fx = generate_fixture(&FixtureSpec::new(era, seed)).map_err(|_| bad())?;
    Ok(fx.xml.into_bytes())
}
