//! Write a generated fixture day and its reference files to disk.

use std::path::{Path, PathBuf};

use hansard_core::fixture::{fixture_partyfacts, fixture_registry, generate_fixture, Fixture, FixtureSpec};

use crate::config::ConfigError;
use crate::output::{self, daily_file_name, Format};
use crate::reference::{write_partyfacts, write_politicians};

pub const POLITICIANS_FILE: &str = "politicians.csv";
pub const PARTYFACTS_FILE: &str = "partyfacts.csv";
pub const TRUTH_DIR: &str = "truth";

/// `YYYY-MM-DD.xml`, the expected table under `truth/`, and the roster and
/// party map the fixture was drawn from. Same spec, same bytes.
pub fn write_fixture_files(spec: &FixtureSpec, dir: &Path) -> Result<(Fixture, Vec<PathBuf>), ConfigError> {
    let fx = generate_fixture(spec).map_err(|e| ConfigError::Usage(e.to_string()))?;
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ConfigError::Io { path, source }
    };
    let xml = dir.join(format!("{}.xml", fx.date.format("%Y-%m-%d")));
    output::write_atomic(&xml, fx.xml.as_bytes()).map_err(io(&xml))?;
    let truth = dir.join(TRUTH_DIR).join(daily_file_name(fx.date, Format::Csv));
    output::write_daily_csv(&fx.truth, &truth).map_err(|e| ConfigError::Invalid {
        path: truth.clone(),
        detail: e.to_string(),
    })?;
    let politicians = dir.join(POLITICIANS_FILE);
    write_politicians(&fixture_registry(), &politicians)?;
    let partyfacts = dir.join(PARTYFACTS_FILE);
    write_partyfacts(&fixture_partyfacts(), &partyfacts)?;
    Ok((fx, vec![xml, truth, politicians, partyfacts]))
}
