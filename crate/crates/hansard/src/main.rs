use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use hansard::config::{ConfigError, ConfigPaths};
use hansard::core::fixture::FixtureSpec;
use hansard::core::xml::SchemaEra;
use hansard::fetch::{default_cache_dir, DEFAULT_URL_TEMPLATE};
use hansard::fixtures::write_fixture_files;
use hansard::output::parse_formats;
use hansard::run::{self, Inputs, RunConfig, RunOutcome, EXIT_CONFIG, EXIT_OK};

#[derive(Parser)]
#[command(name = "hansard", version, about = "Hansard sitting-day XML to tidy tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse days into per-day CSV/Parquet tables.
    Parse(Common),
    /// Run the eight quality checks.
    Validate(Common),
    /// Extract debate titles.
    Topics(Common),
    /// Extract division tallies and voter lists.
    Divisions(Common),
    /// Concatenate daily tables into one corpus file.
    Corpus(Common),
    /// Summary counts over an existing corpus.
    Stats(Common),
    /// Download transcripts into the cache.
    Fetch(Common),
    /// Write a generated fixture day with its reference files.
    Fixtures(FixtureArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_name = "DATE")]
    from: Option<NaiveDate>,
    #[arg(long, value_name = "DATE")]
    to: Option<NaiveDate>,
    #[arg(long, num_args = 1.., value_name = "PATH", conflicts_with_all = ["from", "to"])]
    files: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value = "csv,parquet")]
    formats: String,
    #[arg(long)]
    politicians: Option<PathBuf>,
    #[arg(long)]
    partyfacts: Option<PathBuf>,
    #[arg(long = "stage-directions")]
    stage_directions: Option<PathBuf>,
    #[arg(long = "qa-heuristics")]
    qa_heuristics: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    force: bool,
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
    /// Defaults to $HANSARD_CACHE_DIR.
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long = "url-template", default_value = DEFAULT_URL_TEMPLATE)]
    url_template: String,
    #[arg(long = "log-level", default_value = "warn")]
    log_level: String,
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long)]
    era: SchemaEra,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "fixtures")]
    out: PathBuf,
    #[arg(long = "n-debates")]
    n_debates: Option<usize>,
    #[arg(long = "interjection-rate")]
    interjection_rate: Option<f64>,
    #[arg(long = "log-level", default_value = "warn")]
    log_level: String,
}

fn init_logging(level: &str) {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

impl Common {
    /// `--from` alone means one day; no inputs at all is only valid for
    /// `corpus` and `stats`, which read the output directory.
    fn config(&self, needs_inputs: bool) -> Result<RunConfig, ConfigError> {
        let inputs = if !self.files.is_empty() {
            Inputs::Files(self.files.clone())
        } else {
            match (self.from, self.to) {
                (Some(from), to) => Inputs::Range { from, to: to.unwrap_or(from) },
                (None, Some(to)) => Inputs::Range { from: to, to },
                (None, None) if needs_inputs => {
                    return Err(ConfigError::Usage("give --from/--to or --files".into()))
                }
                (None, None) => Inputs::Range {
                    from: NaiveDate::MIN,
                    to: NaiveDate::MAX,
                },
            }
        };
        let formats = parse_formats(&self.formats).map_err(|e| ConfigError::Usage(e.to_string()))?;
        Ok(RunConfig {
            inputs,
            out_dir: self.out.clone(),
            formats,
            paths: ConfigPaths {
                politicians: self.politicians.clone(),
                partyfacts: self.partyfacts.clone(),
                stage_directions: self.stage_directions.clone(),
                qa_heuristics: self.qa_heuristics.clone(),
            },
            jobs: self.jobs,
            force: self.force,
            no_timestamp: self.no_timestamp,
            cache_dir: self.cache_dir.clone().unwrap_or_else(default_cache_dir),
            url_template: self.url_template.clone(),
        })
    }
}

fn report(outcome: &RunOutcome) {
    for (status, n) in &outcome.manifest.counts {
        eprintln!("{status}: {n}");
    }
    for o in &outcome.manifest.outputs {
        println!("{o}");
    }
}

fn dispatch(cli: Cli) -> Result<i32, ConfigError> {
    match cli.command {
        Command::Fixtures(a) => {
            init_logging(&a.log_level);
            let mut spec = FixtureSpec::new(a.era, a.seed);
            if let Some(n) = a.n_debates {
                spec.n_debates = n;
            }
            if let Some(r) = a.interjection_rate {
                spec.interjection_rate = r;
            }
            let (_, files) = write_fixture_files(&spec, &a.out)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(EXIT_OK)
        }
        Command::Parse(c) => {
            init_logging(&c.log_level);
            let o = run::run_pipeline(&c.config(true)?)?;
            report(&o);
            Ok(o.exit_code)
        }
        Command::Validate(c) => {
            init_logging(&c.log_level);
            let (o, rep) = run::run_validate(&c.config(true)?)?;
            print!("{}", rep.to_text());
            report(&o);
            Ok(o.exit_code)
        }
        Command::Topics(c) => {
            init_logging(&c.log_level);
            let o = run::run_topics(&c.config(true)?)?;
            report(&o);
            Ok(o.exit_code)
        }
        Command::Divisions(c) => {
            init_logging(&c.log_level);
            let o = run::run_divisions(&c.config(true)?)?;
            report(&o);
            Ok(o.exit_code)
        }
        Command::Corpus(c) => {
            init_logging(&c.log_level);
            let o = run::run_corpus(&c.config(false)?)?;
            report(&o);
            Ok(o.exit_code)
        }
        Command::Stats(c) => {
            init_logging(&c.log_level);
            let (o, s) = run::run_stats(&c.config(false)?)?;
            println!(
                "{}",
                serde_json::json!({
                    "days": s.days,
                    "rows": s.rows,
                    "total_speeches": s.total_speeches,
                    "mean_unique_names_chamber": s.mean_unique_names_chamber,
                    "mean_unique_names_federation_chamber": s.mean_unique_names_federation_chamber,
                    "party_totals": s.stats.party_totals,
                })
            );
            Ok(o.exit_code)
        }
        Command::Fetch(c) => {
            init_logging(&c.log_level);
            let o = run::run_fetch(&c.config(true)?)?;
            report(&o);
            Ok(o.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
