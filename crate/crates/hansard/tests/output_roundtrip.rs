use std::path::Path;

use chrono::NaiveDate;
use hansard::core::fixture::{fixture_partyfacts, fixture_registry, generate_fixture, FixtureSpec};
use hansard::core::pipeline::{process_day, DayConfig};
use hansard::core::table::{build_corpus, DailyTable, COLUMNS};
use hansard::core::xml::SchemaEra;
use hansard::output::*;

fn cfg() -> DayConfig {
    DayConfig {
        registry: fixture_registry(),
        partyfacts: fixture_partyfacts(),
        ..DayConfig::default()
    }
}

fn parsed(era: SchemaEra, seed: u64) -> hansard::core::pipeline::DayOutput {
    let fx = generate_fixture(&FixtureSpec::new(era, seed)).unwrap();
    process_day(fx.bytes(), Some(fx.date), &cfg()).unwrap()
}

#[test]
fn daily_tables_survive_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    for era in SchemaEra::ALL {
        for seed in 0..6 {
            let out = parsed(era, seed);
            let files = write_daily(&out.table, dir.path(), &[Format::Csv, Format::Parquet]).unwrap();
            assert_eq!(files.len(), 2);
            for f in files {
                let back = read_daily(&f).unwrap();
                assert_eq!(back, out.table, "{era:?} seed {seed} via {}", f.display());
            }
        }
    }
}

#[test]
fn csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = parsed(SchemaEra::ModernFedChamb, 2);
    let path = dir.path().join(daily_file_name(out.table.date, Format::Csv));
    write_daily_csv(&out.table, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    assert!(text.ends_with('\n'));
}

#[test]
fn awkward_text_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = parsed(SchemaEra::LegacyInline, 1).table;
    table.rows[0].body = "He said, \"no\"\nthen left; 50% — done".into();
    table.rows[0].time_stamp = Some("NaN:28:00".into());
    let p = dir.path().join("hansard_2001-05-01.csv");
    write_daily_csv(&table, &p).unwrap();
    assert_eq!(read_daily_csv(&p, table.date).unwrap(), table);
}

#[test]
fn empty_day_keeps_full_header() {
    let dir = tempfile::tempdir().unwrap();
    let table = DailyTable {
        date: NaiveDate::from_ymd_opt(2005, 3, 8).unwrap(),
        rows: Vec::new(),
    };
    for f in write_daily(&table, dir.path(), &[Format::Csv, Format::Parquet]).unwrap() {
        assert_eq!(read_daily(&f).unwrap(), table);
    }
    let csv = std::fs::read_to_string(dir.path().join("hansard_2005-03-08.csv")).unwrap();
    assert_eq!(csv, format!("{}\n", COLUMNS.join(",")));
}

#[test]
fn parquet_types_are_explicit() {
    let schema = daily_schema();
    let ty = |n: &str| schema.field_with_name(n).unwrap().data_type().clone();
    use arrow_schema::DataType::*;
    assert_eq!(ty("interject"), Int32);
    assert_eq!(ty("order"), Int64);
    assert_eq!(ty("partyfacts_id"), Int64);
    assert_eq!(ty("body"), Utf8);
    assert_eq!(ty("time.stamp"), Utf8);
    let names: Vec<_> = schema.fields().iter().map(|f| f.name().as_str()).collect();
    assert_eq!(names, COLUMNS);
    assert_eq!(corpus_schema().field(0).name(), "date");
    assert_eq!(corpus_schema().field(0).data_type(), &Date32);
}

#[test]
fn unknown_format_is_rejected_up_front() {
    assert!(matches!(parse_formats("csv,feather"), Err(OutputError::UnknownFormat(t)) if t == "feather"));
    assert!(parse_formats("").is_err());
    assert_eq!(parse_formats("parquet, CSV,parquet").unwrap(), [Format::Parquet, Format::Csv]);
}

#[test]
fn corpus_round_trip_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let days: Vec<DailyTable> = SchemaEra::ALL
        .iter()
        .enumerate()
        .map(|(i, &e)| parsed(e, 10 + i as u64).table)
        .collect();
    let total: usize = days.iter().map(|d| d.rows.len()).sum();
    let corpus = build_corpus(days).unwrap();
    assert_eq!(corpus.row_count(), total);
    for f in write_corpus(&corpus, dir.path(), &[Format::Csv, Format::Parquet]).unwrap() {
        let back = read_corpus(&f).unwrap();
        assert_eq!(back, corpus, "{}", f.display());
        assert_eq!(back.dates().count(), 4);
    }
    let csv = std::fs::read_to_string(dir.path().join(corpus_file_name(Format::Csv))).unwrap();
    assert!(csv.starts_with("date,name,order,"));
}

#[test]
fn topics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let topics: Vec<_> = (0..4).flat_map(|s| parsed(SchemaEra::ModernMainComm, s).topics).collect();
    assert!(!topics.is_empty());
    let files = write_topics(&topics, dir.path(), &[Format::Csv, Format::Parquet]).unwrap();
    assert_eq!(read_topics_csv(&files[0]).unwrap(), topics);
    assert_eq!(read_topics_parquet(&files[1]).unwrap(), topics);
}

#[test]
fn divisions_round_trip_with_list_columns() {
    let dir = tempfile::tempdir().unwrap();
    let records: Vec<_> = (0..8)
        .flat_map(|s| parsed(SchemaEra::LegacyInline, s).divisions)
        .collect();
    assert!(!records.is_empty());
    write_divisions(&records, dir.path()).unwrap();
    let back = read_divisions_parquet(&dir.path().join(DIVISIONS_FILE)).unwrap();
    assert_eq!(back, records);
    let votes = read_votes_csv(&dir.path().join(VOTES_FILE)).unwrap();
    let expected: u32 = records
        .iter()
        .map(|r| r.num_votes_ayes + r.num_votes_noes + r.num_votes_pairs)
        .sum();
    assert_eq!(votes.len(), expected as usize);
}

#[test]
fn reading_a_foreign_file_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("hansard_2010-01-01.csv");
    std::fs::write(&p, "a,b\n1,2\n").unwrap();
    assert!(matches!(read_daily(&p), Err(OutputError::SchemaMismatch { .. })));
    let topics = dir.path().join("t.parquet");
    write_topics_parquet(&[], &topics).unwrap();
    assert!(matches!(
        read_daily_parquet(&topics, NaiveDate::from_ymd_opt(2010, 1, 1).unwrap()),
        Err(OutputError::SchemaMismatch { .. })
    ));
    assert!(matches!(read_daily(Path::new("undated.csv")), Err(OutputError::NoDate { .. })));
}

#[test]
fn date_from_file_names() {
    assert_eq!(
        date_in_name(Path::new("x/hansard_2020-02-25.parquet")),
        NaiveDate::from_ymd_opt(2020, 2, 25)
    );
    assert_eq!(date_in_name(Path::new("2001-09-18.xml")), NaiveDate::from_ymd_opt(2001, 9, 18));
    assert_eq!(date_in_name(Path::new("day.xml")), None);
}
