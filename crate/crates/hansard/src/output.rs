//! CSV and Parquet writers and readers for every table the pipeline emits.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use arrow_array::builder::{ListBuilder, StringBuilder};
use arrow_array::{
    Array, ArrayRef, Date32Array, Int32Array, Int64Array, ListArray, RecordBatch, StringArray,
};
use arrow_schema::{ArrowError, DataType, Field, Schema, SchemaRef};
use chrono::NaiveDate;
use hansard_core::divisions::{flatten_votes, DivisionRecord, DivisionVote, Side};
use hansard_core::table::{CorpusTable, DailyTable, DebateRecord, COLUMNS, DATE_COLUMN};
use hansard_core::topics::DebateTopic;
use parquet::arrow::arrow_reader::ParquetRecordBatchReaderBuilder;
use parquet::arrow::ArrowWriter;
use parquet::basic::Compression;
use parquet::errors::ParquetError;
use parquet::file::properties::WriterProperties;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Parquet,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Parquet => "parquet",
        }
    }
}

impl FromStr for Format {
    type Err = OutputError;

    fn from_str(s: &str) -> std::result::Result<Self, OutputError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "parquet" => Ok(Format::Parquet),
            _ => Err(OutputError::UnknownFormat(s.trim().to_string())),
        }
    }
}

/// `csv,parquet` style list. Any bad token fails the whole list.
pub fn parse_formats(list: &str) -> Result<Vec<Format>> {
    let mut out = Vec::new();
    for tok in list.split(',').filter(|t| !t.trim().is_empty()) {
        let f = tok.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(OutputError::UnknownFormat(list.to_string()));
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("unknown output format {0:?}")]
    UnknownFormat(String),
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
    #[error("{path}: {source}")]
    Parquet {
        path: PathBuf,
        #[source]
        source: ParquetError,
    },
    #[error("{path}: {source}")]
    Arrow {
        path: PathBuf,
        #[source]
        source: ArrowError,
    },
    #[error("{path}: {detail}")]
    SchemaMismatch { path: PathBuf, detail: String },
    #[error("{path}: no date in file name")]
    NoDate { path: PathBuf },
}

type Result<T> = std::result::Result<T, OutputError>;

pub fn daily_file_name(date: NaiveDate, format: Format) -> String {
    format!("hansard_{}.{}", date.format("%Y-%m-%d"), format.extension())
}

pub fn corpus_file_name(format: Format) -> String {
    format!("hansard_corpus.{}", format.extension())
}

pub const TOPICS_STEM: &str = "all_debate_topics";
pub const DIVISIONS_FILE: &str = "division_data.parquet";
pub const VOTES_FILE: &str = "division_votes.csv";

pub const TOPIC_COLUMNS: [&str; 4] = ["date", "item_index", "title", "page.no"];
pub const DIVISION_COLUMNS: [&str; 10] = [
    "date",
    "div_num",
    "time.stamp",
    "num.votes_AYES",
    "num.votes_NOES",
    "num.votes_PAIRS",
    "names_AYES",
    "names_NOES",
    "names_PAIRS",
    "result",
];
pub const VOTE_COLUMNS: [&str; 4] = ["date", "div_num", "side", "voter_name"];

/// The trailing `YYYY-MM-DD` of a file stem, e.g. `hansard_2020-02-25.csv`.
pub fn date_in_name(path: &Path) -> Option<NaiveDate> {
    let stem = path.file_stem()?.to_str()?;
    let tail = stem.get(stem.len().checked_sub(10)?..)?;
    NaiveDate::parse_from_str(tail, "%Y-%m-%d").ok()
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// RFC-4180 writer with LF line endings.
pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(w)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> OutputError + '_ {
    move |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn pq_err(path: &Path) -> impl Fn(ParquetError) -> OutputError + '_ {
    move |source| OutputError::Parquet {
        path: path.to_path_buf(),
        source,
    }
}

fn arrow_err(path: &Path) -> impl Fn(ArrowError) -> OutputError + '_ {
    move |source| OutputError::Arrow {
        path: path.to_path_buf(),
        source,
    }
}

fn mismatch(path: &Path, detail: impl Into<String>) -> OutputError {
    OutputError::SchemaMismatch {
        path: path.to_path_buf(),
        detail: detail.into(),
    }
}

fn ymd(d: NaiveDate) -> String {
    d.format("%Y-%m-%d").to_string()
}

fn parse_ymd(path: &Path, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| mismatch(path, format!("bad date {s:?}")))
}

fn finish_csv(path: &Path, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| io_err(path)(e.into_error()))?;
    write_atomic(path, &bytes).map_err(io_err(path))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let f = File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().from_reader(f))
}

fn check_header(path: &Path, rdr: &mut csv::Reader<File>, want: &[&str]) -> Result<()> {
    let got = rdr.headers().map_err(csv_err(path))?;
    if !got.iter().eq(want.iter().copied()) {
        return Err(mismatch(
            path,
            format!("header {:?}, expected {want:?}", got.iter().collect::<Vec<_>>()),
        ));
    }
    Ok(())
}

// ---- daily and corpus tables, CSV ----

pub fn write_daily_csv(table: &DailyTable, path: &Path) -> Result<()> {
    let mut w = csv_writer(Vec::new());
    w.write_record(COLUMNS).map_err(csv_err(path))?;
    for r in &table.rows {
        w.write_record(r.to_fields().iter().map(|f| f.as_deref().unwrap_or("")))
            .map_err(csv_err(path))?;
    }
    finish_csv(path, w)
}

/// The date is not stored in daily files; it comes from the caller.
pub fn read_daily_csv(path: &Path, date: NaiveDate) -> Result<DailyTable> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &COLUMNS)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        let fields: Vec<&str> = rec.iter().collect();
        rows.push(DebateRecord::from_fields(&fields).map_err(|e| mismatch(path, e))?);
    }
    Ok(DailyTable { date, rows })
}

pub fn write_corpus_csv(corpus: &CorpusTable, path: &Path) -> Result<()> {
    let mut w = csv_writer(Vec::new());
    w.write_record(std::iter::once(DATE_COLUMN).chain(COLUMNS))
        .map_err(csv_err(path))?;
    for (date, r) in corpus.rows() {
        let date = ymd(date);
        let fields = r.to_fields();
        w.write_record(
            std::iter::once(date.as_str()).chain(fields.iter().map(|f| f.as_deref().unwrap_or(""))),
        )
        .map_err(csv_err(path))?;
    }
    finish_csv(path, w)
}

pub fn read_corpus_csv(path: &Path) -> Result<CorpusTable> {
    let mut rdr = csv_reader(path)?;
    let want: Vec<&str> = std::iter::once(DATE_COLUMN).chain(COLUMNS).collect();
    check_header(path, &mut rdr, &want)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        let fields: Vec<&str> = rec.iter().collect();
        let date = parse_ymd(path, fields[0])?;
        rows.push((date, DebateRecord::from_fields(&fields[1..]).map_err(|e| mismatch(path, e))?));
    }
    Ok(CorpusTable::from_rows(rows))
}

// ---- daily and corpus tables, Parquet ----

fn record_fields() -> Vec<Field> {
    COLUMNS
        .iter()
        .map(|&c| {
            let (ty, nullable) = match c {
                "name" | "body" => (DataType::Utf8, false),
                "order" | "speech_no" => (DataType::Int64, false),
                "partyfacts_id" => (DataType::Int64, true),
                "in.gov" | "first.speech" | "fedchamb_flag" | "question" | "answer"
                | "q_in_writing" | "interject" | "div_flag" => (DataType::Int32, false),
                _ => (DataType::Utf8, true),
            };
            Field::new(c, ty, nullable)
        })
        .collect()
}

pub fn daily_schema() -> SchemaRef {
    Arc::new(Schema::new(record_fields()))
}

pub fn corpus_schema() -> SchemaRef {
    let mut fields = vec![Field::new(DATE_COLUMN, DataType::Date32, false)];
    fields.extend(record_fields());
    Arc::new(Schema::new(fields))
}

fn days_since_epoch(d: NaiveDate) -> i32 {
    (d - NaiveDate::from_ymd_opt(1970, 1, 1).unwrap()).num_days() as i32
}

fn from_epoch_days(n: i32) -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).unwrap() + chrono::Duration::days(n.into())
}

fn record_arrays(rows: &[&DebateRecord]) -> Vec<ArrayRef> {
    let text = |f: fn(&DebateRecord) -> Option<&str>| -> ArrayRef {
        Arc::new(rows.iter().map(|r| f(r)).collect::<StringArray>())
    };
    let int32 = |f: fn(&DebateRecord) -> i32| -> ArrayRef {
        Arc::new(Int32Array::from_iter_values(rows.iter().map(|r| f(r))))
    };
    let int64 = |f: fn(&DebateRecord) -> Option<i64>| -> ArrayRef {
        Arc::new(rows.iter().map(|r| f(r)).collect::<Int64Array>())
    };
    vec![
        text(|r| Some(&r.name)),
        int64(|r| Some(r.order)),
        int64(|r| Some(r.speech_no)),
        text(|r| r.page_no.as_deref()),
        text(|r| r.time_stamp.as_deref()),
        text(|r| r.name_id.as_deref()),
        text(|r| r.electorate.as_deref()),
        text(|r| r.party.as_deref()),
        int32(|r| r.in_gov),
        int32(|r| r.first_speech),
        text(|r| Some(&r.body)),
        int32(|r| r.fedchamb_flag),
        int32(|r| r.question),
        int32(|r| r.answer),
        int32(|r| r.q_in_writing),
        text(|r| r.gender.as_deref()),
        text(|r| r.unique_id.as_deref()),
        int32(|r| r.interject),
        int32(|r| r.div_flag),
        int64(|r| r.partyfacts_id),
    ]
}

fn write_parquet(path: &Path, schema: SchemaRef, columns: Vec<ArrayRef>) -> Result<()> {
    let batch = RecordBatch::try_new(schema.clone(), columns).map_err(arrow_err(path))?;
    let props = WriterProperties::builder()
        .set_compression(Compression::SNAPPY)
        .build();
    let mut w = ArrowWriter::try_new(Vec::new(), schema, Some(props)).map_err(pq_err(path))?;
    w.write(&batch).map_err(pq_err(path))?;
    let bytes = w.into_inner().map_err(pq_err(path))?;
    write_atomic(path, &bytes).map_err(io_err(path))
}

fn read_parquet(path: &Path, want: &Schema) -> Result<Vec<RecordBatch>> {
    let f = File::open(path).map_err(io_err(path))?;
    let builder = ParquetRecordBatchReaderBuilder::try_new(f).map_err(pq_err(path))?;
    let got = builder.schema();
    let same = got.fields().len() == want.fields().len()
        && got
            .fields()
            .iter()
            .zip(want.fields())
            .all(|(a, b)| a.name() == b.name() && a.data_type() == b.data_type());
    if !same {
        return Err(mismatch(path, format!("schema {got:?} does not match the expected layout")));
    }
    builder
        .build()
        .map_err(pq_err(path))?
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(arrow_err(path))
}

fn column<'a, T: 'static>(path: &Path, batch: &'a RecordBatch, name: &str) -> Result<&'a T> {
    batch
        .column_by_name(name)
        .and_then(|c| c.as_any().downcast_ref::<T>())
        .ok_or_else(|| mismatch(path, format!("column {name:?} missing or mistyped")))
}

fn opt_str(a: &StringArray, i: usize) -> Option<String> {
    (!a.is_null(i)).then(|| a.value(i).to_string())
}

fn opt_i64(a: &Int64Array, i: usize) -> Option<i64> {
    (!a.is_null(i)).then(|| a.value(i))
}

fn records_from_batch(path: &Path, b: &RecordBatch) -> Result<Vec<DebateRecord>> {
    let s = |n: &str| column::<StringArray>(path, b, n);
    let i32c = |n: &str| column::<Int32Array>(path, b, n);
    let i64c = |n: &str| column::<Int64Array>(path, b, n);
    let (name, order, speech_no) = (s("name")?, i64c("order")?, i64c("speech_no")?);
    let (page, time, name_id) = (s("page.no")?, s("time.stamp")?, s("name.id")?);
    let (electorate, party, in_gov) = (s("electorate")?, s("party")?, i32c("in.gov")?);
    let (first, body, fed) = (i32c("first.speech")?, s("body")?, i32c("fedchamb_flag")?);
    let (q, a, qw) = (i32c("question")?, i32c("answer")?, i32c("q_in_writing")?);
    let (gender, uid, interject) = (s("gender")?, s("uniqueID")?, i32c("interject")?);
    let (div, pf) = (i32c("div_flag")?, i64c("partyfacts_id")?);
    Ok((0..b.num_rows())
        .map(|i| DebateRecord {
            name: name.value(i).to_string(),
            order: order.value(i),
            speech_no: speech_no.value(i),
            page_no: opt_str(page, i),
            time_stamp: opt_str(time, i),
            name_id: opt_str(name_id, i),
            electorate: opt_str(electorate, i),
            party: opt_str(party, i),
            in_gov: in_gov.value(i),
            first_speech: first.value(i),
            body: body.value(i).to_string(),
            fedchamb_flag: fed.value(i),
            question: q.value(i),
            answer: a.value(i),
            q_in_writing: qw.value(i),
            gender: opt_str(gender, i),
            unique_id: opt_str(uid, i),
            interject: interject.value(i),
            div_flag: div.value(i),
            partyfacts_id: opt_i64(pf, i),
        })
        .collect())
}

pub fn write_daily_parquet(table: &DailyTable, path: &Path) -> Result<()> {
    let rows: Vec<&DebateRecord> = table.rows.iter().collect();
    write_parquet(path, daily_schema(), record_arrays(&rows))
}

pub fn read_daily_parquet(path: &Path, date: NaiveDate) -> Result<DailyTable> {
    let mut rows = Vec::new();
    for b in read_parquet(path, &daily_schema())? {
        rows.extend(records_from_batch(path, &b)?);
    }
    Ok(DailyTable { date, rows })
}

pub fn write_corpus_parquet(corpus: &CorpusTable, path: &Path) -> Result<()> {
    let (dates, rows): (Vec<i32>, Vec<&DebateRecord>) =
        corpus.rows().map(|(d, r)| (days_since_epoch(d), r)).unzip();
    let mut cols: Vec<ArrayRef> = vec![Arc::new(Date32Array::from(dates))];
    cols.extend(record_arrays(&rows));
    write_parquet(path, corpus_schema(), cols)
}

pub fn read_corpus_parquet(path: &Path) -> Result<CorpusTable> {
    let mut rows = Vec::new();
    for b in read_parquet(path, &corpus_schema())? {
        let dates = column::<Date32Array>(path, &b, DATE_COLUMN)?;
        let recs = records_from_batch(path, &b)?;
        rows.extend(dates.values().iter().map(|&d| from_epoch_days(d)).zip(recs));
    }
    Ok(CorpusTable::from_rows(rows))
}

/// Write one day in each format; returns the paths written.
pub fn write_daily(table: &DailyTable, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for &f in formats {
        let path = dir.join(daily_file_name(table.date, f));
        match f {
            Format::Csv => write_daily_csv(table, &path)?,
            Format::Parquet => write_daily_parquet(table, &path)?,
        }
        out.push(path);
    }
    Ok(out)
}

/// Read a daily file of either format, dating it from its name.
pub fn read_daily(path: &Path) -> Result<DailyTable> {
    let date = date_in_name(path).ok_or_else(|| OutputError::NoDate {
        path: path.to_path_buf(),
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("parquet") => read_daily_parquet(path, date),
        _ => read_daily_csv(path, date),
    }
}

pub fn write_corpus(corpus: &CorpusTable, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for &f in formats {
        let path = dir.join(corpus_file_name(f));
        match f {
            Format::Csv => write_corpus_csv(corpus, &path)?,
            Format::Parquet => write_corpus_parquet(corpus, &path)?,
        }
        out.push(path);
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<CorpusTable> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("parquet") => read_corpus_parquet(path),
        _ => read_corpus_csv(path),
    }
}

// ---- topics ----

pub fn write_topics_csv(topics: &[DebateTopic], path: &Path) -> Result<()> {
    let mut w = csv_writer(Vec::new());
    w.write_record(TOPIC_COLUMNS).map_err(csv_err(path))?;
    for t in topics {
        w.write_record([
            ymd(t.date),
            t.item_index.to_string(),
            t.title.clone(),
            t.page_no.clone().unwrap_or_default(),
        ])
        .map_err(csv_err(path))?;
    }
    finish_csv(path, w)
}

pub fn read_topics_csv(path: &Path) -> Result<Vec<DebateTopic>> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &TOPIC_COLUMNS)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        out.push(DebateTopic {
            date: parse_ymd(path, &rec[0])?,
            item_index: rec[1].parse().map_err(|_| mismatch(path, format!("bad item_index {:?}", &rec[1])))?,
            title: rec[2].to_string(),
            page_no: (!rec[3].is_empty()).then(|| rec[3].to_string()),
        });
    }
    Ok(out)
}

fn topics_schema() -> SchemaRef {
    Arc::new(Schema::new(vec![
        Field::new("date", DataType::Date32, false),
        Field::new("item_index", DataType::Int64, false),
        Field::new("title", DataType::Utf8, false),
        Field::new("page.no", DataType::Utf8, true),
    ]))
}

pub fn write_topics_parquet(topics: &[DebateTopic], path: &Path) -> Result<()> {
    let cols: Vec<ArrayRef> = vec![
        Arc::new(Date32Array::from_iter_values(topics.iter().map(|t| days_since_epoch(t.date)))),
        Arc::new(Int64Array::from_iter_values(topics.iter().map(|t| i64::from(t.item_index)))),
        Arc::new(topics.iter().map(|t| Some(t.title.as_str())).collect::<StringArray>()),
        Arc::new(topics.iter().map(|t| t.page_no.as_deref()).collect::<StringArray>()),
    ];
    write_parquet(path, topics_schema(), cols)
}

pub fn read_topics_parquet(path: &Path) -> Result<Vec<DebateTopic>> {
    let mut out = Vec::new();
    for b in read_parquet(path, &topics_schema())? {
        let date = column::<Date32Array>(path, &b, "date")?;
        let idx = column::<Int64Array>(path, &b, "item_index")?;
        let title = column::<StringArray>(path, &b, "title")?;
        let page = column::<StringArray>(path, &b, "page.no")?;
        for i in 0..b.num_rows() {
            out.push(DebateTopic {
                date: from_epoch_days(date.value(i)),
                item_index: idx.value(i) as u32,
                title: title.value(i).to_string(),
                page_no: opt_str(page, i),
            });
        }
    }
    Ok(out)
}

pub fn write_topics(topics: &[DebateTopic], dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for &f in formats {
        let path = dir.join(format!("{TOPICS_STEM}.{}", f.extension()));
        match f {
            Format::Csv => write_topics_csv(topics, &path)?,
            Format::Parquet => write_topics_parquet(topics, &path)?,
        }
        out.push(path);
    }
    Ok(out)
}

// ---- divisions ----

fn divisions_schema() -> SchemaRef {
    let list = || DataType::List(Arc::new(Field::new_list_field(DataType::Utf8, true)));
    Arc::new(Schema::new(vec![
        Field::new("date", DataType::Date32, false),
        Field::new("div_num", DataType::Int64, false),
        Field::new("time.stamp", DataType::Utf8, true),
        Field::new("num.votes_AYES", DataType::Int64, false),
        Field::new("num.votes_NOES", DataType::Int64, false),
        Field::new("num.votes_PAIRS", DataType::Int64, false),
        Field::new("names_AYES", list(), false),
        Field::new("names_NOES", list(), false),
        Field::new("names_PAIRS", list(), false),
        Field::new("result", DataType::Utf8, false),
    ]))
}

fn name_lists(records: &[DivisionRecord], f: fn(&DivisionRecord) -> &Vec<String>) -> ArrayRef {
    let mut b = ListBuilder::new(StringBuilder::new());
    for r in records {
        for n in f(r) {
            b.values().append_value(n);
        }
        b.append(true);
    }
    Arc::new(b.finish())
}

pub fn write_divisions_parquet(records: &[DivisionRecord], path: &Path) -> Result<()> {
    let count = |f: fn(&DivisionRecord) -> u32| -> ArrayRef {
        Arc::new(Int64Array::from_iter_values(records.iter().map(|r| i64::from(f(r)))))
    };
    let cols: Vec<ArrayRef> = vec![
        Arc::new(Date32Array::from_iter_values(records.iter().map(|r| days_since_epoch(r.date)))),
        count(|r| r.div_num),
        Arc::new(records.iter().map(|r| r.time_stamp.as_deref()).collect::<StringArray>()),
        count(|r| r.num_votes_ayes),
        count(|r| r.num_votes_noes),
        count(|r| r.num_votes_pairs),
        name_lists(records, |r| &r.names_ayes),
        name_lists(records, |r| &r.names_noes),
        name_lists(records, |r| &r.names_pairs),
        Arc::new(records.iter().map(|r| Some(r.result.as_str())).collect::<StringArray>()),
    ];
    write_parquet(path, divisions_schema(), cols)
}

fn list_at(path: &Path, a: &ListArray, i: usize) -> Result<Vec<String>> {
    let v = a.value(i);
    let s = v
        .as_any()
        .downcast_ref::<StringArray>()
        .ok_or_else(|| mismatch(path, "name list is not text"))?;
    Ok((0..s.len()).map(|j| s.value(j).to_string()).collect())
}

pub fn read_divisions_parquet(path: &Path) -> Result<Vec<DivisionRecord>> {
    let mut out = Vec::new();
    for b in read_parquet(path, &divisions_schema())? {
        let date = column::<Date32Array>(path, &b, "date")?;
        let num = column::<Int64Array>(path, &b, "div_num")?;
        let time = column::<StringArray>(path, &b, "time.stamp")?;
        let (na, nn, np) = (
            column::<Int64Array>(path, &b, "num.votes_AYES")?,
            column::<Int64Array>(path, &b, "num.votes_NOES")?,
            column::<Int64Array>(path, &b, "num.votes_PAIRS")?,
        );
        let (la, ln, lp) = (
            column::<ListArray>(path, &b, "names_AYES")?,
            column::<ListArray>(path, &b, "names_NOES")?,
            column::<ListArray>(path, &b, "names_PAIRS")?,
        );
        let result = column::<StringArray>(path, &b, "result")?;
        for i in 0..b.num_rows() {
            out.push(DivisionRecord {
                date: from_epoch_days(date.value(i)),
                div_num: num.value(i) as u32,
                time_stamp: opt_str(time, i),
                num_votes_ayes: na.value(i) as u32,
                num_votes_noes: nn.value(i) as u32,
                num_votes_pairs: np.value(i) as u32,
                names_ayes: list_at(path, la, i)?,
                names_noes: list_at(path, ln, i)?,
                names_pairs: list_at(path, lp, i)?,
                result: result.value(i).to_string(),
            });
        }
    }
    Ok(out)
}

/// One voter per row: date, div_num, side, voter_name.
pub fn write_votes_csv(records: &[DivisionRecord], path: &Path) -> Result<()> {
    let mut w = csv_writer(Vec::new());
    w.write_record(VOTE_COLUMNS).map_err(csv_err(path))?;
    for v in flatten_votes(records) {
        w.write_record([ymd(v.date), v.div_num.to_string(), v.side.as_str().to_string(), v.voter_name])
            .map_err(csv_err(path))?;
    }
    finish_csv(path, w)
}

pub fn read_votes_csv(path: &Path) -> Result<Vec<DivisionVote>> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &VOTE_COLUMNS)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        let side = match &rec[2] {
            "AYE" => Side::Aye,
            "NO" => Side::No,
            "PAIR" => Side::Pair,
            other => return Err(mismatch(path, format!("unknown side {other:?}"))),
        };
        out.push(DivisionVote {
            date: parse_ymd(path, &rec[0])?,
            div_num: rec[1].parse().map_err(|_| mismatch(path, format!("bad div_num {:?}", &rec[1])))?,
            side,
            voter_name: rec[3].to_string(),
        });
    }
    Ok(out)
}

pub fn write_divisions(records: &[DivisionRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    let (data, votes) = (dir.join(DIVISIONS_FILE), dir.join(VOTES_FILE));
    write_divisions_parquet(records, &data)?;
    write_votes_csv(records, &votes)?;
    Ok(vec![data, votes])
}
