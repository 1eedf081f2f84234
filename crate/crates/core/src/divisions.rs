//! Recorded votes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::attribution::AttributedStatement;
use crate::text::normalize_whitespace;
use crate::xml::{NodeId, TranscriptDocument, Tree};

pub const HOUSE_DIVIDED: &str = "The House divided.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionRecord {
    pub date: NaiveDate,
    pub div_num: u32,
    pub time_stamp: Option<String>,
    pub num_votes_ayes: u32,
    pub num_votes_noes: u32,
    pub num_votes_pairs: u32,
    pub names_ayes: Vec<String>,
    pub names_noes: Vec<String>,
    pub names_pairs: Vec<String>,
    pub result: String,
}

impl DivisionRecord {
    pub fn is_consistent(&self) -> bool {
        self.num_votes_ayes as usize == self.names_ayes.len()
            && self.num_votes_noes as usize == self.names_noes.len()
            && self.num_votes_pairs as usize == self.names_pairs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Aye,
    No,
    Pair,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Aye => "AYE",
            Side::No => "NO",
            Side::Pair => "PAIR",
        }
    }
}

/// One voter per row, for consumers that cannot hold list columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionVote {
    pub date: NaiveDate,
    pub div_num: u32,
    pub side: Side,
    pub voter_name: String,
}

pub fn flatten_votes(records: &[DivisionRecord]) -> Vec<DivisionVote> {
    let mut out = Vec::new();
    for r in records {
        for (side, names) in [
            (Side::Aye, &r.names_ayes),
            (Side::No, &r.names_noes),
            (Side::Pair, &r.names_pairs),
        ] {
            out.extend(names.iter().map(|n| DivisionVote {
                date: r.date,
                div_num: r.div_num,
                side,
                voter_name: n.clone(),
            }));
        }
    }
    out
}

fn side(tree: &Tree, data: Option<NodeId>, tag: &str) -> (Vec<String>, Option<String>) {
    let Some(node) = data.and_then(|d| tree.child_element(d, tag)) else {
        return (Vec::new(), None);
    };
    let names = tree
        .descendants(node)
        .filter(|&n| tree.is(n, "name"))
        .map(|n| normalize_whitespace(&tree.text_content(n)))
        .filter(|s| !s.is_empty())
        .collect();
    (names, tree.child_text(node, "num.votes"))
}

fn bracketed_time(text: &str) -> Option<String> {
    let open = text.find('[')?;
    let close = text[open..].find(']')? + open;
    let inner = text[open + 1..close].trim();
    (!inner.is_empty() && inner.chars().all(|c| c.is_ascii_digit() || c == ':' || c == '.'))
        .then(|| inner.to_string())
}

/// Every division under the Chamber, numbered from 1. Name lists are
/// trusted over transcribed counts; each disagreement yields a note.
pub fn parse_divisions(doc: &TranscriptDocument, date: NaiveDate) -> (Vec<DivisionRecord>, Vec<String>) {
    let tree = doc.tree();
    let mut out = Vec::new();
    let mut notes = Vec::new();
    let Ok(root) = doc.chamber_root() else {
        return (out, notes);
    };
    for (i, div) in tree.select(root, "//division").into_iter().enumerate() {
        let div_num = i as u32 + 1;
        let header = tree.child_element(div, "division.header");
        let time_stamp = header.and_then(|h| {
            tree.child_text(h, "time.stamp")
                .or_else(|| bracketed_time(&tree.text_content(h)))
        });
        let data = tree.child_element(div, "division.data");
        let (names_ayes, ayes_count) = side(tree, data, "ayes");
        let (names_noes, noes_count) = side(tree, data, "noes");
        let (names_pairs, pairs_count) = side(tree, data, "pairs");
        for (label, names, count) in [
            ("ayes", &names_ayes, &ayes_count),
            ("noes", &names_noes, &noes_count),
            ("pairs", &names_pairs, &pairs_count),
        ] {
            if let Some(c) = count {
                if c.trim().parse::<usize>().ok() != Some(names.len()) {
                    notes.push(format!(
                        "MalformedDivision: division {div_num} {label} count {c:?} but {} names listed",
                        names.len()
                    ));
                }
            }
        }
        let result = tree
            .child_element(div, "division.result")
            .map(|r| normalize_whitespace(&tree.flatten(r, |_, _| false)))
            .unwrap_or_default();
        out.push(DivisionRecord {
            date,
            div_num,
            time_stamp,
            num_votes_ayes: names_ayes.len() as u32,
            num_votes_noes: names_noes.len() as u32,
            num_votes_pairs: names_pairs.len() as u32,
            names_ayes,
            names_noes,
            names_pairs,
            result,
        });
    }
    (out, notes)
}

/// `div_flag` is 1 exactly where the body announces a division.
pub fn flag_division_rows(records: &mut [AttributedStatement]) {
    for r in records {
        r.div_flag = r.raw.body.contains(HOUSE_DIVIDED) as u8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xml::parse_document;

    const DAY: &str = "<hansard><session.header><date>2020-02-25</date></session.header><chamber.xscript><debate>\
        <division><division.header><time.stamp>16:05:00</time.stamp><para>The House divided. [16:05]</para></division.header>\
        <division.data><ayes><num.votes>4</num.votes><title>AYES</title><names><name>Albanese, A.</name><name>Bandt, A.</name><name>Katter, R.</name></names></ayes>\
        <noes><num.votes>1</num.votes><names><name>Costello, P.</name></names></noes></division.data>\
        <division.result><para>Question agreed to.</para></division.result></division>\
        <division><division.header><para>The House divided. [17:10]</para></division.header></division>\
        </debate></chamber.xscript></hansard>";

    fn d() -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, 2, 25).unwrap()
    }

    #[test]
    fn lists_win_over_counts() {
        let doc = parse_document(DAY.as_bytes()).unwrap();
        let (divs, notes) = parse_divisions(&doc, d());
        assert_eq!(divs.len(), 2);
        assert_eq!(divs[0].num_votes_ayes, 3);
        assert_eq!(divs[0].num_votes_noes, 1);
        assert_eq!(divs[0].num_votes_pairs, 0);
        assert!(divs[0].names_pairs.is_empty());
        assert_eq!(divs[0].time_stamp.as_deref(), Some("16:05:00"));
        assert_eq!(divs[0].result, "Question agreed to.");
        assert_eq!(divs[1].time_stamp.as_deref(), Some("17:10"));
        assert_eq!(divs[1].div_num, 2);
        assert!(divs.iter().all(DivisionRecord::is_consistent));
        assert_eq!(notes.len(), 1);
        assert_eq!(flatten_votes(&divs).len(), 4);
    }

    #[test]
    fn no_divisions() {
        let doc = parse_document(b"<hansard><session.header><date>2020-02-25</date></session.header><chamber.xscript/></hansard>").unwrap();
        assert!(parse_divisions(&doc, d()).0.is_empty());
    }
}
