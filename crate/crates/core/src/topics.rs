//! Debate and sub-debate titles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::xml::TranscriptDocument;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebateTopic {
    pub date: NaiveDate,
    pub item_index: u32,
    pub title: String,
    pub page_no: Option<String>,
}

pub const TOPIC_PATH: &str = "//debate/debateinfo | //subdebate.1/subdebateinfo";

/// One row per debate or first-level sub-debate info node, in document
/// order. The first page number child is used.
pub fn extract_debate_topics(doc: &TranscriptDocument, date: NaiveDate) -> (Vec<DebateTopic>, Vec<String>) {
    let tree = doc.tree();
    let mut notes = Vec::new();
    let topics = tree
        .select(tree.document(), TOPIC_PATH)
        .into_iter()
        .enumerate()
        .map(|(i, info)| {
            let title = tree.child_text(info, "title").unwrap_or_else(|| {
                notes.push(format!("MissingTitle: info node at byte {}", tree.offset(info)));
                String::new()
            });
            DebateTopic {
                date,
                item_index: i as u32 + 1,
                title,
                page_no: tree.child_text(info, "page.no"),
            }
        })
        .collect();
    (topics, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xml::parse_document;

    #[test]
    fn first_page_and_order() {
        let xml = "<hansard><session.header><date>2020-02-25</date></session.header><chamber.xscript>\
            <debate><debateinfo><title>BILLS</title><page.no>10</page.no><page.no>10</page.no></debateinfo>\
            <subdebate.1><subdebateinfo><title>Second Reading</title><page.no>11</page.no></subdebateinfo>\
            <subdebate.2><subdebateinfo><title>Skipped</title></subdebateinfo></subdebate.2></subdebate.1></debate>\
            <debate><debateinfo><page.no>12</page.no></debateinfo></debate></chamber.xscript></hansard>";
        let doc = parse_document(xml.as_bytes()).unwrap();
        let date = NaiveDate::from_ymd_opt(2020, 2, 25).unwrap();
        let (t, notes) = extract_debate_topics(&doc, date);
        let rows: Vec<_> = t.iter().map(|t| (t.item_index, t.title.as_str(), t.page_no.as_deref())).collect();
        assert_eq!(rows, [(1, "BILLS", Some("10")), (2, "Second Reading", Some("11")), (3, "", Some("12"))]);
        assert_eq!(notes.len(), 1);
    }
}
