use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::document::TranscriptDocument;
use super::tree::{NodeId, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Venue {
    Chamber,
    FederationChamber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProceedingKind {
    BusinessStart,
    Debate,
    Subdebate1,
    Subdebate2,
    Speech,
    Question,
    Answer,
    InterjectionSkeleton,
    ContinuationSkeleton,
    Division,
}

impl ProceedingKind {
    pub fn from_tag(tag: &str) -> Option<ProceedingKind> {
        Some(match tag {
            "business.start" => ProceedingKind::BusinessStart,
            "debate" => ProceedingKind::Debate,
            "subdebate.1" => ProceedingKind::Subdebate1,
            "subdebate.2" => ProceedingKind::Subdebate2,
            "speech" => ProceedingKind::Speech,
            "question" => ProceedingKind::Question,
            "answer" => ProceedingKind::Answer,
            "interjection" => ProceedingKind::InterjectionSkeleton,
            "continuation" => ProceedingKind::ContinuationSkeleton,
            "division" => ProceedingKind::Division,
            _ => return None,
        })
    }

    /// Speech, question and answer elements each open a new speech number.
    pub fn opens_speech(self) -> bool {
        matches!(
            self,
            ProceedingKind::Speech | ProceedingKind::Question | ProceedingKind::Answer
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProceedingNode {
    pub venue: Venue,
    /// Taken from `answers.to.questions` rather than a debate venue.
    pub in_writing: bool,
    pub kind: ProceedingKind,
    pub path: String,
    pub node: NodeId,
}

/// Chamber proceedings, then the second venue, then questions in writing,
/// each in document order. Missing venues contribute nothing.
pub fn enumerate_proceedings(doc: &TranscriptDocument) -> Vec<ProceedingNode> {
    let tree = doc.tree();
    let mut out = Vec::new();
    if let Ok(root) = doc.chamber_root() {
        collect(tree, root, Venue::Chamber, false, &mut out);
    }
    if let Some(root) = doc.fedchamb_root() {
        collect(tree, root, Venue::FederationChamber, false, &mut out);
    }
    if let Some(root) = doc.answers_root() {
        collect(tree, root, Venue::Chamber, true, &mut out);
    }
    out
}

fn collect(tree: &Tree, root: NodeId, venue: Venue, in_writing: bool, out: &mut Vec<ProceedingNode>) {
    for n in tree.descendants(root) {
        let Some(kind) = tree.name(n).and_then(ProceedingKind::from_tag) else {
            continue;
        };
        if in_writing && !matches!(kind, ProceedingKind::Question | ProceedingKind::Answer) {
            continue;
        }
        out.push(ProceedingNode {
            venue,
            in_writing,
            kind,
            path: tree.path(n),
            node: n,
        });
    }
}
