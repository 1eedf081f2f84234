//! Document tree, schema eras and proceeding enumeration.

mod document;
mod proceedings;
mod tree;

pub use document::{
    detect_era, parse_document, parse_session_date, EraProbe, SchemaEra, SessionHeader,
    TranscriptDocument, FIRST_SITTING, LAST_SITTING,
};
#[allow(unused_imports)]
pub(crate) use document::{ANSWERS, CHAMBER, FEDCHAMB, MAINCOMM};
pub use proceedings::{enumerate_proceedings, ProceedingKind, ProceedingNode, Venue};
pub use tree::{NodeData, NodeId, Tree};
