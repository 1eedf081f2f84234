use alloc::string::String;
use alloc::vec::Vec;

use crate::text::fold_key;
use crate::xml::Venue;

use super::lexicon::{strip_parentheticals, NameVariantLexicon};
use super::split::{split_text, Fragment};
use super::talker::TalkerFields;
use super::{RawStatement, StatementKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkeletonKind {
    Opening,
    Interjection,
    Continuation,
}

/// A talker from the speech's `talk.start` or from one of the empty
/// interjection/continuation elements that follow `talk.text`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonEntry {
    pub kind: SkeletonKind,
    pub fields: TalkerFields,
    pub key: Option<String>,
}

impl SkeletonEntry {
    fn same_speaker(&self, frag: &Fragment) -> bool {
        if let (Some(a), Some(b)) = (&frag.key, &self.key) {
            return a == b;
        }
        let Some(surface) = &frag.surface else {
            return false;
        };
        let want = fold_key(&strip_parentheticals(surface));
        [&self.fields.display_name, &self.fields.name]
            .into_iter()
            .flatten()
            .any(|n| fold_key(&strip_parentheticals(n)) == want)
    }
}

/// Split one `talk.text` into statements. The first fragment belongs to the
/// opener unless it is visibly someone else. Later fragments take talker
/// details from the skeleton, matched greedily in order by speaker.
pub fn split_modern_speech(
    talk_text: &str,
    lexicon: &NameVariantLexicon,
    opener: &SkeletonEntry,
    skeleton: &[SkeletonEntry],
    venue: Venue,
) -> Vec<RawStatement> {
    let fragments = split_text(talk_text, lexicon, true);
    let mut out = Vec::with_capacity(fragments.len());
    let mut cursor = 0usize;
    for (i, frag) in fragments.into_iter().enumerate() {
        let opening = i == 0 && (frag.surface.is_none() || opener.same_speaker(&frag));
        let surface = frag
            .surface
            .clone()
            .or_else(|| opener.fields.surface().map(String::from))
            .unwrap_or_default();
        let mut st = RawStatement::new(StatementKind::Opening, venue, surface, frag.body.clone());
        st.key = frag.key.clone();
        st.presiding = frag.presiding;
        st.general = frag.general;
        st.page_no = opener.fields.page_no.clone();
        if opening {
            st.presiding |= opener.fields.is_presiding();
            st.talker = Some(opener.fields.clone());
            st.time_stamp = opener.fields.time.clone();
            st.key = st.key.or_else(|| opener.key.clone());
        } else {
            let hit = skeleton[cursor.min(skeleton.len())..]
                .iter()
                .position(|e| e.same_speaker(&frag))
                .map(|p| cursor + p);
            match hit {
                Some(j) => {
                    let e = &skeleton[j];
                    cursor = j + 1;
                    st.kind = match e.kind {
                        SkeletonKind::Continuation => StatementKind::Continuation,
                        _ => StatementKind::InterjectionCandidate,
                    };
                    st.presiding |= e.fields.is_presiding();
                    st.talker = Some(e.fields.clone());
                    st.time_stamp = e.fields.time.clone();
                    if e.fields.page_no.is_some() {
                        st.page_no = e.fields.page_no.clone();
                    }
                    st.key = st.key.or_else(|| e.key.clone());
                }
                None => {
                    st.kind = if opener.same_speaker(&frag) {
                        StatementKind::Continuation
                    } else {
                        StatementKind::InterjectionCandidate
                    };
                }
            }
        }
        out.push(st);
    }
    out
}
