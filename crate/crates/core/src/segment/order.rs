use alloc::vec::Vec;

use super::RawStatement;

/// Number speeches 1.. by change of source element. Rows without a source
/// (preambles, business start) join the next speech, or the last one when
/// nothing follows.
pub fn number_speeches(statements: &mut [RawStatement]) {
    let mut current = 0u32;
    let mut last_source = None;
    for st in statements.iter_mut() {
        if let Some(src) = st.source {
            if last_source != Some(src) {
                current += 1;
                last_source = Some(src);
            }
            st.speech_no = current;
        } else {
            st.speech_no = 0;
        }
    }
    let mut next = 0u32;
    for st in statements.iter_mut().rev() {
        if st.source.is_some() {
            next = st.speech_no;
        } else {
            st.speech_no = next;
        }
    }
    let mut prev = 1u32;
    for st in statements.iter_mut() {
        if st.speech_no == 0 {
            st.speech_no = prev;
        }
        prev = st.speech_no;
    }
}

/// Bind questions-in-writing rows to the bottom, keeping relative order
/// otherwise, and number statements within each speech from 0. The final
/// row order is the returned vector's order.
pub fn assign_order(statements: Vec<RawStatement>) -> Vec<RawStatement> {
    let (mut out, written): (Vec<_>, Vec<_>) = statements.into_iter().partition(|s| !s.in_writing);
    out.extend(written);
    let mut prev = None;
    let mut seq = 0u32;
    for st in out.iter_mut() {
        if prev == Some(st.speech_no) {
            seq += 1;
        } else {
            seq = 0;
            prev = Some(st.speech_no);
        }
        st.seq_in_speech = seq;
    }
    out
}
