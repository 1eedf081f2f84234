//! String helpers shared by the parsing passes.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Collapse whitespace runs (including non-breaking spaces and newlines) to a
/// single space and trim both ends.
pub fn normalize_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for ch in s.chars() {
        if is_space(ch) {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(ch);
        }
    }
    out
}

pub(crate) fn is_space(ch: char) -> bool {
    ch.is_whitespace() || ch == '\u{a0}' || ch == '\u{202f}' || ch == '\u{2007}'
}

/// True for the dash family that Hansard uses as a statement separator.
pub fn is_dash(ch: char) -> bool {
    matches!(ch, '—' | '–' | '-' | '―' | '‒')
}

/// Strip diacritics and lowercase, for surname comparison.
pub fn fold_key(s: &str) -> String {
    s.nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .map(|c| if c == '’' { '\'' } else { c })
        .collect()
}

/// Replace typographic apostrophes and quotes with their ASCII forms.
pub fn straighten_quotes(s: &str) -> Cow<'_, str> {
    if s.contains(['’', '‘', '“', '”']) {
        Cow::Owned(
            s.chars()
                .map(|c| match c {
                    '’' | '‘' => '\'',
                    '“' | '”' => '"',
                    other => other,
                })
                .collect(),
        )
    } else {
        Cow::Borrowed(s)
    }
}

/// Hansard-style capitalisation of a surname: everything upper case except the
/// lower-case `c` of a leading `Mc` in each name part (`McCormack` ->
/// `McCORMACK`, `O'Dowd` -> `O'DOWD`).
pub fn hansard_upper(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut word_start = true;
    let chars: Vec<char> = name.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if word_start
            && ch == 'M'
            && chars.get(i + 1) == Some(&'c')
            && chars.get(i + 2).is_some_and(|c| c.is_alphabetic())
        {
            out.push_str("Mc");
            i += 2;
            word_start = false;
            continue;
        }
        out.extend(ch.to_uppercase());
        word_start = matches!(ch, ' ' | '-' | '\'' | '’');
        i += 1;
    }
    out
}

/// Decode raw transcript bytes as UTF-8, falling back to Latin-1 when the
/// bytes are not valid UTF-8. A UTF-8 byte order mark is dropped.
pub fn decode_transcript(bytes: &[u8]) -> (Cow<'_, str>, bool) {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    match core::str::from_utf8(bytes) {
        Ok(s) => (Cow::Borrowed(s), false),
        Err(_) => (Cow::Owned(bytes.iter().map(|&b| b as char).collect()), true),
    }
}

/// Convert a (1-based) row/column pair reported by the XML parser into a byte
/// offset into `text`.
pub(crate) fn byte_offset(text: &str, row: u32, col: u32) -> usize {
    let mut offset = 0;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        if idx + 1 == row as usize {
            let col_bytes: usize = line
                .chars()
                .take(col.saturating_sub(1) as usize)
                .map(char::len_utf8)
                .sum();
            return offset + col_bytes;
        }
        offset += line.len();
    }
    text.len()
}
