use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{RawStatement, StatementKind};

pub const STAGE_DIRECTION: &str = "stage direction";

pub const DEFAULT_STAGE_DIRECTIONS: &[&str] = &[
    "Bill read a second time",
    "Bill read a third time",
    "Question agreed to",
    "Question negatived",
    "Question resolved in the affirmative",
    "Question resolved in the negative",
    "Debate adjourned",
    "Leave granted",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageDirectionLexicon {
    phrases: Vec<String>,
}

impl Default for StageDirectionLexicon {
    fn default() -> Self {
        Self::new(DEFAULT_STAGE_DIRECTIONS.iter().map(|s| s.to_string()).collect())
    }
}

impl StageDirectionLexicon {
    pub fn new(mut phrases: Vec<String>) -> Self {
        phrases.retain(|p| !p.trim().is_empty());
        for p in &mut phrases {
            *p = p.trim().to_string();
        }
        phrases.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        phrases.dedup();
        StageDirectionLexicon { phrases }
    }

    /// One phrase per line; blank lines are ignored.
    pub fn parse(config: &str) -> Self {
        Self::new(config.lines().map(ToString::to_string).collect())
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    /// Split trailing stage directions off `body`. Returns what is left of
    /// the body and the directions in reading order.
    pub fn peel<'a>(&self, body: &'a str) -> (&'a str, Vec<&'a str>) {
        let mut rest = body.trim_end();
        let mut found = Vec::new();
        'outer: loop {
            for p in &self.phrases {
                let with_stop = rest.ends_with('.') && rest[..rest.len() - 1].ends_with(p.as_str());
                let len = if with_stop {
                    p.len() + 1
                } else if rest.ends_with(p.as_str()) {
                    p.len()
                } else {
                    continue;
                };
                let cut = rest.len() - len;
                let before = rest[..cut].trim_end();
                let at_boundary = match before.chars().next_back() {
                    None => true,
                    Some(c) => {
                        matches!(c, '—' | '–')
                            || (cut > before.len()
                                && matches!(c, '.' | '!' | '?' | ';' | ':' | ')' | '-' | '"' | '”' | '\'' | '’'))
                    }
                };
                if at_boundary {
                    found.push(&rest[cut..]);
                    rest = before;
                    continue 'outer;
                }
            }
            break;
        }
        found.reverse();
        (rest, found)
    }
}

/// Move trailing stage directions of each statement onto rows of their own,
/// placed right after it in the same speech. A statement that is nothing but
/// stage directions becomes stage-direction rows itself.
pub fn separate_stage_directions(
    statements: Vec<RawStatement>,
    lexicon: &StageDirectionLexicon,
) -> Vec<RawStatement> {
    let mut out = Vec::with_capacity(statements.len());
    for st in statements {
        if matches!(st.kind, StatementKind::BusinessStart | StatementKind::StageDirection)
            || st.in_writing
        {
            out.push(st);
            continue;
        }
        let (rest, directions) = lexicon.peel(&st.body);
        if directions.is_empty() {
            out.push(st);
            continue;
        }
        let directions: Vec<String> = directions.into_iter().map(ToString::to_string).collect();
        let rest = rest.to_string();
        let template = st.stage_direction_row(String::new());
        if !rest.is_empty() {
            out.push(RawStatement { body: rest, ..st });
        }
        for d in directions {
            out.push(RawStatement { body: d, ..template.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peels_in_reading_order() {
        let lex = StageDirectionLexicon::default();
        let (rest, found) = lex.peel("I commend the bill. Question agreed to. Bill read a second time");
        assert_eq!(rest, "I commend the bill.");
        assert_eq!(found, ["Question agreed to.", "Bill read a second time"]);
    }

    #[test]
    fn whole_body() {
        let lex = StageDirectionLexicon::default();
        assert_eq!(lex.peel("Debate adjourned"), ("", alloc::vec!["Debate adjourned"]));
    }

    #[test]
    fn needs_boundary() {
        let lex = StageDirectionLexicon::default();
        let (rest, found) = lex.peel("I hope the debate adjourned. The Debate adjourned");
        assert!(found.is_empty());
        assert_eq!(rest, "I hope the debate adjourned. The Debate adjourned");
        let (_, found) = lex.peel("No mention here");
        assert!(found.is_empty());
    }

    #[test]
    fn longest_first() {
        let lex = StageDirectionLexicon::new(alloc::vec!["agreed to".into(), "Question agreed to".into()]);
        let (rest, found) = lex.peel("Yes. Question agreed to.");
        assert_eq!((rest, found), ("Yes.", alloc::vec!["Question agreed to."]));
    }

    #[test]
    fn config_lines() {
        let lex = StageDirectionLexicon::parse("Debate adjourned\n\n  Leave granted  \n");
        assert_eq!(lex.phrases(), ["Debate adjourned", "Leave granted"]);
    }
}
