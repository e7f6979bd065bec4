//! Parser for the question DSL.
//!
//! ```text
//! question = "weight" | "could(self)"
//!          | "other(" question ")" | "you(" question ")"
//!          | "could(" question ")" | "avoid(opposite," question ")"
//!          | "restrict(" setspec "," question ")"
//! setspec  = "{w,w" sign integer "}" | "{" integer ",w}"
//! sign     = "+" | "-"
//! ```
//!
//! Whitespace is insignificant between tokens; keywords are lowercase and
//! may not be split. Parsing consumes the whole input or fails with a byte
//! offset, never with a partial result.

use std::fmt;

use thiserror::Error;

use crate::question::Question;
use crate::space::Value;
use crate::template::SetTemplate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

pub fn parse(text: &str) -> Result<Question, ParseError> {
    let mut cur = Cursor { src: text, pos: 0 };
    let q = question(&mut cur)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    Ok(q)
}

/// Parses a bare set template such as `{w,w+10}` or `{0,w}`, consuming
/// the whole input. For templates configured on their own, outside a
/// `restrict(...)` question.
pub fn parse_template(text: &str) -> Result<SetTemplate, ParseError> {
    let mut cur = Cursor { src: text, pos: 0 };
    let template = setspec(&mut cur)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    Ok(template)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Describes the token starting at the cursor, for error messages.
    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(c) if c.is_ascii_alphabetic() => {
                format!("\"{}\"", self.word_at(self.pos))
            }
            Some(c) => format!("\"{c}\""),
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    fn word_at(&self, start: usize) -> &'a str {
        let rest = &self.src[start..];
        let end = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        &rest[..end]
    }

    /// Reads a lowercase word; the cursor moves only on success.
    fn word(&mut self) -> Option<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let w = self.word_at(start);
        if w.is_empty() {
            None
        } else {
            self.pos += w.len();
            Some((w, start))
        }
    }

    fn expect(&mut self, token: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(token) {
            self.pos += token.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("\"{token}\"")))
        }
    }

    /// Unsigned digit run parsed as a value.
    fn digits(&mut self) -> Result<(Value, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("an integer"));
        }
        let text = &rest[..end];
        let value: Value = text.parse().map_err(|_| ParseError {
            offset: start,
            expected: "an integer small enough to represent".to_string(),
            found: format!("\"{text}\""),
        })?;
        self.pos = start + end;
        Ok((value, start))
    }
}

fn question(cur: &mut Cursor) -> Result<Question, ParseError> {
    cur.skip_ws();
    let Some((word, start)) = cur.word() else {
        return Err(cur.error("a question keyword"));
    };
    match word {
        "weight" => Ok(Question::Direct),
        "other" => wrapped(cur, Question::AskOther),
        "you" => wrapped(cur, Question::WouldSayYou),
        "could" => could(cur),
        "avoid" => {
            cur.expect('(')?;
            let Some((w, at)) = cur.word() else {
                return Err(cur.error("\"opposite\""));
            };
            if w != "opposite" {
                return Err(ParseError {
                    offset: at,
                    expected: "\"opposite\"".to_string(),
                    found: format!("\"{w}\""),
                });
            }
            cur.expect(',')?;
            let inner = question(cur)?;
            cur.expect(')')?;
            Ok(Question::OppositeAvoids(Box::new(inner)))
        }
        "restrict" => {
            cur.expect('(')?;
            let template = setspec(cur)?;
            cur.expect(',')?;
            let inner = question(cur)?;
            cur.expect(')')?;
            Ok(Question::Restricted(template, Box::new(inner)))
        }
        _ => Err(ParseError {
            offset: start,
            expected: "one of weight, other, you, could, avoid, restrict".to_string(),
            found: format!("\"{word}\""),
        }),
    }
}

fn wrapped(
    cur: &mut Cursor,
    build: impl FnOnce(Box<Question>) -> Question,
) -> Result<Question, ParseError> {
    cur.expect('(')?;
    let inner = question(cur)?;
    cur.expect(')')?;
    Ok(build(Box::new(inner)))
}

fn could(cur: &mut Cursor) -> Result<Question, ParseError> {
    cur.expect('(')?;
    cur.skip_ws();
    let before = cur.pos;
    if let Some(("self", _)) = cur.word() {
        cur.expect(')')?;
        return Ok(Question::CouldProvideSelf);
    }
    cur.pos = before;
    let inner = question(cur)?;
    cur.expect(')')?;
    Ok(Question::CouldProvide(Box::new(inner)))
}

fn setspec(cur: &mut Cursor) -> Result<SetTemplate, ParseError> {
    cur.expect('{')?;
    cur.skip_ws();
    match cur.peek() {
        Some('w') => {
            expect_w(cur)?;
            cur.expect(',')?;
            expect_w(cur)?;
            cur.skip_ws();
            let negative = match cur.peek() {
                Some('+') => false,
                Some('-') => true,
                _ => return Err(cur.error("\"+\" or \"-\"")),
            };
            cur.pos += 1;
            let (magnitude, at) = cur.digits()?;
            let delta = if negative { -magnitude } else { magnitude };
            if delta == 0 {
                return Err(ParseError {
                    offset: at,
                    expected: "a nonzero offset".to_string(),
                    found: "\"0\"".to_string(),
                });
            }
            cur.expect('}')?;
            Ok(SetTemplate::OffsetPair { delta })
        }
        Some(c) if c == '-' || c.is_ascii_digit() => {
            let negative = c == '-';
            if negative {
                cur.pos += 1;
            }
            let (magnitude, _) = cur.digits()?;
            let value = if negative { -magnitude } else { magnitude };
            cur.expect(',')?;
            expect_w(cur)?;
            cur.expect('}')?;
            Ok(SetTemplate::ConstPair { value })
        }
        _ => Err(cur.error("\"w\" or an integer")),
    }
}

fn expect_w(cur: &mut Cursor) -> Result<(), ParseError> {
    cur.skip_ws();
    let at = cur.pos;
    match cur.word() {
        Some(("w", _)) => Ok(()),
        Some((other, start)) => Err(ParseError {
            offset: start,
            expected: "\"w\"".to_string(),
            found: format!("\"{other}\""),
        }),
        None => Err(ParseError {
            offset: at,
            expected: "\"w\"".to_string(),
            found: Cursor { src: cur.src, pos: at }.found(),
        }),
    }
}

impl fmt::Debug for Cursor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cursor at {} of {:?}", self.pos, self.src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(text: &str) {
        let q = parse(text).unwrap();
        assert_eq!(q.to_string(), text);
        assert_eq!(parse(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn canonical_forms_roundtrip() {
        roundtrip("weight");
        roundtrip("could(self)");
        roundtrip("other(weight)");
        roundtrip("you(could(weight))");
        roundtrip("avoid(opposite, weight)");
        roundtrip("restrict({w,w+10}, weight)");
        roundtrip("restrict({w,w-3}, could(self))");
        roundtrip("restrict({0,w}, other(weight))");
        roundtrip("restrict({-7,w}, weight)");
    }

    #[test]
    fn whitespace_between_tokens_is_ignored() {
        assert_eq!(
            parse("  restrict ( { w , w + 10 } , other ( weight ) )  ").unwrap(),
            parse("restrict({w,w+10},other(weight))").unwrap()
        );
        assert_eq!(
            parse("avoid(opposite,weight)").unwrap(),
            parse("avoid( opposite , weight )").unwrap()
        );
    }

    #[test]
    fn keywords_may_not_be_split() {
        assert!(parse("wei ght").is_err());
        assert!(parse("could(se lf)").is_err());
        // offset 0: the whole word "weightx" is not a keyword
        let err = parse("weightx").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn unclosed_question_reports_the_missing_paren() {
        let err = parse("other(weight").unwrap_err();
        assert_eq!(err.offset, 12);
        assert_eq!(err.expected, "\")\"");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn trailing_input_is_an_error() {
        let err = parse("weight weight").unwrap_err();
        assert_eq!(err.offset, 7);
        assert_eq!(err.expected, "end of input");
    }

    #[test]
    fn zero_offset_is_rejected_with_its_position() {
        let err = parse("restrict({w,w+0}, weight)").unwrap_err();
        assert_eq!(err.expected, "a nonzero offset");
        assert_eq!(err.offset, 14);
    }

    #[test]
    fn setspec_requires_the_literal_w() {
        let err = parse("restrict({w,x+1}, weight)").unwrap_err();
        assert_eq!(err.offset, 12);
        assert_eq!(err.expected, "\"w\"");
    }

    #[test]
    fn unknown_keyword_names_the_alternatives() {
        let err = parse("maybe(weight)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.expected.contains("weight"));
        assert_eq!(err.found, "\"maybe\"");
    }

    #[test]
    fn sign_is_required_for_offset_pairs() {
        let err = parse("restrict({w,w10}, weight)").unwrap_err();
        // after the second w the sign must follow
        assert_eq!(err.expected, "\"+\" or \"-\"");
    }

    #[test]
    fn empty_input_asks_for_a_question() {
        let err = parse("   ").unwrap_err();
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn bare_templates_parse_on_their_own() {
        assert_eq!(
            parse_template("{w,w+10}").unwrap(),
            SetTemplate::OffsetPair { delta: 10 }
        );
        assert_eq!(
            parse_template(" {-3, w} ").unwrap(),
            SetTemplate::ConstPair { value: -3 }
        );
        assert!(parse_template("{w,w+1} extra").is_err());
        assert!(parse_template("weight").is_err());
    }
}
