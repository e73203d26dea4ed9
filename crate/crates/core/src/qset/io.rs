//! Universe description files.
//!
//! ```text
//! qset {
//!   species electron 3
//!   macro a
//!   sub 2 {
//!     species proton 1
//!   }
//! }
//! ```
//!
//! Serialization is canonical (species and macro ids sorted, nested
//! classes in stored order), so serialize → parse → serialize is a
//! byte-identical round trip.

use super::{MacroId, QSet, QuasiCardinal, Species};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UniverseParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("invalid count `{0}`")]
    InvalidCount(String),
    #[error("trailing input after closing brace")]
    TrailingInput,
}

/// Renders a quasi-set in the universe file format.
pub fn serialize_universe(q: &QSet) -> String {
    let mut out = String::new();
    write_block(q, 0, &mut out);
    out.push('\n');
    out
}

fn write_block(q: &QSet, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let inner = "  ".repeat(depth + 1);
    out.push_str(&pad);
    out.push_str("qset {\n");
    for (s, c) in q.micro_classes() {
        out.push_str(&format!("{inner}species {} {}\n", s.label(), c));
    }
    for id in q.macro_ids() {
        out.push_str(&format!("{inner}macro {}\n", id.id()));
    }
    for (rep, m) in q.sub_classes() {
        out.push_str(&format!("{inner}sub {m} "));
        let mut nested = String::new();
        write_block(rep, depth + 1, &mut nested);
        // the nested block starts inline after "sub N "
        out.push_str(nested.trim_start());
        out.push('\n');
    }
    out.push_str(&pad);
    out.push('}');
}

/// Parses a universe description file.
pub fn parse_universe(text: &str) -> Result<QSet, UniverseParseError> {
    let spaced = text.replace('{', " { ").replace('}', " } ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    let mut pos = 0;
    let q = parse_block(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(UniverseParseError::TrailingInput);
    }
    Ok(q)
}

fn expect(tokens: &[&str], pos: &mut usize, want: &str) -> Result<(), UniverseParseError> {
    let tok = next(tokens, pos)?;
    if tok == want {
        Ok(())
    } else {
        Err(UniverseParseError::UnexpectedToken(tok.to_string()))
    }
}

fn next<'a>(tokens: &[&'a str], pos: &mut usize) -> Result<&'a str, UniverseParseError> {
    let tok = tokens.get(*pos).ok_or(UniverseParseError::UnexpectedEnd)?;
    *pos += 1;
    Ok(tok)
}

fn parse_count(tok: &str) -> Result<QuasiCardinal, UniverseParseError> {
    tok.parse()
        .map_err(|_| UniverseParseError::InvalidCount(tok.to_string()))
}

fn parse_block(tokens: &[&str], pos: &mut usize) -> Result<QSet, UniverseParseError> {
    expect(tokens, pos, "qset")?;
    expect(tokens, pos, "{")?;
    let mut q = QSet::empty();
    loop {
        match next(tokens, pos)? {
            "}" => return Ok(q),
            "species" => {
                let label = next(tokens, pos)?;
                let count = parse_count(next(tokens, pos)?)?;
                q = q.with_micro(Species::new(label), count);
            }
            "macro" => {
                let id = next(tokens, pos)?;
                q = q.with_macro(MacroId::new(id));
            }
            "sub" => {
                let mult = parse_count(next(tokens, pos)?)?;
                let rep = parse_block(tokens, pos)?;
                q = q.with_sub(rep, mult);
            }
            other => return Err(UniverseParseError::UnexpectedToken(other.to_string())),
        }
    }
}
