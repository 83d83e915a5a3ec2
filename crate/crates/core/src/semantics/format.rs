//! Line-oriented text format for interpretations:
//!
//! ```text
//! domain 2
//! concept A = {0}
//! role R = {(0,1),(1,1)}
//! nominal o = 1
//! ```
//!
//! `#` starts a comment. `domain` must come before everything else.

use std::fmt;
use std::str::FromStr;

use super::{Interpretation, SemanticsError};
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseInterpretationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: SemanticsError },
    #[error("missing `domain N` line")]
    MissingDomain,
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.size)?;
        for (n, s) in &self.concepts {
            writeln!(f, "concept {n} = {s}")?;
        }
        for (n, rel) in &self.roles {
            let pairs: Vec<String> = rel.iter().map(|(a, b)| format!("({a},{b})")).collect();
            writeln!(f, "role {n} = {{{}}}", pairs.join(","))?;
        }
        for (n, e) in &self.nominals {
            writeln!(f, "nominal {n} = {e}")?;
        }
        Ok(())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseInterpretationError {
    ParseInterpretationError::Syntax { line, message: message.into() }
}

fn parse_element(line: usize, s: &str) -> Result<usize, ParseInterpretationError> {
    s.trim().parse().map_err(|_| syntax(line, format!("`{}` is not a domain element", s.trim())))
}

/// Splits `{a,b,c}` into its comma-separated items. Commas inside
/// parentheses do not split.
fn braced_items(line: usize, s: &str) -> Result<Vec<String>, ParseInterpretationError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| syntax(line, "expected a set in braces"))?;
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !items.is_empty() {
        items.push(cur);
    }
    Ok(items.into_iter().map(|i| i.trim().to_owned()).collect())
}

fn parse_pair(line: usize, s: &str) -> Result<(usize, usize), ParseInterpretationError> {
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| syntax(line, format!("`{s}` is not a pair")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| syntax(line, format!("`{s}` is not a pair")))?;
    Ok((parse_element(line, a)?, parse_element(line, b)?))
}

impl FromStr for Interpretation {
    type Err = ParseInterpretationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut interp: Option<Interpretation> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            if keyword == "domain" {
                if interp.is_some() {
                    return Err(syntax(line, "duplicate `domain` line"));
                }
                let size = parse_element(line, rest)?;
                interp = Some(
                    Interpretation::new(size).map_err(|source| ParseInterpretationError::Invalid { line, source })?,
                );
                continue;
            }
            let i = interp.as_mut().ok_or(ParseInterpretationError::MissingDomain)?;
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(line, "expected `=`"))?;
            let name = Name::new(lhs.trim()).map_err(|e| syntax(line, e.to_string()))?;
            let invalid = |source| ParseInterpretationError::Invalid { line, source };
            match keyword {
                "concept" => {
                    let elems = braced_items(line, rhs)?
                        .iter()
                        .map(|e| parse_element(line, e))
                        .collect::<Result<Vec<_>, _>>()?;
                    i.set_concept(name, elems).map_err(invalid)?;
                }
                "role" => {
                    let pairs =
                        braced_items(line, rhs)?.iter().map(|p| parse_pair(line, p)).collect::<Result<Vec<_>, _>>()?;
                    i.set_role(name, pairs).map_err(invalid)?;
                }
                "nominal" => {
                    let e = parse_element(line, rhs)?;
                    i.set_nominal(name, e).map_err(invalid)?;
                }
                other => return Err(syntax(line, format!("unknown statement `{other}`"))),
            }
        }
        interp.ok_or(ParseInterpretationError::MissingDomain)
    }
}
