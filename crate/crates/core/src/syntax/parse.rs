//! Recursive-descent parser for the concept grammar and the TBox file format.
//!
//! ```text
//! C ::= IDENT | "{" IDENT "}" | "top" | "bot" | "not" C
//!     | "(" C "&" C ")" | "(" C "|" C ")" | "(" C "->" C ")"
//!     | ("atleast"|"atmost"|"exactly") NAT R "." C
//!     | ("exists"|"forall") R "." C
//! R ::= IDENT | "inv(" IDENT ")"
//! ```
//!
//! TBox files hold one statement per line: `card atleast NAT : C`,
//! `card atmost NAT : C`, `card all : C` or `gci C => C`. `#` starts a
//! comment. A file is either all `card` or all `gci`.

use num_bigint::BigUint;

use super::surface::{expand_abbreviations, expand_restriction, SurfaceConcept, SurfaceRestriction};
use super::{Concept, Gci, Name, NameError, Role, TBox, TcBox, TiBox, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Unexpected { line: usize, column: usize, expected: String, found: String },
    #[error("{line}:{column}: unknown operator `{operator}`")]
    UnknownOperator { line: usize, column: usize, operator: String },
    #[error("{line}:{column}: count literals must be natural numbers")]
    NegativeCount { line: usize, column: usize },
    #[error("{line}:{column}: {source}")]
    BadName { line: usize, column: usize, source: NameError },
    #[error("line {line}: a TBox file cannot mix `card` and `gci` statements")]
    MixedTBox { line: usize },
    #[error("`{name}` is used as more than one kind of symbol")]
    SignatureClash { name: Name },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Amp,
    Bar,
    Arrow,
    FatArrow,
    Dot,
    Colon,
    Minus,
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, line: usize, first_column: usize) -> Vec<Spanned> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut line = line;
    let mut col = first_column;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, cl) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (tok, width) = match c {
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '.' => (Tok::Dot, 1),
            ':' => (Tok::Colon, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '=' if chars.get(i + 1) == Some(&'>') => (Tok::FatArrow, 2),
            '-' => (Tok::Minus, 1),
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                (Tok::Word(chars[start..j].iter().collect()), j - start)
            }
            other => (Tok::Other(other), 1),
        };
        out.push(Spanned { tok, line: l, column: cl });
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

fn is_nat(w: &str) -> bool {
    w.chars().all(|c| c.is_ascii_digit())
}

impl Parser {
    fn new(toks: Vec<Spanned>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, at: &Spanned, expected: &str) -> Result<T, SyntaxError> {
        if let Tok::Other(c) = at.tok {
            return Err(SyntaxError::UnknownOperator { line: at.line, column: at.column, operator: c.to_string() });
        }
        Err(SyntaxError::Unexpected {
            line: at.line,
            column: at.column,
            expected: expected.to_owned(),
            found: at.tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            self.unexpected(&t, expected)
        }
    }

    fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        let t = self.bump();
        match t.tok {
            Tok::Eof => Ok(()),
            _ => self.unexpected(&t, "end of input"),
        }
    }

    fn name(&mut self, what: &str) -> Result<Name, SyntaxError> {
        let t = self.bump();
        match &t.tok {
            Tok::Word(w) if !is_nat(w) && !KEYWORDS.contains(&w.as_str()) => {
                Name::new(w).map_err(|source| SyntaxError::BadName { line: t.line, column: t.column, source })
            }
            _ => self.unexpected(&t, what),
        }
    }

    fn nat(&mut self) -> Result<BigUint, SyntaxError> {
        let t = self.bump();
        match &t.tok {
            Tok::Word(w) if is_nat(w) => Ok(w.parse().expect("digit string")),
            Tok::Minus => Err(SyntaxError::NegativeCount { line: t.line, column: t.column }),
            _ => self.unexpected(&t, "a natural number"),
        }
    }

    fn role(&mut self) -> Result<Role, SyntaxError> {
        if matches!(&self.peek().tok, Tok::Word(w) if w == "inv") {
            self.bump();
            self.expect(Tok::LParen, "`(` after `inv`")?;
            let name = self.name("a role name")?;
            self.expect(Tok::RParen, "`)`")?;
            Ok(Role { name, inverse: true })
        } else {
            Ok(Role { name: self.name("a role name")?, inverse: false })
        }
    }

    fn concept(&mut self) -> Result<SurfaceConcept, SyntaxError> {
        use SurfaceConcept as S;
        let t = self.peek().clone();
        match &t.tok {
            Tok::Word(w) => match w.as_str() {
                "top" => {
                    self.bump();
                    Ok(S::Top)
                }
                "bot" => {
                    self.bump();
                    Ok(S::Bottom)
                }
                "not" => {
                    self.bump();
                    Ok(S::Not(Box::new(self.concept()?)))
                }
                kw @ ("atleast" | "atmost" | "exactly") => {
                    let kw = kw.to_owned();
                    self.bump();
                    let n = self.nat()?;
                    let r = self.role()?;
                    self.expect(Tok::Dot, "`.`")?;
                    let c = Box::new(self.concept()?);
                    Ok(match kw.as_str() {
                        "atleast" => S::AtLeast(n, r, c),
                        "atmost" => S::AtMost(n, r, c),
                        _ => S::Exactly(n, r, c),
                    })
                }
                kw @ ("exists" | "forall") => {
                    let exists = kw == "exists";
                    self.bump();
                    let r = self.role()?;
                    self.expect(Tok::Dot, "`.`")?;
                    let c = Box::new(self.concept()?);
                    Ok(if exists { S::Exists(r, c) } else { S::Forall(r, c) })
                }
                _ => Ok(S::Atomic(self.name("a concept")?)),
            },
            Tok::LBrace => {
                self.bump();
                let o = self.name("an individual name")?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(S::Nominal(o))
            }
            Tok::LParen => {
                self.bump();
                let lhs = Box::new(self.concept()?);
                let op = self.bump();
                let ctor: fn(Box<S>, Box<S>) -> S = match &op.tok {
                    Tok::Amp => S::And,
                    Tok::Bar => S::Or,
                    Tok::Arrow => S::Implies,
                    Tok::Word(w) => {
                        return Err(SyntaxError::UnknownOperator {
                            line: op.line,
                            column: op.column,
                            operator: w.clone(),
                        })
                    }
                    Tok::Minus | Tok::FatArrow | Tok::Colon | Tok::Dot => {
                        return Err(SyntaxError::UnknownOperator {
                            line: op.line,
                            column: op.column,
                            operator: op.tok.describe().trim_matches('`').to_owned(),
                        })
                    }
                    _ => return self.unexpected(&op, "`&`, `|` or `->`"),
                };
                let rhs = Box::new(self.concept()?);
                self.expect(Tok::RParen, "`)`")?;
                Ok(ctor(lhs, rhs))
            }
            _ => self.unexpected(&t, "a concept"),
        }
    }
}

/// Parses a concept without expanding abbreviations.
pub fn parse_surface_concept(text: &str) -> Result<SurfaceConcept, SyntaxError> {
    let mut p = Parser::new(tokenize(text, 1, 1));
    let c = p.concept()?;
    p.expect_eof()?;
    Ok(c)
}

/// Parses a concept and expands it to core form.
pub fn parse_concept(text: &str) -> Result<Concept, SyntaxError> {
    parse_surface_concept(text).map(|s| expand_abbreviations(&s))
}

enum Statement {
    Card(SurfaceRestriction),
    Gci(Gci),
}

fn statement(p: &mut Parser) -> Result<Statement, SyntaxError> {
    let t = p.bump();
    match &t.tok {
        Tok::Word(w) if w == "card" => {
            let k = p.bump();
            let r = match &k.tok {
                Tok::Word(w) if w == "all" => {
                    p.expect(Tok::Colon, "`:`")?;
                    SurfaceRestriction::All(p.concept()?)
                }
                Tok::Word(w) if w == "atleast" || w == "atmost" => {
                    let at_least = w == "atleast";
                    let n = p.nat()?;
                    p.expect(Tok::Colon, "`:`")?;
                    let c = p.concept()?;
                    if at_least {
                        SurfaceRestriction::AtLeast(n, c)
                    } else {
                        SurfaceRestriction::AtMost(n, c)
                    }
                }
                _ => return p.unexpected(&k, "`atleast`, `atmost` or `all`"),
            };
            p.expect_eof()?;
            Ok(Statement::Card(r))
        }
        Tok::Word(w) if w == "gci" => {
            let lhs = p.concept()?;
            p.expect(Tok::FatArrow, "`=>`")?;
            let rhs = p.concept()?;
            p.expect_eof()?;
            Ok(Statement::Gci(Gci::new(expand_abbreviations(&lhs), expand_abbreviations(&rhs))))
        }
        _ => p.unexpected(&t, "`card` or `gci`"),
    }
}

/// Parses a TBox file. A file without statements is an empty T_C Box.
pub fn parse_tbox(text: &str) -> Result<TBox, SyntaxError> {
    let mut card: Option<TcBox> = None;
    let mut incl: Option<TiBox> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut p = Parser::new(tokenize(content, line_no, 1));
        match statement(&mut p)? {
            Statement::Card(r) => {
                if incl.is_some() {
                    return Err(SyntaxError::MixedTBox { line: line_no });
                }
                card.get_or_insert_with(TcBox::new).insert(expand_restriction(&r));
            }
            Statement::Gci(g) => {
                if card.is_some() {
                    return Err(SyntaxError::MixedTBox { line: line_no });
                }
                incl.get_or_insert_with(TiBox::new).insert(g);
            }
        }
    }
    let tbox = match incl {
        Some(t) => TBox::Incl(t),
        None => TBox::Card(card.unwrap_or_default()),
    };
    if let Some(name) = tbox.signature().clashes().into_iter().next() {
        return Err(SyntaxError::SignatureClash { name });
    }
    Ok(tbox)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::CardRestriction;

    #[test]
    fn qualified_at_least() {
        let c = parse_concept("atleast 2 hasChild . Female").unwrap();
        assert_eq!(c, Concept::at_least(2u32, Role::named("hasChild"), Concept::atom("Female")));
    }

    #[test]
    fn exists_over_inverse() {
        let c = parse_concept("exists inv(R) . A").unwrap();
        assert_eq!(c, Concept::at_least(1u32, Role::inverse_of("R"), Concept::atom("A")));
    }

    #[test]
    fn forall_expands_to_negated_at_least() {
        let c = parse_concept("forall R . A").unwrap();
        assert_eq!(c, !Concept::at_least(1u32, Role::named("R"), !Concept::atom("A")));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_concept("(A&atleast 1 R.{o})").unwrap();
        let b = parse_concept("  ( A &\n atleast 1 R . { o } )  ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bot_and_binary_sugar() {
        assert_eq!(parse_concept("bot").unwrap(), !Concept::Top);
        let imp = parse_concept("(A -> B)").unwrap();
        assert_eq!(imp, !(Concept::atom("A") & !Concept::atom("B")));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_concept("(A & B") {
            Err(SyntaxError::Unexpected { line: 1, column: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_concept("not\n  (A + B)") {
            Err(SyntaxError::UnknownOperator { line: 2, column: 6, operator }) => assert_eq!(operator, "+"),
            other => panic!("{other:?}"),
        }
        match parse_concept("(A and B)") {
            Err(SyntaxError::UnknownOperator { operator, .. }) => assert_eq!(operator, "and"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_concept("atleast -1 R . A"), Err(SyntaxError::NegativeCount { line: 1, column: 9 })));
        assert!(matches!(parse_concept("A B"), Err(SyntaxError::Unexpected { column: 3, .. })));
        assert!(parse_concept("exists inv . A").is_err());
        assert!(parse_concept("forall").is_err());
    }

    #[test]
    fn tbox_file_statements() {
        let text = "# torus fragment\ncard atleast 1 : A   # trailing\n\ncard atmost 0 : B\ncard all : C\n";
        let TBox::Card(t) = parse_tbox(text).unwrap() else { panic!("expected card") };
        assert_eq!(t.len(), 3);
        assert!(t.contains(&CardRestriction::all(Concept::atom("C"))));
        assert!(t.contains(&CardRestriction::at_most(0u32, Concept::atom("B"))));
    }

    #[test]
    fn tbox_kinds_do_not_mix() {
        assert_eq!(parse_tbox("card atleast 1 : A\ngci A => B\n"), Err(SyntaxError::MixedTBox { line: 2 }));
        let TBox::Incl(t) = parse_tbox("gci {o} => (A | B)").unwrap() else { panic!() };
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn tbox_line_numbers_in_errors() {
        match parse_tbox("card atleast 1 : A\n\ncard atleast 1 : (A % B)\n") {
            Err(SyntaxError::UnknownOperator { line: 3, column: 21, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn signature_clash_is_rejected() {
        assert!(matches!(parse_tbox("card atleast 1 : exists A . A"), Err(SyntaxError::SignatureClash { .. })));
    }

    #[test]
    fn empty_file_is_empty_tcbox() {
        assert_eq!(parse_tbox("# nothing\n").unwrap(), TBox::Card(TcBox::new()));
    }
}
