//! Canonical text rendering. Every rendering re-parses to the value it came from.

use std::fmt;

use super::{CardKind, CardRestriction, Concept, Gci, Role, TBox, TcBox, TiBox};

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "inv({})", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Atomic(a) => write!(f, "{a}"),
            Concept::Nominal(o) => write!(f, "{{{o}}}"),
            Concept::Top => f.write_str("top"),
            Concept::Not(c) => write!(f, "not {c}"),
            Concept::And(a, b) => write!(f, "({a} & {b})"),
            Concept::AtLeast(n, r, c) => write!(f, "atleast {n} {r} . {c}"),
        }
    }
}

impl fmt::Display for CardRestriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CardKind::AtLeast => "atleast",
            CardKind::AtMost => "atmost",
        };
        write!(f, "card {kind} {} : {}", self.bound, self.concept)
    }
}

impl fmt::Display for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gci {} => {}", self.lhs, self.rhs)
    }
}

fn write_lines(f: &mut fmt::Formatter<'_>, mut lines: Vec<String>) -> fmt::Result {
    lines.sort();
    for line in lines {
        writeln!(f, "{line}")?;
    }
    Ok(())
}

impl fmt::Display for TcBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lines(f, self.iter().map(ToString::to_string).collect())
    }
}

impl fmt::Display for TiBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lines(f, self.iter().map(ToString::to_string).collect())
    }
}

impl fmt::Display for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TBox::Card(t) => t.fmt(f),
            TBox::Incl(t) => t.fmt(f),
        }
    }
}
