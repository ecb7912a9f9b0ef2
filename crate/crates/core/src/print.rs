//! Printing in the syntax accepted by [`crate::parse`].

use std::fmt::{self, Write};

use crate::formula::Formula;
use crate::term::{Atom, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                f.write_str(s)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut impl Write, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        write_args(f, &self.args)
    }
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOMIC: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => UNARY,
        _ => ATOMIC,
    }
}

// `tail` is true when nothing follows this subformula up to the end of the
// enclosing group, so a quantifier body may run on without parentheses.
fn write_formula(out: &mut impl Write, f: &Formula, min: u8, tail: bool) -> fmt::Result {
    let quant = matches!(f, Formula::Exists(..) | Formula::Forall(..));
    let parens = prec(f) < min || (quant && !tail);
    if parens {
        out.write_char('(')?;
    }
    let tail = tail || parens;
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Eq(s, t) => write!(out, "{s} = {t}")?,
        Formula::Atom(a) => write!(out, "{a}")?,
        Formula::Not(g) => {
            out.write_char('~')?;
            write_formula(out, g, UNARY, tail)?;
        }
        Formula::And(a, b) => binary(out, a, " & ", b, AND, AND + 1, tail)?,
        Formula::Or(a, b) => binary(out, a, " | ", b, OR, OR + 1, tail)?,
        Formula::Implies(a, b) => binary(out, a, " -> ", b, IMP + 1, IMP, tail)?,
        Formula::Iff(a, b) => binary(out, a, " <-> ", b, IFF, IFF + 1, tail)?,
        Formula::Exists(x, g) => {
            write!(out, "exists {x} . ")?;
            write_formula(out, g, IFF, tail)?;
        }
        Formula::Forall(x, g) => {
            write!(out, "forall {x} . ")?;
            write_formula(out, g, IFF, tail)?;
        }
    }
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

fn binary(
    out: &mut impl Write,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
    tail: bool,
) -> fmt::Result {
    write_formula(out, a, left, false)?;
    out.write_str(op)?;
    write_formula(out, b, right, tail)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, IFF, true)
    }
}

#[cfg(test)]
mod tests {
    use crate::parse::parse_formula;

    fn round(s: &str) -> String {
        parse_formula(s).unwrap().to_string()
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(
            round("exists Z . X = f(Z, a) & p(X)"),
            "exists Z . X = f(Z,a) & p(X)"
        );
        assert_eq!(round("(exists Z . p(Z)) & q"), "(exists Z . p(Z)) & q");
        assert_eq!(round("q & exists Z . p(Z)"), "q & exists Z . p(Z)");
        assert_eq!(round("(p | q) & r"), "(p | q) & r");
        assert_eq!(round("p & (q & r)"), "p & (q & r)");
        assert_eq!(round("(p -> q) -> r"), "(p -> q) -> r");
        assert_eq!(round("p -> q -> r"), "p -> q -> r");
        assert_eq!(round("~(exists X . p(X)) & q"), "~(exists X . p(X)) & q");
        assert_eq!(round("~exists X . p(X)"), "~exists X . p(X)");
        assert_eq!(round("(forall X . p(X)) <-> q"), "(forall X . p(X)) <-> q");
        assert_eq!(round("~(p & q)"), "~(p & q)");
    }

    #[test]
    fn print_parse_identity() {
        for s in [
            "(exists X . p(X)) | q",
            "p & (q | exists Y . r(Y) & s) & t",
            "forall X . (exists Y . X = Y) -> p(X)",
            "~~p <-> (q <-> r)",
            "(p <-> q) <-> r",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{s}");
        }
    }
}
