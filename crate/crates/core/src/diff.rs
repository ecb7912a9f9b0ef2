//! Difference sets of terms.

use std::collections::BTreeSet;

use crate::term::Term;

/// `DIFF(s, t)`: the maximal pairs of disagreeing subterms, found by parallel
/// descent. Identical variables survive as `(x, x)`; identical constants vanish.
pub fn diff_set(s: &Term, t: &Term) -> BTreeSet<(Term, Term)> {
    let mut out = BTreeSet::new();
    diff_into(s, t, &mut out);
    out
}

/// Pairs are appended in left-to-right order; duplicates are kept.
pub fn diff_pairs(s: &Term, t: &Term, out: &mut Vec<(Term, Term)>) {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) if x == y => out.push((s.clone(), t.clone())),
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            for (a, b) in xs.iter().zip(ys) {
                diff_pairs(a, b, out);
            }
        }
        _ => out.push((s.clone(), t.clone())),
    }
}

pub fn diff_into(s: &Term, t: &Term, out: &mut BTreeSet<(Term, Term)>) {
    let mut pairs = Vec::new();
    diff_pairs(s, t, &mut pairs);
    out.extend(pairs);
}
