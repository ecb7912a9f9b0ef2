//! A plain Robinson unifier, kept separate from the rewriting solver so the
//! oracle does not depend on the code it checks.

use std::collections::BTreeMap;

use crate::term::Term;
use crate::var::Var;

/// Most general unifier of the pairs as an idempotent map, or `None`.
pub fn unify(pairs: &[(Term, Term)]) -> Option<BTreeMap<Var, Term>> {
    let mut sub: BTreeMap<Var, Term> = BTreeMap::new();
    let mut stack: Vec<(Term, Term)> = pairs.to_vec();
    while let Some((s, t)) = stack.pop() {
        let s = walk(&s, &sub);
        let t = walk(&t, &sub);
        match (s, t) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if occurs(&x, &t, &sub) {
                    return None;
                }
                sub.insert(x, t);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                stack.extend(xs.into_iter().zip(ys));
            }
        }
    }
    let keys: Vec<Var> = sub.keys().cloned().collect();
    Some(
        keys.into_iter()
            .map(|x| {
                let t = resolve(&Term::Var(x.clone()), &sub);
                (x, t)
            })
            .collect(),
    )
}

fn walk(t: &Term, sub: &BTreeMap<Var, Term>) -> Term {
    let mut cur = t.clone();
    while let Term::Var(x) = &cur {
        match sub.get(x) {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    cur
}

fn occurs(x: &Var, t: &Term, sub: &BTreeMap<Var, Term>) -> bool {
    match walk(t, sub) {
        Term::Var(y) => &y == x,
        Term::App(_, args) => args.iter().any(|a| occurs(x, a, sub)),
    }
}

/// Fully applies a triangular substitution.
pub fn resolve(t: &Term, sub: &BTreeMap<Var, Term>) -> Term {
    match walk(t, sub) {
        v @ Term::Var(_) => v,
        Term::App(f, args) => Term::App(f, args.iter().map(|a| resolve(a, sub)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn unifies() {
        let m = unify(&[(t("f(X, g(Y))"), t("f(a, g(X))"))]).unwrap();
        assert_eq!(m[&Var::new("X")], t("a"));
        assert_eq!(m[&Var::new("Y")], t("a"));
        assert!(unify(&[(t("X"), t("f(X)"))]).is_none());
        assert!(unify(&[(t("a"), t("b"))]).is_none());
        assert!(unify(&[(t("X"), t("Y")), (t("Y"), t("f(Z)")), (t("Z"), t("X"))]).is_none());
    }
}
