//! Bounded enumeration of the generalizations of an E-formula.
//!
//! Every generalization of `E` corresponds to a term `T'` with `T = T'τ`,
//! where `T` is the tuple of right-hand sides of `Γ(E)`. Such a `T'` is fixed
//! by a set of cut positions in `T` and a partition of the cuts into groups
//! that cut identical subterms.

use std::collections::{BTreeMap, BTreeSet};

use super::OracleError;
use crate::lattice::{to_eformula, to_substitution, EFormula};
use crate::subst::Substitution;
use crate::term::Term;
use crate::var::Var;

const LIMIT: usize = 200_000;

/// A term with holes; each hole remembers the subterm it replaced.
#[derive(Clone)]
enum Pattern {
    Hole(Term),
    App(crate::term::Sym, Vec<Pattern>),
}

fn patterns(t: &Term, budget: &mut usize) -> Result<Vec<Pattern>, OracleError> {
    let mut out = vec![Pattern::Hole(t.clone())];
    if let Term::App(f, args) = t {
        let mut combos: Vec<Vec<Pattern>> = vec![Vec::new()];
        for a in args {
            let ps = patterns(a, budget)?;
            let mut next = Vec::new();
            for c in &combos {
                for p in &ps {
                    let mut c = c.clone();
                    c.push(p.clone());
                    next.push(c);
                }
            }
            combos = next;
            if combos.len() > *budget {
                return Err(OracleError::TooMany(LIMIT));
            }
        }
        out.extend(combos.into_iter().map(|c| Pattern::App(f.clone(), c)));
    }
    Ok(out)
}

fn holes<'a>(p: &'a Pattern, out: &mut Vec<&'a Term>) {
    match p {
        Pattern::Hole(t) => out.push(t),
        Pattern::App(_, ps) => ps.iter().for_each(|q| holes(q, out)),
    }
}

fn fill(p: &Pattern, names: &mut impl Iterator<Item = Var>) -> Term {
    match p {
        Pattern::Hole(_) => Term::Var(names.next().expect("one name per hole")),
        Pattern::App(f, ps) => Term::App(f.clone(), ps.iter().map(|q| fill(q, names)).collect()),
    }
}

/// Set partitions of `0..n` as block labels in restricted-growth form.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, max.max(b + 1), cur, out);
            cur.pop();
        }
    }
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// All canonical E-formulas `E'` with `E ⪯ E'` whose right-hand sides have
/// total size at most `size_bound`.
pub fn enumerate_generalizations(
    e: &EFormula,
    size_bound: usize,
) -> Result<BTreeSet<EFormula>, OracleError> {
    let sigma = to_substitution(e);
    let Ok(m) = sigma.bindings() else {
        return Err(OracleError::Inconsistent);
    };
    let dom: Vec<Var> = m.keys().cloned().collect();
    let mut budget = LIMIT;
    let per_root: Vec<Vec<Pattern>> = dom
        .iter()
        .map(|x| patterns(&m[x], &mut budget))
        .collect::<Result<_, _>>()?;

    let mut tuples: Vec<Vec<Pattern>> = vec![Vec::new()];
    for ps in &per_root {
        let mut next = Vec::new();
        for t in &tuples {
            for p in ps {
                let mut t = t.clone();
                t.push(p.clone());
                next.push(t);
            }
        }
        if next.len() > LIMIT {
            return Err(OracleError::TooMany(LIMIT));
        }
        tuples = next;
    }

    let mut out = BTreeSet::new();
    for tuple in tuples {
        let mut hs = Vec::new();
        tuple.iter().for_each(|p| holes(p, &mut hs));
        // cuts of equal subterms may share a variable
        let mut classes: BTreeMap<&Term, Vec<usize>> = BTreeMap::new();
        for (i, t) in hs.iter().enumerate() {
            classes.entry(t).or_default().push(i);
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut labelings: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for (ci, members) in classes.iter().enumerate() {
            let mut next = Vec::new();
            for part in partitions(members.len()) {
                for l in &labelings {
                    let mut l = l.clone();
                    l.extend(members.iter().zip(&part).map(|(&h, &b)| (h, ci * 1000 + b)));
                    next.push(l);
                }
            }
            labelings = next;
            if labelings.len() > LIMIT {
                return Err(OracleError::TooMany(LIMIT));
            }
        }
        for labels in labelings {
            let mut by_hole = vec![0; hs.len()];
            for (h, b) in labels {
                by_hole[h] = b;
            }
            let mut names = by_hole.iter().map(|b| Var::new(format!("G{b}")));
            let theta: BTreeMap<Var, Term> = dom
                .iter()
                .zip(&tuple)
                .map(|(x, p)| (x.clone(), fill(p, &mut names)))
                .collect();
            if theta.values().map(Term::size).sum::<usize>() > size_bound {
                continue;
            }
            let g = to_eformula(&Substitution::Bindings(theta));
            let canon = EFormula::from_solved(&g.solve().canonicalize()).expect("no atoms");
            if e.more_general(&canon) {
                out.insert(canon);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> EFormula {
        s.parse().unwrap()
    }

    fn texts(set: &BTreeSet<EFormula>) -> BTreeSet<String> {
        set.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn generalizations_of_a_ground_binding() {
        let got = texts(&enumerate_generalizations(&e("X = f(a)"), 16).unwrap());
        let want: BTreeSet<String> = ["X = f(a)", "exists B1 . X = f(B1)", "true"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn top_and_shared_variables() {
        assert_eq!(
            texts(&enumerate_generalizations(&EFormula::truth(), 16).unwrap()).len(),
            1
        );
        let got = enumerate_generalizations(&e("exists U . X = f(U, U)"), 16).unwrap();
        assert!(got.contains(&e("exists B1 . exists B2 . X = f(B1, B2)")));
        assert!(got.contains(&EFormula::truth()));
        assert!(got.contains(&e("exists B1 . X = f(B1, B1)")));
        assert_eq!(got.len(), 3);
        assert_eq!(
            enumerate_generalizations(&e("X = f(X)"), 16),
            Err(OracleError::Inconsistent)
        );
    }
}
