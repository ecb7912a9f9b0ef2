//! Finite substitutions with an adjoined bottom element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::diff::diff_pairs;
use crate::formula::Formula;
use crate::term::{Atom, Term};
use crate::var::Var;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("not applicable: {} not in the domain", fmt_vars(.missing))]
    NotApplicable { missing: BTreeSet<Var> },
    #[error("not applicable: bottom has no bindings")]
    Bottom,
    #[error("domains overlap on {}", fmt_vars(.0))]
    DomainOverlap(BTreeSet<Var>),
}

fn fmt_vars(vs: &BTreeSet<Var>) -> String {
    let names: Vec<&str> = vs.iter().map(Var::name).collect();
    format!("{{{}}}", names.join(", "))
}

/// `Bottom` or a finite map from variables to terms. Identity bindings count:
/// `{X -> X}` has domain `{X}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Substitution {
    Bottom,
    Bindings(BTreeMap<Var, Term>),
}

impl Default for Substitution {
    fn default() -> Substitution {
        Substitution::empty()
    }
}

impl Substitution {
    /// The empty substitution ε.
    pub fn empty() -> Substitution {
        Substitution::Bindings(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Term)>>(pairs: I) -> Substitution {
        Substitution::Bindings(pairs.into_iter().collect())
    }

    pub fn identity<'a, I: IntoIterator<Item = &'a Var>>(vars: I) -> Substitution {
        Substitution::from_pairs(vars.into_iter().map(|v| (v.clone(), Term::Var(v.clone()))))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Substitution::Bottom)
    }

    pub fn bindings(&self) -> Result<&BTreeMap<Var, Term>, SubstError> {
        match self {
            Substitution::Bottom => Err(SubstError::Bottom),
            Substitution::Bindings(m) => Ok(m),
        }
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        match self {
            Substitution::Bottom => None,
            Substitution::Bindings(m) => m.get(x),
        }
    }

    pub fn dom(&self) -> BTreeSet<Var> {
        match self {
            Substitution::Bottom => BTreeSet::new(),
            Substitution::Bindings(m) => m.keys().cloned().collect(),
        }
    }

    pub fn range(&self) -> BTreeSet<Var> {
        match self {
            Substitution::Bottom => BTreeSet::new(),
            Substitution::Bindings(m) => range_of(m),
        }
    }

    pub fn apply_to_term(&self, t: &Term) -> Result<Term, SubstError> {
        let m = self.bindings()?;
        let missing: BTreeSet<Var> = t
            .vars()
            .into_iter()
            .filter(|v| !m.contains_key(v))
            .collect();
        if !missing.is_empty() {
            return Err(SubstError::NotApplicable { missing });
        }
        Ok(t.substitute(m))
    }

    /// `σθ` over `DOM(σ)`; needs `RANGE(σ) ⊆ DOM(θ)`.
    pub fn compose(&self, theta: &Substitution) -> Result<Substitution, SubstError> {
        let s = self.bindings()?;
        let t = theta.bindings()?;
        let missing: BTreeSet<Var> = range_of(s)
            .into_iter()
            .filter(|v| !t.contains_key(v))
            .collect();
        if !missing.is_empty() {
            return Err(SubstError::NotApplicable { missing });
        }
        Ok(Substitution::Bindings(
            s.iter()
                .map(|(x, u)| (x.clone(), u.substitute(t)))
                .collect(),
        ))
    }

    /// Restriction to `DOM(σ) ∩ xs`. Bottom stays bottom.
    pub fn restrict(&self, xs: &BTreeSet<Var>) -> Substitution {
        match self {
            Substitution::Bottom => Substitution::Bottom,
            Substitution::Bindings(m) => Substitution::Bindings(
                m.iter()
                    .filter(|(x, _)| xs.contains(*x))
                    .map(|(x, t)| (x.clone(), t.clone()))
                    .collect(),
            ),
        }
    }

    /// Extends `σ` to `DOM(σ) ∪ xs`. Each new variable, taken in order, maps to
    /// itself when it is not yet in the range and otherwise to the first
    /// variable outside the current range.
    pub fn regular_extension(&self, xs: &BTreeSet<Var>) -> Substitution {
        let m = match self {
            Substitution::Bottom => return Substitution::Bottom,
            Substitution::Bindings(m) => m,
        };
        let mut out = m.clone();
        let mut range = range_of(m);
        for x in xs {
            if out.contains_key(x) {
                continue;
            }
            let y = if range.contains(x) {
                Var::first_not_in(&range)
            } else {
                x.clone()
            };
            range.insert(y.clone());
            out.insert(x.clone(), Term::Var(y));
        }
        Substitution::Bindings(out)
    }

    pub fn union(&self, theta: &Substitution) -> Result<Substitution, SubstError> {
        let s = self.bindings()?;
        let t = theta.bindings()?;
        let overlap: BTreeSet<Var> = s.keys().filter(|k| t.contains_key(*k)).cloned().collect();
        if !overlap.is_empty() {
            return Err(SubstError::DomainOverlap(overlap));
        }
        let mut out = s.clone();
        out.extend(t.iter().map(|(k, v)| (k.clone(), v.clone())));
        Ok(Substitution::Bindings(out))
    }

    /// One-to-one map from the domain onto variables.
    pub fn is_permutation(&self) -> bool {
        let Substitution::Bindings(m) = self else {
            return false;
        };
        let mut seen = BTreeSet::new();
        m.values().all(|t| match t {
            Term::Var(v) => seen.insert(v.clone()),
            Term::App(..) => false,
        })
    }

    /// `KERNEL(σ)`: every `x` except those mapped to a variable that occurs in
    /// no other binding.
    pub fn kernel(&self) -> Result<BTreeSet<Var>, SubstError> {
        let m = self.bindings()?;
        let mut count: BTreeMap<&Var, usize> = BTreeMap::new();
        for t in m.values() {
            for st in t.subterms() {
                if let Term::Var(v) = st {
                    *count.entry(v).or_default() += 1;
                }
            }
        }
        Ok(m.iter()
            .filter(|(_, t)| match t {
                Term::Var(v) => count[v] > 1,
                Term::App(..) => true,
            })
            .map(|(x, _)| x.clone())
            .collect())
    }

    /// A `τ` with `σ' = θ'τ`, where `σ'`, `θ'` are the regular extensions of
    /// `σ` (self) and `θ` to their common domain. `None` when `σ ⋠ θ` or
    /// either side is bottom.
    pub fn matcher(&self, theta: &Substitution) -> Option<Substitution> {
        let (Substitution::Bindings(s), Substitution::Bindings(t)) = (self, theta) else {
            return None;
        };
        let dom: BTreeSet<Var> = s.keys().chain(t.keys()).cloned().collect();
        let s = self.regular_extension(&dom);
        let t = theta.regular_extension(&dom);
        let (s, t) = (s.bindings().ok()?, t.bindings().ok()?);
        let mut pairs = Vec::new();
        for x in &dom {
            diff_pairs(&s[x], &t[x], &mut pairs);
        }
        let mut tau: BTreeMap<Var, Term> = BTreeMap::new();
        for (a, b) in pairs {
            let Term::Var(v) = b else {
                return None;
            };
            match tau.get(&v) {
                Some(prev) if *prev != a => return None,
                Some(_) => {}
                None => {
                    tau.insert(v, a);
                }
            }
        }
        Some(Substitution::Bindings(tau))
    }

    /// `σ ⪯ θ` (self is less general). Bottom is below everything.
    pub fn more_general(&self, theta: &Substitution) -> bool {
        match (self, theta) {
            (Substitution::Bottom, _) => true,
            (_, Substitution::Bottom) => false,
            _ => self.matcher(theta).is_some(),
        }
    }

    pub fn equivalent(&self, theta: &Substitution) -> bool {
        self.more_general(theta) && theta.more_general(self)
    }

    /// `Fσ`: restrict to `VARS(F)`, regularly extend to `VARS(F)`, then apply
    /// structurally, renaming bound variables that would be captured.
    pub fn apply_to_formula(&self, f: &Formula) -> Result<Formula, SubstError> {
        if self.is_bottom() {
            return Err(SubstError::Bottom);
        }
        let fv = f.free_vars();
        let sigma = self.restrict(&fv).regular_extension(&fv);
        let Substitution::Bindings(m) = sigma else {
            unreachable!("bottom handled above");
        };
        Ok(apply(&m, f))
    }
}

fn range_of(m: &BTreeMap<Var, Term>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    m.values().for_each(|t| t.collect_vars(&mut out));
    out
}

fn restrict_map(m: &BTreeMap<Var, Term>, xs: &BTreeSet<Var>) -> BTreeMap<Var, Term> {
    m.iter()
        .filter(|(x, _)| xs.contains(*x))
        .map(|(x, t)| (x.clone(), t.clone()))
        .collect()
}

// Invariant: DOM(m) = VARS(f).
fn apply(m: &BTreeMap<Var, Term>, f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Eq(s, t) => Formula::Eq(s.substitute(m), t.substitute(m)),
        Formula::Atom(a) => Formula::Atom(Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| t.substitute(m)).collect(),
        }),
        Formula::Not(g) => Formula::not(apply(m, g)),
        Formula::And(a, b) => Formula::and(split(m, a), split(m, b)),
        Formula::Or(a, b) => Formula::or(split(m, a), split(m, b)),
        Formula::Implies(a, b) => Formula::implies(split(m, a), split(m, b)),
        Formula::Iff(a, b) => Formula::iff(split(m, a), split(m, b)),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let range = range_of(m);
            let (y, body) = if range.contains(x) {
                let mut avoid = range;
                avoid.extend(m.keys().cloned());
                avoid.extend(g.all_vars());
                let y = Var::first_not_in(&avoid);
                let renamed = g
                    .replace(std::slice::from_ref(x), &[Term::Var(y.clone())])
                    .expect("fresh variable cannot be captured");
                (y, renamed)
            } else {
                (x.clone(), (**g).clone())
            };
            let mut inner = m.clone();
            if body.is_free(&y) {
                inner.insert(y.clone(), Term::Var(y.clone()));
            }
            let body = apply(&inner, &body);
            match f {
                Formula::Exists(..) => Formula::exists(y, body),
                _ => Formula::forall(y, body),
            }
        }
    }
}

fn split(m: &BTreeMap<Var, Term>, g: &Formula) -> Formula {
    apply(&restrict_map(m, &g.free_vars()), g)
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Substitution::Bottom => f.write_str("bottom"),
            Substitution::Bindings(m) => {
                f.write_str("{")?;
                for (i, (x, t)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x} -> {t}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_substitution, parse_term, parse_var_set};

    fn s(text: &str) -> Substitution {
        parse_substitution(text).unwrap()
    }

    fn t(text: &str) -> Term {
        parse_term(text).unwrap()
    }

    fn vs(text: &str) -> BTreeSet<Var> {
        parse_var_set(text).unwrap()
    }

    #[test]
    fn apply_to_term_examples() {
        assert_eq!(
            s("{X -> f(Y)}").apply_to_term(&t("g(X)")).unwrap(),
            t("g(f(Y))")
        );
        assert_eq!(
            Substitution::empty().apply_to_term(&t("a")).unwrap(),
            t("a")
        );
        assert_eq!(
            s("{X -> Y}").apply_to_term(&t("f(X, Z)")),
            Err(SubstError::NotApplicable { missing: vs("Z") })
        );
        assert_eq!(
            Substitution::Bottom.apply_to_term(&t("a")),
            Err(SubstError::Bottom)
        );
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            s("{X -> Y}").compose(&s("{Y -> Y}")).unwrap(),
            s("{X -> Y}")
        );
        assert_eq!(
            s("{X -> f(Y)}").compose(&s("{Y -> a}")).unwrap(),
            s("{X -> f(a)}")
        );
        assert!(matches!(
            s("{X -> Z}").compose(&s("{Y -> a}")),
            Err(SubstError::NotApplicable { .. })
        ));
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(s("{X -> a, Y -> b}").restrict(&vs("X")), s("{X -> a}"));
        assert_eq!(
            s("{X -> a}").restrict(&BTreeSet::new()),
            Substitution::empty()
        );
        assert_eq!(
            s("{X -> f(Z, X)}").restrict(&vs("X, Y")),
            s("{X -> f(Z, X)}")
        );
    }

    #[test]
    fn regular_extension_examples() {
        assert_eq!(
            s("{X -> f(Z, X)}").regular_extension(&vs("X, Y")),
            s("{X -> f(Z, X), Y -> Y}")
        );
        assert_eq!(
            s("{X -> f(Z, Y)}").regular_extension(&vs("X, Y")),
            s("{X -> f(Z, Y), Y -> X}")
        );
        assert_eq!(
            Substitution::empty().regular_extension(&BTreeSet::new()),
            Substitution::empty()
        );
    }

    #[test]
    fn apply_to_formula_examples() {
        let f = parse_formula("exists Z . p(X, Y, Z)").unwrap();
        let cases = [
            ("{X -> Z, Y -> X}", "exists U . p(Z,X,U)"),
            (
                "{X -> f(Z, X), Z -> g(X, Y, Z)}",
                "exists U . p(f(Z,X),Y,U)",
            ),
            (
                "{X -> f(Z, Y), Z -> g(X, Y, Z)}",
                "exists U . p(f(Z,Y),X,U)",
            ),
        ];
        for (sigma, want) in cases {
            assert_eq!(
                s(sigma).apply_to_formula(&f).unwrap().to_string(),
                want,
                "{sigma}"
            );
        }
        assert!(Substitution::Bottom.apply_to_formula(&f).is_err());
    }

    #[test]
    fn apply_keeps_uncaptured_binders() {
        let f = parse_formula("forall Z . p(X) | q(Z)").unwrap();
        let out = s("{X -> a}").apply_to_formula(&f).unwrap();
        assert_eq!(out.to_string(), "forall Z . p(a) | q(Z)");
    }

    #[test]
    fn union_examples() {
        assert_eq!(
            s("{X -> a}").union(&s("{Y -> b}")).unwrap(),
            s("{X -> a, Y -> b}")
        );
        assert_eq!(
            s("{X -> a}").union(&Substitution::empty()).unwrap(),
            s("{X -> a}")
        );
        assert_eq!(
            s("{X -> a}").union(&s("{X -> b}")),
            Err(SubstError::DomainOverlap(vs("X")))
        );
    }

    #[test]
    fn permutation_examples() {
        assert!(s("{X -> Y, Y -> X}").is_permutation());
        assert!(!s("{X -> Y, Z -> Y}").is_permutation());
        assert!(!s("{X -> a}").is_permutation());
    }

    #[test]
    fn kernel_examples() {
        assert!(Substitution::empty().kernel().unwrap().is_empty());
        assert_eq!(s("{X -> a, Y -> V}").kernel().unwrap(), vs("X"));
        assert_eq!(s("{X -> V, Y -> V}").kernel().unwrap(), vs("X, Y"));
        assert_eq!(s("{X -> f(V, V), Y -> V}").kernel().unwrap(), vs("X, Y"));
        assert!(Substitution::Bottom.kernel().is_err());
    }

    #[test]
    fn order_examples() {
        assert!(s("{X -> f(a)}").more_general(&s("{X -> f(Y)}")));
        assert_eq!(
            s("{X -> f(a)}").matcher(&s("{X -> f(Y)}")).unwrap(),
            s("{Y -> a}")
        );
        assert!(s("{X -> U}").more_general(&s("{X -> V}")));
        assert!(s("{X -> V}").more_general(&s("{X -> U}")));
        assert!(!s("{X -> f(Y)}").more_general(&s("{X -> f(a)}")));
    }

    #[test]
    fn equivalence_examples() {
        assert!(s("{X -> f(Z, X)}").equivalent(&s("{X -> f(Z, X), Y -> Y}")));
        assert!(!s("{X -> a}").equivalent(&s("{X -> b}")));
        let sigma = s("{X -> g(Y, Z), Z -> Y}");
        assert!(sigma.equivalent(&sigma));
    }

    #[test]
    fn bottom_is_least() {
        assert!(Substitution::Bottom.more_general(&s("{X -> a}")));
        assert!(!s("{X -> a}").more_general(&Substitution::Bottom));
        assert!(Substitution::Bottom.equivalent(&Substitution::Bottom));
    }

    #[test]
    fn display() {
        assert_eq!(s("{Z -> a, X -> f(Y)}").to_string(), "{X -> f(Y), Z -> a}");
        assert_eq!(Substitution::Bottom.to_string(), "bottom");
        assert_eq!(Substitution::empty().to_string(), "{}");
    }
}
