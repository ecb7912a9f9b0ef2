//! Finite models, valuations and direct truth evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;

use super::OracleError;
use crate::formula::{Formula, Query};
use crate::signature::Signature;
use crate::subst::Substitution;
use crate::term::{Atom, Sym, Term};
use crate::var::Var;

pub type Valuation = BTreeMap<Var, Term>;
/// A set of ground atoms over the universe.
pub type Interpretation = BTreeSet<Atom>;
/// One interpretation per atom of the query it is evaluated against.
pub type MultiInterp = Vec<Interpretation>;

#[derive(Clone, Debug)]
enum Functions {
    /// Terms denote themselves.
    Herbrand,
    /// Explicit tables over the elements `e0, e1, ...`.
    Table {
        constants: BTreeMap<Sym, Term>,
        functions: BTreeMap<Sym, BTreeMap<Vec<Term>, Term>>,
    },
}

/// A finite universe with an interpretation of the function symbols.
///
/// Herbrand models over constants only are closed and satisfy the free
/// equality axioms. Herbrand models with function symbols are truncated at a
/// term depth: terms still denote themselves, but quantifiers and valuations
/// only range over the truncated universe.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    elements: Vec<Term>,
    members: BTreeSet<Term>,
    functions: Functions,
    fresh: Vec<Sym>,
    depth: Option<usize>,
}

fn fresh_names(sig: &Signature, n: usize) -> Vec<Sym> {
    let taken = |s: &str| sig.function_arity(s).is_some() || sig.predicate_arity(s).is_some();
    (1..)
        .map(|i| format!("c{i}"))
        .filter(|s| !taken(s))
        .take(n)
        .map(Sym::from)
        .collect()
}

impl FiniteModel {
    /// Herbrand model over the signature's constants plus `fresh` new ones,
    /// truncated at `depth` when the signature has function symbols.
    pub fn herbrand(sig: &Signature, fresh: usize, depth: usize) -> FiniteModel {
        FiniteModel::herbrand_capped(sig, fresh, depth, usize::MAX).expect("no cap")
    }

    /// As [`FiniteModel::herbrand`], or `None` when the universe would have
    /// more than `cap` elements.
    pub fn herbrand_capped(
        sig: &Signature,
        fresh: usize,
        depth: usize,
        cap: usize,
    ) -> Option<FiniteModel> {
        let fresh = fresh_names(sig, fresh);
        let mut level: Vec<Term> = sig
            .constants()
            .into_iter()
            .chain(fresh.iter().cloned())
            .map(|c| Term::App(c, Vec::new()))
            .collect();
        let closed = sig.is_constants_only();
        let mut members: BTreeSet<Term> = level.iter().cloned().collect();
        if !closed {
            let funcs: Vec<(Sym, usize)> = sig
                .functions()
                .filter(|(_, n)| *n > 0)
                .map(|(f, n)| (f.clone(), n))
                .collect();
            for _ in 0..depth {
                let size = funcs.iter().fold(members.len(), |acc, (_, n)| {
                    acc.saturating_add(members.len().saturating_pow(*n as u32))
                });
                if size > cap {
                    return None;
                }
                let all: Vec<Term> = members.iter().cloned().collect();
                let mut next = Vec::new();
                for (f, n) in &funcs {
                    for args in tuples(&all, *n) {
                        let t = Term::App(f.clone(), args);
                        if !members.contains(&t) {
                            next.push(t);
                        }
                    }
                }
                members.extend(next.iter().cloned());
                level.extend(next);
            }
        }
        if level.len() > cap {
            return None;
        }
        Some(FiniteModel {
            elements: level,
            members,
            functions: Functions::Herbrand,
            fresh,
            depth: (!closed).then_some(depth),
        })
    }

    /// Closed Herbrand model whose universe is the given constants plus
    /// `fresh` new ones.
    pub fn constants<I: IntoIterator<Item = Sym>>(base: I, fresh: usize) -> FiniteModel {
        let mut sig = Signature::new();
        for c in base {
            sig.add_function(&c, 0).expect("constant names are valid");
        }
        FiniteModel::herbrand(&sig, fresh, 0)
    }

    /// An arbitrary structure over `size` elements. `constants` maps each
    /// constant to an element index; `functions` gives each table in
    /// row-major order of argument indices.
    pub fn structure(
        size: usize,
        constants: &BTreeMap<Sym, usize>,
        functions: &BTreeMap<Sym, (usize, Vec<usize>)>,
    ) -> Result<FiniteModel, OracleError> {
        if size == 0 {
            return Err(OracleError::EmptyUniverse);
        }
        let elements: Vec<Term> = (0..size).map(|i| Term::constant(format!("e{i}"))).collect();
        let elem = |i: usize| {
            elements
                .get(i)
                .cloned()
                .ok_or(OracleError::BadTable(format!("element {i} out of range")))
        };
        let consts = constants
            .iter()
            .map(|(c, &i)| Ok((c.clone(), elem(i)?)))
            .collect::<Result<_, OracleError>>()?;
        let mut funcs = BTreeMap::new();
        for (f, (arity, table)) in functions {
            let rows = tuples(&elements, *arity);
            if rows.len() != table.len() {
                return Err(OracleError::BadTable(format!(
                    "{f} needs {} entries, got {}",
                    rows.len(),
                    table.len()
                )));
            }
            let map = rows
                .into_iter()
                .zip(table)
                .map(|(args, &v)| Ok((args, elem(v)?)))
                .collect::<Result<_, OracleError>>()?;
            funcs.insert(f.clone(), map);
        }
        Ok(FiniteModel {
            members: elements.iter().cloned().collect(),
            elements,
            functions: Functions::Table {
                constants: consts,
                functions: funcs,
            },
            fresh: Vec::new(),
            depth: None,
        })
    }

    /// A uniformly random structure for the function symbols of `sig`.
    pub fn random_structure<R: Rng>(sig: &Signature, size: usize, rng: &mut R) -> FiniteModel {
        let mut constants = BTreeMap::new();
        let mut functions = BTreeMap::new();
        for (f, n) in sig.functions() {
            if n == 0 {
                constants.insert(f.clone(), rng.gen_range(0..size));
            } else {
                let rows = size.pow(n as u32);
                functions.insert(
                    f.clone(),
                    (n, (0..rows).map(|_| rng.gen_range(0..size)).collect()),
                );
            }
        }
        FiniteModel::structure(size, &constants, &functions).expect("tables are well formed")
    }

    pub fn elements(&self) -> &[Term] {
        &self.elements
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.members.contains(t)
    }

    pub fn fresh_constants(&self) -> &[Sym] {
        &self.fresh
    }

    /// True when quantifiers range over the whole model, so evaluation is exact.
    pub fn is_closed(&self) -> bool {
        self.depth.is_none()
    }

    /// Truncation depth of a Herbrand model with function symbols.
    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn is_herbrand(&self) -> bool {
        matches!(self.functions, Functions::Herbrand)
    }

    /// Value of `t` under `h`; `None` when a variable is unassigned or a
    /// symbol has no table.
    pub fn eval_term(&self, t: &Term, h: &Valuation) -> Option<Term> {
        match t {
            Term::Var(x) => h.get(x).cloned(),
            Term::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term(a, h))
                    .collect::<Option<Vec<_>>>()?;
                match &self.functions {
                    Functions::Herbrand => Some(Term::App(f.clone(), vals)),
                    Functions::Table {
                        constants,
                        functions,
                    } if vals.is_empty() => constants
                        .get(f)
                        .cloned()
                        .or_else(|| functions.get(f).and_then(|m| m.get(&vals).cloned())),
                    Functions::Table { functions, .. } => functions.get(f)?.get(&vals).cloned(),
                }
            }
        }
    }

    fn eval_atom(&self, a: &Atom, h: &Valuation) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a
                .args
                .iter()
                .map(|t| {
                    self.eval_term(t, h)
                        .unwrap_or_else(|| panic!("cannot evaluate {t}"))
                })
                .collect(),
        }
    }

    fn eval_eq(&self, s: &Term, t: &Term, h: &Valuation) -> bool {
        let v = |u: &Term| {
            self.eval_term(u, h)
                .unwrap_or_else(|| panic!("cannot evaluate {u}"))
        };
        v(s) == v(t)
    }

    /// Truth of `f` in `interp` under `h`, with quantifiers over the elements.
    pub fn eval_formula(&self, f: &Formula, interp: &Interpretation, h: &Valuation) -> bool {
        let mut h = h.clone();
        self.eval_in(f, interp, &mut h)
    }

    fn eval_in(&self, f: &Formula, interp: &Interpretation, h: &mut Valuation) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(s, t) => self.eval_eq(s, t, h),
            Formula::Atom(a) => interp.contains(&self.eval_atom(a, h)),
            Formula::Not(g) => !self.eval_in(g, interp, h),
            Formula::And(a, b) => self.eval_in(a, interp, h) && self.eval_in(b, interp, h),
            Formula::Or(a, b) => self.eval_in(a, interp, h) || self.eval_in(b, interp, h),
            Formula::Implies(a, b) => !self.eval_in(a, interp, h) || self.eval_in(b, interp, h),
            Formula::Iff(a, b) => self.eval_in(a, interp, h) == self.eval_in(b, interp, h),
            Formula::Exists(x, g) => {
                self.quantify(x, g, h, |m, g, h| m.eval_in(g, interp, h), true)
            }
            Formula::Forall(x, g) => {
                self.quantify(x, g, h, |m, g, h| m.eval_in(g, interp, h), false)
            }
        }
    }

    fn quantify(
        &self,
        x: &Var,
        g: &Formula,
        h: &mut Valuation,
        mut body: impl FnMut(&FiniteModel, &Formula, &mut Valuation) -> bool,
        existential: bool,
    ) -> bool {
        let saved = h.get(x).cloned();
        let mut result = !existential;
        for d in &self.elements {
            h.insert(x.clone(), d.clone());
            if body(self, g, h) == existential {
                result = existential;
                break;
            }
        }
        match saved {
            Some(v) => h.insert(x.clone(), v),
            None => h.remove(x),
        };
        result
    }

    /// Multiinterpretation semantics: the i-th atom of the query is read in
    /// the i-th interpretation.
    pub fn satisfies(
        &self,
        q: &Query,
        ibar: &[Interpretation],
        h: &Valuation,
    ) -> Result<bool, OracleError> {
        if ibar.len() != q.card() {
            return Err(OracleError::ArityMismatch {
                interps: ibar.len(),
                card: q.card(),
            });
        }
        let mut h = h.clone();
        Ok(self.mans(q.formula(), ibar, &mut h))
    }

    fn mans(&self, f: &Formula, ibar: &[Interpretation], h: &mut Valuation) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(s, t) => self.eval_eq(s, t, h),
            Formula::Atom(a) => ibar[0].contains(&self.eval_atom(a, h)),
            Formula::And(a, b) => {
                let (l, r) = ibar.split_at(a.card());
                self.mans(a, l, h) && self.mans(b, r, h)
            }
            Formula::Exists(x, g) => self.quantify(x, g, h, |m, g, h| m.mans(g, ibar, h), true),
            _ => unreachable!("queries are positive conjunctive"),
        }
    }

    /// All valuations of `vars` into the universe.
    pub fn valuations(&self, vars: &BTreeSet<Var>) -> Vec<Valuation> {
        let vars: Vec<&Var> = vars.iter().collect();
        tuples(&self.elements, vars.len())
            .into_iter()
            .map(|vals| vars.iter().map(|v| (*v).clone()).zip(vals).collect())
            .collect()
    }

    /// `MANS_Ī(Q)` restricted to `relevant`, which must cover the free
    /// variables of `q`.
    pub fn solutions(
        &self,
        q: &Query,
        ibar: &[Interpretation],
        relevant: &BTreeSet<Var>,
    ) -> Result<BTreeSet<Valuation>, OracleError> {
        let missing: BTreeSet<Var> = q.free_vars().difference(relevant).cloned().collect();
        if !missing.is_empty() {
            return Err(OracleError::Unassigned(missing));
        }
        let mut out = BTreeSet::new();
        for h in self.valuations(relevant) {
            if self.satisfies(q, ibar, &h)? {
                out.insert(h);
            }
        }
        Ok(out)
    }

    /// Instances of `σ` restricted to `relevant`: all `h` with
    /// `h(x) = g(σ(x))` for some `g`. Values leaving a truncated universe are
    /// dropped.
    pub fn instances(&self, sigma: &Substitution, relevant: &BTreeSet<Var>) -> BTreeSet<Valuation> {
        let Ok(m) = sigma.bindings() else {
            return BTreeSet::new();
        };
        let free: BTreeSet<Var> = relevant
            .iter()
            .filter(|v| !m.contains_key(*v))
            .cloned()
            .collect();
        let mut out = BTreeSet::new();
        for g in self.valuations(&sigma.range()) {
            let mut h = Valuation::new();
            let mut inside = true;
            for (x, t) in m.iter().filter(|(x, _)| relevant.contains(*x)) {
                let v = self.eval_term(t, &g).expect("range is assigned");
                inside &= self.contains(&v);
                h.insert(x.clone(), v);
            }
            if !inside {
                continue;
            }
            for k in self.valuations(&free) {
                let mut h = h.clone();
                h.extend(k);
                out.insert(h);
            }
        }
        out
    }

    /// Ground atoms over the universe for the given predicates.
    pub fn atoms(&self, predicates: &BTreeMap<Sym, usize>) -> Vec<Atom> {
        let mut out = Vec::new();
        for (p, &n) in predicates {
            for args in tuples(&self.elements, n) {
                out.push(Atom {
                    pred: p.clone(),
                    args,
                });
            }
        }
        out
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// All `n`-tuples over `items` in lexicographic order.
pub(crate) fn tuples<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn display_valuation(h: &Valuation) -> String {
    let parts: Vec<String> = h.iter().map(|(x, t)| format!("{x} -> {t}")).collect();
    format!("{{{}}}", parts.join(", "))
}
