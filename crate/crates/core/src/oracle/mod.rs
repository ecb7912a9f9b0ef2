//! Finite-model ground truth for the symbolic procedures.
//!
//! Generality between queries is decided by enumerating the solutions of the
//! left query together with the ground atoms that support them. Solution
//! sets grow with the multiinterpretation, so it is enough to test the right
//! query against the singleton multiinterpretation built from each support.
//! Over constants-only signatures the universe is the signature's constants
//! plus fresh ones and the answer is exact. With function symbols the left
//! side is enumerated into a depth-bounded Herbrand universe and the oracle
//! can only refute.

mod generalize;
mod model;
mod unify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use crate::diff::diff_set;
pub use generalize::enumerate_generalizations;
pub use model::{display_valuation, FiniteModel, Interpretation, MultiInterp, Valuation};
pub use unify::unify;

use crate::formula::{Formula, Query};
use crate::lattice::EFormula;
use crate::signature::{Signature, SignatureError};
use crate::subst::{SubstError, Substitution};
use crate::term::{Atom, Sym, Term};
use crate::var::{FreshVars, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{interps} interpretations for a query of card {card}")]
    ArityMismatch { interps: usize, card: usize },
    #[error("variables without a value: {0:?}")]
    Unassigned(BTreeSet<Var>),
    #[error("empty universe")]
    EmptyUniverse,
    #[error("bad function table: {0}")]
    BadTable(String),
    #[error("inconsistent E-formula")]
    Inconsistent,
    #[error("more than {0} candidates")]
    TooMany(usize),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("witness failed direct evaluation: {0}")]
    Recheck(String),
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Term depth of the Herbrand universe when there are function symbols.
    pub depth: usize,
    /// Number of fresh constants; the default depends on the inputs.
    pub fresh_constants: Option<usize>,
    /// Cap on the number of (valuation, support) pairs examined.
    pub max_interps: usize,
    /// Signature to use instead of the one inferred from the inputs.
    pub signature: Option<Signature>,
}

impl Default for OracleOptions {
    fn default() -> OracleOptions {
        OracleOptions {
            depth: 3,
            fresh_constants: None,
            max_interps: 1 << 20,
            signature: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A valuation of the free variables together with the support of the side
/// it solves: the i-th atom is true in the singleton `{support[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub valuation: Valuation,
    pub support: Vec<Atom>,
    pub solves: Side,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.solves {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(
            f,
            "{} solves {side} only",
            display_valuation(&self.valuation)
        )?;
        if !self.support.is_empty() {
            let atoms: Vec<String> = self.support.iter().map(|a| format!("{{{a}}}")).collect();
            write!(f, " with <{}>", atoms.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Confirmed,
    /// `None` when the atom counts differ.
    Refuted(Option<Witness>),
    /// No counterexample up to the given term depth.
    BoundedAgreement {
        depth: usize,
    },
    Inconclusive,
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    /// Confirmed, or agreement up to the bound.
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Confirmed | Verdict::BoundedAgreement { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Refuted(w) => w.as_ref(),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::Confirmed => "confirmed".into(),
            Verdict::Refuted(_) => "refuted".into(),
            Verdict::BoundedAgreement { depth } => format!("confirmed-at-depth {depth}"),
            Verdict::Inconclusive => "inconclusive".into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Refuted(Some(w)) => write!(f, "refuted: {w}"),
            Verdict::Refuted(None) => write!(f, "refuted: atom counts differ"),
            v => f.write_str(&v.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    /// Solutions of the enumerated side that were examined.
    pub enumerated: usize,
}

/// A query in prenex form with its bound variables renamed apart.
#[derive(Clone, Debug)]
struct Flat {
    bound: Vec<Var>,
    eqs: Vec<(Term, Term)>,
    atoms: Vec<Atom>,
    falsum: bool,
}

fn flatten(f: &Formula, fresh: &mut FreshVars) -> Flat {
    let mut out = Flat {
        bound: Vec::new(),
        eqs: Vec::new(),
        atoms: Vec::new(),
        falsum: false,
    };
    flatten_into(f, &BTreeMap::new(), fresh, &mut out);
    out
}

fn flatten_into(f: &Formula, ren: &BTreeMap<Var, Var>, fresh: &mut FreshVars, out: &mut Flat) {
    match f {
        Formula::True => {}
        Formula::False => out.falsum = true,
        Formula::Eq(s, t) => out.eqs.push((s.rename(ren), t.rename(ren))),
        Formula::Atom(a) => out.atoms.push(a.rename(ren)),
        Formula::And(a, b) => {
            flatten_into(a, ren, fresh, out);
            flatten_into(b, ren, fresh, out);
        }
        Formula::Exists(x, g) => {
            let y = fresh.fresh();
            let mut inner = ren.clone();
            inner.insert(x.clone(), y.clone());
            out.bound.push(y);
            flatten_into(g, &inner, fresh, out);
        }
        _ => unreachable!("queries are positive conjunctive"),
    }
}

/// Default fresh-constant count: free plus bound variables plus one.
fn default_fresh<'a, I: IntoIterator<Item = &'a Query>>(qs: I) -> usize {
    let mut free = BTreeSet::new();
    let mut bound = BTreeSet::new();
    for q in qs {
        free.extend(q.free_vars());
        bound.extend(q.bound_vars());
    }
    free.len() + bound.len() + 1
}

fn signature_for(queries: &[&Query], opts: &OracleOptions) -> Result<Signature, OracleError> {
    match &opts.signature {
        Some(sig) => {
            for q in queries {
                sig.check_formula(q.formula())?;
            }
            Ok(sig.clone())
        }
        None => Ok(Signature::infer(queries.iter().map(|q| q.formula()))?),
    }
}

/// Accepts a value when its fresh constants appear in canonical order, so
/// only one representative per permutation of the fresh constants is visited.
fn admit(t: &Term, used: usize, fresh: &[Sym]) -> Option<usize> {
    match t {
        Term::Var(_) => Some(used),
        Term::App(f, args) if args.is_empty() => match fresh.iter().position(|c| c == f) {
            Some(i) if i < used => Some(used),
            Some(i) if i == used => Some(used + 1),
            Some(_) => None,
            None => Some(used),
        },
        Term::App(_, args) => args.iter().try_fold(used, |u, a| admit(a, u, fresh)),
    }
}

/// The mgu of `flat`'s equations applied to `vars`, and the variables left
/// open in the result. `None` when `flat` has no solutions at all.
fn prepare(flat: &Flat, vars: &[Var]) -> Option<(Vec<Term>, Vec<Var>)> {
    if flat.falsum {
        return None;
    }
    let mgu = unify(&flat.eqs)?;
    let terms: Vec<Term> = vars
        .iter()
        .map(|v| unify::resolve(&Term::Var(v.clone()), &mgu))
        .collect();
    let mut params = Vec::new();
    for t in &terms {
        t.vars_in_order(&mut params);
    }
    let mut seen = BTreeSet::new();
    params.retain(|v| seen.insert(v.clone()));
    Some((terms, params))
}

/// Calls `visit` with every instance of `terms` obtained by assigning
/// `params`, up to permutation of fresh constants. Stops early when `visit`
/// returns `false`.
fn for_each_solution(
    vars: &[Var],
    terms: &[Term],
    params: &[Var],
    model: &FiniteModel,
    visit: &mut dyn FnMut(&Valuation) -> bool,
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        used: usize,
        params: &[Var],
        g: &mut Valuation,
        vars: &[Var],
        terms: &[Term],
        model: &FiniteModel,
        visit: &mut dyn FnMut(&Valuation) -> bool,
    ) -> bool {
        if i == params.len() {
            let h: Valuation = vars
                .iter()
                .zip(terms)
                .map(|(v, t)| (v.clone(), model.eval_term(t, g).expect("params assigned")))
                .collect();
            return visit(&h);
        }
        for d in model.elements() {
            if let Some(u) = admit(d, used, model.fresh_constants()) {
                g.insert(params[i].clone(), d.clone());
                if !go(i + 1, u, params, g, vars, terms, model, visit) {
                    return false;
                }
            }
        }
        true
    }
    go(
        0,
        0,
        params,
        &mut Valuation::new(),
        vars,
        terms,
        model,
        visit,
    );
}

/// Largest Herbrand universe the deepening search will build.
const UNIVERSE_CAP: usize = 100_000;

enum Outcome<T> {
    Found(FiniteModel, T),
    Done(Verdict),
}

/// Enumerates the solutions of `flat` until `test` returns a counterexample.
/// Over constants-only signatures one closed model decides the question.
/// Otherwise the Herbrand depth grows up to `opts.depth`, stopping early
/// when the next universe or enumeration would exceed the budget; the
/// verdict then names the last depth that was covered in full.
fn search<T>(
    sig: &Signature,
    k: usize,
    opts: &OracleOptions,
    flat: &Flat,
    vars: &[Var],
    enumerated: &mut usize,
    test: &mut dyn FnMut(&Valuation) -> Option<T>,
) -> Outcome<T> {
    let Some((terms, params)) = prepare(flat, vars) else {
        return Outcome::Done(Verdict::Confirmed);
    };
    let depths = if sig.is_constants_only() {
        0..=0
    } else {
        0..=opts.depth
    };
    let mut reached = None;
    for d in depths {
        let Some(model) = FiniteModel::herbrand_capped(sig, k, d, UNIVERSE_CAP) else {
            break;
        };
        let estimate = model.elements().len().saturating_pow(params.len() as u32);
        if reached.is_some() && estimate > opts.max_interps - *enumerated {
            break;
        }
        let mut found = None;
        let mut capped = false;
        for_each_solution(vars, &terms, &params, &model, &mut |h| {
            if *enumerated == opts.max_interps {
                capped = true;
                return false;
            }
            *enumerated += 1;
            found = test(h);
            found.is_none()
        });
        if let Some(x) = found {
            return Outcome::Found(model, x);
        }
        if capped {
            break;
        }
        if model.is_closed() {
            return Outcome::Done(Verdict::Confirmed);
        }
        reached = Some(d);
    }
    Outcome::Done(match reached {
        Some(depth) => Verdict::BoundedAgreement { depth },
        None => Verdict::Inconclusive,
    })
}

fn unsatisfiable(q: &Query) -> bool {
    let flat = flatten(q.formula(), &mut FreshVars::avoiding(q.all_vars()));
    prepare(&flat, &[]).is_none()
}

/// Exact membership of `h` in the solutions of `flat` under the singleton
/// multiinterpretation `support`, over the full Herbrand universe.
fn member(flat: &Flat, h: &Valuation, support: &[Atom]) -> bool {
    if flat.falsum || flat.atoms.len() != support.len() {
        return false;
    }
    let mut pairs: Vec<(Term, Term)> = flat
        .eqs
        .iter()
        .map(|(s, t)| (s.substitute(h), t.substitute(h)))
        .collect();
    for (a, g) in flat.atoms.iter().zip(support) {
        if a.pred != g.pred || a.args.len() != g.args.len() {
            return false;
        }
        pairs.extend(
            a.args
                .iter()
                .map(|t| t.substitute(h))
                .zip(g.args.iter().cloned()),
        );
    }
    unify(&pairs).is_some()
}

fn ground_atom(a: &Atom, h: &Valuation) -> Atom {
    a.substitute(h)
}

/// Decides `q1 ⪯ q2`. Queries with different atom counts are refuted
/// unless both have no solutions at all, in which case their solution sets
/// agree (both empty) under every multiinterpretation.
pub fn check_leq(q1: &Query, q2: &Query, opts: &OracleOptions) -> Result<Report, OracleError> {
    if q1.card() != q2.card() {
        let verdict = if unsatisfiable(q1) && unsatisfiable(q2) {
            Verdict::Confirmed
        } else {
            Verdict::Refuted(None)
        };
        return Ok(Report {
            verdict,
            enumerated: 0,
        });
    }
    let sig = signature_for(&[q1, q2], opts)?;
    let k = opts
        .fresh_constants
        .unwrap_or_else(|| default_fresh([q1, q2]));
    let mut fresh = FreshVars::avoiding(q1.all_vars().into_iter().chain(q2.all_vars()));
    let flat1 = flatten(q1.formula(), &mut fresh);
    let flat2 = flatten(q2.formula(), &mut fresh);
    let free: Vec<Var> = q1.free_vars().union(&q2.free_vars()).cloned().collect();
    let vars: Vec<Var> = free.iter().chain(&flat1.bound).cloned().collect();

    let mut enumerated = 0;
    let outcome = search(&sig, k, opts, &flat1, &vars, &mut enumerated, &mut |h| {
        let support: Vec<Atom> = flat1.atoms.iter().map(|a| ground_atom(a, h)).collect();
        let hf: Valuation = free.iter().map(|v| (v.clone(), h[v].clone())).collect();
        (!member(&flat2, &hf, &support)).then_some((hf, support))
    });
    let verdict = match outcome {
        Outcome::Found(model, (valuation, support)) => {
            if model.is_closed() {
                recheck(&model, q1, q2, &valuation, &support)?;
            }
            Verdict::Refuted(Some(Witness {
                valuation,
                support,
                solves: Side::Left,
            }))
        }
        Outcome::Done(v) => v,
    };
    Ok(Report {
        verdict,
        enumerated,
    })
}

fn recheck(
    model: &FiniteModel,
    q1: &Query,
    q2: &Query,
    h: &Valuation,
    support: &[Atom],
) -> Result<(), OracleError> {
    let ibar: MultiInterp = support
        .iter()
        .map(|a| BTreeSet::from([a.clone()]))
        .collect();
    if model.satisfies(q1, &ibar, h)? && !model.satisfies(q2, &ibar, h)? {
        Ok(())
    } else {
        Err(OracleError::Recheck(display_valuation(h)))
    }
}

/// Decides `q1 ≈ q2` as `⪯` in both directions.
pub fn check_equiv(q1: &Query, q2: &Query, opts: &OracleOptions) -> Result<Report, OracleError> {
    let there = check_leq(q1, q2, opts)?;
    if there.verdict.is_refuted() {
        return Ok(there);
    }
    let mut back = check_leq(q2, q1, opts)?;
    back.enumerated += there.enumerated;
    if let Verdict::Refuted(Some(w)) = &mut back.verdict {
        w.solves = Side::Right;
        return Ok(back);
    }
    back.verdict = match (&there.verdict, &back.verdict) {
        (Verdict::Confirmed, Verdict::Confirmed) => Verdict::Confirmed,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        (Verdict::BoundedAgreement { depth }, _) | (_, Verdict::BoundedAgreement { depth }) => {
            Verdict::BoundedAgreement { depth: *depth }
        }
        _ => unreachable!("refutations returned above"),
    };
    Ok(back)
}

/// Decides `E ⪯ E1 ∨ ... ∨ En`, where the disjunction is read pointwise on
/// solution sets. A refutation is a solution of `E` outside every `Ei`.
pub fn check_leq_disjunction(
    e: &EFormula,
    es: &[EFormula],
    opts: &OracleOptions,
) -> Result<Report, OracleError> {
    let mut queries: Vec<&Query> = vec![e.query()];
    queries.extend(es.iter().map(EFormula::query));
    let sig = signature_for(&queries, opts)?;
    let k = opts
        .fresh_constants
        .unwrap_or_else(|| default_fresh(queries.iter().copied()));
    let mut fresh = FreshVars::avoiding(queries.iter().flat_map(|q| q.all_vars()));
    let flat = flatten(e.formula(), &mut fresh);
    let flats: Vec<Flat> = es
        .iter()
        .map(|x| flatten(x.formula(), &mut fresh))
        .collect();
    let free: Vec<Var> = queries
        .iter()
        .flat_map(|q| q.free_vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vars: Vec<Var> = free.iter().chain(&flat.bound).cloned().collect();

    let mut enumerated = 0;
    let outcome = search(&sig, k, opts, &flat, &vars, &mut enumerated, &mut |h| {
        let hf: Valuation = free.iter().map(|v| (v.clone(), h[v].clone())).collect();
        (!flats.iter().any(|f| member(f, &hf, &[]))).then_some(hf)
    });
    let verdict = match outcome {
        Outcome::Found(_, valuation) => Verdict::Refuted(Some(Witness {
            valuation,
            support: Vec::new(),
            solves: Side::Left,
        })),
        Outcome::Done(v) => v,
    };
    Ok(Report {
        verdict,
        enumerated,
    })
}

/// Compares `E1 ∨ ... ∨ En` with `target` by direct evaluation of every
/// valuation in `model`.
pub fn check_disjunction_equiv_in(
    model: &FiniteModel,
    es: &[EFormula],
    target: &EFormula,
) -> Report {
    let empty = Interpretation::new();
    let mut vars = target.free_vars();
    for e in es {
        vars.extend(e.free_vars());
    }
    let mut enumerated = 0;
    for h in model.valuations(&vars) {
        enumerated += 1;
        let left = es
            .iter()
            .any(|e| model.eval_formula(e.formula(), &empty, &h));
        let right = model.eval_formula(target.formula(), &empty, &h);
        if left != right {
            return Report {
                verdict: Verdict::Refuted(Some(Witness {
                    valuation: h,
                    support: Vec::new(),
                    solves: if left { Side::Left } else { Side::Right },
                })),
                enumerated,
            };
        }
    }
    let verdict = match model.depth() {
        None => Verdict::Confirmed,
        Some(depth) => Verdict::BoundedAgreement { depth },
    };
    Report {
        verdict,
        enumerated,
    }
}

/// Kernel by brute force: the intersection of all `X ⊆ DOM(σ)` with
/// `σ|X ≈ σ`.
pub fn kernel_oracle(sigma: &Substitution) -> Result<BTreeSet<Var>, SubstError> {
    let dom: Vec<Var> = sigma.bindings()?.keys().cloned().collect();
    let mut kernel: BTreeSet<Var> = dom.iter().cloned().collect();
    for mask in 0u64..(1 << dom.len()) {
        let xs: BTreeSet<Var> = dom
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        if sigma.restrict(&xs).equivalent(sigma) {
            kernel = kernel.intersection(&xs).cloned().collect();
        }
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_query, parse_substitution, parse_var_set};

    fn q(s: &str) -> Query {
        parse_query(s).unwrap()
    }

    fn e(s: &str) -> EFormula {
        s.parse().unwrap()
    }

    fn opts() -> OracleOptions {
        OracleOptions::default()
    }

    fn c(s: &str) -> Term {
        Term::constant(s)
    }

    #[test]
    fn equiv_examples() {
        let r = check_equiv(&q("exists Z . X = Z & Y = Z"), &q("X = Y"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        let r = check_equiv(&q("X = f(a)"), &q("exists V . X = f(V)"), &opts()).unwrap();
        let w = r.verdict.witness().expect("refuted");
        assert_eq!(w.solves, Side::Right);
        assert_eq!(display_valuation(&w.valuation), "{X -> f(c1)}");
    }

    #[test]
    fn leq_uses_supports() {
        let r = check_leq(&q("p(a)"), &q("exists Z . p(Z)"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        let r = check_leq(&q("exists Z . p(Z)"), &q("p(a)"), &opts()).unwrap();
        assert!(r.verdict.is_refuted());
        let r = check_leq(&q("p(X) & p(X)"), &q("p(X) & exists Z . p(Z)"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        let r = check_leq(&q("p(X)"), &q("p(X) & p(X)"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted(None));
        let r = check_equiv(&q("p(X) & a = b"), &q("false"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        let r = check_equiv(&q("p(X) & X = X"), &q("false"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted(None));
    }

    #[test]
    fn inconsistent_left_side() {
        let r = check_leq(&q("a = b & p(X)"), &q("p(Y)"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        assert_eq!(r.enumerated, 0);
    }

    #[test]
    fn functions_bound_the_answer() {
        let r = check_equiv(&q("X = f(Y)"), &q("exists Z . X = f(Z) & Y = Z"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedAgreement { depth: 3 });
    }

    #[test]
    fn multiinterpretation_semantics() {
        let m = FiniteModel::constants([Sym::from("a"), Sym::from("b")], 0);
        let ibar = vec![
            BTreeSet::from([Atom::new("p", vec![c("a")])]),
            BTreeSet::from([Atom::new("p", vec![c("b")])]),
        ];
        let xs = parse_var_set("X").unwrap();
        assert!(m
            .solutions(&q("p(X) & p(X)"), &ibar, &xs)
            .unwrap()
            .is_empty());
        let sols = m.solutions(&q("X = a"), &[], &xs).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(m.solutions(&q("true"), &[], &xs).unwrap().len(), 2);
        assert!(matches!(
            m.solutions(&q("p(X)"), &[], &xs),
            Err(OracleError::ArityMismatch {
                interps: 0,
                card: 1
            })
        ));
    }

    #[test]
    fn formula_evaluation() {
        let m = FiniteModel::constants([Sym::from("a"), Sym::from("b")], 0);
        let none = Interpretation::new();
        let h = Valuation::new();
        let f = |s: &str| crate::parse::parse_formula(s).unwrap();
        assert!(m.eval_formula(&f("a = a"), &none, &h));
        assert!(!m.eval_formula(&f("forall X . X = a"), &none, &h));
        assert!(m.eval_formula(&f("p(a) -> p(a)"), &none, &h));
    }

    #[test]
    fn instance_examples() {
        let m = FiniteModel::constants([Sym::from("a"), Sym::from("b")], 0);
        let xs = parse_var_set("X, Z").unwrap();
        let inst = |s: &str| m.instances(&parse_substitution(s).unwrap(), &xs);
        assert_eq!(inst("{}").len(), 4);
        assert_eq!(inst("{X -> a}").len(), 2);
        let same = inst("{X -> Y, Z -> Y}");
        assert_eq!(same.len(), 2);
        assert!(same.iter().all(|h| h[&Var::new("X")] == h[&Var::new("Z")]));
    }

    #[test]
    fn single_constant_counterexample() {
        let sig = Signature::new()
            .with_function("a", 0)
            .unwrap()
            .with_function("f", 1)
            .unwrap();
        let es = [e("X = a"), e("exists Z . X = f(Z)")];
        for d in 1..=4 {
            let m = FiniteModel::herbrand(&sig, 0, d);
            let r = check_disjunction_equiv_in(&m, &es, &EFormula::truth());
            assert_eq!(r.verdict, Verdict::BoundedAgreement { depth: d });
        }
        let r = check_leq_disjunction(&EFormula::truth(), &es, &opts()).unwrap();
        assert!(r.verdict.is_refuted());
    }

    #[test]
    fn brute_force_kernel() {
        let k = kernel_oracle(&parse_substitution("{X -> f(Y), Y -> Y, Z -> W}").unwrap()).unwrap();
        assert_eq!(k, parse_var_set("X, Y").unwrap());
        assert!(kernel_oracle(&Substitution::Bottom).is_err());
    }

    #[test]
    fn structures_evaluate_through_tables() {
        let consts = BTreeMap::from([(Sym::from("a"), 1)]);
        let funcs = BTreeMap::from([(Sym::from("f"), (1, vec![1, 0]))]);
        let m = FiniteModel::structure(2, &consts, &funcs).unwrap();
        let f = |s: &str| crate::parse::parse_formula(s).unwrap();
        let none = Interpretation::new();
        assert!(m.eval_formula(&f("f(f(a)) = a"), &none, &Valuation::new()));
        assert!(!m.eval_formula(&f("f(a) = a"), &none, &Valuation::new()));
        assert!(FiniteModel::structure(
            2,
            &consts,
            &BTreeMap::from([(Sym::from("f"), (1, vec![1]))])
        )
        .is_err());
    }
}
