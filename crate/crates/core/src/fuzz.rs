//! Seeded random generators for terms, queries, substitutions and formulas,
//! plus the isomorphic transformations on solved forms and non-isomorphic
//! perturbations used by the property tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Query};
use crate::lattice::EFormula;
use crate::signature::Signature;
use crate::solver::SolvedBody;
use crate::subst::Substitution;
use crate::term::{Atom, Sym, Term};
use crate::var::{FreshVars, Var};

/// Signature with constants `a, b, ...` and the given predicates.
pub fn constants_signature(constants: usize, predicates: &[(&str, usize)]) -> Signature {
    let mut sig = Signature::new();
    for i in 0..constants {
        let name = ((b'a' + i as u8) as char).to_string();
        sig.add_function(&name, 0).expect("valid constant");
    }
    for (p, n) in predicates {
        sig.add_predicate(p, *n).expect("valid predicate");
    }
    sig
}

pub struct Gen {
    rng: ChaCha8Rng,
    constants: Vec<Sym>,
    functions: Vec<(Sym, usize)>,
    predicates: Vec<(Sym, usize)>,
    vars: Vec<Var>,
    /// Maximum term depth.
    pub depth: usize,
    /// Probability that a leaf is `FALSE` or `TRUE`.
    pub truth_rate: f64,
}

impl Gen {
    /// Generator over `sig` using the first `vars` variables of the
    /// enumeration.
    pub fn new(seed: u64, sig: &Signature, vars: usize) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            constants: sig.constants(),
            functions: sig
                .functions()
                .filter(|(_, n)| *n > 0)
                .map(|(f, n)| (f.clone(), n))
                .collect(),
            predicates: sig.predicates().map(|(p, n)| (p.clone(), n)).collect(),
            vars: (0..vars as u64).map(Var::nth).collect(),
            depth: 2,
            truth_rate: 0.04,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    fn var(&mut self) -> Var {
        self.vars.choose(&mut self.rng).expect("variables").clone()
    }

    fn constant(&mut self) -> Term {
        Term::App(
            self.constants
                .choose(&mut self.rng)
                .expect("constants")
                .clone(),
            Vec::new(),
        )
    }

    pub fn term(&mut self, depth: usize) -> Term {
        let leaf = depth == 0 || self.functions.is_empty() || self.rng.gen_bool(0.45);
        if leaf {
            if !self.vars.is_empty() && (self.constants.is_empty() || self.rng.gen_bool(0.65)) {
                Term::Var(self.var())
            } else {
                self.constant()
            }
        } else {
            let (f, n) = self
                .functions
                .choose(&mut self.rng)
                .expect("functions")
                .clone();
            Term::App(f, (0..n).map(|_| self.term(depth - 1)).collect())
        }
    }

    pub fn atom(&mut self) -> Atom {
        let (p, n) = self
            .predicates
            .choose(&mut self.rng)
            .expect("predicates")
            .clone();
        let depth = self.depth;
        Atom {
            pred: p,
            args: (0..n).map(|_| self.term(depth)).collect(),
        }
    }

    fn leaf(&mut self, atoms: bool) -> Formula {
        let r: f64 = self.rng.gen();
        if r < self.truth_rate / 2.0 {
            Formula::False
        } else if r < self.truth_rate {
            Formula::True
        } else if atoms && !self.predicates.is_empty() && self.rng.gen_bool(0.35) {
            Formula::Atom(self.atom())
        } else {
            let d = self.depth;
            let s = self.term(d);
            let t = self.term(d);
            Formula::Eq(s, t)
        }
    }

    fn query_formula(&mut self, nodes: usize, atoms: bool) -> Formula {
        if nodes <= 1 {
            return self.leaf(atoms);
        }
        match self.rng.gen_range(0..10) {
            0..=5 => {
                let left = self.rng.gen_range(1..nodes);
                let a = self.query_formula(left, atoms);
                let b = self.query_formula(nodes - left, atoms);
                Formula::and(a, b)
            }
            6..=8 => {
                let x = self.var();
                let body = self.query_formula(nodes - 1, atoms);
                Formula::exists(x, body)
            }
            _ => self.leaf(atoms),
        }
    }

    /// A query with about `nodes` connectives and leaves.
    pub fn query(&mut self, nodes: usize) -> Query {
        Query::new(self.query_formula(nodes, true)).expect("positive conjunctive")
    }

    pub fn eformula(&mut self, nodes: usize) -> EFormula {
        EFormula::new(Query::new(self.query_formula(nodes, false)).expect("query"))
            .expect("no atoms")
    }

    /// A consistent E-formula, retrying until one solves to something other
    /// than `FALSE`.
    pub fn consistent_eformula(&mut self, nodes: usize) -> EFormula {
        loop {
            let e = self.eformula(nodes);
            if e.is_consistent() {
                return e;
            }
        }
    }

    /// A substitution with up to `dom` bindings over the generator's variables.
    pub fn substitution(&mut self, dom: usize) -> Substitution {
        let mut vars = self.vars.clone();
        vars.shuffle(&mut self.rng);
        let n = self.rng.gen_range(0..=dom.min(vars.len()));
        let depth = self.depth;
        Substitution::from_pairs(vars.into_iter().take(n).map(|x| {
            let t = self.term(depth);
            (x, t)
        }))
    }

    /// A first-order formula with all connectives.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 {
            return self.leaf(true);
        }
        match self.rng.gen_range(0..9) {
            0 => Formula::not(self.formula(depth - 1)),
            1 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::implies(self.formula(depth - 1), self.formula(depth - 1)),
            4 => Formula::iff(self.formula(depth - 1), self.formula(depth - 1)),
            5 => {
                let x = self.var();
                Formula::exists(x, self.formula(depth - 1))
            }
            6 => {
                let x = self.var();
                Formula::forall(x, self.formula(depth - 1))
            }
            _ => self.leaf(true),
        }
    }
}

/// Transformation (a): permute equations and bound variables.
pub fn permute<R: Rng>(b: &SolvedBody, rng: &mut R) -> SolvedBody {
    let mut out = b.clone();
    out.eqns.shuffle(rng);
    out.bound.shuffle(rng);
    out
}

/// Transformation (b): rename bound variables to fresh ones.
pub fn rename_bound<R: Rng>(b: &SolvedBody, rng: &mut R) -> SolvedBody {
    let mut fresh = FreshVars::avoiding(b.all_vars());
    let skip = rng.gen_range(0..4);
    for _ in 0..skip {
        fresh.fresh();
    }
    let map: BTreeMap<Var, Var> = b.bound.iter().map(|z| (z.clone(), fresh.fresh())).collect();
    let mut out = b.rename(&map);
    out.bound = b.bound.iter().map(|z| map[z].clone()).collect();
    out
}

/// Transformation (c): pick equations `u = v` with distinct parameters `v`
/// and swap each `u` with its `v` everywhere.
pub fn redirect<R: Rng>(b: &SolvedBody, rng: &mut R) -> SolvedBody {
    let params = b.params();
    let mut used = BTreeSet::new();
    let mut swap = BTreeMap::new();
    for (u, t) in &b.eqns {
        if let Term::Var(v) = t {
            if params.contains(v) && !used.contains(v) && rng.gen_bool(0.7) {
                used.insert(v.clone());
                swap.insert(u.clone(), v.clone());
                swap.insert(v.clone(), u.clone());
            }
        }
    }
    b.rename(&swap)
}

/// A random sequence of the three isomorphic transformations.
pub fn isomorphic_variant<R: Rng>(b: &SolvedBody, rng: &mut R) -> SolvedBody {
    let mut out = b.clone();
    for _ in 0..rng.gen_range(1..=4) {
        out = match rng.gen_range(0..3) {
            0 => permute(&out, rng),
            1 => rename_bound(&out, rng),
            _ => redirect(&out, rng),
        };
    }
    out
}

/// Changes the body so that it is, as a rule, no longer isomorphic: replaces
/// a right-hand side or atom argument, or drops or adds an equation. The
/// result is a query with the same number of atoms.
pub fn perturb(b: &SolvedBody, gen: &mut Gen) -> Query {
    let mut out = b.clone();
    let d = gen.depth;
    match gen.rng().gen_range(0..4) {
        0 if !out.eqns.is_empty() => {
            let i = gen.rng().gen_range(0..out.eqns.len());
            out.eqns[i].1 = gen.term(d);
        }
        1 if !out.atoms.is_empty() => {
            let i = gen.rng().gen_range(0..out.atoms.len());
            if !out.atoms[i].args.is_empty() {
                let j = gen.rng().gen_range(0..out.atoms[i].args.len());
                out.atoms[i].args[j] = gen.term(d);
            }
        }
        2 if !out.eqns.is_empty() => {
            let i = gen.rng().gen_range(0..out.eqns.len());
            out.eqns.remove(i);
        }
        _ => {
            let x = gen.var();
            let t = gen.term(d);
            let f = Formula::and(Formula::Eq(Term::Var(x), t), out.to_formula());
            return Query::new(f).expect("query");
        }
    }
    let bound: BTreeSet<Var> = out.bound.iter().cloned().collect();
    let mut body_vars = BTreeSet::new();
    for (x, t) in &out.eqns {
        body_vars.insert(x.clone());
        t.collect_vars(&mut body_vars);
    }
    out.atoms
        .iter()
        .for_each(|a| a.collect_vars(&mut body_vars));
    let bound: Vec<Var> = bound
        .into_iter()
        .filter(|z| body_vars.contains(z))
        .collect();
    let eqs = out
        .eqns
        .iter()
        .map(|(x, t)| Formula::Eq(Term::Var(x.clone()), t.clone()));
    let atoms = out.atoms.iter().cloned().map(Formula::Atom);
    let f = Formula::exists_all(&bound, Formula::and_all(eqs.chain(atoms)));
    Query::new(f).expect("query")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solved_form, SolvedForm};

    #[test]
    fn generators_are_deterministic() {
        let sig = constants_signature(2, &[("p", 1)]);
        let mut a = Gen::new(7, &sig, 3);
        let mut b = Gen::new(7, &sig, 3);
        for _ in 0..20 {
            assert_eq!(a.query(8), b.query(8));
        }
    }

    #[test]
    fn isomorphic_variants_canonicalize_alike() {
        let sig = constants_signature(2, &[("p", 2)])
            .with_function("f", 2)
            .unwrap();
        let mut gen = Gen::new(11, &sig, 4);
        for _ in 0..200 {
            let s = solved_form(&gen.query(10));
            if let SolvedForm::Body(b) = &s {
                let v = isomorphic_variant(b, gen.rng());
                assert!(v.check().is_ok());
                assert_eq!(SolvedForm::Body(v).canonicalize(), s.canonicalize());
            }
        }
    }
}
