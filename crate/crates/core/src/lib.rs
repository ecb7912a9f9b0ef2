//! Unification theory for positive conjunctive queries.
//!
//! Queries are built from `TRUE`, `FALSE`, equations, atoms, conjunction and
//! existential quantification. This crate transforms them to solved form,
//! decides the generality preorder and equivalence, implements the algebra of
//! finite substitutions and the lattice of E-formulas (atom-free queries), and
//! provides a finite-model oracle used to cross-check the symbolic procedures.

pub mod diff;
pub mod formula;
pub mod fuzz;
pub mod lattice;
pub mod oracle;
pub mod parse;
mod print;
pub mod signature;
pub mod solver;
pub mod subst;
pub mod term;
pub mod var;

pub use diff::diff_set;
pub use formula::{Formula, NotAQuery, Query, ReplaceError};
pub use lattice::{
    join, join_all, kernel_e, meet, meet_all, project, to_eformula, to_substitution, EFormula,
    LatticeError,
};
pub use parse::{
    parse_formula, parse_query, parse_substitution, parse_term, parse_var_set, SyntaxError,
};
pub use signature::{Signature, SignatureError};
pub use solver::{
    equivalent, is_consistent, is_solved_form, more_general, query_diff, solve, solved_form,
    RewriteTrace, SolvedBody, SolvedForm, Solver,
};
pub use subst::{SubstError, Substitution};
pub use term::{Atom, Sym, Term};
pub use var::{FreshVars, Var};
