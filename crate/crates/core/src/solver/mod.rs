//! Transformation of queries into solved form and the decisions built on it.

mod node;
mod order;
mod solved;
mod steps;
mod trace;

use thiserror::Error;

use crate::formula::Query;
use crate::var::FreshVars;
use node::Node;

pub use order::{equivalent, more_general, query_diff, solved_more_general, AlignmentError};
pub use solved::{is_solved_form, SolvedBody, SolvedForm};
pub use trace::{ReplayError, RewriteTrace, TraceStep};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step budget of {0} exhausted")]
pub struct BudgetExceeded(pub usize);

/// Configurable driver for the solved-form transformation.
#[derive(Clone, Debug)]
pub struct Solver {
    budget: usize,
    record: bool,
}

impl Default for Solver {
    fn default() -> Solver {
        Solver {
            budget: usize::MAX,
            record: true,
        }
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver::default()
    }

    pub fn budget(mut self, steps: usize) -> Solver {
        self.budget = steps;
        self
    }

    /// Skips recording the trace.
    pub fn quiet(mut self) -> Solver {
        self.record = false;
        self
    }

    pub fn run(&self, q: &Query) -> Result<(SolvedForm, RewriteTrace), BudgetExceeded> {
        let mut fresh = FreshVars::new();
        self.run_with(q, &mut fresh)
    }

    /// Runs with an explicit fresh-variable generator. Every variable of `q`
    /// is added to its avoid set first.
    pub fn run_with(
        &self,
        q: &Query,
        fresh: &mut FreshVars,
    ) -> Result<(SolvedForm, RewriteTrace), BudgetExceeded> {
        fresh.avoid_all(q.all_vars());
        let mut root = Node::from_formula(q.formula());
        let mut trace = RewriteTrace::default();
        let mut used = 0;
        while let Some(rw) = steps::next_rewrite(&root, fresh) {
            if used == self.budget {
                return Err(BudgetExceeded(self.budget));
            }
            used += 1;
            if self.record {
                trace.steps.push(TraceStep {
                    step: rw.step,
                    path: rw.path.clone(),
                    before: root.at(&rw.path).to_formula(),
                    after: rw.replacement.to_formula(),
                });
            }
            root.graft(&rw.path, rw.replacement);
        }
        let q = Query::new(root.to_formula()).expect("rewriting preserves queries");
        let solved =
            SolvedForm::from_query(&q).unwrap_or_else(|| panic!("normal form is not solved: {q}"));
        Ok((solved, trace))
    }
}

/// Solved form of `q` with the rewrite trace.
pub fn solve(q: &Query) -> (SolvedForm, RewriteTrace) {
    Solver::new().run(q).expect("unbounded budget")
}

/// Solved form of `q`, without recording a trace.
pub fn solved_form(q: &Query) -> SolvedForm {
    Solver::new().quiet().run(q).expect("unbounded budget").0
}

pub fn is_consistent(q: &Query) -> bool {
    solved_form(q).is_consistent()
}
