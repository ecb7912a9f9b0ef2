use std::fmt;

use super::node::Node;
use crate::formula::{Formula, Query};
use crate::parse::{parse_formula, SyntaxError};

/// One application of an elementary step. `path` lists child indices from the
/// root through n-ary conjunctions (quantifier bodies are child 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u8,
    pub path: Vec<usize>,
    pub before: Formula,
    pub after: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

fn path_text(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} at={} before={} after={}",
            self.step,
            path_text(&self.path),
            self.before,
            self.after
        )
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn bad(position: usize, expected: &str) -> SyntaxError {
    SyntaxError {
        position,
        expected: expected.to_string(),
    }
}

impl TraceStep {
    /// Parses a line produced by `Display`.
    pub fn parse_line(line: &str) -> Result<TraceStep, SyntaxError> {
        let rest = line
            .strip_prefix("step=")
            .ok_or_else(|| bad(0, "'step='"))?;
        let (step, rest) = rest
            .split_once(' ')
            .ok_or_else(|| bad(5, "a step number"))?;
        let step: u8 = step.parse().map_err(|_| bad(5, "a step number"))?;
        if !(1..=12).contains(&step) {
            return Err(bad(5, "a step number between 1 and 12"));
        }
        let rest = rest
            .strip_prefix("at=")
            .ok_or_else(|| bad(line.len() - rest.len(), "'at='"))?;
        let (at, rest) = rest
            .split_once(' ')
            .ok_or_else(|| bad(line.len() - rest.len(), "a path"))?;
        let path = if at == "root" {
            Vec::new()
        } else {
            at.split('.')
                .map(|p| p.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad(line.len() - rest.len() - at.len() - 1, "a path"))?
        };
        let offset = line.len() - rest.len();
        let rest = rest
            .strip_prefix("before=")
            .ok_or_else(|| bad(offset, "'before='"))?;
        let (before, after) = rest
            .split_once(" after=")
            .ok_or_else(|| bad(line.len(), "' after='"))?;
        let shift = |e: SyntaxError, base: usize| SyntaxError {
            position: e.position + base,
            expected: e.expected,
        };
        let before_at = offset + "before=".len();
        let after_at = before_at + before.len() + " after=".len();
        Ok(TraceStep {
            step,
            path,
            before: parse_formula(before).map_err(|e| shift(e, before_at))?,
            after: parse_formula(after).map_err(|e| shift(e, after_at))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {index}: subterm at the recorded position is {found}, trace says {expected}")]
    Mismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("step {index}: position does not exist")]
    BadPath { index: usize },
    #[error("step {index}: not a query")]
    NotAQuery { index: usize },
}

impl RewriteTrace {
    pub fn parse(text: &str) -> Result<RewriteTrace, SyntaxError> {
        let steps = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(TraceStep::parse_line)
            .collect::<Result<_, _>>()?;
        Ok(RewriteTrace { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every recorded step to `input`, checking each `before`.
    pub fn replay(&self, input: &Query) -> Result<Query, ReplayError> {
        let mut node = Node::from_formula(input.formula());
        for (index, s) in self.steps.iter().enumerate() {
            if !path_exists(&node, &s.path) {
                return Err(ReplayError::BadPath { index });
            }
            let found = node.at(&s.path).to_formula();
            if found != s.before {
                return Err(ReplayError::Mismatch {
                    index,
                    expected: s.before.to_string(),
                    found: found.to_string(),
                });
            }
            if !s.after.is_query() {
                return Err(ReplayError::NotAQuery { index });
            }
            node.graft(&s.path, Node::from_formula(&s.after));
        }
        Ok(Query::new(node.to_formula()).expect("grafting queries yields a query"))
    }
}

fn path_exists(n: &Node, path: &[usize]) -> bool {
    let Some((&i, rest)) = path.split_first() else {
        return true;
    };
    match n {
        Node::And(cs) => cs.get(i).is_some_and(|c| path_exists(c, rest)),
        Node::Exists(_, g) => i == 0 && path_exists(g, rest),
        _ => false,
    }
}
