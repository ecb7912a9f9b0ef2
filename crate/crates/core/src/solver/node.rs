use std::collections::BTreeSet;

use crate::formula::Formula;
use crate::term::{Atom, Term};
use crate::var::Var;

/// Working representation of a query: conjunctions are n-ary and kept flat.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Node {
    True,
    False,
    Eq(Term, Term),
    Atom(Atom),
    And(Vec<Node>),
    Exists(Var, Box<Node>),
}

impl Node {
    pub(crate) fn from_formula(f: &Formula) -> Node {
        match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Eq(s, t) => Node::Eq(s.clone(), t.clone()),
            Formula::Atom(a) => Node::Atom(a.clone()),
            Formula::And(a, b) => Node::conj(vec![Node::from_formula(a), Node::from_formula(b)]),
            Formula::Exists(x, g) => Node::Exists(x.clone(), Box::new(Node::from_formula(g))),
            other => panic!("not a query: {other}"),
        }
    }

    pub(crate) fn to_formula(&self) -> Formula {
        match self {
            Node::True => Formula::True,
            Node::False => Formula::False,
            Node::Eq(s, t) => Formula::Eq(s.clone(), t.clone()),
            Node::Atom(a) => Formula::Atom(a.clone()),
            Node::And(cs) => Formula::and_all(cs.iter().map(Node::to_formula)),
            Node::Exists(x, g) => Formula::exists(x.clone(), g.to_formula()),
        }
    }

    /// Flattening conjunction; the empty one is `TRUE`, a singleton is its member.
    pub(crate) fn conj(children: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Node::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Node::True,
            1 => flat.pop().expect("one element"),
            _ => Node::And(flat),
        }
    }

    pub(crate) fn at(&self, path: &[usize]) -> &Node {
        let mut n = self;
        for &i in path {
            n = match n {
                Node::And(cs) => &cs[i],
                Node::Exists(_, g) => g,
                _ => panic!("path runs through a leaf"),
            };
        }
        n
    }

    fn at_mut(&mut self, path: &[usize]) -> &mut Node {
        let mut n = self;
        for &i in path {
            n = match n {
                Node::And(cs) => &mut cs[i],
                Node::Exists(_, g) => g,
                _ => panic!("path runs through a leaf"),
            };
        }
        n
    }

    /// Replaces the subtree at `path`. A conjunction grafted into a
    /// conjunction is spliced in place.
    pub(crate) fn graft(&mut self, path: &[usize], new: Node) {
        let Some((&last, parent_path)) = path.split_last() else {
            *self = new;
            return;
        };
        let parent = self.at_mut(parent_path);
        match parent {
            Node::And(cs) => match new {
                Node::And(inner) => {
                    cs.splice(last..=last, inner);
                }
                other => cs[last] = other,
            },
            Node::Exists(_, g) => **g = new,
            _ => panic!("path runs through a leaf"),
        }
    }

    pub(crate) fn is_free(&self, x: &Var) -> bool {
        match self {
            Node::True | Node::False => false,
            Node::Eq(s, t) => s.occurs(x) || t.occurs(x),
            Node::Atom(a) => a.occurs(x),
            Node::And(cs) => cs.iter().any(|c| c.is_free(x)),
            Node::Exists(y, g) => y != x && g.is_free(x),
        }
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Node::True | Node::False => {}
            Node::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Node::Atom(a) => a.collect_vars(out),
            Node::And(cs) => cs.iter().for_each(|c| c.collect_free(out)),
            Node::Exists(y, g) => {
                let mut inner = BTreeSet::new();
                g.collect_free(&mut inner);
                inner.remove(y);
                out.extend(inner);
            }
        }
    }

    /// Replaces free occurrences of `x` by `t`. Callers guarantee that `t`
    /// cannot be captured.
    pub(crate) fn subst_free(&self, x: &Var, t: &Term) -> Node {
        match self {
            Node::True | Node::False => self.clone(),
            Node::Eq(a, b) => Node::Eq(a.substitute_one(x, t), b.substitute_one(x, t)),
            Node::Atom(a) => Node::Atom(a.substitute_one(x, t)),
            Node::And(cs) => Node::And(cs.iter().map(|c| c.subst_free(x, t)).collect()),
            Node::Exists(y, g) if y == x => self.clone(),
            Node::Exists(y, g) => Node::Exists(y.clone(), Box::new(g.subst_free(x, t))),
        }
    }

    pub(crate) fn contains_false(&self) -> bool {
        match self {
            Node::False => true,
            Node::And(cs) => cs.iter().any(Node::contains_false),
            Node::Exists(_, g) => g.contains_false(),
            _ => false,
        }
    }

    pub(crate) fn is_flat_item(&self) -> bool {
        matches!(self, Node::Eq(..) | Node::Atom(_))
    }
}
