//! The twelve elementary steps and the deterministic strategy that picks one.
//!
//! Priority: (12) > (2),(3) > (4) > (1) > (7) > (5),(6) > (9) > (8) > (10) > (11).
//! Within a priority class the innermost-leftmost candidate wins.

use std::collections::BTreeSet;

use super::node::Node;
use crate::term::Term;
use crate::var::{FreshVars, Var};

pub(crate) struct Rewrite {
    pub step: u8,
    pub path: Vec<usize>,
    pub replacement: Node,
}

/// An equation together with its surrounding conjunction.
struct EqSite<'a> {
    lhs: &'a Term,
    rhs: &'a Term,
    path: Vec<usize>,
    conj_path: Vec<usize>,
    /// Position inside the conjunction, `None` when the equation stands alone.
    index: Option<usize>,
    /// The quantifier prefix directly enclosing the conjunction.
    chain: Vec<Var>,
    /// All conjuncts are equations or atoms.
    flat: bool,
}

fn collect_sites<'a>(n: &'a Node, path: &mut Vec<usize>, chain: &[Var], out: &mut Vec<EqSite<'a>>) {
    match n {
        Node::Eq(s, t) => out.push(EqSite {
            lhs: s,
            rhs: t,
            path: path.clone(),
            conj_path: path.clone(),
            index: None,
            chain: chain.to_vec(),
            flat: true,
        }),
        Node::Exists(x, g) => {
            let mut inner = chain.to_vec();
            inner.push(x.clone());
            path.push(0);
            collect_sites(g, path, &inner, out);
            path.pop();
        }
        Node::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if !matches!(c, Node::Eq(..)) {
                    path.push(i);
                    collect_sites(c, path, &[], out);
                    path.pop();
                }
            }
            let flat = cs.iter().all(Node::is_flat_item);
            for (i, c) in cs.iter().enumerate() {
                if let Node::Eq(s, t) = c {
                    let mut p = path.clone();
                    p.push(i);
                    out.push(EqSite {
                        lhs: s,
                        rhs: t,
                        path: p,
                        conj_path: path.clone(),
                        index: Some(i),
                        chain: chain.to_vec(),
                        flat,
                    });
                }
            }
        }
        _ => {}
    }
}

/// Post-order list of the nodes satisfying `pred`, with their paths.
fn post_order<'a>(
    n: &'a Node,
    path: &mut Vec<usize>,
    pred: &dyn Fn(&Node) -> bool,
    out: &mut Vec<(Vec<usize>, &'a Node)>,
) {
    match n {
        Node::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                path.push(i);
                post_order(c, path, pred, out);
                path.pop();
            }
        }
        Node::Exists(_, g) => {
            path.push(0);
            post_order(g, path, pred, out);
            path.pop();
        }
        _ => {}
    }
    if pred(n) {
        out.push((path.clone(), n));
    }
}

fn first_post_order<'a>(
    root: &'a Node,
    pred: &dyn Fn(&Node) -> bool,
) -> Option<(Vec<usize>, &'a Node)> {
    let mut out = Vec::new();
    post_order(root, &mut Vec::new(), pred, &mut out);
    out.into_iter().next()
}

fn clash(s: &Term, t: &Term) -> bool {
    matches!((s, t), (Term::App(f, xs), Term::App(g, ys)) if f != g || xs.len() != ys.len())
}

fn occurs_check(s: &Term, t: &Term) -> bool {
    matches!(s, Term::Var(x) if !matches!(t, Term::Var(y) if y == x) && t.occurs(x))
}

fn local(step: u8, site: &EqSite, replacement: Node) -> Rewrite {
    Rewrite {
        step,
        path: site.path.clone(),
        replacement,
    }
}

/// Conjuncts of the site's conjunction, the equation itself included.
fn conjuncts<'a>(root: &'a Node, site: &EqSite) -> &'a [Node] {
    match root.at(&site.conj_path) {
        Node::And(cs) => cs,
        single => std::slice::from_ref(single),
    }
}

/// Steps (5) and (6) on `x = t`.
fn eliminate(root: &Node, site: &EqSite) -> Option<Rewrite> {
    if !site.flat {
        return None;
    }
    let Term::Var(x) = site.lhs else {
        return None;
    };
    let t = site.rhs;
    if t.occurs(x) {
        return None;
    }
    let own = site.index.unwrap_or(0);
    let cs = conjuncts(root, site);
    let bound = site.chain.contains(x);
    if !bound && !cs.iter().enumerate().any(|(i, c)| i != own && c.is_free(x)) {
        return None;
    }
    let children: Vec<Node> = cs
        .iter()
        .enumerate()
        .map(|(i, c)| match (i == own, bound) {
            (true, true) => Node::True,
            (true, false) => c.clone(),
            (false, _) => c.subst_free(x, t),
        })
        .collect();
    let replacement = if children.len() == 1 {
        children.into_iter().next().expect("one conjunct")
    } else {
        Node::And(children)
    };
    Some(Rewrite {
        step: if bound { 6 } else { 5 },
        path: site.conj_path.clone(),
        replacement,
    })
}

/// Step (9): pull the leftmost quantified conjunct out of its conjunction,
/// renaming bound variables that are free in the other conjuncts.
fn pull_exists(path: Vec<usize>, cs: &[Node], fresh: &mut FreshVars) -> Rewrite {
    let i = cs
        .iter()
        .position(|c| matches!(c, Node::Exists(..)))
        .expect("caller checked");
    let mut clash = BTreeSet::new();
    for (j, c) in cs.iter().enumerate() {
        if j != i {
            c.collect_free(&mut clash);
        }
    }
    let mut prefix = Vec::new();
    let mut cur = cs[i].clone();
    while let Node::Exists(y, g) = cur {
        if clash.contains(&y) {
            let z = fresh.fresh();
            cur = g.subst_free(&y, &Term::Var(z.clone()));
            prefix.push(z);
        } else {
            cur = *g;
            prefix.push(y);
        }
    }
    let mut children = cs.to_vec();
    children[i] = cur;
    let body = Node::conj(children);
    let replacement = prefix
        .into_iter()
        .rev()
        .fold(body, |acc, y| Node::Exists(y, Box::new(acc)));
    Rewrite {
        step: 9,
        path,
        replacement,
    }
}

pub(crate) fn next_rewrite(root: &Node, fresh: &mut FreshVars) -> Option<Rewrite> {
    if *root != Node::False && root.contains_false() {
        return Some(Rewrite {
            step: 12,
            path: Vec::new(),
            replacement: Node::False,
        });
    }

    let mut sites = Vec::new();
    collect_sites(root, &mut Vec::new(), &[], &mut sites);

    for site in &sites {
        if clash(site.lhs, site.rhs) {
            return Some(local(2, site, Node::False));
        }
        if occurs_check(site.lhs, site.rhs) {
            return Some(local(3, site, Node::False));
        }
    }
    for site in &sites {
        if let (Term::Var(x), Term::Var(y)) = (site.lhs, site.rhs) {
            if x == y {
                return Some(local(4, site, Node::True));
            }
        }
    }
    for site in &sites {
        if let (Term::App(f, xs), Term::App(g, ys)) = (site.lhs, site.rhs) {
            if f == g && xs.len() == ys.len() {
                let eqs = xs
                    .iter()
                    .zip(ys)
                    .map(|(a, b)| Node::Eq(a.clone(), b.clone()))
                    .collect();
                return Some(local(1, site, Node::conj(eqs)));
            }
        }
    }
    for site in &sites {
        let Term::Var(x) = site.rhs else { continue };
        let flip = match site.lhs {
            Term::App(..) => true,
            Term::Var(y) => {
                site.flat && y != x && !site.chain.contains(y) && site.chain.contains(x)
            }
        };
        if flip {
            return Some(local(7, site, Node::Eq(site.rhs.clone(), site.lhs.clone())));
        }
    }
    for site in &sites {
        if let Some(r) = eliminate(root, site) {
            return Some(r);
        }
    }

    let has_exists_child =
        |n: &Node| matches!(n, Node::And(cs) if cs.iter().any(|c| matches!(c, Node::Exists(..))));
    if let Some((path, Node::And(cs))) = first_post_order(root, &has_exists_child) {
        return Some(pull_exists(path, cs, fresh));
    }

    let vacuous = |n: &Node| matches!(n, Node::Exists(y, g) if !g.is_free(y));
    if let Some((path, Node::Exists(_, g))) = first_post_order(root, &vacuous) {
        return Some(Rewrite {
            step: 8,
            path,
            replacement: (**g).clone(),
        });
    }

    let atom_before_eq = |n: &Node| matches!(n, Node::And(cs) if cs.windows(2).any(|w| matches!((&w[0], &w[1]), (Node::Atom(_), Node::Eq(..)))));
    if let Some((path, Node::And(cs))) = first_post_order(root, &atom_before_eq) {
        let i = cs
            .windows(2)
            .position(|w| matches!((&w[0], &w[1]), (Node::Atom(_), Node::Eq(..))))
            .expect("predicate matched");
        let mut swapped = cs.clone();
        swapped.swap(i, i + 1);
        return Some(Rewrite {
            step: 10,
            path,
            replacement: Node::And(swapped),
        });
    }

    let has_true = |n: &Node| matches!(n, Node::And(cs) if cs.contains(&Node::True));
    if let Some((path, Node::And(cs))) = first_post_order(root, &has_true) {
        let i = cs
            .iter()
            .position(|c| *c == Node::True)
            .expect("predicate matched");
        let mut rest = cs.clone();
        rest.remove(i);
        return Some(Rewrite {
            step: 11,
            path,
            replacement: Node::conj(rest),
        });
    }

    None
}
