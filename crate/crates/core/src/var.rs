use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A logical variable.
///
/// Variables are ordered by their position in the fixed enumeration
/// `X, Y, Z, U, V0, V1, V2, ...`. Names outside that enumeration sort after
/// all of it, lexicographically among themselves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(Arc<str>);

const LEADING: [&str; 4] = ["X", "Y", "Z", "U"];

/// Sort key of a variable. See [`Var::order_key`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrderKey<'a> {
    Enumerated(u64),
    Other(&'a str),
}

impl Var {
    pub fn new(name: impl AsRef<str>) -> Var {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The `i`-th variable of the enumeration.
    pub fn nth(i: u64) -> Var {
        if (i as usize) < LEADING.len() {
            Var::new(LEADING[i as usize])
        } else {
            Var::new(format!("V{}", i - LEADING.len() as u64))
        }
    }

    /// Position in the enumeration, if the name belongs to it.
    pub fn enumeration_index(&self) -> Option<u64> {
        if let Some(i) = LEADING.iter().position(|l| *l == &*self.0) {
            return Some(i as u64);
        }
        let digits = self.0.strip_prefix('V')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        let n: u64 = digits.parse().ok()?;
        n.checked_add(LEADING.len() as u64)
    }

    pub fn order_key(&self) -> OrderKey<'_> {
        match self.enumeration_index() {
            Some(i) => OrderKey::Enumerated(i),
            None => OrderKey::Other(&self.0),
        }
    }

    /// The first variable of the enumeration for which `taken` is false.
    pub fn first_not(mut taken: impl FnMut(&Var) -> bool) -> Var {
        (0..)
            .map(Var::nth)
            .find(|v| !taken(v))
            .expect("enumeration is infinite")
    }

    pub fn first_not_in(avoid: &BTreeSet<Var>) -> Var {
        Var::first_not(|v| avoid.contains(v))
    }

    /// True when `name` is a syntactically valid variable name.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_uppercase() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Var) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Var) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

/// Generator of fresh variables `V0, V1, ...`, skipping every name it was told
/// to avoid and every name it has already produced.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    next: u64,
    avoid: BTreeSet<Var>,
}

impl FreshVars {
    pub fn new() -> FreshVars {
        FreshVars::default()
    }

    pub fn avoiding<I: IntoIterator<Item = Var>>(vars: I) -> FreshVars {
        FreshVars {
            next: 0,
            avoid: vars.into_iter().collect(),
        }
    }

    pub fn avoid(&mut self, v: Var) {
        self.avoid.insert(v);
    }

    pub fn avoid_all<I: IntoIterator<Item = Var>>(&mut self, vars: I) {
        self.avoid.extend(vars);
    }

    pub fn fresh(&mut self) -> Var {
        loop {
            let v = Var::new(format!("V{}", self.next));
            self.next += 1;
            if self.avoid.insert(v.clone()) {
                return v;
            }
        }
    }
}

impl Iterator for FreshVars {
    type Item = Var;

    fn next(&mut self) -> Option<Var> {
        Some(self.fresh())
    }
}
