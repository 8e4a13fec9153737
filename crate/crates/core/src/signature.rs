//! Signatures: sorts with a declared subsort relation, operation symbols with
//! profiles, and predicate symbols with arities.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

/// How a symbol is written in the surface syntax. The AST never depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Fixity {
    /// `f(x, y)`, or a bare name for constants.
    #[default]
    Ordinary,
    /// Declared as `__ w __`, written `x w y`.
    Infix,
    /// Declared as `w__`, written `w x`.
    Prefix,
}

/// Argument sorts and result sort of an operation. An empty argument list is a constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpProfile {
    pub args: Vec<String>,
    pub result: String,
}

impl OpProfile {
    pub fn new<I, S>(args: I, result: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        OpProfile {
            args: args.into_iter().map(Into::into).collect(),
            result: result.into(),
        }
    }

    pub fn constant(result: impl Into<String>) -> Self {
        OpProfile {
            args: Vec::new(),
            result: result.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Every sort mentioned by the profile, arguments first.
    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.args
            .iter()
            .map(String::as_str)
            .chain(core::iter::once(self.result.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub sorts: BTreeSet<String>,
    /// Declared `(child, parent)` pairs. The order relation is their
    /// reflexive-transitive closure, see [`SortOrder`].
    pub subsorts: BTreeSet<(String, String)>,
    pub ops: BTreeMap<String, OpProfile>,
    /// Argument sorts of each predicate.
    pub preds: BTreeMap<String, Vec<String>>,
    /// Only symbols with a non-ordinary fixity need an entry.
    pub fixity: BTreeMap<String, Fixity>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, sort: impl Into<String>) -> &mut Self {
        self.sorts.insert(sort.into());
        self
    }

    pub fn add_subsort(&mut self, child: impl Into<String>, parent: impl Into<String>) -> &mut Self {
        self.subsorts.insert((child.into(), parent.into()));
        self
    }

    pub fn add_op(&mut self, name: impl Into<String>, profile: OpProfile) -> &mut Self {
        self.ops.insert(name.into(), profile);
        self
    }

    pub fn add_pred<I, S>(&mut self, name: impl Into<String>, args: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.preds
            .insert(name.into(), args.into_iter().map(Into::into).collect());
        self
    }

    pub fn set_fixity(&mut self, name: impl Into<String>, fixity: Fixity) -> &mut Self {
        let name = name.into();
        if fixity == Fixity::Ordinary {
            self.fixity.remove(&name);
        } else {
            self.fixity.insert(name, fixity);
        }
        self
    }

    pub fn fixity_of(&self, name: &str) -> Fixity {
        self.fixity.get(name).copied().unwrap_or_default()
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    /// True if `name` is declared in any of the three namespaces.
    pub fn declares(&self, name: &str) -> bool {
        self.sorts.contains(name) || self.ops.contains_key(name) || self.preds.contains_key(name)
    }

    pub fn symbol_count(&self) -> usize {
        self.ops.len() + self.preds.len()
    }

    pub fn order(&self) -> SortOrder {
        SortOrder::new(self)
    }
}

/// Reflexive-transitive closure of a signature's subsort pairs.
///
/// Sorts mentioned only in subsort pairs are included, so an ill-formed
/// signature can still be inspected.
#[derive(Debug, Clone)]
pub struct SortOrder {
    index: BTreeMap<String, usize>,
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl SortOrder {
    pub fn new(sig: &Signature) -> Self {
        let mut index = BTreeMap::new();
        let mut names = Vec::new();
        let mut intern = |s: &str, index: &mut BTreeMap<String, usize>| {
            if !index.contains_key(s) {
                index.insert(String::from(s), names.len());
                names.push(String::from(s));
            }
        };
        for s in &sig.sorts {
            intern(s, &mut index);
        }
        for (c, p) in &sig.subsorts {
            intern(c, &mut index);
            intern(p, &mut index);
        }
        let n = names.len();
        let mut leq = alloc::vec![alloc::vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (c, p) in &sig.subsorts {
            leq[index[c.as_str()]][index[p.as_str()]] = true;
        }
        for k in 0..n {
            let through = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (cell, &via) in row.iter_mut().zip(&through) {
                        *cell |= via;
                    }
                }
            }
        }
        SortOrder { index, names, leq }
    }

    /// `sub ≤ sup` in the closure. Unknown sorts are only related to themselves.
    pub fn leq(&self, sub: &str, sup: &str) -> bool {
        match (self.index.get(sub), self.index.get(sup)) {
            (Some(&i), Some(&j)) => self.leq[i][j],
            _ => sub == sup,
        }
    }

    /// Some sort lies above both arguments.
    pub fn have_upper_bound(&self, a: &str, b: &str) -> bool {
        if a == b {
            return true;
        }
        let (Some(&i), Some(&j)) = (self.index.get(a), self.index.get(b)) else {
            return false;
        };
        (0..self.names.len()).any(|k| self.leq[i][k] && self.leq[j][k])
    }

    /// Strict pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for (i, a) in self.names.iter().enumerate() {
            for (j, b) in self.names.iter().enumerate() {
                if i != j && self.leq[i][j] {
                    out.insert((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Distinct sorts that are mutually below each other, each pair reported once.
    pub fn cycles(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.names.len() {
            for j in (i + 1)..self.names.len() {
                if self.leq[i][j] && self.leq[j][i] {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// Minimal generating pairs of the strict order (its Hasse diagram).
    /// Only meaningful when [`SortOrder::cycles`] is empty.
    pub fn reduction(&self) -> BTreeSet<(String, String)> {
        let n = self.names.len();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq[i][j] {
                    continue;
                }
                let covered = (0..n).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j]);
                if !covered {
                    out.insert((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// Number of strict subsorts and strict supersorts of `sort`.
    pub fn degree(&self, sort: &str) -> (usize, usize) {
        let Some(&i) = self.index.get(sort) else {
            return (0, 0);
        };
        let below = (0..self.names.len()).filter(|&k| k != i && self.leq[k][i]).count();
        let above = (0..self.names.len()).filter(|&k| k != i && self.leq[i][k]).count();
        (below, above)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cont_func_sorts() -> Signature {
        let mut sig = Signature::new();
        for s in ["Sets", "A", "TA", "PA", "B", "TB", "PB"] {
            sig.add_sort(s);
        }
        for s in ["A", "TA", "PA", "B", "TB", "PB"] {
            sig.add_subsort(s, "Sets");
        }
        sig.add_subsort("TA", "PA").add_subsort("TB", "PB");
        sig
    }

    #[test]
    fn closure_is_transitive() {
        let mut sig = Signature::new();
        sig.add_sort("a").add_sort("b").add_sort("c");
        sig.add_subsort("a", "b").add_subsort("b", "c");
        let ord = sig.order();
        assert!(ord.leq("a", "c"));
        assert!(!ord.leq("c", "a"));
        assert!(ord.leq("b", "b"));
        assert_eq!(ord.degree("b"), (1, 1));
    }

    #[test]
    fn reduction_drops_implied_pairs() {
        let sig = cont_func_sorts();
        let red = sig.order().reduction();
        assert!(red.contains(&("TA".into(), "PA".into())));
        assert!(red.contains(&("PA".into(), "Sets".into())));
        assert!(!red.contains(&("TA".into(), "Sets".into())));
        assert_eq!(red.len(), 6);
    }

    #[test]
    fn upper_bounds_and_cycles() {
        let sig = cont_func_sorts();
        let ord = sig.order();
        assert!(ord.have_upper_bound("A", "TB"));
        assert!(ord.cycles().is_empty());

        let mut cyclic = Signature::new();
        cyclic.add_sort("p").add_sort("q");
        cyclic.add_subsort("p", "q").add_subsort("q", "p");
        assert_eq!(cyclic.order().cycles(), [("p".into(), "q".into())]);
    }
}
