use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::Label;

/// A bijection on a finite set of labels. Labels outside the domain map to
/// themselves.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Permutation {
    map: BTreeMap<Label, Label>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// Builds a permutation from explicit pairs; returns `None` unless the
    /// pairs form a bijection of their domain onto itself.
    pub fn from_map(map: BTreeMap<Label, Label>) -> Option<Self> {
        let domain: BTreeSet<&Label> = map.keys().collect();
        let image: BTreeSet<&Label> = map.values().collect();
        if domain != image || image.len() != map.len() {
            return None;
        }
        let map = map.into_iter().filter(|(a, b)| a != b).collect();
        Some(Permutation { map })
    }

    pub fn from_pairs<I: IntoIterator<Item = (Label, Label)>>(pairs: I) -> Option<Self> {
        Permutation::from_map(pairs.into_iter().collect())
    }

    /// The transposition `(a b)`.
    pub fn transposition(a: Label, b: Label) -> Self {
        Permutation::from_pairs([(a.clone(), b.clone()), (b, a)]).expect("transposition")
    }

    pub fn apply<'a>(&'a self, x: &'a Label) -> &'a Label {
        self.map.get(x).unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// Labels moved by this permutation.
    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.map.keys()
    }

    pub fn inverse(&self) -> Self {
        Permutation {
            map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        let keys: BTreeSet<&Label> = self.map.keys().chain(other.map.keys()).collect();
        let map = keys
            .into_iter()
            .map(|x| (x.clone(), self.apply(other.apply(x)).clone()))
            .filter(|(a, b)| a != b)
            .collect();
        Permutation { map }
    }

    /// Cycle notation such as `(4 5)(6 8 7)`; the identity prints as `()`.
    pub fn cycle_notation(&self) -> String {
        if self.map.is_empty() {
            return "()".to_string();
        }
        let mut seen = BTreeSet::new();
        let mut out = String::new();
        for start in self.map.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start.to_string()];
            seen.insert(start.clone());
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x.clone());
                cycle.push(x.to_string());
                x = self.apply(x);
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}
