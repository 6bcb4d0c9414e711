//! Sorted, duplicate-free vertex sets.

use std::cmp::Ordering;
use std::fmt;

/// A set of vertex indices stored as a strictly increasing list.
///
/// This is the canonical representation of cliques, bags and separators.
/// Two sets are equal iff they have the same members, so a `VertexSet`
/// can be used directly as a hash key.
/// The derived order is lexicographic on the member lists.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

/// A vertex set that induces a complete subgraph.
///
/// Nothing in the type enforces completeness; the functions that accept a
/// `Clique` check it against their graph.
pub type Clique = VertexSet;

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds a set from an already strictly increasing vector.
    ///
    /// Callers that cannot guarantee the ordering should use `from_iter`.
    pub fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    /// Returns `true` if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn with(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    pub fn without(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    /// The `count` smallest members.
    pub fn prefix(&self, count: usize) -> Self {
        VertexSet(self.0[..count.min(self.0.len())].to_vec())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for &v in &self.0 {
            for &w in it.by_ref() {
                match w.cmp(&v) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        merge(&self.0, &other.0, |v, _in_a, _in_b| out.push(v));
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> Self {
        let mut out = Vec::new();
        merge(&self.0, &other.0, |v, a, b| {
            if a && b {
                out.push(v)
            }
        });
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> Self {
        let mut out = Vec::new();
        merge(&self.0, &other.0, |v, a, b| {
            if a && !b {
                out.push(v)
            }
        });
        VertexSet(out)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        let mut count = 0;
        merge(&self.0, &other.0, |_, a, b| count += usize::from(a && b));
        count
    }

    pub fn symmetric_difference_len(&self, other: &VertexSet) -> usize {
        self.len() + other.len() - 2 * self.intersection_len(other)
    }

    /// Sets are ordered by size first, then lexicographically.
    pub fn canonical_cmp(&self, other: &VertexSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

fn merge(a: &[usize], b: &[usize], mut visit: impl FnMut(usize, bool, bool)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                visit(a[i], true, false);
                i += 1;
            }
            Ordering::Greater => {
                visit(b[j], false, true);
                j += 1;
            }
            Ordering::Equal => {
                visit(a[i], true, true);
                i += 1;
                j += 1;
            }
        }
    }
    a[i..].iter().for_each(|&v| visit(v, true, false));
    b[j..].iter().for_each(|&v| visit(v, false, true));
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        members.into_iter().collect()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(members: Vec<usize>) -> Self {
        members.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

/// Formats members 1-based and space separated, the way the file formats
/// write vertex lists.
impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VertexSet::from([3, 1, 2, 1]);
        let b = VertexSet::from([2, 4]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b), VertexSet::from([1, 2, 3, 4]));
        assert_eq!(a.intersection(&b), VertexSet::from([2]));
        assert_eq!(a.difference(&b), VertexSet::from([1, 3]));
        assert_eq!(a.symmetric_difference_len(&b), 3);
        assert!(VertexSet::from([1, 3]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(VertexSet::new().is_subset(&b));
    }

    #[test]
    fn insert_remove_keep_order() {
        let mut s = VertexSet::from([5, 1]);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert_eq!(s.as_slice(), &[1, 3, 5]);
        assert!(s.remove(1));
        assert!(!s.remove(1));
        assert_eq!(s.as_slice(), &[3, 5]);
        assert_eq!(s.prefix(1), VertexSet::from([3]));
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(VertexSet::from([0, 4]).to_string(), "1 5");
        assert_eq!(VertexSet::new().to_string(), "");
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut sets = vec![
            VertexSet::from([0, 1]),
            VertexSet::from([2]),
            VertexSet::from([0]),
        ];
        sets.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(
            sets,
            vec![VertexSet::from([0]), VertexSet::from([2]), VertexSet::from([0, 1])]
        );
    }
}
