//! Ground sets, partitions, partition systems and the Sperner verifier.
//!
//! Elements are always `0..n` internally with `n <= 128`, so a class fits in a
//! single `u128`. External labellings (1-based, `inf`) are handled by the
//! [`crate::format`] module.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported ground-set size.
pub const MAX_ELEMENTS: usize = 128;

/// A subset of `0..n` stored as a bit-set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassSet(u128);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        ClassSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(x: usize) -> Self {
        debug_assert!(x < MAX_ELEMENTS);
        ClassSet(1u128 << x)
    }

    /// Panics if an element is `>= MAX_ELEMENTS`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements.into_iter().fold(ClassSet::EMPTY, |acc, x| {
            assert!(x < MAX_ELEMENTS, "element {x} out of range");
            ClassSet(acc.0 | (1u128 << x))
        })
    }

    /// The full ground set `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_ELEMENTS {
            ClassSet(u128::MAX)
        } else {
            ClassSet((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_ELEMENTS && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < MAX_ELEMENTS, "element {x} out of range");
        self.0 |= 1u128 << x;
    }

    pub fn with(self, x: usize) -> Self {
        let mut out = self;
        out.insert(x);
        out
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn is_subset(self, other: ClassSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ClassSet) -> ClassSet {
        ClassSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ClassSet) -> ClassSet {
        ClassSet(self.0 & other.0)
    }

    pub fn difference(self, other: ClassSet) -> ClassSet {
        ClassSet(self.0 & !other.0)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical ordering key: size, then smallest element, then raw bits.
    fn sort_key(self) -> (usize, usize, u128) {
        (
            self.len(),
            self.min_element().unwrap_or(usize::MAX),
            self.0.reverse_bits(),
        )
    }
}

impl Ord for ClassSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for ClassSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for ClassSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ClassSet::from_elements(iter)
    }
}

/// Ascending iterator over the elements of a [`ClassSet`].
#[derive(Clone, Debug)]
pub struct Elements(u128);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// True iff neither set contains the other. Equal sets are comparable.
pub fn incomparable(a: ClassSet, b: ClassSet) -> bool {
    !a.is_subset(b) && !b.is_subset(a)
}

/// How two classes from different partitions compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Subset,
    Superset,
    Equal,
}

impl Relation {
    /// `None` when the classes are incomparable.
    pub fn between(a: ClassSet, b: ClassSet) -> Option<Relation> {
        match (a.is_subset(b), b.is_subset(a)) {
            (true, true) => Some(Relation::Equal),
            (true, false) => Some(Relation::Subset),
            (false, true) => Some(Relation::Superset),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Subset => "subset",
            Relation::Superset => "superset",
            Relation::Equal => "equal",
        })
    }
}

/// One violated invariant of a single partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartitionDefect {
    WrongClassCount { expected: usize, found: usize },
    EmptyClass { class: usize },
    Overlap { element: usize },
    Uncovered { element: usize },
    OutOfRange { element: usize },
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::WrongClassCount { expected, found } => {
                write!(f, "wrong class count: expected {expected}, found {found}")
            }
            PartitionDefect::EmptyClass { class } => write!(f, "class {class} is empty"),
            PartitionDefect::Overlap { element } => write!(f, "overlap on element {element}"),
            PartitionDefect::Uncovered { element } => write!(f, "element {element} uncovered"),
            PartitionDefect::OutOfRange { element } => {
                write!(f, "element {element} outside the ground set")
            }
        }
    }
}

/// An ordered list of classes over `0..n`, kept in canonical order (size
/// ascending, then smallest element). The classes are not required to form a
/// partition; use [`validate_partition`] or [`Partition::new`] for that.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    k: usize,
    classes: Vec<ClassSet>,
}

impl Partition {
    /// Builds a well-formed k-partition with `k = classes.len()`.
    pub fn new(n: usize, classes: Vec<ClassSet>) -> Result<Self> {
        let k = classes.len();
        let p = Partition::from_classes(n, k, classes);
        let defects = validate_partition(&p);
        if defects.is_empty() {
            Ok(p)
        } else {
            Err(Error::MalformedPartition(join_defects(&defects)))
        }
    }

    /// Stores the classes without validation; they are still canonically sorted.
    pub fn from_classes(n: usize, k: usize, mut classes: Vec<ClassSet>) -> Self {
        classes.sort_unstable();
        Partition { n, k, classes }
    }

    /// Convenience constructor from element lists.
    pub fn from_lists<C: AsRef<[usize]>>(n: usize, lists: &[C]) -> Result<Self> {
        for list in lists {
            if let Some(&x) = list.as_ref().iter().find(|&&x| x >= n.min(MAX_ELEMENTS)) {
                return Err(Error::MalformedPartition(
                    PartitionDefect::OutOfRange { element: x }.to_string(),
                ));
            }
        }
        let classes = lists
            .iter()
            .map(|c| ClassSet::from_elements(c.as_ref().iter().copied()))
            .collect();
        Partition::new(n, classes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classes(&self) -> &[ClassSet] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(|c| c.to_vec()).collect()
    }

    /// Applies `f` to every element and re-canonicalises.
    pub fn map_elements(&self, n: usize, f: impl Fn(usize) -> usize) -> Partition {
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(&f).collect::<ClassSet>())
            .collect();
        Partition::from_classes(n, self.k, classes)
    }

    /// True when every class of `self` is incomparable with every class of `other`.
    pub fn compatible_with(&self, other: &Partition) -> bool {
        self.classes
            .iter()
            .all(|&c| other.classes.iter().all(|&d| incomparable(c, d)))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.k)
            .cmp(&(other.n, other.k))
            .then_with(|| self.classes.cmp(&other.classes))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn join_defects(defects: &[PartitionDefect]) -> String {
    defects
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Lists every violated partition invariant: wrong class count, empty
/// classes, overlapping elements, uncovered elements and out-of-range elements.
pub fn validate_partition(p: &Partition) -> Vec<PartitionDefect> {
    let mut defects = Vec::new();
    if p.classes.len() != p.k {
        defects.push(PartitionDefect::WrongClassCount {
            expected: p.k,
            found: p.classes.len(),
        });
    }
    let ground = ClassSet::full(p.n);
    let mut seen = ClassSet::EMPTY;
    let mut overlap = ClassSet::EMPTY;
    for (i, &c) in p.classes.iter().enumerate() {
        if c.is_empty() {
            defects.push(PartitionDefect::EmptyClass { class: i });
        }
        overlap = overlap.union(seen.intersection(c));
        seen = seen.union(c);
    }
    defects.extend(
        overlap
            .iter()
            .map(|element| PartitionDefect::Overlap { element }),
    );
    defects.extend(
        seen.difference(ground)
            .iter()
            .map(|element| PartitionDefect::OutOfRange { element }),
    );
    defects.extend(
        ground
            .difference(seen)
            .iter()
            .map(|element| PartitionDefect::Uncovered { element }),
    );
    defects
}

/// A family of k-partitions of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSystem {
    n: usize,
    k: usize,
    partitions: Vec<Partition>,
    name: Option<String>,
}

impl PartitionSystem {
    pub fn new(n: usize, k: usize, partitions: Vec<Partition>) -> Self {
        PartitionSystem {
            n,
            k,
            partitions,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn into_partitions(self) -> Vec<Partition> {
        self.partitions
    }

    /// The partitions in sorted canonical order, for order-insensitive comparison.
    pub fn canonical_partitions(&self) -> Vec<Partition> {
        let mut out = self.partitions.clone();
        out.sort();
        out
    }

    /// Same partitions regardless of listing order.
    pub fn same_as(&self, other: &PartitionSystem) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.canonical_partitions() == other.canonical_partitions()
    }

    /// Returns a copy with partitions sorted canonically.
    pub fn canonicalized(&self) -> PartitionSystem {
        PartitionSystem {
            n: self.n,
            k: self.k,
            partitions: self.canonical_partitions(),
            name: self.name.clone(),
        }
    }
}

/// One comparable class pair found by [`verify_sperner`]. Indices refer to
/// positions in the system and to canonical class order within a partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub partition_a: usize,
    pub class_a: usize,
    pub partition_b: usize,
    pub class_b: usize,
    pub relation: Relation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpernerReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub wellformed_errors: Vec<String>,
}

impl SpernerReport {
    /// Human-readable lines naming every offending class pair.
    pub fn describe(&self, system: &PartitionSystem) -> Vec<String> {
        let mut lines = self.wellformed_errors.clone();
        for v in &self.violations {
            let a = system.partitions[v.partition_a].classes[v.class_a];
            let b = system.partitions[v.partition_b].classes[v.class_b];
            lines.push(format!(
                "partition {} class {} {a} is {} partition {} class {} {b}",
                v.partition_a,
                v.class_a,
                relation_phrase(v.relation),
                v.partition_b,
                v.class_b
            ));
        }
        lines
    }
}

fn relation_phrase(r: Relation) -> &'static str {
    match r {
        Relation::Subset => "a subset of",
        Relation::Superset => "a superset of",
        Relation::Equal => "equal to",
    }
}

/// Checks well-formedness of every partition and incomparability of every
/// class pair drawn from two different partitions. Each unordered pair of
/// partitions `a < b` is inspected once; the relation is stated from `a`'s side.
pub fn verify_sperner(s: &PartitionSystem) -> SpernerReport {
    let mut wellformed_errors = Vec::new();
    if s.n > MAX_ELEMENTS {
        wellformed_errors.push(format!("ground set of {} exceeds {MAX_ELEMENTS}", s.n));
    }
    for (i, p) in s.partitions.iter().enumerate() {
        if p.n != s.n || p.k != s.k {
            wellformed_errors.push(format!(
                "partition {i}: parameters ({}, {}) differ from system ({}, {})",
                p.n, p.k, s.n, s.k
            ));
        }
        let defects = validate_partition(p);
        if defects.is_empty() {
            // disjoint nonempty classes never compare
            for (x, &c) in p.classes.iter().enumerate() {
                debug_assert!(p.classes[x + 1..].iter().all(|&d| incomparable(c, d)));
            }
        }
        for d in defects {
            wellformed_errors.push(format!("partition {i}: {d}"));
        }
    }

    let parts = &s.partitions;
    let mut violations: Vec<Violation> = (0..parts.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let pa = &parts[a];
            (a + 1..parts.len()).flat_map(move |b| {
                let pb = &parts[b];
                pa.classes.iter().enumerate().flat_map(move |(i, &c)| {
                    pb.classes.iter().enumerate().filter_map(move |(j, &d)| {
                        Relation::between(c, d).map(|relation| Violation {
                            partition_a: a,
                            class_a: i,
                            partition_b: b,
                            class_b: j,
                            relation,
                        })
                    })
                })
            })
        })
        .collect();
    violations.sort();

    SpernerReport {
        valid: violations.is_empty() && wellformed_errors.is_empty(),
        violations,
        wellformed_errors,
    }
}

/// Renames every element `x` to `perm[x]`.
pub fn relabel(s: &PartitionSystem, perm: &[usize]) -> Result<PartitionSystem> {
    if perm.len() != s.n {
        return Err(Error::InvalidPermutation);
    }
    let mut hit = ClassSet::EMPTY;
    for &y in perm {
        if y >= s.n || hit.contains(y) {
            return Err(Error::InvalidPermutation);
        }
        hit.insert(y);
    }
    let partitions = s
        .partitions
        .iter()
        .map(|p| p.map_elements(p.n, |x| perm[x]))
        .collect();
    Ok(PartitionSystem {
        n: s.n,
        k: s.k,
        partitions,
        name: s.name.clone(),
    })
}

/// Every class of every partition has size `floor(n/k)` or `ceil(n/k)`.
pub fn is_almost_uniform(s: &PartitionSystem) -> bool {
    if s.k == 0 {
        return s.partitions.is_empty();
    }
    let lo = s.n / s.k;
    let hi = s.n.div_ceil(s.k);
    s.partitions
        .iter()
        .flat_map(|p| p.classes.iter())
        .all(|c| (lo..=hi).contains(&c.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(xs: &[usize]) -> ClassSet {
        ClassSet::from_elements(xs.iter().copied())
    }

    #[test]
    fn validate_accepts_fig1_first_row() {
        let p = Partition::from_classes(7, 3, vec![cs(&[0, 1]), cs(&[2, 3]), cs(&[4, 5, 6])]);
        assert!(validate_partition(&p).is_empty());
    }

    #[test]
    fn validate_reports_overlap() {
        let p = Partition::from_classes(3, 2, vec![cs(&[0, 1]), cs(&[1, 2])]);
        assert_eq!(
            validate_partition(&p),
            vec![PartitionDefect::Overlap { element: 1 }]
        );
    }

    #[test]
    fn validate_reports_wrong_count() {
        let p = Partition::from_classes(3, 2, vec![cs(&[0, 1, 2])]);
        assert_eq!(
            validate_partition(&p),
            vec![PartitionDefect::WrongClassCount {
                expected: 2,
                found: 1
            }]
        );
    }

    #[test]
    fn validate_reports_uncovered_and_empty() {
        let p = Partition::from_classes(4, 2, vec![cs(&[0, 1]), ClassSet::EMPTY]);
        let d = validate_partition(&p);
        assert!(d.contains(&PartitionDefect::EmptyClass { class: 0 }));
        assert!(d.contains(&PartitionDefect::Uncovered { element: 2 }));
        assert!(d.contains(&PartitionDefect::Uncovered { element: 3 }));
    }

    #[test]
    fn incomparable_cases() {
        assert!(incomparable(cs(&[0, 1]), cs(&[2, 3])));
        assert!(!incomparable(cs(&[0, 1]), cs(&[0, 1, 2])));
        assert!(!incomparable(cs(&[0, 1]), cs(&[0, 1])));
    }

    #[test]
    fn canonical_order_is_size_then_min() {
        let p = Partition::from_classes(7, 3, vec![cs(&[4, 5, 6]), cs(&[2, 3]), cs(&[0, 1])]);
        assert_eq!(p.classes(), &[cs(&[0, 1]), cs(&[2, 3]), cs(&[4, 5, 6])]);
        let q = Partition::from_classes(7, 3, vec![cs(&[0, 1]), cs(&[4, 5, 6]), cs(&[2, 3])]);
        assert_eq!(p, q);
    }

    #[test]
    fn single_partition_is_valid() {
        let p = Partition::from_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let s = PartitionSystem::new(4, 2, vec![p]);
        assert!(verify_sperner(&s).valid);
    }

    #[test]
    fn duplicate_partition_reports_equal_classes() {
        let p = Partition::from_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let s = PartitionSystem::new(4, 2, vec![p.clone(), p]);
        let r = verify_sperner(&s);
        assert!(!r.valid);
        let equal: Vec<_> = r
            .violations
            .iter()
            .filter(|v| v.relation == Relation::Equal)
            .map(|v| (v.class_a, v.class_b))
            .collect();
        assert_eq!(equal, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn subset_relation_is_from_first_partition() {
        let a = Partition::from_lists(4, &[vec![0], vec![1, 2, 3]]).unwrap();
        let b = Partition::from_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let r = verify_sperner(&PartitionSystem::new(4, 2, vec![a, b]));
        assert!(r.violations.contains(&Violation {
            partition_a: 0,
            class_a: 0,
            partition_b: 1,
            class_b: 0,
            relation: Relation::Subset,
        }));
        assert!(r
            .violations
            .iter()
            .any(|v| v.relation == Relation::Superset));
    }

    #[test]
    fn relabel_rejects_non_bijection() {
        let p = Partition::from_lists(3, &[vec![0], vec![1, 2]]).unwrap();
        let s = PartitionSystem::new(3, 2, vec![p]);
        assert!(matches!(
            relabel(&s, &[0, 0, 1]),
            Err(Error::InvalidPermutation)
        ));
        assert!(matches!(
            relabel(&s, &[0, 1]),
            Err(Error::InvalidPermutation)
        ));
        assert!(matches!(
            relabel(&s, &[0, 1, 3]),
            Err(Error::InvalidPermutation)
        ));
        assert_eq!(relabel(&s, &[0, 1, 2]).unwrap(), s);
    }

    #[test]
    fn almost_uniform_for_divisible_case() {
        let p = Partition::from_lists(6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert!(is_almost_uniform(&PartitionSystem::new(6, 3, vec![p])));
        let q = Partition::from_lists(6, &[vec![0], vec![1, 2], vec![3, 4, 5]]).unwrap();
        assert!(!is_almost_uniform(&PartitionSystem::new(6, 3, vec![q])));
    }

    #[test]
    fn elements_iterate_ascending() {
        assert_eq!(cs(&[63, 0, 5]).to_vec(), vec![0, 5, 63]);
        assert_eq!(ClassSet::full(64).len(), 64);
        assert_eq!(ClassSet::full(128).len(), 128);
    }
}
