//! Witness constructions.
//!
//! Most constructions place `m` points on a circle (labelled `1..=m`), optionally
//! add a fixed centre point `inf`, pick one *initial partition*, and *develop*
//! it: partition `t` is the initial partition rotated by `t` steps. Internally
//! circle point `x` is element `x - 1` and the centre is element `m`.
//!
//! Whether a developed system is Sperner is decided by the circular
//! differences inside each class, see [`check_difference_property`].

use std::fmt;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::model::{verify_sperner, ClassSet, Partition, PartitionSystem, MAX_ELEMENTS};

/// Label of the centre point in circle notation.
pub const INF: i64 = i64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CircularLayout {
    m: usize,
    has_center: bool,
}

impl CircularLayout {
    pub fn new(m: usize, has_center: bool) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameters(format!(
                "circle needs at least 3 points, got {m}"
            )));
        }
        let layout = CircularLayout { m, has_center };
        if layout.ground_size() > MAX_ELEMENTS {
            return Err(Error::InvalidParameters(format!(
                "layout has {} points, limit is {MAX_ELEMENTS}",
                layout.ground_size()
            )));
        }
        Ok(layout)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_center(&self) -> bool {
        self.has_center
    }

    pub fn ground_size(&self) -> usize {
        self.m + usize::from(self.has_center)
    }

    /// Internal index of the centre point.
    pub fn center(&self) -> Option<usize> {
        self.has_center.then_some(self.m)
    }

    /// Maps a circle label (any integer, read modulo `m`, `1..=m` canonical) or
    /// [`INF`] to its internal index.
    pub fn index_of(&self, label: i64) -> Result<usize> {
        if label == INF {
            return self.center().ok_or(Error::PointOutOfLayout(usize::MAX));
        }
        Ok((label - 1).rem_euclid(self.m as i64) as usize)
    }

    /// Rotates every circle point of `set` by `t` steps; the centre is fixed.
    pub fn rotate(&self, set: ClassSet, t: usize) -> ClassSet {
        let m = self.m;
        let t = t % m;
        let mask = ClassSet::full(m).bits();
        let circle = set.bits() & mask;
        let rotated = if t == 0 {
            circle
        } else {
            ((circle << t) | (circle >> (m - t))) & mask
        };
        ClassSet::from_bits(rotated | (set.bits() & !mask))
    }
}

/// Circular distance between two points, or `Inf` when the centre is involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Difference {
    Finite(usize),
    Inf,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difference::Finite(d) => write!(f, "{d}"),
            Difference::Inf => f.write_str("inf"),
        }
    }
}

/// Difference of two internal indices on `layout`.
pub fn difference(layout: &CircularLayout, i: usize, j: usize) -> Result<Difference> {
    let size = layout.ground_size();
    for p in [i, j] {
        if p >= size {
            return Err(Error::PointOutOfLayout(p));
        }
    }
    if i == j {
        return Err(Error::SelfDifference);
    }
    if Some(i) == layout.center() || Some(j) == layout.center() {
        return Ok(Difference::Inf);
    }
    let m = layout.m;
    let forward = (i + m - j) % m;
    Ok(Difference::Finite(forward.min(m - forward)))
}

/// The seed partition of a developed system, with the multiset of differences
/// realised inside each class (aligned with the partition's canonical class order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialPartition {
    layout: CircularLayout,
    partition: Partition,
    class_differences: Vec<Vec<Difference>>,
}

impl InitialPartition {
    pub fn new(layout: CircularLayout, classes: Vec<ClassSet>) -> Result<Self> {
        let partition = Partition::new(layout.ground_size(), classes)?;
        let class_differences = partition
            .classes()
            .iter()
            .map(|&c| class_differences(&layout, c))
            .collect();
        Ok(InitialPartition {
            layout,
            partition,
            class_differences,
        })
    }

    /// Builds from circle labels (`1..=m`, taken modulo `m`) and [`INF`].
    pub fn from_labels<C: AsRef<[i64]>>(layout: CircularLayout, classes: &[C]) -> Result<Self> {
        let mut sets = Vec::with_capacity(classes.len());
        for class in classes {
            let mut set = ClassSet::EMPTY;
            for &label in class.as_ref() {
                let x = layout.index_of(label)?;
                if set.contains(x) {
                    return Err(Error::MalformedPartition(format!(
                        "label {label} repeated in a class"
                    )));
                }
                set.insert(x);
            }
            sets.push(set);
        }
        InitialPartition::new(layout, sets)
    }

    pub fn layout(&self) -> &CircularLayout {
        &self.layout
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn class_differences(&self) -> &[Vec<Difference>] {
        &self.class_differences
    }

    /// Classes in circle notation (1-based, centre as `None`).
    pub fn labels(&self) -> Vec<Vec<Option<usize>>> {
        self.partition
            .classes()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| (Some(x) != self.layout.center()).then_some(x + 1))
                    .collect()
            })
            .collect()
    }
}

fn class_differences(layout: &CircularLayout, class: ClassSet) -> Vec<Difference> {
    let xs = class.to_vec();
    let mut out = Vec::new();
    for (a, &x) in xs.iter().enumerate() {
        for &y in &xs[a + 1..] {
            out.push(difference(layout, x, y).expect("distinct points on layout"));
        }
    }
    out.sort();
    out
}

/// Rotates the initial partition through all `m` positions.
pub fn develop(init: &InitialPartition) -> PartitionSystem {
    let layout = init.layout;
    let n = layout.ground_size();
    let k = init.partition.k();
    let partitions = (0..layout.m)
        .map(|t| {
            let classes = init
                .partition
                .classes()
                .iter()
                .map(|&c| layout.rotate(c, t))
                .collect();
            Partition::from_classes(n, k, classes)
        })
        .collect();
    PartitionSystem::new(n, k, partitions)
}

/// Outcome of [`check_difference_property`] with one diagnostic per failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferenceCheck {
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

/// Decides whether developing `init` yields a Sperner system.
///
/// Pairs are judged by differences: pair differences must be pairwise
/// distinct, absent from every larger class, and (on an even circle) never
/// equal to `m/2`. Classes of size 3 or 4 are judged by their rotation
/// orbits: no nonzero rotation of one may land inside another (or itself),
/// since difference multisets alone can coincide for differently oriented
/// triangles.
pub fn check_difference_property(init: &InitialPartition) -> Result<DifferenceCheck> {
    let layout = init.layout;
    let classes = init.partition.classes();
    if let Some(c) = classes.iter().find(|c| c.len() > 4) {
        return Err(Error::UnsupportedShape(format!(
            "class {c} has {} elements",
            c.len()
        )));
    }

    let mut diagnostics = Vec::new();
    let label = |c: ClassSet| {
        let parts: Vec<String> = c
            .iter()
            .map(|x| match Some(x) == layout.center() {
                true => "inf".to_string(),
                false => (x + 1).to_string(),
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    };

    for &c in classes.iter().filter(|c| c.len() == 1) {
        diagnostics.push(format!(
            "singleton class {} lies inside its own rotations' classes",
            label(c)
        ));
    }

    let edges: Vec<(ClassSet, Difference)> = classes
        .iter()
        .zip(&init.class_differences)
        .filter(|(c, _)| c.len() == 2)
        .map(|(&c, d)| (c, d[0]))
        .collect();
    let large: Vec<(ClassSet, &Vec<Difference>)> = classes
        .iter()
        .zip(&init.class_differences)
        .filter(|(c, _)| c.len() >= 3)
        .map(|(&c, d)| (c, d))
        .collect();

    for (i, &(a, da)) in edges.iter().enumerate() {
        for &(b, db) in &edges[i + 1..] {
            if da == db {
                diagnostics.push(format!(
                    "pairs {} and {} share difference {da}",
                    label(a),
                    label(b)
                ));
            }
        }
        if layout.m.is_multiple_of(2) && da == Difference::Finite(layout.m / 2) {
            diagnostics.push(format!(
                "pair {} has difference {da} = m/2 and repeats under rotation",
                label(a)
            ));
        }
        for &(t, dt) in &large {
            if dt.contains(&da) {
                diagnostics.push(format!(
                    "pair {} difference {da} also occurs in {}",
                    label(a),
                    label(t)
                ));
            }
        }
    }

    for (i, &(a, _)) in large.iter().enumerate() {
        for (j, &(b, _)) in large.iter().enumerate() {
            if a.len() > b.len() || (a.len() == b.len() && j < i) {
                continue;
            }
            let hit = (0..layout.m)
                .filter(|&d| !(i == j && d == 0))
                .find(|&d| layout.rotate(a, d).is_subset(b));
            if let Some(d) = hit {
                let what = if i == j {
                    format!("{} is fixed by rotation {d}", label(a))
                } else if a.len() == b.len() {
                    format!(
                        "{} and {} lie on the same rotation orbit (shift {d})",
                        label(a),
                        label(b)
                    )
                } else {
                    format!("{} rotated by {d} lies inside {}", label(a), label(b))
                };
                diagnostics.push(what);
            }
        }
    }

    Ok(DifferenceCheck {
        holds: diagnostics.is_empty(),
        diagnostics,
    })
}

fn check_even_k_2k1(k: usize) -> Result<()> {
    if k == 2 {
        return Err(Error::InvalidParameters("k = 2: use construct_k2".into()));
    }
    if k % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "construction requires even k, got {k}"
        )));
    }
    if k < 4 {
        return Err(Error::InvalidParameters(format!(
            "k must be at least 4, got {k}"
        )));
    }
    if 2 * k + 1 > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "2k+1 = {} exceeds {MAX_ELEMENTS}",
            2 * k + 1
        )));
    }
    Ok(())
}

/// Closed-form layout for `n = 2k+1` (one formula per residue of `k` mod 4),
/// accepted only when it is a partition with the difference property.
pub fn chart_seed_2k1(k: usize) -> Option<InitialPartition> {
    check_even_k_2k1(k).ok()?;
    let kk = k as i64;
    let mut classes: Vec<Vec<i64>> = vec![vec![1, kk / 2 + 1, kk + 1]];
    if k % 4 == 2 {
        if k < 6 {
            return None;
        }
        classes.extend((1..=(kk - 2) / 2).map(|i| vec![kk + 1 - i, kk + 1 + i]));
        classes.push(vec![INF, 2]);
        classes.extend((1..=(kk - 6) / 4).map(|i| vec![2 + i, 1 - i]));
        classes.push(vec![(7 * kk + 6) / 4, (7 * kk + 2) / 4]);
        classes.extend(((kk - 2) / 4..=(kk - 4) / 2).map(|i| vec![2 + i, 1 - i - 2]));
    } else {
        if k <= 4 {
            return None;
        }
        classes.extend((1..=kk / 2 - 1).map(|i| vec![kk - i, kk + 1 + i]));
        classes.extend((1..=(kk - 4) / 4).map(|i| vec![1 - i, 1 + i]));
        if (k / 4).is_multiple_of(2) {
            classes.push(vec![kk + 2, kk / 4 + 2]);
            classes.push(vec![INF, kk / 4 + 1]);
            classes.extend((kk / 4..=3 * kk / 8 - 2).map(|i| vec![1 - i, 1 + i + 2]));
            classes.push(vec![2 - 3 * kk / 8, 1 - 3 * kk / 8]);
            classes.extend((3 * kk / 8..=(kk - 4) / 2).map(|i| vec![3 - i, i + 3]));
        } else {
            let q = (3 * kk + 4) / 8;
            classes.push(vec![kk + 2, kk / 4 + 1]);
            classes.push(vec![INF, kk / 4]);
            classes.extend((kk / 4..=q - 2).map(|i| vec![1 - i, 1 + i + 2]));
            classes.push(vec![2 - q, 1 - q]);
            classes.extend((q + 1..=(kk - 2) / 2).map(|i| vec![3 - i, i + 3]));
        }
    }
    if classes.len() != k {
        return None;
    }
    let layout = CircularLayout::new(2 * k, true).ok()?;
    let init = InitialPartition::from_labels(layout, &classes).ok()?;
    check_difference_property(&init).ok()?.holds.then_some(init)
}

/// Finds an initial partition for a `k`-partition system on `2k+1` points with
/// `2k` partitions (`k` even, `k >= 4`).
///
/// The triangle is `{1, 1+k/2, 1+k}`; the remaining `k-1` pairs must realise
/// every difference in `{1..k} \ {k/2, k}` plus `inf` exactly once. The closed-form
/// layout is tried first, then [`backtrack_2k1`].
pub fn solve_initial_2k1(k: usize) -> Result<InitialPartition> {
    check_even_k_2k1(k)?;
    match chart_seed_2k1(k) {
        Some(seed) => Ok(seed),
        None => backtrack_2k1(k),
    }
}

/// Exhaustive, deterministic search for the pairs of [`solve_initial_2k1`].
///
/// Each node branches on whichever is most constrained: an unplaced difference
/// (fewest free positions) or a free circle point (fewest ways to cover it).
/// Runs are restarted under a doubling node budget, cycling through a fixed
/// list of tie-break and value orders; a run that ends inside its budget is
/// conclusive either way.
pub fn backtrack_2k1(k: usize) -> Result<InitialPartition> {
    check_even_k_2k1(k)?;
    let layout = CircularLayout::new(2 * k, true)?;
    let triangle = ClassSet::from_elements([0, k / 2, k]);
    let diffs: Vec<usize> = (1..k).rev().filter(|&d| d != k / 2).collect();
    let free = ClassSet::full(layout.m).difference(triangle);
    let mut budget = 1_000u64;
    let edges = 'runs: loop {
        for variant in 0..VARIANTS {
            let mut search = PairSearch {
                layout,
                diffs: &diffs,
                edges: Vec::with_capacity(k - 1),
                variant,
                nodes_left: budget,
            };
            if search.place(free, (1u64 << diffs.len()) - 1, true) {
                break 'runs search.edges;
            }
            if search.nodes_left > 0 {
                return Err(Error::NoInitialPartition(k));
            }
        }
        budget = budget.saturating_mul(2);
    };
    let mut classes = vec![triangle];
    classes.extend(edges);
    let init = InitialPartition::new(layout, classes)?;
    if !check_difference_property(&init)?.holds {
        return Err(Error::NoInitialPartition(k));
    }
    Ok(init)
}

/// Bit 0: prefer points on ties. Bit 1: reverse start points. Bit 2: ascending differences.
const VARIANTS: u8 = 8;

struct PairSearch<'a> {
    layout: CircularLayout,
    diffs: &'a [usize],
    edges: Vec<ClassSet>,
    variant: u8,
    nodes_left: u64,
}

enum Branch {
    Diff(usize),
    Point(usize),
}

impl PairSearch<'_> {
    /// Free points `x` with `x + d` also free.
    fn starts(&self, free: ClassSet, d: usize) -> Vec<usize> {
        let m = self.layout.m;
        let mut xs = free.intersection(self.layout.rotate(free, m - d)).to_vec();
        if self.variant & 2 != 0 {
            xs.reverse();
        }
        xs
    }

    fn diff_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.diffs.len()).collect();
        if self.variant & 4 != 0 {
            order.reverse();
        }
        order
    }

    fn covers(&self, free: ClassSet, free_diffs: u64, inf_free: bool, x: usize) -> usize {
        let m = self.layout.m;
        let mut count = usize::from(inf_free);
        for (i, &d) in self.diffs.iter().enumerate() {
            if free_diffs & (1 << i) != 0 {
                count += usize::from(free.contains((x + d) % m));
                count += usize::from(free.contains((x + m - d) % m));
            }
        }
        count
    }

    fn try_edge(
        &mut self,
        free: ClassSet,
        edge: ClassSet,
        free_diffs: u64,
        inf_free: bool,
    ) -> bool {
        self.edges.push(edge);
        if self.place(free.difference(edge), free_diffs, inf_free) {
            return true;
        }
        self.edges.pop();
        false
    }

    /// `free_diffs` has bit `i` set while `diffs[i]` is unplaced. Returns
    /// false on exhaustion or when the node budget runs out.
    fn place(&mut self, free: ClassSet, free_diffs: u64, inf_free: bool) -> bool {
        if free.is_empty() {
            return free_diffs == 0 && !inf_free;
        }
        if self.nodes_left == 0 {
            return false;
        }
        self.nodes_left -= 1;
        let m = self.layout.m;
        let prefer_points = self.variant & 1 != 0;
        let mut best: Option<(usize, Branch)> = None;
        let better = |c: usize, best: &Option<(usize, Branch)>, is_point: bool| match best {
            None => true,
            Some((b, Branch::Diff(_))) => c < *b || (c == *b && is_point && prefer_points),
            Some((b, Branch::Point(_))) => c < *b,
        };
        for i in self.diff_order() {
            if free_diffs & (1 << i) != 0 {
                let c = self.starts(free, self.diffs[i]).len();
                if better(c, &best, false) {
                    best = Some((c, Branch::Diff(i)));
                }
            }
        }
        for x in free.iter() {
            let c = self.covers(free, free_diffs, inf_free, x);
            if better(c, &best, true) {
                best = Some((c, Branch::Point(x)));
            }
        }
        match best {
            None | Some((0, _)) => false,
            Some((_, Branch::Diff(i))) => {
                let d = self.diffs[i];
                for x in self.starts(free, d) {
                    let edge = ClassSet::from_elements([x, (x + d) % m]);
                    if self.try_edge(free, edge, free_diffs & !(1 << i), inf_free) {
                        return true;
                    }
                }
                false
            }
            Some((_, Branch::Point(x))) => {
                if inf_free {
                    let edge = ClassSet::from_elements([x, m]);
                    if self.try_edge(free, edge, free_diffs, false) {
                        return true;
                    }
                }
                for i in self.diff_order() {
                    if free_diffs & (1 << i) == 0 {
                        continue;
                    }
                    let d = self.diffs[i];
                    for y in [(x + d) % m, (x + m - d) % m] {
                        if free.contains(y) {
                            let edge = ClassSet::from_elements([x, y]);
                            if self.try_edge(free, edge, free_diffs & !(1 << i), inf_free) {
                                return true;
                            }
                        }
                    }
                }
                false
            }
        }
    }
}

fn verified(system: PartitionSystem) -> Result<PartitionSystem> {
    let report = verify_sperner(&system);
    if report.valid {
        Ok(system)
    } else {
        let mut lines = report.describe(&system);
        lines.truncate(5);
        Err(Error::ConstructionFailed(lines.join("; ")))
    }
}

/// A system with `2k` partitions on `2k+1` points for even `k`.
///
/// `k = 2` returns the two-class optimum on 5 points, `k = 4` the
/// hand-built 9-point system, and larger `k` the developed solver output.
pub fn construct_2k1(k: usize) -> Result<PartitionSystem> {
    if k % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "no construction for odd k = {k}"
        )));
    }
    let system = match k {
        0 => return Err(Error::InvalidParameters("k must be positive".into())),
        2 => construct_k2(5)?,
        4 => fixtures::system("fig-9-4")?,
        _ => develop(&solve_initial_2k1(k)?),
    };
    verified(system.with_name(format!("rotational-2k1 k={k}")))
}

/// Initial partition `{1,2,inf}, {3,2k+1}, {4,2k}, ..., {k,k+4}, {k+1,k+2,k+3}`
/// on `2k+1` circle points plus centre.
pub fn initial_2k2(k: usize) -> Result<InitialPartition> {
    if k < 3 {
        return Err(Error::InvalidParameters(format!(
            "2k+2 construction needs k >= 3, got {k}; use construct_k2 for k = 2"
        )));
    }
    if 2 * k + 2 > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "2k+2 = {} exceeds {MAX_ELEMENTS}",
            2 * k + 2
        )));
    }
    let kk = k as i64;
    let layout = CircularLayout::new(2 * k + 1, true)?;
    let mut classes = vec![vec![1, 2, INF], vec![kk + 1, kk + 2, kk + 3]];
    classes.extend((3..=kk).map(|i| vec![i, 2 * kk + 4 - i]));
    InitialPartition::from_labels(layout, &classes)
}

/// A system with `2k+1` partitions on `2k+2` points, `k >= 3`.
pub fn construct_2k2(k: usize) -> Result<PartitionSystem> {
    let init = initial_2k2(k)?;
    verified(develop(&init).with_name(format!("rotational-2k2 k={k}")))
}

/// Initial partition on `3k-1` circle points: pair `{1, 3k-1}`, triangle
/// `{2, k+1, 3k-2}` and triangles `{i, 2k+2-i, 3k-i}` for `i = 3..=k`.
pub fn initial_3k1(k: usize) -> Result<InitialPartition> {
    match k {
        3 => {
            return Err(Error::InvalidParameters(
                "k = 3 has no rotational 3k-1 construction; use fixture fig-8-3".into(),
            ))
        }
        0..=2 => {
            return Err(Error::InvalidParameters(format!(
                "3k-1 construction needs k >= 4, got {k}"
            )))
        }
        _ => {}
    }
    if 3 * k - 1 > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "3k-1 = {} exceeds {MAX_ELEMENTS}",
            3 * k - 1
        )));
    }
    let kk = k as i64;
    let layout = CircularLayout::new(3 * k - 1, false)?;
    let mut classes = vec![vec![1, 3 * kk - 1], vec![2, kk + 1, 3 * kk - 2]];
    classes.extend((3..=kk).map(|i| vec![i, 2 * kk + 2 - i, 3 * kk - i]));
    InitialPartition::from_labels(layout, &classes)
}

/// A system with `3k-1` partitions on `3k-1` points, `k >= 4`.
pub fn construct_3k1(k: usize) -> Result<PartitionSystem> {
    let init = initial_3k1(k)?;
    let check = check_difference_property(&init)?;
    if !check.holds {
        return Err(Error::ConstructionFailed(check.diagnostics.join("; ")));
    }
    verified(develop(&init).with_name(format!("rotational-3k1 k={k}")))
}

/// All 2-partitions `(A, X \ A)` of an odd `n = 2l+1` set where `0 in A` and `|A| = l`.
pub fn construct_k2(n: usize) -> Result<PartitionSystem> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "n = {n} is even: divisible case has a known exact value but no construction here"
        )));
    }
    if !(3..=MAX_ELEMENTS).contains(&n) {
        return Err(Error::InvalidParameters(format!(
            "n must be odd in 3..={MAX_ELEMENTS}, got {n}"
        )));
    }
    let l = (n - 1) / 2;
    let full = ClassSet::full(n);
    let partitions = k_subsets(n - 1, l - 1)
        .map(|bits| {
            let a = ClassSet::from_bits((bits << 1) | 1);
            Partition::from_classes(n, 2, vec![a, full.difference(a)])
        })
        .collect();
    verified(PartitionSystem::new(n, 2, partitions).with_name(format!("two-class n={n}")))
}

/// All `r`-subsets of `0..n` as bit masks in increasing numeric order.
fn k_subsets(n: usize, r: usize) -> impl Iterator<Item = u128> {
    let limit = if n >= 128 { u128::MAX } else { 1u128 << n };
    let first = if r == 0 { 0 } else { (1u128 << r) - 1 };
    let mut next = (r <= n).then_some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur.checked_add(c);
            r.and_then(|r| {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt < limit && nxt != 0).then_some(nxt)
            })
        };
        Some(cur)
    })
}

/// Appends `k` fresh elements to every partition along the rows of the
/// cyclic Latin square, multiplying the system size by `k`.
pub fn latin_lift(base: &PartitionSystem) -> Result<PartitionSystem> {
    if base.k() == 0 || !verify_sperner(base).valid {
        return Err(Error::BaseNotSperner);
    }
    let (n0, k) = (base.n(), base.k());
    let n = n0 + k;
    if n > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "lifted ground set {n} exceeds {MAX_ELEMENTS}"
        )));
    }
    let mut partitions = Vec::with_capacity(base.len() * k);
    for p in base.partitions() {
        for row in 0..k {
            let classes = p
                .classes()
                .iter()
                .enumerate()
                .map(|(j, &c)| c.with(n0 + (row + j) % k))
                .collect();
            partitions.push(Partition::from_classes(n, k, classes));
        }
    }
    let name = format!("latin-lift of {}", base.name().unwrap_or("base"));
    verified(PartitionSystem::new(n, k, partitions).with_name(name))
}

/// Adds one fresh element to the first smallest class of every partition.
pub fn extend_by_one(base: &PartitionSystem) -> Result<PartitionSystem> {
    if !verify_sperner(base).valid {
        return Err(Error::BaseNotSperner);
    }
    let n0 = base.n();
    if n0 + 1 > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "extended ground set exceeds {MAX_ELEMENTS}"
        )));
    }
    let partitions = base
        .partitions()
        .iter()
        .map(|p| {
            let mut classes = p.classes().to_vec();
            if let Some(first) = classes.first_mut() {
                first.insert(n0);
            }
            Partition::from_classes(n0 + 1, base.k(), classes)
        })
        .collect();
    let name = format!("extension of {}", base.name().unwrap_or("base"));
    verified(PartitionSystem::new(n0 + 1, base.k(), partitions).with_name(name))
}
