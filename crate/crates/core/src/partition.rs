//! Partitions, Grassmannian shapes, Schubert problems and their 0/1 boundary
//! encodings.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Grassmannian `G(k,n)` of `k`-planes in an `n`-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GrassmannianShape {
    k: usize,
    n: usize,
}

impl GrassmannianShape {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidShape { k, n });
        }
        Ok(GrassmannianShape { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows of the partition box.
    pub fn rows(&self) -> usize {
        self.k
    }

    /// Number of columns of the partition box.
    pub fn cols(&self) -> usize {
        self.n - self.k
    }

    pub fn dimension(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// The shape `G(n-k,n)` whose Schubert classes are indexed by transposes.
    pub fn dual(&self) -> Self {
        GrassmannianShape {
            k: self.n - self.k,
            n: self.n,
        }
    }

    /// The full `k x (n-k)` rectangle, i.e. the class of a point.
    pub fn full_box(&self) -> Partition {
        Partition(vec![self.cols(); self.rows()])
    }

    /// Every partition in the box, in canonical order (heaviest first, then
    /// lexicographically descending).
    pub fn box_partitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut parts = Vec::with_capacity(self.k);
        fn rec(parts: &mut Vec<usize>, rows: usize, max: usize, out: &mut Vec<Partition>) {
            out.push(Partition::from_sorted(parts.clone()));
            if parts.len() == rows {
                return;
            }
            for p in 1..=max {
                parts.push(p);
                rec(parts, rows, p, out);
                parts.pop();
            }
        }
        rec(&mut parts, self.rows(), self.cols(), &mut out);
        out.sort_by(canonical_cmp);
        out
    }

    pub fn contains(&self, p: &Partition) -> bool {
        p.len() <= self.rows() && p.first() <= self.cols()
    }

    pub(crate) fn check(&self, p: &Partition) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::BoxViolation {
                partition: p.clone(),
                shape: *self,
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }
}

impl fmt::Display for GrassmannianShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.k, self.n)
    }
}

/// An integer partition; trailing zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: impl Into<Vec<usize>>) -> Result<Self> {
        let parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotWeaklyDecreasing(parts));
        }
        Ok(Self::from_sorted(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub(crate) fn from_sorted(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th part (0-indexed), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> usize {
        self.part(0)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// The conjugate partition (column lengths).
    pub fn transpose(&self) -> Partition {
        let cols = self.first();
        let parts = (0..cols)
            .map(|c| self.0.iter().take_while(|&&p| p > c).count())
            .collect();
        Partition(parts)
    }

    /// Complement inside the box of `shape`, rotated by 180 degrees.
    pub fn box_complement(&self, shape: GrassmannianShape) -> Result<Partition> {
        shape.check(self)?;
        let parts = (0..shape.rows())
            .rev()
            .map(|i| shape.cols() - self.part(i))
            .collect();
        Ok(Partition::from_sorted(parts))
    }

    /// Whether `self` fits inside `other` as Young diagrams.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Canonical condition order: heavier first, ties broken by descending
/// lexicographic order of the parts.
pub fn canonical_cmp(a: &Partition, b: &Partition) -> Ordering {
    b.weight().cmp(&a.weight()).then_with(|| b.cmp(a))
}

/// A length-`n` 0/1 word with exactly `k` ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryString(Vec<u8>);

impl BoundaryString {
    pub fn new(bits: Vec<u8>, shape: GrassmannianShape) -> Result<Self> {
        let ones = bits.iter().filter(|&&b| b == 1).count();
        if bits.len() != shape.n() || ones != shape.k() || bits.iter().any(|&b| b > 1) {
            return Err(Error::Boundary {
                bits: bits.iter().map(|b| b.to_string()).collect(),
                k: shape.k(),
                n: shape.n(),
            });
        }
        Ok(BoundaryString(bits))
    }

    pub fn parse(text: &str, shape: GrassmannianShape) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Boundary {
                    bits: text.to_string(),
                    k: shape.k(),
                    n: shape.n(),
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits, shape)
    }

    /// Encodes `p`: the `i`-th one (1-indexed) sits at position `n-k+i-p_i`.
    pub fn from_partition(p: &Partition, shape: GrassmannianShape) -> Result<Self> {
        shape.check(p)?;
        let mut bits = vec![0u8; shape.n()];
        for i in 1..=shape.k() {
            bits[shape.cols() + i - p.part(i - 1) - 1] = 1;
        }
        Ok(BoundaryString(bits))
    }

    pub fn to_partition(&self) -> Partition {
        let k = self.ones();
        let cols = self.0.len() - k;
        let parts = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .enumerate()
            .map(|(i, (pos, _))| cols + i - pos)
            .collect();
        Partition::from_sorted(parts)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for BoundaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A list of Schubert conditions on a Grassmannian.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchubertProblem {
    shape: GrassmannianShape,
    conditions: Vec<Partition>,
}

impl SchubertProblem {
    pub fn new(shape: GrassmannianShape, conditions: Vec<Partition>) -> Result<Self> {
        for c in &conditions {
            if c.is_empty() {
                return Err(Error::EmptyCondition);
            }
            shape.check(c)?;
        }
        Ok(SchubertProblem { shape, conditions })
    }

    /// Like [`SchubertProblem::new`], additionally requiring total
    /// codimension equal to `dim G(k,n)`.
    pub fn zero_dimensional(shape: GrassmannianShape, conditions: Vec<Partition>) -> Result<Self> {
        let p = Self::new(shape, conditions)?;
        p.check_zero_dimensional()?;
        Ok(p)
    }

    pub fn shape(&self) -> GrassmannianShape {
        self.shape
    }

    pub fn conditions(&self) -> &[Partition] {
        &self.conditions
    }

    pub fn total_weight(&self) -> usize {
        self.conditions.iter().map(Partition::weight).sum()
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.total_weight() == self.shape.dimension()
    }

    pub fn check_zero_dimensional(&self) -> Result<()> {
        if self.is_zero_dimensional() {
            Ok(())
        } else {
            Err(Error::Dimension {
                shape: self.shape,
                weight: self.total_weight(),
                expected: self.shape.dimension(),
            })
        }
    }

    /// The same multiset of conditions in canonical order.
    pub fn canonical(&self) -> SchubertProblem {
        let mut conditions = self.conditions.clone();
        conditions.sort_by(canonical_cmp);
        SchubertProblem {
            shape: self.shape,
            conditions,
        }
    }

    pub fn same_multiset(&self, other: &SchubertProblem) -> bool {
        self.shape == other.shape && self.canonical().conditions == other.canonical().conditions
    }

    /// The same problem with conditions listed in `order`.
    pub fn reordered(&self, order: &[usize]) -> SchubertProblem {
        SchubertProblem {
            shape: self.shape,
            conditions: order.iter().map(|&i| self.conditions[i].clone()).collect(),
        }
    }

    /// The dual problem on `G(n-k,n)`: every condition transposed.
    pub fn transposed(&self) -> SchubertProblem {
        SchubertProblem {
            shape: self.shape.dual(),
            conditions: self.conditions.iter().map(Partition::transpose).collect(),
        }
    }

    /// True iff no condition meets the last column or the last row of the box,
    /// i.e. the problem is not induced from a smaller Grassmannian.
    pub fn is_primitive(&self) -> bool {
        self.conditions
            .iter()
            .all(|c| c.len() < self.shape.rows() && c.first() < self.shape.cols())
    }

    /// Conditions grouped into runs of equal consecutive entries.
    pub fn runs(&self) -> Vec<(&Partition, usize)> {
        let mut out: Vec<(&Partition, usize)> = Vec::new();
        for c in &self.conditions {
            match out.last_mut() {
                Some((last, r)) if *last == c => *r += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Renders the conditions only, e.g. `(2,2) (1)^5`.
    pub fn conditions_string(&self) -> String {
        self.runs()
            .into_iter()
            .map(|(p, r)| {
                if r == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{r}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for SchubertProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.shape, self.conditions_string())
    }
}

/// Streams every zero-dimensional problem on `shape` with at least
/// `min_conditions` nonempty conditions, each multiset exactly once, with
/// conditions in canonical order.
pub fn enumerate_problems(
    shape: GrassmannianShape,
    min_conditions: usize,
    primitive_only: bool,
) -> ProblemIter {
    let parts: Vec<Partition> = shape
        .box_partitions()
        .into_iter()
        .filter(|p| !p.is_empty())
        .collect();
    let weights = parts.iter().map(Partition::weight).collect();
    ProblemIter {
        shape,
        parts,
        weights,
        min_conditions,
        primitive_only,
        chosen: Vec::new(),
        frames: vec![0],
        remaining: shape.dimension(),
        pop_pending: false,
    }
}

/// Iterator returned by [`enumerate_problems`].
pub struct ProblemIter {
    shape: GrassmannianShape,
    parts: Vec<Partition>,
    weights: Vec<usize>,
    min_conditions: usize,
    primitive_only: bool,
    chosen: Vec<usize>,
    // next candidate index for each open depth
    frames: Vec<usize>,
    remaining: usize,
    pop_pending: bool,
}

impl ProblemIter {
    fn undo_last(&mut self) {
        if let Some(i) = self.chosen.pop() {
            self.remaining += self.weights[i];
        }
    }
}

impl Iterator for ProblemIter {
    type Item = SchubertProblem;

    fn next(&mut self) -> Option<SchubertProblem> {
        loop {
            if self.pop_pending {
                self.pop_pending = false;
                self.undo_last();
            }
            let start = *self.frames.last()?;
            let found = (start..self.parts.len()).find(|&i| self.weights[i] <= self.remaining);
            let Some(i) = found else {
                self.frames.pop();
                self.undo_last();
                continue;
            };
            *self.frames.last_mut().unwrap() = i + 1;
            self.chosen.push(i);
            self.remaining -= self.weights[i];
            if self.remaining > 0 {
                self.frames.push(i);
                continue;
            }
            self.pop_pending = true;
            if self.chosen.len() < self.min_conditions {
                continue;
            }
            let problem = SchubertProblem {
                shape: self.shape,
                conditions: self.chosen.iter().map(|&j| self.parts[j].clone()).collect(),
            };
            if self.primitive_only && !problem.is_primitive() {
                continue;
            }
            return Some(problem);
        }
    }
}
