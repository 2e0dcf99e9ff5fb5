//! Puzzle counting.
//!
//! A puzzle of side `n` is the up-pointing triangle cut into unit triangles.
//! Row `r` (0 at the apex) holds up-triangles `U(r,0..=r)` and
//! down-triangles `D(r,0..r)`; cells are filled row by row, left to right,
//! `U(r,j)` before `D(r,j)`.
//!
//! Edge labels are `0`, `1` and [`RHOMBUS`]. A rhombus piece is a pair of
//! unit triangles glued along an edge labelled [`RHOMBUS`], so every legal
//! piece can be checked one unit triangle at a time: reading the edges of a
//! unit triangle clockwise, the labels must be `000`, `111`, or a cyclic
//! rotation of `0 1 2`. Rotations are free and reflections are not.
//!
//! Boundaries are stored as: northwest side read top to bottom, northeast
//! side read top to bottom, south side read left to right. The south side
//! never carries [`RHOMBUS`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{BoundaryString, GrassmannianShape, Partition, SchubertProblem};

pub type Label = u8;

/// Label of an edge crossed by a rhombus.
pub const RHOMBUS: Label = 2;

/// Largest supported side length; frontiers are packed two bits per edge.
pub const MAX_SIDE: usize = 31;

/// Whether a unit triangle whose edges read `a, b, c` clockwise is legal.
pub fn legal_triangle(a: Label, b: Label, c: Label) -> bool {
    matches!(
        (a, b, c),
        (0, 0, 0) | (1, 1, 1) | (0, 1, 2) | (1, 2, 0) | (2, 0, 1)
    )
}

/// The unique label completing a legal triangle from two clockwise-adjacent
/// labels `a` then `b`, if any.
fn third(a: Label, b: Label) -> Option<Label> {
    (0..=RHOMBUS).find(|&c| legal_triangle(a, b, c))
}

/// A scanline of edge labels, two bits each.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frontier(u64);

impl Frontier {
    pub fn get(self, i: usize) -> Label {
        ((self.0 >> (2 * i)) & 3) as Label
    }

    fn with(self, i: usize, l: Label) -> Self {
        Frontier((self.0 & !(3 << (2 * i))) | (u64::from(l) << (2 * i)))
    }

    fn insert(self, i: usize, l: Label) -> Self {
        let low = self.0 & ((1u64 << (2 * i)) - 1);
        let high = (self.0 >> (2 * i)) << (2 * i + 2);
        Frontier(low | high | (u64::from(l) << (2 * i)))
    }

    fn remove(self, i: usize) -> Self {
        let low = self.0 & ((1u64 << (2 * i)) - 1);
        let high = (self.0 >> (2 * i + 2)) << (2 * i);
        Frontier(low | high)
    }

    pub fn labels(self, len: usize) -> Vec<Label> {
        (0..len).map(|i| self.get(i)).collect()
    }
}

/// Position of the next cell to fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cursor {
    pub row: u8,
    /// Index within the row: even values are up-triangles, odd values
    /// down-triangles.
    pub cell: u8,
}

impl Cursor {
    pub fn is_up(self) -> bool {
        self.cell.is_multiple_of(2)
    }
}

/// A partially filled puzzle: the cursor plus the labels on the boundary
/// between filled and unfilled cells.
///
/// Before `U(r,j)` the frontier holds the bottoms of `U(r,0..j)`, the left
/// edge of `U(r,j)`, then the bottoms of `U(r-1,j..r)`. Before `D(r,j)` it
/// holds the bottoms of `U(r,0..=j)`, the right edge of `U(r,j)`, then the
/// bottoms of `U(r-1,j..r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuzzleState {
    cursor: Cursor,
    frontier: Frontier,
}

impl PuzzleState {
    pub fn cursor(&self) -> Cursor {
        self.cursor
    }

    pub fn frontier(&self) -> Frontier {
        self.frontier
    }

    pub fn frontier_len(&self) -> usize {
        let r = self.cursor.row as usize;
        r + 1 + usize::from(!self.cursor.is_up())
    }

    pub fn frontier_labels(&self) -> Vec<Label> {
        self.frontier.labels(self.frontier_len())
    }
}

impl fmt::Display for PuzzleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}c{} ", self.cursor.row, self.cursor.cell)?;
        for l in self.frontier_labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// What can happen at the cursor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// The puzzle is complete; the south side reads left to right.
    Complete(Vec<Label>),
    /// Legal placements, keyed by the edge label they fix. Empty means the
    /// partial filling cannot be extended.
    Options(Vec<(Label, PuzzleState)>),
}

/// Fixed northwest and northeast sides of a puzzle whose south side is
/// left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuzzleSides {
    nw: Vec<Label>,
    ne: Vec<Label>,
}

impl PuzzleSides {
    pub fn new(nw: Vec<Label>, ne: Vec<Label>) -> Result<Self> {
        if nw.len() != ne.len() || nw.is_empty() || nw.len() > MAX_SIDE {
            return Err(Error::Parameter(format!(
                "puzzle sides must have equal length in 1..={MAX_SIDE}, got {} and {}",
                nw.len(),
                ne.len()
            )));
        }
        if nw.iter().chain(&ne).any(|&l| l > RHOMBUS) {
            return Err(Error::Parameter("edge labels must be 0, 1 or 2".into()));
        }
        Ok(PuzzleSides { nw, ne })
    }

    /// Sides for the product of the classes `alpha` (northwest) and `beta`
    /// (northeast).
    pub fn for_product(
        alpha: &Partition,
        beta: &Partition,
        shape: GrassmannianShape,
    ) -> Result<Self> {
        let nw = nw_labels(&BoundaryString::from_partition(alpha, shape)?);
        let ne = ne_labels(&BoundaryString::from_partition(beta, shape)?);
        Self::new(nw, ne)
    }

    pub fn side(&self) -> usize {
        self.nw.len()
    }

    pub fn start(&self) -> PuzzleState {
        start_state(self.nw[0])
    }

    pub fn nw(&self) -> &[Label] {
        &self.nw
    }

    pub fn ne(&self) -> &[Label] {
        &self.ne
    }

    /// Enumerates the placements available at the cursor.
    pub fn step(&self, state: &PuzzleState) -> Step {
        step_with(&self.nw, &self.ne, state)
    }
}

/// Start state for sides whose northwest side begins with `nw0`.
pub fn start_state(nw0: Label) -> PuzzleState {
    PuzzleState {
        cursor: Cursor { row: 0, cell: 0 },
        frontier: Frontier(0).with(0, nw0),
    }
}

/// [`PuzzleSides::step`] on borrowed sides.
pub fn step_with(nw: &[Label], ne: &[Label], state: &PuzzleState) -> Step {
    let n = nw.len();
    let r = state.cursor.row as usize;
    let f = state.frontier;
    if r == n {
        return Step::Complete(f.labels(n));
    }
    let cell = state.cursor.cell as usize;
    let j = cell / 2;
    let advance = |frontier: Frontier| PuzzleState {
        cursor: Cursor {
            row: r as u8,
            cell: (cell + 1) as u8,
        },
        frontier,
    };
    if cell % 2 == 1 {
        // D(r,j): top and left are known, the right edge is forced
        let left = f.get(j + 1);
        let top = f.get(j + 2);
        let options = match (0..=RHOMBUS).find(|&right| legal_triangle(top, right, left)) {
            Some(right) => vec![(right, advance(f.with(j + 1, right).remove(j + 2)))],
            None => Vec::new(),
        };
        return Step::Options(options);
    }
    let left = f.get(j);
    if j == r {
        // last up-triangle of the row: right edge is the northeast side
        let right = ne[r];
        let Some(bottom) = third(left, right) else {
            return Step::Options(Vec::new());
        };
        let done = f.with(j, bottom);
        let next = if r + 1 == n {
            PuzzleState {
                cursor: Cursor {
                    row: n as u8,
                    cell: 0,
                },
                frontier: done,
            }
        } else {
            PuzzleState {
                cursor: Cursor {
                    row: (r + 1) as u8,
                    cell: 0,
                },
                frontier: done.insert(0, nw[r + 1]),
            }
        };
        return Step::Options(vec![(bottom, next)]);
    }
    let options = (0..=RHOMBUS)
        .filter_map(|right| {
            let bottom = third(left, right)?;
            Some((right, advance(f.with(j, bottom).insert(j + 1, right))))
        })
        .collect();
    Step::Options(options)
}

/// Northwest side labels for the first factor (top to bottom).
pub fn nw_labels(b: &BoundaryString) -> Vec<Label> {
    b.bits().to_vec()
}

/// Northeast side labels for the second factor (top to bottom): the
/// boundary word reversed.
pub fn ne_labels(b: &BoundaryString) -> Vec<Label> {
    b.bits().iter().rev().copied().collect()
}

/// South side labels for the product term (left to right): the boundary
/// word reversed.
pub fn south_labels(b: &BoundaryString) -> Vec<Label> {
    b.bits().iter().rev().copied().collect()
}

/// Reads the product term off a completed south side, if it is a valid
/// boundary for `shape`.
pub fn partition_from_south(south: &[Label], shape: GrassmannianShape) -> Option<Partition> {
    let bits = south.iter().rev().copied().collect();
    BoundaryString::new(bits, shape)
        .ok()
        .map(|b| b.to_partition())
}

/// Exact number of complete fillings with the given sides, each taken
/// literally in its reading direction.
pub fn count_completions(
    nw: &BoundaryString,
    ne: &BoundaryString,
    s: &BoundaryString,
) -> Result<BigUint> {
    let n = nw.len();
    let k = nw.ones();
    for b in [ne, s] {
        if b.len() != n || b.ones() != k {
            return Err(Error::Boundary {
                bits: b.to_string(),
                k,
                n,
            });
        }
    }
    let sides = PuzzleSides::new(nw.bits().to_vec(), ne.bits().to_vec())?;
    let south = s.bits().to_vec();
    let mut memo = HashMap::new();
    Ok(count_from(&sides, &sides.start(), &south, &mut memo))
}

fn count_from(
    sides: &PuzzleSides,
    state: &PuzzleState,
    south: &[Label],
    memo: &mut HashMap<PuzzleState, BigUint>,
) -> BigUint {
    crate::deep(|| {
        if let Some(c) = memo.get(state) {
            return c.clone();
        }
        let count = match sides.step(state) {
            Step::Complete(labels) => {
                if labels == south {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            }
            Step::Options(options) => options
                .iter()
                .map(|(_, next)| count_from(sides, next, south, memo))
                .sum(),
        };
        memo.insert(*state, count.clone());
        count
    })
}

/// Every complete filling of the open-bottom puzzle, grouped by the south
/// side they produce.
pub fn count_by_south(sides: &PuzzleSides) -> BTreeMap<Vec<Label>, BigUint> {
    let mut memo: HashMap<PuzzleState, BTreeMap<Vec<Label>, BigUint>> = HashMap::new();
    south_counts(sides, &sides.start(), &mut memo)
}

fn south_counts(
    sides: &PuzzleSides,
    state: &PuzzleState,
    memo: &mut HashMap<PuzzleState, BTreeMap<Vec<Label>, BigUint>>,
) -> BTreeMap<Vec<Label>, BigUint> {
    crate::deep(|| {
        if let Some(c) = memo.get(state) {
            return c.clone();
        }
        let out = match sides.step(state) {
            Step::Complete(labels) => BTreeMap::from([(labels, BigUint::one())]),
            Step::Options(options) => {
                let mut acc: BTreeMap<Vec<Label>, BigUint> = BTreeMap::new();
                for (_, next) in &options {
                    for (s, c) in south_counts(sides, next, memo) {
                        *acc.entry(s).or_default() += c;
                    }
                }
                acc
            }
        };
        memo.insert(*state, out.clone());
        out
    })
}

/// The Littlewood-Richardson coefficient `c^gamma_{alpha,beta}` in the
/// cohomology of `shape`, counted by puzzles.
pub fn lr_coefficient(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    shape: GrassmannianShape,
) -> Result<BigUint> {
    for p in [alpha, beta, gamma] {
        shape.check(p)?;
    }
    if alpha.weight() + beta.weight() != gamma.weight() {
        return Ok(BigUint::zero());
    }
    let sides = PuzzleSides::for_product(alpha, beta, shape)?;
    let south = south_labels(&BoundaryString::from_partition(gamma, shape)?);
    let mut memo = HashMap::new();
    Ok(count_from(&sides, &sides.start(), &south, &mut memo))
}

/// Product of two Schubert classes expanded in the Schubert basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expansion {
    pub terms: BTreeMap<Partition, BigUint>,
}

impl Expansion {
    pub fn single(p: Partition) -> Self {
        Expansion {
            terms: BTreeMap::from([(p, BigUint::one())]),
        }
    }

    pub fn coefficient(&self, p: &Partition) -> BigUint {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Expands `alpha * beta` by reading every puzzle's south side.
pub fn expand_pair(
    alpha: &Partition,
    beta: &Partition,
    shape: GrassmannianShape,
) -> Result<Expansion> {
    let sides = PuzzleSides::for_product(alpha, beta, shape)?;
    let mut terms = BTreeMap::new();
    for (south, count) in count_by_south(&sides) {
        if let Some(gamma) = partition_from_south(&south, shape) {
            if !count.is_zero() {
                terms.insert(gamma, count);
            }
        }
    }
    Ok(Expansion { terms })
}

/// The number of solutions of a zero-dimensional Schubert problem: the
/// coefficient of the point class in the product of its conditions.
pub fn problem_degree(problem: &SchubertProblem) -> Result<BigUint> {
    problem.check_zero_dimensional()?;
    let shape = problem.shape();
    let Some((first, rest)) = problem.conditions().split_first() else {
        return Ok(BigUint::zero());
    };
    let mut current = Expansion::single(first.clone());
    for cond in rest {
        let mut next = Expansion::default();
        for (lambda, coeff) in &current.terms {
            for (gamma, c) in expand_pair(lambda, cond, shape)?.terms {
                *next.terms.entry(gamma).or_default() += coeff * c;
            }
        }
        current = next;
    }
    Ok(current.coefficient(&shape.full_box()))
}

/// Line-oriented dump of one completed puzzle: one line per row listing,
/// for each cell in fill order, the label it fixed.
pub fn render_filling(sides: &PuzzleSides, choices: &[Label]) -> String {
    let mut out = String::new();
    let mut state = sides.start();
    let mut it = choices.iter();
    let mut row = 0u8;
    let mut line = String::new();
    loop {
        match sides.step(&state) {
            Step::Complete(_) => break,
            Step::Options(opts) => {
                let Some(&want) = it.next() else { break };
                let Some((_, next)) = opts.iter().find(|(l, _)| *l == want) else {
                    break;
                };
                if state.cursor.row != row {
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                    row = state.cursor.row;
                }
                line.push(char::from(b'0' + want));
                state = *next;
            }
        }
    }
    out.push_str(&line);
    out.push('\n');
    out
}
