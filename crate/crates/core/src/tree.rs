//! Choice trees of tournaments.
//!
//! A tournament multiplies the conditions of a problem left to right. Each
//! product (a "game") is played by filling a puzzle whose northwest side is
//! the accumulated class and whose northeast side is the next condition,
//! leaving the south side open. Every cell where two edge labels admit a legal
//! piece is a branch point; a completed puzzle is translated back into the
//! partition on its south side, which starts the next game. Leaves are the
//! completed tournaments, so the leaf count is the degree of the problem.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{GrassmannianShape, Partition, SchubertProblem};
use crate::puzzle::{self, Cursor, Label, PuzzleState, Step};

/// Default cap on the number of materialized vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

/// Position inside a tournament: the game being played, the accumulated
/// class (an index into [`Tournament::partitions`]) and the puzzle state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    pub game: u8,
    pub acc: u16,
    pub puzzle: PuzzleState,
}

/// Where a finished game leads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Next {
    Game(GameState),
    Leaf,
    Dead,
}

/// One move from a [`GameState`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Piece placements keyed by the edge label they fix; empty at a dead end.
    Fill(Vec<(Label, GameState)>),
    /// The puzzle is complete and its south side reads `gamma`.
    Translate { gamma: Option<u16>, next: Next },
}

/// The transition system shared by tree construction and lazy evaluation.
#[derive(Clone, Debug)]
pub struct Tournament {
    problem: SchubertProblem,
    partitions: Vec<Partition>,
    index: HashMap<Partition, u16>,
    nw: Vec<Vec<Label>>,
    ne: Vec<Vec<Label>>,
    full_box: u16,
}

impl Tournament {
    pub fn new(problem: &SchubertProblem) -> Result<Self> {
        problem.check_zero_dimensional()?;
        let shape = problem.shape();
        if shape.n() > puzzle::MAX_SIDE {
            return Err(Error::Parameter(format!(
                "puzzles of side {} exceed the supported maximum {}",
                shape.n(),
                puzzle::MAX_SIDE
            )));
        }
        if problem.conditions().len() > usize::from(u8::MAX) {
            return Err(Error::Parameter("too many conditions".into()));
        }
        let partitions = shape.box_partitions();
        if partitions.len() > usize::from(u16::MAX) {
            return Err(Error::Parameter(format!(
                "{shape} has too many Schubert classes"
            )));
        }
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect::<HashMap<_, _>>();
        let nw = partitions
            .iter()
            .map(|p| {
                puzzle::nw_labels(
                    &crate::partition::BoundaryString::from_partition(p, shape).unwrap(),
                )
            })
            .collect();
        let ne = problem
            .conditions()
            .iter()
            .map(|p| {
                crate::partition::BoundaryString::from_partition(p, shape)
                    .map(|b| puzzle::ne_labels(&b))
            })
            .collect::<Result<Vec<_>>>()?;
        let full_box = index[&shape.full_box()];
        Ok(Tournament {
            problem: problem.clone(),
            partitions,
            index,
            nw,
            ne,
            full_box,
        })
    }

    pub fn problem(&self) -> &SchubertProblem {
        &self.problem
    }

    pub fn shape(&self) -> GrassmannianShape {
        self.problem.shape()
    }

    /// All box partitions; accumulated classes index into this list.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, idx: u16) -> &Partition {
        &self.partitions[usize::from(idx)]
    }

    /// The first game, or `Leaf` when there is a single condition.
    pub fn root(&self) -> Next {
        let conds = self.problem.conditions();
        match conds.len() {
            0 => Next::Dead,
            1 if self.index[&conds[0]] == self.full_box => Next::Leaf,
            1 => Next::Dead,
            _ => Next::Game(self.game_start_state(0, self.index[&conds[0]])),
        }
    }

    /// State at the first cell of `game` with accumulated class `acc`.
    pub fn game_start_state(&self, game: u8, acc: u16) -> GameState {
        GameState {
            game,
            acc,
            puzzle: puzzle::start_state(self.nw[usize::from(acc)][0]),
        }
    }

    /// The Schubert problem still to be solved when `game` begins with
    /// accumulated class `acc`.
    pub fn pending_problem(&self, game: u8, acc: u16) -> SchubertProblem {
        let mut conds = vec![self.partition(acc).clone()];
        conds.extend_from_slice(&self.problem.conditions()[usize::from(game) + 1..]);
        SchubertProblem::new(self.shape(), conds)
            .expect("accumulated classes are nonempty box partitions")
    }

    /// The classes multiplied by `game` when the accumulated class is `acc`.
    pub fn factors(&self, game: u8, acc: u16) -> (Partition, Partition) {
        (
            self.partition(acc).clone(),
            self.problem.conditions()[usize::from(game) + 1].clone(),
        )
    }

    pub fn advance(&self, state: &GameState) -> Move {
        let g = usize::from(state.game);
        let nw = &self.nw[usize::from(state.acc)];
        let ne = &self.ne[g + 1];
        match puzzle::step_with(nw, ne, &state.puzzle) {
            Step::Options(options) => Move::Fill(
                options
                    .into_iter()
                    .map(|(label, puzzle)| (label, GameState { puzzle, ..*state }))
                    .collect(),
            ),
            Step::Complete(south) => {
                let gamma =
                    puzzle::partition_from_south(&south, self.shape()).map(|p| self.index[&p]);
                let next = match gamma {
                    None => Next::Dead,
                    Some(_) if g + 2 < self.problem.conditions().len() => {
                        Next::Game(self.game_start_state(state.game + 1, gamma.unwrap()))
                    }
                    Some(idx) if idx == self.full_box => Next::Leaf,
                    Some(_) => Next::Dead,
                };
                Move::Translate { gamma, next }
            }
        }
    }
}

/// Memoized leaf counts of tournament states.
#[derive(Debug, Default)]
pub struct LeafCounter {
    memo: HashMap<GameState, u128>,
}

impl LeafCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_leaves(&mut self, t: &Tournament, next: Next) -> Result<u128> {
        match next {
            Next::Leaf => Ok(1),
            Next::Dead => Ok(0),
            Next::Game(s) => self.leaves(t, &s),
        }
    }

    pub fn leaves(&mut self, t: &Tournament, state: &GameState) -> Result<u128> {
        crate::deep(|| {
            if let Some(&c) = self.memo.get(state) {
                return Ok(c);
            }
            let count = match t.advance(state) {
                Move::Translate { next, .. } => self.next_leaves(t, next)?,
                Move::Fill(options) => {
                    let mut total: u128 = 0;
                    for (_, child) in &options {
                        let c = self.leaves(t, child)?;
                        total = total.checked_add(c).ok_or(Error::CountOverflow)?;
                    }
                    total
                }
            };
            self.memo.insert(*state, count);
            Ok(count)
        })
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }
}

/// Leaf count of the whole tournament without materializing the tree.
pub fn tournament_degree(problem: &SchubertProblem) -> Result<BigUint> {
    let t = Tournament::new(problem)?;
    let mut counter = LeafCounter::new();
    let root = t.root();
    Ok(BigUint::from(counter.next_leaves(&t, root)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    GameStart,
    FillStep,
    Translate,
    Leaf,
    DeadEnd,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::GameStart => "game-start",
            VertexKind::FillStep => "fill-step",
            VertexKind::Translate => "translate",
            VertexKind::Leaf => "leaf",
            VertexKind::DeadEnd => "dead-end",
        }
    }
}

pub type VertexId = usize;

#[derive(Clone, Debug)]
pub struct TreeVertex {
    pub kind: VertexKind,
    /// Game index and tournament state; `None` at leaves, dead ends past a
    /// translation, and the root of a one-condition problem.
    pub state: Option<GameState>,
    /// Label fixed by the move that led here.
    pub edge: Option<Label>,
    /// South-side partition, on translate vertices.
    pub translated: Option<Partition>,
    pub leaf_count: BigUint,
    pub children: Vec<VertexId>,
}

/// The materialized choice tree of a tournament, vertices in preorder.
#[derive(Clone, Debug)]
pub struct ChoiceTree {
    tournament: Tournament,
    vertices: Vec<TreeVertex>,
    root: VertexId,
}

struct Builder<'a> {
    t: &'a Tournament,
    vertices: Vec<TreeVertex>,
    budget: usize,
}

impl Builder<'_> {
    fn push(
        &mut self,
        kind: VertexKind,
        state: Option<GameState>,
        edge: Option<Label>,
    ) -> Result<VertexId> {
        if self.vertices.len() >= self.budget {
            return Err(Error::TreeBudget(self.budget));
        }
        self.vertices.push(TreeVertex {
            kind,
            state,
            edge,
            translated: None,
            leaf_count: BigUint::zero(),
            children: Vec::new(),
        });
        Ok(self.vertices.len() - 1)
    }

    fn finish(&mut self, id: VertexId, children: Vec<VertexId>) -> Result<()> {
        if children.len() > 2 {
            return Err(Error::Internal(format!(
                "vertex {id} would have out-degree {}",
                children.len()
            )));
        }
        let total = children.iter().map(|&c| &self.vertices[c].leaf_count).sum();
        let v = &mut self.vertices[id];
        v.leaf_count = total;
        v.children = children;
        Ok(())
    }

    fn next(&mut self, next: Next, edge: Option<Label>) -> Result<VertexId> {
        crate::deep(|| match next {
            Next::Leaf => {
                let id = self.push(VertexKind::Leaf, None, edge)?;
                self.vertices[id].leaf_count = BigUint::one();
                Ok(id)
            }
            Next::Dead => self.push(VertexKind::DeadEnd, None, edge),
            Next::Game(s) => {
                let id = self.push(VertexKind::GameStart, Some(s), edge)?;
                let child = self.state(s, None)?;
                self.finish(id, vec![child])?;
                Ok(id)
            }
        })
    }

    fn state(&mut self, s: GameState, edge: Option<Label>) -> Result<VertexId> {
        crate::deep(|| match self.t.advance(&s) {
            Move::Fill(options) => {
                let kind = if options.is_empty() {
                    VertexKind::DeadEnd
                } else {
                    VertexKind::FillStep
                };
                let id = self.push(kind, Some(s), edge)?;
                let mut children = Vec::with_capacity(options.len());
                for (label, child) in options {
                    children.push(self.state(child, Some(label))?);
                }
                self.finish(id, children)?;
                Ok(id)
            }
            Move::Translate { gamma, next } => {
                let id = self.push(VertexKind::Translate, Some(s), edge)?;
                self.vertices[id].translated = gamma.map(|g| self.t.partition(g).clone());
                let child = self.next(next, None)?;
                self.finish(id, vec![child])?;
                Ok(id)
            }
        })
    }
}

/// Builds the full choice tree with the default vertex budget.
pub fn build_tree(problem: &SchubertProblem) -> Result<ChoiceTree> {
    build_tree_with_budget(problem, DEFAULT_VERTEX_BUDGET)
}

pub fn build_tree_with_budget(problem: &SchubertProblem, budget: usize) -> Result<ChoiceTree> {
    let t = Tournament::new(problem)?;
    let mut b = Builder {
        t: &t,
        vertices: Vec::new(),
        budget,
    };
    let root = b.next(t.root(), None)?;
    let vertices = b.vertices;
    Ok(ChoiceTree {
        tournament: t,
        vertices,
        root,
    })
}

/// Leaf counts on the two branches of a binary vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bifurcation {
    pub vertex: VertexId,
    pub left: BigUint,
    pub right: BigUint,
}

impl ChoiceTree {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex(&self, id: VertexId) -> &TreeVertex {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    pub fn problem(&self) -> &SchubertProblem {
        self.tournament.problem()
    }

    pub fn leaf_count(&self) -> BigUint {
        self.vertices[self.root].leaf_count.clone()
    }

    /// Every out-degree-2 vertex, in preorder.
    pub fn bifurcations(&self) -> Vec<Bifurcation> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.children.len() == 2)
            .map(|(id, v)| Bifurcation {
                vertex: id,
                left: self.vertices[v.children[0]].leaf_count.clone(),
                right: self.vertices[v.children[1]].leaf_count.clone(),
            })
            .collect()
    }

    /// Leaf counts of the binary vertices where both branches reach leaves,
    /// in preorder.
    pub fn bifurcation_profile(&self) -> Vec<(BigUint, BigUint)> {
        self.bifurcations()
            .into_iter()
            .filter(|b| !b.left.is_zero() && !b.right.is_zero())
            .map(|b| (b.left, b.right))
            .collect()
    }

    /// Checks the structural invariants: out-degree at most 2, kinds agree
    /// with out-degree, and every internal leaf count is the sum over its
    /// children.
    pub fn audit(&self) -> Result<()> {
        for (id, v) in self.vertices.iter().enumerate() {
            let bad = |msg: &str| Err(Error::Internal(format!("vertex {id}: {msg}")));
            if v.children.len() > 2 {
                return bad("out-degree above 2");
            }
            match v.kind {
                VertexKind::Leaf if !v.children.is_empty() || !v.leaf_count.is_one() => {
                    return bad("leaf must be childless with count 1")
                }
                VertexKind::DeadEnd if !v.children.is_empty() || !v.leaf_count.is_zero() => {
                    return bad("dead end must be childless with count 0")
                }
                VertexKind::GameStart | VertexKind::Translate if v.children.len() != 1 => {
                    return bad("game-start and translate have exactly one child")
                }
                VertexKind::FillStep if v.children.is_empty() => {
                    return bad("fill step without children")
                }
                _ => {}
            }
            if !v.children.is_empty() {
                let sum: BigUint = v
                    .children
                    .iter()
                    .map(|&c| &self.vertices[c].leaf_count)
                    .sum();
                if sum != v.leaf_count {
                    return bad("leaf count differs from the sum over children");
                }
            }
        }
        Ok(())
    }

    fn describe(&self, v: &TreeVertex) -> String {
        let t = &self.tournament;
        match (&v.state, v.kind) {
            (Some(s), VertexKind::GameStart) => {
                t.pending_problem(s.game, s.acc).conditions_string()
            }
            (Some(s), VertexKind::Translate) => match &v.translated {
                Some(p) => format!("game {} -> {p}", s.game),
                None => format!("game {} -> invalid south side", s.game),
            },
            (Some(s), _) => format!(
                "game {} {} r{}c{} {}",
                s.game,
                t.partition(s.acc),
                s.puzzle.cursor().row,
                s.puzzle.cursor().cell,
                s.puzzle
                    .frontier_labels()
                    .iter()
                    .map(|l| char::from(b'0' + l))
                    .collect::<String>()
            ),
            (None, _) => String::new(),
        }
    }

    /// Indented text export: one vertex per line, two spaces per level:
    /// `<kind> leaves=<count> [edge=<label>] <state>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let v = &self.vertices[id];
            let _ = write!(
                out,
                "{:width$}{} leaves={}",
                "",
                v.kind.as_str(),
                v.leaf_count,
                width = 2 * depth
            );
            if let Some(e) = v.edge {
                let _ = write!(out, " edge={e}");
            }
            let d = self.describe(v);
            if !d.is_empty() {
                let _ = write!(out, " {d}");
            }
            out.push('\n');
            for &c in v.children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }

    /// Nested-list JSON export: `[kind, leaf_count, [children...]]`, with
    /// leaf counts as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        // post-order so children are ready before their parent
        let mut built: Vec<Option<serde_json::Value>> = vec![None; self.vertices.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            let v = &self.vertices[id];
            if expanded {
                let children: Vec<serde_json::Value> = v
                    .children
                    .iter()
                    .map(|&c| built[c].take().unwrap())
                    .collect();
                built[id] = Some(serde_json::json!([
                    v.kind.as_str(),
                    v.leaf_count.to_string(),
                    children
                ]));
            } else {
                stack.push((id, true));
                for &c in v.children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        built[self.root].take().unwrap()
    }

    /// Vertices of kind `FillStep` at the cursor, for debugging.
    pub fn cursor_of(&self, id: VertexId) -> Option<Cursor> {
        self.vertices[id].state.map(|s| s.puzzle.cursor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn problem(k: usize, n: usize, conds: Vec<Partition>) -> SchubertProblem {
        SchubertProblem::zero_dimensional(GrassmannianShape::new(k, n).unwrap(), conds).unwrap()
    }

    #[test]
    fn four_lines() {
        let t = build_tree(&problem(2, 4, vec![p(&[1]); 4])).unwrap();
        t.audit().unwrap();
        assert_eq!(t.leaf_count(), BigUint::from(2u8));
        let one = BigUint::one();
        assert_eq!(t.bifurcation_profile(), vec![(one.clone(), one)]);
    }

    #[test]
    fn point_class_alone() {
        let t = build_tree(&problem(2, 4, vec![p(&[2, 2])])).unwrap();
        assert_eq!(t.leaf_count(), BigUint::one());
        assert_eq!(t.len(), 1);
        assert_eq!(t.vertex(t.root()).kind, VertexKind::Leaf);
        assert!(t.bifurcation_profile().is_empty());
    }

    #[test]
    fn four_rectangles_have_a_pascal_split() {
        let t = build_tree(&problem(4, 8, vec![p(&[2, 2]); 4])).unwrap();
        t.audit().unwrap();
        assert_eq!(t.leaf_count(), BigUint::from(6u8));
        let three = BigUint::from(3u8);
        assert!(t.bifurcation_profile().contains(&(three.clone(), three)));
    }

    #[test]
    fn budget_is_enforced() {
        let q = problem(3, 6, vec![p(&[1]); 9]);
        assert_eq!(
            build_tree_with_budget(&q, 50).unwrap_err(),
            Error::TreeBudget(50)
        );
    }

    #[test]
    fn exports() {
        let t = build_tree(&problem(2, 4, vec![p(&[1]); 4])).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("game-start leaves=2 (1)^4\n"));
        assert_eq!(text.lines().count(), t.len());
        let json = t.to_json();
        assert_eq!(json[0], "game-start");
        assert_eq!(json[1], "2");
    }
}
