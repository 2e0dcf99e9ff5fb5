//! The at-least-alternating criterion on choice trees, Grassmannian scans,
//! and the example families.
//!
//! At every binary vertex with branch leaf counts `(l, r)`:
//!
//! * clause `a`: `l != r` (a dead branch counts as `0`);
//! * clause `b`: `l == r == 1`;
//! * clause `c`: `l == r == m`, `m != 6`, and the problem pending at the start
//!   of the current game has `2m` solutions and is asserted two-transitive.
//!
//! Binary vertices with no leaves below them are vacuous. A tree passes when
//! every other binary vertex satisfies `a` or `b`; it passes conditionally when
//! the rest are all covered by `c`.
//!
//! A problem passes if some tree passes. Two tree policies are offered: fixed
//! left-to-right folds over condition orderings, and an adaptive search that
//! picks the pair of conditions to multiply at every game start.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{
    canonical_cmp, enumerate_problems, GrassmannianShape, Partition, SchubertProblem,
};
use crate::puzzle::{expand_pair, partition_from_south, Cursor, PuzzleSides, PuzzleState, Step};
use crate::tree::{ChoiceTree, GameState, LeafCounter, Move, Next, Tournament, VertexId};

/// Equal-leaf splits of this size are never certified by two-transitivity.
pub const MATHIEU_EXCEPTION: u128 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    A,
    B,
    C,
    None,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::A => "a",
            Clause::B => "b",
            Clause::C => "c",
            Clause::None => "none",
        }
    }
}

/// Ordered from best to worst so that `max` aggregates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    PassConditional,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassConditional => "pass-conditional",
            Status::Fail => "fail",
        }
    }
}

/// Problems externally known to have two-transitive Galois groups.
#[derive(Clone, Debug, Default)]
pub struct Assertions {
    problems: HashSet<SchubertProblem>,
}

impl Assertions {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: &SchubertProblem) {
        self.problems.insert(p.canonical());
    }

    pub fn covers(&self, p: &SchubertProblem) -> bool {
        !self.problems.is_empty() && self.problems.contains(&p.canonical())
    }

    pub fn len(&self) -> usize {
        self.problems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }
}

impl FromIterator<SchubertProblem> for Assertions {
    fn from_iter<I: IntoIterator<Item = SchubertProblem>>(iter: I) -> Self {
        let mut a = Assertions::none();
        for p in iter {
            a.insert(&p);
        }
        a
    }
}

/// A binary vertex and the clause that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Vertex id when evaluated on a materialized tree.
    pub vertex: Option<VertexId>,
    /// The problem pending when the game containing the vertex began.
    pub pending: SchubertProblem,
    /// Northwest and northeast factors of that game.
    pub factors: (Partition, Partition),
    pub cursor: Cursor,
    pub left: BigUint,
    pub right: BigUint,
    pub clause: Clause,
}

impl Witness {
    pub fn describe(&self) -> String {
        format!(
            "{}*{} in [{}] at r{}c{} leaves ({},{}) clause {}",
            self.factors.0,
            self.factors.1,
            self.pending.conditions_string(),
            self.cursor.row,
            self.cursor.cell,
            self.left,
            self.right,
            self.clause.as_str()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub status: Status,
    /// Failing vertices when the status is `Fail`, otherwise the vertices
    /// certified by clause `c`.
    pub witnesses: Vec<Witness>,
    pub assertions_used: Vec<SchubertProblem>,
}

// `covered` reports whether clause `c` is available for an `(m,m)` split.
fn clause_of(
    left: u128,
    right: u128,
    covered: impl FnOnce() -> Result<bool>,
) -> Result<Option<Clause>> {
    if left == 0 && right == 0 {
        return Ok(None);
    }
    if left != right {
        return Ok(Some(Clause::A));
    }
    if left == 1 {
        return Ok(Some(Clause::B));
    }
    if left != MATHIEU_EXCEPTION && covered()? {
        return Ok(Some(Clause::C));
    }
    Ok(Some(Clause::None))
}

fn classify(
    left: u128,
    right: u128,
    t: &Tournament,
    state: &GameState,
    counter: &mut LeafCounter,
    assertions: &Assertions,
) -> Result<Option<(Clause, Option<SchubertProblem>)>> {
    let mut pending = None;
    let clause = clause_of(left, right, || {
        if assertions.is_empty() {
            return Ok(false);
        }
        let p = t.pending_problem(state.game, state.acc);
        if !assertions.covers(&p) {
            return Ok(false);
        }
        let start = t.game_start_state(state.game, state.acc);
        let ok = counter.leaves(t, &start)? == 2 * left;
        pending = ok.then_some(p);
        Ok(ok)
    })?;
    Ok(clause.map(|c| (c, pending)))
}

fn branch_leaves(
    t: &Tournament,
    children: &[(u8, GameState)],
    counter: &mut LeafCounter,
) -> Result<(u128, u128)> {
    Ok((
        counter.leaves(t, &children[0].1)?,
        counter.leaves(t, &children[1].1)?,
    ))
}

/// Evaluates the criterion on a materialized tree, listing every witness.
pub fn evaluate_criterion(tree: &ChoiceTree, assertions: &Assertions) -> Result<CriterionVerdict> {
    let t = tree.tournament();
    let mut counter = LeafCounter::new();
    let mut fails = Vec::new();
    let mut conditional = Vec::new();
    let mut used: BTreeSet<SchubertProblem> = BTreeSet::new();
    for b in tree.bifurcations() {
        let v = tree.vertex(b.vertex);
        let state = v
            .state
            .ok_or_else(|| Error::Internal("binary vertex without a game state".into()))?;
        let left = u128::try_from(&b.left).map_err(|_| Error::CountOverflow)?;
        let right = u128::try_from(&b.right).map_err(|_| Error::CountOverflow)?;
        let Some((clause, asserted)) = classify(left, right, t, &state, &mut counter, assertions)?
        else {
            continue;
        };
        let witness = Witness {
            vertex: Some(b.vertex),
            pending: t.pending_problem(state.game, state.acc),
            factors: t.factors(state.game, state.acc),
            cursor: state.puzzle.cursor(),
            left: b.left,
            right: b.right,
            clause,
        };
        match clause {
            Clause::None => fails.push(witness),
            Clause::C => {
                used.extend(asserted);
                conditional.push(witness);
            }
            _ => {}
        }
    }
    Ok(aggregate(fails, conditional, used.into_iter().collect()))
}

fn aggregate(
    fails: Vec<Witness>,
    conditional: Vec<Witness>,
    assertions_used: Vec<SchubertProblem>,
) -> CriterionVerdict {
    if !fails.is_empty() {
        CriterionVerdict {
            status: Status::Fail,
            witnesses: fails,
            assertions_used,
        }
    } else if !conditional.is_empty() {
        CriterionVerdict {
            status: Status::PassConditional,
            witnesses: conditional,
            assertions_used,
        }
    } else {
        CriterionVerdict {
            status: Status::Pass,
            witnesses: Vec::new(),
            assertions_used,
        }
    }
}

#[derive(Clone, Debug)]
struct Summary {
    status: Status,
    first: Option<Arc<Witness>>,
    used: Option<Arc<BTreeSet<SchubertProblem>>>,
}

const PASS: Summary = Summary {
    status: Status::Pass,
    first: None,
    used: None,
};

fn merge(a: &Summary, b: &Summary) -> Summary {
    let status = a.status.max(b.status);
    let first = if a.status == status {
        a.first.clone()
    } else {
        None
    }
    .or_else(|| {
        if b.status == status {
            b.first.clone()
        } else {
            None
        }
    });
    let used = match (&a.used, &b.used) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(Arc::new(x.union(y).cloned().collect())),
    };
    Summary {
        status,
        first,
        used,
    }
}

/// Memoized criterion evaluation over the tournament DAG, without
/// materializing the tree.
struct LazyEvaluator<'a> {
    t: &'a Tournament,
    assertions: &'a Assertions,
    counter: LeafCounter,
    memo: HashMap<GameState, Summary>,
}

impl LazyEvaluator<'_> {
    fn next(&mut self, next: Next) -> Result<Summary> {
        match next {
            Next::Game(s) => self.state(&s),
            _ => Ok(PASS),
        }
    }

    fn state(&mut self, s: &GameState) -> Result<Summary> {
        crate::deep(|| {
            if let Some(x) = self.memo.get(s) {
                return Ok(x.clone());
            }
            let out = match self.t.advance(s) {
                Move::Translate { next, .. } => self.next(next)?,
                Move::Fill(children) => {
                    let mut acc = PASS;
                    for (_, c) in &children {
                        acc = merge(&acc, &self.state(c)?);
                    }
                    if children.len() == 2 {
                        let (l, r) = branch_leaves(self.t, &children, &mut self.counter)?;
                        if let Some((clause, asserted)) =
                            classify(l, r, self.t, s, &mut self.counter, self.assertions)?
                        {
                            let here = Summary {
                                status: summary_status(clause),
                                first: matches!(clause, Clause::None | Clause::C).then(|| {
                                    Arc::new(Witness {
                                        vertex: None,
                                        pending: self.t.pending_problem(s.game, s.acc),
                                        factors: self.t.factors(s.game, s.acc),
                                        cursor: s.puzzle.cursor(),
                                        left: BigUint::from(l),
                                        right: BigUint::from(r),
                                        clause,
                                    })
                                }),
                                used: asserted.map(|p| Arc::new(BTreeSet::from([p.canonical()]))),
                            };
                            // this vertex precedes its descendants in preorder
                            acc = merge(&here, &acc);
                        }
                    }
                    acc
                }
            };
            self.memo.insert(*s, out.clone());
            Ok(out)
        })
    }
}

/// Outcome of the criterion on one choice tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub degree: BigUint,
    pub status: Status,
    /// First deciding witness in preorder (a failure, or a clause-`c` vertex).
    pub witness: Option<Witness>,
    pub assertions_used: Vec<SchubertProblem>,
    /// Factors of the first game played.
    pub first_game: Option<(Partition, Partition)>,
}

fn summary_status(clause: Clause) -> Status {
    match clause {
        Clause::None => Status::Fail,
        Clause::C => Status::PassConditional,
        _ => Status::Pass,
    }
}

/// Evaluates the criterion on the fixed-order choice tree of `problem`
/// without building the tree.
pub fn assess(problem: &SchubertProblem, assertions: &Assertions) -> Result<Assessment> {
    let t = Tournament::new(problem)?;
    let mut ev = LazyEvaluator {
        t: &t,
        assertions,
        counter: LeafCounter::new(),
        memo: HashMap::new(),
    };
    let root = t.root();
    let summary = ev.next(root)?;
    let degree = BigUint::from(ev.counter.next_leaves(&t, root)?);
    let conds = problem.conditions();
    Ok(Assessment {
        degree,
        status: summary.status,
        witness: summary.first.map(|w| (*w).clone()),
        assertions_used: summary
            .used
            .map(|u| u.iter().cloned().collect())
            .unwrap_or_default(),
        first_game: (conds.len() > 1).then(|| (conds[0].clone(), conds[1].clone())),
    })
}

/// How the choice tree of a problem is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreePolicy {
    /// Fold the conditions left to right in a fixed order.
    Fixed,
    /// At every game start, play the pair of pending conditions (in either
    /// orientation) whose subtree does best.
    #[default]
    Adaptive,
}

impl TreePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TreePolicy::Fixed => "fixed",
            TreePolicy::Adaptive => "adaptive",
        }
    }
}

#[derive(Clone, Debug)]
struct Choice {
    summary: Summary,
    pair: Option<(Partition, Partition)>,
}

/// Criterion evaluation under [`TreePolicy::Adaptive`]. Degrees and
/// decisions are memoized per multiset of pending conditions, so one
/// evaluator can be reused across all problems of a shape.
pub struct AdaptiveEvaluator<'a> {
    shape: GrassmannianShape,
    full_box: Partition,
    assertions: &'a Assertions,
    products: HashMap<(Partition, Partition), Vec<(Partition, u128)>>,
    degrees: HashMap<Vec<Partition>, u128>,
    choices: HashMap<Vec<Partition>, Choice>,
}

fn sorted(mut conds: Vec<Partition>) -> Vec<Partition> {
    conds.sort_by(canonical_cmp);
    conds
}

impl<'a> AdaptiveEvaluator<'a> {
    pub fn new(shape: GrassmannianShape, assertions: &'a Assertions) -> Self {
        AdaptiveEvaluator {
            shape,
            full_box: shape.full_box(),
            assertions,
            products: HashMap::new(),
            degrees: HashMap::new(),
            choices: HashMap::new(),
        }
    }

    pub fn assess(&mut self, problem: &SchubertProblem) -> Result<Assessment> {
        if problem.shape() != self.shape {
            return Err(Error::Parameter(format!(
                "evaluator is for {} but the problem lives on {}",
                self.shape,
                problem.shape()
            )));
        }
        problem.check_zero_dimensional()?;
        let conds = sorted(problem.conditions().to_vec());
        let degree = self.degree(&conds)?;
        let choice = self.choose(&conds)?;
        let s = choice.summary;
        Ok(Assessment {
            degree: BigUint::from(degree),
            status: s.status,
            witness: s.first.map(|w| (*w).clone()),
            assertions_used: s
                .used
                .map(|u| u.iter().cloned().collect())
                .unwrap_or_default(),
            first_game: choice.pair,
        })
    }

    fn product(&mut self, a: &Partition, b: &Partition) -> Result<Vec<(Partition, u128)>> {
        let key = (a.clone(), b.clone());
        if let Some(terms) = self.products.get(&key) {
            return Ok(terms.clone());
        }
        let terms = expand_pair(a, b, self.shape)?
            .terms
            .into_iter()
            .map(|(g, c)| Ok((g, u128::try_from(c).map_err(|_| Error::CountOverflow)?)))
            .collect::<Result<Vec<_>>>()?;
        self.products.insert(key, terms.clone());
        Ok(terms)
    }

    fn degree(&mut self, conds: &[Partition]) -> Result<u128> {
        if conds.len() == 1 {
            return Ok(u128::from(conds[0] == self.full_box));
        }
        if let Some(&d) = self.degrees.get(conds) {
            return Ok(d);
        }
        let mut total = 0u128;
        for (gamma, c) in self.product(&conds[0], &conds[1])? {
            let mut child = vec![gamma];
            child.extend_from_slice(&conds[2..]);
            let d = self.degree(&sorted(child))?;
            total = c
                .checked_mul(d)
                .and_then(|x| total.checked_add(x))
                .ok_or(Error::CountOverflow)?;
        }
        self.degrees.insert(conds.to_vec(), total);
        Ok(total)
    }

    fn choose(&mut self, conds: &[Partition]) -> Result<Choice> {
        crate::deep(|| {
            if conds.len() == 1 {
                return Ok(Choice {
                    summary: PASS,
                    pair: None,
                });
            }
            if let Some(c) = self.choices.get(conds) {
                return Ok(c.clone());
            }
            let mut best: Option<Choice> = None;
            let mut seen = HashSet::new();
            'pairs: for i in 0..conds.len() {
                for j in 0..conds.len() {
                    if i == j || !seen.insert((&conds[i], &conds[j])) {
                        continue;
                    }
                    let mut rest = conds.to_vec();
                    rest.remove(i.max(j));
                    rest.remove(i.min(j));
                    let summary = self.game(&conds[i], &conds[j], &rest, conds)?;
                    if best
                        .as_ref()
                        .is_none_or(|b| summary.status < b.summary.status)
                    {
                        let done = summary.status == Status::Pass;
                        best = Some(Choice {
                            summary,
                            pair: Some((conds[i].clone(), conds[j].clone())),
                        });
                        if done {
                            break 'pairs;
                        }
                    }
                }
            }
            let best = best.ok_or_else(|| Error::Internal("no game to play".into()))?;
            self.choices.insert(conds.to_vec(), best.clone());
            Ok(best)
        })
    }

    fn game(
        &mut self,
        a: &Partition,
        b: &Partition,
        rest: &[Partition],
        pending: &[Partition],
    ) -> Result<Summary> {
        let sides = PuzzleSides::for_product(a, b, self.shape)?;
        let mut memo = HashMap::new();
        let game = Game {
            sides: &sides,
            a,
            b,
            rest,
            pending,
        };
        Ok(self.fill(&game, sides.start(), &mut memo)?.1)
    }

    fn fill(
        &mut self,
        g: &Game<'_>,
        state: PuzzleState,
        memo: &mut HashMap<PuzzleState, (u128, Summary)>,
    ) -> Result<(u128, Summary)> {
        crate::deep(|| {
            if let Some(x) = memo.get(&state) {
                return Ok(x.clone());
            }
            let out = match g.sides.step(&state) {
                Step::Complete(south) => match partition_from_south(&south, self.shape) {
                    None => (0, PASS),
                    Some(gamma) => {
                        let mut child = vec![gamma];
                        child.extend_from_slice(g.rest);
                        let child = sorted(child);
                        match self.degree(&child)? {
                            0 => (0, PASS),
                            d => (d, self.choose(&child)?.summary),
                        }
                    }
                },
                Step::Options(options) => {
                    if options.len() > 2 {
                        return Err(Error::Internal(
                            "puzzle vertex with more than two options".into(),
                        ));
                    }
                    let mut acc = PASS;
                    let mut leaves = Vec::with_capacity(2);
                    for (_, next) in options {
                        let (l, s) = self.fill(g, next, memo)?;
                        acc = merge(&acc, &s);
                        leaves.push(l);
                    }
                    let total = leaves
                        .iter()
                        .try_fold(0u128, |t, &l| t.checked_add(l))
                        .ok_or(Error::CountOverflow)?;
                    if let [l, r] = leaves[..] {
                        let mut asserted = None;
                        let clause = clause_of(l, r, || {
                            let p = SchubertProblem::new(self.shape, g.pending.to_vec())?;
                            let ok = self.assertions.covers(&p) && self.degree(g.pending)? == 2 * l;
                            asserted = ok.then(|| p.canonical());
                            Ok(ok)
                        })?;
                        if let Some(clause) = clause {
                            let here = Summary {
                                status: summary_status(clause),
                                first: matches!(clause, Clause::None | Clause::C)
                                    .then(|| -> Result<Arc<Witness>> {
                                        Ok(Arc::new(Witness {
                                            vertex: None,
                                            pending: SchubertProblem::new(
                                                self.shape,
                                                g.pending.to_vec(),
                                            )?,
                                            factors: (g.a.clone(), g.b.clone()),
                                            cursor: state.cursor(),
                                            left: BigUint::from(l),
                                            right: BigUint::from(r),
                                            clause,
                                        }))
                                    })
                                    .transpose()?,
                                used: asserted.map(|p| Arc::new(BTreeSet::from([p]))),
                            };
                            acc = merge(&here, &acc);
                        }
                    }
                    (total, acc)
                }
            };
            memo.insert(state, out.clone());
            Ok(out)
        })
    }
}

struct Game<'g> {
    sides: &'g PuzzleSides,
    a: &'g Partition,
    b: &'g Partition,
    rest: &'g [Partition],
    pending: &'g [Partition],
}

/// Evaluates the criterion under [`TreePolicy::Adaptive`].
pub fn assess_adaptive(problem: &SchubertProblem, assertions: &Assertions) -> Result<Assessment> {
    AdaptiveEvaluator::new(problem.shape(), assertions).assess(problem)
}

/// Distinct orderings of the conditions, canonical order first, then in
/// lexicographic order of the condition ranks; at most `budget` of them.
pub fn orderings(problem: &SchubertProblem, budget: usize) -> Vec<SchubertProblem> {
    let canonical = problem.canonical();
    let conds = canonical.conditions();
    let mut ranks: Vec<usize> = Vec::with_capacity(conds.len());
    for (i, c) in conds.iter().enumerate() {
        let r = if i > 0 && conds[i - 1] == *c {
            ranks[i - 1]
        } else {
            i
        };
        ranks.push(r);
    }
    let mut order: Vec<usize> = (0..conds.len()).collect();
    let mut out = Vec::new();
    loop {
        if out.len() >= budget {
            break;
        }
        out.push(canonical.reordered(&order));
        if !next_permutation_by(&mut order, |a, b| ranks[*a].cmp(&ranks[*b])) {
            break;
        }
    }
    out
}

// Lexicographic successor with respect to `cmp`; equal elements are treated
// as interchangeable, so only distinct arrangements are produced.
fn next_permutation_by<T>(v: &mut [T], cmp: impl Fn(&T, &T) -> std::cmp::Ordering) -> bool {
    use std::cmp::Ordering::Less;
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && cmp(&v[i - 1], &v[i]) != Less {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while cmp(&v[i - 1], &v[j]) != Less {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Result of scanning one problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemRecord {
    pub problem: SchubertProblem,
    pub primitive: bool,
    pub degree: BigUint,
    /// Best status reached.
    pub status: Status,
    /// Orderings tried under the fixed policy; 1 under the adaptive policy.
    pub orderings_tried: usize,
    /// Verdict for each ordering tried, in order.
    pub per_ordering: Vec<(SchubertProblem, Status)>,
    /// Witness of the first tree tried.
    pub witness: Option<Witness>,
    /// Factors of the first game of the best tree.
    pub first_game: Option<(Partition, Partition)>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub shape: GrassmannianShape,
    pub policy: TreePolicy,
    pub ordering_budget: usize,
    pub primitive_only: bool,
    pub total_problems: usize,
    /// One record per problem, in enumeration order.
    pub records: Vec<ProblemRecord>,
    pub elapsed_secs: f64,
    pub threads: usize,
}

impl ScanReport {
    /// Problems failing under every tree tried.
    pub fn failures(&self) -> Vec<&ProblemRecord> {
        self.with_status(Status::Fail)
    }

    pub fn conditional(&self) -> Vec<&ProblemRecord> {
        self.with_status(Status::PassConditional)
    }

    pub fn primitive_failures(&self) -> Vec<&ProblemRecord> {
        self.failures()
            .into_iter()
            .filter(|r| r.primitive)
            .collect()
    }

    fn with_status(&self, status: Status) -> Vec<&ProblemRecord> {
        self.records.iter().filter(|r| r.status == status).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub policy: TreePolicy,
    /// Orderings tried per problem under the fixed policy.
    pub ordering_budget: usize,
    pub primitive_only: bool,
    /// Smallest number of conditions considered; problems with one condition
    /// are the point class and have nothing to test.
    pub min_conditions: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            policy: TreePolicy::default(),
            ordering_budget: 1,
            primitive_only: false,
            min_conditions: 2,
        }
    }
}

/// Assesses one problem under up to `budget` fixed orderings, stopping at
/// the first ordering that does not fail.
pub fn scan_problem(
    problem: &SchubertProblem,
    assertions: &Assertions,
    budget: usize,
) -> Result<ProblemRecord> {
    let mut per_ordering = Vec::new();
    let mut best = Status::Fail;
    let mut degree = BigUint::default();
    let mut witness = None;
    let mut first_game = None;
    for (i, ordered) in orderings(problem, budget).into_iter().enumerate() {
        let a = assess(&ordered, assertions)?;
        if i == 0 {
            degree = a.degree.clone();
            witness = a.witness.clone();
        }
        if a.status < best || i == 0 {
            first_game = a.first_game.clone();
        }
        best = best.min(a.status);
        per_ordering.push((ordered, a.status));
        if a.status != Status::Fail {
            break;
        }
    }
    Ok(ProblemRecord {
        problem: problem.canonical(),
        primitive: problem.is_primitive(),
        degree,
        status: best,
        orderings_tried: per_ordering.len(),
        per_ordering,
        witness,
        first_game,
    })
}

/// Assesses one problem under the adaptive policy.
pub fn scan_problem_adaptive(
    ev: &mut AdaptiveEvaluator<'_>,
    problem: &SchubertProblem,
) -> Result<ProblemRecord> {
    let a = ev.assess(problem)?;
    let canonical = problem.canonical();
    Ok(ProblemRecord {
        primitive: problem.is_primitive(),
        degree: a.degree,
        status: a.status,
        orderings_tried: 1,
        per_ordering: vec![(canonical.clone(), a.status)],
        witness: a.witness,
        first_game: a.first_game,
        problem: canonical,
    })
}

/// Scans every zero-dimensional problem of `shape`. Work is spread over the
/// current rayon pool; output order is the enumeration order.
pub fn scan_grassmannian(
    shape: GrassmannianShape,
    assertions: &Assertions,
    options: &ScanOptions,
) -> Result<ScanReport> {
    if options.ordering_budget == 0 {
        return Err(Error::Parameter(
            "ordering budget must be at least 1".into(),
        ));
    }
    let started = Instant::now();
    let problems: Vec<SchubertProblem> =
        enumerate_problems(shape, options.min_conditions, options.primitive_only).collect();
    let records = match options.policy {
        TreePolicy::Fixed => problems
            .par_iter()
            .map(|p| scan_problem(p, assertions, options.ordering_budget))
            .collect::<Result<Vec<_>>>()?,
        TreePolicy::Adaptive => problems
            .par_iter()
            .map_init(
                || AdaptiveEvaluator::new(shape, assertions),
                |ev, p| scan_problem_adaptive(ev, p),
            )
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(ScanReport {
        shape,
        policy: options.policy,
        ordering_budget: options.ordering_budget,
        primitive_only: options.primitive_only,
        total_problems: problems.len(),
        records,
        elapsed_secs: started.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
    })
}

fn rectangle(rows: usize, cols: usize) -> Partition {
    Partition::new(vec![cols; rows]).expect("rectangles are partitions")
}

/// Four copies of the `K x (N-K)` rectangle on `G(2K,2N)`; `binom(N,K)`
/// solutions, Galois group `S_N` acting on `K`-subsets.
pub fn family_c(big_n: usize, big_k: usize) -> Result<SchubertProblem> {
    if big_k == 0 || big_k >= big_n {
        return Err(Error::Parameter(format!(
            "need 1 <= K < N, got N={big_n} K={big_k}"
        )));
    }
    let shape = GrassmannianShape::new(2 * big_k, 2 * big_n)?;
    SchubertProblem::zero_dimensional(shape, vec![rectangle(big_k, big_n - big_k); 4])
}

/// Three copies of `((2(N-K))^K, (N-K)^K)` on `G(3K,3N)`; `binom(N,K)`
/// solutions.
pub fn family_g(big_n: usize, big_k: usize) -> Result<SchubertProblem> {
    if big_k == 0 || big_k >= big_n {
        return Err(Error::Parameter(format!(
            "need 1 <= K < N, got N={big_n} K={big_k}"
        )));
    }
    let shape = GrassmannianShape::new(3 * big_k, 3 * big_n)?;
    let d = big_n - big_k;
    let mut parts = vec![2 * d; big_k];
    parts.extend(vec![d; big_k]);
    let cond = Partition::new(parts)?;
    SchubertProblem::zero_dimensional(shape, vec![cond; 3])
}

/// `(m^m) (1)^(k^2 - m^2)` on `G(k,2k)`, on which the criterion fails.
pub fn counterexample_family(k: usize, m: usize) -> Result<SchubertProblem> {
    if m == 0 || m >= k || (m, k) == (1, 2) {
        return Err(Error::Parameter(format!(
            "need 1 <= m < k and (m,k) != (1,2), got k={k} m={m}"
        )));
    }
    let shape = GrassmannianShape::new(k, 2 * k)?;
    let mut conds = Vec::new();
    let ones = k * k - m * m;
    conds.push(rectangle(m, m));
    conds.extend(std::iter::repeat_n(Partition::new(vec![1])?, ones));
    SchubertProblem::zero_dimensional(shape, conds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn verdict(problem: &SchubertProblem, assertions: &Assertions) -> CriterionVerdict {
        evaluate_criterion(&build_tree(problem).unwrap(), assertions).unwrap()
    }

    #[test]
    fn four_lines_pass_by_single_leaves() {
        let q = family_c(2, 1).unwrap();
        let v = verdict(&q, &Assertions::none());
        assert_eq!(v.status, Status::Pass);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn nine_lines_fail() {
        let q = counterexample_family(3, 1).unwrap();
        let v = verdict(&q, &Assertions::none());
        assert_eq!(v.status, Status::Fail);
        assert!(!v.witnesses.is_empty());
        assert_eq!(
            assess(&q, &Assertions::none()).unwrap().status,
            Status::Fail
        );
    }

    #[test]
    fn four_rectangles_fail_at_three_three() {
        let q = family_c(4, 2).unwrap();
        let v = verdict(&q, &Assertions::none());
        assert_eq!(v.status, Status::Fail);
        assert!(v
            .witnesses
            .iter()
            .any(|w| w.left == BigUint::from(3u8) && w.right == BigUint::from(3u8)));
        // six-leaf splits are never rescued, but (3,3) splits are
        let a: Assertions = [q.clone()].into_iter().collect();
        let v = verdict(&q, &a);
        assert_ne!(v.status, Status::Fail);
        assert_eq!(v.assertions_used, vec![q.canonical()]);
    }

    #[test]
    fn lazy_and_materialized_agree() {
        let shape = GrassmannianShape::new(3, 6).unwrap();
        for q in enumerate_problems(shape, 2, false) {
            let lazy = assess(&q, &Assertions::none()).unwrap();
            let full = verdict(&q, &Assertions::none());
            assert_eq!(lazy.status, full.status, "{q}");
            if full.status == Status::Fail {
                let w = lazy.witness.unwrap();
                assert_eq!(w.clause, Clause::None);
                assert_eq!(
                    (&w.left, &w.right),
                    (&full.witnesses[0].left, &full.witnesses[0].right)
                );
            }
        }
    }

    #[test]
    fn counterexample_family_fails() {
        for k in 2..=4 {
            for m in 1..k {
                if (m, k) == (1, 2) {
                    assert!(counterexample_family(k, m).is_err());
                    continue;
                }
                let q = counterexample_family(k, m).unwrap();
                assert_eq!(
                    assess(&q, &Assertions::none()).unwrap().status,
                    Status::Fail,
                    "{q}"
                );
            }
        }
    }

    #[test]
    fn family_shapes() {
        let q = family_c(4, 1).unwrap();
        assert_eq!(q.to_string(), "G(2,8): (3)^4");
        let q = family_g(3, 2).unwrap();
        assert_eq!(q.conditions()[0], p(&[2, 2, 1, 1]));
        assert_eq!(q.shape(), GrassmannianShape::new(6, 9).unwrap());
        assert_eq!(family_g(3, 1).unwrap().conditions()[0], p(&[4, 2]));
        let q = counterexample_family(3, 2).unwrap();
        assert_eq!(q.to_string(), "G(3,6): (2,2) (1)^5");
        assert!(family_c(3, 3).is_err());
        assert!(family_g(2, 0).is_err());
        assert!(counterexample_family(3, 3).is_err());
    }

    #[test]
    fn orderings_are_distinct_and_canonical_first() {
        let g36 = GrassmannianShape::new(3, 6).unwrap();
        let q = SchubertProblem::zero_dimensional(
            g36,
            vec![p(&[1]), p(&[2, 2]), p(&[1]), p(&[1]), p(&[1]), p(&[1])],
        )
        .unwrap();
        let all = orderings(&q, usize::MAX);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], q.canonical());
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 6);
        assert_eq!(orderings(&q, 2).len(), 2);
        assert!(all.iter().all(|o| o.same_multiset(&q)));
    }

    #[test]
    fn grassmannians_of_planes_pass() {
        for n in 4..=7 {
            let shape = GrassmannianShape::new(2, n).unwrap();
            let r = scan_grassmannian(shape, &Assertions::none(), &ScanOptions::default()).unwrap();
            assert!(r.failures().is_empty(), "G(2,{n})");
        }
    }

    #[test]
    fn adaptive_never_does_worse_than_fixed() {
        let shape = GrassmannianShape::new(3, 6).unwrap();
        let none = Assertions::none();
        let mut ev = AdaptiveEvaluator::new(shape, &none);
        for q in enumerate_problems(shape, 2, false) {
            let a = ev.assess(&q).unwrap();
            assert_eq!(a.degree, crate::tableau::degree_oracle(&q).unwrap(), "{q}");
            let fixed = scan_problem(&q, &none, usize::MAX).unwrap();
            assert!(a.status <= fixed.status, "{q}");
            let (x, y) = a.first_game.unwrap();
            let mut rest = q.conditions().to_vec();
            for f in [&x, &y] {
                let i = rest.iter().position(|c| c == f).unwrap();
                rest.remove(i);
            }
        }
    }

    #[test]
    fn adaptive_keeps_the_forced_failures() {
        for (k, m) in [(3, 1), (3, 2), (4, 2), (4, 3)] {
            let q = counterexample_family(k, m).unwrap();
            let a = assess_adaptive(&q, &Assertions::none()).unwrap();
            assert_eq!(a.status, Status::Fail, "{q}");
            let w = a.witness.unwrap();
            assert_eq!(w.left, w.right);
            assert!(w.describe().contains("clause none"));
        }
        let q = family_c(4, 2).unwrap();
        assert_eq!(
            assess_adaptive(&q, &Assertions::none()).unwrap().status,
            Status::Fail
        );
        let a: Assertions = [q.clone()].into_iter().collect();
        let v = assess_adaptive(&q, &a).unwrap();
        assert_eq!(v.status, Status::PassConditional);
        assert_eq!(v.assertions_used, vec![q.canonical()]);
    }

    #[test]
    fn adaptive_rescues_a_fixed_failure() {
        let g27 = GrassmannianShape::new(2, 7).unwrap();
        let q = SchubertProblem::zero_dimensional(g27, vec![p(&[1]); 10]).unwrap();
        assert_eq!(
            scan_problem(&q, &Assertions::none(), 10).unwrap().status,
            Status::Fail
        );
        assert_eq!(
            assess_adaptive(&q, &Assertions::none()).unwrap().status,
            Status::Pass
        );
    }

    #[test]
    fn adaptive_rejects_foreign_shapes() {
        let none = Assertions::none();
        let mut ev = AdaptiveEvaluator::new(GrassmannianShape::new(2, 5).unwrap(), &none);
        assert!(ev.assess(&family_c(2, 1).unwrap()).is_err());
    }

    #[test]
    fn zero_budget_is_rejected() {
        let shape = GrassmannianShape::new(2, 4).unwrap();
        let opts = ScanOptions {
            ordering_budget: 0,
            ..ScanOptions::default()
        };
        assert!(scan_grassmannian(shape, &Assertions::none(), &opts).is_err());
    }

    #[test]
    fn failures_fail_every_tried_ordering() {
        let shape = GrassmannianShape::new(3, 6).unwrap();
        let opts = ScanOptions {
            policy: TreePolicy::Fixed,
            ordering_budget: 4,
            ..ScanOptions::default()
        };
        let r = scan_grassmannian(shape, &Assertions::none(), &opts).unwrap();
        for f in r.failures() {
            assert!(f.per_ordering.iter().all(|(_, s)| *s == Status::Fail));
            assert_eq!(f.degree, crate::tableau::degree_oracle(&f.problem).unwrap());
        }
    }
}
