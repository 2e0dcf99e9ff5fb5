//! Permutation groups via a deterministic Schreier-Sims stabilizer chain, and
//! the group-theoretic experiments behind the criterion.
//!
//! Points are `0..d` internally; cycle notation in constructors and `Display`
//! is 1-based.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(images));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based cycles, e.g. `&[&[1, 2, 3]]` for `(1 2 3)`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = HashSet::new();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a > degree || !used.insert(a) {
                    return Err(Error::NotAPermutation(cycle.to_vec()));
                }
                images[a - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, j)| i != *j)
            .map(|(i, _)| i)
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Strong generators first added at this level.
    gens: Vec<Permutation>,
    /// `transversal[p]` maps the base point to `p`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

/// A permutation group with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let mut group = PermGroup {
            degree,
            generators,
            levels: Vec::new(),
        };
        for g in group.generators.clone() {
            let (h, level) = group.strip(&g, 0);
            if !h.is_identity() {
                group.add_at(level, h);
            }
        }
        group.complete();
        Ok(group)
    }

    pub fn symmetric(degree: usize) -> Self {
        Self::from_generators(degree, symmetric_generators(degree, 0, degree))
            .expect("generators share the degree")
    }

    pub fn alternating(degree: usize) -> Self {
        Self::from_generators(degree, alternating_generators(degree, 0, degree))
            .expect("generators share the degree")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (h, level) = self.strip(g, 0);
            level == self.levels.len() && h.is_identity()
        }
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit_of(point, self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Transitivity on ordered `k`-tuples of distinct points.
    pub fn is_k_transitive(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if k > self.degree {
            return false;
        }
        let target: usize = (0..k).map(|i| self.degree - i).product();
        let start: Vec<usize> = (0..k).collect();
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for g in &self.generators {
                let img: Vec<usize> = t.iter().map(|&p| g.apply(p)).collect();
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        seen.len() == target
    }

    /// Contains the alternating group of its degree.
    pub fn at_least_alternating(&self) -> bool {
        let d = self.degree;
        let full = factorial(d);
        let order = self.order();
        let order_ok = d < 2 || order == full || order * 2u8 == full;
        order_ok
            && alternating_generators(d, 0, d)
                .iter()
                .all(|g| self.contains(g))
    }

    /// Number of orbits on unordered pairs of distinct points.
    pub fn pair_orbit_count(&self) -> usize {
        let d = self.degree;
        let index = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            a * d + b
        };
        let mut parent: Vec<usize> = (0..d * d).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for a in 0..d {
            for b in a + 1..d {
                for g in &self.generators {
                    let x = find(&mut parent, index(a, b));
                    let y = find(&mut parent, index(g.apply(a), g.apply(b)));
                    parent[x] = y;
                }
            }
        }
        let mut roots = HashSet::new();
        for a in 0..d {
            for b in a + 1..d {
                roots.insert(find(&mut parent, index(a, b)));
            }
        }
        roots.len()
    }

    /// Every element, when the order is at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Permutation>> {
        if self.order() > BigUint::from(limit) {
            return Err(Error::Parameter(format!(
                "group of order {} exceeds the element limit {limit}",
                self.order()
            )));
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let reps: Vec<&Permutation> = level
                .orbit
                .iter()
                .filter_map(|&p| level.transversal[p].as_ref())
                .collect();
            out = out
                .iter()
                .flat_map(|g| reps.iter().map(move |u| g.then(u)))
                .collect();
        }
        Ok(out)
    }

    fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base);
            match &level.transversal[beta] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn add_at(&mut self, level: usize, h: Permutation) {
        if level == self.levels.len() {
            let base = h.first_moved().expect("nontrivial residue moves a point");
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                transversal: Vec::new(),
                orbit: Vec::new(),
            });
        }
        self.levels[level].gens.push(h);
        for i in 0..=level {
            self.rebuild_orbit(i);
        }
    }

    fn level_gens(&self, i: usize) -> Vec<Permutation> {
        self.levels[i..]
            .iter()
            .flat_map(|l| l.gens.iter().cloned())
            .collect()
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens = self.level_gens(i);
        let d = self.degree;
        let base = self.levels[i].base;
        let mut transversal: Vec<Option<Permutation>> = vec![None; d];
        transversal[base] = Some(Permutation::identity(d));
        let mut orbit = vec![base];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            for g in &gens {
                let q = g.apply(p);
                if transversal[q].is_none() {
                    transversal[q] = Some(transversal[p].as_ref().unwrap().then(g));
                    orbit.push(q);
                }
            }
            k += 1;
        }
        let level = &mut self.levels[i];
        level.transversal = transversal;
        level.orbit = orbit;
    }

    // Sift Schreier generators until every level is closed.
    fn complete(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                let gens = self.level_gens(i);
                let level = &self.levels[i];
                let orbit = level.orbit.clone();
                let transversal = level.transversal.clone();
                for &p in &orbit {
                    let up = transversal[p].as_ref().unwrap();
                    for x in &gens {
                        let q = x.apply(p);
                        let s = up.then(x).then(&transversal[q].as_ref().unwrap().inverse());
                        let (h, stop) = self.strip(&s, i + 1);
                        if !h.is_identity() {
                            self.add_at(stop, h);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
    }
}

fn orbit_of(point: usize, degree: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut k = 0;
    while k < orbit.len() {
        for g in gens {
            let q = g.apply(orbit[k]);
            if !std::mem::replace(&mut seen[q], true) {
                orbit.push(q);
            }
        }
        k += 1;
    }
    orbit
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n)
        .map(BigUint::from)
        .product::<BigUint>()
        .max(BigUint::one())
}

/// Transposition and long cycle generating the symmetric group on
/// `offset..offset+len`, embedded in degree `degree`.
pub fn symmetric_generators(degree: usize, offset: usize, len: usize) -> Vec<Permutation> {
    if len < 2 {
        return Vec::new();
    }
    let pts: Vec<usize> = (offset + 1..=offset + len).collect();
    vec![
        Permutation::from_cycles(degree, &[&pts[..2]]).expect("valid cycle"),
        Permutation::from_cycles(degree, &[&pts]).expect("valid cycle"),
    ]
}

/// The 3-cycles `(a b c)` for `c` beyond `b`, generating the alternating
/// group on `offset..offset+len`.
pub fn alternating_generators(degree: usize, offset: usize, len: usize) -> Vec<Permutation> {
    (2..len)
        .map(|j| {
            Permutation::from_cycles(degree, &[&[offset + 1, offset + 2, offset + j + 1]])
                .expect("valid cycle")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GoursatReport {
    pub m: usize,
    pub n: usize,
    /// Relaxed mode: `n = 1` and the first factor is the full symmetric group.
    pub relaxed: bool,
    pub exhaustive: bool,
    pub tested: usize,
    pub transitive: usize,
    /// Images of each `tau` for which the group was transitive but not at
    /// least alternating (or, in relaxed mode, not the full symmetric group).
    pub counterexamples: Vec<Vec<usize>>,
}

/// Joins `A_m x A_n` on `{1..m} | {m+1..m+n}` with each `tau`; whenever the
/// result is transitive it must be at least alternating. With `n = 1` the
/// first factor is `S_m` and the result must be all of `S_{m+1}`.
///
/// `samples = None` runs over every `tau` in `S_{m+n}`.
pub fn goursat_experiment(
    m: usize,
    n: usize,
    samples: Option<usize>,
    seed: u64,
) -> Result<GoursatReport> {
    let relaxed = n == 1;
    if relaxed {
        if !(2..=9).contains(&m) {
            return Err(Error::Parameter(format!(
                "relaxed mode needs 2 <= m <= 9, got m={m}"
            )));
        }
    } else if !(3 <= m && m < n && m + n <= 10) {
        return Err(Error::Parameter(format!(
            "need 3 <= m < n and m + n <= 10, got m={m} n={n}"
        )));
    }
    let d = m + n;
    let mut base = if relaxed {
        symmetric_generators(d, 0, m)
    } else {
        alternating_generators(d, 0, m)
    };
    base.extend(alternating_generators(d, m, n));
    let taus: Vec<Vec<usize>> = match samples {
        None => all_permutations(d),
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<usize> = (0..d).collect();
            (0..count)
                .map(|_| {
                    v.shuffle(&mut rng);
                    v.clone()
                })
                .collect()
        }
    };
    let full = factorial(d);
    let outcomes: Vec<(bool, Option<Vec<usize>>)> = taus
        .par_iter()
        .map(|images| {
            let mut gens = base.clone();
            gens.push(Permutation::new(images.clone()).expect("shuffled identity"));
            let g = PermGroup::from_generators(d, gens).expect("common degree");
            if !g.is_transitive() {
                return (false, None);
            }
            let ok = if relaxed {
                g.order() == full
            } else {
                g.at_least_alternating()
            };
            (true, (!ok).then(|| images.clone()))
        })
        .collect();
    Ok(GoursatReport {
        m,
        n,
        relaxed,
        exhaustive: samples.is_none(),
        tested: outcomes.len(),
        transitive: outcomes.iter().filter(|o| o.0).count(),
        counterexamples: outcomes.into_iter().filter_map(|o| o.1).collect(),
    })
}

fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = (0..d).collect();
    let mut out = vec![v.clone()];
    loop {
        let Some(i) = (1..d).rev().find(|&i| v[i - 1] < v[i]) else {
            return out;
        };
        let j = (i..d)
            .rev()
            .find(|&j| v[i - 1] < v[j])
            .expect("successor exists");
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
}

/// `S_n x S_n` on `{1..n} | {n+1..2n}` extended by the involution
/// `(1 n+1)(2 n+2)...(n 2n)`.
pub fn exceptional_group(n: usize) -> Result<PermGroup> {
    if n < 2 {
        return Err(Error::Parameter(format!("need n >= 2, got {n}")));
    }
    let d = 2 * n;
    let mut gens = symmetric_generators(d, 0, n);
    gens.extend(symmetric_generators(d, n, n));
    let swap: Vec<usize> = (0..d).map(|i| (i + n) % d).collect();
    gens.push(Permutation::new(swap)?);
    PermGroup::from_generators(d, gens)
}

/// Whether the subgroup of `g` preserving `{0..n}` projects onto the full
/// symmetric group of each half. `g` must act on `2n` points.
pub fn factor_surjective(g: &PermGroup, n: usize) -> Result<bool> {
    if g.degree() != 2 * n {
        return Err(Error::DegreeMismatch {
            expected: 2 * n,
            found: g.degree(),
        });
    }
    let stabilizer: Vec<Permutation> = g
        .elements(1 << 20)?
        .into_iter()
        .filter(|p| (0..n).all(|i| p.apply(i) < n))
        .collect();
    let left: Vec<Permutation> = stabilizer
        .iter()
        .map(|p| Permutation::new(p.images()[..n].to_vec()))
        .collect::<Result<_>>()?;
    let right: Vec<Permutation> = stabilizer
        .iter()
        .map(|p| Permutation::new(p.images()[n..].iter().map(|&x| x - n).collect()))
        .collect::<Result<_>>()?;
    let full = factorial(n);
    Ok(PermGroup::from_generators(n, left)?.order() == full
        && PermGroup::from_generators(n, right)?.order() == full)
}

/// The `K`-subsets of `{1..N}` in lexicographic order (1-based).
pub fn k_subsets(big_n: usize, big_k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, big_n, big_k, &mut Vec::new(), &mut out);
    out
}

/// Image of `S_N` acting on `K`-subsets, points numbered as in [`k_subsets`].
pub fn subset_action(big_n: usize, big_k: usize) -> Result<PermGroup> {
    if big_k == 0 || big_k >= big_n {
        return Err(Error::Parameter(format!(
            "need 1 <= K < N, got N={big_n} K={big_k}"
        )));
    }
    let subsets = k_subsets(big_n, big_k);
    let index: std::collections::HashMap<&Vec<usize>, usize> =
        subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let gens = symmetric_generators(big_n, 0, big_n)
        .iter()
        .map(|g| {
            let images = subsets
                .iter()
                .map(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&x| g.apply(x - 1) + 1).collect();
                    t.sort_unstable();
                    index[&t]
                })
                .collect();
            Permutation::new(images)
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(subsets.len(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, c).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let a = cyc(4, &[&[1, 2, 3]]);
        assert_eq!(a.to_string(), "(1 2 3)");
        assert_eq!(a.then(&a).then(&a), Permutation::identity(4));
        assert_eq!(a.inverse().to_string(), "(1 3 2)");
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 4]]).is_err());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn orders_of_classical_groups() {
        let s4 = PermGroup::from_generators(4, vec![cyc(4, &[&[1, 2]]), cyc(4, &[&[1, 2, 3, 4]])])
            .unwrap();
        assert_eq!(s4.order(), BigUint::from(24u8));
        let a5 = PermGroup::from_generators(5, vec![cyc(5, &[&[1, 2, 3]]), cyc(5, &[&[3, 4, 5]])])
            .unwrap();
        assert_eq!(a5.order(), BigUint::from(60u8));
        assert_eq!(
            PermGroup::from_generators(3, vec![]).unwrap().order(),
            BigUint::one()
        );
        for d in 1..=10 {
            assert_eq!(PermGroup::symmetric(d).order(), factorial(d), "S_{d}");
            if d >= 2 {
                assert_eq!(
                    PermGroup::alternating(d).order() * 2u8,
                    factorial(d),
                    "A_{d}"
                );
            }
        }
        assert!(PermGroup::from_generators(4, vec![cyc(3, &[&[1, 2]])]).is_err());
    }

    #[test]
    fn membership_matches_closure() {
        let g =
            PermGroup::from_generators(6, vec![cyc(6, &[&[1, 2, 3]]), cyc(6, &[&[4, 5], &[1, 2]])])
                .unwrap();
        let elements = g.elements(10_000).unwrap();
        assert_eq!(BigUint::from(elements.len()), g.order());
        let set: HashSet<_> = elements.iter().cloned().collect();
        assert_eq!(set.len(), elements.len());
        for p in all_permutations(6) {
            let p = Permutation::new(p).unwrap();
            assert_eq!(g.contains(&p), set.contains(&p), "{p}");
        }
    }

    #[test]
    fn transitivity() {
        assert!(PermGroup::symmetric(4).is_k_transitive(2));
        assert!(PermGroup::alternating(4).is_k_transitive(2));
        assert!(!PermGroup::alternating(4).is_k_transitive(3));
        let sub = subset_action(4, 2).unwrap();
        assert!(sub.is_transitive());
        assert!(!sub.is_k_transitive(2));
        assert!(!PermGroup::from_generators(3, vec![cyc(3, &[&[1, 2]])])
            .unwrap()
            .is_transitive());
    }

    #[test]
    fn alternating_detection() {
        assert!(PermGroup::symmetric(5).at_least_alternating());
        assert!(PermGroup::alternating(6).at_least_alternating());
        assert!(!subset_action(4, 2).unwrap().at_least_alternating());
        assert!(!subset_action(5, 2).unwrap().at_least_alternating());
    }

    #[test]
    fn subset_actions() {
        let g = subset_action(4, 2).unwrap();
        assert_eq!((g.degree(), g.order()), (6, BigUint::from(24u8)));
        assert_eq!(g.pair_orbit_count(), 2);
        let g = subset_action(5, 2).unwrap();
        assert_eq!((g.degree(), g.order()), (10, BigUint::from(120u8)));
        let g = subset_action(5, 1).unwrap();
        assert_eq!(g.order(), factorial(5));
        assert!(subset_action(3, 3).is_err());
    }

    #[test]
    fn exceptional_groups() {
        for (n, order) in [(2usize, 8u32), (3, 72), (4, 1152)] {
            let g = exceptional_group(n).unwrap();
            assert_eq!(g.order(), BigUint::from(order));
            assert!(g.is_transitive());
            assert!(!g.at_least_alternating());
            assert!(factor_surjective(&g, n).unwrap());
        }
        assert!(exceptional_group(1).is_err());
    }

    #[test]
    fn goursat_small_cases() {
        let r = goursat_experiment(3, 4, Some(300), 1).unwrap();
        assert!(r.counterexamples.is_empty());
        assert!(r.transitive > 0);
        let r = goursat_experiment(3, 1, None, 0).unwrap();
        assert!(r.relaxed && r.exhaustive && r.counterexamples.is_empty());
        assert_eq!(r.tested, 24);
        assert!(goursat_experiment(4, 4, Some(1), 0).is_err());
        assert!(goursat_experiment(2, 5, Some(1), 0).is_err());
    }
}
