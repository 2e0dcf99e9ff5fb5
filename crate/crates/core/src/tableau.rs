//! Littlewood-Richardson coefficients by the skew-tableau / lattice-word rule.
//!
//! This is a deliberately plain reference implementation used to cross-check
//! the puzzle engine. It shares no counting code with [`crate::puzzle`].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::partition::{Partition, SchubertProblem};

/// Number of LR skew tableaux of shape `outer / inner` with content `content`.
///
/// Rows weakly increase, columns strictly increase, and the reverse reading
/// word (right to left, top to bottom) is a lattice word.
pub fn lr_oracle(inner: &Partition, content: &Partition, outer: &Partition) -> BigUint {
    if !inner.is_contained_in(outer) || inner.weight() + content.weight() != outer.weight() {
        return BigUint::zero();
    }
    let rows = outer.len();
    let mut filling: Vec<Vec<usize>> = (0..rows).map(|r| vec![0; outer.part(r)]).collect();
    let mut used = vec![0usize; content.len() + 1];
    let mut count = 0u64;
    fill(
        inner,
        content,
        outer,
        0,
        outer.part(0),
        &mut filling,
        &mut used,
        &mut count,
    );
    BigUint::from(count)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    inner: &Partition,
    content: &Partition,
    outer: &Partition,
    row: usize,
    col: usize,
    filling: &mut [Vec<usize>],
    used: &mut [usize],
    count: &mut u64,
) {
    // move to the next row once this row's skew cells are done
    if row == outer.len() {
        *count += 1;
        return;
    }
    if col == inner.part(row) {
        let next = row + 1;
        fill(
            inner,
            content,
            outer,
            next,
            outer.part(next),
            filling,
            used,
            count,
        );
        return;
    }
    let c = col - 1;
    let right = if col < outer.part(row) {
        filling[row][col]
    } else {
        usize::MAX
    };
    let above = if row > 0 && c >= inner.part(row - 1) {
        filling[row - 1][c]
    } else {
        0
    };
    for v in (above + 1)..=content.len() {
        if v > right {
            break;
        }
        if used[v] == content.part(v - 1) {
            continue;
        }
        if v > 1 && used[v - 1] <= used[v] {
            continue;
        }
        used[v] += 1;
        filling[row][c] = v;
        fill(inner, content, outer, row, c, filling, used, count);
        used[v] -= 1;
    }
    filling[row][c] = 0;
}

/// Degree of a zero-dimensional problem by folding [`lr_oracle`] over the
/// conditions, discarding partitions that leave the box.
pub fn degree_oracle(problem: &SchubertProblem) -> Result<BigUint> {
    problem.check_zero_dimensional()?;
    let shape = problem.shape();
    let Some((first, rest)) = problem.conditions().split_first() else {
        return Ok(BigUint::zero());
    };
    let boxed = shape.box_partitions();
    let mut current: BTreeMap<Partition, BigUint> = BTreeMap::new();
    current.insert(first.clone(), BigUint::one());
    for cond in rest {
        let mut next: BTreeMap<Partition, BigUint> = BTreeMap::new();
        for (lambda, coeff) in &current {
            let target = lambda.weight() + cond.weight();
            for gamma in boxed.iter().filter(|g| g.weight() == target) {
                let c = lr_oracle(lambda, cond, gamma);
                if !c.is_zero() {
                    *next.entry(gamma.clone()).or_default() += coeff * c;
                }
            }
        }
        current = next;
    }
    Ok(current.remove(&shape.full_box()).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::GrassmannianShape;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn all_partitions(n: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition::new(cur.clone()).unwrap());
                return;
            }
            for x in (1..=rem.min(max)).rev() {
                cur.push(x);
                rec(rem - x, x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn small_coefficients() {
        assert_eq!(lr_oracle(&p(&[1]), &p(&[1]), &p(&[2])), BigUint::from(1u8));
        assert_eq!(
            lr_oracle(&p(&[1]), &p(&[1]), &p(&[1, 1])),
            BigUint::from(1u8)
        );
        assert_eq!(
            lr_oracle(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 2, 1])),
            BigUint::from(2u8)
        );
        assert_eq!(
            lr_oracle(&p(&[2]), &p(&[1]), &p(&[1, 1, 1])),
            BigUint::zero()
        );
        assert_eq!(
            lr_oracle(&p(&[]), &p(&[2, 1]), &p(&[2, 1])),
            BigUint::from(1u8)
        );
    }

    // Pieri rule: multiplying by a single row adds a horizontal strip.
    #[test]
    fn pieri_rule() {
        for w in 0..=6 {
            for lambda in all_partitions(w) {
                for r in 1..=3 {
                    for gamma in all_partitions(w + r) {
                        let strip = lambda.is_contained_in(&gamma)
                            && (0..gamma.len())
                                .all(|i| i == 0 || gamma.part(i) <= lambda.part(i - 1));
                        let expected = u32::from(strip);
                        assert_eq!(
                            lr_oracle(&lambda, &p(&[r]), &gamma),
                            BigUint::from(expected),
                            "{lambda} {r} {gamma}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_in_the_factors() {
        for total in 0..=8 {
            for gamma in all_partitions(total) {
                for a in 0..=total {
                    for alpha in all_partitions(a) {
                        for beta in all_partitions(total - a) {
                            assert_eq!(
                                lr_oracle(&alpha, &beta, &gamma),
                                lr_oracle(&beta, &alpha, &gamma),
                                "{alpha} {beta} {gamma}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_examples() {
        let g48 = GrassmannianShape::new(4, 8).unwrap();
        let q = SchubertProblem::zero_dimensional(g48, vec![p(&[2, 2]); 4]).unwrap();
        assert_eq!(degree_oracle(&q).unwrap(), BigUint::from(6u8));

        let g24 = GrassmannianShape::new(2, 4).unwrap();
        let q = SchubertProblem::zero_dimensional(g24, vec![p(&[2, 2]), p(&[1]), p(&[1])]);
        // total weight 6 > 4, so this is not even zero-dimensional
        assert!(q.is_err());
        let q = SchubertProblem::zero_dimensional(g24, vec![p(&[1]); 4]).unwrap();
        assert_eq!(degree_oracle(&q).unwrap(), BigUint::from(2u8));

        let g36 = GrassmannianShape::new(3, 6).unwrap();
        let q = SchubertProblem::zero_dimensional(g36, vec![p(&[2, 1]); 3]).unwrap();
        assert_eq!(degree_oracle(&q).unwrap(), BigUint::from(2u8));
    }

    #[test]
    fn degree_rejects_wrong_dimension() {
        let g24 = GrassmannianShape::new(2, 4).unwrap();
        let q = SchubertProblem::new(g24, vec![p(&[1]); 3]).unwrap();
        assert!(degree_oracle(&q).is_err());
    }
}
