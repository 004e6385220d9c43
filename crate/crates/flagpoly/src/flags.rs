//! Flag shapes and the combinatorics of their torus-fixed points.
//!
//! A flag shape `(r_1, ..., r_{l+1})` with `k = r_1 + ... + r_{l+1}`
//! describes the manifold of nested subspaces of dimensions
//! `s_i = r_1 + ... + r_i` inside a fixed `k`-dimensional space. The
//! torus-fixed points are ordered set partitions of `{1, ..., k}` with
//! block sizes `(r_1, ..., r_{l+1})`; the number of positive tangent
//! weights at such a point is the N statistic computed here.

use crate::poly::{q_multinomial, IntPolynomial};
use crate::{Error, Result};
use num_bigint::BigInt;

/// A flag shape: the block-size vector `(r_1, ..., r_{l+1})`, every entry
/// at least 1 and at least two entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagShape {
    parts: Vec<u32>,
}

impl FlagShape {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::Domain(format!(
                "flag shape needs at least two parts, got {parts:?}"
            )));
        }
        if parts.contains(&0) {
            return Err(Error::Domain(format!(
                "flag shape parts must be positive, got {parts:?}"
            )));
        }
        Ok(FlagShape { parts })
    }

    /// The block sizes `(r_1, ..., r_{l+1})`.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Ambient dimension `k`.
    pub fn k(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of proper subspaces in the flag (`l`).
    pub fn l(&self) -> usize {
        self.parts.len() - 1
    }

    /// Partial sums `s_i = r_1 + ... + r_i` for `i = 1..=l+1`.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|&r| {
                acc += r;
                acc
            })
            .collect()
    }

    /// Complex dimension: `sum_i r_i * (k - s_i)`.
    pub fn dim(&self) -> usize {
        let k = self.k();
        self.parts
            .iter()
            .zip(self.partial_sums())
            .map(|(&r, s)| (r * (k - s)) as usize)
            .sum()
    }

    /// True when every part is 1 (a complete flag).
    pub fn is_complete(&self) -> bool {
        self.parts.iter().all(|&r| r == 1)
    }
}

/// An ordered set partition of `{1, ..., k}`: a torus-fixed point of a flag
/// manifold, or more generally any tuple of pairwise disjoint blocks
/// covering `{1, ..., k}`. Blocks may be empty; each block is stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple {
    blocks: Vec<Vec<usize>>,
}

impl IndexTuple {
    /// Validates that the blocks partition `{1, ..., k}` and sorts each one.
    pub fn new(blocks: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        let mut count = 0;
        for block in &blocks {
            for &x in block {
                if x == 0 || x > k || seen[x] {
                    return Err(Error::Domain(format!(
                        "blocks {blocks:?} do not partition 1..={k}"
                    )));
                }
                seen[x] = true;
                count += 1;
            }
        }
        if count != k {
            return Err(Error::Domain(format!(
                "blocks {blocks:?} cover {count} of {k} elements"
            )));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        Ok(IndexTuple { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block sizes in order.
    pub fn profile(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// All triples `(s, nu, mu)` with `nu` in block `s` (0-based) and `mu`
    /// outside the union of blocks `0..=s`. These index the tangent
    /// directions at the fixed point, with weight `alpha_mu - alpha_nu`.
    pub fn tangent_directions(&self) -> Vec<(usize, usize, usize)> {
        let k = self.k();
        let mut used = vec![false; k + 1];
        let mut covered: Vec<Vec<usize>> = Vec::with_capacity(self.blocks.len());
        // covered[s] = elements outside blocks 0..=s, ascending
        for block in &self.blocks {
            for &x in block {
                used[x] = true;
            }
            covered.push((1..=k).filter(|&x| !used[x]).collect());
        }
        let mut dirs = Vec::new();
        for (s, block) in self.blocks.iter().enumerate().take(self.blocks.len() - 1) {
            for &nu in block {
                for &mu in &covered[s] {
                    dirs.push((s, nu, mu));
                }
            }
        }
        dirs
    }
}

/// Enumerates all ordered set partitions of `{1, .., k}` with the given
/// block sizes (zeros allowed). Deterministic order: the first block runs
/// through its subsets in colexicographic order, then the second, and so on.
pub fn enumerate_index_tuples(k: usize, profile: &[usize]) -> Result<Vec<IndexTuple>> {
    let total: usize = profile.iter().sum();
    if total != k {
        return Err(Error::Domain(format!(
            "profile {profile:?} sums to {total}, expected {k}"
        )));
    }
    let ground: Vec<usize> = (1..=k).collect();
    let mut out = Vec::new();
    let mut acc: Vec<Vec<usize>> = Vec::with_capacity(profile.len());
    fill_blocks(&ground, profile, &mut acc, &mut out);
    Ok(out)
}

fn fill_blocks(
    remaining: &[usize],
    profile: &[usize],
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<IndexTuple>,
) {
    let Some((&size, rest_profile)) = profile.split_first() else {
        out.push(IndexTuple { blocks: acc.clone() });
        return;
    };
    for subset in subsets_colex(remaining, size) {
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|x| !subset.contains(x))
            .collect();
        acc.push(subset);
        fill_blocks(&rest, rest_profile, acc, out);
        acc.pop();
    }
}

/// All `size`-subsets of `ground` (which is ascending) in colexicographic
/// order: compared by largest element first.
fn subsets_colex(ground: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size > ground.len() {
        return Vec::new();
    }
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for top in (size - 1)..ground.len() {
        for mut rest in subsets_colex(&ground[..top], size - 1) {
            rest.push(ground[top]);
            out.push(rest);
        }
    }
    out
}

/// The N statistic: the number of positive tangent weights at the fixed
/// point, equal to the number of pairs `(i, j)` with `j` in some block `s`,
/// `i` outside blocks `1..=s`, and `i > j` (summed over `s` up to the
/// second-to-last block).
pub fn n_statistic(tuple: &IndexTuple) -> usize {
    tuple
        .tangent_directions()
        .iter()
        .filter(|&&(_, nu, mu)| mu > nu)
        .count()
}

/// The distribution of the N statistic over all ordered set partitions with
/// the given profile: `sum t^N`. Equals the q-multinomial of the profile.
pub fn f_polynomial(k: usize, profile: &[usize]) -> Result<IntPolynomial> {
    let mut p = IntPolynomial::zero();
    for tuple in enumerate_index_tuples(k, profile)? {
        p = p.add(&IntPolynomial::monomial(
            BigInt::from(1),
            n_statistic(&tuple),
        ));
    }
    Ok(p)
}

/// Poincare polynomial of the flag manifold in `t`: the q-multinomial of
/// the shape.
pub fn flag_poincare(shape: &FlagShape) -> IntPolynomial {
    q_multinomial(shape.k(), shape.parts()).expect("shape parts sum to k")
}

/// The complement-reflection `{k+1-x : x in S}` of a subset of `{1..k}`.
pub fn transpose_subset(subset: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = subset.iter().map(|&x| k + 1 - x).collect();
    out.sort_unstable();
    out
}

/// Sum of the elements of a subset.
pub fn omega(subset: &[usize]) -> usize {
    subset.iter().sum()
}

/// Splits a fixed point along a coarsening of the shape. `grouping` gives
/// how many consecutive blocks merge into each coarse block. Returns the
/// coarse tuple together with one relabelled fine tuple per group: inside a
/// group, the union of its blocks is relabelled order-preservingly to
/// `{1, ..., group size}`.
///
/// The N statistic is additive across the split: `N(tuple) = N(coarse) +
/// sum N(fine_i)`.
pub fn fibration_split(
    tuple: &IndexTuple,
    grouping: &[usize],
) -> Result<(IndexTuple, Vec<IndexTuple>)> {
    let total: usize = grouping.iter().sum();
    if total != tuple.blocks.len() {
        return Err(Error::Domain(format!(
            "grouping {grouping:?} does not cover {} blocks",
            tuple.blocks.len()
        )));
    }
    let k = tuple.k();
    let mut coarse = Vec::with_capacity(grouping.len());
    let mut fines = Vec::with_capacity(grouping.len());
    let mut next = 0;
    for &g in grouping {
        let group = &tuple.blocks[next..next + g];
        next += g;
        let mut union: Vec<usize> = group.iter().flatten().copied().collect();
        union.sort_unstable();
        // order-preserving relabelling of the union to 1..=|union|
        let rank = |x: usize| union.binary_search(&x).unwrap() + 1;
        let fine_blocks: Vec<Vec<usize>> = group
            .iter()
            .map(|b| b.iter().map(|&x| rank(x)).collect())
            .collect();
        fines.push(IndexTuple::new(fine_blocks, union.len())?);
        coarse.push(union);
    }
    Ok((IndexTuple::new(coarse, k)?, fines))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_factorial;
    use proptest::prelude::*;

    fn tuple(blocks: &[&[usize]], k: usize) -> IndexTuple {
        IndexTuple::new(blocks.iter().map(|b| b.to_vec()).collect(), k).unwrap()
    }

    /// All compositions of `k` into exactly `parts` positive parts.
    pub(crate) fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 1 {
            return if k >= 1 { vec![vec![k]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 1..=(k.saturating_sub(parts as u32 - 1)) {
            for mut rest in compositions(k - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn shape_basics() {
        let shape = FlagShape::new(vec![1, 2, 1]).unwrap();
        assert_eq!(shape.k(), 4);
        assert_eq!(shape.l(), 2);
        assert_eq!(shape.partial_sums(), vec![1, 3, 4]);
        // 1*(4-1) + 2*(4-3) + 1*(4-4) = 5
        assert_eq!(shape.dim(), 5);
        assert!(!shape.is_complete());
        assert!(FlagShape::new(vec![3]).is_err());
        assert!(FlagShape::new(vec![1, 0]).is_err());
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        let all = enumerate_index_tuples(3, &[1, 1, 1]).unwrap();
        assert_eq!(all.len(), 6);
        let all44 = enumerate_index_tuples(4, &[1, 2, 1]).unwrap();
        assert_eq!(all44.len(), 12);
        let mut seen = all44.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 12);
        assert_eq!(enumerate_index_tuples(2, &[0, 2, 0]).unwrap().len(), 1);
        assert!(enumerate_index_tuples(3, &[1, 1]).is_err());
    }

    #[test]
    fn enumeration_order_is_stable() {
        let all = enumerate_index_tuples(3, &[2, 1]).unwrap();
        let expected = vec![
            tuple(&[&[1, 2], &[3]], 3),
            tuple(&[&[1, 3], &[2]], 3),
            tuple(&[&[2, 3], &[1]], 3),
        ];
        assert_eq!(all, expected);
    }

    #[test]
    fn n_statistic_singletons() {
        let cases = [
            (vec![1, 2, 3], 3),
            (vec![1, 3, 2], 2),
            (vec![2, 1, 3], 2),
            (vec![2, 3, 1], 1),
            (vec![3, 1, 2], 1),
            (vec![3, 2, 1], 0),
        ];
        for (perm, expected) in cases {
            let t = IndexTuple::new(perm.iter().map(|&x| vec![x]).collect(), 3).unwrap();
            assert_eq!(n_statistic(&t), expected, "{perm:?}");
        }
        assert_eq!(n_statistic(&tuple(&[&[1, 2], &[3]], 3)), 2);
    }

    #[test]
    fn n_statistic_is_reversed_inversion_count() {
        // For singleton blocks, N equals the inversion number of the
        // permutation read from the last block to the first.
        let perms = enumerate_index_tuples(4, &[1, 1, 1, 1]).unwrap();
        for t in perms {
            let word: Vec<usize> = t.blocks().iter().rev().map(|b| b[0]).collect();
            let inv = word
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| word[i + 1..].iter().map(move |&b| (a, b)))
                .filter(|(a, b)| a > b)
                .count();
            assert_eq!(n_statistic(&t), inv);
        }
    }

    #[test]
    fn f_polynomial_values() {
        assert_eq!(f_polynomial(3, &[1, 1, 1]).unwrap(), q_factorial(3));
        assert_eq!(f_polynomial(2, &[1, 1]).unwrap(), IntPolynomial::from_ints(&[1, 1]));
        assert_eq!(f_polynomial(3, &[2, 1]).unwrap(), IntPolynomial::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn f_polynomial_matches_multinomial_exhaustively() {
        for k in 2..=6u32 {
            for parts in 2..=(k as usize).min(4) {
                for shape in compositions(k, parts) {
                    let profile: Vec<usize> = shape.iter().map(|&r| r as usize).collect();
                    let f = f_polynomial(k as usize, &profile).unwrap();
                    let m = q_multinomial(k, &shape).unwrap();
                    assert_eq!(f, m, "shape {shape:?}");
                }
            }
        }
        // zero parts contribute nothing
        assert_eq!(
            f_polynomial(3, &[0, 2, 0, 1]).unwrap(),
            q_multinomial(3, &[0, 2, 0, 1]).unwrap()
        );
    }

    #[test]
    fn transpose_and_omega() {
        assert_eq!(transpose_subset(&[1, 3], 4), vec![2, 4]);
        assert_eq!(omega(&[2, 5]), 7);
        assert_eq!(transpose_subset(&transpose_subset(&[2, 3], 5), 5), vec![2, 3]);
    }

    #[test]
    fn transpose_lemma_for_grassmannian_points() {
        // N at the point (S, complement) equals omega(transpose(S)) - r(r+1)/2.
        for k in 1..=7usize {
            for r in 0..=k {
                for t in enumerate_index_tuples(k, &[r, k - r]).unwrap() {
                    let s = &t.blocks()[0];
                    let expected = omega(&transpose_subset(s, k)) - r * (r + 1) / 2;
                    assert_eq!(n_statistic(&t), expected, "k={k} S={s:?}");
                }
            }
        }
    }

    #[test]
    fn fibration_split_example() {
        let t = tuple(&[&[1], &[3], &[2]], 3);
        let (coarse, fines) = fibration_split(&t, &[2, 1]).unwrap();
        assert_eq!(coarse, tuple(&[&[1, 3], &[2]], 3));
        assert_eq!(fines.len(), 2);
        assert_eq!(fines[0], tuple(&[&[1], &[2]], 2));
        assert_eq!(
            n_statistic(&t),
            n_statistic(&coarse) + fines.iter().map(n_statistic).sum::<usize>()
        );
    }

    #[test]
    fn n_statistic_additive_under_splits() {
        // exhaustively over complete flags on k <= 5 and all 2-groupings
        for k in 2..=5usize {
            let profile = vec![1; k];
            for cut in 1..k {
                let grouping = vec![cut, k - cut];
                for t in enumerate_index_tuples(k, &profile).unwrap() {
                    let (coarse, fines) = fibration_split(&t, &grouping).unwrap();
                    let total = n_statistic(&coarse)
                        + fines.iter().map(n_statistic).sum::<usize>();
                    assert_eq!(n_statistic(&t), total);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn transpose_is_involution(k in 1usize..=10, bits in prop::collection::vec(any::<bool>(), 10)) {
            let subset: Vec<usize> = (1..=k).filter(|&x| bits[x - 1]).collect();
            prop_assert_eq!(transpose_subset(&transpose_subset(&subset, k), k), subset);
        }

        #[test]
        fn tangent_direction_count_is_flag_dimension(shape in prop::collection::vec(1u32..=3, 2..4)) {
            let fs = FlagShape::new(shape.clone()).unwrap();
            let k = fs.k() as usize;
            prop_assume!(k <= 6);
            let profile: Vec<usize> = shape.iter().map(|&r| r as usize).collect();
            for t in enumerate_index_tuples(k, &profile).unwrap().into_iter().take(8) {
                prop_assert_eq!(t.tangent_directions().len(), fs.dim());
            }
        }
    }
}
