//! Torus-fixed stable maps of genus zero into a flag manifold and their
//! deformation weights.
//!
//! Supported degree vectors `d = (d_1, ..., d_l)`: a single 1, two 1s at
//! distance at least two, a single 2, and two adjacent 1s. For each the
//! fixed loci are isolated points: configurations of torus-fixed lines
//! (possibly a double cover of one, possibly two lines glued at a node).
//!
//! Deformation weights come from two routes. The engine route decomposes
//! sections of the pulled-back tangent bundle over each component line by
//! pairing the tangent directions at the two endpoints and expanding each
//! pair into a weight progression, then assembles nodal curves through the
//! normalization sequence. The oracle route transcribes per-family closed
//! multiset formulas. The two routes are compared fixed point by fixed
//! point in the test suites.

use num_rational::Ratio;

use crate::flags::{enumerate_index_tuples, FlagShape, IndexTuple};
use crate::weights::{block_rep, tangent_weights, Weight, WeightMultiset};
use crate::{Error, Result};

/// A degree vector `(d_1, ..., d_l)`: `d_i` multiplies the class of the
/// line moving the `i`-th subspace only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector(Vec<u32>);

impl DegreeVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DegreeVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Matches the degree vector against the supported patterns. Positions
    /// are 1-based.
    pub fn classify(&self, shape: &FlagShape) -> Result<DegreePattern> {
        if self.0.len() != shape.l() {
            return Err(Error::Domain(format!(
                "degree {:?} has {} entries, shape {:?} needs {}",
                self.0,
                self.0.len(),
                shape.parts(),
                shape.l()
            )));
        }
        let nonzero: Vec<(usize, u32)> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(p, &d)| (p + 1, d))
            .collect();
        match nonzero.as_slice() {
            [] => Ok(DegreePattern::Zero),
            [(i, 1)] => Ok(DegreePattern::Single { i: *i }),
            [(i, 2)] => Ok(DegreePattern::Double { i: *i }),
            [(i, 1), (j, 1)] if *j == *i + 1 => Ok(DegreePattern::Adjacent { i: *i }),
            [(i, 1), (j, 1)] => Ok(DegreePattern::TwoApart { i: *i, j: *j }),
            _ => Err(Error::UnsupportedDegree { given: self.0.clone() }),
        }
    }
}

/// The supported degree patterns (positions 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreePattern {
    /// All zeros: the flag manifold itself.
    Zero,
    /// `d = e_i`.
    Single { i: usize },
    /// `d = e_i + e_j` with `j - i >= 2`.
    TwoApart { i: usize, j: usize },
    /// `d = 2 e_i`.
    Double { i: usize },
    /// `d = e_i + e_{i+1}`.
    Adjacent { i: usize },
}

/// A torus-fixed line: an index tuple with one distinguished two-element
/// block (`pair_idx`). The two endpoints of the line are the flag fixed
/// points obtained by sending one pair element into the block just left of
/// the pair and the other into the block at `right_idx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLine {
    blocks: Vec<Vec<usize>>,
    pair_idx: usize,
    right_idx: usize,
}

impl FixedLine {
    fn new(blocks: Vec<Vec<usize>>, pair_idx: usize, right_idx: usize) -> Self {
        debug_assert!(pair_idx >= 1 && blocks[pair_idx].len() == 2);
        debug_assert!(right_idx > pair_idx && right_idx < blocks.len());
        FixedLine { blocks, pair_idx, right_idx }
    }

    /// The line's tuple including the pair block.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The two moving elements, ascending.
    pub fn pair(&self) -> (usize, usize) {
        let b = &self.blocks[self.pair_idx];
        (b[0], b[1])
    }

    fn k(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    fn other(&self, elem: usize) -> usize {
        let (x, y) = self.pair();
        debug_assert!(elem == x || elem == y);
        if elem == x {
            y
        } else {
            x
        }
    }

    /// The endpoint where `left` joins the block left of the pair and the
    /// other pair element joins the block at `right_idx`.
    pub fn endpoint(&self, left: usize) -> IndexTuple {
        let other = self.other(left);
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(self.blocks.len() - 1);
        for (idx, block) in self.blocks.iter().enumerate() {
            if idx == self.pair_idx {
                continue;
            }
            blocks.push(block.clone());
        }
        blocks[self.pair_idx - 1].push(left);
        blocks[self.right_idx - 1].push(other);
        IndexTuple::new(blocks, self.k()).expect("endpoint blocks partition 1..=k")
    }

    /// Tangent weight of the line at the `left` endpoint: `alpha_other -
    /// alpha_left`.
    pub fn lambda(&self, left: usize) -> Weight {
        Weight::difference(self.other(left), left)
    }
}

/// One component of a nodal fixed curve: a line plus the pair element that
/// sits on the left at the node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub line: FixedLine,
    pub node_elem: usize,
}

impl Component {
    pub fn node_point(&self) -> IndexTuple {
        self.line.endpoint(self.node_elem)
    }

    /// Tangent weight of the component at its node end.
    pub fn lambda_node(&self) -> Weight {
        self.line.lambda(self.node_elem)
    }
}

/// Weights of the sections of the tangent bundle restricted to the image
/// line and pulled back through the degree-`e` cover.
///
/// Each tangent direction at one endpoint pairs with its image under the
/// pair transposition at the other endpoint; the weight difference is an
/// integer multiple `delta` of the line tangent `lambda`, with `delta` in
/// `{-1, 0, 1, 2}`. With `D = e * delta`, the direction contributes the
/// progression `w - (j/e) lambda` for `j = 0..=D` when `D >= 0`, nothing
/// when `D = -1`, and removes the single weight `w + lambda/e` when
/// `D = -2`.
pub fn h0_line_weights(line: &FixedLine, e: u32) -> Result<WeightMultiset> {
    if e == 0 {
        return Err(Error::Domain("cover degree must be positive".into()));
    }
    let (x, y) = line.pair();
    let endpoint = line.endpoint(x);
    let lam = line.lambda(x);
    let lam_e = lam.div_int(e as i64);
    let tau = |z: usize| {
        if z == x {
            y
        } else if z == y {
            x
        } else {
            z
        }
    };
    let mut h0 = WeightMultiset::new();
    for (_, nu, mu) in endpoint.tangent_directions() {
        let w = Weight::difference(mu, nu);
        let sw = Weight::difference(tau(mu), tau(nu));
        let diff = w.sub(&sw);
        let delta: i64 = if diff.is_zero() {
            0
        } else {
            let ratio = diff.ratio_to(&lam).ok_or_else(|| {
                Error::Inconsistency(format!(
                    "paired direction difference {diff} is not a multiple of {lam}"
                ))
            })?;
            if !ratio.is_integer() {
                return Err(Error::Inconsistency(format!(
                    "paired direction ratio {ratio} is not an integer"
                )));
            }
            ratio.to_integer()
        };
        if !(-1..=2).contains(&delta) {
            return Err(Error::Inconsistency(format!(
                "direction pairing exponent {delta} outside -1..=2 for weight {w}"
            )));
        }
        let d = e as i64 * delta;
        if d >= 0 {
            let mut cur = w;
            for _ in 0..=d {
                h0.push(cur.clone(), 1);
                cur = cur.sub(&lam_e);
            }
        } else if d == -2 {
            h0.push(w.add(&lam_e), -1);
        }
        // d == -1: the direction contributes no sections
    }
    Ok(h0)
}

/// Deformation weights of an irreducible fixed map: the degree-`e` cover of
/// `line`. Sections of the pulled-back tangent bundle minus the
/// automorphisms `{0, lambda/e, -lambda/e}` of the cover.
pub fn def_irreducible(line: &FixedLine, e: u32) -> Result<WeightMultiset> {
    let (x, _) = line.pair();
    let lam_e = line.lambda(x).div_int(e as i64);
    let mut def = h0_line_weights(line, e)?;
    def.push(Weight::zero(), -1);
    def.push(lam_e.clone(), -1);
    def.push(lam_e.neg(), -1);
    def.ensure_effective("def_irreducible")?;
    Ok(def)
}

/// Deformation weights of a two-component nodal fixed map, via the
/// normalization sequence: sections over both components, minus the tangent
/// space at the node image, plus the node smoothing `lambda_1 + lambda_2`,
/// minus the automorphisms `{0, -lambda}` of each pointed component.
pub fn def_nodal(c1: &Component, c2: &Component) -> Result<WeightMultiset> {
    let node = c1.node_point();
    if node != c2.node_point() {
        return Err(Error::Inconsistency(
            "nodal components do not share the node image".into(),
        ));
    }
    let lam1 = c1.lambda_node();
    let lam2 = c2.lambda_node();
    let mut def = h0_line_weights(&c1.line, 1)?.add(&h0_line_weights(&c2.line, 1)?);
    def = def.subtract(&tangent_weights(&node));
    def.push(lam1.add(&lam2), 1);
    def.push(Weight::zero(), -2);
    def.push(lam1.neg(), -1);
    def.push(lam2.neg(), -1);
    def.ensure_effective("def_nodal")?;
    Ok(def)
}

/// Combinatorial family of a fixed map, named by the configuration of the
/// moving elements. Positions are 1-based degree slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Irreducible line families: the pair sits after block `m`, spans `n`
    /// middle blocks (degree slots `m+1..=m+n+1`).
    Line { m: usize, n: usize },
    /// Degree `2e_i`: double cover of a line.
    DoubleCover { i: usize },
    /// Degree `2e_i`: two degree-1 components with the same image line.
    SameImage { i: usize },
    /// Degree `2e_i`: two lines sharing the left moving element.
    CommonLeft { i: usize },
    /// Degree `2e_i`: two lines sharing the right moving element.
    CommonRight { i: usize },
    /// Degree `2e_i`: two disjoint lines glued at a common flag point.
    DisjointPair { i: usize },
    /// Degree `e_i + e_j`, `j - i >= 2`: two lines in distant slots.
    DistantPair { i: usize, j: usize },
    /// Degree `e_i + e_{i+1}`: chain with two distinct middle elements.
    AdjacentDisjoint { i: usize },
    /// Degree `e_i + e_{i+1}`: chain passing through one middle element.
    AdjacentShared { i: usize },
}

/// The curve underlying a fixed map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curve {
    Irreducible { line: FixedLine, cover: u32 },
    Nodal { c1: Component, c2: Component },
}

/// A fixed stable map: its family, the index tuple it was enumerated from,
/// and its curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedMapDescriptor {
    pub family: Family,
    pub tuple: IndexTuple,
    pub curve: Curve,
}

/// A fixed point together with its deformation weights (engine route).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub descriptor: FixedMapDescriptor,
    pub def: WeightMultiset,
}

fn profile(entries: Vec<i64>) -> Option<Vec<usize>> {
    entries
        .iter()
        .map(|&e| usize::try_from(e).ok())
        .collect::<Option<Vec<usize>>>()
}

/// Tuples for a profile given as possibly-negative entries; a negative
/// entry means the family is empty for this shape.
fn tuples_for(k: usize, entries: Vec<i64>) -> Result<Vec<IndexTuple>> {
    match profile(entries) {
        Some(p) => enumerate_index_tuples(k, &p),
        None => Ok(Vec::new()),
    }
}

fn singleton(block: &[usize]) -> usize {
    debug_assert_eq!(block.len(), 1);
    block[0]
}

fn with_elem(block: &[usize], extra: usize) -> Vec<usize> {
    let mut out = block.to_vec();
    out.push(extra);
    out.sort_unstable();
    out
}

/// Enumerates the irreducible-line family with the pair after `m` leading
/// blocks and `n` spanned middle blocks (`m + n + 2 <= l + 1`).
pub fn enumerate_fixed_lines(shape: &FlagShape, m: usize, n: usize) -> Result<Vec<FixedLine>> {
    let parts = shape.parts();
    let l = shape.l();
    if m + n + 2 > l + 1 {
        return Err(Error::Domain(format!(
            "line family (m={m}, n={n}) does not fit shape {parts:?}"
        )));
    }
    let wide = |r: &u32| *r as i64;
    let mut entries: Vec<i64> = Vec::with_capacity(l + 2);
    entries.extend(parts[..m].iter().map(wide));
    entries.push(parts[m] as i64 - 1);
    entries.push(2);
    entries.extend(parts[m + 1..=m + n].iter().map(wide));
    entries.push(parts[m + n + 1] as i64 - 1);
    entries.extend(parts[m + n + 2..].iter().map(wide));
    let tuples = tuples_for(shape.k() as usize, entries)?;
    Ok(tuples
        .into_iter()
        .map(|t| FixedLine::new(t.blocks().to_vec(), m + 1, m + n + 2))
        .collect())
}

/// Enumerates every fixed stable map for a supported nonzero degree,
/// computing each deformation multiset through the engine route. The order
/// is deterministic: families in a fixed order, tuples in enumeration
/// order.
pub fn enumerate_fixed_maps(shape: &FlagShape, degree: &DegreeVector) -> Result<Vec<FixedPoint>> {
    match degree.classify(shape)? {
        DegreePattern::Zero => Err(Error::Domain(
            "zero degree: the moduli space is the flag manifold itself".into(),
        )),
        DegreePattern::Single { i } => single_family(shape, i),
        DegreePattern::TwoApart { i, j } => two_apart_family(shape, i, j),
        DegreePattern::Double { i } => double_families(shape, i),
        DegreePattern::Adjacent { i } => adjacent_families(shape, i),
    }
}

fn push_irreducible(
    out: &mut Vec<FixedPoint>,
    family: Family,
    tuple: IndexTuple,
    line: FixedLine,
    cover: u32,
) -> Result<()> {
    let def = def_irreducible(&line, cover)?;
    out.push(FixedPoint {
        descriptor: FixedMapDescriptor { family, tuple, curve: Curve::Irreducible { line, cover } },
        def,
    });
    Ok(())
}

fn push_nodal(
    out: &mut Vec<FixedPoint>,
    family: Family,
    tuple: IndexTuple,
    c1: Component,
    c2: Component,
) -> Result<()> {
    let def = def_nodal(&c1, &c2)?;
    out.push(FixedPoint {
        descriptor: FixedMapDescriptor { family, tuple, curve: Curve::Nodal { c1, c2 } },
        def,
    });
    Ok(())
}

fn single_family(shape: &FlagShape, i: usize) -> Result<Vec<FixedPoint>> {
    let mut out = Vec::new();
    for line in enumerate_fixed_lines(shape, i - 1, 0)? {
        let tuple = IndexTuple::new(line.blocks().to_vec(), shape.k() as usize)?;
        push_irreducible(&mut out, Family::Line { m: i - 1, n: 0 }, tuple, line, 1)?;
    }
    Ok(out)
}

fn two_apart_family(shape: &FlagShape, i: usize, j: usize) -> Result<Vec<FixedPoint>> {
    let parts = shape.parts();
    let k = shape.k() as usize;
    let wide = |r: &u32| *r as i64;
    let mut entries: Vec<i64> = Vec::new();
    entries.extend(parts[..i - 1].iter().map(wide));
    entries.extend([parts[i - 1] as i64 - 1, 1, 1, parts[i] as i64 - 1]);
    entries.extend(parts[i + 1..j - 1].iter().map(wide));
    entries.extend([parts[j - 1] as i64 - 1, 1, 1, parts[j] as i64 - 1]);
    entries.extend(parts[j + 1..].iter().map(wide));
    let mut out = Vec::new();
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let a = singleton(&t[i]);
        let b = singleton(&t[i + 1]);
        let c = singleton(&t[j + 2]);
        let d = singleton(&t[j + 3]);
        // component in slot i: c and d frozen in their node configuration
        let mut blocks1: Vec<Vec<usize>> = t[..i].to_vec();
        blocks1.push(vec![a.min(b), a.max(b)]);
        blocks1.push(t[i + 2].clone());
        blocks1.extend(t[i + 3..=j].iter().cloned());
        blocks1.push(with_elem(&t[j + 1], c));
        blocks1.push(with_elem(&t[j + 4], d));
        blocks1.extend(t[j + 5..].iter().cloned());
        let c1 = Component { line: FixedLine::new(blocks1, i, i + 1), node_elem: a };
        // component in slot j: a and b frozen
        let mut blocks2: Vec<Vec<usize>> = t[..i - 1].to_vec();
        blocks2.push(with_elem(&t[i - 1], a));
        blocks2.push(with_elem(&t[i + 2], b));
        blocks2.extend(t[i + 3..=j].iter().cloned());
        blocks2.push(t[j + 1].clone());
        blocks2.push(vec![c.min(d), c.max(d)]);
        blocks2.push(t[j + 4].clone());
        blocks2.extend(t[j + 5..].iter().cloned());
        let c2 = Component { line: FixedLine::new(blocks2, j, j + 1), node_elem: c };
        push_nodal(&mut out, Family::DistantPair { i, j }, tuple, c1, c2)?;
    }
    Ok(out)
}

fn double_families(shape: &FlagShape, i: usize) -> Result<Vec<FixedPoint>> {
    let parts = shape.parts();
    let k = shape.k() as usize;
    let ri = parts[i - 1] as i64;
    let rn = parts[i] as i64;
    let head = |entries: &mut Vec<i64>| {
        entries.extend(parts[..i - 1].iter().map(|&r| r as i64));
    };
    let tail = |entries: &mut Vec<i64>| {
        entries.extend(parts[i + 1..].iter().map(|&r| r as i64));
    };
    let mut out = Vec::new();

    // double cover of a line
    for line in enumerate_fixed_lines(shape, i - 1, 0)? {
        let tuple = IndexTuple::new(line.blocks().to_vec(), k)?;
        push_irreducible(&mut out, Family::DoubleCover { i }, tuple, line, 2)?;
    }

    // two components with the same image line, node at the a-endpoint
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 1, 1, 1, rn - 1]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let a = singleton(&t[i]);
        let b = singleton(&t[i + 1]);
        let mut blocks: Vec<Vec<usize>> = t[..i].to_vec();
        blocks.push(vec![a.min(b), a.max(b)]);
        blocks.extend(t[i + 2..].iter().cloned());
        let line = FixedLine::new(blocks, i, i + 1);
        let c1 = Component { line: line.clone(), node_elem: a };
        let c2 = Component { line, node_elem: a };
        push_nodal(&mut out, Family::SameImage { i }, tuple, c1, c2)?;
    }

    // two lines sharing the left element a, reaching b1 and b2
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 1, 1, 2, rn - 2]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let a = singleton(&t[i]);
        let (b1, b2) = (t[i + 1][0], t[i + 1][1]);
        let comp = |b_in: usize, b_out: usize| {
            let mut blocks: Vec<Vec<usize>> = t[..i].to_vec();
            blocks.push(vec![a.min(b_in), a.max(b_in)]);
            blocks.push(with_elem(&t[i + 2], b_out));
            blocks.extend(t[i + 3..].iter().cloned());
            Component { line: FixedLine::new(blocks, i, i + 1), node_elem: a }
        };
        let (c1, c2) = (comp(b1, b2), comp(b2, b1));
        push_nodal(&mut out, Family::CommonLeft { i }, tuple, c1, c2)?;
    }

    // two lines sharing the right element b, leaving a1 and a2
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 2, 2, 1, rn - 1]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let (a1, a2) = (t[i][0], t[i][1]);
        let b = singleton(&t[i + 1]);
        let comp = |a_mov: usize, a_stay: usize| {
            let mut blocks: Vec<Vec<usize>> = t[..i - 1].to_vec();
            blocks.push(with_elem(&t[i - 1], a_stay));
            blocks.push(vec![a_mov.min(b), a_mov.max(b)]);
            blocks.extend(t[i + 2..].iter().cloned());
            Component { line: FixedLine::new(blocks, i, i + 1), node_elem: a_mov }
        };
        let (c1, c2) = (comp(a1, a2), comp(a2, a1));
        push_nodal(&mut out, Family::CommonRight { i }, tuple, c1, c2)?;
    }

    // two disjoint lines a1-b1 and a2-b2 glued at the common flag point
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 2, 2, 1, 1, rn - 2]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let (a1, a2) = (t[i][0], t[i][1]);
        let b1 = singleton(&t[i + 1]);
        let b2 = singleton(&t[i + 2]);
        let comp = |a_mov: usize, a_stay: usize, b_mov: usize, b_stay: usize| {
            let mut blocks: Vec<Vec<usize>> = t[..i - 1].to_vec();
            blocks.push(with_elem(&t[i - 1], a_stay));
            blocks.push(vec![a_mov.min(b_mov), a_mov.max(b_mov)]);
            blocks.push(with_elem(&t[i + 3], b_stay));
            blocks.extend(t[i + 4..].iter().cloned());
            Component { line: FixedLine::new(blocks, i, i + 1), node_elem: a_mov }
        };
        let (c1, c2) = (comp(a1, a2, b1, b2), comp(a2, a1, b2, b1));
        push_nodal(&mut out, Family::DisjointPair { i }, tuple, c1, c2)?;
    }

    Ok(out)
}

fn adjacent_families(shape: &FlagShape, i: usize) -> Result<Vec<FixedPoint>> {
    let parts = shape.parts();
    let k = shape.k() as usize;
    let (ri, rm, rn) = (parts[i - 1] as i64, parts[i] as i64, parts[i + 1] as i64);
    let head = |entries: &mut Vec<i64>| {
        entries.extend(parts[..i - 1].iter().map(|&r| r as i64));
    };
    let tail = |entries: &mut Vec<i64>| {
        entries.extend(parts[i + 2..].iter().map(|&r| r as i64));
    };
    let mut out = Vec::new();

    // chain a -> b1 | b2 -> c with distinct middle elements
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 1, 1, 1, rm - 2, 1, 1, rn - 1]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let a = singleton(&t[i]);
        let b1 = singleton(&t[i + 1]);
        let b2 = singleton(&t[i + 3]);
        let c = singleton(&t[i + 4]);
        let mut blocks1: Vec<Vec<usize>> = t[..i].to_vec();
        blocks1.push(vec![a.min(b1), a.max(b1)]);
        blocks1.push(with_elem(&t[i + 2], b2));
        blocks1.push(with_elem(&t[i + 5], c));
        blocks1.extend(t[i + 6..].iter().cloned());
        let c1 = Component { line: FixedLine::new(blocks1, i, i + 1), node_elem: a };
        let mut blocks2: Vec<Vec<usize>> = t[..i - 1].to_vec();
        blocks2.push(with_elem(&t[i - 1], a));
        blocks2.push(with_elem(&t[i + 2], b1));
        blocks2.push(vec![b2.min(c), b2.max(c)]);
        blocks2.push(t[i + 5].clone());
        blocks2.extend(t[i + 6..].iter().cloned());
        let c2 = Component { line: FixedLine::new(blocks2, i + 1, i + 2), node_elem: b2 };
        push_nodal(&mut out, Family::AdjacentDisjoint { i }, tuple, c1, c2)?;
    }

    // chain a -> b -> c through one middle element
    let mut entries = Vec::new();
    head(&mut entries);
    entries.extend([ri - 1, 1, rm - 1, 1, 1, rn - 1]);
    tail(&mut entries);
    for tuple in tuples_for(k, entries)? {
        let t = tuple.blocks();
        let a = singleton(&t[i]);
        let b = singleton(&t[i + 2]);
        let c = singleton(&t[i + 3]);
        let mut blocks1: Vec<Vec<usize>> = t[..i].to_vec();
        blocks1.push(vec![a.min(b), a.max(b)]);
        blocks1.push(t[i + 1].clone());
        blocks1.push(with_elem(&t[i + 4], c));
        blocks1.extend(t[i + 5..].iter().cloned());
        let c1 = Component { line: FixedLine::new(blocks1, i, i + 1), node_elem: a };
        let mut blocks2: Vec<Vec<usize>> = t[..i - 1].to_vec();
        blocks2.push(with_elem(&t[i - 1], a));
        blocks2.push(t[i + 1].clone());
        blocks2.push(vec![b.min(c), b.max(c)]);
        blocks2.push(t[i + 4].clone());
        blocks2.extend(t[i + 5..].iter().cloned());
        let c2 = Component { line: FixedLine::new(blocks2, i + 1, i + 2), node_elem: b };
        push_nodal(&mut out, Family::AdjacentShared { i }, tuple, c1, c2)?;
    }

    // a single line spanning both slots
    for line in enumerate_fixed_lines(shape, i - 1, 1)? {
        let tuple = IndexTuple::new(line.blocks().to_vec(), k)?;
        push_irreducible(&mut out, Family::Line { m: i - 1, n: 1 }, tuple, line, 1)?;
    }

    Ok(out)
}

/// Expected dimension of the moduli space:
/// `dim Fl + sum_s d_s (r_s + r_{s+1}) - 3`. Every fixed point's
/// deformation multiset has exactly this total multiplicity.
pub fn expected_dimension(shape: &FlagShape, degree: &DegreeVector) -> Result<usize> {
    match degree.classify(shape)? {
        DegreePattern::Zero => Err(Error::Domain(
            "expected_dimension applies to nonzero degrees".into(),
        )),
        _ => {
            let parts = shape.parts();
            let anticanonical: usize = degree
                .entries()
                .iter()
                .enumerate()
                .map(|(s, &d)| d as usize * (parts[s] + parts[s + 1]) as usize)
                .sum();
            Ok(shape.dim() + anticanonical - 3)
        }
    }
}

/// The per-family closed multiset formula for the deformation space,
/// written directly in terms of the enumerated tuple. Independent of the
/// engine route; the two must agree exactly.
pub fn def_formula_oracle(desc: &FixedMapDescriptor) -> Result<WeightMultiset> {
    let t = desc.tuple.blocks();
    let pair_sum = |x: usize, y: usize| Weight::basis(x).add(&Weight::basis(y));
    let both_ways = |m: &mut WeightMultiset, x: usize, y: usize| {
        m.push(Weight::difference(x, y), 1);
        m.push(Weight::difference(y, x), 1);
    };
    match desc.family {
        Family::Line { m, n } => {
            // sections of the normal directions along the line, plus the
            // spanned middle blocks pulled across both pair elements
            let mut def = block_rep(t)?;
            let (a, b) = (t[m + 1][0], t[m + 1][1]);
            for middle in &t[m + 2..m + n + 2] {
                for &nu in middle {
                    def.push(Weight::difference(a, nu), 1);
                    def.push(Weight::difference(b, nu), 1);
                }
            }
            Ok(def)
        }
        Family::DoubleCover { i } => {
            let mut def = block_rep(t)?;
            let (a, b) = (t[i][0], t[i][1]);
            let half = pair_sum(a, b).div_int(2);
            for &nu in &t[i - 1] {
                def.push(half.sub(&Weight::basis(nu)), 1);
            }
            for &mu in &t[i + 1] {
                def.push(Weight::basis(mu).sub(&half), 1);
            }
            both_ways(&mut def, a, b);
            Ok(def)
        }
        Family::SameImage { i } => {
            let mut def = block_rep(t)?;
            let a = t[i][0];
            let b = t[i + 1][0];
            def = def.add(&block_rep(&[t[i - 1].clone(), vec![a]])?);
            def = def.add(&block_rep(&[vec![b], t[i + 2].clone()])?);
            def.push(Weight::difference(b, a).scale(Ratio::from_integer(2)), 1);
            Ok(def)
        }
        Family::CommonLeft { i } => {
            let mut def = block_rep(t)?;
            let a = t[i][0];
            let (b1, b2) = (t[i + 1][0], t[i + 1][1]);
            def = def.add(&block_rep(&[t[i - 1].clone(), vec![a]])?);
            def.push(
                pair_sum(b1, b2).sub(&Weight::basis(a).scale(Ratio::from_integer(2))),
                1,
            );
            both_ways(&mut def, b1, b2);
            Ok(def)
        }
        Family::CommonRight { i } => {
            let mut def = block_rep(t)?;
            let (a1, a2) = (t[i][0], t[i][1]);
            let b = t[i + 1][0];
            both_ways(&mut def, a1, a2);
            def = def.add(&block_rep(&[vec![b], t[i + 2].clone()])?);
            def.push(
                Weight::basis(b).scale(Ratio::from_integer(2)).sub(&pair_sum(a1, a2)),
                1,
            );
            Ok(def)
        }
        Family::DisjointPair { i } => {
            let mut def = block_rep(t)?;
            let (a1, a2) = (t[i][0], t[i][1]);
            let b1 = t[i + 1][0];
            let b2 = t[i + 2][0];
            both_ways(&mut def, a1, a2);
            // block_rep already contains b2 - b1 (distinct blocks); the
            // opposite direction enters once
            def.push(Weight::difference(b1, b2), 1);
            def.push(pair_sum(b1, b2).sub(&pair_sum(a1, a2)), 1);
            Ok(def)
        }
        Family::DistantPair { i, j } => {
            // both pairs merged into two-element blocks
            let mut blocks: Vec<Vec<usize>> = t[..i].to_vec();
            let (a, b) = (t[i][0], t[i + 1][0]);
            let (c, d) = (t[j + 2][0], t[j + 3][0]);
            blocks.push(vec![a.min(b), a.max(b)]);
            blocks.extend(t[i + 2..=j + 1].iter().cloned());
            blocks.push(vec![c.min(d), c.max(d)]);
            blocks.extend(t[j + 4..].iter().cloned());
            let mut def = block_rep(&blocks)?;
            let lam1 = Weight::difference(b, a);
            let lam2 = Weight::difference(d, c);
            def.push(lam1.add(&lam2), 1);
            def.push(lam1, 1);
            def.push(lam2, 1);
            Ok(def)
        }
        Family::AdjacentDisjoint { i } => {
            let mut def = block_rep(t)?;
            let a = t[i][0];
            let b1 = t[i + 1][0];
            let b2 = t[i + 3][0];
            let c = t[i + 4][0];
            def.push(
                Weight::difference(b1, a).add(&Weight::difference(c, b2)),
                1,
            );
            def.push(Weight::difference(b2, b1), 1);
            Ok(def)
        }
        Family::AdjacentShared { i } => {
            let mut def = block_rep(t)?;
            let a = t[i][0];
            let b = t[i + 2][0];
            def = def.add(&block_rep(&[vec![b], t[i + 1].clone()])?);
            let c = t[i + 3][0];
            def.push(Weight::difference(c, a), 1);
            Ok(def)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Sign;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    fn shape(parts: &[u32]) -> FlagShape {
        FlagShape::new(parts.to_vec()).unwrap()
    }

    fn a(i: usize) -> Weight {
        Weight::basis(i)
    }

    fn d(i: usize, j: usize) -> Weight {
        Weight::difference(i, j)
    }

    #[test]
    fn classify_patterns() {
        let fs = shape(&[1, 1, 1, 1]);
        let c = |v: &[u32]| DegreeVector::new(v.to_vec()).classify(&fs);
        assert_eq!(c(&[0, 0, 0]).unwrap(), DegreePattern::Zero);
        assert_eq!(c(&[0, 1, 0]).unwrap(), DegreePattern::Single { i: 2 });
        assert_eq!(c(&[1, 0, 1]).unwrap(), DegreePattern::TwoApart { i: 1, j: 3 });
        assert_eq!(c(&[0, 2, 0]).unwrap(), DegreePattern::Double { i: 2 });
        assert_eq!(c(&[0, 1, 1]).unwrap(), DegreePattern::Adjacent { i: 2 });
        assert!(matches!(c(&[1, 1, 1]), Err(Error::UnsupportedDegree { .. })));
        assert!(matches!(c(&[3, 0, 0]), Err(Error::UnsupportedDegree { .. })));
        assert!(c(&[1, 0]).is_err());
    }

    #[test]
    fn line_endpoints_and_counts() {
        // three fixed lines on the projective plane as a (1,2) shape
        let lines = enumerate_fixed_lines(&shape(&[1, 2]), 0, 0).unwrap();
        assert_eq!(lines.len(), 3);
        let line = &lines[0]; // pair {1,2}, remaining {3}
        assert_eq!(line.pair(), (1, 2));
        assert_eq!(
            line.endpoint(1),
            IndexTuple::new(vec![vec![1], vec![2, 3]], 3).unwrap()
        );
        assert_eq!(
            line.endpoint(2),
            IndexTuple::new(vec![vec![2], vec![1, 3]], 3).unwrap()
        );
        assert_eq!(line.lambda(1), d(2, 1));
        assert_eq!(line.lambda(2), d(1, 2));
        assert_eq!(enumerate_fixed_lines(&shape(&[1, 1]), 0, 0).unwrap().len(), 1);
        assert_eq!(enumerate_fixed_lines(&shape(&[1, 1, 1]), 0, 1).unwrap().len(), 3);
    }

    #[test]
    fn sections_on_the_projective_line() {
        let line = enumerate_fixed_lines(&shape(&[1, 1]), 0, 0).unwrap()[0].clone();
        let h1 = h0_line_weights(&line, 1).unwrap();
        let lam = d(2, 1);
        let mut expected = WeightMultiset::new();
        expected.push(lam.clone(), 1);
        expected.push(Weight::zero(), 1);
        expected.push(lam.neg(), 1);
        assert_eq!(h1, expected);

        let h2 = h0_line_weights(&line, 2).unwrap();
        assert_eq!(h2.dimension().unwrap(), 5);
        for m in [-2i64, -1, 0, 1, 2] {
            let w = lam.scale(Ratio::new(m, 2));
            assert_eq!(h2.multiplicity(&w), 1, "m={m}");
        }

        assert_eq!(def_irreducible(&line, 1).unwrap(), WeightMultiset::new());
        let def2 = def_irreducible(&line, 2).unwrap();
        assert_eq!(def2.dimension().unwrap(), 2);
        assert_eq!(def2.multiplicity(&lam), 1);
        assert_eq!(def2.multiplicity(&lam.neg()), 1);
    }

    #[test]
    fn double_cover_with_cancelling_pair() {
        // complete flags on k=3, double cover in the first slot: the engine
        // needs the subtraction rule to cancel the half-weight pair
        let fs = shape(&[1, 1, 1]);
        let lines = enumerate_fixed_lines(&fs, 0, 0).unwrap();
        let line = lines
            .iter()
            .find(|l| l.pair() == (1, 2))
            .unwrap();
        let def = def_irreducible(line, 2).unwrap();
        let lam = d(2, 1);
        let mut expected = WeightMultiset::new();
        expected.push(d(3, 1), 1);
        expected.push(d(3, 2), 1);
        expected.push(lam.clone(), 1);
        expected.push(lam.neg(), 1);
        assert_eq!(def, expected);
    }

    #[test]
    fn grassmannian_double_cover_value() {
        // Gr(1,3) as shape (1,2), pair {1,2}, B = {3}
        let fs = shape(&[1, 2]);
        let lines = enumerate_fixed_lines(&fs, 0, 0).unwrap();
        let line = lines.iter().find(|l| l.pair() == (1, 2)).unwrap();
        let def = def_irreducible(line, 2).unwrap();
        assert_eq!(def.dimension().unwrap(), 5);
        let half = a(1).add(&a(2)).div_int(2);
        assert_eq!(def.multiplicity(&a(3).sub(&half)), 1);
        assert_eq!(def.multiplicity(&d(3, 1)), 1);
        assert_eq!(def.multiplicity(&d(3, 2)), 1);
        assert_eq!(def.multiplicity(&d(2, 1)), 1);
        assert_eq!(def.multiplicity(&d(1, 2)), 1);
    }

    #[test]
    fn nodal_chain_on_complete_flags() {
        // shape (1,1,1), degree (1,1), chain 1 -> 2 -> 3
        let fs = shape(&[1, 1, 1]);
        let points = enumerate_fixed_maps(&fs, &DegreeVector::new(vec![1, 1])).unwrap();
        assert_eq!(points.len(), 9);
        let chain = points
            .iter()
            .find(|p| {
                p.descriptor.family == Family::AdjacentShared { i: 1 }
                    && p.descriptor.tuple.blocks()[1] == vec![1]
                    && p.descriptor.tuple.blocks()[3] == vec![2]
            })
            .unwrap();
        let mut expected = WeightMultiset::new();
        expected.push(d(2, 1), 1);
        expected.push(d(3, 1), 2);
        expected.push(d(3, 2), 1);
        assert_eq!(chain.def, expected);
        assert_eq!(chain.def.positive_count().unwrap(), 4);
    }

    #[test]
    fn engine_matches_oracle_on_small_sweeps() {
        let cases: Vec<(Vec<u32>, Vec<u32>)> = vec![
            (vec![1, 1], vec![1]),
            (vec![1, 1], vec![2]),
            (vec![1, 2], vec![2]),
            (vec![2, 1], vec![2]),
            (vec![2, 2], vec![2]),
            (vec![1, 1, 1], vec![1, 1]),
            (vec![1, 2, 1], vec![1, 1]),
            (vec![1, 1, 1], vec![0, 2]),
            (vec![1, 1, 1, 1], vec![1, 0, 1]),
            (vec![1, 2, 1, 1], vec![1, 0, 1]),
        ];
        for (parts, deg) in cases {
            let fs = shape(&parts);
            let degree = DegreeVector::new(deg.clone());
            let dim = expected_dimension(&fs, &degree).unwrap();
            let points = enumerate_fixed_maps(&fs, &degree).unwrap();
            assert!(!points.is_empty(), "{parts:?} {deg:?}");
            for p in points {
                let oracle = def_formula_oracle(&p.descriptor).unwrap();
                assert_eq!(
                    p.def, oracle,
                    "engine vs oracle at {:?} {:?} tuple {:?}",
                    parts, deg, p.descriptor.tuple
                );
                assert_eq!(p.def.dimension().unwrap(), dim, "{parts:?} {deg:?}");
                assert_eq!(p.def.zero_multiplicity(), 0, "isolated fixed point");
            }
        }
    }

    #[test]
    fn fixed_point_counts() {
        let count = |parts: &[u32], deg: &[u32]| {
            enumerate_fixed_maps(&shape(parts), &DegreeVector::new(deg.to_vec()))
                .unwrap()
                .len()
        };
        assert_eq!(count(&[1, 1], &[1]), 1);
        assert_eq!(count(&[1, 2], &[1]), 3);
        assert_eq!(count(&[1, 1], &[2]), 3);
        assert_eq!(count(&[1, 1, 1, 1], &[1, 0, 1]), 24);
        assert_eq!(count(&[2, 1], &[2]), 12);
        assert_eq!(count(&[2, 2], &[2]), 72);
    }

    #[test]
    fn lefschetz_character_identity_on_covers() {
        // Independent oracle for the section engine: on the degree-e cover
        // the two ramification points have tangent characters y^(±L) with
        // L = val(lambda/e), and the fixed-point trace formula gives
        //   chi * (1 - y^L)(1 - y^-L) = tr_a (1 - y^L) + tr_b (1 - y^-L),
        // where chi sums y^(val w) over the (virtual) section multiset and
        // tr_p sums over the tangent weights at the image endpoint.
        // Valuations use alpha_i = base^i in doubled units so lambda/2
        // stays integral.
        type Laurent = BTreeMap<i64, BigInt>;
        fn add_term(p: &mut Laurent, e: i64, c: i64) {
            let entry = p.entry(e).or_default();
            *entry += c;
            if entry.is_zero() {
                p.remove(&e);
            }
        }
        fn mul(p: &Laurent, q: &Laurent) -> Laurent {
            let mut out = Laurent::new();
            for (se, sc) in p {
                for (te, tc) in q {
                    let entry = out.entry(se + te).or_default();
                    *entry += sc * tc;
                    if entry.is_zero() {
                        out.remove(&(se + te));
                    }
                }
            }
            out
        }
        fn val2(w: &Weight, base: i64) -> i64 {
            let mut v = Ratio::<i64>::new(0, 1);
            for (&i, c) in w.coeffs() {
                v += c * Ratio::from_integer(base.pow(i as u32));
            }
            let doubled = v * Ratio::from_integer(2);
            assert!(doubled.is_integer());
            doubled.to_integer()
        }
        for (parts, m, n) in [
            (vec![1u32, 1], 0usize, 0usize),
            (vec![1, 2], 0, 0),
            (vec![2, 1, 1], 1, 0),
            (vec![1, 1, 1], 0, 1),
            (vec![1, 2, 1], 0, 1),
        ] {
            let fs = shape(&parts);
            for line in enumerate_fixed_lines(&fs, m, n).unwrap() {
                let (x, y) = line.pair();
                for e in [1u32, 2] {
                    let sections_ms = h0_line_weights(&line, e).unwrap();
                    let lam_e = line.lambda(x).div_int(e as i64);
                    for base in [3i64, 4, 5] {
                        let big_l = val2(&lam_e, base);
                        let mut lhs_factor = Laurent::new();
                        add_term(&mut lhs_factor, 0, 2);
                        add_term(&mut lhs_factor, big_l, -1);
                        add_term(&mut lhs_factor, -big_l, -1);
                        let mut sections = Laurent::new();
                        for (w, mult) in sections_ms.iter() {
                            add_term(&mut sections, val2(w, base), mult);
                        }
                        let lhs = mul(&sections, &lhs_factor);
                        let mut rhs = Laurent::new();
                        for (point, sign_l) in [(line.endpoint(x), 1i64), (line.endpoint(y), -1)]
                        {
                            let mut tr = Laurent::new();
                            for (w, mult) in tangent_weights(&point).iter() {
                                add_term(&mut tr, val2(w, base), mult);
                            }
                            let mut factor = Laurent::new();
                            add_term(&mut factor, 0, 1);
                            add_term(&mut factor, sign_l * big_l, -1);
                            for (exp, c) in mul(&tr, &factor) {
                                add_term(&mut rhs, exp, c.try_into().unwrap());
                            }
                        }
                        assert_eq!(
                            lhs,
                            rhs,
                            "parts {parts:?} pair {:?} e {e} base {base}",
                            line.pair()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn distant_pair_positive_counts() {
        // shape (1,1,1,1), degree (1,0,1): 24 points, distribution
        // (1+t+t^2+t^3) * [4 choose 2]
        let fs = shape(&[1, 1, 1, 1]);
        let points = enumerate_fixed_maps(&fs, &DegreeVector::new(vec![1, 0, 1])).unwrap();
        let mut hist = BTreeMap::<usize, usize>::new();
        for p in &points {
            *hist.entry(p.def.positive_count().unwrap()).or_default() += 1;
        }
        let expected: BTreeMap<usize, usize> =
            [(0, 1), (1, 2), (2, 4), (3, 5), (4, 5), (5, 4), (6, 2), (7, 1)].into();
        assert_eq!(hist, expected);
    }

    #[test]
    fn def_weights_have_no_zero_and_signs_agree() {
        for (parts, deg) in [
            (vec![1u32, 1, 1], vec![1u32, 1]),
            (vec![2, 2], vec![2]),
            (vec![1, 2, 1], vec![1, 0]),
        ] {
            let fs = shape(&parts);
            for p in enumerate_fixed_maps(&fs, &DegreeVector::new(deg.clone())).unwrap() {
                for (w, _) in p.def.iter() {
                    let s = w.sign();
                    assert_ne!(s, Sign::Zero);
                    for base in [3, 4, 5] {
                        assert_eq!(w.numeric_sign(base), s);
                    }
                }
            }
        }
    }
}
