//! Torus weights and signed weight multisets.
//!
//! A weight is a rational linear combination of basis characters
//! `alpha_1, ..., alpha_k`. Genericity convention: `alpha_i` grows much
//! faster than `alpha_j` for `i > j`, so the sign of a nonzero weight is
//! the sign of its coefficient on the largest index present. The numeric
//! oracle evaluates `alpha_i = base^i` exactly and must agree for
//! `base in {3, 4, 5}` on every weight this crate constructs; `sign`
//! cross-checks that in debug builds.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::flags::IndexTuple;
use crate::{Error, Result};

type Coeff = Ratio<i64>;

/// Sign of a weight under the genericity convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A torus weight in canonical form: a sparse map from basis index (1-based)
/// to a nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    coeffs: BTreeMap<usize, Coeff>,
}

impl Weight {
    pub fn zero() -> Self {
        Weight::default()
    }

    /// The basis character `alpha_i`.
    pub fn basis(i: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, Coeff::from_integer(1));
        Weight { coeffs }
    }

    /// `alpha_mu - alpha_nu`.
    pub fn difference(mu: usize, nu: usize) -> Self {
        Weight::basis(mu).sub(&Weight::basis(nu))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Coeff> {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&i, c) in &other.coeffs {
            let entry = coeffs.entry(i).or_insert_with(Coeff::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&i);
            }
        }
        Weight { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Weight {
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }

    pub fn scale(&self, factor: Coeff) -> Self {
        if factor.is_zero() {
            return Weight::zero();
        }
        Weight {
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * factor)).collect(),
        }
    }

    /// Divides by a positive integer (used for degree-`e` cover weights).
    pub fn div_int(&self, e: i64) -> Self {
        self.scale(Ratio::new(1, e))
    }

    /// If `self = c * other` for a scalar `c`, returns `c`. Requires
    /// `other` nonzero; returns `None` when the weights are not parallel.
    pub fn ratio_to(&self, other: &Self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        let (&i, c_other) = other.coeffs.iter().next_back()?;
        let c_self = self.coeffs.get(&i)?;
        let ratio = c_self / c_other;
        if self == &other.scale(ratio) {
            Some(ratio)
        } else {
            None
        }
    }

    /// Sign by dominance of the largest basis index; cross-checked against
    /// the numeric oracle at bases 3, 4, 5 in debug builds.
    pub fn sign(&self) -> Sign {
        let sign = match self.coeffs.iter().next_back() {
            None => Sign::Zero,
            Some((_, c)) if c.is_positive() => Sign::Positive,
            Some(_) => Sign::Negative,
        };
        debug_assert!(
            [3, 4, 5].iter().all(|&b| self.numeric_sign(b) == sign),
            "dominance sign disagrees with numeric oracle for {self}"
        );
        sign
    }

    /// Sign of the exact rational value of the weight at `alpha_i = base^i`.
    pub fn numeric_sign(&self, base: i64) -> Sign {
        let mut value = Ratio::<i128>::zero();
        for (&i, c) in &self.coeffs {
            let pow = (base as i128).pow(i as u32);
            value += Ratio::new(*c.numer() as i128 * pow, *c.denom() as i128);
        }
        if value.is_zero() {
            Sign::Zero
        } else if value.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in &self.coeffs {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if mag != Coeff::from_integer(1) {
                write!(f, "{mag}*")?;
            }
            write!(f, "a{i}")?;
        }
        Ok(())
    }
}

/// A formal integer combination of weights: multiplicities may be negative
/// while a computation is in flight, but any multiset standing for an
/// actual representation must end up effective (all multiplicities >= 0).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightMultiset {
    entries: BTreeMap<Weight, i64>,
}

impl WeightMultiset {
    pub fn new() -> Self {
        WeightMultiset::default()
    }

    pub fn from_weights<I: IntoIterator<Item = Weight>>(weights: I) -> Self {
        let mut m = WeightMultiset::new();
        for w in weights {
            m.push(w, 1);
        }
        m
    }

    /// Adds `mult` copies of `w` (negative `mult` subtracts).
    pub fn push(&mut self, w: Weight, mult: i64) {
        use std::collections::btree_map::Entry;
        if mult == 0 {
            return;
        }
        match self.entries.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += mult;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(mult);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &m) in &other.entries {
            out.push(w.clone(), m);
        }
        out
    }

    pub fn subtract(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &m) in &other.entries {
            out.push(w.clone(), -m);
        }
        out
    }

    /// Entries in canonical (weight-sorted) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn multiplicity(&self, w: &Weight) -> i64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|&m| m >= 0)
    }

    fn first_negative(&self) -> Option<(&Weight, i64)> {
        self.entries.iter().find(|(_, &m)| m < 0).map(|(w, &m)| (w, m))
    }

    /// Errors with the offending weight when the multiset is not
    /// effective; `what` names the computation for the message.
    pub fn ensure_effective(&self, what: &str) -> Result<()> {
        if let Some((w, m)) = self.first_negative() {
            return Err(Error::NonEffective {
                weight: format!("{w} (in {what})"),
                multiplicity: m,
            });
        }
        Ok(())
    }

    /// Total multiplicity. Errors when the multiset is not effective.
    pub fn dimension(&self) -> Result<usize> {
        self.ensure_effective("dimension")?;
        Ok(self.entries.values().map(|&m| m as usize).sum())
    }

    /// Number of weights (with multiplicity) of positive sign.
    pub fn positive_count(&self) -> Result<usize> {
        self.ensure_effective("positive_count")?;
        Ok(self.signed_count(Sign::Positive))
    }

    /// Number of weights (with multiplicity) of negative sign.
    pub fn negative_count(&self) -> Result<usize> {
        self.ensure_effective("negative_count")?;
        Ok(self.signed_count(Sign::Negative))
    }

    fn signed_count(&self, sign: Sign) -> usize {
        self.entries
            .iter()
            .filter(|(w, _)| w.sign() == sign)
            .map(|(_, &m)| m as usize)
            .sum()
    }

    /// Multiplicity of the zero weight.
    pub fn zero_multiplicity(&self) -> i64 {
        self.multiplicity(&Weight::zero())
    }
}

impl fmt::Display for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(w, m)| if *m == 1 { format!("{w}") } else { format!("{m}*({w})") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The weights `{alpha_mu - alpha_nu}` where `nu` runs over block `s` and
/// `mu` over everything outside blocks `0..=s`, for each `s` up to the
/// second-to-last block. Blocks must be pairwise disjoint; the universe is
/// their union.
pub fn block_rep(blocks: &[Vec<usize>]) -> Result<WeightMultiset> {
    let mut universe: Vec<usize> = blocks.iter().flatten().copied().collect();
    let len = universe.len();
    universe.sort_unstable();
    universe.dedup();
    if universe.len() != len {
        return Err(Error::Domain(format!(
            "block_rep: blocks {blocks:?} are not pairwise disjoint"
        )));
    }
    let mut m = WeightMultiset::new();
    let mut outside = universe;
    for block in blocks.iter().take(blocks.len().saturating_sub(1)) {
        outside.retain(|x| !block.contains(x));
        for &nu in block {
            for &mu in &outside {
                m.push(Weight::difference(mu, nu), 1);
            }
        }
    }
    Ok(m)
}

/// Tangent weights of the flag manifold at a fixed point.
pub fn tangent_weights(tuple: &IndexTuple) -> WeightMultiset {
    block_rep(tuple.blocks()).expect("tuple blocks are disjoint")
}
