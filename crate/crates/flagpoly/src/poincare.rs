//! Poincare polynomials of flag manifolds and of their genus-zero
//! stable-map moduli, by two independent routes.
//!
//! The enumeration route counts positive deformation weights at every
//! torus-fixed point. The closed-form route multiplies the flag manifold
//! polynomial by a degree-dependent rational factor and divides exactly.
//! `compare` runs both and reports agreement; the adjacent pattern on
//! complete flag manifolds is the one place the two routes are expected to
//! differ, and the report carries the exact difference.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fixedmaps::{
    enumerate_fixed_maps, expected_dimension, DegreePattern, DegreeVector,
};
use crate::flags::{enumerate_index_tuples, n_statistic, FlagShape};
use crate::poly::{exact_divide, q_multinomial, q_number, IntPolynomial};
use crate::{Error, Result};

fn poly_from_hist(hist: &BTreeMap<usize, i64>) -> IntPolynomial {
    let top = match hist.keys().next_back() {
        Some(&e) => e,
        None => return IntPolynomial::zero(),
    };
    let mut coeffs = vec![BigInt::zero(); top + 1];
    for (&e, &c) in hist {
        coeffs[e] = BigInt::from(c);
    }
    IntPolynomial::from_coeffs(coeffs)
}

/// Generating polynomials of positive and negative weight counts over all
/// fixed points. For Poincare duality the two must be reverses of each
/// other.
pub fn poincare_enumeration_signed(
    shape: &FlagShape,
    degree: &DegreeVector,
) -> Result<(IntPolynomial, IntPolynomial)> {
    let mut pos = BTreeMap::<usize, i64>::new();
    let mut neg = BTreeMap::<usize, i64>::new();
    match degree.classify(shape)? {
        DegreePattern::Zero => {
            let profile: Vec<usize> = shape.parts().iter().map(|&r| r as usize).collect();
            let dim = shape.dim();
            for tuple in enumerate_index_tuples(shape.k() as usize, &profile)? {
                let n = n_statistic(&tuple);
                *pos.entry(n).or_default() += 1;
                *neg.entry(dim - n).or_default() += 1;
            }
        }
        _ => {
            let dim = expected_dimension(shape, degree)?;
            for point in enumerate_fixed_maps(shape, degree)? {
                let total = point.def.dimension()?;
                if total != dim {
                    return Err(Error::Inconsistency(format!(
                        "fixed point of {:?} degree {:?} has {} deformation weights, expected {}",
                        shape.parts(),
                        degree.entries(),
                        total,
                        dim
                    )));
                }
                if point.def.zero_multiplicity() != 0 {
                    return Err(Error::Inconsistency(
                        "fixed point with a zero deformation weight is not isolated".into(),
                    ));
                }
                *pos.entry(point.def.positive_count()?).or_default() += 1;
                *neg.entry(point.def.negative_count()?).or_default() += 1;
            }
        }
    }
    Ok((poly_from_hist(&pos), poly_from_hist(&neg)))
}

/// Poincare polynomial in `t` (Betti variable: coefficient of `t^m` is
/// `b_{2m}`) computed by fixed-point enumeration.
pub fn poincare_enumeration(shape: &FlagShape, degree: &DegreeVector) -> Result<IntPolynomial> {
    Ok(poincare_enumeration_signed(shape, degree)?.0)
}

/// Poincare polynomial by closed formula, when one applies:
/// every pattern except the adjacent one on a non-complete shape.
pub fn poincare_closed_form(
    shape: &FlagShape,
    degree: &DegreeVector,
) -> Result<Option<IntPolynomial>> {
    let parts = shape.parts();
    let p_flag = crate::flags::flag_poincare(shape);
    let tpow = |e: usize| IntPolynomial::monomial(BigInt::one(), e);
    let one = IntPolynomial::one();
    match degree.classify(shape)? {
        DegreePattern::Zero => Ok(Some(p_flag)),
        DegreePattern::Single { i } => {
            let num = q_number(parts[i - 1]).mul(&q_number(parts[i])).mul(&p_flag);
            Ok(Some(exact_divide(&num, &q_number(2))?))
        }
        DegreePattern::TwoApart { i, j } => {
            let num = one
                .add(&tpow(2))
                .mul(&q_number(parts[i - 1]))
                .mul(&q_number(parts[i]))
                .mul(&q_number(parts[j - 1]))
                .mul(&q_number(parts[j]))
                .mul(&p_flag);
            Ok(Some(exact_divide(&num, &q_number(2))?))
        }
        DegreePattern::Double { i } => {
            let ri = parts[i - 1] as usize;
            let rn = parts[i] as usize;
            let inner = one
                .add(&tpow(ri + rn))
                .mul(&one.add(&tpow(3)))
                .sub(&tpow(1).mul(&one.add(&tpow(1))).mul(&tpow(ri).add(&tpow(rn))));
            let num = one
                .sub(&tpow(ri))
                .mul(&one.sub(&tpow(rn)))
                .mul(&inner)
                .mul(&p_flag);
            let a = one.sub(&tpow(1));
            let b = one.sub(&tpow(2));
            let den = a.mul(&a).mul(&b).mul(&b);
            Ok(Some(exact_divide(&num, &den)?))
        }
        DegreePattern::Adjacent { .. } => {
            if !shape.is_complete() {
                return Ok(None);
            }
            let num = IntPolynomial::from_ints(&[1, 2, 3, 3, 1]).mul(&p_flag);
            let den = q_number(2).mul(&q_number(3));
            Ok(Some(exact_divide(&num, &den)?))
        }
    }
}

/// Outcome of running both routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    /// Both routes produced the same polynomial.
    Match,
    /// Both produced a polynomial but they differ; carries
    /// `enumeration - closed_form`.
    Mismatch { difference: IntPolynomial },
    /// No closed form applies to this shape and degree.
    NoClosedForm,
}

/// Everything both routes know about one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareReport {
    pub shape: FlagShape,
    pub degree: DegreeVector,
    pub pattern: DegreePattern,
    pub enumeration: IntPolynomial,
    pub closed_form: Option<IntPolynomial>,
    pub agreement: Agreement,
    /// Complex dimension; `None` for the zero degree (the flag manifold
    /// itself, whose dimension is `shape.dim()`).
    pub moduli_dimension: Option<usize>,
}

impl PoincareReport {
    /// Betti numbers `b_0, b_1, ..., b_{2 dim}` of the enumeration route;
    /// odd entries vanish.
    pub fn betti(&self) -> Vec<BigInt> {
        betti_numbers(&self.enumeration)
    }

    /// Euler characteristic: the number of torus-fixed points.
    pub fn euler(&self) -> BigInt {
        self.enumeration.eval_at_one()
    }

    pub fn palindromic(&self) -> bool {
        self.enumeration.is_palindromic()
    }
}

/// Betti numbers read off a polynomial in the Betti variable `t`:
/// `[c_0, 0, c_1, 0, ..., c_d]`.
pub fn betti_numbers(p: &IntPolynomial) -> Vec<BigInt> {
    let d = match p.degree() {
        Some(d) => d,
        None => return Vec::new(),
    };
    let mut out = Vec::with_capacity(2 * d + 1);
    for m in 0..=d {
        out.push(p.coeff(m));
        if m < d {
            out.push(BigInt::zero());
        }
    }
    out
}

/// Runs both routes and packages the comparison.
pub fn compare(shape: &FlagShape, degree: &DegreeVector) -> Result<PoincareReport> {
    let pattern = degree.classify(shape)?;
    let enumeration = poincare_enumeration(shape, degree)?;
    let closed_form = poincare_closed_form(shape, degree)?;
    let agreement = match &closed_form {
        None => Agreement::NoClosedForm,
        Some(cf) if *cf == enumeration => Agreement::Match,
        Some(cf) => Agreement::Mismatch { difference: enumeration.sub(cf) },
    };
    let moduli_dimension = match pattern {
        DegreePattern::Zero => None,
        _ => Some(expected_dimension(shape, degree)?),
    };
    Ok(PoincareReport {
        shape: shape.clone(),
        degree: degree.clone(),
        pattern,
        enumeration,
        closed_form,
        agreement,
        moduli_dimension,
    })
}

/// The double-degree moduli space fibers over the partial flag manifold
/// that forgets the step between slots `i` and `i+1`, with fiber the
/// moduli of the two-step Grassmannian factor. Returns the enumeration
/// polynomial of the full space and the product polynomial of the
/// reduction; the two must be equal.
pub fn grassmannian_reduction(
    shape: &FlagShape,
    i: usize,
) -> Result<(IntPolynomial, IntPolynomial)> {
    let parts = shape.parts();
    if i < 1 || i > shape.l() {
        return Err(Error::Domain(format!(
            "slot {i} out of range for shape {parts:?}"
        )));
    }
    let mut degree = vec![0u32; shape.l()];
    degree[i - 1] = 2;
    let full = poincare_enumeration(shape, &DegreeVector::new(degree))?;

    let mut merged = parts.to_vec();
    merged[i - 1] += merged[i];
    merged.remove(i);
    let base = q_multinomial(shape.k(), &merged)?;
    let sub = FlagShape::new(vec![parts[i - 1], parts[i]])?;
    let fiber = poincare_enumeration(&sub, &DegreeVector::new(vec![2]))?;
    Ok((full, base.mul(&fiber)))
}
