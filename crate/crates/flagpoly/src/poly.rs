//! Dense polynomials in one variable `t` with arbitrary-precision integer
//! coefficients, plus the q-combinatorics built on them: q-integers,
//! q-factorials, Gaussian binomials, q-multinomials, exact division, and an
//! executable suite of the classical Gaussian-binomial identities.
//!
//! Everything downstream works in the variable `t`; interfaces that present
//! results in `q` double the exponents (`t = q^2`).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A polynomial in `t` with `BigInt` coefficients, stored densely by
/// exponent. Invariant: no trailing zero coefficient (the zero polynomial
/// has an empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    /// A constant polynomial.
    pub fn constant(c: BigInt) -> Self {
        IntPolynomial { coeffs: vec![c] }.normalized()
    }

    /// The monomial `c * t^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        IntPolynomial { coeffs }
    }

    /// Builds from a dense coefficient list, index = exponent.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial { coeffs }.normalized()
    }

    /// Convenience constructor from small integers, index = exponent.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        IntPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^e` (zero beyond the degree).
    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Dense coefficient slice, lowest exponent first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPolynomial { coeffs }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial { coeffs }.normalized()
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// Sum of coefficients, i.e. the value at `t = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `t^deg * p(1/t)`: the coefficient list reversed. Zero maps to zero.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPolynomial { coeffs }.normalized()
    }

    /// True when the coefficient list is a palindrome.
    pub fn is_palindromic(&self) -> bool {
        *self == self.reverse()
    }

    /// Renders with the given variable name, lowest exponent first, with an
    /// exponent multiplier (2 presents a polynomial in `t = q^2` in `q`).
    pub fn render(&self, var: &str, exponent_scale: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let scaled = e * exponent_scale;
            if scaled == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                out.push_str(var);
                if scaled > 1 {
                    out.push_str(&format!("^{scaled}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t", 1))
    }
}

/// Exact quotient `num / den` in integer polynomials. Fails with the
/// (rational) remainder when the division is not exact.
pub fn exact_divide(num: &IntPolynomial, den: &IntPolynomial) -> Result<IntPolynomial> {
    if den.is_zero() {
        return Err(Error::Domain("division by the zero polynomial".into()));
    }
    // Long division over the rationals; exactness means the remainder
    // vanishes and every quotient coefficient is an integer.
    let mut rem: Vec<BigRational> = num
        .coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let dd = den.coeffs.len() - 1;
    let lead = BigRational::from_integer(den.coeffs[dd].clone());
    let mut quot: Vec<BigRational> = Vec::new();
    while rem.len() > dd {
        let shift = rem.len() - 1 - dd;
        let c = rem.last().unwrap() / &lead;
        if !c.is_zero() {
            for (i, dc) in den.coeffs.iter().enumerate() {
                let sub = &c * BigRational::from_integer(dc.clone());
                rem[shift + i] -= sub;
            }
        }
        debug_assert!(rem.last().unwrap().is_zero());
        rem.pop();
        quot.push(c);
    }
    while rem.last().is_some_and(Zero::is_zero) {
        rem.pop();
    }
    let inexact_quot = quot.iter().any(|c| !c.is_integer());
    if !rem.is_empty() || inexact_quot {
        let remainder = render_rational_poly(&rem, num, den, inexact_quot);
        return Err(Error::InexactDivision { remainder });
    }
    quot.reverse();
    Ok(IntPolynomial::from_coeffs(
        quot.into_iter().map(|c| c.to_integer()).collect(),
    ))
}

fn render_rational_poly(
    rem: &[BigRational],
    num: &IntPolynomial,
    den: &IntPolynomial,
    inexact_quot: bool,
) -> String {
    if rem.is_empty() && inexact_quot {
        return format!("({num}) mod ({den}) has a non-integer quotient");
    }
    let terms: Vec<String> = rem
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| if e == 0 { format!("{c}") } else { format!("({c})t^{e}") })
        .collect();
    terms.join(" + ")
}

/// The q-integer `[n] = 1 + t + ... + t^(n-1)`; `[0] = 0`.
pub fn q_number(n: u32) -> IntPolynomial {
    IntPolynomial::from_coeffs(vec![BigInt::one(); n as usize])
}

/// The q-factorial `[n]! = [1][2]...[n]`.
pub fn q_factorial(n: u32) -> IntPolynomial {
    let mut p = IntPolynomial::one();
    for m in 1..=n {
        p = p.mul(&q_number(m));
    }
    p
}

fn binom_memo() -> &'static Mutex<HashMap<(u32, u32), IntPolynomial>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, u32), IntPolynomial>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Gaussian binomial `[n choose j]`, computed by the Pascal recurrence
/// `[n choose j] = [n-1 choose j] + t^(n-j) [n-1 choose j-1]` with a
/// process-wide memo table. All intermediate coefficients stay nonnegative.
pub fn q_binomial(n: u32, j: u32) -> Result<IntPolynomial> {
    if j > n {
        return Err(Error::Domain(format!(
            "q_binomial({n}, {j}): lower index exceeds upper index"
        )));
    }
    Ok(q_binomial_unchecked(n, j))
}

fn q_binomial_unchecked(n: u32, j: u32) -> IntPolynomial {
    if j == 0 || j == n {
        return IntPolynomial::one();
    }
    if let Some(p) = binom_memo().lock().unwrap().get(&(n, j)) {
        return p.clone();
    }
    let a = q_binomial_unchecked(n - 1, j);
    let b = q_binomial_unchecked(n - 1, j - 1).shift((n - j) as usize);
    let p = a.add(&b);
    binom_memo().lock().unwrap().insert((n, j), p.clone());
    p
}

/// `[n choose j]` extended by zero outside `0 <= j <= n`; used by identity
/// right-hand sides where an index may underflow.
fn q_binomial_or_zero(n: i64, j: i64) -> IntPolynomial {
    if j < 0 || n < 0 || j > n {
        IntPolynomial::zero()
    } else {
        q_binomial_unchecked(n as u32, j as u32)
    }
}

/// The q-multinomial `[k choose parts]` for nonnegative parts summing to
/// `k`; parts equal to zero contribute a factor 1. Computed as a telescoping
/// product of Gaussian binomials, so no division is performed.
pub fn q_multinomial(k: u32, parts: &[u32]) -> Result<IntPolynomial> {
    let sum: u32 = parts.iter().sum();
    if sum != k {
        return Err(Error::Domain(format!(
            "q_multinomial: parts {parts:?} sum to {sum}, expected {k}"
        )));
    }
    let mut p = IntPolynomial::one();
    let mut rest = k;
    for &r in parts {
        p = p.mul(&q_binomial_unchecked(rest, r));
        rest -= r;
    }
    Ok(p)
}

/// One identity-family check: the name, how many parameter instances were
/// checked, and the first failing instance when there is one.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub instances: usize,
    pub counterexample: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Result of [`verify_identity_suite`].
#[derive(Debug, Clone)]
pub struct IdentitySuiteReport {
    pub n_max: u32,
    pub checks: Vec<IdentityCheck>,
}

impl IdentitySuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

/// Checks, by exact expansion for every parameter choice with all binomial
/// indices at most `n_max`:
///
/// * symmetry `[n choose j] = [n choose n-j]`,
/// * both Pascal recurrences,
/// * the geometric-sum identity
///   `sum_{j=0..a} t^j [d+j choose j] = [d+a+1 choose a]`,
/// * identity I:
///   `sum_{i+j=u} t^(i(j'+1)) [i+i' choose i][j+j' choose j] = [i'+j'+u+1 choose u]`,
/// * identity II:
///   `sum_{i+j=u} t^(i(j'+2)) [i+i' choose i][j+j' choose j]
///    = [i'+j'+u+2 choose u] - t^(j'+1) [i'+j'+u+1 choose u-1]`.
pub fn verify_identity_suite(n_max: u32) -> IdentitySuiteReport {
    let mut checks = Vec::new();
    let n = n_max as i64;

    let mut symmetry = IdentityCheck { name: "symmetry", instances: 0, counterexample: None };
    for nn in 0..=n {
        for j in 0..=nn {
            symmetry.instances += 1;
            let lhs = q_binomial_or_zero(nn, j);
            let rhs = q_binomial_or_zero(nn, nn - j);
            if lhs != rhs && symmetry.counterexample.is_none() {
                symmetry.counterexample = Some(format!("n={nn} j={j}"));
            }
        }
    }
    checks.push(symmetry);

    let mut pascal_a =
        IdentityCheck { name: "pascal_high", instances: 0, counterexample: None };
    let mut pascal_b = IdentityCheck { name: "pascal_low", instances: 0, counterexample: None };
    for nn in 1..=n {
        for j in 0..=nn {
            pascal_a.instances += 1;
            pascal_b.instances += 1;
            let lhs = q_binomial_or_zero(nn, j);
            let a = q_binomial_or_zero(nn - 1, j)
                .add(&q_binomial_or_zero(nn - 1, j - 1).shift((nn - j) as usize));
            if lhs != a && pascal_a.counterexample.is_none() {
                pascal_a.counterexample = Some(format!("n={nn} j={j}"));
            }
            let b = q_binomial_or_zero(nn - 1, j)
                .shift(j as usize)
                .add(&q_binomial_or_zero(nn - 1, j - 1));
            if lhs != b && pascal_b.counterexample.is_none() {
                pascal_b.counterexample = Some(format!("n={nn} j={j}"));
            }
        }
    }
    checks.push(pascal_a);
    checks.push(pascal_b);

    let mut geo = IdentityCheck { name: "geometric_sum", instances: 0, counterexample: None };
    for d in 0..=n {
        for a in 0..=n {
            if d + a + 1 > n {
                continue;
            }
            geo.instances += 1;
            let mut lhs = IntPolynomial::zero();
            for j in 0..=a {
                lhs = lhs.add(&q_binomial_or_zero(d + j, j).shift(j as usize));
            }
            let rhs = q_binomial_or_zero(d + a + 1, a);
            if lhs != rhs && geo.counterexample.is_none() {
                geo.counterexample = Some(format!("d={d} a={a}"));
            }
        }
    }
    checks.push(geo);

    let mut id1 = IdentityCheck { name: "identity_i", instances: 0, counterexample: None };
    let mut id2 = IdentityCheck { name: "identity_ii", instances: 0, counterexample: None };
    for ip in 0..=n {
        for jp in 0..=n {
            for u in 0..=n {
                if ip + jp + u < n {
                    id1.instances += 1;
                    let mut lhs = IntPolynomial::zero();
                    for i in 0..=u {
                        let j = u - i;
                        let term = q_binomial_or_zero(i + ip, i)
                            .mul(&q_binomial_or_zero(j + jp, j))
                            .shift((i * (jp + 1)) as usize);
                        lhs = lhs.add(&term);
                    }
                    let rhs = q_binomial_or_zero(ip + jp + u + 1, u);
                    if lhs != rhs && id1.counterexample.is_none() {
                        id1.counterexample = Some(format!("i'={ip} j'={jp} u={u}"));
                    }
                }
                if ip + jp + u + 2 <= n {
                    id2.instances += 1;
                    let mut lhs = IntPolynomial::zero();
                    for i in 0..=u {
                        let j = u - i;
                        let term = q_binomial_or_zero(i + ip, i)
                            .mul(&q_binomial_or_zero(j + jp, j))
                            .shift((i * (jp + 2)) as usize);
                        lhs = lhs.add(&term);
                    }
                    let rhs = q_binomial_or_zero(ip + jp + u + 2, u).sub(
                        &q_binomial_or_zero(ip + jp + u + 1, u - 1).shift((jp + 1) as usize),
                    );
                    if lhs != rhs && id2.counterexample.is_none() {
                        id2.counterexample = Some(format!("i'={ip} j'={jp} u={u}"));
                    }
                }
            }
        }
    }
    checks.push(id1);
    checks.push(id2);

    IdentitySuiteReport { n_max, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: `[n choose j]` as the subset sum
    /// `sum_S t^(omega(S) - j(j+1)/2)` over j-subsets of {1..n}.
    pub(crate) fn q_binomial_subset_oracle(n: u32, j: u32) -> IntPolynomial {
        fn subsets(from: u32, n: u32, j: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if j == 0 {
                out.push(acc.clone());
                return;
            }
            for x in from..=n.saturating_sub(j - 1) {
                acc.push(x);
                subsets(x + 1, n, j - 1, acc, out);
                acc.pop();
            }
        }
        let mut all = Vec::new();
        subsets(1, n, j, &mut Vec::new(), &mut all);
        let base = (j * (j + 1) / 2) as usize;
        let mut p = IntPolynomial::zero();
        for s in all {
            let omega: u32 = s.iter().sum();
            p = p.add(&IntPolynomial::monomial(BigInt::from(1), omega as usize - base));
        }
        p
    }

    #[test]
    fn q_number_values() {
        assert_eq!(q_number(0), IntPolynomial::zero());
        assert_eq!(q_number(1), IntPolynomial::one());
        assert_eq!(q_number(2), IntPolynomial::from_ints(&[1, 1]));
        assert_eq!(q_number(4), IntPolynomial::from_ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn q_factorial_values() {
        assert_eq!(q_factorial(0), IntPolynomial::one());
        assert_eq!(q_factorial(2), IntPolynomial::from_ints(&[1, 1]));
        assert_eq!(q_factorial(3), IntPolynomial::from_ints(&[1, 2, 2, 1]));
    }

    #[test]
    fn q_binomial_values() {
        assert_eq!(q_binomial(5, 0).unwrap(), IntPolynomial::one());
        assert_eq!(q_binomial(5, 5).unwrap(), IntPolynomial::one());
        assert_eq!(q_binomial(4, 2).unwrap(), IntPolynomial::from_ints(&[1, 1, 2, 1, 1]));
        assert!(q_binomial(3, 4).is_err());
    }

    #[test]
    fn q_binomial_matches_subset_oracle() {
        for n in 0..=10 {
            for j in 0..=n {
                assert_eq!(
                    q_binomial(n, j).unwrap(),
                    q_binomial_subset_oracle(n, j),
                    "n={n} j={j}"
                );
            }
        }
    }

    #[test]
    fn q_multinomial_values() {
        assert_eq!(q_multinomial(2, &[1, 1]).unwrap(), IntPolynomial::from_ints(&[1, 1]));
        assert_eq!(q_multinomial(3, &[1, 1, 1]).unwrap(), q_factorial(3));
        assert_eq!(
            q_multinomial(3, &[0, 2, 1]).unwrap(),
            IntPolynomial::from_ints(&[1, 1, 1])
        );
        assert!(q_multinomial(3, &[1, 1]).is_err());
    }

    #[test]
    fn exact_divide_values() {
        let quot = exact_divide(
            &IntPolynomial::from_ints(&[1, 2, 1]),
            &IntPolynomial::from_ints(&[1, 1]),
        )
        .unwrap();
        assert_eq!(quot, IntPolynomial::from_ints(&[1, 1]));

        // (1 - t^3)(1 + t) / (1 - t^2) = 1 + t + t^2
        let num = IntPolynomial::from_ints(&[1, 0, 0, -1]).mul(&IntPolynomial::from_ints(&[1, 1]));
        let den = IntPolynomial::from_ints(&[1, 0, -1]);
        assert_eq!(exact_divide(&num, &den).unwrap(), IntPolynomial::from_ints(&[1, 1, 1]));

        let err = exact_divide(
            &IntPolynomial::from_ints(&[1, 1]),
            &IntPolynomial::from_ints(&[1, 1, 1]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InexactDivision { .. }));
    }

    #[test]
    fn reverse_and_palindromes() {
        let p = IntPolynomial::from_ints(&[1, 2, 0, 3]);
        assert_eq!(p.reverse(), IntPolynomial::from_ints(&[3, 0, 2, 1]));
        assert_eq!(p.reverse().reverse(), p);
        assert!(q_binomial(4, 2).unwrap().is_palindromic());
        assert!(!p.is_palindromic());
        assert_eq!(IntPolynomial::zero().reverse(), IntPolynomial::zero());
    }

    #[test]
    fn eval_at_one_gives_ordinary_count() {
        // [4 choose 2] at t=1 is the ordinary binomial coefficient 6.
        assert_eq!(q_binomial(4, 2).unwrap().eval_at_one(), BigInt::from(6));
        assert_eq!(q_factorial(4).eval_at_one(), BigInt::from(24));
    }

    #[test]
    fn identity_suite_passes() {
        let report = verify_identity_suite(12);
        for check in &report.checks {
            assert!(check.passed(), "{}: {:?}", check.name, check.counterexample);
            assert!(check.instances > 0, "{} checked nothing", check.name);
        }
    }

    #[test]
    fn identity_i_spot_instance() {
        // i'=j'=1, u=2: both sides equal [5 choose 2].
        let mut lhs = IntPolynomial::zero();
        for i in 0..=2i64 {
            let j = 2 - i;
            lhs = lhs.add(
                &q_binomial_or_zero(i + 1, i)
                    .mul(&q_binomial_or_zero(j + 1, j))
                    .shift((2 * i) as usize),
            );
        }
        let expected = IntPolynomial::from_ints(&[1, 1, 2, 2, 2, 1, 1]);
        assert_eq!(lhs, expected);
        assert_eq!(q_binomial(5, 2).unwrap(), expected);
    }

    #[test]
    fn render_styles() {
        let p = IntPolynomial::from_ints(&[1, 2, 0, 1]);
        assert_eq!(p.render("t", 1), "1 + 2t + t^3");
        assert_eq!(p.render("q", 2), "1 + 2q^2 + q^6");
        assert_eq!(IntPolynomial::zero().render("t", 1), "0");
        let m = IntPolynomial::from_ints(&[0, -1, 3]);
        assert_eq!(m.render("t", 1), "-t + 3t^2");
    }

    proptest! {
        #[test]
        fn divide_undoes_multiply(a in prop::collection::vec(-5i64..=5, 1..6),
                                  b in prop::collection::vec(-5i64..=5, 1..6)) {
            let pa = IntPolynomial::from_ints(&a);
            let pb = IntPolynomial::from_ints(&b);
            prop_assume!(!pb.is_zero());
            let prod = pa.mul(&pb);
            prop_assert_eq!(exact_divide(&prod, &pb).unwrap(), pa);
        }

        #[test]
        fn multinomial_at_one_is_integer_multinomial(parts in prop::collection::vec(0u32..=3, 1..5)) {
            let k: u32 = parts.iter().sum();
            let p = q_multinomial(k, &parts).unwrap();
            let fact = |m: u32| -> BigInt { (1..=m).map(BigInt::from).product() };
            let mut expected = fact(k);
            for &r in &parts {
                expected /= fact(r);
            }
            prop_assert_eq!(p.eval_at_one(), expected);
        }

        #[test]
        fn binomial_symmetry_and_degree(n in 0u32..=10, j in 0u32..=10) {
            prop_assume!(j <= n);
            let p = q_binomial(n, j).unwrap();
            prop_assert_eq!(&p, &q_binomial(n, n - j).unwrap());
            prop_assert!(p.is_palindromic());
            prop_assert_eq!(p.degree(), Some((j * (n - j)) as usize));
        }
    }
}
