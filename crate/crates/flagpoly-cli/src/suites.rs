//! Verification suites behind `flagpoly verify`, reported as JSON lines.
//!
//! Each suite runs its checks in parallel (order-preserving collect, so the
//! report is byte-deterministic regardless of thread count) and returns one
//! JSON object per check plus a one-line summary.

use std::collections::BTreeMap;

use flagpoly::fixedmaps::{def_formula_oracle, enumerate_fixed_maps, DegreePattern, DegreeVector};
use flagpoly::flags::{enumerate_index_tuples, n_statistic};
use flagpoly::poincare::{compare, poincare_enumeration_signed, Agreement};
use flagpoly::poly::{q_binomial, q_multinomial, verify_identity_suite, IntPolynomial};
use flagpoly::FlagShape;
use num_bigint::BigInt;
use serde::Serialize;

use crate::record::poly_map;

pub struct SuiteOutcome {
    pub lines: Vec<String>,
    pub summary: String,
    pub all_passed: bool,
}

/// Ordered compositions of `k` into at least two positive parts: every
/// flag manifold shape with `k` ambient dimensions.
pub fn shapes_up_to(max_k: u32) -> Vec<FlagShape> {
    fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=rem {
            cur.push(first);
            rec(rem - first, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    for k in 2..=max_k {
        rec(k, &mut Vec::new(), &mut parts);
    }
    parts
        .into_iter()
        .map(|p| FlagShape::new(p).expect("composition parts are positive"))
        .collect()
}

/// Every supported nonzero degree vector for `l` steps.
pub fn supported_degrees(l: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..l {
        let mut d = vec![0; l];
        d[i] = 1;
        out.push(d);
    }
    for i in 0..l {
        let mut d = vec![0; l];
        d[i] = 2;
        out.push(d);
    }
    for i in 0..l {
        for j in i + 2..l {
            let mut d = vec![0; l];
            d[i] = 1;
            d[j] = 1;
            out.push(d);
        }
    }
    for i in 0..l.saturating_sub(1) {
        let mut d = vec![0; l];
        d[i] = 1;
        d[i + 1] = 1;
        out.push(d);
    }
    out
}

#[derive(Serialize)]
struct IdentityLine {
    suite: &'static str,
    check: String,
    instances: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

/// Subset-sum oracle for the q-binomial: over `j`-subsets `S` of `1..=n`,
/// `[n choose j] = sum t^(omega(S) - j(j+1)/2)`. Independent of the Pascal
/// recurrence used by `q_binomial`.
fn subset_sum_binomial(n: u32, j: u32) -> IntPolynomial {
    fn rec(next: u32, n: u32, left: u32, acc: u32, exps: &mut Vec<u32>) {
        if left == 0 {
            exps.push(acc);
            return;
        }
        for x in next..=n + 1 - left {
            rec(x + 1, n, left - 1, acc + x, exps);
        }
    }
    let mut exps = Vec::new();
    rec(1, n, j, 0, &mut exps);
    let offset = j * (j + 1) / 2;
    let mut poly = IntPolynomial::zero();
    for e in exps {
        poly = poly.add(&IntPolynomial::monomial(BigInt::from(1), (e - offset) as usize));
    }
    poly
}

pub fn run_identities(n_max: u32) -> SuiteOutcome {
    let report = verify_identity_suite(n_max);
    let mut lines = Vec::new();
    let mut total = 0;
    let mut all_passed = true;
    for check in &report.checks {
        total += check.instances;
        all_passed &= check.passed();
        lines.push(
            serde_json::to_string(&IdentityLine {
                suite: "identities",
                check: check.name.to_string(),
                instances: check.instances,
                status: if check.passed() { "pass" } else { "fail" },
                counterexample: check.counterexample.clone(),
            })
            .expect("line serializes"),
        );
    }

    let oracle_max = n_max.min(10);
    let mut oracle_instances = 0;
    let mut counterexample = None;
    for n in 0..=oracle_max {
        for j in 0..=n {
            oracle_instances += 1;
            if subset_sum_binomial(n, j) != q_binomial(n, j).expect("j <= n") {
                counterexample.get_or_insert_with(|| format!("n={n} j={j}"));
            }
        }
    }
    total += oracle_instances;
    all_passed &= counterexample.is_none();
    lines.push(
        serde_json::to_string(&IdentityLine {
            suite: "identities",
            check: "subset_sum_oracle".to_string(),
            instances: oracle_instances,
            status: if counterexample.is_none() { "pass" } else { "fail" },
            counterexample,
        })
        .expect("line serializes"),
    );

    let summary = format!(
        "identities: {} checks over {} instances (n <= {}), {}",
        lines.len(),
        total,
        n_max,
        if all_passed { "all passed" } else { "FAILURES" }
    );
    SuiteOutcome { lines, summary, all_passed }
}

#[derive(Serialize)]
struct FlagLine {
    suite: &'static str,
    shape: Vec<u32>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn flag_three_way(shape: &FlagShape) -> Result<(), String> {
    let profile: Vec<usize> = shape.parts().iter().map(|&r| r as usize).collect();
    let mut enumeration = IntPolynomial::zero();
    for tuple in
        enumerate_index_tuples(shape.k() as usize, &profile).map_err(|e| e.to_string())?
    {
        enumeration =
            enumeration.add(&IntPolynomial::monomial(BigInt::from(1), n_statistic(&tuple)));
    }
    // telescoping product over the flag steps
    let mut product = IntPolynomial::one();
    let mut rest = shape.k();
    for &r in shape.parts() {
        product = product.mul(&q_binomial(rest, r).map_err(|e| e.to_string())?);
        rest -= r;
    }
    let multinomial = q_multinomial(shape.k(), shape.parts()).map_err(|e| e.to_string())?;
    if enumeration != product {
        return Err(format!(
            "enumeration {} != step product {}",
            enumeration.render("t", 1),
            product.render("t", 1)
        ));
    }
    if product != multinomial {
        return Err(format!(
            "step product {} != q-multinomial {}",
            product.render("t", 1),
            multinomial.render("t", 1)
        ));
    }
    Ok(())
}

pub fn run_flags(max_k: u32) -> SuiteOutcome {
    use rayon::prelude::*;
    let shapes = shapes_up_to(max_k);
    let results: Vec<(Vec<u32>, Result<(), String>)> = shapes
        .par_iter()
        .map(|shape| (shape.parts().to_vec(), flag_three_way(shape)))
        .collect();
    let mut lines = Vec::new();
    let mut failures = 0;
    for (shape, result) in results {
        let (status, error) = match result {
            Ok(()) => ("pass", None),
            Err(e) => {
                failures += 1;
                ("fail", Some(e))
            }
        };
        lines.push(
            serde_json::to_string(&FlagLine { suite: "flags", shape, status, error })
                .expect("line serializes"),
        );
    }
    let summary = format!(
        "flags: {} shapes with k <= {}, {}",
        lines.len(),
        max_k,
        if failures == 0 { "all three-way checks passed".to_string() } else { format!("{failures} FAILURES") }
    );
    SuiteOutcome { lines, summary, all_passed: failures == 0 }
}

#[derive(Serialize)]
struct ModuliLine {
    suite: &'static str,
    shape: Vec<u32>,
    degree: Vec<u32>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    difference_t: Option<BTreeMap<usize, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn moduli_unit(shape: &FlagShape, degree: &DegreeVector) -> ModuliLine {
    let mut line = ModuliLine {
        suite: "moduli",
        shape: shape.parts().to_vec(),
        degree: degree.entries().to_vec(),
        status: "pass",
        agreement: None,
        difference_t: None,
        error: None,
    };
    let fail = |mut line: ModuliLine, msg: String| {
        line.status = "fail";
        line.error = Some(msg);
        line
    };

    let report = match compare(shape, degree) {
        Ok(r) => r,
        Err(e) => return fail(line, e.to_string()),
    };
    let points = match enumerate_fixed_maps(shape, degree) {
        Ok(p) => p,
        Err(e) => return fail(line, e.to_string()),
    };
    for point in &points {
        match def_formula_oracle(&point.descriptor) {
            Ok(oracle) if oracle == point.def => {}
            Ok(_) => {
                return fail(
                    line,
                    format!("engine and formula disagree at {:?}", point.descriptor.tuple),
                )
            }
            Err(e) => return fail(line, e.to_string()),
        }
    }
    if !report.palindromic() {
        return fail(line, "enumeration polynomial is not palindromic".to_string());
    }
    if report.euler() != BigInt::from(points.len()) {
        return fail(line, "Euler characteristic differs from fixed-point count".to_string());
    }
    match poincare_enumeration_signed(shape, degree) {
        Ok((pos, neg)) if neg == pos.reverse() => {}
        Ok(_) => return fail(line, "plus and minus counts are not reverses".to_string()),
        Err(e) => return fail(line, e.to_string()),
    }

    match &report.agreement {
        Agreement::Match => line.agreement = Some("match"),
        Agreement::NoClosedForm => line.agreement = Some("no_closed_form"),
        Agreement::Mismatch { difference } => {
            line.agreement = Some("mismatch");
            line.difference_t = Some(poly_map(difference, 1));
            let documented = matches!(report.pattern, DegreePattern::Adjacent { .. })
                && shape.is_complete();
            if documented {
                // the one known two-route disagreement; reported, not failed
                line.status = "documented_discrepancy";
            } else {
                return fail(line, "closed form disagrees with enumeration".to_string());
            }
        }
    }
    line
}

pub fn run_moduli(max_k: u32) -> SuiteOutcome {
    use rayon::prelude::*;
    let mut units: Vec<(FlagShape, DegreeVector)> = Vec::new();
    for shape in shapes_up_to(max_k) {
        for deg in supported_degrees(shape.l()) {
            units.push((shape.clone(), DegreeVector::new(deg)));
        }
    }
    let results: Vec<ModuliLine> =
        units.par_iter().map(|(shape, degree)| moduli_unit(shape, degree)).collect();
    let mut lines = Vec::new();
    let (mut passes, mut discrepancies, mut failures) = (0, 0, 0);
    for line in results {
        match line.status {
            "pass" => passes += 1,
            "documented_discrepancy" => discrepancies += 1,
            _ => failures += 1,
        }
        lines.push(serde_json::to_string(&line).expect("line serializes"));
    }
    let summary = format!(
        "moduli: {} spaces with k <= {}: {} pass, {} documented discrepancies, {} failures",
        lines.len(),
        max_k,
        passes,
        discrepancies,
        failures
    );
    SuiteOutcome { lines, summary, all_passed: failures == 0 }
}
