//! Browser bindings: the same two-route computations as the CLI, exposed
//! as functions from plain shape/degree strings to JSON strings so a
//! static page can call them without any glue types. Compiles and tests on the host
//! target; `wasm-pack build --target web` produces the browser package.

use std::collections::BTreeMap;

use flagpoly::fixedmaps::DegreeVector;
use flagpoly::poincare::{compare, Agreement, PoincareReport};
use flagpoly::poly::verify_identity_suite;
use flagpoly::{FlagShape, IntPolynomial};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct ErrorReply {
    error: String,
}

fn error_json(message: String) -> String {
    serde_json::to_string(&ErrorReply { error: message }).expect("error reply serializes")
}

fn parse_csv(text: &str, what: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| format!("malformed {what} {text:?}: expected comma-separated nonnegative integers"))
        })
        .collect()
}

fn poly_map(p: &IntPolynomial) -> BTreeMap<usize, String> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| *c != &num_bigint::BigInt::from(0))
        .map(|(e, c)| (e, c.to_string()))
        .collect()
}

#[derive(Serialize)]
struct Reply {
    shape: Vec<u32>,
    k: u32,
    degree: Option<Vec<u32>>,
    dimension: usize,
    enumeration: String,
    enumeration_map: BTreeMap<usize, String>,
    closed_form: Option<String>,
    agreement: &'static str,
    difference: Option<String>,
    betti: Vec<String>,
    euler: String,
}

fn reply(report: &PoincareReport) -> Reply {
    let (agreement, difference) = match &report.agreement {
        Agreement::Match => ("match", None),
        Agreement::Mismatch { difference } => ("mismatch", Some(difference.render("t", 1))),
        Agreement::NoClosedForm => ("no closed form", None),
    };
    Reply {
        shape: report.shape.parts().to_vec(),
        k: report.shape.k(),
        degree: report.moduli_dimension.map(|_| report.degree.entries().to_vec()),
        dimension: report.moduli_dimension.unwrap_or_else(|| report.shape.dim()),
        enumeration: report.enumeration.render("t", 1),
        enumeration_map: poly_map(&report.enumeration),
        closed_form: report.closed_form.as_ref().map(|p| p.render("t", 1)),
        agreement,
        difference,
        betti: report.betti().iter().map(|b| b.to_string()).collect(),
        euler: report.euler().to_string(),
    }
}

fn flag_report_impl(shape: &str) -> Result<Reply, String> {
    let shape = FlagShape::new(parse_csv(shape, "shape")?).map_err(|e| e.to_string())?;
    let degree = DegreeVector::new(vec![0; shape.l()]);
    let report = compare(&shape, &degree).map_err(|e| e.to_string())?;
    Ok(reply(&report))
}

fn moduli_report_impl(shape: &str, degree: &str) -> Result<Reply, String> {
    let shape = FlagShape::new(parse_csv(shape, "shape")?).map_err(|e| e.to_string())?;
    let degree = DegreeVector::new(parse_csv(degree, "degree")?);
    let report = compare(&shape, &degree).map_err(|e| e.to_string())?;
    Ok(reply(&report))
}

/// Poincare polynomial of `Fl(r1,...,r_{l+1}; k)` from a comma-separated
/// shape, as JSON (or `{"error": ...}`).
#[wasm_bindgen]
pub fn flag_report(shape: &str) -> String {
    match flag_report_impl(shape) {
        Ok(r) => serde_json::to_string(&r).expect("reply serializes"),
        Err(e) => error_json(e),
    }
}

/// Both routes for the stable-map moduli space, as JSON.
#[wasm_bindgen]
pub fn moduli_report(shape: &str, degree: &str) -> String {
    match moduli_report_impl(shape, degree) {
        Ok(r) => serde_json::to_string(&r).expect("reply serializes"),
        Err(e) => error_json(e),
    }
}

#[derive(Serialize)]
struct IdentityCheckReply {
    name: String,
    instances: usize,
    passed: bool,
}

#[derive(Serialize)]
struct IdentityReply {
    n_max: u32,
    checks: Vec<IdentityCheckReply>,
    all_passed: bool,
}

/// Runs the q-binomial identity suite with indices up to `n_max`
/// (clamped to 12 to keep the page responsive), as JSON.
#[wasm_bindgen]
pub fn identity_report(n_max: u32) -> String {
    let n_max = n_max.min(12);
    let report = verify_identity_suite(n_max);
    let reply = IdentityReply {
        n_max,
        checks: report
            .checks
            .iter()
            .map(|c| IdentityCheckReply {
                name: c.name.to_string(),
                instances: c.instances,
                passed: c.passed(),
            })
            .collect(),
        all_passed: report.all_passed(),
    };
    serde_json::to_string(&reply).expect("reply serializes")
}
