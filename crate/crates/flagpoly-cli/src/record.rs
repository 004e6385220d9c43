//! Output records and the four renderings: plain, json, latex, csv.
//!
//! JSON carries coefficients as decimal strings keyed by exponent, so any
//! integer round-trips losslessly, and serializes in a fixed field order.

use std::collections::BTreeMap;

use flagpoly::poincare::{Agreement, PoincareReport};
use flagpoly::IntPolynomial;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Latex,
    Csv,
}

/// `t` counts Betti classes (coefficient of `t^m` is `b_{2m}`); `q` is the
/// cohomological-degree convention with exponents doubled.
#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Variable {
    T,
    Q,
}

impl Variable {
    pub fn scale(self) -> usize {
        match self {
            Variable::T => 1,
            Variable::Q => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::T => "t",
            Variable::Q => "q",
        }
    }
}

/// Exponent -> decimal coefficient, exponents scaled by `scale`.
pub fn poly_map(p: &IntPolynomial, scale: usize) -> BTreeMap<usize, String> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e * scale, c.to_string()))
        .collect()
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AgreementRecord {
    Match,
    Mismatch { difference_t: BTreeMap<usize, String> },
    NoClosedForm,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub shape: Vec<u32>,
    pub degree: Option<Vec<u32>>,
    pub enumeration_t: BTreeMap<usize, String>,
    pub enumeration_q: BTreeMap<usize, String>,
    pub closed_form_t: Option<BTreeMap<usize, String>>,
    pub agreement: AgreementRecord,
    pub betti: Vec<String>,
    pub euler: String,
    pub fixed_points: String,
    pub moduli_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u128>,
}

impl OutputRecord {
    pub fn from_report(command: &str, report: &PoincareReport, timing_ms: Option<u128>) -> Self {
        let degree = match command {
            "flag" => None,
            _ => Some(report.degree.entries().to_vec()),
        };
        let agreement = match &report.agreement {
            Agreement::Match => AgreementRecord::Match,
            Agreement::Mismatch { difference } => {
                AgreementRecord::Mismatch { difference_t: poly_map(difference, 1) }
            }
            Agreement::NoClosedForm => AgreementRecord::NoClosedForm,
        };
        let euler = report.euler();
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            shape: report.shape.parts().to_vec(),
            degree,
            enumeration_t: poly_map(&report.enumeration, 1),
            enumeration_q: poly_map(&report.enumeration, 2),
            closed_form_t: report.closed_form.as_ref().map(|p| poly_map(p, 1)),
            agreement,
            betti: report.betti().iter().map(BigInt::to_string).collect(),
            euler: euler.to_string(),
            fixed_points: euler.to_string(),
            moduli_dimension: report.moduli_dimension,
            timing_ms,
        }
    }
}

fn agreement_word(a: &Agreement) -> &'static str {
    match a {
        Agreement::Match => "match",
        Agreement::Mismatch { .. } => "mismatch",
        Agreement::NoClosedForm => "no closed form",
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Polynomial in LaTeX: exponents always braced, e.g. `1 + 2t + t^{12}`.
pub fn latex_poly(p: &IntPolynomial, var: &str, scale: usize) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (e, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.magnitude().to_string();
        if out.is_empty() {
            if c.sign() == num_bigint::Sign::Minus {
                out.push('-');
            }
        } else if c.sign() == num_bigint::Sign::Minus {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let e = e * scale;
        if e == 0 {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
            }
            out.push_str(var);
            if e > 1 {
                out.push_str(&format!("^{{{e}}}"));
            }
        }
    }
    out
}

fn latex_space(report: &PoincareReport, command: &str) -> String {
    let parts = join(report.shape.parts(), ",");
    let fl = format!("\\mathrm{{Fl}}({};{})", parts, report.shape.k());
    match command {
        "flag" => fl,
        _ => format!(
            "\\mathcal{{M}}_0({},({}))",
            fl,
            join(report.degree.entries(), ",")
        ),
    }
}

pub fn render(
    report: &PoincareReport,
    command: &str,
    format: Format,
    variable: Variable,
    timing_ms: Option<u128>,
) -> String {
    let scale = variable.scale();
    let var = variable.name();
    match format {
        Format::Json => {
            let record = OutputRecord::from_report(command, report, timing_ms);
            let mut s = serde_json::to_string(&record).expect("record serializes");
            s.push('\n');
            s
        }
        Format::Plain => {
            let mut lines = Vec::new();
            lines.push(format!(
                "shape: {} (k = {})",
                join(report.shape.parts(), ","),
                report.shape.k()
            ));
            if command != "flag" {
                lines.push(format!("degree: {}", join(report.degree.entries(), ",")));
            }
            lines.push(format!("enumeration: {}", report.enumeration.render(var, scale)));
            match &report.closed_form {
                Some(p) => lines.push(format!("closed form: {}", p.render(var, scale))),
                None => lines.push("closed form: none for this pattern".to_string()),
            }
            lines.push(format!("agreement: {}", agreement_word(&report.agreement)));
            if let Agreement::Mismatch { difference } = &report.agreement {
                lines.push(format!(
                    "difference (enumeration - closed form): {}",
                    difference.render(var, scale)
                ));
            }
            lines.push(format!("betti: {}", join(&report.betti(), " ")));
            lines.push(format!("euler: {}", report.euler()));
            lines.push(format!("fixed points: {}", report.euler()));
            let dim = report.moduli_dimension.unwrap_or_else(|| report.shape.dim());
            lines.push(format!("dimension: {dim}"));
            if let Some(ms) = timing_ms {
                lines.push(format!("timing: {ms} ms"));
            }
            lines.join("\n") + "\n"
        }
        Format::Latex => {
            let mut lines = Vec::new();
            let space = latex_space(report, command);
            lines.push(format!(
                "P_{{{space}}}({var}) = {}",
                latex_poly(&report.enumeration, var, scale)
            ));
            if command == "flag" {
                lines.push(format!(
                    "% q-multinomial: \\begin{{bmatrix}} {} \\\\ {} \\end{{bmatrix}}_{var}",
                    report.shape.k(),
                    join(report.shape.parts(), ",")
                ));
            }
            if let Some(p) = &report.closed_form {
                lines.push(format!("% closed form: {}", latex_poly(p, var, scale)));
            }
            lines.push(format!("% agreement: {}", agreement_word(&report.agreement)));
            if let Some(ms) = timing_ms {
                lines.push(format!("% timing: {ms} ms"));
            }
            lines.join("\n") + "\n"
        }
        Format::Csv => {
            let shape = join(report.shape.parts(), ",");
            let degree = match command {
                "flag" => String::new(),
                _ => join(report.degree.entries(), ","),
            };
            let mut out = String::from("shape,degree,exponent,coefficient\n");
            for (e, c) in report.enumeration.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out.push_str(&format!("\"{shape}\",\"{degree}\",{},{c}\n", e * scale));
            }
            out
        }
    }
}
