//! The JSON envelope shared by every command.

use serde::Serialize;

use electrovac::{charge_constant, Dimension, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Physical conventions echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub metric: &'static str,
    pub frame: &'static str,
    pub normal: &'static str,
    pub charge_constant: f64,
    pub charge_constant_formula: &'static str,
    pub lambda_default: f64,
    pub derivatives: &'static str,
}

impl Conventions {
    pub fn new(n: Dimension) -> Self {
        Self {
            metric: "g = A(r) dr^2 + r^2 g_S with g_S the round unit (n-1)-sphere",
            frame: "orthonormal; symmetric tensors are reported by radial and tangential eigenvalues",
            normal: "unit normal A^(-1/2) d/dr toward increasing r; the inner sphere of an annulus uses its negative",
            charge_constant: charge_constant(n),
            charge_constant_formula: "sqrt(2(n-2)/(n-1))",
            lambda_default: 0.0,
            derivatives: "closed form for the Reissner-Nordstrom family; natural cubic spline plus central differences for tables",
        }
    }
}

/// Where the data came from.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    ReissnerNordstrom { m: f64, q: f64 },
    Profile { path: String, rows: usize, has_psi: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct Params<X: Serialize> {
    pub n: usize,
    pub lambda: f64,
    pub source: Source,
    #[serde(flatten)]
    pub extra: X,
    pub conventions: Conventions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<X: Serialize, R: Serialize> {
    pub command: &'static str,
    pub params: Params<X>,
    pub results: R,
    pub tolerances: Tolerances,
    pub verdict: Verdict,
}

impl<X: Serialize, R: Serialize> Envelope<X, R> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }
}

/// Format an optional number for text output.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_owned(), |v| format!("{v:.12e}"))
}
