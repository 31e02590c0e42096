//! Machine-readable result documents, one per command, plus their
//! human-readable renderings. Rational values travel as exact strings,
//! residuals as decimal strings; every certificate embedded in a report
//! carries enough data to be re-verified by library calls after
//! re-parsing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use hypal::algebra::Measure;
use hypal::amenability::MeanVerification;
use hypal::haar::{
    CesaroInfo, EquivalenceReport, GammaReport, HaarMethod, HaarResult, Normalization, PptVerdict,
};
use hypal::hypergroup::{CheckStatus, ConvolutionTable, ValidationReport, Witness};
use hypal::rational::format_rational;

/// Sparse `symbol → exact rational string` rendering of a weight vector;
/// zero weights are omitted.
pub fn weights_doc(table: &ConvolutionTable, measure: &Measure) -> BTreeMap<String, String> {
    use num::Zero;
    measure
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(x, w)| (table.symbol(x).to_owned(), format_rational(w)))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub indices: Vec<usize>,
    pub symbols: Vec<String>,
    pub left: String,
    pub right: String,
    pub note: String,
}

impl WitnessDoc {
    fn of(w: &Witness) -> Self {
        Self {
            indices: w.indices.clone(),
            symbols: w.symbols.clone(),
            left: format_rational(&w.left),
            right: format_rational(&w.right),
            note: w.note.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomDoc {
    pub axiom: String,
    /// `pass`, `fail`, or `automatic`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateDoc {
    pub command: String,
    pub table: String,
    pub valid: bool,
    pub axioms: Vec<AxiomDoc>,
}

impl ValidateDoc {
    pub fn of(report: &ValidationReport) -> Self {
        Self {
            command: "validate".into(),
            table: report.table_name().to_owned(),
            valid: report.is_valid(),
            axioms: report
                .entries()
                .iter()
                .map(|entry| AxiomDoc {
                    axiom: entry.axiom.label().to_owned(),
                    status: match &entry.status {
                        CheckStatus::Pass => "pass".into(),
                        CheckStatus::Automatic => "automatic".into(),
                        CheckStatus::Fail(_) => "fail".into(),
                    },
                    witness: match &entry.status {
                        CheckStatus::Fail(w) => Some(WitnessDoc::of(w)),
                        _ => None,
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CesaroDoc {
    pub iterations: usize,
    pub residual: String,
    pub converged: bool,
    pub fell_back: bool,
}

impl CesaroDoc {
    fn of(info: &CesaroInfo) -> Self {
        Self {
            iterations: info.iterations,
            residual: format!("{:e}", info.residual),
            converged: info.converged,
            fell_back: info.fell_back,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HaarDoc {
    pub command: String,
    pub table: String,
    pub method: String,
    pub normalization: String,
    pub weights: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cesaro: Option<CesaroDoc>,
}

pub fn method_name(method: HaarMethod) -> &'static str {
    match method {
        HaarMethod::Direct => "direct",
        HaarMethod::Nullspace => "nullspace",
        HaarMethod::Cesaro => "cesaro",
    }
}

impl HaarDoc {
    pub fn of(table: &ConvolutionTable, result: &HaarResult) -> Self {
        Self {
            command: "haar".into(),
            table: table.name().to_owned(),
            method: method_name(result.method).to_owned(),
            normalization: match result.normalization {
                Normalization::IdentityOne => "lambda_e = 1".into(),
                Normalization::FunctionalOne => "Lambda(f) = 1".into(),
            },
            weights: weights_doc(table, &result.weights),
            cesaro: result.cesaro.as_ref().map(CesaroDoc::of),
        }
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "{}: Haar measure ({}, {})\n",
            self.table, self.method, self.normalization
        );
        for (sym, w) in &self.weights {
            out.push_str(&format!("  {sym}: {w}\n"));
        }
        if let Some(c) = &self.cesaro {
            if c.converged {
                out.push_str(&format!(
                    "  converged after {} iterations (residual {})\n",
                    c.iterations, c.residual
                ));
            } else {
                out.push_str(&format!(
                    "  did not converge within {} iterations (residual {}); exact nullspace fallback\n",
                    c.iterations, c.residual
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PptCertificateDoc {
    pub mu: BTreeMap<String, String>,
    pub nu: BTreeMap<String, String>,
    pub mu_norm: String,
    pub nu_norm: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PptDoc {
    pub command: String,
    pub table: String,
    pub f: String,
    /// `holds` or `fails`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PptCertificateDoc>,
}

impl PptDoc {
    pub fn of(table: &ConvolutionTable, f_tag: &str, verdict: &PptVerdict) -> Self {
        let certificate = match verdict {
            PptVerdict::Holds => None,
            PptVerdict::Fails { mu, nu } => Some(PptCertificateDoc {
                mu: weights_doc(table, mu),
                nu: weights_doc(table, nu),
                mu_norm: format_rational(&mu.norm()),
                nu_norm: format_rational(&nu.norm()),
            }),
        };
        Self {
            command: "ppt".into(),
            table: table.name().to_owned(),
            f: f_tag.to_owned(),
            status: if verdict.holds() { "holds" } else { "fails" }.into(),
            certificate,
        }
    }

    pub fn human(&self) -> String {
        match &self.certificate {
            None => format!("{} with f = {}: ppt holds\n", self.table, self.f),
            Some(cert) => {
                let fmt = |m: &BTreeMap<String, String>| {
                    if m.is_empty() {
                        "0".to_owned()
                    } else {
                        m.iter()
                            .map(|(s, w)| format!("{s}:{w}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                };
                format!(
                    "{} with f = {}: ppt FAILS\n  mu = {} (norm {})\n  nu = {} (norm {})\n  mu*f <= nu*f pointwise yet |mu| > |nu|\n",
                    self.table,
                    self.f,
                    fmt(&cert.mu),
                    cert.mu_norm,
                    fmt(&cert.nu),
                    cert.nu_norm
                )
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaDoc {
    pub command: String,
    pub table: String,
    pub f: String,
    pub kernel_dimension: usize,
    pub well_defined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_total: Option<String>,
}

impl GammaDoc {
    pub fn of(table: &ConvolutionTable, f_tag: &str, report: &GammaReport) -> Self {
        Self {
            command: "gamma".into(),
            table: table.name().to_owned(),
            f: f_tag.to_owned(),
            kernel_dimension: report.kernel_basis.len(),
            well_defined: report.well_defined,
            witness: report.witness.as_ref().map(|w| weights_doc(table, w)),
            witness_total: report.witness.as_ref().map(|w| format_rational(&w.total())),
        }
    }

    pub fn human(&self) -> String {
        if self.well_defined {
            format!(
                "{} with f = {}: Gamma_f is well defined (kernel dimension {})\n",
                self.table, self.f, self.kernel_dimension
            )
        } else {
            let witness = self
                .witness
                .as_ref()
                .map(|m| {
                    m.iter()
                        .map(|(s, w)| format!("{s}:{w}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            format!(
                "{} with f = {}: Gamma_f is NOT well defined\n  kernel witness rho = {} with rho(H) = {} != 0\n",
                self.table,
                self.f,
                witness,
                self.witness_total.as_deref().unwrap_or("?")
            )
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanVerificationDoc {
    pub invariant: bool,
    pub worst_defect: String,
    pub functions_checked: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanDoc {
    pub command: String,
    pub table: String,
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<MeanVerificationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farkas: Option<Vec<String>>,
}

impl MeanDoc {
    pub fn exists(
        table: &ConvolutionTable,
        weights: &Measure,
        verification: &MeanVerification,
    ) -> Self {
        Self {
            command: "mean".into(),
            table: table.name().to_owned(),
            exists: true,
            weights: Some(weights_doc(table, weights)),
            verification: Some(MeanVerificationDoc {
                invariant: verification.invariant,
                worst_defect: format_rational(&verification.worst),
                functions_checked: verification.functions_checked,
            }),
            farkas: None,
        }
    }

    pub fn nonexistent(table: &ConvolutionTable, farkas: &[hypal::Rational]) -> Self {
        Self {
            command: "mean".into(),
            table: table.name().to_owned(),
            exists: false,
            weights: None,
            verification: None,
            farkas: Some(farkas.iter().map(format_rational).collect()),
        }
    }

    pub fn human(&self) -> String {
        if self.exists {
            let mut out = format!("{}: invariant mean exists\n", self.table);
            if let Some(weights) = &self.weights {
                for (sym, w) in weights {
                    out.push_str(&format!("  {sym}: {w}\n"));
                }
            }
            if let Some(v) = &self.verification {
                out.push_str(&format!(
                    "  verified on {} functions, worst defect {}\n",
                    v.functions_checked, v.worst_defect
                ));
            }
            out
        } else {
            format!(
                "{}: no invariant mean (Farkas certificate attached)\n",
                self.table
            )
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceDoc {
    pub command: String,
    pub table: String,
    pub seed: u64,
    pub tested_functions: usize,
    pub haar_exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub haar_weights: Option<BTreeMap<String, String>>,
    pub ppt_all: bool,
    pub ppt_failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppt_some: Option<String>,
    pub consistent: bool,
}

impl EquivalenceDoc {
    pub fn of(table: &ConvolutionTable, seed: u64, report: &EquivalenceReport) -> Self {
        Self {
            command: "report".into(),
            table: table.name().to_owned(),
            seed,
            tested_functions: report.tested_functions,
            haar_exists: report.haar_exists,
            haar_weights: report.haar.as_ref().map(|h| weights_doc(table, &h.weights)),
            ppt_all: report.ppt_all,
            ppt_failures: report.ppt_failures.clone(),
            ppt_some: report.ppt_some.clone(),
            consistent: report.consistent,
        }
    }

    pub fn human(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut out = format!("{}: equivalence report (seed {})\n", self.table, self.seed);
        out.push_str(&format!(
            "  (1) Haar measure exists: {}\n",
            yes_no(self.haar_exists)
        ));
        out.push_str(&format!(
            "  (2) ppt holds for all {} tested f: {}\n",
            self.tested_functions,
            yes_no(self.ppt_all)
        ));
        match &self.ppt_some {
            Some(tag) => out.push_str(&format!("  (3) ppt holds for some f: yes ({tag})\n")),
            None => out.push_str("  (3) ppt holds for some f: no\n"),
        }
        if !self.ppt_failures.is_empty() {
            out.push_str(&format!("  failures: {}\n", self.ppt_failures.join(", ")));
        }
        out.push_str(&format!("  consistent: {}\n", yes_no(self.consistent)));
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenDoc {
    pub command: String,
    pub family: String,
    pub table: String,
    pub wrote: String,
    pub valid: bool,
}

impl GenDoc {
    pub fn human(&self) -> String {
        format!(
            "wrote {} ({}, {})\n",
            self.wrote,
            self.table,
            if self.valid { "valid" } else { "NOT valid" }
        )
    }
}
