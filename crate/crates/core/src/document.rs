//! On-disk formats. Both field files and certificates are JSON documents
//! carrying `"format": "torus-field/1"` and a `"kind"` discriminator.
//! Coefficients are exact: polynomials in field files are written in the
//! text grammar of [`crate::text`], and certificate coefficients are
//! `"numerator/denominator"` strings.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CompletenessCertificate, ReductionStep, Terminal, VectorField, Verdict};
use crate::gaussian::GaussianRational;
use crate::lattice::LatticeBasis;
use crate::laurent::{Exponent, LaurentPoly};
use crate::text::{default_vars, format_poly, parse_poly, validate_var_name};

pub const FORMAT_TAG: &str = "torus-field/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Field(FieldDocument),
    Certificate(CertificateDocument),
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let format = match &doc {
            Document::Field(d) => &d.format,
            Document::Certificate(d) => &d.format,
        };
        if format != FORMAT_TAG {
            return Err(Error::Document(format!(
                "unsupported format {format:?}, expected {FORMAT_TAG:?}"
            )));
        }
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub format: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    /// One expression per coordinate: `dz_i/dt = z_i * p[i]`.
    pub p: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl FieldDocument {
    pub fn from_field(field: &VectorField, label: Option<String>, source: Option<String>) -> Self {
        let vars = default_vars("z", field.dim());
        FieldDocument {
            format: FORMAT_TAG.to_string(),
            dim: field.dim(),
            vars: Some(vars.clone()),
            p: field.ps().iter().map(|p| format_poly(p, &vars)).collect(),
            label,
            source,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        self.vars
            .clone()
            .unwrap_or_else(|| default_vars("z", self.dim))
    }

    pub fn to_field(&self) -> Result<VectorField> {
        let vars = self.variables();
        if vars.len() != self.dim {
            return Err(Error::Document(format!(
                "{} variable names for dimension {}",
                vars.len(),
                self.dim
            )));
        }
        for v in &vars {
            validate_var_name(v)?;
        }
        if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
            return Err(Error::Document("duplicate variable names".into()));
        }
        if self.p.len() != self.dim {
            return Err(Error::Document(format!(
                "{} expressions for dimension {}",
                self.p.len(),
                self.dim
            )));
        }
        let ps = self
            .p
            .iter()
            .map(|s| parse_poly(s, &vars))
            .collect::<Result<_, _>>()?;
        VectorField::new(ps)
    }
}

/// Reads a field file.
pub fn read_field(text: &str) -> Result<(FieldDocument, VectorField)> {
    match Document::parse(text)? {
        Document::Field(doc) => {
            let field = doc.to_field()?;
            Ok((doc, field))
        }
        Document::Certificate(_) => Err(Error::Document("expected a field document".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub exp: Vec<i64>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDocument {
    pub dim: usize,
    pub terms: Vec<TermDocument>,
}

impl PolyDocument {
    pub fn from_poly(p: &LaurentPoly) -> Self {
        PolyDocument {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(e, c)| TermDocument {
                    exp: e.entries().to_vec(),
                    re: c.re().to_string(),
                    im: c.im().to_string(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<LaurentPoly> {
        let rational = |s: &str| {
            BigRational::from_str(s).map_err(|_| Error::Document(format!("bad rational {s:?}")))
        };
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = GaussianRational::new(rational(&t.re)?, rational(&t.im)?);
                Ok((Exponent::new(t.exp.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        LaurentPoly::from_terms(self.dim, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDocument {
    pub dim_before: usize,
    pub basis: Vec<Vec<i64>>,
    pub f: Vec<PolyDocument>,
    pub reduced: Vec<PolyDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub format: String,
    pub verdict: String,
    pub terminal: String,
    pub chain: Vec<StepDocument>,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &CompletenessCertificate) -> Self {
        CertificateDocument {
            format: FORMAT_TAG.to_string(),
            verdict: cert.verdict.to_string(),
            terminal: match cert.terminal {
                Terminal::BaseConstant => "base-constant",
                Terminal::RankEqualsDim => "rank-equals-dim",
            }
            .to_string(),
            chain: cert
                .chain
                .iter()
                .map(|s| StepDocument {
                    dim_before: s.dim_before,
                    basis: s
                        .basis
                        .rows()
                        .iter()
                        .map(|r| r.entries().to_vec())
                        .collect(),
                    f: s.f_list.iter().map(PolyDocument::from_poly).collect(),
                    reduced: s.reduced.ps().iter().map(PolyDocument::from_poly).collect(),
                })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<CompletenessCertificate> {
        let verdict = match self.verdict.as_str() {
            "complete" => Verdict::Complete,
            "incomplete" => Verdict::Incomplete,
            other => return Err(Error::Document(format!("unknown verdict {other:?}"))),
        };
        let terminal = match self.terminal.as_str() {
            "base-constant" => Terminal::BaseConstant,
            "rank-equals-dim" => Terminal::RankEqualsDim,
            other => return Err(Error::Document(format!("unknown terminal {other:?}"))),
        };
        let chain = self
            .chain
            .iter()
            .map(|s| {
                let rows = s.basis.iter().cloned().map(Exponent::new).collect();
                let basis = LatticeBasis::from_hnf_rows(s.dim_before, rows)?;
                let f_list =
                    s.f.iter()
                        .map(PolyDocument::to_poly)
                        .collect::<Result<_>>()?;
                let reduced_ps = s
                    .reduced
                    .iter()
                    .map(PolyDocument::to_poly)
                    .collect::<Result<Vec<_>>>()?;
                let reduced = VectorField::new(reduced_ps)?;
                Ok(ReductionStep {
                    dim_before: s.dim_before,
                    basis,
                    f_list,
                    reduced,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CompletenessCertificate {
            verdict,
            chain,
            terminal,
        })
    }
}

/// Reads a certificate file.
pub fn read_certificate(text: &str) -> Result<CertificateDocument> {
    match Document::parse(text)? {
        Document::Certificate(doc) => Ok(doc),
        Document::Field(_) => Err(Error::Document("expected a certificate document".into())),
    }
}
