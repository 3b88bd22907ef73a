//! Versioned JSON certificate files: schema types, loading, and batch
//! verification. The repository ships transcriptions of every matrix the
//! proofs rely on under `paper-data/`, and the acceptance suite replays
//! them through these entry points.

use serde::{Deserialize, Serialize};

use crate::arith::identity::{expand_identity, PolyIdentity};
use crate::descent::{
    descent_gap_check, verify_descent_certificate, DescentCertificate, DescentPartition, GoodSpec,
};
use crate::forms::TernaryForm;
use crate::genus::genus_classes;
use crate::transfer::{
    check_prec_search, check_prec_with_sigmas, IsometryData, RationalIsometry, ResidueVectorSet,
};
use crate::universality::{
    expected_theorem31_exclusions, theorem31_exclusions, verify_quadruple, Quadruple, VerifyMode,
};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A Gram matrix on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormFile {
    pub gram: [[i64; 3]; 3],
    #[serde(default)]
    pub note: String,
}

impl FormFile {
    pub fn to_form(&self) -> Result<TernaryForm> {
        TernaryForm::new(self.gram)
    }
}

/// How a prec certificate obtains its σ list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSource {
    Sigmas(Vec<IsometryData>),
    Search { cap: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrecCert {
    pub n: [[i64; 3]; 3],
    pub m: [[i64; 3]; 3],
    pub d: i64,
    pub a: i64,
    pub sigmas: SigmaSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoodSpecData {
    Sigmas(Vec<IsometryData>),
    Search { cap: usize },
    Explicit(Vec<[i64; 3]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionData {
    pub classes: Vec<[i64; 3]>,
    pub tau: IsometryData,
    pub allowed_targets: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescentCertData {
    pub n: [[i64; 3]; 3],
    pub m: [[i64; 3]; 3],
    pub d: i64,
    pub a: i64,
    pub good: GoodSpecData,
    pub partitions: Vec<PartitionData>,
    pub exceptional_vectors: Vec<[i64; 3]>,
    #[serde(default)]
    pub gap_bound: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadrupleCert {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub bound: i64,
    pub mode: VerifyMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExclusionCert {
    pub bound: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenusCert {
    pub form: [[i64; 3]; 3],
    pub primes: Vec<i64>,
    #[serde(default)]
    pub expected_class_number: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCert {
    pub identities: Vec<PolyIdentity>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificatePayload {
    Prec(PrecCert),
    Descent(DescentCertData),
    Quadruple(QuadrupleCert),
    Theorem31(ExclusionCert),
    Genus(GenusCert),
    Identity(IdentityCert),
}

/// A complete on-disk certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    #[serde(default)]
    pub note: String,
    #[serde(flatten)]
    pub payload: CertificatePayload,
}

/// Outcome of replaying one certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertReport {
    pub ok: bool,
    pub lines: Vec<String>,
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile> {
    let cert: CertificateFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if cert.schema != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            cert.schema
        )));
    }
    Ok(cert)
}

pub fn parse_form(text: &str) -> Result<TernaryForm> {
    let file: FormFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.to_form()
}

pub fn parse_isometries(text: &str) -> Result<Vec<IsometryData>> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn build_descent(data: &DescentCertData) -> Result<DescentCertificate> {
    let n = TernaryForm::new(data.n)?;
    let m = TernaryForm::new(data.m)?;
    let good = match &data.good {
        GoodSpecData::Sigmas(list) => GoodSpec::Sigmas(
            list.iter()
                .map(|s| RationalIsometry::from_data(s, &n, &m))
                .collect::<Result<_>>()?,
        ),
        GoodSpecData::Search { cap } => GoodSpec::Search { cap: *cap },
        GoodSpecData::Explicit(classes) => GoodSpec::Explicit(classes.clone()),
    };
    let partitions = data
        .partitions
        .iter()
        .map(|p| {
            Ok(DescentPartition {
                classes: ResidueVectorSet::new(data.d, p.classes.iter().copied())?,
                tau: RationalIsometry::from_data(&p.tau, &n, &n)?,
                allowed_targets: p.allowed_targets.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescentCertificate {
        n,
        m,
        d: data.d,
        a: data.a,
        good,
        partitions,
        exceptional_vectors: data
            .exceptional_vectors
            .iter()
            .map(|v| crate::forms::Vector3(*v))
            .collect(),
    })
}

/// Replay a certificate and report per-claim verdicts.
pub fn verify_certificate(cert: &CertificateFile) -> Result<CertReport> {
    let mut lines = Vec::new();
    let mut ok = true;
    match &cert.payload {
        CertificatePayload::Prec(p) => {
            let n = TernaryForm::new(p.n)?;
            let m = TernaryForm::new(p.m)?;
            let report = match &p.sigmas {
                SigmaSource::Sigmas(list) => {
                    let sigmas = list
                        .iter()
                        .map(|s| RationalIsometry::from_data(s, &n, &m))
                        .collect::<Result<Vec<_>>>()?;
                    check_prec_with_sigmas(&n, &m, p.d, p.a, &sigmas)?
                }
                SigmaSource::Search { cap } => check_prec_search(&n, &m, p.d, p.a, *cap)?,
            };
            ok = report.holds;
            lines.push(format!(
                "transfer d={} a={}: {} ({} of {} classes good, {} isometries)",
                p.d,
                p.a,
                if report.holds { "holds" } else { "FAILS" },
                report.good_classes,
                report.total_classes,
                report.sigmas_used
            ));
            for bad in report.bad_classes.iter().take(8) {
                lines.push(format!("  uncarried class {bad:?}"));
            }
        }
        CertificatePayload::Descent(d) => {
            let built = build_descent(d)?;
            let report = verify_descent_certificate(&built)?;
            ok = report.valid;
            lines.push(format!(
                "descent d={} a={}: {} (exceptional norms {:?})",
                d.d,
                d.a,
                if report.valid { "valid" } else { "INVALID" },
                report.exceptional_norms
            ));
            for v in report.violations.iter().take(8) {
                lines.push(format!("  violation: {v}"));
            }
            if report.valid {
                if let Some(bound) = d.gap_bound {
                    let gaps = descent_gap_check(&built, bound)?;
                    ok &= gaps.holds;
                    lines.push(format!(
                        "gap check to {bound}: {} ({} excluded values)",
                        if gaps.holds { "holds" } else { "FAILS" },
                        gaps.excluded_values.len()
                    ));
                }
            }
        }
        CertificatePayload::Quadruple(q) => {
            let quad = Quadruple::pentagonal(q.a, q.b, q.c)?;
            let report = verify_quadruple(quad, q.bound, q.mode)?;
            ok = report.universal_up_to_bound;
            lines.push(format!(
                "quadruple ({},{},{}) to {}: {} gaps, {} pipeline failures",
                q.a,
                q.b,
                q.c,
                q.bound,
                report.gaps.len(),
                report.failures.len()
            ));
        }
        CertificatePayload::Theorem31(t) => {
            let got = theorem31_exclusions(t.bound)?;
            let want = expected_theorem31_exclusions(t.bound);
            ok = got == want;
            lines.push(format!(
                "exclusion set to {}: {} ({} values)",
                t.bound,
                if ok { "matches 2·4^m, 5·4^n" } else { "MISMATCH" },
                got.len()
            ));
        }
        CertificatePayload::Genus(g) => {
            let form = TernaryForm::new(g.form)?;
            let genus = genus_classes(&form, &g.primes)?;
            lines.push(format!(
                "genus closure at {:?}: {} classes",
                g.primes,
                genus.class_number()
            ));
            if let Some(expected) = g.expected_class_number {
                ok = genus.class_number() == expected;
                if !ok {
                    lines.push(format!("  expected {expected} classes"));
                }
            }
        }
        CertificatePayload::Identity(list) => {
            for id in &list.identities {
                let holds = expand_identity(id)?;
                ok &= holds;
                lines.push(format!(
                    "identity {}: {}",
                    id.label,
                    if holds { "holds" } else { "FAILS" }
                ));
            }
        }
    }
    Ok(CertReport { ok, lines })
}
