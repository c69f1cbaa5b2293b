//! JSON mirrors of verdicts, tangent cones, slice certificates, and witness
//! reports, plus the reverse direction: reconstructing a certificate from
//! its JSON so an emitted file can be revalidated on its own.
//!
//! Exact values are rendered as rational strings (`-3/5+1/2*i`), never as
//! floating point, so a round trip through JSON loses nothing a certificate
//! check depends on. Ball values appear only in informational fields and are
//! rendered as doubles with their radius.

use serde::{Deserialize, Serialize};

use crate::ball::NumValue;
use crate::cone::TangentCone;
use crate::curve::{Reason, Status, Verdict};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::puiseux::{Chart, PuiseuxBranch};
use crate::scalar::{render_rat, ExactScalar};
use crate::slicer::{ProjectionFrame, SliceCertificate};
use crate::witness::{ArcPair, Conclusion, WitnessReport};
use num_rational::BigRational;

pub const SCHEMA_VERSION: u32 = 1;

/// The JSON schema every envelope emitted by the command line satisfies.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/lne-output.schema.json");

/// Top-level output document. Exactly one of the payload fields is present,
/// matching the command.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Envelope {
    pub schema_version: u32,
    pub command: String,
    /// The input expression as received, or the certificate path for
    /// revalidation runs.
    pub input: String,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangent_cone: Option<ConeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revalidation: Option<RevalidationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
}

impl Envelope {
    pub fn new(command: &str, input: &str, precision: u32) -> Envelope {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input: input.to_string(),
            precision,
            seed: None,
            verdict: None,
            tangent_cone: None,
            branches: None,
            witness: None,
            revalidation: None,
            error: None,
        }
    }

    pub fn failure(command: &str, input: &str, precision: u32, err: &Error) -> Envelope {
        let mut env = Envelope::new(command, input, precision);
        env.error = Some(ErrorJson {
            kind: err.kind().to_string(),
            message: err.to_string(),
        });
        env
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ErrorJson {
    pub kind: String,
    pub message: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct VerdictJson {
    pub status: String,
    pub reason: ReasonJson,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReasonJson {
    Smooth,
    ReducedCone,
    NonReducedCone {
        witness: String,
    },
    SingularBranch {
        branch: usize,
    },
    TangentBranchPair {
        first: usize,
        second: usize,
        tangent: [NumberJson; 2],
    },
    MultipleConeComponent {
        witness: String,
    },
    SliceWitness {
        certificate: CertificateJson,
    },
    BrieskornExponents {
        sorted: Vec<u32>,
    },
    ExhaustedSearch {
        log: Vec<String>,
    },
}

/// One complex value: exact fields are rational strings with radius "0",
/// ball fields are decimal with a positive radius.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NumberJson {
    pub re: String,
    pub im: String,
    pub radius: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertificateJson {
    /// The germ the certificate is about, re-parseable with `variables`.
    pub germ: String,
    pub variables: Vec<String>,
    pub kernel_direction: Vec<String>,
    /// Coordinate change, row major, exact rational entries.
    pub matrix: Vec<Vec<String>>,
    pub generality_value: String,
    pub discriminant: String,
    pub line_direction: Vec<String>,
    pub admissibility_value: String,
    pub slice_polynomial: String,
    pub slice_verdict: Box<VerdictJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ConeJson {
    pub initial_form: String,
    pub degree: u32,
    pub reduced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repeated_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary_factors: Option<Vec<BinaryFactorJson>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BinaryFactorJson {
    pub direction: [NumberJson; 2],
    pub multiplicity: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BranchJson {
    pub chart: String,
    pub ramification_index: u32,
    pub conjugacy_size: u32,
    pub truncation_exponent: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TermJson {
    pub exponent: String,
    pub re: String,
    pub im: String,
    pub radius: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct WitnessJson {
    pub branch1: BranchJson,
    pub branch2: BranchJson,
    pub epsilon: f64,
    pub direction_w: String,
    pub separation_q: String,
    pub samples: Vec<SampleJson>,
    pub fitted_slope: f64,
    pub confidence_radius: f64,
    pub predicted_slope: String,
    pub conclusion: String,
    pub conical_lower_bound: f64,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SampleJson {
    pub t: f64,
    pub outer: f64,
    pub inner_lower: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_arclength: Option<f64>,
    pub ratio: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RevalidationJson {
    pub certificate: String,
    pub checks: Vec<String>,
    pub passed: bool,
}

fn number_json(v: &NumValue) -> NumberJson {
    match v {
        NumValue::Exact(s) => NumberJson {
            re: render_rat(s.re()),
            im: render_rat(s.im()),
            radius: "0".to_string(),
        },
        NumValue::Ball(b) => NumberJson {
            re: b.re().to_f64().to_string(),
            im: b.im().to_f64().to_string(),
            radius: b.rad().to_f64().to_string(),
        },
    }
}

fn status_string(status: Status) -> String {
    match status {
        Status::NE => "NE",
        Status::NonNE => "NonNE",
        Status::Inconclusive => "Inconclusive",
    }
    .to_string()
}

pub fn verdict_json(verdict: &Verdict, germ: &Polynomial) -> VerdictJson {
    let reason = match &verdict.reason {
        Reason::Smooth => ReasonJson::Smooth,
        Reason::ReducedCone => ReasonJson::ReducedCone,
        Reason::NonReducedCone { witness } => ReasonJson::NonReducedCone {
            witness: witness.to_string(),
        },
        Reason::SingularBranch { branch } => ReasonJson::SingularBranch { branch: *branch },
        Reason::TangentBranchPair {
            first,
            second,
            tangent,
        } => ReasonJson::TangentBranchPair {
            first: *first,
            second: *second,
            tangent: [number_json(&tangent.0), number_json(&tangent.1)],
        },
        Reason::MultipleConeComponent { witness } => ReasonJson::MultipleConeComponent {
            witness: witness.to_string(),
        },
        Reason::SliceWitness(cert) => ReasonJson::SliceWitness {
            certificate: certificate_json(cert, germ),
        },
        Reason::BrieskornExponents { sorted } => ReasonJson::BrieskornExponents {
            sorted: sorted.clone(),
        },
        Reason::ExhaustedSearch { log } => ReasonJson::ExhaustedSearch { log: log.clone() },
    };
    VerdictJson {
        status: status_string(verdict.status),
        reason,
        warnings: verdict.warnings.clone(),
    }
}

pub fn certificate_json(cert: &SliceCertificate, germ: &Polynomial) -> CertificateJson {
    let n = cert.frame.change_of_coordinates.size();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cert.frame.change_of_coordinates.entry(i, j).render())
                .collect()
        })
        .collect();
    CertificateJson {
        germ: germ.to_string(),
        variables: germ.vars().to_vec(),
        kernel_direction: cert
            .frame
            .kernel_direction
            .iter()
            .map(ExactScalar::render)
            .collect(),
        matrix,
        generality_value: cert.frame.generality_value.render(),
        discriminant: cert.discriminant.to_string(),
        line_direction: cert.line_direction.iter().map(ExactScalar::render).collect(),
        admissibility_value: cert.admissibility_value.render(),
        slice_polynomial: cert.slice_polynomial.to_string(),
        slice_verdict: Box::new(verdict_json(&cert.slice_verdict, &cert.slice_polynomial)),
    }
}

pub fn cone_json(cone: &TangentCone) -> ConeJson {
    ConeJson {
        initial_form: cone.initial_form.to_string(),
        degree: cone.degree(),
        reduced: cone.is_reduced(),
        repeated_factor: cone.repeated_factor.as_ref().map(|p| p.to_string()),
        binary_factors: cone.binary_factorization.as_ref().map(|factors| {
            factors
                .iter()
                .map(|f| BinaryFactorJson {
                    direction: [number_json(&f.direction.0), number_json(&f.direction.1)],
                    multiplicity: f.multiplicity,
                })
                .collect()
        }),
    }
}

pub fn branch_json(branch: &PuiseuxBranch) -> BranchJson {
    BranchJson {
        chart: match branch.chart {
            Chart::YOverX => "y-over-x",
            Chart::XOverY => "x-over-y",
        }
        .to_string(),
        ramification_index: branch.ramification_index,
        conjugacy_size: branch.conjugacy_size,
        truncation_exponent: render_rational(&branch.truncation_exponent),
        terms: branch
            .series
            .iter()
            .map(|(exp, coeff)| {
                let n = number_json(coeff);
                TermJson {
                    exponent: render_rational(exp),
                    re: n.re,
                    im: n.im,
                    radius: n.radius,
                }
            })
            .collect(),
    }
}

pub fn witness_json(pair: &ArcPair, report: &WitnessReport) -> WitnessJson {
    WitnessJson {
        branch1: branch_json(&pair.branch1),
        branch2: branch_json(&pair.branch2),
        epsilon: pair.epsilon,
        direction_w: pair.direction_w.render(),
        separation_q: render_rational(&pair.separation_q),
        samples: report
            .samples
            .iter()
            .map(|row| SampleJson {
                t: row.t,
                outer: row.outer,
                inner_lower: row.inner_lower,
                inner_arclength: row.inner_arclength,
                ratio: row.ratio,
            })
            .collect(),
        fitted_slope: report.fitted_slope,
        confidence_radius: report.confidence_radius,
        predicted_slope: render_rational(&report.predicted_slope),
        conclusion: match report.conclusion {
            Conclusion::RatioDiverges => "ratio-diverges",
            Conclusion::Bounded => "bounded",
            Conclusion::Inconclusive => "inconclusive",
        }
        .to_string(),
        conical_lower_bound: report.conical_lower_bound,
        warnings: report.warnings.clone(),
    }
}

fn render_rational(r: &BigRational) -> String {
    render_rat(r)
}

/// Parse an exact Gaussian rational rendered by [`ExactScalar::render`].
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let no_vars: Vec<String> = Vec::new();
    let p = parse_polynomial(text, Some(&no_vars))?;
    Ok(p.constant_term())
}

fn parse_status(text: &str) -> Result<Status> {
    match text {
        "NE" => Ok(Status::NE),
        "NonNE" => Ok(Status::NonNE),
        "Inconclusive" => Ok(Status::Inconclusive),
        other => Err(Error::structural(format!(
            "unknown verdict status {other:?}"
        ))),
    }
}

fn number_from_json(n: &NumberJson) -> Result<NumValue> {
    if n.radius != "0" {
        return Err(Error::unsupported(
            "ball-valued fields cannot be reconstructed from a report",
        ));
    }
    let re = parse_scalar(&n.re)?;
    let im = parse_scalar(&n.im)?;
    Ok(NumValue::Exact(ExactScalar::new(
        re.re().clone(),
        im.re().clone(),
    )))
}

/// Rebuild a plane-curve verdict from its JSON. Reasons that only appear on
/// higher-dimensional verdicts are refused.
pub fn verdict_from_json(json: &VerdictJson, vars: &[String]) -> Result<Verdict> {
    let reason = match &json.reason {
        ReasonJson::Smooth => Reason::Smooth,
        ReasonJson::ReducedCone => Reason::ReducedCone,
        ReasonJson::NonReducedCone { witness } => Reason::NonReducedCone {
            witness: parse_polynomial(witness, Some(vars))?,
        },
        ReasonJson::SingularBranch { branch } => Reason::SingularBranch { branch: *branch },
        ReasonJson::TangentBranchPair {
            first,
            second,
            tangent,
        } => Reason::TangentBranchPair {
            first: *first,
            second: *second,
            tangent: (number_from_json(&tangent[0])?, number_from_json(&tangent[1])?),
        },
        ReasonJson::MultipleConeComponent { witness } => Reason::MultipleConeComponent {
            witness: parse_polynomial(witness, Some(vars))?,
        },
        ReasonJson::BrieskornExponents { sorted } => Reason::BrieskornExponents {
            sorted: sorted.clone(),
        },
        ReasonJson::ExhaustedSearch { log } => Reason::ExhaustedSearch { log: log.clone() },
        ReasonJson::SliceWitness { .. } => {
            return Err(Error::unsupported(
                "nested slice certificates cannot be reconstructed here",
            ))
        }
    };
    Ok(Verdict {
        status: parse_status(&json.status)?,
        reason,
        warnings: json.warnings.clone(),
    })
}

/// Reconstruct the germ and the exact certificate from an emitted JSON
/// document; everything `slicer::revalidate` needs.
pub fn certificate_from_json(json: &CertificateJson) -> Result<(Polynomial, SliceCertificate)> {
    let n = json.variables.len();
    if n < 3 {
        return Err(Error::structural(
            "slice certificates require at least three variables",
        ));
    }
    let germ = parse_polynomial(&json.germ, Some(&json.variables))?;
    if json.matrix.len() != n || json.matrix.iter().any(|row| row.len() != n) {
        return Err(Error::structural(
            "certificate matrix is not square of the germ's dimension",
        ));
    }
    let rows = json
        .matrix
        .iter()
        .map(|row| row.iter().map(|e| parse_scalar(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let change_of_coordinates = Matrix::new(rows)?;
    let kernel_direction = json
        .kernel_direction
        .iter()
        .map(|e| parse_scalar(e))
        .collect::<Result<Vec<_>>>()?;
    let line_direction = json
        .line_direction
        .iter()
        .map(|e| parse_scalar(e))
        .collect::<Result<Vec<_>>>()?;
    let base_vars: Vec<String> = (1..n).map(|k| format!("s{k}")).collect();
    let discriminant = parse_polynomial(&json.discriminant, Some(&base_vars))?;
    let slice_vars = vec!["s".to_string(), "u".to_string()];
    let slice_polynomial = parse_polynomial(&json.slice_polynomial, Some(&slice_vars))?;
    let slice_verdict = verdict_from_json(&json.slice_verdict, &slice_vars)?;
    let certificate = SliceCertificate {
        frame: ProjectionFrame {
            kernel_direction,
            change_of_coordinates,
            generality_value: parse_scalar(&json.generality_value)?,
        },
        discriminant,
        line_direction,
        admissibility_value: parse_scalar(&json.admissibility_value)?,
        slice_polynomial,
        slice_verdict,
    };
    Ok((germ, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slicer::{revalidate, sectional_test, SearchConfig};

    fn p3(text: &str) -> Polynomial {
        let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        parse_polynomial(text, Some(&vars)).unwrap()
    }

    #[test]
    fn scalars_round_trip_through_their_rendering() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let cases = [
            ExactScalar::one(),
            -ExactScalar::one(),
            ExactScalar::i(),
            ExactScalar::new(r(-3, 5), r(4, 5)),
            ExactScalar::new(r(0, 1), r(-12, 13)),
            ExactScalar::new(r(22, 7), r(0, 1)),
        ];
        for s in cases {
            assert_eq!(parse_scalar(&s.render()).unwrap(), s, "case {}", s.render());
        }
    }

    #[test]
    fn certificates_survive_the_json_round_trip() {
        let germ = p3("x^2 + y^3 + z^3");
        let config = SearchConfig {
            use_cone_shortcut: false,
            ..SearchConfig::default()
        };
        let verdict = sectional_test(&germ, &config).unwrap();
        let cert = match verdict.reason {
            Reason::SliceWitness(cert) => *cert,
            other => panic!("expected a slice witness, got {other:?}"),
        };
        let json = certificate_json(&cert, &germ);
        let text = serde_json::to_string_pretty(&json).unwrap();
        let parsed: CertificateJson = serde_json::from_str(&text).unwrap();
        let (back_germ, back_cert) = certificate_from_json(&parsed).unwrap();
        assert_eq!(back_germ, germ);
        let checks = revalidate(&back_germ, &back_cert).unwrap();
        assert_eq!(checks.len(), 6);
    }

    #[test]
    fn tampered_json_certificates_fail_revalidation() {
        let germ = p3("x^2 + y^3 + z^3");
        let config = SearchConfig {
            use_cone_shortcut: false,
            ..SearchConfig::default()
        };
        let verdict = sectional_test(&germ, &config).unwrap();
        let cert = match verdict.reason {
            Reason::SliceWitness(cert) => *cert,
            other => panic!("expected a slice witness, got {other:?}"),
        };
        let mut json = certificate_json(&cert, &germ);
        json.admissibility_value = "7".to_string();
        let (g, c) = certificate_from_json(&json).unwrap();
        assert!(revalidate(&g, &c).is_err());
    }

    #[test]
    fn verdicts_serialize_with_kebab_case_kinds() {
        let germ = crate::parse::parse_polynomial("y^2 + x^4", None).unwrap();
        let verdict = crate::curve::plane_curve_ne(&germ).unwrap();
        let json = verdict_json(&verdict, &germ);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"status\":\"NonNE\""));
        assert!(text.contains("\"kind\":\"non-reduced-cone\""));
        assert!(text.contains("\"witness\":\"y\""));
        let back = verdict_from_json(&serde_json::from_str(&text).unwrap(), germ.vars()).unwrap();
        assert_eq!(back.status, Status::NonNE);
        match back.reason {
            Reason::NonReducedCone { witness } => {
                assert_eq!(witness, parse_polynomial("y", Some(germ.vars())).unwrap())
            }
            other => panic!("unexpected reason {other:?}"),
        }
    }

    #[test]
    fn witness_reports_serialize_and_envelope_round_trips() {
        let curve = crate::parse::parse_polynomial("y^2 - x^3", None).unwrap();
        let config = crate::witness::WitnessConfig::default();
        let pair = crate::witness::build_arc_pair(&curve, &config).unwrap();
        let report = crate::witness::report_for_pair(&curve, &pair, &config, Vec::new()).unwrap();
        let mut env = Envelope::new("witness", "y^2 - x^3", 128);
        env.witness = Some(witness_json(&pair, &report));
        let text = serde_json::to_string(&env).unwrap();
        let back: Envelope = serde_json::from_str(&text).unwrap();
        let w = back.witness.unwrap();
        assert_eq!(w.separation_q, "3/2");
        assert_eq!(w.predicted_slope, "-1/2");
        assert_eq!(w.conclusion, "ratio-diverges");
        assert_eq!(w.samples.len(), report.samples.len());
        assert_eq!(w.branch1.ramification_index, 2);
    }
}
