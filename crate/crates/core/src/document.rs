//! The declarative input document: one JSON file drives every command.
//!
//! Polynomials are arrays of `[re, im]` coefficient pairs, lowest
//! degree first. A `kind` discriminator selects between plain metric
//! data and the four surface representations.

use crate::cplx::{CplxError, Polynomial, RationalMap};
use crate::domain::{Domain, DomainError};
use crate::metric::{MetricError, WeierstrassData};
use crate::surfaces::{FrontData, FrontInputs, FrontKind};
use crate::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("document parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("document i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("exponent m = {0} is not an integer; set allow_real_exponent to opt in")]
    NonIntegerExponent(f64),
    #[error("this command needs a '{expected}' document, got '{got}'")]
    WrongKind { expected: String, got: String },
    #[error(transparent)]
    Cplx(#[from] CplxError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalMapDoc {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalMapDoc {
    pub fn build(&self) -> Result<RationalMap, CplxError> {
        RationalMap::new(self.num.clone(), self.den.clone())
    }

    pub fn of(map: &RationalMap) -> RationalMapDoc {
        RationalMapDoc {
            num: map.num().clone(),
            den: map.den().clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDoc {
    PuncturedPlane {
        #[serde(default)]
        punctures: Vec<[f64; 2]>,
        #[serde(default)]
        outer_cutoff: Option<f64>,
    },
    Disk {
        radius: f64,
        #[serde(default)]
        punctures: Vec<[f64; 2]>,
    },
}

impl DomainDoc {
    pub fn build(&self) -> Result<Domain, DomainError> {
        let to_points = |pairs: &[[f64; 2]]| {
            pairs
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect::<Vec<_>>()
        };
        match self {
            DomainDoc::PuncturedPlane {
                punctures,
                outer_cutoff,
            } => match outer_cutoff {
                Some(cutoff) => Domain::punctured_plane(to_points(punctures), *cutoff),
                None => Domain::punctured_plane_auto(to_points(punctures)),
            },
            DomainDoc::Disk { radius, punctures } => Domain::disk(*radius, to_points(punctures)),
        }
    }
}

fn default_base_point() -> [f64; 2] {
    [0.0, 0.0]
}

/// The input document. `weierstrass` documents drive the metric and
/// verification commands; the four front kinds drive the builders.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDocument {
    Weierstrass {
        m: f64,
        #[serde(default)]
        allow_real_exponent: bool,
        g: RationalMapDoc,
        omega: RationalMapDoc,
        domain: DomainDoc,
    },
    Minimal {
        g: RationalMapDoc,
        omega: RationalMapDoc,
        domain: DomainDoc,
        #[serde(default = "default_base_point")]
        base_point: [f64; 2],
    },
    Maxface {
        g: RationalMapDoc,
        omega: RationalMapDoc,
        domain: DomainDoc,
        #[serde(default = "default_base_point")]
        base_point: [f64; 2],
    },
    Affine {
        df: RationalMapDoc,
        dg: RationalMapDoc,
        domain: DomainDoc,
        #[serde(default = "default_base_point")]
        base_point: [f64; 2],
    },
    FlatFront {
        omega: RationalMapDoc,
        theta: RationalMapDoc,
        domain: DomainDoc,
        #[serde(default = "default_base_point")]
        base_point: [f64; 2],
    },
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<InputDocument, DocumentError> {
        Ok(Self::parse(&std::fs::read_to_string(path)?)?)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            InputDocument::Weierstrass { .. } => "weierstrass",
            InputDocument::Minimal { .. } => "minimal",
            InputDocument::Maxface { .. } => "maxface",
            InputDocument::Affine { .. } => "affine",
            InputDocument::FlatFront { .. } => "flat_front",
        }
    }

    /// Metric data for the curvature and verification commands.
    pub fn to_weierstrass(&self) -> Result<WeierstrassData, DocumentError> {
        let InputDocument::Weierstrass {
            m,
            allow_real_exponent,
            g,
            omega,
            domain,
        } = self
        else {
            return Err(DocumentError::WrongKind {
                expected: "weierstrass".into(),
                got: self.kind_name().into(),
            });
        };
        let gauss = g.build()?;
        let omega = omega.build()?;
        let domain = domain.build()?;
        if m.fract() == 0.0 && *m >= 0.0 {
            Ok(WeierstrassData::new(gauss, omega, *m as u32, domain)?)
        } else if *allow_real_exponent {
            Ok(WeierstrassData::with_real_exponent(
                gauss, omega, *m, domain,
            )?)
        } else {
            Err(DocumentError::NonIntegerExponent(*m))
        }
    }

    /// Builder inputs for the four surface kinds.
    pub fn to_front(&self) -> Result<FrontData, DocumentError> {
        let (inputs, domain, base_point) = match self {
            InputDocument::Weierstrass { .. } => {
                return Err(DocumentError::WrongKind {
                    expected: "minimal|maxface|affine|flat_front".into(),
                    got: "weierstrass".into(),
                })
            }
            InputDocument::Minimal {
                g,
                omega,
                domain,
                base_point,
            } => (
                FrontInputs::Minimal {
                    gauss: g.build()?,
                    omega: omega.build()?,
                },
                domain,
                base_point,
            ),
            InputDocument::Maxface {
                g,
                omega,
                domain,
                base_point,
            } => (
                FrontInputs::Maxface {
                    gauss: g.build()?,
                    omega: omega.build()?,
                },
                domain,
                base_point,
            ),
            InputDocument::Affine {
                df,
                dg,
                domain,
                base_point,
            } => (
                FrontInputs::Affine {
                    df: df.build()?,
                    dg: dg.build()?,
                },
                domain,
                base_point,
            ),
            InputDocument::FlatFront {
                omega,
                theta,
                domain,
                base_point,
            } => (
                FrontInputs::FlatFront {
                    omega: omega.build()?,
                    theta: theta.build()?,
                },
                domain,
                base_point,
            ),
        };
        Ok(FrontData {
            inputs,
            base_point: Complex64::new(base_point[0], base_point[1]),
            domain: domain.build()?,
        })
    }

    pub fn front_kind(&self) -> Option<FrontKind> {
        match self {
            InputDocument::Weierstrass { .. } => None,
            InputDocument::Minimal { .. } => Some(FrontKind::Minimal),
            InputDocument::Maxface { .. } => Some(FrontKind::Maxface),
            InputDocument::Affine { .. } => Some(FrontKind::Affine),
            InputDocument::FlatFront { .. } => Some(FrontKind::FlatFront),
        }
    }
}
