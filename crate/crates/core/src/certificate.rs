//! Serializable strong blocking set certificates and their re-verification.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::geometry::ProjPoint;
use crate::sbs::{check_avoidance, certify_points, union_points, LineSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

impl From<bool> for CheckStatus {
    fn from(ok: bool) -> CheckStatus {
        if ok {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub k: usize,
    pub q: u32,
    pub field: FieldSpec,
}

impl Ambient {
    pub fn new(field: &Field, k: usize) -> Ambient {
        Ambient {
            k,
            q: field.q(),
            field: field.spec().clone(),
        }
    }

    pub fn field(&self) -> Result<Field> {
        let field = Field::from_spec(self.field.clone())?;
        if field.q() != self.q {
            return Err(Error::Inconsistent(format!("q = {} but the field has order {}", self.q, field.q())));
        }
        Ok(field)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRecord {
    pub points: Vec<Vec<Elem>>,
    /// Graph edges (or source indices) that produced the line.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    None,
    Exact {
        value: usize,
        witness_set: Vec<usize>,
        kappa: usize,
        required: usize,
    },
    Spectral {
        n: usize,
        d: usize,
        lambda: f64,
        bound: usize,
        required: usize,
    },
    Baseline {
        name: String,
    },
    Derived {
        /// Number of derivation steps from the source.
        steps: usize,
        source_hash: String,
        /// Avoidance status of each intermediate line set, source first.
        intermediate_avoidance: Vec<CheckStatus>,
        /// Strong blocking status of each intermediate union.
        intermediate_strong: Vec<CheckStatus>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub avoidance: CheckStatus,
    pub strong: CheckStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    /// Basis of a codimension-2 subspace meeting every line.
    pub avoidance: Option<Vec<Vec<Elem>>>,
    /// Dual coordinates of a badly covered hyperplane.
    pub strong: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeAccounting {
    pub points: usize,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    /// Construction-specific upper bound on `points`.
    pub line_bound: Option<usize>,
    /// `(q + 1)(k - 1)`.
    pub lower_bound: usize,
}

impl SizeAccounting {
    pub fn new(points: usize, q: u32, k: usize) -> SizeAccounting {
        SizeAccounting {
            points,
            vertices: None,
            edges: None,
            line_bound: None,
            lower_bound: (q as usize + 1) * k.saturating_sub(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbsCertificate {
    pub ambient: Ambient,
    pub construction: String,
    pub points: Vec<Vec<Elem>>,
    pub lines: Vec<LineRecord>,
    pub evidence: Evidence,
    pub checks: Checks,
    pub witnesses: Witnesses,
    pub size: SizeAccounting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_hash: Option<String>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl SbsCertificate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ambient: Ambient,
        construction: &str,
        points: &[ProjPoint],
        lines: Vec<LineRecord>,
        evidence: Evidence,
        checks: Checks,
        witnesses: Witnesses,
        size: SizeAccounting,
    ) -> SbsCertificate {
        SbsCertificate {
            ambient,
            construction: construction.into(),
            points: points.iter().map(|p| p.coords().to_vec()).collect(),
            lines,
            evidence,
            checks,
            witnesses,
            size,
            source_hash: None,
            metadata: BTreeMap::new(),
        }
    }

    /// Hex SHA-256 of the compact JSON form.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("certificate serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<SbsCertificate> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Whether the strong blocking property was established.
    pub fn verified(&self) -> bool {
        self.checks.strong == CheckStatus::Passed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub recorded: Checks,
    pub recomputed: Checks,
    pub issues: Vec<String>,
}

impl VerifyReport {
    pub fn consistent(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Re-checks a stored certificate from scratch: point canonicity, line
/// structure, the union of lines, size accounting, and both properties.
pub fn verify_certificate(cert: &SbsCertificate, caps: &Caps) -> Result<VerifyReport> {
    let field = cert.ambient.field()?;
    let k = cert.ambient.k;
    let mut issues = Vec::new();
    let points = cert
        .points
        .iter()
        .map(|c| {
            if c.len() != k {
                return Err(Error::DimensionMismatch(format!("point {c:?} is not in dimension {k}")));
            }
            let p = ProjPoint::new(&field, c.clone())?;
            if p.coords() != c.as_slice() {
                return Err(Error::Parse(format!("point {c:?} is not normalized")));
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<&ProjPoint> = points.iter().collect();
    if distinct.len() != points.len() {
        issues.push("repeated points".to_string());
    }
    if cert.size.points != points.len() {
        issues.push(format!("size says {} points, found {}", cert.size.points, points.len()));
    }
    if let Some(bound) = cert.size.line_bound {
        if points.len() > bound {
            issues.push(format!("{} points exceed the recorded bound {bound}", points.len()));
        }
    }
    let lower = (field.q() as usize + 1) * k.saturating_sub(1);
    if cert.size.lower_bound != lower {
        issues.push(format!("lower bound recorded as {}, should be {lower}", cert.size.lower_bound));
    }

    let recomputed = if cert.lines.is_empty() {
        let (strong, _) = certify_points(&field, k, &points, caps)?;
        Checks {
            avoidance: CheckStatus::Skipped,
            strong,
        }
    } else {
        let lines = LineSet::from_records(&field, k, &cert.lines)?;
        if lines.len() != cert.lines.len() {
            issues.push("repeated lines".to_string());
        }
        let union = union_points(&lines);
        if union != points {
            issues.push("points are not the union of the lines".to_string());
        }
        // the recorded points are what the certificate claims; lines are
        // checked separately so a tampered file is reported, not an error
        let avoidance = match check_avoidance(&lines, caps.codim2) {
            Ok(a) => CheckStatus::from(a.holds),
            Err(Error::SpaceTooLarge { .. }) => CheckStatus::Skipped,
            Err(e) => return Err(e),
        };
        let strong = match certify_points(&field, k, &points, caps) {
            Ok((s, _)) => s,
            Err(Error::Inconsistent(msg)) => {
                issues.push(msg);
                CheckStatus::Failed
            }
            Err(e) => return Err(e),
        };
        if avoidance == CheckStatus::Passed && strong == CheckStatus::Failed && union == points {
            return Err(Error::Inconsistent(
                "line set has the avoidance property but its union is not a strong blocking set".into(),
            ));
        }
        Checks { avoidance, strong }
    };
    for (name, rec, now) in [
        ("avoidance", cert.checks.avoidance, recomputed.avoidance),
        ("strong", cert.checks.strong, recomputed.strong),
    ] {
        let agrees = match (rec, now) {
            (CheckStatus::Skipped, _) | (_, CheckStatus::Skipped) => true,
            (a, b) => a == b,
        };
        if !agrees {
            issues.push(format!("{name}: recorded {rec:?}, recomputed {now:?}"));
        }
    }
    Ok(VerifyReport {
        recorded: cert.checks,
        recomputed,
        issues,
    })
}
