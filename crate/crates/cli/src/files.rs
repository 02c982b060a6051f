//! Commands that read a JSON input file: `wick` and `inclexcl`.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use polarization::inclexcl::{
    complement_intersection_count, inclusion_exclusion, verify_indicator_identity, SetSystem, SetSystemJson,
};
use polarization::wick::{isserlis, monte_carlo_estimate, Covariance, CovarianceJson};
use polarization::{Field, FieldDescriptor, Rational, Scalar};

use crate::{with_field, CliError, Outcome};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WickReport {
    pub indices: Vec<usize>,
    pub exact: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<McReport>,
}

fn covariance_field(json: &CovarianceJson) -> FieldDescriptor {
    json.rows.iter().flatten().next().map(Scalar::field).unwrap_or(FieldDescriptor::Rational)
}

fn exact_moment<F: Field>(json: &CovarianceJson, indices: &[usize]) -> Result<Scalar, CliError> {
    let cov = Covariance::<F>::from_json(json)?;
    Ok(isserlis(&cov, indices)?.to_scalar())
}

pub fn wick(json: &CovarianceJson, indices: &[usize], mc: Option<usize>, seed: u64) -> Result<WickReport, CliError> {
    let field = covariance_field(json);
    let exact = with_field!(field, F => exact_moment::<F>(json, indices))?;
    let monte_carlo = match mc {
        None => None,
        Some(samples) => {
            if field != FieldDescriptor::Rational {
                return Err(CliError::Capability(format!("Monte Carlo needs a rational covariance, got {field}")));
            }
            let cov = Covariance::<Rational>::from_json(json)?;
            let est = monte_carlo_estimate(&cov, indices, samples, seed)?;
            let exact_f = exact.as_f64().expect("rational converts");
            Some(McReport { samples, seed, estimate: est.mean, stderr: est.stderr, z: est.z_score(exact_f) })
        }
    };
    Ok(WickReport { indices: indices.to_vec(), exact, monte_carlo })
}

pub fn cmd_wick(path: &Path, indices: &[usize], mc: Option<usize>, seed: u64, json: bool) -> Result<Outcome, CliError> {
    let cov: CovarianceJson = read_json(path)?;
    let report = wick(&cov, indices, mc, seed)?;
    if json {
        return Ok(Outcome::ok(crate::to_json(&report)));
    }
    let mut out = format!("{}\n", report.exact);
    if let Some(m) = &report.monte_carlo {
        let _ = writeln!(out, "master seed: {}", m.seed);
        let _ = writeln!(out, "samples: {}", m.samples);
        let _ = writeln!(out, "estimate: {:.6}", m.estimate);
        let _ = writeln!(out, "stderr: {:.6}", m.stderr);
        let _ = writeln!(out, "|exact - estimate| / stderr: {:.3}", m.z);
    }
    Ok(Outcome::ok(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclExclReport {
    pub direct: i64,
    pub alternating: i64,
    pub pointwise: bool,
    pub agree: bool,
}

pub fn inclexcl(json: &SetSystemJson) -> Result<InclExclReport, CliError> {
    let s = SetSystem::from_json(json)?;
    let direct = complement_intersection_count(&s);
    let alternating = inclusion_exclusion(&s);
    let pointwise = verify_indicator_identity(&s);
    Ok(InclExclReport { direct, alternating, pointwise, agree: pointwise && direct == alternating })
}

pub fn cmd_inclexcl(path: &Path, json: bool) -> Result<Outcome, CliError> {
    let sets: SetSystemJson = read_json(path)?;
    let report = inclexcl(&sets)?;
    let stdout = if json {
        crate::to_json(&report)
    } else {
        format!(
            "direct count: {}\nalternating sum: {}\npointwise indicator identity: {}\nverdict: {}\n",
            report.direct,
            report.alternating,
            if report.pointwise { "holds" } else { "fails" },
            if report.agree { "agree" } else { "DISAGREE" }
        )
    };
    let mut outcome = Outcome::ok(stdout);
    if !report.agree {
        outcome.code = 1;
        outcome.stderr = format!("reproducer:\n{}", crate::to_json(&sets));
    }
    Ok(outcome)
}
