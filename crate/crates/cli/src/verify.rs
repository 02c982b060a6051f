//! Randomized verification campaigns.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use polarization::polarize::{
    coefficient_extraction, mixed_partial_extraction, polarize_offset, polarize_operator, polarize_signed,
    polarize_subset_sum, polarize_subset_sum_gray, recover, Method,
};
use polarization::sampling::{self, derive_seed, random_vector, random_vectors};
use polarization::scalar::factorial;
use polarization::symtensor::{random_symmetric, RandomConfig, TensorDiagonal, TensorJson};
use polarization::{Error, Field, FieldDescriptor, Scalar, SymMultiMap, Vector};

use crate::{with_field, CliError, Outcome};

pub const MAX_VERIFY_ORDER: usize = 10;
pub const MAX_VERIFY_DIM: usize = 6;
pub const MAX_TRIALS: u64 = 1_000_000;
/// Numerator and denominator bound for random rational data.
const SAMPLE_BOUND: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Operator,
    Subset,
    Gray,
    Offset,
    Signed,
    Coefficient,
    Derivative,
    Recover,
}

impl EngineKind {
    /// Everything except `recover`, which divides by `n!` and so is not
    /// available in every field.
    pub const DEFAULT: &'static [EngineKind] = &[
        EngineKind::Operator,
        EngineKind::Subset,
        EngineKind::Gray,
        EngineKind::Offset,
        EngineKind::Signed,
        EngineKind::Coefficient,
        EngineKind::Derivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Operator => "operator",
            EngineKind::Subset => "subset",
            EngineKind::Gray => "gray",
            EngineKind::Offset => "offset",
            EngineKind::Signed => "signed",
            EngineKind::Coefficient => "coefficient",
            EngineKind::Derivative => "derivative",
            EngineKind::Recover => "recover",
        }
    }

    /// The engine as a function returning `n! u(x_1, ..., x_n)`.
    pub fn function<F: Field>(self) -> EngineFn<F> {
        match self {
            EngineKind::Operator => |i| polarize_operator(&i.diag, &i.xs),
            EngineKind::Subset => |i| polarize_subset_sum(&i.diag, &i.xs),
            EngineKind::Gray => |i| polarize_subset_sum_gray(&i.diag, &i.xs),
            EngineKind::Offset => |i| polarize_offset(&i.diag, &i.xs, &i.x0),
            EngineKind::Signed => |i| {
                let scale = F::from_u64(2).inverse()?.pow(i.xs.len() as u32);
                Ok(polarize_signed(&i.diag, &i.xs)? * scale)
            },
            EngineKind::Coefficient => |i| coefficient_extraction(&i.u, &i.xs),
            EngineKind::Derivative => |i| mixed_partial_extraction(&i.u, &i.xs),
            EngineKind::Recover => {
                |i| Ok(recover(&i.diag, &i.xs, &Method::Subset)? * factorial::<F>(i.xs.len()))
            }
        }
    }

    /// Refuses engines the field cannot support at order `n`.
    pub fn check_field<F: Field>(self, n: usize) -> Result<(), Error> {
        let p = F::characteristic();
        match self {
            EngineKind::Signed if p == 2 => Err(Error::CharacteristicTwo),
            EngineKind::Recover if p != 0 && p as u128 <= n as u128 => {
                Err(Error::CharacteristicDividesFactorial { n, characteristic: p })
            }
            _ => Ok(()),
        }
    }
}

/// One random problem: a tensor, its diagonal, arguments and an offset.
pub struct Instance<F: Field> {
    pub u: SymMultiMap<F>,
    pub diag: TensorDiagonal<F>,
    pub xs: Vec<Vector<F>>,
    pub x0: Vector<F>,
}

impl<F: Field> Instance<F> {
    /// Deterministic in `seed`: the tensor seed and then the vectors come
    /// from one SplitMix64 stream.
    pub fn generate(n: usize, d: usize, seed: u64) -> Self {
        let mut rng = sampling::rng(seed);
        let tensor_seed = rand::RngCore::next_u64(&mut rng);
        let u = random_symmetric::<F>(n, d, tensor_seed, RandomConfig { bound: SAMPLE_BOUND, density: 1.0 });
        let xs = random_vectors::<F, _>(&mut rng, n, d, SAMPLE_BOUND);
        let x0 = random_vector::<F, _>(&mut rng, d, SAMPLE_BOUND);
        let diag = u.diagonal();
        Instance { u, diag, xs, x0 }
    }
}

pub type EngineFn<F> = fn(&Instance<F>) -> polarization::Result<F>;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub field: FieldDescriptor,
    pub engines: Vec<EngineKind>,
    pub seed: u64,
    /// Echo of the invoking command line.
    pub command: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    pub seed: u64,
    pub engines: Vec<String>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineTiming {
    pub engine: String,
    pub total_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineValue {
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Everything needed to rebuild a failing trial without the generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproducer {
    pub trial: u64,
    pub seed: u64,
    pub tensor: TensorJson,
    pub vectors: Vec<Vec<Scalar>>,
    pub offset: Vec<Scalar>,
    /// `n! u(x_1, ..., x_n)` from direct evaluation.
    pub expected: Scalar,
    pub values: Vec<EngineValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub master_seed: u64,
    pub field: FieldDescriptor,
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub engines: Vec<String>,
    pub all_agree: bool,
    pub timing: Vec<EngineTiming>,
    pub results: Vec<TrialResult>,
    pub failure: Option<Reproducer>,
}

struct TrialRecord {
    result: TrialResult,
    nanos: Vec<u64>,
    failure: Option<Reproducer>,
}

fn run_trial<F: Field>(cfg: &VerifyConfig, engines: &[(&str, EngineFn<F>)], trial: u64) -> TrialRecord {
    let seed = derive_seed(cfg.seed, trial);
    let inst = Instance::<F>::generate(cfg.n, cfg.d, seed);
    let expected = inst.u.eval_direct(&inst.xs).expect("generated arity matches") * factorial::<F>(cfg.n);
    let mut nanos = Vec::with_capacity(engines.len());
    let mut values = Vec::with_capacity(engines.len());
    for (_, run) in engines {
        let start = Instant::now();
        let value = run(&inst);
        nanos.push(start.elapsed().as_nanos() as u64);
        values.push(value);
    }
    let agree = values.iter().all(|v| v.as_ref() == Ok(&expected));
    let failure = (!agree).then(|| Reproducer {
        trial,
        seed,
        tensor: inst.u.to_json(),
        vectors: inst.xs.iter().map(Vector::to_scalars).collect(),
        offset: inst.x0.to_scalars(),
        expected: expected.to_scalar(),
        values: engines
            .iter()
            .zip(&values)
            .map(|((name, _), v)| EngineValue {
                engine: name.to_string(),
                value: v.as_ref().ok().map(Field::to_scalar),
                error: v.as_ref().err().map(ToString::to_string),
            })
            .collect(),
    });
    TrialRecord {
        result: TrialResult { trial, seed, engines: engines.iter().map(|(n, _)| n.to_string()).collect(), agree },
        nanos,
        failure,
    }
}

pub fn validate(cfg: &VerifyConfig) -> Result<(), CliError> {
    if cfg.n == 0 || cfg.n > MAX_VERIFY_ORDER {
        return Err(CliError::Usage(format!("verify needs 1 <= n <= {MAX_VERIFY_ORDER}, got {}", cfg.n)));
    }
    if cfg.d == 0 || cfg.d > MAX_VERIFY_DIM {
        return Err(CliError::Usage(format!("verify needs 1 <= d <= {MAX_VERIFY_DIM}, got {}", cfg.d)));
    }
    if cfg.trials > MAX_TRIALS {
        return Err(CliError::Usage(format!("at most {MAX_TRIALS} trials, got {}", cfg.trials)));
    }
    if cfg.engines.is_empty() {
        return Err(CliError::Usage("no engines selected".into()));
    }
    Ok(())
}

/// Runs a campaign over field `F` with an explicit engine table. Trials run
/// in parallel, each from its own derived seed; the report keeps trial order.
pub fn campaign_with<F: Field>(cfg: &VerifyConfig, engines: &[(&str, EngineFn<F>)]) -> RunReport {
    let records: Vec<TrialRecord> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, engines, t)).collect();
    let mut totals = vec![0u64; engines.len()];
    for r in &records {
        for (acc, ns) in totals.iter_mut().zip(&r.nanos) {
            *acc += ns;
        }
    }
    let failure = records.iter().find_map(|r| r.failure.clone());
    RunReport {
        command: cfg.command.clone(),
        master_seed: cfg.seed,
        field: F::descriptor(),
        n: cfg.n,
        d: cfg.d,
        trials: cfg.trials,
        engines: engines.iter().map(|(n, _)| n.to_string()).collect(),
        all_agree: failure.is_none(),
        timing: engines
            .iter()
            .zip(totals)
            .map(|((name, _), total_ns)| EngineTiming { engine: name.to_string(), total_ns })
            .collect(),
        results: records.into_iter().map(|r| r.result).collect(),
        failure,
    }
}

pub fn campaign<F: Field>(cfg: &VerifyConfig) -> Result<RunReport, CliError> {
    validate(cfg)?;
    for e in &cfg.engines {
        e.check_field::<F>(cfg.n)?;
    }
    let engines: Vec<(&str, EngineFn<F>)> = cfg.engines.iter().map(|e| (e.name(), e.function::<F>())).collect();
    Ok(campaign_with(cfg, &engines))
}

pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "master seed: {}", report.master_seed);
    let _ = writeln!(out, "command: {}", report.command);
    let _ = writeln!(
        out,
        "field {}, n = {}, d = {}, trials = {}",
        report.field, report.n, report.d, report.trials
    );
    let _ = writeln!(out, "{:<12} {:>16} {:>14}", "engine", "total ns", "mean ns");
    for t in &report.timing {
        let mean = t.total_ns.checked_div(report.trials).unwrap_or(0);
        let _ = writeln!(out, "{:<12} {:>16} {:>14}", t.engine, t.total_ns, mean);
    }
    match &report.failure {
        None => {
            let _ = writeln!(out, "result: all {} trials agree with n! u(x1,...,xn)", report.trials);
        }
        Some(f) => {
            let disagreeing = report.results.iter().filter(|r| !r.agree).count();
            let _ = writeln!(
                out,
                "result: MISMATCH in {disagreeing} of {} trials; first is trial {} (seed {})",
                report.trials, f.trial, f.seed
            );
            let _ = writeln!(out, "reproducer:");
            out.push_str(&crate::to_json(f));
        }
    }
    out
}

pub fn cmd_verify(cfg: &VerifyConfig, json: bool) -> Result<Outcome, CliError> {
    let report = with_field!(cfg.field, F => campaign::<F>(cfg))?;
    let stdout = if json { crate::to_json(&report) } else { render_text(&report) };
    Ok(Outcome { stdout, stderr: String::new(), code: if report.all_agree { 0 } else { 1 } })
}
