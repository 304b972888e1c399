//! Command-line definitions and dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fusionweave::frame::{approx_dual_defect, is_dual, riesz_sequence_bounds, riesz_witness};
use fusionweave::perturbation::{
    lemma_commute_residual, modulus_sandwich, operator1_check, per1_conditions, Inclusion,
};
use fusionweave::random;
use fusionweave::weaving::transform_frame;
use fusionweave::{
    weaving_report, FrameBounds, FrameError, FusionFrame, Tolerance, Vector, WeavingMode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::claims;
use crate::document::{
    load_extras, load_frame, load_operator, load_subspace, FrameDocument, LoadError,
    OperatorDocument,
};
use crate::report;

/// Condition cap for randomly generated invertible operators.
const RANDOM_MAX_COND: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(
    name = "fusionweave",
    version,
    about = "Fusion frame, weaving and operator perturbation checks"
)]
pub struct Cli {
    /// A family counts as a frame when its lower bound exceeds this
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub epsilon: f64,

    /// Relative singular-value cutoff for rank decisions
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame verdict and optimal bounds
    Check { frame: PathBuf },
    /// Riesz sequence and Riesz basis verdicts with bounds
    Riesz { frame: PathBuf },
    /// Canonical duals, duality checks and defects
    Dual {
        frame: PathBuf,
        #[command(flatten)]
        action: DualAction,
        /// Write emitted frames here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Frame bounds of every weaving of the given frames
    Weave {
        #[arg(required = true)]
        frames: Vec<PathBuf>,
        /// Largest number of assignments to enumerate
        #[arg(long, default_value_t = fusionweave::weaving::DEFAULT_ENUM_CAP)]
        max_enum: u64,
        /// Evaluate this many seeded random assignments instead of all of them
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-assignment table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Operator perturbation checks
    Perturb {
        frame: PathBuf,
        /// Operator document
        #[arg(long)]
        op: PathBuf,
        /// apply | operator1 | modulus:<subspace> | lemma:<subspace> | per1
        #[arg(long, value_parser = parse_check)]
        check: CheckKind,
        /// Print the record as JSON
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the built-in worked examples, one line per claim
    Examples,
    /// Seeded random documents
    Random {
        #[arg(long = "type", value_enum)]
        kind: RandomKind,
        #[arg(long)]
        dim: usize,
        /// Members (frame) or blocks (riesz)
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DualAction {
    /// Emit the canonical dual
    #[arg(long)]
    canonical: bool,
    /// Check whether the other frame is a dual
    #[arg(long, value_name = "FRAME")]
    verify: Option<PathBuf>,
    /// Print ||I - psi|| for the other frame
    #[arg(long, value_name = "FRAME")]
    defect: Option<PathBuf>,
    /// Emit the canonical dual enlarged by the given extra directions
    #[arg(long, value_name = "EXTRAS")]
    enlarge: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckKind {
    Apply,
    Operator1,
    Modulus(PathBuf),
    Lemma(PathBuf),
    Per1,
}

fn parse_check(s: &str) -> Result<CheckKind, String> {
    match s.split_once(':') {
        None => match s {
            "apply" => Ok(CheckKind::Apply),
            "operator1" => Ok(CheckKind::Operator1),
            "per1" => Ok(CheckKind::Per1),
            _ => Err(format!("unknown check `{s}`")),
        },
        Some(("modulus", p)) if !p.is_empty() => Ok(CheckKind::Modulus(p.into())),
        Some(("lemma", p)) if !p.is_empty() => Ok(CheckKind::Lemma(p.into())),
        _ => Err(format!(
            "unknown check `{s}`, expected modulus:<file> or lemma:<file>"
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Frame,
    Riesz,
    Operator,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Frame(#[from] FrameError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

/// Verdict of a successful run; errors are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Positive
        } else {
            Outcome::Negative
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
        }
    }
}

/// Exit code for input errors.
pub const INPUT_ERROR: i32 = 2;

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn bounds_json(b: &FrameBounds) -> serde_json::Value {
    json!({ "lower": b.lower, "upper": b.upper })
}

fn emit<T: Serialize>(
    value: &T,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let tol = Tolerance::default()
        .with_frame_eps(cli.epsilon)?
        .with_rank_tol(cli.tol)?;
    match &cli.command {
        Command::Check { frame } => check(frame, &tol, out),
        Command::Riesz { frame } => riesz(frame, &tol, out),
        Command::Dual {
            frame,
            action,
            output,
        } => dual(frame, action, output.as_deref(), &tol, out),
        Command::Weave {
            frames,
            max_enum,
            sample,
            seed,
            csv,
        } => {
            let mode = match sample {
                Some(count) => WeavingMode::Sampled {
                    seed: *seed,
                    count: *count,
                },
                None => WeavingMode::Exhaustive { cap: *max_enum },
            };
            weave(frames, mode, csv.as_deref(), &tol, out)
        }
        Command::Perturb {
            frame,
            op,
            check,
            json,
        } => perturb(frame, op, check, *json, &tol, out),
        Command::Examples => examples(&tol, out),
        Command::Random {
            kind,
            dim,
            count,
            seed,
            output,
        } => random_document(*kind, *dim, *count, *seed, output.as_deref(), out),
    }
}

fn check(path: &Path, tol: &Tolerance, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let f = load_frame(path, tol)?;
    let (b, is_frame) = f.bounds(tol);
    writeln!(out, "members: {}", f.len())?;
    writeln!(out, "bounds: C = {:.10}, D = {:.10}", b.lower, b.upper)?;
    writeln!(out, "fusion frame: {}", yes(is_frame))?;
    Ok(Outcome::from_bool(is_frame))
}

fn fmt_vector(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn riesz(path: &Path, tol: &Tolerance, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let f = load_frame(path, tol)?;
    let subspaces = f.subspaces();
    let (b, is_sequence) = riesz_sequence_bounds(&subspaces, tol)?;
    let rank = f.span(tol).dim();
    let basis = f.is_riesz_basis(tol);
    writeln!(
        out,
        "Riesz bounds: A = {:.10}, B = {:.10}",
        b.lower, b.upper
    )?;
    writeln!(out, "Riesz sequence: {}", yes(is_sequence))?;
    writeln!(
        out,
        "complete: {} (span dimension {rank} of {})",
        yes(rank == f.ambient_dim()),
        f.ambient_dim()
    )?;
    writeln!(out, "Riesz basis: {}", yes(basis))?;
    if let Some(parts) = riesz_witness(&subspaces, tol)? {
        writeln!(out, "witness with vanishing sum:")?;
        for (i, p) in parts.iter().enumerate() {
            writeln!(out, "  f{} = {}", i + 1, fmt_vector(p))?;
        }
    }
    Ok(Outcome::from_bool(basis))
}

fn dual(
    path: &Path,
    action: &DualAction,
    output: Option<&Path>,
    tol: &Tolerance,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let f = load_frame(path, tol)?;
    if action.canonical {
        let d = f.canonical_dual(tol)?;
        emit(
            &FrameDocument::from_frame(&d, Some("canonical dual".into())),
            output,
            out,
        )?;
        return Ok(Outcome::Positive);
    }
    if let Some(other) = &action.verify {
        let v = load_frame(other, tol)?;
        let defect = approx_dual_defect(&f, &v, tol)?;
        let ok = is_dual(&f, &v, tol)?;
        writeln!(out, "defect: {defect:.6e}")?;
        writeln!(out, "dual: {}", yes(ok))?;
        return Ok(Outcome::from_bool(ok));
    }
    if let Some(other) = &action.defect {
        let v = load_frame(other, tol)?;
        let defect = approx_dual_defect(&f, &v, tol)?;
        writeln!(out, "defect: {defect:.6}")?;
        writeln!(out, "approximate dual: {}", yes(defect < 1.0))?;
        return Ok(Outcome::from_bool(defect < 1.0));
    }
    if let Some(extras) = &action.enlarge {
        let extra = load_extras(extras)?;
        let d = f.enlarge_canonical_dual(&extra, tol)?;
        emit(
            &FrameDocument::from_frame(&d, Some("enlarged canonical dual".into())),
            output,
            out,
        )?;
        return Ok(Outcome::Positive);
    }
    Err(CliError::Usage(
        "dual needs one of --canonical, --verify, --defect, --enlarge".into(),
    ))
}

fn weave(
    paths: &[PathBuf],
    mode: WeavingMode,
    csv_path: Option<&Path>,
    tol: &Tolerance,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let frames = paths
        .iter()
        .map(|p| load_frame(p, tol))
        .collect::<Result<Vec<FusionFrame>, _>>()?;
    let r = weaving_report(&frames, tol, mode)?;
    write!(out, "{}", report::render_text(&r))?;
    if let Some(p) = csv_path {
        report::write_csv(&r, fs::File::create(p)?)?;
    }
    Ok(Outcome::from_bool(r.woven))
}

fn perturb(
    frame: &Path,
    op: &Path,
    check: &CheckKind,
    as_json: bool,
    tol: &Tolerance,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let f = load_frame(frame, tol)?;
    let t = load_operator(op)?;
    let (value, lines, outcome) = match check {
        CheckKind::Apply => {
            let tf = transform_frame(&t, &f, tol)?;
            let (b, is_frame) = tf.bounds(tol);
            let value = json!({
                "frame": FrameDocument::from_frame(&tf, None),
                "bounds": bounds_json(&b),
                "is_frame": is_frame,
            });
            let lines = vec![
                format!("image bounds: C = {:.10}, D = {:.10}", b.lower, b.upper),
                format!("image is a fusion frame: {}", yes(is_frame)),
            ];
            (value, lines, is_frame)
        }
        CheckKind::Operator1 => {
            let r = operator1_check(&t, &f, tol)?;
            let value = json!({
                "left_bounds": bounds_json(&r.left_bounds),
                "left_is_frame": r.left_is_frame,
                "right_bounds": bounds_json(&r.right_bounds),
                "right_is_frame": r.right_is_frame,
                "right_range_bounds": bounds_json(&r.right_range_bounds),
                "right_is_frame_on_range": r.right_is_frame_on_range,
                "gamma": r.gamma,
                "norm": r.norm,
                "chain_ok": r.chain_ok,
                "equivalence_ok": r.equivalence_ok,
                "range_equivalence_ok": r.range_equivalence_ok,
            });
            let lines = vec![
                format!("gamma(T) = {:.10}, ||T|| = {:.10}", r.gamma, r.norm),
                format!(
                    "pulled-back family on R(T^T): ({:.10}, {:.10}), frame: {}",
                    r.left_bounds.lower,
                    r.left_bounds.upper,
                    yes(r.left_is_frame)
                ),
                format!(
                    "image family on the whole space: ({:.10}, {:.10}), frame: {}",
                    r.right_bounds.lower,
                    r.right_bounds.upper,
                    yes(r.right_is_frame)
                ),
                format!(
                    "image family on R(T): ({:.10}, {:.10}), frame: {}",
                    r.right_range_bounds.lower,
                    r.right_range_bounds.upper,
                    yes(r.right_is_frame_on_range)
                ),
                format!("inequality chain: {}", yes(r.chain_ok)),
                format!("verdicts agree (whole space): {}", yes(r.equivalence_ok)),
                format!(
                    "verdicts agree (range of T): {}",
                    yes(r.range_equivalence_ok)
                ),
            ];
            (value, lines, r.chain_ok)
        }
        CheckKind::Modulus(p) => {
            let v = load_subspace(p, tol)?;
            let s = modulus_sandwich(&t, &v, tol)?;
            let value =
                json!({ "c": s.c, "lhs": s.lhs, "mid": s.mid, "rhs": s.rhs, "holds": s.holds });
            let lines = vec![
                format!("c(N(T), V) = {:.10}", s.c),
                format!(
                    "{:.10} <= gamma(T P_V) = {:.10} <= {:.10}",
                    s.lhs, s.mid, s.rhs
                ),
                format!("holds: {}", yes(s.holds)),
            ];
            (value, lines, s.holds)
        }
        CheckKind::Lemma(p) => {
            let v = load_subspace(p, tol)?;
            let residual = lemma_commute_residual(&t, &v, tol)?;
            let ok = residual <= tol.orth_tol;
            let value = json!({ "residual": residual, "holds": ok });
            let lines = vec![
                format!("||P_V T^T - P_V T^T P_TV|| = {residual:.3e}"),
                format!("holds: {}", yes(ok)),
            ];
            (value, lines, ok)
        }
        CheckKind::Per1 => {
            let v = per1_conditions(&t, &f, tol)?;
            let pattern: Vec<&str> = v
                .witnesses
                .inclusion_pattern
                .iter()
                .map(|p| match p {
                    Inclusion::Both => "equal",
                    Inclusion::Forward => "W in TW",
                    Inclusion::Backward => "TW in W",
                    Inclusion::Neither => "neither",
                })
                .collect();
            let commutator = v.witnesses.commutator.as_ref().map(|c| {
                json!({
                    "holds": c.holds,
                    "min_eigenvalue": c.min_eigenvalue,
                    "worst_sigma": c.worst_sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "subsets_tested": c.subsets_tested,
                    "exhaustive": c.exhaustive,
                })
            });
            let value = json!({
                "cond_i": v.cond_i,
                "cond_ii": v.cond_ii,
                "cond_iii": v.cond_iii,
                "woven": v.woven_verdict,
                "universal_bounds": { "lower": v.woven_report.universal_lower, "upper": v.woven_report.universal_upper },
                "inclusion_pattern": pattern,
                "gram_inclusions": v.witnesses.gram_inclusions,
                "perturbation_norm": v.witnesses.perturbation_norm,
                "bound_ratio": v.witnesses.bound_ratio,
                "unitary_residual": v.witnesses.unitary_residual,
                "commutator": commutator,
            });
            let cond_iii = match v.cond_iii {
                Some(b) => yes(b).to_string(),
                None => format!(
                    "not applicable (||T^T T - I|| = {:.3e})",
                    v.witnesses.unitary_residual
                ),
            };
            let lines = vec![
                format!("inclusions: {}", pattern.join(", ")),
                format!(
                    "(i) one inclusion direction for every index: {}",
                    yes(v.cond_i)
                ),
                format!(
                    "(ii) W_i in T^T T W_i and ||I - T^-1|| = {:.6} < C/D = {:.6}: {}",
                    v.witnesses.perturbation_norm,
                    v.witnesses.bound_ratio,
                    yes(v.cond_ii)
                ),
                format!("(iii) commutators positive: {cond_iii}"),
                format!(
                    "W and TW woven: {} (C = {:.10}, D = {:.10})",
                    yes(v.woven_verdict),
                    v.woven_report.universal_lower,
                    v.woven_report.universal_upper
                ),
            ];
            (value, lines, v.woven_verdict)
        }
    };
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        for l in lines {
            writeln!(out, "{l}")?;
        }
    }
    Ok(Outcome::from_bool(outcome))
}

fn examples(tol: &Tolerance, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let all = claims::all_claims(tol).map_err(|e| CliError::Usage(e.to_string()))?;
    for c in &all {
        writeln!(out, "{c}")?;
    }
    let passed = all.iter().filter(|c| c.passed).count();
    writeln!(out, "{passed}/{} claims reproduced", all.len())?;
    Ok(Outcome::from_bool(passed == all.len()))
}

fn random_document(
    kind: RandomKind,
    dim: usize,
    count: usize,
    seed: u64,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if dim == 0 {
        return Err(CliError::Usage("--dim must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::Frame => {
            if count == 0 {
                return Err(CliError::Usage("--count must be at least 1".into()));
            }
            let f = random::fusion_frame(dim, count, &mut rng);
            emit(
                &FrameDocument::from_frame(&f, Some(format!("random frame, seed {seed}"))),
                output,
                out,
            )?;
        }
        RandomKind::Riesz => {
            if count == 0 || count > dim {
                return Err(CliError::Usage(format!(
                    "--count must lie in 1..={dim} for a Riesz basis"
                )));
            }
            let (f, _, _) = random::riesz_basis(dim, count, RANDOM_MAX_COND, &mut rng);
            emit(
                &FrameDocument::from_frame(&f, Some(format!("random Riesz basis, seed {seed}"))),
                output,
                out,
            )?;
        }
        RandomKind::Operator => {
            let t = random::invertible(dim, RANDOM_MAX_COND, &mut rng);
            emit(&OperatorDocument::from_matrix(&t), output, out)?;
        }
    }
    Ok(Outcome::Positive)
}
