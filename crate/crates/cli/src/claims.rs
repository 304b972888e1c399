//! Built-in worked examples: the three-line Riesz basis woven with a
//! redundant family, and the approximate dual pair with its mixed operator.

use std::fmt;
use std::path::Path;

use fusionweave::frame::{mixed_frame_operator, riesz_sequence_bounds, riesz_witness};
use fusionweave::numeric::operator_norm;
use fusionweave::weaving::transform_frame;
use fusionweave::{weaving_report, FusionFrame, Matrix, Tolerance, Vector, WeavingMode};

use crate::document::{frame_from_str, operator_from_str, LoadError};

pub const REMARK_W: &str = include_str!("../data/remark_W.json");
pub const REMARK_V: &str = include_str!("../data/remark_V.json");
pub const EXAMPLE_W: &str = include_str!("../data/example_W.json");
pub const EXAMPLE_V: &str = include_str!("../data/example_V.json");
pub const PSI_INVERSE: &str = include_str!("../data/psi_inverse.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// The value is printed in the published example.
    Published,
    /// The value is recomputed here from the definitions.
    Recomputed,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Published => f.write_str("published example"),
            Source::Recomputed => f.write_str("independent recomputation"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub name: &'static str,
    pub source: Source,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        write!(
            f,
            "{mark}  {}  [{}]  {}",
            self.name, self.source, self.detail
        )
    }
}

fn claim(name: &'static str, source: Source, passed: bool, detail: String) -> Claim {
    Claim {
        name,
        source,
        passed,
        detail,
    }
}

fn builtin_frame(text: &str, name: &str, tol: &Tolerance) -> Result<FusionFrame, LoadError> {
    frame_from_str(text, Path::new(name), tol)
}

pub fn remark_pair(tol: &Tolerance) -> Result<(FusionFrame, FusionFrame), LoadError> {
    Ok((
        builtin_frame(REMARK_W, "remark_W.json", tol)?,
        builtin_frame(REMARK_V, "remark_V.json", tol)?,
    ))
}

pub fn example_pair(tol: &Tolerance) -> Result<(FusionFrame, FusionFrame), LoadError> {
    Ok((
        builtin_frame(EXAMPLE_W, "example_W.json", tol)?,
        builtin_frame(EXAMPLE_V, "example_V.json", tol)?,
    ))
}

pub fn displayed_psi_inverse() -> Result<Matrix, LoadError> {
    operator_from_str(PSI_INVERSE, Path::new("psi_inverse.json"))
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn remark_claims(tol: &Tolerance) -> Result<Vec<Claim>, Box<dyn std::error::Error>> {
    let (w, v) = remark_pair(tol)?;
    let report = weaving_report(&[w.clone(), v.clone()], tol, WeavingMode::default())?;
    let mut out = vec![
        claim(
            "remark: W is a fusion Riesz basis",
            Source::Published,
            w.is_riesz_basis(tol),
            String::new(),
        ),
        claim(
            "remark: every weaving of W and V is a fusion frame",
            Source::Published,
            report.woven && report.enumerated == 8,
            format!("{} weavings, woven = {}", report.enumerated, report.woven),
        ),
        claim(
            "remark: universal bounds are (1, 2)",
            Source::Recomputed,
            (report.universal_lower - 1.0).abs() <= 1e-10
                && (report.universal_upper - 2.0).abs() <= 1e-10,
            format!(
                "C = {:.12}, D = {:.12}",
                report.universal_lower, report.universal_upper
            ),
        ),
        claim(
            "remark: V is a fusion frame",
            Source::Published,
            v.is_frame(tol),
            format!(
                "bounds ({:.6}, {:.6})",
                v.bounds(tol).0.lower,
                v.bounds(tol).0.upper
            ),
        ),
    ];

    let subspaces = v.subspaces();
    let (bounds, riesz) = riesz_sequence_bounds(&subspaces, tol)?;
    let e2 = Vector::from_column_slice(&[0.0, 1.0, 0.0]);
    let witness_ok = match riesz_witness(&subspaces, tol)? {
        Some(mut parts) => {
            // rescale to total energy 2 and orient so the first part is +e2
            let energy: f64 = parts.iter().map(|p| p.norm_squared()).sum();
            let sign = parts[0].dot(&e2).signum();
            for p in parts.iter_mut() {
                *p *= sign * (2.0 / energy).sqrt();
            }
            let total: Vector = parts.iter().sum();
            (&parts[0] - &e2).norm() <= 1e-10
                && (&parts[1] + &e2).norm() <= 1e-10
                && parts[2].norm() <= 1e-10
                && total.norm_squared() <= 1e-20
        }
        None => false,
    };
    out.push(claim(
        "remark: V is not a fusion Riesz basis",
        Source::Published,
        !riesz && !v.is_riesz_basis(tol),
        format!("Riesz lower bound {:.3e}", bounds.lower),
    ));
    out.push(claim(
        "remark: witness f1 = e2 in V1, f2 = -e2 in V2 sums to zero",
        Source::Recomputed,
        witness_ok,
        format!("e2 = {}", fmt_vec(&e2)),
    ));
    Ok(out)
}

fn example_claims(tol: &Tolerance) -> Result<Vec<Claim>, Box<dyn std::error::Error>> {
    let (w, v) = example_pair(tol)?;
    let psi = mixed_frame_operator(&w, &v, tol)?;
    let expected_psi = Matrix::from_row_slice(3, 3, &[1., 0., 0., 0., 1., 0.4, 0., 0., 0.8]);
    let psi_err = (&psi - &expected_psi).abs().max();
    let defect = operator_norm(&(Matrix::identity(3, 3) - &psi));
    let psi_inv = psi
        .clone()
        .try_inverse()
        .ok_or("mixed operator is singular")?;
    let displayed = displayed_psi_inverse()?;
    let transpose_err = (psi_inv.transpose() - &displayed).abs().max();

    let direct = transform_frame(&psi_inv, &v, tol)?;
    let printed = transform_frame(&displayed, &v, tol)?;
    let printed_targets = [
        fusionweave::Subspace::span_of(
            3,
            &[
                Vector::from_column_slice(&[1., 0., 0.]),
                Vector::from_column_slice(&[0., 1., -0.5]),
            ],
            tol,
        )?,
        fusionweave::Subspace::span_of(3, &[Vector::from_column_slice(&[0., 0.5, 1.])], tol)?,
    ];
    let printed_spans_ok = printed
        .subspaces()
        .iter()
        .zip(&printed_targets)
        .all(|(a, b)| a.distance(b).map(|d| d <= 1e-10).unwrap_or(false));
    let direct_is_w = direct
        .subspaces()
        .iter()
        .zip(w.subspaces())
        .all(|(a, b)| a.distance(&b).map(|d| d <= 1e-10).unwrap_or(false));

    let woven_direct = weaving_report(&[w.clone(), direct], tol, WeavingMode::default())?;
    let woven_printed = weaving_report(&[w.clone(), printed], tol, WeavingMode::default())?;

    Ok(vec![
        claim(
            "example: W is a fusion Riesz basis",
            Source::Published,
            w.is_riesz_basis(tol),
            String::new(),
        ),
        claim(
            "example: mixed operator is [[1,0,0],[0,1,2/5],[0,0,4/5]]",
            Source::Recomputed,
            psi_err <= 1e-10,
            format!("max entry error {psi_err:.3e}"),
        ),
        claim(
            "example: ||I - psi|| = sqrt(5)/5 < 1, V is an approximate dual",
            Source::Recomputed,
            (defect - 5f64.sqrt() / 5.0).abs() <= 1e-10,
            format!("defect {defect:.6}"),
        ),
        claim(
            "example: displayed inverse is the transpose of the computed inverse",
            Source::Published,
            transpose_err <= 1e-10,
            format!("max entry error {transpose_err:.3e}"),
        ),
        claim(
            "example: displayed inverse maps V to the displayed spans",
            Source::Published,
            printed_spans_ok,
            String::new(),
        ),
        claim(
            "example: computed inverse maps V onto W",
            Source::Recomputed,
            direct_is_w,
            String::new(),
        ),
        claim(
            "example: W is woven with the mapped V",
            Source::Published,
            woven_direct.woven && woven_printed.woven,
            format!(
                "computed inverse: {} of {} weavings; displayed inverse: {} of {}",
                woven_direct
                    .per_assignment
                    .iter()
                    .filter(|e| e.is_frame)
                    .count(),
                woven_direct.enumerated,
                woven_printed
                    .per_assignment
                    .iter()
                    .filter(|e| e.is_frame)
                    .count(),
                woven_printed.enumerated,
            ),
        ),
    ])
}

pub fn all_claims(tol: &Tolerance) -> Result<Vec<Claim>, Box<dyn std::error::Error>> {
    let mut out = remark_claims(tol)?;
    out.extend(example_claims(tol)?);
    Ok(out)
}
