//! JSON documents for frames, operators, single subspaces and dual extras.
//!
//! Matrices are row-major. Spanning vectors are orthonormalized on load, so
//! every subcommand sees the same bases.

use std::fs;
use std::path::{Path, PathBuf};

use fusionweave::{FusionFrame, Matrix, Subspace, Tolerance, Vector, WeightedSubspace};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {field}: expected length {expected}, found {found}")]
    DimensionMismatch {
        path: PathBuf,
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: {field}: weight must be positive, found {weight}")]
    NonPositiveWeight {
        path: PathBuf,
        field: String,
        weight: f64,
    },
    #[error("{path}: {field}: {message}")]
    Invalid {
        path: PathBuf,
        field: String,
        message: String,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceEntry {
    pub vectors: Vec<Vec<f64>>,
    #[serde(default = "one")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub dim: usize,
    pub subspaces: Vec<SubspaceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Either `dim` (square) or `cols` may fix the shape; with neither, the
/// shape is read off `rows`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDocument {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

/// Extra spanning directions per frame index, for enlarging a canonical dual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtrasDocument {
    pub dim: usize,
    pub extras: Vec<Vec<Vec<f64>>>,
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn vectors(
    raw: &[Vec<f64>],
    dim: usize,
    field: &str,
    path: &Path,
) -> Result<Vec<Vector>, LoadError> {
    raw.iter()
        .enumerate()
        .map(|(k, v)| {
            let field = format!("{field}[{k}]");
            if v.len() != dim {
                return Err(LoadError::DimensionMismatch {
                    path: path.to_path_buf(),
                    field,
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(invalid(path, field, "entries must be finite"));
            }
            Ok(Vector::from_column_slice(v))
        })
        .collect()
}

fn invalid(path: &Path, field: String, message: impl std::fmt::Display) -> LoadError {
    LoadError::Invalid {
        path: path.to_path_buf(),
        field,
        message: message.to_string(),
    }
}

fn span(
    raw: &[Vec<f64>],
    dim: usize,
    field: &str,
    path: &Path,
    tol: &Tolerance,
) -> Result<Subspace, LoadError> {
    let vs = vectors(raw, dim, field, path)?;
    Subspace::span_of(dim, &vs, tol).map_err(|e| invalid(path, field.to_string(), e))
}

impl FrameDocument {
    pub fn to_frame(&self, path: &Path, tol: &Tolerance) -> Result<FusionFrame, LoadError> {
        let members = self
            .subspaces
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                if !entry.weight.is_finite() || entry.weight <= 0.0 {
                    return Err(LoadError::NonPositiveWeight {
                        path: path.to_path_buf(),
                        field: format!("subspaces[{i}].weight"),
                        weight: entry.weight,
                    });
                }
                let subspace = span(
                    &entry.vectors,
                    self.dim,
                    &format!("subspaces[{i}].vectors"),
                    path,
                    tol,
                )?;
                Ok(WeightedSubspace {
                    subspace,
                    weight: entry.weight,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        FusionFrame::new(self.dim, members).map_err(|e| invalid(path, "subspaces".into(), e))
    }

    /// Orthonormal bases of the members, one vector per basis column.
    pub fn from_frame(f: &FusionFrame, name: Option<String>) -> Self {
        FrameDocument {
            dim: f.ambient_dim(),
            subspaces: f
                .members()
                .iter()
                .map(|m| SubspaceEntry {
                    vectors: m
                        .subspace
                        .basis_vectors()
                        .iter()
                        .map(|v| v.iter().copied().collect())
                        .collect(),
                    weight: m.weight,
                })
                .collect(),
            name,
        }
    }
}

impl OperatorDocument {
    pub fn to_matrix(&self, path: &Path) -> Result<Matrix, LoadError> {
        let width = self
            .dim
            .or(self.cols)
            .or_else(|| self.rows.first().map(Vec::len))
            .unwrap_or(0);
        if let Some(n) = self.dim {
            if self.rows.len() != n {
                return Err(LoadError::DimensionMismatch {
                    path: path.to_path_buf(),
                    field: "rows".into(),
                    expected: n,
                    found: self.rows.len(),
                });
            }
        }
        let rows = vectors(&self.rows, width, "rows", path)?;
        Ok(Matrix::from_fn(rows.len(), width, |i, j| rows[i][j]))
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        OperatorDocument {
            dim: m.is_square().then_some(m.nrows()),
            cols: (!m.is_square()).then_some(m.ncols()),
            rows: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

pub fn frame_from_str(text: &str, path: &Path, tol: &Tolerance) -> Result<FusionFrame, LoadError> {
    parse::<FrameDocument>(text, path)?.to_frame(path, tol)
}

pub fn operator_from_str(text: &str, path: &Path) -> Result<Matrix, LoadError> {
    parse::<OperatorDocument>(text, path)?.to_matrix(path)
}

pub fn load_frame(path: &Path, tol: &Tolerance) -> Result<FusionFrame, LoadError> {
    frame_from_str(&read(path)?, path, tol)
}

pub fn load_operator(path: &Path) -> Result<Matrix, LoadError> {
    operator_from_str(&read(path)?, path)
}

pub fn load_subspace(path: &Path, tol: &Tolerance) -> Result<Subspace, LoadError> {
    let doc: SubspaceDocument = parse(&read(path)?, path)?;
    span(&doc.vectors, doc.dim, "vectors", path, tol)
}

pub fn load_extras(path: &Path) -> Result<Vec<Vec<Vector>>, LoadError> {
    let doc: ExtrasDocument = parse(&read(path)?, path)?;
    doc.extras
        .iter()
        .enumerate()
        .map(|(i, group)| vectors(group, doc.dim, &format!("extras[{i}]"), path))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.json")
    }

    #[test]
    fn loads_and_orthonormalizes() {
        let tol = Tolerance::default();
        let f = frame_from_str(
            r#"{"dim":3,"subspaces":[{"vectors":[[1,0,0],[1,1,0]]},{"vectors":[[0,0,2]],"weight":2}]}"#,
            p(),
            &tol,
        )
        .unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[0].subspace.dim(), 2);
        assert_eq!(f.weights(), vec![1.0, 2.0]);
        let b = f.members()[1].subspace.basis();
        assert!((b.column(0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reports_field_paths() {
        let tol = Tolerance::default();
        let e = frame_from_str(
            r#"{"dim":2,"subspaces":[{"vectors":[[1,0]],"weight":-1}]}"#,
            p(),
            &tol,
        )
        .unwrap_err();
        assert!(
            matches!(e, LoadError::NonPositiveWeight { ref field, .. } if field == "subspaces[0].weight")
        );

        let e = frame_from_str(
            r#"{"dim":3,"subspaces":[{"vectors":[[1,0,0]]},{"vectors":[[1,0]]}]}"#,
            p(),
            &tol,
        )
        .unwrap_err();
        assert!(
            matches!(e, LoadError::DimensionMismatch { ref field, expected: 3, found: 2, .. }
            if field == "subspaces[1].vectors[0]")
        );

        let e = frame_from_str("{\"dim\":3,\n\"subspaces\":[}", p(), &tol).unwrap_err();
        assert!(matches!(e, LoadError::Parse { line: 2, .. }));
    }

    #[test]
    fn operator_shapes() {
        let m =
            operator_from_str(r#"{"dim":3,"rows":[[1,0,0],[0,1,0],[0,-0.5,1.25]]}"#, p()).unwrap();
        assert_eq!(m[(2, 1)], -0.5);
        assert_eq!(m[(2, 2)], 1.25);
        assert!(operator_from_str(r#"{"dim":2,"rows":[[1,0]]}"#, p()).is_err());
        assert!(operator_from_str(r#"{"rows":[[1,0],[1]]}"#, p()).is_err());
        let r = operator_from_str(r#"{"cols":3,"rows":[[1,2,3]]}"#, p()).unwrap();
        assert_eq!(r.shape(), (1, 3));
        let back = OperatorDocument::from_matrix(&m).to_matrix(p()).unwrap();
        assert_eq!(back, m);
    }
}
