//! JSON model files:
//! `{"dim": d, "H": [[[re, im], …], …], "L": [[[[re, im], …], …], …], "rho0": …, "label": …}`.

use std::path::Path;

use num_complex::Complex64;
use qda_core::model::{DensityMatrix, LindbladModel};
use qda_core::numerics::ComplexMatrix;
use serde::Deserialize;

use crate::CliError;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    dim: usize,
    #[serde(rename = "H")]
    h: RawMatrix,
    #[serde(rename = "L", default)]
    l: Vec<RawMatrix>,
    #[serde(default)]
    rho0: Option<RawMatrix>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Debug)]
pub struct ModelFile {
    pub model: LindbladModel,
    pub rho0: Option<DensityMatrix>,
}

fn matrix(raw: &RawMatrix, dim: usize, what: &str) -> Result<ComplexMatrix, CliError> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(CliError::Invalid(format!("{what} must be {dim}x{dim}")));
    }
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

pub fn parse_model(text: &str) -> Result<ModelFile, CliError> {
    let raw: RawModel =
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("model file: {e}")))?;
    if raw.dim == 0 {
        return Err(CliError::Invalid("model file: dim must be positive".into()));
    }
    let h = matrix(&raw.h, raw.dim, "H")?;
    let jumps = raw
        .l
        .iter()
        .enumerate()
        .map(|(k, m)| matrix(m, raw.dim, &format!("L[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let model = LindbladModel::new(h, jumps, raw.label.unwrap_or_default())
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let rho0 = raw
        .rho0
        .as_ref()
        .map(|r| {
            matrix(r, raw.dim, "rho0").and_then(|m| {
                DensityMatrix::new(m).map_err(|e| CliError::Invalid(format!("rho0: {e}")))
            })
        })
        .transpose()?;
    Ok(ModelFile { model, rho0 })
}

pub fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decay_model() {
        let text = r#"{"dim": 2, "H": [[[0,0],[0.5,0]],[[0.5,0],[1,0]]],
                       "L": [[[[0,0],[0.7,0]],[[0,0],[0,0]]]],
                       "rho0": [[[1,0],[0,0]],[[0,0],[0,0]]], "label": "q"}"#;
        let f = parse_model(text).unwrap();
        assert_eq!(f.model.dim(), 2);
        assert_eq!(f.model.jumps().len(), 1);
        assert_eq!(f.model.label(), "q");
        assert!(f.rho0.is_some());
    }

    #[test]
    fn rejects_shape_and_hermiticity() {
        let bad_shape = r#"{"dim": 2, "H": [[[0,0]]]}"#;
        assert!(matches!(parse_model(bad_shape), Err(CliError::Invalid(_))));
        let non_herm = r#"{"dim": 2, "H": [[[0,0],[1,0]],[[0,0],[0,0]]]}"#;
        match parse_model(non_herm) {
            Err(CliError::Invalid(msg)) => assert!(msg.contains("Hermitian")),
            other => panic!("{other:?}"),
        }
    }
}
