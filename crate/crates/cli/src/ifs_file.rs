//! JSON description of an iterated function system.
//!
//! ```json
//! { "dim": 2, "label": "gasket",
//!   "maps": [ { "scale": 0.5, "rotation_deg": 0, "translation": [0, 0] }, ... ] }
//! ```
//!
//! A map gives its linear part as `rotation_deg` (planar only) or as a
//! row-major orthogonal `matrix`; with neither it is a homothety.
//! `reflect` flips the first axis before the linear part is applied.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use selfsim_core::{Ifs64, Similitude64};

const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsFile {
    pub dim: usize,
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reflect: bool,
    pub translation: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum IfsError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {field}: {message}")]
    Syntax { line: usize, column: usize, field: String, message: String },
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> IfsError {
    IfsError::Invalid { field: field.into(), reason: reason.into() }
}

pub fn parse_ifs_file(path: &Path) -> Result<Ifs64, IfsError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IfsError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_ifs_str(&text)
}

pub fn parse_ifs_str(text: &str) -> Result<Ifs64, IfsError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: IfsFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => "document".to_string(),
            p => p,
        };
        let inner = e.into_inner();
        IfsError::Syntax { line: inner.line(), column: inner.column(), field, message: inner.to_string() }
    })?;
    file.to_ifs()
}

impl IfsFile {
    pub fn to_ifs(&self) -> Result<Ifs64, IfsError> {
        let d = self.dim;
        if d == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if self.maps.len() < 2 {
            return Err(invalid("maps", format!("at least two maps required, got {}", self.maps.len())));
        }
        let maps = self.maps.iter().enumerate().map(|(i, m)| m.to_similitude(d, i)).collect::<Result<Vec<_>, _>>()?;
        Ifs64::new(self.label.clone(), maps).map_err(|e| invalid("maps", e.to_string()))
    }

    /// The file describing `ifs`. Linear parts other than the identity are
    /// written as matrices, so parsing it back gives the same maps bit for bit.
    pub fn from_ifs(ifs: &Ifs64) -> IfsFile {
        let maps = ifs
            .maps()
            .iter()
            .map(|f| {
                let d = f.dim();
                let identity = (0..d * d).all(|i| f.orthogonal()[i] == if i % (d + 1) == 0 { 1.0 } else { 0.0 });
                MapSpec {
                    scale: f.scale(),
                    rotation_deg: None,
                    matrix: (!identity).then(|| f.orthogonal().to_vec()),
                    reflect: false,
                    translation: f.translation().to_vec(),
                }
            })
            .collect();
        IfsFile { dim: ifs.dim(), maps, label: ifs.label().to_string() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("IFS files serialize")
    }
}

impl MapSpec {
    fn to_similitude(&self, d: usize, i: usize) -> Result<Similitude64, IfsError> {
        let field = |name: &str| format!("maps[{i}].{name}");
        if !(self.scale > 0.0 && self.scale < 1.0) {
            return Err(invalid(field("scale"), format!("scale out of (0,1): {}", self.scale)));
        }
        if self.translation.len() != d {
            return Err(invalid(
                field("translation"),
                format!("expected {d} coordinates, got {}", self.translation.len()),
            ));
        }
        if self.translation.iter().any(|t| !t.is_finite()) {
            return Err(invalid(field("translation"), "coordinates must be finite"));
        }
        let mut q = match (&self.rotation_deg, &self.matrix) {
            (Some(_), Some(_)) => return Err(invalid(field("matrix"), "give either rotation_deg or matrix, not both")),
            (Some(deg), None) => {
                if d != 2 {
                    return Err(invalid(field("rotation_deg"), format!("rotation_deg needs dim 2, got {d}")));
                }
                let (s, c) = deg.to_radians().sin_cos();
                vec![c, -s, s, c]
            }
            (None, Some(m)) => {
                if m.len() != d * d {
                    return Err(invalid(field("matrix"), format!("expected {} entries, got {}", d * d, m.len())));
                }
                m.clone()
            }
            (None, None) => (0..d * d).map(|i| if i % (d + 1) == 0 { 1.0 } else { 0.0 }).collect(),
        };
        if self.reflect {
            for row in 0..d {
                q[row * d] = -q[row * d];
            }
        }
        Similitude64::new(self.scale, q, self.translation.clone(), ORTHOGONALITY_TOL)
            .map_err(|_| invalid(field("matrix"), format!("matrix is not orthogonal within {ORTHOGONALITY_TOL:e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_file() {
        let ifs = parse_ifs_str(
            r#"{"dim": 1, "label": "cantor", "maps": [
                {"scale": 0.3333333333333333, "translation": [0]},
                {"scale": 0.3333333333333333, "translation": [0.6666666666666666]}]}"#,
        )
        .unwrap();
        assert_eq!((ifs.k(), ifs.dim()), (2, 1));
        assert_eq!(ifs.label(), "cantor");
    }

    #[test]
    fn rotations_and_reflections() {
        let ifs = parse_ifs_str(
            r#"{"dim": 2, "maps": [
                {"scale": 0.5, "rotation_deg": 90, "translation": [0, 0]},
                {"scale": 0.5, "rotation_deg": 0, "reflect": true, "translation": [1, 0]}]}"#,
        )
        .unwrap();
        let rot = ifs.maps()[0].apply(&[1.0, 0.0]).unwrap();
        assert!(rot[0].abs() < 1e-15 && (rot[1] - 0.5).abs() < 1e-15);
        assert_eq!(ifs.maps()[1].apply(&[1.0, 1.0]).unwrap(), vec![0.5, 0.5]);
    }

    fn error_of(text: &str) -> String {
        parse_ifs_str(text).unwrap_err().to_string()
    }

    #[test]
    fn diagnostics() {
        let e =
            error_of(r#"{"dim": 1, "maps": [{"scale": 1.1, "translation": [0]}, {"scale": 0.5, "translation": [1]}]}"#);
        assert!(e.contains("scale out of (0,1)") && e.contains("maps[0].scale"), "{e}");

        let e = error_of(r#"{"dim": 1, "maps": [{"scale": 0.5, "translation": [0]}]}"#);
        assert!(e.contains("at least two maps"), "{e}");

        let e = error_of(
            r#"{"dim": 2, "maps": [{"scale": 0.5, "matrix": [1, 0.1, 0, 1], "translation": [0, 0]},
                {"scale": 0.5, "translation": [1, 0]}]}"#,
        );
        assert!(e.contains("maps[0].matrix") && e.contains("not orthogonal"), "{e}");

        let e = error_of("{\"dim\": 1,\n \"maps\": [{\"scale\": \"big\", \"translation\": [0]}]}");
        assert!(e.starts_with("line 2") && e.contains("maps[0].scale"), "{e}");

        let e = error_of(r#"{"dim": 1, "maps": [{"scale": 0.5, "translation": [0], "shear": 2}]}"#);
        assert!(e.contains("shear"), "{e}");

        let e = error_of(r#"{"dim": 3, "maps": [{"scale": 0.5, "rotation_deg": 10, "translation": [0, 0, 0]}]}"#);
        assert!(e.contains("maps"), "{e}");
    }

    #[test]
    fn files_round_trip() {
        let f = Similitude64::planar(0.4, 0.3, true, [0.1, 0.7]);
        let g = Similitude64::homothety(0.25, vec![0.5, 0.5]);
        let ifs = Ifs64::new("mixed", vec![f, g]).unwrap();
        let back = parse_ifs_str(&IfsFile::from_ifs(&ifs).to_json()).unwrap();
        assert_eq!(back, ifs);
    }
}
