use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::SolverError;

/// JSON sidecar describing a raw field file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub shape: Vec<usize>,
    pub n: usize,
    #[serde(rename = "N")]
    pub size: usize,
    pub field_name: String,
}

impl FieldHeader {
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `values` as little-endian f64 to `path` and the header to
/// `path` + `.json`.
pub fn write_field(path: &Path, header: &FieldHeader, values: &[f64]) -> Result<(), SolverError> {
    if header.len() != values.len() {
        return Err(SolverError::DimensionMismatch {
            expected: header.len(),
            found: values.len(),
        });
    }
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    let json = serde_json::to_string_pretty(header).map_err(|e| SolverError::Header(e.to_string()))?;
    fs::write(sidecar(path), json)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<(FieldHeader, Vec<f64>), SolverError> {
    let text = fs::read_to_string(sidecar(path))?;
    let header: FieldHeader =
        serde_json::from_str(&text).map_err(|e| SolverError::Header(e.to_string()))?;
    let bytes = fs::read(path)?;
    if bytes.len() != header.len() * 8 {
        return Err(SolverError::DimensionMismatch {
            expected: header.len(),
            found: bytes.len() / 8,
        });
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((header, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi.bin");
        let header = FieldHeader {
            shape: vec![4, 4],
            n: 1,
            size: 4,
            field_name: "phi".into(),
        };
        let values: Vec<f64> = (0..16)
            .map(|i| (i as f64 * 0.1).sin() / 3.0 + f64::EPSILON * i as f64)
            .collect();
        write_field(&path, &header, &values).unwrap();
        let (h, back) = read_field(&path).unwrap();
        assert_eq!(h, header);
        for (a, b) in values.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_file_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi.bin");
        let header = FieldHeader {
            shape: vec![4, 4],
            n: 1,
            size: 4,
            field_name: "phi".into(),
        };
        write_field(&path, &header, &[0.0; 16]).unwrap();
        fs::write(&path, [0u8; 12]).unwrap();
        assert!(read_field(&path).is_err());
    }
}
