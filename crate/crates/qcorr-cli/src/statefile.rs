//! On-disk state format: dims, kind, and row-major [re, im] amplitude data.
//!
//! Kets store a flat list of pairs; densities store one list of pairs per
//! row. Densities are validated on load at the run tolerance.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use qcorr_core::linalg::{ComplexMatrix, Ket, Partition};
use qcorr_core::states::DensityMatrix;
use qcorr_core::Complex64;

/// A loaded state file, already shape-checked.
#[derive(Debug)]
pub enum LoadedState {
    Ket { ket: Ket, partition: Partition },
    Density { density: DensityMatrix, partition: Partition },
}

#[derive(Serialize)]
struct KetDoc<'a> {
    dims: &'a [usize],
    kind: &'static str,
    data: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct DensityDoc<'a> {
    dims: &'a [usize],
    kind: &'static str,
    data: Vec<Vec<[f64; 2]>>,
}

pub fn ket_to_json(ket: &Ket, dims: &[usize]) -> String {
    let data = ket.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    crate::jsonfmt::to_json(&KetDoc { dims, kind: "ket", data })
}

pub fn density_to_json(matrix: &ComplexMatrix, dims: &[usize]) -> String {
    let data = (0..matrix.rows())
        .map(|i| (0..matrix.cols()).map(|j| [matrix.get(i, j).re, matrix.get(i, j).im]).collect())
        .collect();
    crate::jsonfmt::to_json(&DensityDoc { dims, kind: "density", data })
}

fn parse_pair(v: &Value) -> Result<Complex64, String> {
    let arr = v.as_array().ok_or("amplitude must be a [re, im] pair")?;
    if arr.len() != 2 {
        return Err(format!("amplitude pair has {} entries, expected 2", arr.len()));
    }
    let re = arr[0].as_f64().ok_or("re must be a number")?;
    let im = arr[1].as_f64().ok_or("im must be a number")?;
    if !re.is_finite() || !im.is_finite() {
        return Err("non-finite amplitude".into());
    }
    Ok(Complex64::new(re, im))
}

/// Loads and validates a state file; densities are checked against
/// `tol`.
pub fn load_state(path: &Path, tol: f64) -> Result<LoadedState, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON in {}: {e}", path.display()))?;
    let dims: Vec<usize> = doc
        .get("dims")
        .and_then(Value::as_array)
        .ok_or("missing dims array")?
        .iter()
        .map(|v| v.as_u64().map(|d| d as usize).ok_or("dims must be positive integers"))
        .collect::<Result<_, _>>()?;
    let partition = Partition::new(dims).map_err(|e| format!("bad dims: {e}"))?;
    let total = partition.total_dim();
    let kind = doc.get("kind").and_then(Value::as_str).ok_or("missing kind")?;
    let data = doc.get("data").and_then(Value::as_array).ok_or("missing data array")?;
    match kind {
        "ket" => {
            if data.len() != total {
                return Err(format!("ket data has {} amplitudes, dims need {total}", data.len()));
            }
            let amps = data.iter().map(parse_pair).collect::<Result<Vec<_>, _>>()?;
            let ket = Ket::new(amps).map_err(|e| e.to_string())?;
            Ok(LoadedState::Ket { ket, partition })
        }
        "density" => {
            if data.len() != total {
                return Err(format!("density has {} rows, dims need {total}", data.len()));
            }
            let mut entries = Vec::with_capacity(total * total);
            for row in data {
                let row = row.as_array().ok_or("density rows must be arrays")?;
                if row.len() != total {
                    return Err(format!("density row has {} entries, dims need {total}", row.len()));
                }
                for v in row {
                    entries.push(parse_pair(v)?);
                }
            }
            let matrix = ComplexMatrix::new(total, total, entries).map_err(|e| e.to_string())?;
            let density = DensityMatrix::with_tolerance(matrix, tol).map_err(|e| e.to_string())?;
            Ok(LoadedState::Density { density, partition })
        }
        other => Err(format!("unknown state kind {other:?}, expected \"ket\" or \"density\"")),
    }
}
