//! On-disk correlation-table format.
//!
//! `{"dims":[...],"entries":[{"ops":[k1,...,kn],"mean":x}, ...]}` where each
//! k is the 0-based position of a basis operator in the canonical
//! enumeration for its factor, and entries appear in ascending lexicographic
//! op order. A table is complete exactly when every tuple appears once.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qcorr_core::linalg::Partition;
use qcorr_core::ssc::CorrelationTable;

#[derive(Serialize, Deserialize)]
struct TableDoc {
    dims: Vec<usize>,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    ops: Vec<usize>,
    mean: f64,
}

pub fn table_to_json(table: &CorrelationTable) -> String {
    let entries = (0..table.len())
        .map(|flat| TableEntry {
            ops: table.positions_at(flat),
            mean: table.entries()[flat],
        })
        .collect();
    crate::jsonfmt::to_json(&TableDoc { dims: table.partition().dims().to_vec(), entries })
}

pub fn load_table(path: &Path) -> Result<CorrelationTable, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc: TableDoc =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON in {}: {e}", path.display()))?;
    let partition = Partition::new(doc.dims).map_err(|e| format!("bad dims: {e}"))?;
    let shape: Vec<usize> = partition.dims().iter().map(|d| d * d).collect();
    let expected: usize = shape.iter().product();
    if doc.entries.len() != expected {
        return Err(format!(
            "incomplete table: expected {expected} entries, found {}",
            doc.entries.len()
        ));
    }
    let mut means = Vec::with_capacity(expected);
    for (flat, entry) in doc.entries.iter().enumerate() {
        if entry.ops.len() != shape.len() {
            return Err(format!(
                "entry {flat} has {} op indices, expected {}",
                entry.ops.len(),
                shape.len()
            ));
        }
        let mut idx = 0usize;
        for (&op, &n) in entry.ops.iter().zip(&shape) {
            if op >= n {
                return Err(format!("entry {flat} has op index {op} out of range {n}"));
            }
            idx = idx * n + op;
        }
        if idx != flat {
            return Err(format!(
                "entries out of order at {flat}: ops {:?} do not follow ascending lexicographic order",
                entry.ops
            ));
        }
        means.push(entry.mean);
    }
    CorrelationTable::new(partition, means).map_err(|e| e.to_string())
}
