//! Joint-distribution input files: a JSON document with optional `y_labels`
//! and `x_labels` (arrays of strings) and a required `pyx` matrix of |Y| rows
//! by |X| entries. Entries are JSON numbers, decimal strings, or exact
//! rational strings like `"1/8"`.

use crate::{CliError, CliResult};
use renyi_ib::JointDistribution;
use serde_json::Value;

pub fn load_joint(path: &std::path::Path) -> CliResult<(JointDistribution, Vec<u8>)> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let joint = parse_joint(&bytes)?;
    Ok((joint, bytes))
}

pub fn parse_joint(bytes: &[u8]) -> CliResult<JointDistribution> {
    let doc: Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::validation(format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::validation("top-level value must be an object".to_string()))?;

    let pyx = obj
        .get("pyx")
        .ok_or_else(|| CliError::validation("missing required field \"pyx\"".to_string()))?
        .as_array()
        .ok_or_else(|| CliError::validation("\"pyx\" must be an array of rows".to_string()))?;

    let mut rows = Vec::with_capacity(pyx.len());
    for (r, row) in pyx.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| {
            CliError::validation(format!("pyx[{r}] must be an array of numbers"))
        })?;
        let mut parsed = Vec::with_capacity(row.len());
        for (c, cell) in row.iter().enumerate() {
            let v = parse_entry(cell)
                .map_err(|why| CliError::validation(format!("pyx[{r}][{c}]: {why}")))?;
            if !(v >= 0.0) {
                return Err(CliError::validation(format!("pyx[{r}][{c}]: negative entry {v}")));
            }
            parsed.push(v);
        }
        rows.push(parsed);
    }

    let joint = JointDistribution::from_rows(rows).map_err(|e| match e {
        renyi_ib::Error::JointNotNormalized { sum } => {
            CliError::validation(format!("invalid joint: sum={sum:.6}"))
        }
        renyi_ib::Error::NegativeEntry { row, col, value } => {
            CliError::validation(format!("pyx[{row}][{col}]: negative entry {value}"))
        }
        renyi_ib::Error::ZeroColumn { col } => CliError::validation(format!(
            "column {col} of pyx has zero mass; every source symbol needs positive probability"
        )),
        other => CliError::validation(format!("invalid joint: {other}")),
    })?;

    let labels = |field: &str, expected: usize| -> CliResult<Option<Vec<String>>> {
        match obj.get(field) {
            None => Ok(None),
            Some(v) => {
                let arr = v.as_array().ok_or_else(|| {
                    CliError::validation(format!("\"{field}\" must be an array of strings"))
                })?;
                if arr.len() != expected {
                    return Err(CliError::validation(format!(
                        "\"{field}\" has {} entries, expected {expected}",
                        arr.len()
                    )));
                }
                arr.iter()
                    .map(|s| {
                        s.as_str().map(str::to_owned).ok_or_else(|| {
                            CliError::validation(format!("\"{field}\" entries must be strings"))
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()
                    .map(Some)
            }
        }
    };
    let y_labels = labels("y_labels", joint.y_size())?;
    let x_labels = labels("x_labels", joint.x_size())?;
    match (y_labels, x_labels) {
        (Some(y), Some(x)) => joint
            .with_labels(y, x)
            .map_err(|e| CliError::validation(format!("invalid labels: {e}"))),
        (None, None) => Ok(joint),
        _ => Err(CliError::validation(
            "provide both y_labels and x_labels or neither".to_string(),
        )),
    }
}

/// A cell is a JSON number, a decimal string, or an exact rational `"p/q"`.
fn parse_entry(cell: &Value) -> Result<f64, String> {
    match cell {
        Value::Number(n) => n.as_f64().ok_or_else(|| format!("{n} is not a finite number")),
        Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let num: u64 = num
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad rational numerator in \"{s}\""))?;
                let den: u64 = den
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad rational denominator in \"{s}\""))?;
                if den == 0 {
                    return Err(format!("zero denominator in \"{s}\""));
                }
                Ok(num as f64 / den as f64)
            } else {
                s.parse::<f64>().map_err(|_| format!("cannot parse \"{s}\" as a number"))
            }
        }
        other => Err(format!("unsupported value {other}")),
    }
}
