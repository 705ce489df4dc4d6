//! JSON cochain files.
//!
//! ```json
//! {"algebra": {"type": "sl", "m": 4}, "grading": {"blocks": [1, 1, 2]},
//!  "degree": 2, "values": [{"indices": [0, 1], "matrix": [["1", "0", ...], ...]}]}
//! ```
//!
//! Rationals are strings (`"p"` or `"p/q"`). Omitted tuples are zero.

use std::fmt;
use std::sync::Arc;

use parakost::gla::Mat;
use parakost::kostant::{ChainContext, Cochain, MAX_DEGREE};
use parakost::ratlin::Rational;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

#[derive(Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Serialize, Deserialize)]
struct Algebra {
    #[serde(rename = "type")]
    kind: String,
    m: usize,
}

#[derive(Serialize, Deserialize)]
struct Grading {
    blocks: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFile<'a> {
    algebra: Algebra,
    grading: Grading,
    degree: usize,
    #[serde(borrow)]
    values: Vec<&'a RawValue>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    indices: Vec<usize>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct OutFile {
    algebra: Algebra,
    grading: Grading,
    degree: usize,
    values: Vec<Entry>,
}

fn line_at(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

/// Line of the first occurrence of `"key"`, or 1.
fn line_of_key(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\"")).map_or(1, |o| line_at(text, o))
}

fn err(line: usize, message: impl Into<String>) -> InputError {
    InputError { line, message: message.into() }
}

/// Parses and validates a cochain file.
pub fn parse(text: &str) -> Result<Cochain, InputError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| err(e.line(), e.to_string()))?;
    if raw.algebra.kind != "sl" {
        return Err(err(line_of_key(text, "type"), format!("unsupported algebra type {:?}, expected \"sl\"", raw.algebra.kind)));
    }
    let m = raw.algebra.m;
    let blocks = &raw.grading.blocks;
    if blocks.len() < 2 || blocks.contains(&0) || blocks.iter().sum::<usize>() != m {
        return Err(err(line_of_key(text, "blocks"), format!("blocks {blocks:?} are not a composition of m = {m} into at least two parts")));
    }
    if raw.degree > MAX_DEGREE - 1 {
        return Err(err(line_of_key(text, "degree"), format!("degree {} exceeds {}", raw.degree, MAX_DEGREE - 1)));
    }
    let ctx = ChainContext::new(blocks);
    let mut out = Cochain::zero(&ctx, raw.degree);
    let mut seen = std::collections::BTreeSet::new();
    for v in &raw.values {
        let line = line_at(text, v.get().as_ptr() as usize - text.as_ptr() as usize);
        let entry: Entry = serde_json::from_str(v.get()).map_err(|e| err(line + e.line() - 1, e.to_string()))?;
        let ix = &entry.indices;
        if ix.len() != raw.degree {
            return Err(err(line, format!("expected {} indices, got {}", raw.degree, ix.len())));
        }
        if ix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(line, format!("indices {ix:?} are not strictly increasing")));
        }
        if let Some(&i) = ix.iter().find(|&&i| i >= ctx.dim_q()) {
            return Err(err(line, format!("index {i} out of range, g/p has dimension {}", ctx.dim_q())));
        }
        if !seen.insert(ix.clone()) {
            return Err(err(line, format!("indices {ix:?} appear twice")));
        }
        if entry.matrix.len() != m || entry.matrix.iter().any(|row| row.len() != m) {
            return Err(err(line, format!("matrix is not {m}×{m}")));
        }
        let mut x = Mat::zeros(m, m);
        for (r, row) in entry.matrix.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                let q: Rational = s.parse().map_err(|_| err(line, format!("entry ({r}, {c}) = {s:?} is not a rational")))?;
                x.set(r, c, q);
            }
        }
        if !x.trace().is_zero() {
            return Err(err(line, format!("matrix has trace {}, expected 0", x.trace())));
        }
        out.set(ix, x);
    }
    Ok(out)
}

/// Serializes a cochain, listing nonzero tuples only.
pub fn render(c: &Cochain) -> String {
    let ctx: &Arc<ChainContext> = c.context();
    let g = ctx.algebra();
    let m = g.m();
    let values = ctx
        .tuples(c.degree())
        .iter()
        .zip(c.values())
        .filter(|(_, x)| !x.is_zero())
        .map(|(t, x)| Entry {
            indices: t.clone(),
            matrix: (0..m).map(|r| (0..m).map(|col| x.get(r, col).to_string()).collect()).collect(),
        })
        .collect();
    let file = OutFile {
        algebra: Algebra { kind: "sl".into(), m },
        grading: Grading { blocks: g.blocks().to_vec() },
        degree: c.degree(),
        values,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("cochain serializes");
    s.push('\n');
    s
}
