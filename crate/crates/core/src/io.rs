//! JSON input formats.
//!
//! An input file holds exactly one of:
//! - structure constants `{"dim", "unit", "structure", "labels"?}`, where
//!   `unit` lists `[re_num, re_den, im_num, im_den]` per basis vector and
//!   `structure` lists `[i, j, k, re_num, re_den, im_num, im_den]` with
//!   0-based indices (omitted entries are 0);
//! - a quasi-order `{"n", "pairs"}` with 1-based pairs;
//! - a direct sum of matrix algebras `{"matrix_blocks": [k_1, …]}`.
//!
//! Integers may be JSON numbers or decimal strings (for values beyond 64 bits).

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::scalar::GaussRational;
use crate::sma::{sma_algebra, QuasiOrder};

/// An integer written as a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("\"{s}\" is not an integer"))),
        }
    }

    fn from_bigint(v: &BigInt) -> Self {
        match i64::try_from(v) {
            Ok(small) => JsonInt::Small(small),
            Err(_) => JsonInt::Big(v.to_string()),
        }
    }
}

/// `[i, j, k, re_num, re_den, im_num, im_den]`.
type RawEntry = (usize, usize, usize, JsonInt, JsonInt, JsonInt, JsonInt);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    dim: Option<usize>,
    unit: Option<Vec<[JsonInt; 4]>>,
    structure: Option<Vec<RawEntry>>,
    labels: Option<Vec<String>>,
    n: Option<usize>,
    pairs: Option<Vec<[usize; 2]>>,
    matrix_blocks: Option<Vec<usize>>,
}

/// How quasi-order inputs are completed before validation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Add the diagonal pairs.
    pub reflexive: bool,
    /// Take the transitive closure.
    pub transitive: bool,
}

/// A validated input algebra, with its quasi-order when it is structural.
#[derive(Clone, Debug)]
pub struct LoadedAlgebra {
    pub algebra: Algebra,
    pub certificate: Option<QuasiOrder>,
}

fn gauss(parts: &[JsonInt; 4]) -> Result<GaussRational> {
    let [a, b, c, d] = parts;
    GaussRational::from_parts(
        a.to_bigint()?,
        b.to_bigint()?,
        c.to_bigint()?,
        d.to_bigint()?,
    )
    .ok_or_else(|| Error::Schema("zero denominator".into()))
}

fn parts(z: &GaussRational) -> [JsonInt; 4] {
    [
        JsonInt::from_bigint(z.re().numer()),
        JsonInt::from_bigint(z.re().denom()),
        JsonInt::from_bigint(z.im().numer()),
        JsonInt::from_bigint(z.im().denom()),
    ]
}

/// Parses and validates an input document.
pub fn parse_input(text: &str, closure: ClosureOptions) -> Result<LoadedAlgebra> {
    let raw: RawInput = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let kinds = [
        raw.structure.is_some() || raw.dim.is_some() || raw.unit.is_some(),
        raw.pairs.is_some() || raw.n.is_some(),
        raw.matrix_blocks.is_some(),
    ];
    if kinds.iter().filter(|&&k| k).count() != 1 {
        return Err(Error::Schema(
            "expected exactly one of: structure constants (dim, unit, structure), a quasi-order (n, pairs), or matrix_blocks"
                .into(),
        ));
    }
    if let Some(blocks) = raw.matrix_blocks {
        let rho = QuasiOrder::block_equivalence(&blocks)?;
        return Ok(LoadedAlgebra {
            algebra: sma_algebra(&rho),
            certificate: Some(rho),
        });
    }
    if kinds[1] {
        let (Some(n), Some(pairs)) = (raw.n, raw.pairs) else {
            return Err(Error::Schema(
                "a quasi-order needs both \"n\" and \"pairs\"".into(),
            ));
        };
        if raw.labels.is_some() {
            return Err(Error::Schema(
                "labels are only accepted with structure constants".into(),
            ));
        }
        let mut zero_based = Vec::with_capacity(pairs.len());
        for [i, j] in pairs {
            for x in [i, j] {
                if x == 0 || x > n {
                    return Err(Error::Schema(format!("pair index {x} outside 1..={n}")));
                }
            }
            zero_based.push((i - 1, j - 1));
        }
        let rho = if closure.reflexive || closure.transitive {
            QuasiOrder::with_closure(n, zero_based, closure.reflexive, closure.transitive)?
        } else {
            QuasiOrder::new(n, zero_based)?
        };
        return Ok(LoadedAlgebra {
            algebra: sma_algebra(&rho),
            certificate: Some(rho),
        });
    }
    let (Some(dim), Some(unit), Some(structure)) = (raw.dim, raw.unit, raw.structure) else {
        return Err(Error::Schema(
            "structure constants need \"dim\", \"unit\" and \"structure\"".into(),
        ));
    };
    let unit = unit.iter().map(gauss).collect::<Result<Vec<_>>>()?;
    let entries = structure
        .into_iter()
        .map(|(i, j, k, a, b, c, d)| Ok((i, j, k, gauss(&[a, b, c, d])?)))
        .collect::<Result<Vec<_>>>()?;
    let mut algebra = Algebra::new(dim, entries, unit)?;
    if let Some(labels) = raw.labels {
        algebra = algebra.with_labels(labels)?;
    }
    Ok(LoadedAlgebra {
        algebra,
        certificate: None,
    })
}

/// Reads and validates an input file.
pub fn load_input(path: &Path, closure: ClosureOptions) -> Result<LoadedAlgebra> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    parse_input(&text, closure).map_err(|e| match e {
        Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Structure-constant JSON for `alg`.
pub fn algebra_to_json(alg: &Algebra) -> Value {
    let unit: Vec<[JsonInt; 4]> = alg.unit().iter().map(parts).collect();
    let structure: Vec<Value> = alg
        .structure_entries()
        .map(|(i, j, k, c)| {
            let [a, b, cc, d] = parts(c);
            json!([i, j, k, a, b, cc, d])
        })
        .collect();
    let mut v = json!({ "dim": alg.dim(), "unit": unit, "structure": structure });
    if let Some(labels) = alg.labels() {
        v["labels"] = json!(labels);
    }
    v
}

/// Quasi-order JSON with 1-based pairs.
pub fn quasi_order_to_json(rho: &QuasiOrder) -> Value {
    let pairs: Vec<[usize; 2]> = rho.pairs().map(|(i, j)| [i + 1, j + 1]).collect();
    json!({ "n": rho.n(), "pairs": pairs })
}
