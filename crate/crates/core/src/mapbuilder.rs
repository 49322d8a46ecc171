//! Block-repetition maps `φ = (φ_1, …, φ_q)` with
//! `φ_j(a) = diag(block_1(a) ×x_1^j, …, block_p(a) ×x_p^j)`, where
//! `block_i(a)` is the image of `a` in the `i`-th simple quotient `M_{k_i}`.
//!
//! A map spec carries its own evaluation pipeline, so it can be serialized
//! by `construct` and evaluated by `verify` without redoing the analysis:
//! - structural matrix algebras read the diagonal blocks of the condensed
//!   matrix directly;
//! - any other algebra stores, for each basis vector `e_l`, the matrices
//!   `ψ_i(Q(e_l))`, where `Q` is the quotient by the radical and `ψ_i` is
//!   the isomorphism of the `i`-th component onto `M_{k_i}`.
//!
//! Source blocks are always indexed in ascending `k` order, matching
//! [`crate::wedderburn::WedderburnProfile::ks`].

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::FloatMatrix;
use crate::sma::{condensation, QuasiOrder};
use crate::wedderburn::wedderburn_profile;

/// A complex number as `[re, im]` in JSON.
pub type JsonComplex = [f64; 2];

/// Position of one copy of a source block inside a target block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSlot {
    /// Source block index, ascending-`k` order.
    pub block: usize,
    /// Repetition number of this block within the target.
    pub slot: usize,
    /// Place the transpose of the block instead (not an algebra map; used
    /// to exercise the multiplicativity check).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transpose: bool,
}

/// One source block of a quotient pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientBlock {
    pub k: usize,
    /// `images[l]` is `ψ(Q(e_l))`, row-major `k×k`.
    pub images: Vec<Vec<JsonComplex>>,
}

/// How an element of the source algebra is turned into its simple blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourcePipeline {
    /// Pairs and block members are 1-based; blocks in ascending size.
    Sma {
        n: usize,
        pairs: Vec<[usize; 2]>,
        blocks: Vec<Vec<usize>>,
    },
    Quotient {
        dim: usize,
        blocks: Vec<QuotientBlock>,
    },
}

impl SourcePipeline {
    /// Block reader of a structural matrix algebra.
    pub fn sma(rho: &QuasiOrder) -> Self {
        let c = condensation(rho);
        let mut blocks: Vec<Vec<usize>> = (0..c.blocks())
            .map(|b| c.members(b).iter().map(|i| i + 1).collect())
            .collect();
        blocks.sort_by_key(Vec::len);
        SourcePipeline::Sma {
            n: rho.n(),
            pairs: rho.pairs().map(|(i, j)| [i + 1, j + 1]).collect(),
            blocks,
        }
    }

    /// Quotient-and-split pipeline for an arbitrary algebra.
    pub fn quotient(alg: &Algebra, seed: u64, tol: f64) -> Result<Self> {
        let profile = wedderburn_profile(alg, seed, tol)?;
        let isos = profile.simple_isomorphisms(seed, tol)?;
        let q = &profile.quotient_map;
        let reduced: Vec<Vec<Complex64>> = (0..alg.dim())
            .map(|l| {
                q.apply_float(
                    &alg.basis_vector(l)
                        .iter()
                        .map(|c| c.to_c64())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let blocks = isos
            .iter()
            .map(|iso| QuotientBlock {
                k: iso.k,
                images: reduced
                    .iter()
                    .map(|w| {
                        let m = iso.apply(w);
                        (0..iso.k * iso.k)
                            .map(|rc| {
                                let z = m[(rc / iso.k, rc % iso.k)];
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        Ok(SourcePipeline::Quotient {
            dim: alg.dim(),
            blocks,
        })
    }

    /// Block reader when a quasi-order certificate is available, otherwise
    /// the quotient pipeline.
    pub fn prepare(
        alg: &Algebra,
        certificate: Option<&QuasiOrder>,
        seed: u64,
        tol: f64,
    ) -> Result<Self> {
        match certificate {
            Some(rho) => Ok(Self::sma(rho)),
            None => Self::quotient(alg, seed, tol),
        }
    }

    /// Block sizes, ascending.
    pub fn ks(&self) -> Vec<usize> {
        match self {
            SourcePipeline::Sma { blocks, .. } => blocks.iter().map(Vec::len).collect(),
            SourcePipeline::Quotient { blocks, .. } => blocks.iter().map(|b| b.k).collect(),
        }
    }

    /// Dimension of the source algebra.
    pub fn dim(&self) -> usize {
        match self {
            SourcePipeline::Sma { pairs, .. } => pairs.len(),
            SourcePipeline::Quotient { dim, .. } => *dim,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Schema(m));
        match self {
            SourcePipeline::Sma { n, pairs, blocks } => {
                let rho = QuasiOrder::new(
                    *n,
                    pairs
                        .iter()
                        .map(|&[i, j]| (i.wrapping_sub(1), j.wrapping_sub(1))),
                )?;
                let mut expected: Vec<Vec<usize>> = Self::sma(&rho).blocks().to_vec();
                let mut got = blocks.clone();
                expected.sort();
                got.sort();
                if expected != got {
                    return bad(
                        "SMA source blocks do not match the condensation of its pairs".into(),
                    );
                }
                if blocks.windows(2).any(|w| w[0].len() > w[1].len()) {
                    return bad("SMA source blocks must be in ascending size".into());
                }
            }
            SourcePipeline::Quotient { dim, blocks } => {
                for (b, block) in blocks.iter().enumerate() {
                    if block.images.len() != *dim
                        || block.images.iter().any(|m| m.len() != block.k * block.k)
                    {
                        return bad(format!("quotient block {} has malformed images", b + 1));
                    }
                    if block
                        .images
                        .iter()
                        .flatten()
                        .flatten()
                        .any(|x| !x.is_finite())
                    {
                        return bad(format!("quotient block {} has non-finite entries", b + 1));
                    }
                }
                if blocks.windows(2).any(|w| w[0].k > w[1].k) {
                    return bad("quotient source blocks must be in ascending size".into());
                }
            }
        }
        Ok(())
    }

    fn blocks(&self) -> &[Vec<usize>] {
        match self {
            SourcePipeline::Sma { blocks, .. } => blocks,
            SourcePipeline::Quotient { .. } => &[],
        }
    }

    /// The simple blocks of `a`, ascending `k`.
    pub fn blocks_of(&self, a: &Element) -> Result<Vec<FloatMatrix>> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        let x = a.to_float();
        match self {
            SourcePipeline::Sma { pairs, blocks, .. } => {
                let n = blocks.iter().map(Vec::len).sum();
                let mut full = FloatMatrix::zeros(n, n);
                for (&[i, j], v) in pairs.iter().zip(&x) {
                    full[(i - 1, j - 1)] = *v;
                }
                Ok(blocks
                    .iter()
                    .map(|members| {
                        let idx: Vec<usize> = members.iter().map(|i| i - 1).collect();
                        full.principal_submatrix(&idx)
                    })
                    .collect())
            }
            SourcePipeline::Quotient { blocks, .. } => Ok(blocks
                .iter()
                .map(|b| {
                    let mut acc = vec![Complex64::zero(); b.k * b.k];
                    for (xl, img) in x.iter().zip(&b.images) {
                        if xl.is_zero() {
                            continue;
                        }
                        for (o, [re, im]) in acc.iter_mut().zip(img) {
                            *o += xl * Complex64::new(*re, *im);
                        }
                    }
                    FloatMatrix::from_fn(b.k, b.k, |r, c| acc[r * b.k + c])
                })
                .collect()),
        }
    }
}

/// A serializable block-repetition map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkMapSpec {
    pub source: SourcePipeline,
    pub ks: Vec<usize>,
    pub targets: Vec<usize>,
    pub family: Vec<Vec<usize>>,
    pub order: Vec<Vec<BlockSlot>>,
}

fn mismatch(target: usize, reason: impl Into<String>) -> Error {
    Error::FamilyMismatch {
        target,
        reason: reason.into(),
    }
}

/// Spec with blocks in ascending source index, repetitions contiguous.
pub fn build_block_map(
    source: SourcePipeline,
    targets: &[usize],
    family: &[Vec<usize>],
) -> Result<ShrinkMapSpec> {
    let ks = source.ks();
    let order = family
        .iter()
        .map(|x| {
            x.iter()
                .enumerate()
                .flat_map(|(block, &count)| {
                    (0..count).map(move |slot| BlockSlot {
                        block,
                        slot,
                        transpose: false,
                    })
                })
                .collect()
        })
        .collect();
    let spec = ShrinkMapSpec {
        source,
        ks,
        targets: targets.to_vec(),
        family: family.to_vec(),
        order,
    };
    spec.validate()?;
    Ok(spec)
}

impl ShrinkMapSpec {
    /// Checks the family against the target equations, the order against
    /// the family, and the pipeline against the declared profile.
    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        if self.source.ks() != self.ks {
            return Err(Error::Schema(
                "declared ks differ from the source pipeline".into(),
            ));
        }
        if self.family.len() != self.targets.len() {
            return Err(mismatch(
                0,
                format!(
                    "{} solution vectors for {} target blocks",
                    self.family.len(),
                    self.targets.len()
                ),
            ));
        }
        if self.order.len() != self.targets.len() {
            return Err(Error::Schema(
                "block order must have one entry per target block".into(),
            ));
        }
        for (j, ((x, &m), order)) in self
            .family
            .iter()
            .zip(&self.targets)
            .zip(&self.order)
            .enumerate()
        {
            if x.len() != self.ks.len() {
                return Err(mismatch(
                    j,
                    format!(
                        "solution has {} entries, expected {}",
                        x.len(),
                        self.ks.len()
                    ),
                ));
            }
            let total: usize = x.iter().zip(&self.ks).map(|(a, b)| a * b).sum();
            if total != m {
                return Err(mismatch(j, format!("Σ k_i x_i = {total}, expected {m}")));
            }
            let mut seen = vec![Vec::new(); self.ks.len()];
            for s in order {
                if s.block >= self.ks.len() {
                    return Err(mismatch(j, format!("block {} out of range", s.block + 1)));
                }
                seen[s.block].push(s.slot);
            }
            for (i, slots) in seen.iter_mut().enumerate() {
                slots.sort_unstable();
                if *slots != (0..x[i]).collect::<Vec<_>>() {
                    return Err(mismatch(
                        j,
                        format!(
                            "block order does not repeat block {} exactly {} times",
                            i + 1,
                            x[i]
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Total size `Σ m_j` of the output matrix.
    pub fn output_size(&self) -> usize {
        self.targets.iter().sum()
    }

    /// Whether every source block appears in some target block.
    pub fn is_covering(&self) -> bool {
        (0..self.ks.len()).all(|i| self.family.iter().any(|x| x[i] > 0))
    }

    /// `φ_j(a)` for each target block `j`.
    pub fn evaluate_blocks(&self, a: &Element) -> Result<Vec<FloatMatrix>> {
        let blocks = self.source.blocks_of(a)?;
        if blocks.iter().any(|b| !b.is_finite()) {
            return Err(Error::Numeric("map value has non-finite entries".into()));
        }
        Ok(self
            .order
            .iter()
            .map(|slots| {
                let parts: Vec<FloatMatrix> = slots
                    .iter()
                    .map(|s| {
                        if s.transpose {
                            blocks[s.block].transpose()
                        } else {
                            blocks[s.block].clone()
                        }
                    })
                    .collect();
                FloatMatrix::block_diagonal(&parts)
            })
            .collect())
    }
}

/// `φ(a) = diag(φ_1(a), …, φ_q(a))`.
pub fn evaluate_map(spec: &ShrinkMapSpec, a: &Element) -> Result<FloatMatrix> {
    Ok(FloatMatrix::block_diagonal(&spec.evaluate_blocks(a)?))
}
