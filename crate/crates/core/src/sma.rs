//! Structural matrix algebras: the span of the matrix units `E_ij` for the
//! pairs of a quasi-order (reflexive, transitive relation) on `{0, …, n-1}`.
//!
//! The combinatorics here (condensation, radical, block projection) form an
//! independent pipeline to the numerical one in [`crate::wedderburn`]; the two
//! must always agree on the block multiset.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{random_coords, Algebra, Element, IdealBasis};
use crate::error::{Error, Result};
use crate::linalg::{FloatMatrix, Rref};
use crate::scalar::GaussRational;
use crate::wedderburn::attempt_seed;

/// Largest accepted 2-norm condition number of the conjugating element.
const MAX_CONDITION: f64 = 1e4;
const SAMPLE_RETRIES: usize = 64;

/// A reflexive, transitive relation on `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiOrder {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl QuasiOrder {
    /// Validates range, reflexivity and transitivity, reporting a witness.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let q = Self::unchecked(n, pairs)?;
        for i in 0..n {
            if !q.pairs.contains(&(i, i)) {
                return Err(Error::Reflexivity { i });
            }
        }
        if let Some((i, j, k)) = q.transitivity_witness() {
            return Err(Error::Transitivity { i, j, k });
        }
        Ok(q)
    }

    /// Range-checked relation that may be neither reflexive nor transitive.
    fn unchecked(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlgebra);
        }
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            for x in [i, j] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, dim: n });
                }
            }
        }
        Ok(Self { n, pairs })
    }

    /// Adds the diagonal and/or the transitive closure before validating.
    pub fn with_closure(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        reflexive: bool,
        transitive: bool,
    ) -> Result<Self> {
        let mut q = Self::unchecked(n, pairs)?;
        if reflexive {
            q.pairs.extend((0..n).map(|i| (i, i)));
        }
        if transitive {
            let mut reach = q.matrix();
            // Warshall.
            for k in 0..n {
                for i in 0..n {
                    if reach[i][k] {
                        for j in 0..n {
                            if reach[k][j] {
                                reach[i][j] = true;
                            }
                        }
                    }
                }
            }
            q.pairs = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| reach[i][j])
                .collect();
        }
        Self::new(n, q.pairs)
    }

    /// Equivalence relation whose classes are consecutive runs of the given
    /// sizes; its SMA is `M_{k_1} ⊕ … ⊕ M_{k_p}`.
    pub fn block_equivalence(ks: &[usize]) -> Result<Self> {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::InvalidProfile(format!(
                "block sizes must be positive, got {ks:?}"
            )));
        }
        let mut pairs = Vec::new();
        let mut start = 0;
        for &k in ks {
            for i in start..start + k {
                pairs.extend((start..start + k).map(|j| (i, j)));
            }
            start += k;
        }
        Self::new(start, pairs)
    }

    fn matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.n]; self.n];
        for &(i, j) in &self.pairs {
            m[i][j] = true;
        }
        m
    }

    fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.matrix();
        for &(i, j) in &self.pairs {
            for k in 0..self.n {
                if m[j][k] && !m[i][k] {
                    return Some((i, j, k));
                }
            }
        }
        None
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    /// Pairs in lexicographic order; this is the SMA basis order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn index(&self) -> HashMap<(usize, usize), usize> {
        self.pairs().enumerate().map(|(b, p)| (p, b)).collect()
    }
}

/// The algebra spanned by `{E_ij : (i,j) ∈ ρ}`, basis in pair order.
pub fn sma_algebra(rho: &QuasiOrder) -> Algebra {
    let index = rho.index();
    let pairs: Vec<(usize, usize)> = rho.pairs().collect();
    let mut entries = Vec::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                entries.push((a, b, index[&(i, l)], GaussRational::one()));
            }
        }
    }
    let unit = pairs
        .iter()
        .map(|&(i, j)| {
            if i == j {
                GaussRational::one()
            } else {
                GaussRational::zero()
            }
        })
        .collect();
    let labels = pairs
        .iter()
        .map(|&(i, j)| format!("E{},{}", i + 1, j + 1))
        .collect();
    Algebra::from_entries(pairs.len(), entries, unit)
        .and_then(|a| a.with_labels(labels))
        .expect("a quasi-order is nonempty and closed under composition")
}

/// Mutual-reachability classes in a deterministic topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// `permutation[r]` is the original index placed at position `r`.
    pub permutation: Vec<usize>,
    /// Class sizes in topological order.
    pub block_sizes: Vec<usize>,
    /// Block (position in topological order) of each original index.
    pub class_of: Vec<usize>,
}

impl Condensation {
    /// Original indices of block `b`, ascending.
    pub fn members(&self, b: usize) -> &[usize] {
        let start: usize = self.block_sizes[..b].iter().sum();
        &self.permutation[start..start + self.block_sizes[b]]
    }

    pub fn blocks(&self) -> usize {
        self.block_sizes.len()
    }
}

/// Condensation of `ρ`. Ties in the topological order go to the class with
/// the smallest member, so the result is a deterministic normal form.
pub fn condensation(rho: &QuasiOrder) -> Condensation {
    let n = rho.n;
    // Classes of the mutual relation; each labelled by its smallest member.
    let mut rep = vec![usize::MAX; n];
    for i in 0..n {
        if rep[i] == usize::MAX {
            for j in i..n {
                if rho.contains(i, j) && rho.contains(j, i) {
                    rep[j] = i;
                }
            }
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    let mut indegree: HashMap<usize, usize> = reps.iter().map(|&r| (r, 0)).collect();
    let mut edges: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (i, j) in rho.pairs() {
        let (ri, rj) = (rep[i], rep[j]);
        if ri != rj && edges.entry(ri).or_default().insert(rj) {
            *indegree.get_mut(&rj).expect("class exists") += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = reps
        .iter()
        .filter(|r| indegree[r] == 0)
        .map(|&r| Reverse(r))
        .collect();
    let mut order = Vec::with_capacity(reps.len());
    while let Some(Reverse(r)) = ready.pop() {
        order.push(r);
        for &s in edges.get(&r).into_iter().flatten() {
            let d = indegree.get_mut(&s).expect("class exists");
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    assert_eq!(
        order.len(),
        reps.len(),
        "condensation of a quasi-order is acyclic"
    );
    let block_of_rep: HashMap<usize, usize> =
        order.iter().enumerate().map(|(b, &r)| (r, b)).collect();
    let class_of: Vec<usize> = (0..n).map(|i| block_of_rep[&rep[i]]).collect();
    let mut permutation = Vec::with_capacity(n);
    let mut block_sizes = Vec::with_capacity(order.len());
    for b in 0..order.len() {
        let members: Vec<usize> = (0..n).filter(|&i| class_of[i] == b).collect();
        block_sizes.push(members.len());
        permutation.extend(members);
    }
    for (i, j) in rho.pairs() {
        assert!(
            class_of[i] <= class_of[j],
            "condensation is not block upper-triangular"
        );
    }
    Condensation {
        permutation,
        block_sizes,
        class_of,
    }
}

/// `{E_ij : i, j in different classes}`, the radical of the SMA.
pub fn sma_radical(rho: &QuasiOrder) -> IdealBasis {
    let c = condensation(rho);
    let dim = rho.len();
    let rows: Vec<Vec<GaussRational>> = rho
        .pairs()
        .enumerate()
        .filter(|&(_, (i, j))| c.class_of[i] != c.class_of[j])
        .map(|(b, _)| {
            let mut v = vec![GaussRational::zero(); dim];
            v[b] = GaussRational::one();
            v
        })
        .collect();
    // Unit vectors in ascending position are already in reduced form, and
    // the span is an ideal since classes are totally ordered along any path.
    IdealBasis::from_rref_unchecked(Rref::of_rows(&rows, dim))
}

/// Block-diagonal truncation: zeroes the coordinates of units joining
/// different classes.
pub fn block_projection(rho: &QuasiOrder, x: &Element) -> Element {
    let c = condensation(rho);
    assert_eq!(x.len(), rho.len(), "element does not belong to this SMA");
    let keep: Vec<bool> = rho
        .pairs()
        .map(|(i, j)| c.class_of[i] == c.class_of[j])
        .collect();
    match x.as_exact() {
        Some(v) => Element::exact(
            v.iter()
                .zip(&keep)
                .map(|(a, &k)| if k { a.clone() } else { GaussRational::zero() })
                .collect(),
        ),
        None => Element::float(
            x.to_float()
                .iter()
                .zip(&keep)
                .map(|(a, &k)| if k { *a } else { Complex64::zero() })
                .collect(),
        ),
    }
}

/// The `n×n` matrix of an SMA element given in pair coordinates.
pub fn to_matrix(rho: &QuasiOrder, coords: &[Complex64]) -> FloatMatrix {
    assert_eq!(coords.len(), rho.len());
    let mut m = FloatMatrix::zeros(rho.n, rho.n);
    for ((i, j), c) in rho.pairs().zip(coords) {
        m[(i, j)] = *c;
    }
    m
}

/// Pair coordinates of an `n×n` matrix, failing if an entry outside the
/// relation exceeds `tol`.
pub fn from_matrix(rho: &QuasiOrder, m: &FloatMatrix, tol: f64) -> Result<Vec<Complex64>> {
    for i in 0..rho.n {
        for j in 0..rho.n {
            if !rho.contains(i, j) && m[(i, j)].norm() > tol {
                return Err(Error::Numeric(format!(
                    "entry ({}, {}) = {} lies outside the structural pattern",
                    i + 1,
                    j + 1,
                    m[(i, j)]
                )));
            }
        }
    }
    Ok(rho.pairs().map(|(i, j)| m[(i, j)]).collect())
}

/// A dense diagonalizable element `S·D·S⁻¹` with its certificate.
#[derive(Clone, Debug)]
pub struct DiagConjSample {
    pub element: Element,
    /// Conjugating element, as an `n×n` matrix.
    pub s: FloatMatrix,
    /// Diagonal of `D`.
    pub d: Vec<Complex64>,
}

/// `S·D·S⁻¹` with `S = 1 + 0.5·R` for a random SMA element `R` and `D` a
/// random arrangement of `1, …, n`, each jittered by at most 0.1.
pub fn sample_diag_conj(rho: &QuasiOrder, seed: u64) -> Result<DiagConjSample> {
    sample_diag_conj_with(rho, seed, None)
}

/// As [`sample_diag_conj`], optionally with a prescribed diagonal.
pub fn sample_diag_conj_with(
    rho: &QuasiOrder,
    seed: u64,
    diag: Option<&[Complex64]>,
) -> Result<DiagConjSample> {
    let n = rho.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: Vec<Complex64> = match diag {
        Some(d) => {
            if d.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.len(),
                });
            }
            d.to_vec()
        }
        None => {
            let mut ints: Vec<usize> = (1..=n).collect();
            ints.shuffle(&mut rng);
            ints.iter()
                .map(|&v| {
                    Complex64::new(
                        v as f64 + rng.gen_range(-0.07..=0.07),
                        rng.gen_range(-0.07..=0.07),
                    )
                })
                .collect()
        }
    };
    for attempt in 0..SAMPLE_RETRIES {
        let mut srng = ChaCha8Rng::seed_from_u64(attempt_seed(seed, attempt));
        let r = to_matrix(rho, &random_coords(&mut srng, rho.len()));
        let s = FloatMatrix::identity(n).add(&r.scale(Complex64::new(0.5, 0.0)));
        let svd = s.as_dmatrix().clone().svd(false, false);
        let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
        if !(smin > 0.0 && smax / smin <= MAX_CONDITION) {
            continue;
        }
        let Some(s_inv) = s.try_inverse() else {
            continue;
        };
        let x = s.mul(&FloatMatrix::diagonal(&d)).mul(&s_inv);
        let coords = from_matrix(rho, &x, 1e-9 * (1.0 + x.max_abs()))?;
        return Ok(DiagConjSample {
            element: Element::float(coords),
            s,
            d,
        });
    }
    Err(Error::RetryExhausted {
        what: "invertible conjugating element",
        attempts: SAMPLE_RETRIES,
    })
}

/// Every quasi-order on `{0, …, n-1}`, in a fixed order.
pub fn all_quasi_orders(n: usize) -> Vec<QuasiOrder> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    assert!(off.len() < 32, "enumeration is meant for n ≤ 5");
    (0u32..1 << off.len())
        .filter_map(|mask| {
            let pairs = (0..n).map(|i| (i, i)).chain(
                off.iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &p)| p),
            );
            QuasiOrder::new(n, pairs).ok()
        })
        .collect()
}

/// Transitive closure of a random reflexive relation with edge density `density`.
pub fn random_quasi_order(n: usize, density: f64, rng: &mut impl Rng) -> QuasiOrder {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.gen_bool(density))
        .collect();
    QuasiOrder::with_closure(n, pairs, true, true).expect("closure is a quasi-order")
}
