//! Unital finite-dimensional complex algebras given by exact structure
//! constants `e_i e_j = Σ_k c[i][j][k] e_k`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result, Side};
use crate::linalg::{self, ExactMatrix, FloatMatrix, Rref};
use crate::scalar::GaussRational;

/// Sparse coefficient vector: `(basis index, coefficient)`, ascending, no zeros.
pub type SparseVec = Vec<(usize, GaussRational)>;

/// A validated unital associative algebra over `ℂ` with Gaussian-rational
/// structure constants.
#[derive(Clone, Debug)]
pub struct Algebra {
    dim: usize,
    table: Vec<SparseVec>,
    ftable: Vec<Vec<(usize, Complex64)>>,
    unit: Vec<GaussRational>,
    labels: Option<Vec<String>>,
}

/// Coordinates of an algebra element, exact or floating-point.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    Exact(Vec<GaussRational>),
    Float(Vec<Complex64>),
}

/// An element of some algebra, by coordinates in its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    coords: Coords,
}

impl Element {
    pub fn exact(v: Vec<GaussRational>) -> Self {
        Self {
            coords: Coords::Exact(v),
        }
    }

    pub fn float(v: Vec<Complex64>) -> Self {
        Self {
            coords: Coords::Float(v),
        }
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coords::Exact(v) => v.len(),
            Coords::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_exact(&self) -> Option<&[GaussRational]> {
        match &self.coords {
            Coords::Exact(v) => Some(v),
            Coords::Float(_) => None,
        }
    }

    pub fn to_float(&self) -> Vec<Complex64> {
        match &self.coords {
            Coords::Exact(v) => v.iter().map(GaussRational::to_c64).collect(),
            Coords::Float(v) => v.clone(),
        }
    }
}

/// Accumulates sparse terms, dropping zeros.
fn collect_sparse(acc: BTreeMap<usize, GaussRational>) -> SparseVec {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn dense_to_sparse(v: &[GaussRational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

impl Algebra {
    /// Validates structure constants and unit exactly.
    ///
    /// `entries` are `(i, j, k, c)` meaning `c[i][j][k] = c`; repeated
    /// positions are summed. Associativity is checked on every basis triple
    /// in lexicographic order and the first failure is reported.
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, GaussRational)>,
        unit: Vec<GaussRational>,
    ) -> Result<Self> {
        let alg = Self::from_entries(dim, entries, unit)?;
        alg.check_associative()?;
        alg.check_unit()?;
        Ok(alg)
    }

    /// Builds without the associativity and unit checks. For algebras
    /// derived from already validated ones.
    pub(crate) fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, GaussRational)>,
        unit: Vec<GaussRational>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyAlgebra);
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: unit.len(),
            });
        }
        let mut acc: Vec<BTreeMap<usize, GaussRational>> = vec![BTreeMap::new(); dim * dim];
        for (i, j, k, c) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            let slot = acc[i * dim + j]
                .entry(k)
                .or_insert_with(GaussRational::zero);
            *slot += &c;
        }
        let table: Vec<SparseVec> = acc.into_iter().map(collect_sparse).collect();
        Ok(Self::from_table(dim, table, unit))
    }

    fn from_table(dim: usize, table: Vec<SparseVec>, unit: Vec<GaussRational>) -> Self {
        let ftable = table
            .iter()
            .map(|sv| sv.iter().map(|(k, c)| (*k, c.to_c64())).collect())
            .collect();
        Self {
            dim,
            table,
            ftable,
            unit,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn unit(&self) -> &[GaussRational] {
        &self.unit
    }

    pub fn unit_element(&self) -> Element {
        Element::exact(self.unit.clone())
    }

    pub fn basis_vector(&self, i: usize) -> Vec<GaussRational> {
        let mut v = vec![GaussRational::zero(); self.dim];
        v[i] = GaussRational::one();
        v
    }

    /// `e_i e_j` as a sparse vector.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    /// All nonzero structure constants `(i, j, k, c)`, in lexicographic order.
    pub fn structure_entries(
        &self,
    ) -> impl Iterator<Item = (usize, usize, usize, &GaussRational)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (0..self.dim)
                .flat_map(move |j| self.product(i, j).iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    fn sparse_mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, GaussRational> = BTreeMap::new();
        for (i, a) in u {
            for (j, b) in v {
                let ab = a * b;
                for (k, c) in self.product(*i, *j) {
                    *acc.entry(*k).or_insert_with(GaussRational::zero) += &(&ab * c);
                }
            }
        }
        collect_sparse(acc)
    }

    fn check_associative(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.product(i, j);
                for k in 0..self.dim {
                    let jk = self.product(j, k);
                    let lhs = self.sparse_mul(ij, &vec![(k, GaussRational::one())]);
                    let rhs = self.sparse_mul(&vec![(i, GaussRational::one())], jk);
                    if lhs != rhs {
                        return Err(Error::Associativity { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let u = dense_to_sparse(&self.unit);
        for i in 0..self.dim {
            let e = vec![(i, GaussRational::one())];
            if self.sparse_mul(&u, &e) != e {
                return Err(Error::UnitLaw {
                    index: i,
                    side: Side::Left,
                });
            }
            if self.sparse_mul(&e, &u) != e {
                return Err(Error::UnitLaw {
                    index: i,
                    side: Side::Right,
                });
            }
        }
        Ok(())
    }

    /// Exact product of coordinate vectors.
    pub fn mul_exact(&self, u: &[GaussRational], v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut out = vec![GaussRational::zero(); self.dim];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let prod = self.product(i, j);
                if prod.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in prod {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Floating-point product of coordinate vectors.
    pub fn mul_float(&self, u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::zero(); self.dim];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.ftable[i * self.dim + j] {
                    out[*k] += ab * c;
                }
            }
        }
        out
    }

    /// Product of elements; exact when both factors are exact.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (a.as_exact(), b.as_exact()) {
            (Some(u), Some(v)) => Element::exact(self.mul_exact(u, v)),
            _ => Element::float(self.mul_float(&a.to_float(), &b.to_float())),
        }
    }

    /// Matrix of left multiplication `L_a`, exact: column `j` holds `a·e_j`.
    pub fn regular_rep_exact(&self, a: &[GaussRational]) -> ExactMatrix {
        let n = self.dim;
        let mut m = ExactMatrix::zeros(n, n);
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for j in 0..n {
                for (k, c) in self.product(i, j) {
                    m[(*k, j)] += &(ai * c);
                }
            }
        }
        m
    }

    /// Matrix of left multiplication `L_a` in floating point.
    pub fn regular_rep_float(&self, a: &[Complex64]) -> FloatMatrix {
        let n = self.dim;
        let mut m = FloatMatrix::zeros(n, n);
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for j in 0..n {
                for (k, c) in &self.ftable[i * n + j] {
                    m[(*k, j)] += ai * c;
                }
            }
        }
        m
    }

    pub fn regular_rep(&self, a: &Element) -> FloatMatrix {
        self.check_len(a);
        self.regular_rep_float(&a.to_float())
    }

    fn check_len(&self, a: &Element) {
        assert_eq!(a.len(), self.dim, "element does not belong to this algebra");
    }

    /// `sp(a)`: distinct eigenvalues of `L_a`, clustered at `tol`.
    pub fn spectrum(&self, a: &Element, tol: f64) -> Result<Vec<Complex64>> {
        linalg::spectrum_set(&self.regular_rep(a), tol)
    }

    /// Exact elements use the exact rank of `L_a`; float elements test
    /// `0 ∉ sp(a)` at the default clustering tolerance of `L_a`.
    pub fn is_invertible(&self, a: &Element) -> Result<bool> {
        self.check_len(a);
        match a.as_exact() {
            Some(v) => Ok(self.regular_rep_exact(v).rank() == self.dim),
            None => {
                let l = self.regular_rep(a);
                let tol = linalg::default_tol(&l);
                let sp = linalg::spectrum_set(&l, tol)?;
                Ok(sp.iter().all(|z| z.norm() > tol))
            }
        }
    }

    /// Exact trace of `L_v`.
    pub fn trace_left(&self, v: &[GaussRational]) -> GaussRational {
        let mut t = GaussRational::zero();
        for (i, a) in v.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            t += &(a * &self.basis_trace(i));
        }
        t
    }

    /// `tr(L_{e_i}) = Σ_l c[i][l][l]`.
    fn basis_trace(&self, i: usize) -> GaussRational {
        let mut t = GaussRational::zero();
        for l in 0..self.dim {
            for (k, c) in self.product(i, l) {
                if *k == l {
                    t += c;
                }
            }
        }
        t
    }

    /// Gram matrix of the trace form `G_ij = tr(L_{e_i e_j})`.
    pub fn trace_form(&self) -> ExactMatrix {
        let traces: Vec<GaussRational> = (0..self.dim).map(|i| self.basis_trace(i)).collect();
        let mut g = ExactMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut s = GaussRational::zero();
                for (k, c) in self.product(i, j) {
                    if !traces[*k].is_zero() {
                        s += &(c * &traces[*k]);
                    }
                }
                g[(i, j)] = s;
            }
        }
        g
    }

    /// Deterministic random element: real and imaginary parts of every
    /// coordinate i.i.d. uniform on `[-1, 1]`.
    pub fn random_element(&self, seed: u64) -> Element {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Element::float(random_coords(&mut rng, self.dim))
    }

    /// The same algebra in the basis `f_a = Σ_k t[k][a] e_k`.
    pub fn change_basis(&self, t: &ExactMatrix) -> Result<Algebra> {
        let n = self.dim;
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.nrows(),
            });
        }
        let tinv = t.inverse().ok_or(Error::LinearlyDependent)?;
        let cols: Vec<Vec<GaussRational>> = (0..n).map(|a| t.column(a)).collect();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let prod = tinv.mul_vec(&self.mul_exact(&cols[a], &cols[b]));
                for (k, c) in prod.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((a, b, k, c));
                    }
                }
            }
        }
        Algebra::from_entries(n, entries, tinv.mul_vec(&self.unit))
    }

    /// `ℂ`, one basis element `e` with `e² = e`.
    pub fn complex_numbers() -> Algebra {
        Self::direct_sum_algebra(&[1]).expect("nonempty block list")
    }

    /// Full matrix algebra `M_k` on the matrix-unit basis, row-major.
    pub fn matrix_algebra(k: usize) -> Result<Algebra> {
        Self::direct_sum_algebra(&[k])
    }

    /// Block-diagonal `M_{k_1} ⊕ ⋯ ⊕ M_{k_p}`: per block the matrix units
    /// `E_rs` in row-major order, blocks in the given order.
    pub fn direct_sum_algebra(blocks: &[usize]) -> Result<Algebra> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidProfile(
                "block sizes must be a nonempty list of positive counts".into(),
            ));
        }
        let dim: usize = blocks.iter().map(|k| k * k).sum();
        let mut entries = Vec::new();
        let mut unit = vec![GaussRational::zero(); dim];
        let mut labels = Vec::with_capacity(dim);
        let mut off = 0;
        for (b, &k) in blocks.iter().enumerate() {
            let idx = |r: usize, s: usize| off + r * k + s;
            for r in 0..k {
                for s in 0..k {
                    labels.push(format!("B{}E{}{}", b + 1, r + 1, s + 1));
                    for u in 0..k {
                        entries.push((idx(r, s), idx(s, u), idx(r, u), GaussRational::one()));
                    }
                }
                unit[idx(r, r)] = GaussRational::one();
            }
            off += k * k;
        }
        Algebra::from_entries(dim, entries, unit)?.with_labels(labels)
    }

    /// `ℂ[x]/(x^k)` on the basis `1, t, …, t^{k-1}`.
    pub fn truncated_polynomial(k: usize) -> Result<Algebra> {
        if k == 0 {
            return Err(Error::EmptyAlgebra);
        }
        let mut entries = Vec::new();
        for i in 0..k {
            for j in 0..k - i {
                entries.push((i, j, i + j, GaussRational::one()));
            }
        }
        let mut unit = vec![GaussRational::zero(); k];
        unit[0] = GaussRational::one();
        let labels = (0..k).map(|i| format!("t^{i}")).collect();
        Algebra::from_entries(k, entries, unit)?.with_labels(labels)
    }
}

pub(crate) fn random_coords<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect()
}

/// An exact subspace known to be a two-sided ideal, stored in reduced row
/// echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    rref: Rref,
}

impl IdealBasis {
    /// Validates linear independence and two-sided closure exactly.
    pub fn new(alg: &Algebra, vectors: &[Vec<GaussRational>]) -> Result<Self> {
        for v in vectors {
            if v.len() != alg.dim() {
                return Err(Error::DimensionMismatch {
                    expected: alg.dim(),
                    got: v.len(),
                });
            }
        }
        let rref = Rref::of_rows(vectors, alg.dim());
        if rref.rank() != vectors.len() {
            return Err(Error::LinearlyDependent);
        }
        let ideal = Self { rref };
        ideal.check_closed(alg)?;
        Ok(ideal)
    }

    /// Span of `vectors`, validated as an ideal; dependent input allowed.
    pub fn span(alg: &Algebra, vectors: &[Vec<GaussRational>]) -> Result<Self> {
        let ideal = Self {
            rref: Rref::of_rows(vectors, alg.dim()),
        };
        ideal.check_closed(alg)?;
        Ok(ideal)
    }

    pub fn zero(alg: &Algebra) -> Self {
        Self {
            rref: Rref::empty(alg.dim()),
        }
    }

    /// Wraps a subspace already known to be an ideal by construction.
    pub(crate) fn from_rref_unchecked(rref: Rref) -> Self {
        Self { rref }
    }

    fn check_closed(&self, alg: &Algebra) -> Result<()> {
        for (vi, v) in self.rref.rows().iter().enumerate() {
            for b in 0..alg.dim() {
                let e = alg.basis_vector(b);
                if !self.rref.contains(&alg.mul_exact(&e, v)) {
                    return Err(Error::NotAnIdeal {
                        vector: vi,
                        basis: b,
                        side: Side::Left,
                    });
                }
                if !self.rref.contains(&alg.mul_exact(v, &e)) {
                    return Err(Error::NotAnIdeal {
                        vector: vi,
                        basis: b,
                        side: Side::Right,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn vectors(&self) -> &[Vec<GaussRational>] {
        self.rref.rows()
    }

    pub fn contains(&self, v: &[GaussRational]) -> bool {
        self.rref.contains(v)
    }

    pub fn rref(&self) -> &Rref {
        &self.rref
    }
}

/// The canonical projection `A → A/I`.
///
/// The quotient basis is the image of the standard basis vectors at the
/// non-pivot positions of the ideal's reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    source_dim: usize,
    matrix: ExactMatrix,
    complement: Vec<usize>,
}

impl QuotientMap {
    /// Projection matrix, `dim(A/I) × dim(A)`.
    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.complement.len()
    }

    /// Standard basis indices of `A` whose images form the quotient basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn apply_exact(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_float(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.source_dim);
        (0..self.matrix.nrows())
            .map(|r| {
                self.matrix
                    .row(r)
                    .iter()
                    .zip(v)
                    .filter(|(q, _)| !q.is_zero())
                    .map(|(q, x)| q.to_c64() * x)
                    .sum()
            })
            .collect()
    }

    pub fn apply(&self, a: &Element) -> Element {
        match a.as_exact() {
            Some(v) => Element::exact(self.apply_exact(v)),
            None => Element::float(self.apply_float(&a.to_float())),
        }
    }

    /// Section `A/I → A`: places quotient coordinates on the complement.
    pub fn lift(&self, w: &[GaussRational]) -> Vec<GaussRational> {
        let mut v = vec![GaussRational::zero(); self.source_dim];
        for (x, &c) in w.iter().zip(&self.complement) {
            v[c] = x.clone();
        }
        v
    }
}

/// `A/I` with its canonical projection.
pub fn quotient_algebra(alg: &Algebra, ideal: &IdealBasis) -> Result<(Algebra, QuotientMap)> {
    let n = alg.dim();
    let rref = ideal.rref();
    let complement = rref.free_columns();
    let m = complement.len();
    if m == 0 {
        return Err(Error::InvalidProfile(
            "quotient by the whole algebra is the zero algebra".into(),
        ));
    }
    // q(v)_a = v[c_a] - Σ_r v[p_r] · row_r[c_a]
    let mut matrix = ExactMatrix::zeros(m, n);
    for (a, &c) in complement.iter().enumerate() {
        matrix[(a, c)] = GaussRational::one();
        for (row, &p) in rref.rows().iter().zip(rref.pivots()) {
            if !row[c].is_zero() {
                matrix[(a, p)] = -&row[c];
            }
        }
    }
    let q = QuotientMap {
        source_dim: n,
        matrix,
        complement,
    };
    let mut entries = Vec::new();
    for (a, &ca) in q.complement.iter().enumerate() {
        for (b, &cb) in q.complement.iter().enumerate() {
            let mut prod = vec![GaussRational::zero(); n];
            for (k, c) in alg.product(ca, cb) {
                prod[*k] = c.clone();
            }
            for (k, c) in q.apply_exact(&prod).into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((a, b, k, c));
                }
            }
        }
    }
    let unit = q.apply_exact(alg.unit());
    let mut quotient = Algebra::from_entries(m, entries, unit)?;
    if let Some(labels) = alg.labels() {
        quotient.labels = Some(
            q.complement
                .iter()
                .map(|&c| format!("[{}]", labels[c]))
                .collect(),
        );
    }
    Ok((quotient, q))
}

/// Free function form of [`Algebra::direct_sum_algebra`].
pub fn direct_sum_algebra(blocks: &[usize]) -> Result<Algebra> {
    Algebra::direct_sum_algebra(blocks)
}
