//! Complex double-precision matrices and the spectral kernels built on them.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::charpoly::berkowitz;

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix(DMatrix<Complex64>);

impl FloatMatrix {
    /// Rejects NaN and infinite entries.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::zero() })
    }

    /// Block-diagonal assembly in the given order.
    pub fn block_diagonal(blocks: &[FloatMatrix]) -> Self {
        let n: usize = blocks.iter().map(FloatMatrix::nrows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            let k = b.nrows();
            out.0.view_mut((off, off), (k, k)).copy_from(&b.0);
            off += k;
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn mul(&self, rhs: &FloatMatrix) -> FloatMatrix {
        Self(&self.0 * &rhs.0)
    }

    pub fn add(&self, rhs: &FloatMatrix) -> FloatMatrix {
        Self(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &FloatMatrix) -> FloatMatrix {
        Self(&self.0 - &rhs.0)
    }

    pub fn scale(&self, s: Complex64) -> FloatMatrix {
        Self(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Inverse by LU; `None` when numerically singular.
    pub fn try_inverse(&self) -> Option<FloatMatrix> {
        self.0.clone().try_inverse().map(Self)
    }

    pub fn smallest_singular_value(&self) -> f64 {
        let n = self.nrows().min(self.ncols());
        if n == 0 {
            return 0.0;
        }
        self.0
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues with algebraic multiplicity, via complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                got: self.ncols(),
            });
        }
        if !self.is_finite() {
            return Err(Error::Numeric("matrix has non-finite entries".into()));
        }
        match self.nrows() {
            0 => Ok(Vec::new()),
            1 => Ok(vec![self[(0, 0)]]),
            _ => {
                let schur = [1.0, 16.0, 256.0, 4096.0]
                    .iter()
                    .find_map(|scale| Schur::try_new(self.0.clone(), scale * f64::EPSILON, 10_000))
                    .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
                let ev = schur
                    .eigenvalues()
                    .ok_or_else(|| Error::Numeric("Schur form is not triangular".into()))?;
                let ev: Vec<Complex64> = ev.iter().copied().collect();
                if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::Numeric(
                        "eigensolver produced non-finite values".into(),
                    ));
                }
                Ok(ev)
            }
        }
    }
}

impl Index<(usize, usize)> for FloatMatrix {
    type Output = Complex64;
    fn index(&self, ij: (usize, usize)) -> &Complex64 {
        &self.0[ij]
    }
}

impl IndexMut<(usize, usize)> for FloatMatrix {
    fn index_mut(&mut self, ij: (usize, usize)) -> &mut Complex64 {
        &mut self.0[ij]
    }
}

/// Default clustering tolerance for a matrix: `1e-9 · (1 + max|entry|)`.
pub fn default_tol(m: &FloatMatrix) -> f64 {
    1e-9 * (1.0 + m.max_abs())
}

/// A group of numerically equal eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub count: usize,
}

/// Eigenvalues as a multiset and as a clustered set.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpectrum {
    pub multiset: Vec<Complex64>,
    pub set: Vec<Complex64>,
}

/// Single-linkage clustering at distance `tol`; each cluster is reported by
/// its centroid. Output is sorted by (re, im) of the centers.
pub fn cluster_values(values: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::zero(), 0); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sums[r].0 += values[i];
        sums[r].1 += 1;
    }
    let mut out: Vec<Cluster> = sums
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .map(|(s, c)| Cluster {
            center: s / c as f64,
            count: c,
        })
        .collect();
    sort_clusters(&mut out);
    out
}

fn sort_clusters(c: &mut [Cluster]) {
    c.sort_by(|a, b| {
        a.center
            .re
            .total_cmp(&b.center.re)
            .then(a.center.im.total_cmp(&b.center.im))
    });
}

/// Eigenvalue multiset of `m` plus the set obtained by centroid merging at
/// distance `tol`.
pub fn float_eigenvalues(m: &FloatMatrix, tol: f64) -> Result<EigenSpectrum> {
    let multiset = m.eigenvalues()?;
    let set = cluster_values(&multiset, tol)
        .into_iter()
        .map(|c| c.center)
        .collect();
    Ok(EigenSpectrum { multiset, set })
}

/// Distinct eigenvalues of `m`, robust to defective (non-diagonalizable)
/// eigenvalues.
///
/// A Jordan block of size `s` scatters its computed eigenvalues on a circle
/// of radius about `ε^{1/s}`, far beyond `tol`, while their centroid stays
/// accurate. Nearby clusters are merged into their centroid `μ` only when
/// `m - μI` is numerically singular (`σ_min ≤ tol`), which is exactly the
/// condition for `μ` to be an eigenvalue. Otherwise the group is split at a
/// finer radius and examined again.
pub fn spectrum_clusters(m: &FloatMatrix, tol: f64) -> Result<Vec<Cluster>> {
    let ev = m.eigenvalues()?;
    let base = cluster_values(&ev, tol);
    if base.len() <= 1 {
        return Ok(base);
    }
    let scale = 1.0 + m.max_abs();
    let radius = 0.2 * scale;
    let mut out = Vec::with_capacity(base.len());
    for group in group_clusters(&base, radius) {
        resolve_group(m, group, radius, tol, &mut out);
    }
    sort_clusters(&mut out);
    Ok(out)
}

/// Convenience wrapper returning only the centers.
pub fn spectrum_set(m: &FloatMatrix, tol: f64) -> Result<Vec<Complex64>> {
    Ok(spectrum_clusters(m, tol)?
        .into_iter()
        .map(|c| c.center)
        .collect())
}

fn group_clusters(cs: &[Cluster], radius: f64) -> Vec<Vec<Cluster>> {
    let centers: Vec<Complex64> = cs.iter().map(|c| c.center).collect();
    let n = cs.len();
    let mut label = vec![usize::MAX; n];
    let mut groups = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let g = groups.len();
        label[s] = g;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(cs[x]);
            for y in 0..n {
                if label[y] == usize::MAX && (centers[x] - centers[y]).norm() <= radius {
                    label[y] = g;
                    stack.push(y);
                }
            }
        }
        groups.push(members);
    }
    groups
}

fn resolve_group(
    m: &FloatMatrix,
    group: Vec<Cluster>,
    radius: f64,
    tol: f64,
    out: &mut Vec<Cluster>,
) {
    if group.len() == 1 {
        out.push(group[0]);
        return;
    }
    let count: usize = group.iter().map(|c| c.count).sum();
    let mu = group
        .iter()
        .map(|c| c.center * c.count as f64)
        .sum::<Complex64>()
        / count as f64;
    let n = m.nrows();
    let shifted =
        FloatMatrix::from_fn(n, n, |i, j| if i == j { m[(i, j)] - mu } else { m[(i, j)] });
    if shifted.smallest_singular_value() <= tol {
        out.push(Cluster { center: mu, count });
        return;
    }
    let finer = radius / 4.0;
    if finer < tol {
        out.extend(group);
        return;
    }
    for sub in group_clusters(&group, finer) {
        resolve_group(m, sub, finer, tol, out);
    }
}

/// Monic characteristic polynomial `det(xI - M)`, ascending coefficients.
pub fn char_poly(m: &FloatMatrix) -> Vec<Complex64> {
    assert!(m.is_square(), "char_poly of a non-square matrix");
    let mut p = berkowitz(m.nrows(), |i, j| m[(i, j)]);
    if let Some(last) = p.last_mut() {
        *last = Complex64::new(1.0, 0.0);
    }
    p
}

/// Evaluates an ascending-coefficient polynomial (Horner).
pub fn eval_poly(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * x + c)
}

/// `max_{a ∈ from} min_{b ∈ to} |a - b|`; zero when `from` is empty.
pub fn directed_distance(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| (a - b).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    directed_distance(a, b).max(directed_distance(b, a))
}
