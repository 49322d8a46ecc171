//! Exact linear algebra over the Gaussian rationals.
//!
//! Elimination is fraction-free: each row is cleared of denominators and the
//! matrix is brought to echelon form over the Gaussian integers with the
//! Bareiss update `a'_ij = (a_rc a_ij - a_ic a_rj) / prev_pivot`, where the
//! division is always exact. Pivots are the first nonzero entry in column
//! order. The echelon form is then normalized to reduced row echelon form
//! over `ℚ(i)`.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::float::FloatMatrix;
use crate::scalar::GaussRational;

/// Gaussian integer used only inside the fraction-free elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        Self {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self {
                re: &self.re * &o.re,
                im: BigInt::zero(),
            };
        }
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Division known to be exact in `ℤ[i]`.
    fn div_exact(&self, d: &Self) -> Self {
        if d.im.is_zero() {
            debug_assert!(self.re.is_multiple_of(&d.re) && self.im.is_multiple_of(&d.re));
            return Self {
                re: &self.re / &d.re,
                im: &self.im / &d.re,
            };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!(re.is_multiple_of(&n) && im.is_multiple_of(&n));
        Self {
            re: re / &n,
            im: im / n,
        }
    }

    fn to_gauss_rational(&self) -> GaussRational {
        GaussRational::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

/// Scales a row by the lcm of its denominators to land in `ℤ[i]`.
fn clear_denominators(row: &[GaussRational]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for x in row {
        if !x.is_zero() {
            l = l.lcm(&x.denom_lcm());
        }
    }
    row.iter()
        .map(|x| {
            let re = x.re() * BigRational::from_integer(l.clone());
            let im = x.im() * BigRational::from_integer(l.clone());
            debug_assert!(re.is_integer() && im.is_integer());
            GaussInt {
                re: re.to_integer(),
                im: im.to_integer(),
            }
        })
        .collect()
}

/// Fraction-free echelon form; returns the nonzero echelon rows and their
/// pivot columns.
fn fraction_free_echelon(
    rows: &[Vec<GaussRational>],
    cols: usize,
) -> (Vec<Vec<GaussInt>>, Vec<usize>) {
    let mut a: Vec<Vec<GaussInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| clear_denominators(r))
        .collect();
    let mut pivots = Vec::new();
    let mut prev = GaussInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let lhs = piv.mul(&row[j]);
                let v = if factor.is_zero() {
                    lhs
                } else {
                    lhs.sub(&factor.mul(&pivot_row[j]))
                };
                row[j] = v.div_exact(&prev);
            }
            row[c] = GaussInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Reduced row echelon form of a row space: pivot entries are 1 and every
/// pivot column is zero outside its pivot row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    cols: usize,
    rows: Vec<Vec<GaussRational>>,
    pivots: Vec<usize>,
}

impl Rref {
    pub fn of_rows(rows: &[Vec<GaussRational>], cols: usize) -> Self {
        let (ech, pivots) = fraction_free_echelon(rows, cols);
        let mut out: Vec<Vec<GaussRational>> = ech
            .iter()
            .zip(&pivots)
            .map(|(row, &p)| {
                let inv = row[p].to_gauss_rational().inv().expect("pivot is nonzero");
                row.iter().map(|x| &x.to_gauss_rational() * &inv).collect()
            })
            .collect();
        for r in (0..out.len()).rev() {
            let p = pivots[r];
            let (above, rest) = out.split_at_mut(r);
            let pr = &rest[0];
            for row in above.iter_mut() {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for j in p..cols {
                    if !pr[j].is_zero() {
                        let d = &f * &pr[j];
                        row[j] -= &d;
                    }
                }
            }
        }
        Self {
            cols,
            rows: out,
            pivots,
        }
    }

    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<GaussRational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Column indices that carry no pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Remainder of `v` after eliminating every pivot coordinate; zero iff
    /// `v` lies in the row space.
    pub fn reduce(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(v.len(), self.cols);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    let d = &f * &row[j];
                    out[j] -= &d;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[GaussRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Basis of `{v : row · v = 0 for every row}`, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<GaussRational>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![GaussRational::zero(); self.cols];
                v[f] = GaussRational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[f];
                }
                v
            })
            .collect()
    }
}

/// Dense exact matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussRational::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| x.into()).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[Vec<GaussRational>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GaussRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<GaussRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rref(&self) -> Rref {
        Rref::of_rows(&self.row_vecs(), self.cols)
    }

    pub fn rank(&self) -> usize {
        fraction_free_echelon(&self.row_vecs(), self.cols).1.len()
    }

    /// Basis of the kernel `{v : Mv = 0}`; `cols - rank` vectors.
    pub fn kernel(&self) -> Vec<Vec<GaussRational>> {
        self.rref().null_space()
    }

    /// Exact inverse, or `None` if singular or non-square.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<GaussRational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| {
                    if i == j {
                        GaussRational::one()
                    } else {
                        GaussRational::zero()
                    }
                }));
                r
            })
            .collect();
        let rref = Rref::of_rows(&aug, 2 * n);
        if rref.rank() != n || rref.pivots().iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(ExactMatrix::from_rows(
            rref.rows().iter().map(|r| r[n..].to_vec()).collect(),
        ))
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GaussRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Kernel basis of `m`, exact.
pub fn exact_kernel(m: &ExactMatrix) -> Vec<Vec<GaussRational>> {
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_gr(rng: &mut ChaCha8Rng) -> GaussRational {
        let rn: i64 = rng.gen_range(-4..=4);
        let rd: i64 = rng.gen_range(1..=3);
        let im: i64 = rng.gen_range(-2..=2);
        GaussRational::from_parts(rn.into(), rd.into(), im.into(), 1.into()).unwrap()
    }

    #[test]
    fn identity_has_empty_kernel() {
        assert!(ExactMatrix::identity(2).kernel().is_empty());
    }

    #[test]
    fn rank_one_symmetric_kernel() {
        let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // Up to scaling, (1, -1).
        assert_eq!(&v[0] + &v[1], GaussRational::zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn random_kernel_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            // Rank-deficient 5x7 built as a product of 5xr and rx7 factors.
            let r = 1 + trial % 5;
            let a = ExactMatrix::from_rows(
                (0..5)
                    .map(|_| (0..r).map(|_| random_gr(&mut rng)).collect())
                    .collect(),
            );
            let b = ExactMatrix::from_rows(
                (0..r)
                    .map(|_| (0..7).map(|_| random_gr(&mut rng)).collect())
                    .collect(),
            );
            let m = a.mul(&b);
            let k = m.kernel();
            assert_eq!(k.len() + m.rank(), 7);
            for v in &k {
                assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            let basis = ExactMatrix::from_columns(&k);
            if !k.is_empty() {
                assert_eq!(basis.rank(), k.len());
            }
        }
    }

    #[test]
    fn gaussian_entries_eliminate_exactly() {
        let i = GaussRational::i();
        let one = GaussRational::one();
        // Rows (1, i) and (i, -1) are dependent: second = i * first.
        let m = ExactMatrix::from_rows(vec![
            vec![one.clone(), i.clone()],
            vec![i.clone(), -one.clone()],
        ]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(3));
        assert!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]])
            .inverse()
            .is_none());
    }

    #[test]
    fn rref_membership() {
        let rref = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]).rref();
        assert!(rref.contains(&[2.into(), 2.into(), 5.into()]));
        assert!(!rref.contains(&[1.into(), 0.into(), 0.into()]));
        assert_eq!(rref.free_columns(), vec![1]);
    }
}
