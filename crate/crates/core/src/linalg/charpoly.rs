//! Division-free characteristic polynomials (Samuelson–Berkowitz).

use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

/// Coefficients of `det(xI - M)` in ascending powers; the last entry is 1.
///
/// Works over any commutative ring, so the same routine serves exact and
/// floating-point matrices. `get(i, j)` reads entry `(i, j)` of an `n×n`
/// matrix.
pub fn berkowitz<T, F>(n: usize, get: F) -> Vec<T>
where
    T: Clone + Zero + One + Neg<Output = T> + Add<Output = T> + Mul<Output = T>,
    F: Fn(usize, usize) -> T,
{
    if n == 0 {
        return vec![T::one()];
    }
    // Descending coefficients of the trailing principal block.
    let mut poly = vec![T::one(), -get(n - 1, n - 1)];
    for k in (0..n - 1).rev() {
        let m = n - k;
        // Toeplitz column: 1, -a_kk, -R C, -R A1 C, ..., -R A1^{m-2} C.
        let mut t = Vec::with_capacity(m + 1);
        t.push(T::one());
        t.push(-get(k, k));
        let mut v: Vec<T> = (k + 1..n).map(|i| get(i, k)).collect();
        for step in 0..m - 1 {
            let rc = (k + 1..n)
                .zip(&v)
                .fold(T::zero(), |acc, (j, x)| acc + get(k, j) * x.clone());
            t.push(-rc);
            if step + 1 < m - 1 {
                v = (k + 1..n)
                    .map(|i| {
                        (k + 1..n)
                            .zip(&v)
                            .fold(T::zero(), |acc, (j, x)| acc + get(i, j) * x.clone())
                    })
                    .collect();
            }
        }
        let next: Vec<T> = (0..=m)
            .map(|i| {
                (0..m.min(i + 1)).fold(T::zero(), |acc, j| acc + t[i - j].clone() * poly[j].clone())
            })
            .collect();
        poly = next;
    }
    poly.reverse();
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    #[test]
    fn exact_three_by_three() {
        // [[2,1,0],[0,3,1],[1,0,1]]: det(xI-M) = x^3 - 6x^2 + 11x - 7
        let m = [[2i64, 1, 0], [0, 3, 1], [1, 0, 1]];
        let p = berkowitz::<GaussRational, _>(3, |i, j| m[i][j].into());
        let want: Vec<GaussRational> = [-7i64, 11, -6, 1].iter().map(|&x| x.into()).collect();
        assert_eq!(p, want);
    }

    #[test]
    fn companion_matrix_recovers_coefficients() {
        // Companion of x^3 + 2x^2 - 5x + 3.
        let c = [3i64, -5, 2];
        let get = |i: usize, j: usize| -> GaussRational {
            if j == 2 {
                (-c[i]).into()
            } else if i == j + 1 {
                1.into()
            } else {
                0.into()
            }
        };
        let p = berkowitz::<GaussRational, _>(3, get);
        let want: Vec<GaussRational> = [3i64, -5, 2, 1].iter().map(|&x| x.into()).collect();
        assert_eq!(p, want);
    }
}
