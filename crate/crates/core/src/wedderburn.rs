//! Radical, semisimple quotient, simple components and the Wedderburn
//! profile `(k_1, …, k_p)` of an algebra.
//!
//! The radical is the kernel of the trace form `(a, b) ↦ tr(L_{ab})`, which
//! over a field of characteristic zero is exactly the largest nilpotent
//! ideal; it is computed and verified with exact arithmetic. The semisimple
//! quotient is split through its center: a random central element `z` has
//! one eigenvalue per simple component, and the Lagrange polynomials
//! `p_λ(z)` are the primitive central idempotents. This stage is numeric, but
//! the component count is the exact dimension of the center, and the
//! idempotents are recovered exactly whenever they have small Gaussian
//! rational coordinates (always the case for structural matrix algebras).

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{quotient_algebra, random_coords, Algebra, IdealBasis, QuotientMap};
use crate::error::{Error, Result};
use crate::linalg::{self, FloatMatrix, Rref};
use crate::scalar::GaussRational;

/// Seeds tried before a genericity failure is reported.
pub const RETRY_BUDGET: usize = 16;

/// Largest denominator accepted when recovering exact idempotents.
const MAX_RECOVERY_DEN: i64 = 1 << 20;

/// Guard for rounding traces of idempotents to integer dimensions.
const DIM_ROUNDING_GUARD: f64 = 1e-6;

/// Per-attempt seed derived from a user seed.
pub(crate) fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(attempt as u64 + 1)
}

/// One simple component `e·Ā ≅ M_k` of the semisimple quotient.
#[derive(Clone, Debug)]
pub struct Component {
    pub k: usize,
    /// Primitive central idempotent in quotient coordinates.
    pub idempotent: Vec<Complex64>,
    pub exact_idempotent: Option<Vec<GaussRational>>,
    /// Orthonormal basis of the component (`k²` vectors).
    pub basis: Vec<Vec<Complex64>>,
    /// Reduced echelon basis, when the idempotent is exact.
    pub exact_basis: Option<Vec<Vec<GaussRational>>>,
}

/// A maximal ideal `M_i = Q⁻¹(⊕_{l≠i} component_l)`.
#[derive(Clone, Debug)]
pub enum MaximalIdeal {
    Exact(IdealBasis),
    /// Used when the central idempotents are not Gaussian rationals.
    Approximate {
        codim: usize,
        basis: Vec<Vec<Complex64>>,
    },
}

impl MaximalIdeal {
    pub fn dim(&self) -> usize {
        match self {
            MaximalIdeal::Exact(b) => b.dim(),
            MaximalIdeal::Approximate { basis, .. } => basis.len(),
        }
    }
}

/// The Wedderburn data of an algebra `A`.
#[derive(Clone, Debug)]
pub struct WedderburnProfile {
    pub dim: usize,
    pub radical: IdealBasis,
    pub p: usize,
    /// Block sizes `k_i`, ascending with multiplicity.
    pub ks: Vec<usize>,
    /// Same order as `ks`.
    pub maximal_ideals: Vec<MaximalIdeal>,
    /// Same order as `ks`.
    pub components: Vec<Component>,
    pub quotient: Algebra,
    pub quotient_map: QuotientMap,
}

/// JSON summary printed by `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub dim: usize,
    pub rad_dim: usize,
    pub p: usize,
    pub ks: Vec<usize>,
    pub max_ideal_codims: Vec<usize>,
}

impl WedderburnProfile {
    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            dim: self.dim,
            rad_dim: self.radical.dim(),
            p: self.p,
            ks: self.ks.clone(),
            max_ideal_codims: self
                .maximal_ideals
                .iter()
                .map(|m| self.dim - m.dim())
                .collect(),
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical.dim() == 0
    }

    /// Explicit isomorphisms `component_i → M_{k_i}`, in `ks` order.
    pub fn simple_isomorphisms(&self, seed: u64, tol: f64) -> Result<Vec<SimpleIso>> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                split_simple_component(&self.quotient, c, attempt_seed(seed, 1000 + i), tol)
            })
            .collect()
    }
}

/// Exact radical: kernel of the trace form, verified to be a nilpotent
/// two-sided ideal with nondegenerate trace form on the quotient.
pub fn radical_basis(alg: &Algebra) -> Result<IdealBasis> {
    let kernel = alg.trace_form().kernel();
    let rad = IdealBasis::new(alg, &kernel)
        .map_err(|e| Error::Internal(format!("trace-form kernel is not an ideal: {e}")))?;
    check_nilpotent(alg, &rad)?;
    if rad.dim() > 0 {
        let (q, _) = quotient_algebra(alg, &rad)?;
        if q.trace_form().rank() != q.dim() {
            return Err(Error::Internal("trace form degenerate on A/rad(A)".into()));
        }
    }
    Ok(rad)
}

/// `I^t = 0` for some `t ≤ dim + 1`, checked exactly.
fn check_nilpotent(alg: &Algebra, ideal: &IdealBasis) -> Result<()> {
    let base = ideal.vectors().to_vec();
    let mut power = base.clone();
    for _ in 0..=alg.dim() {
        if power.is_empty() {
            return Ok(());
        }
        let products: Vec<Vec<GaussRational>> = power
            .iter()
            .flat_map(|x| base.iter().map(move |y| (x, y)))
            .map(|(x, y)| alg.mul_exact(x, y))
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        let next = Rref::of_rows(&products, alg.dim());
        if next.rank() >= power.len() {
            return Err(Error::Internal("radical candidate is not nilpotent".into()));
        }
        power = next.rows().to_vec();
    }
    Err(Error::Internal("radical candidate is not nilpotent".into()))
}

/// Exact basis of the center `{z : z e_i = e_i z ∀i}`, one vector per free
/// column (each has a 1 at its free column and 0 at the others).
fn center(alg: &Algebra) -> (Vec<Vec<GaussRational>>, Vec<usize>) {
    let n = alg.dim();
    let mut rows: HashSet<Vec<GaussRational>> = HashSet::new();
    for i in 0..n {
        // Row (i, k): Σ_a z_a (c[a][i][k] - c[i][a][k]).
        let mut block = vec![vec![GaussRational::zero(); n]; n];
        for a in 0..n {
            for (k, c) in alg.product(a, i) {
                block[*k][a] += c;
            }
            for (k, c) in alg.product(i, a) {
                block[*k][a] -= c;
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
    }
    let mut rows: Vec<_> = rows.into_iter().collect();
    rows.sort_by_key(|r| r.iter().position(|c| !c.is_zero()));
    let rref = Rref::of_rows(&rows, n);
    (rref.null_space(), rref.free_columns())
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram–Schmidt with largest-residual pivoting. Returns `rank`
/// orthonormal vectors spanning the input, failing if the input does not
/// have numerical rank exactly `rank`.
pub(crate) fn orthonormal_basis(
    vectors: &[Vec<Complex64>],
    rank: usize,
    tol: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max).max(1.0);
    let mut work: Vec<Vec<Complex64>> = vectors.to_vec();
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let (best, nrm) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Numeric("not enough vectors for the requested rank".into()))?;
        if nrm <= tol * scale {
            return Err(Error::Numeric(format!("numerical rank below {rank}")));
        }
        let q: Vec<Complex64> = work.swap_remove(best).iter().map(|z| z / nrm).collect();
        for v in work.iter_mut() {
            let d = inner(&q, v);
            for (x, qi) in v.iter_mut().zip(&q) {
                *x -= d * qi;
            }
        }
        out.push(q);
    }
    let rest = work.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if rest > tol.sqrt() * scale {
        return Err(Error::Numeric(format!("numerical rank exceeds {rank}")));
    }
    Ok(out)
}

/// Splits a semisimple algebra into simple components, ordered by `k`
/// ascending (stable in eigenvalue order of the splitting element).
pub fn split_semisimple(abar: &Algebra, seed: u64, tol: f64) -> Result<Vec<Component>> {
    let n = abar.dim();
    let (zbasis, free) = center(abar);
    let p = zbasis.len();
    if p == 0 {
        return Err(Error::Internal("center is trivial".into()));
    }
    // Structure constants of the center in its own basis.
    let coords = |w: &[GaussRational]| -> Vec<GaussRational> {
        free.iter().map(|&f| w[f].clone()).collect()
    };
    let gamma: Vec<Vec<Vec<Complex64>>> = zbasis
        .iter()
        .map(|ca| {
            zbasis
                .iter()
                .map(|cb| {
                    coords(&abar.mul_exact(ca, cb))
                        .iter()
                        .map(GaussRational::to_c64)
                        .collect()
                })
                .collect()
        })
        .collect();
    let unit_c: Vec<Complex64> = coords(abar.unit())
        .iter()
        .map(GaussRational::to_c64)
        .collect();
    let zf: Vec<Vec<Complex64>> = zbasis
        .iter()
        .map(|v| v.iter().map(GaussRational::to_c64).collect())
        .collect();
    let center_mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); p];
        for a in 0..p {
            for b in 0..p {
                let s = x[a] * y[b];
                if s.is_zero() {
                    continue;
                }
                for c in 0..p {
                    out[c] += s * gamma[a][b][c];
                }
            }
        }
        out
    };
    let to_abar = |x: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); n];
        for (a, xa) in x.iter().enumerate() {
            for (o, z) in out.iter_mut().zip(&zf[a]) {
                *o += xa * z;
            }
        }
        out
    };

    let idempotents_c: Vec<Vec<Complex64>> = if p == 1 {
        vec![unit_c.clone()]
    } else {
        let mut found = None;
        for attempt in 0..RETRY_BUDGET {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed(seed, attempt));
            let r = random_coords(&mut rng, p);
            // Matrix of multiplication by z on the center: column b = z·c_b.
            let mz = FloatMatrix::from_fn(p, p, |c, b| (0..p).map(|a| r[a] * gamma[a][b][c]).sum());
            let lams = mz.eigenvalues()?;
            let scale = 1.0 + lams.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let sep = (0..p)
                .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
                .map(|(i, j)| (lams[i] - lams[j]).norm())
                .fold(f64::INFINITY, f64::min);
            if sep < 1e-6 * scale {
                continue;
            }
            let idem: Vec<Vec<Complex64>> = (0..p)
                .map(|i| {
                    let mut acc = unit_c.clone();
                    for l in (0..p).filter(|&l| l != i) {
                        let d = lams[i] - lams[l];
                        let factor: Vec<Complex64> = r
                            .iter()
                            .zip(&unit_c)
                            .map(|(zr, u)| (zr - lams[l] * u) / d)
                            .collect();
                        acc = center_mul(&acc, &factor);
                    }
                    acc
                })
                .collect();
            let ok = idem.iter().all(|e| {
                let sq = center_mul(e, e);
                sq.iter()
                    .zip(e)
                    .all(|(a, b)| (a - b).norm() <= tol.max(1e-9) * (1.0 + norm(e)))
            });
            if ok {
                found = Some(idem);
                break;
            }
        }
        found.ok_or(Error::RetryExhausted {
            what: "semisimple splitting",
            attempts: RETRY_BUDGET,
        })?
    };

    let idempotents: Vec<Vec<Complex64>> = idempotents_c.iter().map(|e| to_abar(e)).collect();
    let exact = recover_exact_idempotents(abar, &idempotents, &zbasis, &free);

    let mut components = Vec::with_capacity(p);
    let mut total = 0;
    for (i, e) in idempotents.iter().enumerate() {
        let dim_c = match &exact {
            Some(ex) => trace_dimension(abar.trace_left(&ex[i]).to_c64())?,
            None => trace_dimension(abar.regular_rep_float(e).as_dmatrix().trace())?,
        };
        let k = (dim_c as f64).sqrt().round() as usize;
        if k * k != dim_c || k == 0 {
            return Err(Error::Numeric(format!(
                "component dimension {dim_c} is not a positive square"
            )));
        }
        total += dim_c;
        let spanning_f: Vec<Vec<Complex64>> = (0..n)
            .map(|l| {
                let mut el = vec![Complex64::zero(); n];
                el[l] = Complex64::new(1.0, 0.0);
                abar.mul_float(e, &el)
            })
            .collect();
        let (exact_idempotent, exact_basis, basis) = match &exact {
            Some(ex) => {
                let span: Vec<Vec<GaussRational>> = (0..n)
                    .map(|l| abar.mul_exact(&ex[i], &abar.basis_vector(l)))
                    .collect();
                let rref = Rref::of_rows(&span, n);
                if rref.rank() != dim_c {
                    return Err(Error::Internal(
                        "component rank differs from idempotent trace".into(),
                    ));
                }
                let rows = rref.rows().to_vec();
                let rows_f: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|r| r.iter().map(GaussRational::to_c64).collect())
                    .collect();
                let basis = orthonormal_basis(&rows_f, dim_c, 1e-10)?;
                (Some(ex[i].clone()), Some(rows), basis)
            }
            None => (None, None, orthonormal_basis(&spanning_f, dim_c, 1e-8)?),
        };
        let idempotent = match &exact_idempotent {
            Some(ex) => ex.iter().map(GaussRational::to_c64).collect(),
            None => e.clone(),
        };
        components.push(Component {
            k,
            idempotent,
            exact_idempotent,
            basis,
            exact_basis,
        });
    }
    if total != n {
        return Err(Error::Numeric(format!(
            "component dimensions sum to {total}, expected {n}"
        )));
    }
    components.sort_by_key(|c| c.k);
    Ok(components)
}

fn trace_dimension(t: Complex64) -> Result<usize> {
    let r = t.re.round();
    if (t - Complex64::new(r, 0.0)).norm() > DIM_ROUNDING_GUARD || r < 0.0 {
        return Err(Error::Numeric(format!(
            "idempotent trace {t} is not an integer"
        )));
    }
    Ok(r as usize)
}

/// Rationalizes the float idempotents and keeps them only if they pass an
/// exact check: central, idempotent, pairwise orthogonal, summing to 1.
fn recover_exact_idempotents(
    abar: &Algebra,
    idem: &[Vec<Complex64>],
    zbasis: &[Vec<GaussRational>],
    free: &[usize],
) -> Option<Vec<Vec<GaussRational>>> {
    let exact: Vec<Vec<GaussRational>> = idem
        .iter()
        .map(|e| {
            e.iter()
                .map(|&z| GaussRational::approximate(z, MAX_RECOVERY_DEN, 1e-9))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let n = abar.dim();
    let mut sum = vec![GaussRational::zero(); n];
    for (i, e) in exact.iter().enumerate() {
        // Central: e equals its expansion in the center basis.
        let mut expanded = vec![GaussRational::zero(); n];
        for (z, &f) in zbasis.iter().zip(free) {
            if e[f].is_zero() {
                continue;
            }
            for (x, zc) in expanded.iter_mut().zip(z) {
                *x += &(&e[f] * zc);
            }
        }
        if &expanded != e || abar.mul_exact(e, e) != *e {
            return None;
        }
        for f in &exact[i + 1..] {
            if abar.mul_exact(e, f).iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        for (s, x) in sum.iter_mut().zip(e) {
            *s += x;
        }
    }
    (sum == abar.unit()).then_some(exact)
}

/// Radical, quotient, split, and maximal ideals of `alg`.
pub fn wedderburn_profile(alg: &Algebra, seed: u64, tol: f64) -> Result<WedderburnProfile> {
    let radical = radical_basis(alg)?;
    let (quotient, quotient_map) = quotient_algebra(alg, &radical)?;
    let components = split_semisimple(&quotient, seed, tol)?;
    let ks: Vec<usize> = components.iter().map(|c| c.k).collect();
    let sq: usize = ks.iter().map(|k| k * k).sum();
    if sq + radical.dim() != alg.dim() {
        return Err(Error::Internal(format!(
            "Σk² + dim rad = {} + {} differs from dim A = {}",
            sq,
            radical.dim(),
            alg.dim()
        )));
    }
    let maximal_ideals = components
        .iter()
        .enumerate()
        .map(|(i, _)| maximal_ideal(alg, &radical, &quotient, &quotient_map, &components, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(WedderburnProfile {
        dim: alg.dim(),
        radical,
        p: ks.len(),
        ks,
        maximal_ideals,
        components,
        quotient,
        quotient_map,
    })
}

fn maximal_ideal(
    alg: &Algebra,
    radical: &IdealBasis,
    quotient: &Algebra,
    q: &QuotientMap,
    components: &[Component],
    i: usize,
) -> Result<MaximalIdeal> {
    let others = components
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != i)
        .map(|(_, c)| c);
    let all_exact = components.iter().all(|c| c.exact_basis.is_some());
    if all_exact {
        let mut vectors: Vec<Vec<GaussRational>> = radical.vectors().to_vec();
        for c in others {
            vectors.extend(
                c.exact_basis
                    .as_ref()
                    .expect("checked")
                    .iter()
                    .map(|w| q.lift(w)),
            );
        }
        // Preimage of an ideal under a surjective homomorphism.
        let rref = Rref::of_rows(&vectors, alg.dim());
        if rref.rank() != vectors.len() {
            return Err(Error::Internal("maximal ideal basis is dependent".into()));
        }
        return Ok(MaximalIdeal::Exact(IdealBasis::from_rref_unchecked(rref)));
    }
    let mut basis: Vec<Vec<Complex64>> = radical
        .vectors()
        .iter()
        .map(|v| v.iter().map(GaussRational::to_c64).collect())
        .collect();
    for c in others {
        for w in &c.basis {
            let mut v = vec![Complex64::zero(); alg.dim()];
            for (x, &col) in w.iter().zip(q.complement()) {
                v[col] = *x;
            }
            basis.push(v);
        }
    }
    let k = components[i].k;
    debug_assert_eq!(quotient.dim() - k * k + radical.dim(), basis.len());
    Ok(MaximalIdeal::Approximate {
        codim: k * k,
        basis,
    })
}

/// An explicit isomorphism `ψ : C → M_k` for a simple component `C`.
///
/// `ψ(x)` is the matrix of left multiplication by `x` on the minimal left
/// ideal `C·e` (`e` a rank-one idempotent), in an orthonormal basis.
#[derive(Clone, Debug)]
pub struct SimpleIso {
    pub k: usize,
    /// Orthonormal basis of `C·e`, in quotient coordinates.
    pub module_basis: Vec<Vec<Complex64>>,
    /// `ψ` of each quotient basis vector; `ψ` is linear in the coordinates.
    pub images: Vec<FloatMatrix>,
}

impl SimpleIso {
    /// `ψ(x)` for `x` in quotient coordinates (only the component part of
    /// `x` contributes).
    pub fn apply(&self, x: &[Complex64]) -> FloatMatrix {
        assert_eq!(x.len(), self.images.len());
        let mut out = FloatMatrix::zeros(self.k, self.k);
        for (xl, img) in x.iter().zip(&self.images) {
            if !xl.is_zero() {
                out = out.add(&img.scale(*xl));
            }
        }
        out
    }

    /// Preimages `u_rs ∈ C` of the matrix units `E_rs`, row-major.
    pub fn matrix_units(&self, component: &Component) -> Result<Vec<Vec<Complex64>>> {
        let k2 = self.k * self.k;
        let imgs: Vec<FloatMatrix> = component.basis.iter().map(|b| self.apply(b)).collect();
        let kmat = FloatMatrix::from_fn(k2, k2, |rc, l| imgs[l][(rc / self.k, rc % self.k)]);
        let inv = kmat
            .try_inverse()
            .ok_or_else(|| Error::Numeric("component isomorphism is singular".into()))?;
        let n = self.images.len();
        Ok((0..k2)
            .map(|rc| {
                let mut u = vec![Complex64::zero(); n];
                for (l, b) in component.basis.iter().enumerate() {
                    let beta = inv[(l, rc)];
                    for (x, y) in u.iter_mut().zip(b) {
                        *x += beta * y;
                    }
                }
                u
            })
            .collect())
    }
}

/// Explicit isomorphism of a simple component onto `M_k`, verified by
/// `ψ(1_C) = I` and a multiplicativity residual `≤ tol` (relative) on random
/// pairs.
pub fn split_simple_component(
    abar: &Algebra,
    component: &Component,
    seed: u64,
    tol: f64,
) -> Result<SimpleIso> {
    let n = abar.dim();
    let k = component.k;
    let k2 = k * k;
    let basis = &component.basis;
    let unit_c = &component.idempotent;
    for attempt in 0..RETRY_BUDGET {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed(seed, attempt));
        let r = random_coords(&mut rng, k2);
        let mut a = vec![Complex64::zero(); n];
        for (rl, b) in r.iter().zip(basis) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += rl * y;
            }
        }
        // Left multiplication by a restricted to C, in the orthonormal basis.
        let ab: Vec<Vec<Complex64>> = basis.iter().map(|b| abar.mul_float(&a, b)).collect();
        let m = FloatMatrix::from_fn(k2, k2, |i, j| inner(&basis[i], &ab[j]));
        let scale = 1.0 + m.max_abs();
        let clusters = linalg::cluster_values(&m.eigenvalues()?, 1e-6 * scale);
        if clusters.len() != k || clusters.iter().any(|c| c.count != k) {
            continue;
        }
        let mus: Vec<Complex64> = clusters.iter().map(|c| c.center).collect();
        let mut e = unit_c.clone();
        for mu in &mus[1..] {
            let d = mus[0] - mu;
            let factor: Vec<Complex64> = a
                .iter()
                .zip(unit_c)
                .map(|(x, u)| (x - mu * u) / d)
                .collect();
            e = abar.mul_float(&e, &factor);
        }
        let spanning: Vec<Vec<Complex64>> = basis.iter().map(|b| abar.mul_float(b, &e)).collect();
        let Ok(module_basis) = orthonormal_basis(&spanning, k, 1e-8) else {
            continue;
        };
        let images: Vec<FloatMatrix> = (0..n)
            .map(|l| {
                let mut el = vec![Complex64::zero(); n];
                el[l] = Complex64::new(1.0, 0.0);
                let prods: Vec<Vec<Complex64>> = module_basis
                    .iter()
                    .map(|v| abar.mul_float(&el, v))
                    .collect();
                FloatMatrix::from_fn(k, k, |rr, cc| inner(&module_basis[rr], &prods[cc]))
            })
            .collect();
        let iso = SimpleIso {
            k,
            module_basis,
            images,
        };
        if iso_residual(abar, &iso, component, &mut rng, 8) <= tol {
            return Ok(iso);
        }
    }
    Err(Error::RetryExhausted {
        what: "simple component splitting",
        attempts: RETRY_BUDGET,
    })
}

/// Largest relative defect of `ψ(1) = I` and `ψ(xy) = ψ(x)ψ(y)` over
/// `pairs` random component elements.
pub fn iso_residual(
    abar: &Algebra,
    iso: &SimpleIso,
    component: &Component,
    rng: &mut impl rand::Rng,
    pairs: usize,
) -> f64 {
    let k = iso.k;
    let unit_defect = iso
        .apply(&component.idempotent)
        .sub(&FloatMatrix::identity(k))
        .max_abs();
    let n = abar.dim();
    let sample = |rng: &mut dyn rand::RngCore| -> Vec<Complex64> {
        let r = random_coords(rng, component.basis.len());
        let mut x = vec![Complex64::zero(); n];
        for (rl, b) in r.iter().zip(&component.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += rl * bi;
            }
        }
        x
    };
    let mut worst = unit_defect;
    for _ in 0..pairs {
        let x = sample(rng);
        let y = sample(rng);
        let (px, py) = (iso.apply(&x), iso.apply(&y));
        let pxy = iso.apply(&abar.mul_float(&x, &y));
        let defect = pxy.sub(&px.mul(&py)).max_abs() / (1.0 + px.max_abs() * py.max_abs());
        worst = worst.max(defect);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;
    use num_traits::One;

    fn gr(n: i64) -> GaussRational {
        n.into()
    }

    fn upper_triangular_2() -> Algebra {
        let one = GaussRational::one;
        Algebra::new(
            3,
            vec![
                (0, 0, 0, one()),
                (0, 1, 1, one()),
                (1, 2, 1, one()),
                (2, 2, 2, one()),
            ],
            vec![gr(1), gr(0), gr(1)],
        )
        .unwrap()
    }

    #[test]
    fn radical_of_matrix_algebra_is_zero() {
        assert_eq!(
            radical_basis(&Algebra::matrix_algebra(2).unwrap())
                .unwrap()
                .dim(),
            0
        );
    }

    #[test]
    fn radical_of_dual_numbers() {
        let d = Algebra::truncated_polynomial(2).unwrap();
        let rad = radical_basis(&d).unwrap();
        assert_eq!(rad.vectors(), &[vec![gr(0), gr(1)]]);
        // tr(L_{t·x}) = 0 for every basis x.
        for x in 0..2 {
            let tx = d.mul_exact(&[gr(0), gr(1)], &d.basis_vector(x));
            assert!(d.trace_left(&tx).is_zero());
        }
    }

    #[test]
    fn radical_of_upper_triangular() {
        let a = upper_triangular_2();
        let rad = radical_basis(&a).unwrap();
        assert_eq!(rad.vectors(), &[a.basis_vector(1)]);
    }

    #[test]
    fn split_examples() {
        let cc = Algebra::direct_sum_algebra(&[1, 1]).unwrap();
        let comps = split_semisimple(&cc, 0, 1e-8).unwrap();
        assert_eq!(comps.iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 1]);

        let m2 = Algebra::matrix_algebra(2).unwrap();
        let comps = split_semisimple(&m2, 0, 1e-8).unwrap();
        assert_eq!(comps.iter().map(|c| c.k).collect::<Vec<_>>(), vec![2]);

        let s = Algebra::direct_sum_algebra(&[2, 1, 2]).unwrap();
        let comps = split_semisimple(&s, 5, 1e-8).unwrap();
        assert_eq!(comps.iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 2, 2]);
        // Idempotents are exact, orthogonal and sum to 1.
        let ex: Vec<_> = comps
            .iter()
            .map(|c| c.exact_idempotent.clone().unwrap())
            .collect();
        let mut sum = vec![GaussRational::zero(); s.dim()];
        for (i, e) in ex.iter().enumerate() {
            for (x, y) in sum.iter_mut().zip(e) {
                *x += y;
            }
            for f in &ex[i + 1..] {
                assert!(s.mul_exact(e, f).iter().all(Zero::is_zero));
            }
        }
        assert_eq!(sum, s.unit());
    }

    #[test]
    fn profile_examples() {
        let p = wedderburn_profile(&Algebra::matrix_algebra(3).unwrap(), 0, 1e-8).unwrap();
        assert_eq!((p.p, p.ks.clone(), p.radical.dim()), (1, vec![3], 0));

        let p = wedderburn_profile(&upper_triangular_2(), 0, 1e-8).unwrap();
        assert_eq!((p.p, p.ks.clone(), p.radical.dim()), (2, vec![1, 1], 1));

        let p = wedderburn_profile(&Algebra::truncated_polynomial(3).unwrap(), 0, 1e-8).unwrap();
        assert_eq!((p.p, p.ks.clone(), p.radical.dim()), (1, vec![1], 2));
        assert_eq!(p.summary().max_ideal_codims, vec![1]);
    }

    #[test]
    fn maximal_ideals_have_square_codimension() {
        let a = upper_triangular_2();
        let p = wedderburn_profile(&a, 3, 1e-8).unwrap();
        for (m, k) in p.maximal_ideals.iter().zip(&p.ks) {
            let MaximalIdeal::Exact(ideal) = m else {
                panic!("SMA ideals should be exact")
            };
            let checked = IdealBasis::new(&a, ideal.vectors()).unwrap();
            let (q, _) = quotient_algebra(&a, &checked).unwrap();
            assert_eq!(q.dim(), k * k);
            for r in p.radical.vectors() {
                assert!(checked.contains(r));
            }
        }
    }

    #[test]
    fn profile_is_seed_independent() {
        let a = Algebra::direct_sum_algebra(&[3, 1, 2, 1]).unwrap();
        for seed in 0..10 {
            assert_eq!(
                wedderburn_profile(&a, seed, 1e-8).unwrap().ks,
                vec![1, 1, 2, 3]
            );
        }
    }

    #[test]
    fn quotient_by_radical_is_semisimple() {
        let a = Algebra::truncated_polynomial(4).unwrap();
        let rad = radical_basis(&a).unwrap();
        let (q, _) = quotient_algebra(&a, &rad).unwrap();
        assert_eq!(radical_basis(&q).unwrap().dim(), 0);
    }

    #[test]
    fn non_rational_idempotents_fall_back_to_float() {
        // ℂ[x]/(x² - 2): idempotents (1 ± x/√2)/2 are not Gaussian rationals.
        let alg = Algebra::new(
            2,
            vec![
                (0, 0, 0, gr(1)),
                (0, 1, 1, gr(1)),
                (1, 0, 1, gr(1)),
                (1, 1, 0, gr(2)),
            ],
            vec![gr(1), gr(0)],
        )
        .unwrap();
        let p = wedderburn_profile(&alg, 0, 1e-8).unwrap();
        assert_eq!(p.ks, vec![1, 1]);
        assert!(p.components.iter().all(|c| c.exact_idempotent.is_none()));
        assert!(matches!(
            p.maximal_ideals[0],
            MaximalIdeal::Approximate { codim: 1, .. }
        ));
    }

    #[test]
    fn simple_iso_scalar_case() {
        let a = Algebra::complex_numbers();
        let p = wedderburn_profile(&a, 0, 1e-8).unwrap();
        let iso = &p.simple_isomorphisms(0, 1e-9).unwrap()[0];
        let x = Complex64::new(0.3, -2.0);
        assert!((iso.apply(&[x])[(0, 0)] - x).norm() < 1e-14);
    }

    #[test]
    fn simple_iso_of_m2_is_multiplicative() {
        let a = Algebra::matrix_algebra(2).unwrap();
        let p = wedderburn_profile(&a, 0, 1e-8).unwrap();
        let iso = &p.simple_isomorphisms(1, 1e-9).unwrap()[0];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        assert!(iso_residual(&p.quotient, iso, &p.components[0], &mut rng, 100) <= 1e-9);
        // Matrix units map back to matrix units.
        let units = iso.matrix_units(&p.components[0]).unwrap();
        for (rc, u) in units.iter().enumerate() {
            let img = iso.apply(u);
            for r in 0..2 {
                for c in 0..2 {
                    let want = if r * 2 + c == rc { 1.0 } else { 0.0 };
                    assert!((img[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn simple_iso_inside_dim8_semisimple() {
        // M_2 ⊕ M_2 has dimension 8.
        let a = Algebra::direct_sum_algebra(&[2, 2]).unwrap();
        let p = wedderburn_profile(&a, 2, 1e-8).unwrap();
        let isos = p.simple_isomorphisms(2, 1e-8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (iso, comp) in isos.iter().zip(&p.components) {
            assert!(iso_residual(&p.quotient, iso, comp, &mut rng, 100) <= 1e-8);
        }
        // Spectrum of a equals the union of component spectra.
        let x = a.random_element(8);
        let mut union = Vec::new();
        for iso in &isos {
            union.extend(linalg::spectrum_set(&iso.apply(&x.to_float()), 1e-9).unwrap());
        }
        let sp = a.spectrum(&Element::float(x.to_float()), 1e-9).unwrap();
        assert!(linalg::hausdorff(&sp, &union) < 1e-8);
    }
}
