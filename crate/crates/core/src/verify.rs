//! Randomized checks of the spectral claims: containment and equality of
//! spectra under a block map, multiplicativity of the map, agreement of
//! spectra in `A` and `A/rad(A)`, and the exponents of the eigenvalues of
//! `φ_j(S·D·S⁻¹)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{quotient_algebra, Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{self, FloatMatrix};
use crate::mapbuilder::{evaluate_map, ShrinkMapSpec, SourcePipeline};
use crate::sma::{sample_diag_conj, to_matrix, QuasiOrder};
use crate::wedderburn::{attempt_seed, radical_basis};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 500;

/// Radius of the contour around each probe eigenvalue.
const CONTOUR_RADIUS: f64 = 0.4;
const CONTOUR_NODES: usize = 64;
const ROUNDING_GUARD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// An eigenvalue of the image that is not in the source spectrum.
    Extra,
    /// A source eigenvalue that the image lost.
    Missing,
    /// `φ(ab) ≠ φ(a)φ(b)`.
    Multiplicativity,
    /// Spectra of `a` and `Q(a)` differ.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub sample: usize,
    pub seed: u64,
    pub kind: ViolationKind,
    /// Offending eigenvalue as `[re, im]`, when there is one.
    pub eigenvalue: Option<[f64; 2]>,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: &'static str,
    pub samples: usize,
    pub violations: Vec<Violation>,
    pub max_defect: f64,
    pub verdict: Outcome,
}

impl VerificationReport {
    fn from_results(
        check: &'static str,
        samples: usize,
        results: Vec<(f64, Vec<Violation>)>,
    ) -> Self {
        let max_defect = results.iter().map(|r| r.0).fold(0.0, f64::max);
        let mut violations: Vec<Violation> = results.into_iter().flat_map(|r| r.1).collect();
        violations.sort_by_key(|v| (v.sample, v.seed));
        let verdict = if violations.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        Self {
            check,
            samples,
            violations,
            max_defect,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    /// Index of the first violating sample.
    pub fn first_violation(&self) -> Option<usize> {
        self.violations.first().map(|v| v.sample)
    }
}

/// Seed of sample `s` for a run seeded with `seed`.
pub fn sample_seed(seed: u64, s: usize) -> u64 {
    attempt_seed(seed ^ 0x5DEE_CE66_D1A4_F87D, s)
}

/// Random element for sample `s`: odd samples of SMA sources are dense
/// diagonalizable conjugates, all others are uniform random elements.
pub fn sample_element(
    alg: &Algebra,
    certificate: Option<&QuasiOrder>,
    seed: u64,
    s: usize,
) -> Result<Element> {
    let sseed = sample_seed(seed, s);
    match certificate {
        Some(rho) if s % 2 == 1 => Ok(sample_diag_conj(rho, sseed)?.element),
        _ => Ok(alg.random_element(sseed)),
    }
}

fn spectrum_of(m: &FloatMatrix) -> Result<Vec<Complex64>> {
    linalg::spectrum_set(m, linalg::default_tol(m))
}

/// Spectrum of `a` in the source algebra. With a quasi-order certificate the
/// `n×n` matrix form is used, otherwise the regular representation.
fn source_spectrum(
    alg: &Algebra,
    certificate: Option<&QuasiOrder>,
    a: &Element,
) -> Result<Vec<Complex64>> {
    match certificate {
        Some(rho) => spectrum_of(&to_matrix(rho, &a.to_float())),
        None => spectrum_of(&alg.regular_rep(a)),
    }
}

fn image_spectrum(spec: &ShrinkMapSpec, a: &Element) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for block in spec.evaluate_blocks(a)? {
        out.extend(spectrum_of(&block)?);
    }
    Ok(out)
}

fn pair(z: Complex64) -> Option<[f64; 2]> {
    Some([z.re, z.im])
}

/// Points of `from` farther than `tol` from `to`.
fn stray(from: &[Complex64], to: &[Complex64], tol: f64) -> Vec<(Complex64, f64)> {
    from.iter()
        .map(|&z| (z, linalg::directed_distance(&[z], to)))
        .filter(|&(_, d)| d > tol)
        .collect()
}

fn run_samples<F>(samples: usize, f: F) -> Result<Vec<(f64, Vec<Violation>)>>
where
    F: Fn(usize) -> Result<(f64, Vec<Violation>)> + Sync + Send,
{
    (0..samples)
        .into_par_iter()
        .map(|s| {
            let (defect, violations) = f(s)?;
            if defect.is_nan() || defect.is_infinite() {
                return Err(Error::Numeric(format!(
                    "sample {s} produced a non-finite defect"
                )));
            }
            Ok((defect, violations))
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Claim {
    Shrinking,
    Preserving,
}

fn spectral_check(
    claim: Claim,
    alg: &Algebra,
    certificate: Option<&QuasiOrder>,
    spec: &ShrinkMapSpec,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    if spec.source.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: spec.source.dim(),
        });
    }
    if let Some(rho) = certificate.filter(|rho| rho.len() != alg.dim()) {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: rho.len(),
        });
    }
    let results =
        run_samples(samples, |s| {
            let a = sample_element(alg, certificate, seed, s)?;
            let source = source_spectrum(alg, certificate, &a)?;
            let image = image_spectrum(spec, &a)?;
            let sseed = sample_seed(seed, s);
            let mut violations: Vec<Violation> = stray(&image, &source, tol)
                .into_iter()
                .map(|(z, d)| Violation {
                    sample: s,
                    seed: sseed,
                    kind: ViolationKind::Extra,
                    eigenvalue: pair(z),
                    distance: d,
                })
                .collect();
            let mut defect = linalg::directed_distance(&image, &source);
            if claim == Claim::Preserving {
                defect = defect.max(linalg::directed_distance(&source, &image));
                violations.extend(stray(&source, &image, tol).into_iter().map(|(z, d)| {
                    Violation {
                        sample: s,
                        seed: sseed,
                        kind: ViolationKind::Missing,
                        eigenvalue: pair(z),
                        distance: d,
                    }
                }));
            }
            Ok((defect, violations))
        })?;
    Ok(VerificationReport::from_results(
        match claim {
            Claim::Shrinking => "shrinking",
            Claim::Preserving => "preserving",
        },
        samples,
        results,
    ))
}

/// `sp(φ(a)) ⊆ sp(a)` within `tol` on `samples` random elements.
pub fn check_shrinking(
    alg: &Algebra,
    certificate: Option<&QuasiOrder>,
    spec: &ShrinkMapSpec,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    spectral_check(Claim::Shrinking, alg, certificate, spec, samples, tol, seed)
}

/// `sp(φ(a)) = sp(a)` within `tol` (Hausdorff) on `samples` random elements.
pub fn check_preserving(
    alg: &Algebra,
    certificate: Option<&QuasiOrder>,
    spec: &ShrinkMapSpec,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    spectral_check(
        Claim::Preserving,
        alg,
        certificate,
        spec,
        samples,
        tol,
        seed,
    )
}

/// `φ(ab) = φ(a)φ(b)` to relative accuracy `tol` on random pairs.
pub fn check_multiplicative(
    alg: &Algebra,
    spec: &ShrinkMapSpec,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let results = run_samples(samples, |s| {
        let sseed = sample_seed(seed, s);
        let a = alg.random_element(sseed);
        let b = alg.random_element(sseed.wrapping_add(0x9E37));
        let (pa, pb) = (evaluate_map(spec, &a)?, evaluate_map(spec, &b)?);
        let pab = evaluate_map(spec, &alg.mul(&a, &b))?;
        let defect = pab.sub(&pa.mul(&pb)).max_abs() / (1.0 + pa.max_abs() * pb.max_abs());
        let violations = if defect > tol {
            vec![Violation {
                sample: s,
                seed: sseed,
                kind: ViolationKind::Multiplicativity,
                eigenvalue: None,
                distance: defect,
            }]
        } else {
            Vec::new()
        };
        Ok((defect, violations))
    })?;
    Ok(VerificationReport::from_results(
        "multiplicative",
        samples,
        results,
    ))
}

/// `sp_A(a) = sp_{A/rad A}(Q(a))` within `tol` on random elements.
pub fn check_quotient_lemma(
    alg: &Algebra,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let rad = radical_basis(alg)?;
    let (quotient, q) = quotient_algebra(alg, &rad)?;
    let results = run_samples(samples, |s| {
        let sseed = sample_seed(seed, s);
        let a = alg.random_element(sseed);
        let sp_a = spectrum_of(&alg.regular_rep(&a))?;
        let sp_q = spectrum_of(&quotient.regular_rep(&q.apply(&a)))?;
        let defect = linalg::hausdorff(&sp_a, &sp_q);
        let violations = stray(&sp_a, &sp_q, tol)
            .into_iter()
            .chain(stray(&sp_q, &sp_a, tol))
            .map(|(z, d)| Violation {
                sample: s,
                seed: sseed,
                kind: ViolationKind::Quotient,
                eigenvalue: pair(z),
                distance: d,
            })
            .collect();
        Ok((defect, violations))
    })?;
    Ok(VerificationReport::from_results(
        "quotient_lemma",
        samples,
        results,
    ))
}

/// Exponents `ℓ_r(j)`: multiplicity of the probe eigenvalue `d_r` (the
/// diagonal entry at index `r`) in `φ_j(S·D·S⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    /// `exponents[j][r]` from the first trial.
    pub exponents: Vec<Vec<usize>>,
    /// The same table for every trial.
    pub trials: Vec<Vec<Vec<usize>>>,
}

impl ExponentProfile {
    pub fn is_trial_invariant(&self) -> bool {
        self.trials.iter().all(|t| *t == self.exponents)
    }

    /// Indices in one mutual-reachability class carry equal exponents.
    pub fn is_class_constant(&self, spec: &ShrinkMapSpec) -> bool {
        let SourcePipeline::Sma { blocks, .. } = &spec.source else {
            return false;
        };
        self.trials.iter().all(|t| {
            t.iter().all(|row| {
                blocks
                    .iter()
                    .all(|members| members.iter().all(|&r| row[r - 1] == row[members[0] - 1]))
            })
        })
    }

    /// `ℓ_r(j) = x_i^j` for `r` in source block `i`.
    pub fn matches_family(&self, spec: &ShrinkMapSpec) -> bool {
        let SourcePipeline::Sma { blocks, .. } = &spec.source else {
            return false;
        };
        self.trials.iter().all(|t| {
            t.iter().zip(&spec.family).all(|(row, x)| {
                blocks
                    .iter()
                    .enumerate()
                    .all(|(i, members)| members.iter().all(|&r| row[r - 1] == x[i]))
            })
        })
    }
}

/// Winding count `(1/2πi)∮ Σ_e dz/(z − e)` around `center`.
fn contour_count(eigenvalues: &[Complex64], center: Complex64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..CONTOUR_NODES {
        let theta = 2.0 * std::f64::consts::PI * t as f64 / CONTOUR_NODES as f64;
        let w = Complex64::from_polar(CONTOUR_RADIUS, theta);
        let z = center + w;
        // dz = i·w dθ, and 1/(2πi)·i·dθ = dθ/2π.
        acc += eigenvalues.iter().map(|e| w / (z - e)).sum::<Complex64>();
    }
    (acc / CONTOUR_NODES as f64).re
}

/// Exponent table of `spec` on the SMA `rho`, over `trials` conjugates.
pub fn exponent_profile(
    rho: &QuasiOrder,
    spec: &ShrinkMapSpec,
    trials: usize,
    seed: u64,
) -> Result<ExponentProfile> {
    let SourcePipeline::Sma { n, pairs, .. } = &spec.source else {
        return Err(Error::Schema(
            "exponent profiles need a structural matrix algebra source".into(),
        ));
    };
    let own: Vec<[usize; 2]> = rho.pairs().map(|(i, j)| [i + 1, j + 1]).collect();
    if *n != rho.n() || *pairs != own {
        return Err(Error::Schema(
            "map source does not match the quasi-order".into(),
        ));
    }
    let tables = (0..trials.max(1))
        .into_par_iter()
        .map(|t| -> Result<Vec<Vec<usize>>> {
            let sample = sample_diag_conj(rho, sample_seed(seed, t))?;
            spec.evaluate_blocks(&sample.element)?
                .iter()
                .map(|block| {
                    let eig = block.eigenvalues()?;
                    sample
                        .d
                        .iter()
                        .map(|&center| {
                            let mult = contour_count(&eig, center);
                            let r = mult.round();
                            if (mult - r).abs() > ROUNDING_GUARD || r < 0.0 {
                                Err(Error::Numeric(format!(
                                    "multiplicity {mult} near {center} is not an integer"
                                )))
                            } else {
                                Ok(r as usize)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentProfile {
        exponents: tables[0].clone(),
        trials: tables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::decide_preserve;
    use crate::mapbuilder::{build_block_map, BlockSlot};
    use crate::sma::sma_algebra;

    fn block_sma(ks: &[usize]) -> (QuasiOrder, Algebra) {
        let rho = QuasiOrder::block_equivalence(ks).unwrap();
        let alg = sma_algebra(&rho);
        (rho, alg)
    }

    #[test]
    fn duplication_from_m2_to_m4_shrinks_and_preserves() {
        let (rho, alg) = block_sma(&[2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[4], &[vec![2]]).unwrap();
        assert!(check_shrinking(&alg, Some(&rho), &spec, 500, 1e-8, 0)
            .unwrap()
            .passed());
        assert!(check_preserving(&alg, Some(&rho), &spec, 200, 1e-8, 0)
            .unwrap()
            .passed());
    }

    #[test]
    fn identity_map_preserves() {
        let (rho, alg) = block_sma(&[2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[2], &[vec![1]]).unwrap();
        assert!(check_preserving(&alg, Some(&rho), &spec, 100, 1e-8, 1)
            .unwrap()
            .passed());
    }

    #[test]
    fn transposed_slot_shrinks_but_is_not_multiplicative() {
        let (rho, alg) = block_sma(&[2]);
        let mut spec = build_block_map(SourcePipeline::sma(&rho), &[4], &[vec![2]]).unwrap();
        spec.order[0][1] = BlockSlot {
            block: 0,
            slot: 1,
            transpose: true,
        };
        spec.validate().unwrap();
        assert!(check_shrinking(&alg, Some(&rho), &spec, 200, 1e-8, 2)
            .unwrap()
            .passed());
        let m = check_multiplicative(&alg, &spec, 50, 1e-8, 2).unwrap();
        assert!(!m.passed());
        let clean = build_block_map(SourcePipeline::sma(&rho), &[4], &[vec![2]]).unwrap();
        assert!(check_multiplicative(&alg, &clean, 50, 1e-8, 2)
            .unwrap()
            .passed());
    }

    #[test]
    fn non_covering_family_fails_preserving() {
        let (rho, alg) = block_sma(&[1, 2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[3], &[vec![3, 0]]).unwrap();
        assert!(check_shrinking(&alg, Some(&rho), &spec, 500, 1e-8, 3)
            .unwrap()
            .passed());
        let p = check_preserving(&alg, Some(&rho), &spec, 100, 1e-8, 3).unwrap();
        assert!(!p.passed());
        assert_eq!(p.first_violation(), Some(0));
        assert_eq!(p.violations[0].kind, ViolationKind::Missing);
    }

    #[test]
    fn covering_family_preserves() {
        let (rho, alg) = block_sma(&[1, 2]);
        let family = decide_preserve(&[1, 2], &[3]).unwrap().witness.unwrap();
        let spec = build_block_map(SourcePipeline::sma(&rho), &[3], &family).unwrap();
        assert!(check_preserving(&alg, Some(&rho), &spec, 500, 1e-8, 4)
            .unwrap()
            .passed());
    }

    #[test]
    fn quotient_lemma_examples() {
        let m2 = Algebra::matrix_algebra(2).unwrap();
        let r = check_quotient_lemma(&m2, 50, 1e-8, 0).unwrap();
        assert!(r.passed() && r.max_defect < 1e-12);
        for k in 2..=5 {
            let a = Algebra::truncated_polynomial(k).unwrap();
            let r = check_quotient_lemma(&a, 100, 1e-8, 0).unwrap();
            assert!(r.passed(), "k = {k}: {:?}", r.max_defect);
        }
    }

    #[test]
    fn exponent_examples() {
        let (rho, _) = block_sma(&[2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[4], &[vec![2]]).unwrap();
        let e = exponent_profile(&rho, &spec, 5, 0).unwrap();
        assert_eq!(e.exponents, vec![vec![2, 2]]);

        let (rho, _) = block_sma(&[1, 2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[3], &[vec![1, 1]]).unwrap();
        let e = exponent_profile(&rho, &spec, 5, 0).unwrap();
        assert_eq!(e.exponents, vec![vec![1, 1, 1]]);
        assert!(e.is_trial_invariant() && e.matches_family(&spec));
    }

    #[test]
    fn exponents_are_class_constant() {
        // Classes {1,2} and {3}, with 1,2 → 3.
        let rho =
            QuasiOrder::new(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        let spec = build_block_map(
            SourcePipeline::sma(&rho),
            &[5, 1],
            &[vec![1, 2], vec![1, 0]],
        )
        .unwrap();
        let e = exponent_profile(&rho, &spec, 20, 7).unwrap();
        assert!(e.is_trial_invariant() && e.is_class_constant(&spec) && e.matches_family(&spec));
    }

    #[test]
    fn reports_are_deterministic() {
        let (rho, alg) = block_sma(&[1, 2]);
        let spec = build_block_map(SourcePipeline::sma(&rho), &[3], &[vec![3, 0]]).unwrap();
        let a = check_preserving(&alg, Some(&rho), &spec, 64, 1e-8, 9).unwrap();
        let b = check_preserving(&alg, Some(&rho), &spec, 64, 1e-8, 9).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
