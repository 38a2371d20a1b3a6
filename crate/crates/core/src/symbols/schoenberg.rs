//! Empirical negative-definiteness test.
//!
//! `ψ` is negative definite iff `e^{-tψ}` is positive definite for every
//! `t > 0`. For each requested `t` the check samples points `ξ₁…ξ_m`, builds
//! the Hermitian matrix `M_jk = e^{-tψ(ξ_j − ξ_k)}` and inspects its smallest
//! eigenvalue.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use super::SymbolFn;
use crate::error::{Error, Result};
use crate::random::CounterRng;
use crate::scalar::Real;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Sampling and tolerance settings for [`check_negative_definite`].
#[derive(Debug, Clone)]
pub struct SchoenbergConfig<T> {
    pub sample_count: usize,
    pub t_values: Vec<T>,
    /// Absolute tolerance on the smallest eigenvalue. `None` means
    /// `1e-8 · sample_count`.
    pub tol: Option<T>,
    /// Points are drawn from `[-radius, radius]ⁿ`.
    pub radius: T,
    /// Seed of the Cranley–Patterson rotation applied to the Halton points.
    pub seed: u64,
}

impl<T: Real> Default for SchoenbergConfig<T> {
    fn default() -> Self {
        Self {
            sample_count: 32,
            t_values: vec![T::lit(0.1), T::one(), T::lit(10.0)],
            tol: None,
            radius: T::lit(8.0),
            seed: 0x5EED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenEntry {
    pub t: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeDefiniteReport {
    pub sample_count: usize,
    pub tolerance: f64,
    pub entries: Vec<EigenEntry>,
    pub passed: bool,
}

/// Radical inverse of `index` in `base`.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    acc
}

/// Rotated Halton points in `[-radius, radius]^dimension`.
pub fn sample_points<T: Real>(count: usize, dimension: usize, radius: T, seed: u64) -> Vec<Vec<T>> {
    assert!(dimension <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
    let rng = CounterRng::new(seed);
    let shift: Vec<f64> = (0..dimension).map(|d| rng.uniform_at(d as u64)).collect();
    let r = radius.as_f64();
    (0..count)
        .map(|j| {
            (0..dimension)
                .map(|d| {
                    let u = (radical_inverse(j as u64 + 1, PRIMES[d]) + shift[d]).fract();
                    T::lit(r * (2.0 * u - 1.0))
                })
                .collect()
        })
        .collect()
}

/// Runs the Schoenberg test on `symbol`.
///
/// Fails with [`Error::SymbolIntegrity`] if the sampled matrix is not
/// Hermitian, which means `ψ(-ξ) ≠ conj ψ(ξ)`.
pub fn check_negative_definite<T: Real, S: SymbolFn<T> + ?Sized>(
    symbol: &S,
    config: &SchoenbergConfig<T>,
) -> Result<NegativeDefiniteReport> {
    let m = config.sample_count;
    if m < 2 {
        return Err(Error::Input("sample_count must be at least 2".into()));
    }
    let n = symbol.dimension();
    let points = sample_points(m, n, config.radius, config.seed);
    let tol = config
        .tol
        .map(|t| t.as_f64())
        .unwrap_or(1e-8 * m as f64);
    let herm_tol = 64.0 * T::epsilon().as_f64();

    // ψ(ξ_j − ξ_k) is shared by every t.
    let mut psi = vec![Complex::new(T::zero(), T::zero()); m * m];
    let mut diff = vec![T::zero(); n];
    for j in 0..m {
        for k in 0..m {
            for d in 0..n {
                diff[d] = points[j][d] - points[k][d];
            }
            psi[j * m + k] = symbol.eval_at(&diff);
        }
    }

    let mut entries = Vec::with_capacity(config.t_values.len());
    for &t in &config.t_values {
        let mut finite = true;
        let mat = DMatrix::from_fn(m, m, |j, k| {
            let z = (-psi[j * m + k] * t).exp();
            let z = Complex::new(z.re.as_f64(), z.im.as_f64());
            finite &= z.re.is_finite() && z.im.is_finite();
            z
        });
        if !finite {
            entries.push(EigenEntry {
                t: t.as_f64(),
                min_eigenvalue: f64::NEG_INFINITY,
                passed: false,
            });
            continue;
        }
        for j in 0..m {
            for k in 0..j {
                let a = mat[(j, k)];
                let b = mat[(k, j)].conj();
                if (a - b).norm() > herm_tol * a.norm().max(1.0) {
                    return Err(Error::SymbolIntegrity(format!(
                        "test matrix not Hermitian at ({j},{k}) for t = {t}: {a} vs {b}"
                    )));
                }
            }
        }
        let min_eigenvalue = mat
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &e| acc.min(e));
        entries.push(EigenEntry {
            t: t.as_f64(),
            min_eigenvalue,
            passed: min_eigenvalue >= -tol,
        });
    }
    let passed = entries.iter().all(|e| e.passed);
    Ok(NegativeDefiniteReport {
        sample_count: m,
        tolerance: tol,
        entries,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, SymbolSpec};

    /// ψ(ξ) = −|ξ|², deliberately not negative definite.
    struct AntiGaussian;

    impl SymbolFn<f64> for AntiGaussian {
        fn dimension(&self) -> usize {
            1
        }
        fn eval_at(&self, xi: &[f64]) -> Complex<f64> {
            Complex::new(-xi[0] * xi[0], 0.0)
        }
    }

    /// Breaks Hermitian symmetry: ψ(ξ) = |ξ| + iξ².
    struct Skewed;

    impl SymbolFn<f64> for Skewed {
        fn dimension(&self) -> usize {
            1
        }
        fn eval_at(&self, xi: &[f64]) -> Complex<f64> {
            Complex::new(xi[0].abs(), xi[0] * xi[0])
        }
    }

    /// Independent oracle: smallest eigenvalue via the real symmetric
    /// embedding [[A, -B], [B, A]] of the Hermitian matrix A + iB.
    fn oracle_min_eig(psi: &SymbolSpec<f64>, m: usize, t: f64) -> f64 {
        let pts = sample_points::<f64>(m, psi.dimension(), 8.0, 0x5EED);
        let big = DMatrix::from_fn(2 * m, 2 * m, |r, c| {
            let (j, k) = (r % m, c % m);
            let d: Vec<f64> = pts[j].iter().zip(&pts[k]).map(|(a, b)| a - b).collect();
            let z = (-psi.eval(&d).unwrap() * t).exp();
            match (r < m, c < m) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        big.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }

    #[test]
    fn gaussian_kernel_passes() {
        let psi = SymbolSpec::power(2.0, 1).unwrap();
        let cfg = SchoenbergConfig {
            t_values: vec![1.0],
            ..Default::default()
        };
        let report = check_negative_definite(&psi, &cfg).unwrap();
        assert!(report.passed);
        let want = oracle_min_eig(&psi, 32, 1.0);
        assert!((report.entries[0].min_eigenvalue - want).abs() < 1e-10);
        assert!(report.entries[0].min_eigenvalue >= -1e-8);
    }

    #[test]
    fn drift_kernel_is_rank_one() {
        let psi = SymbolSpec::drift(vec![0.8]).unwrap();
        for m in [4usize, 16, 32] {
            let cfg = SchoenbergConfig {
                sample_count: m,
                t_values: vec![0.3, 2.0],
                ..Default::default()
            };
            let report = check_negative_definite(&psi, &cfg).unwrap();
            assert!(report.passed);
            for e in &report.entries {
                assert!(e.min_eigenvalue.abs() < 1e-10, "{e:?}");
            }
            // Oracle agrees that the unimodular kernel has eigenvalues {0, m}.
            assert!(oracle_min_eig(&psi, m, 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn anti_gaussian_fails() {
        let report = check_negative_definite(&AntiGaussian, &SchoenbergConfig::default()).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn non_hermitian_candidate_is_integrity_error() {
        let err = check_negative_definite(&Skewed, &SchoenbergConfig::default()).unwrap_err();
        assert!(matches!(err, Error::SymbolIntegrity(_)));
    }

    #[test]
    fn needs_two_samples() {
        let psi = SymbolSpec::power(1.0, 1).unwrap();
        let cfg = SchoenbergConfig {
            sample_count: 1,
            ..Default::default()
        };
        assert!(check_negative_definite(&psi, &cfg).is_err());
    }

    #[test]
    fn whole_catalog_and_combinations_pass() {
        for n in [1usize, 2] {
            let cat = catalog::<f64>(n);
            for (name, psi) in &cat {
                let r = check_negative_definite(psi, &SchoenbergConfig::default()).unwrap();
                assert!(r.passed, "{name} (n={n}): {r:?}");
            }
            let mixed = SymbolSpec::combination(
                cat.iter()
                    .enumerate()
                    .map(|(j, (_, s))| (0.1 + 0.2 * j as f64, s.clone()))
                    .collect(),
                n,
            )
            .unwrap();
            let r = check_negative_definite(&mixed, &SchoenbergConfig::default()).unwrap();
            assert!(r.passed, "mixed combination n={n}: {r:?}");
        }
    }

    #[test]
    fn points_are_deterministic_and_in_box() {
        let a = sample_points::<f64>(50, 2, 8.0, 7);
        let b = sample_points::<f64>(50, 2, 8.0, 7);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|x| x.abs() <= 8.0));
    }
}
