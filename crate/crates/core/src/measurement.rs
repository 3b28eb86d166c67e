//! Expectation values, outcome bounds and a seeded measurement simulator.
//!
//! In finite dimension the Stieltjes integral `∫ λ d⟨E_λ x, x⟩` is the
//! finite Born sum `Σ λ_i |P_i x|^2`; that sum is the reference value for
//! everything here.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{antonymous, observable};
use crate::projlat::{same_dim, HermitianOperator, Projection};
use crate::quasipoint::{check_unit, Quasipoint};
use crate::scalar::{tol, CVector, Real};
use crate::spectral::eigen_decomposition;

/// `⟨Ax, x⟩` for a unit vector `x`.
pub fn expectation<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<T> {
    same_dim(a.dim(), x.len())?;
    check_unit(x)?;
    a.quadratic_form(x)
}

/// Eigenvalue and Born weight `|P_i x|^2` for each distinct eigenvalue, in
/// increasing order. Weights of eigenvalues with `|P_i x| ≤ τ_member` are
/// exactly zero, matching the support used by `g_A` and `f_A`.
pub fn born_weights<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<Vec<(T, T)>> {
    same_dim(a.dim(), x.len())?;
    check_unit(x)?;
    let member = tol::<T>().member;
    let eig = eigen_decomposition(a);
    Ok(eig
        .values
        .iter()
        .zip(&eig.projections)
        .map(|(&v, p)| {
            let n = p.apply(x).norm();
            (v, if n > member { n * n } else { T::zero() })
        })
        .collect())
}

/// `Σ λ_i |P_i x|^2` over the Born weights.
pub fn born_sum<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<T> {
    Ok(born_weights(a, x)?.iter().fold(T::zero(), |acc, &(v, w)| acc + v * w))
}

/// The Born sum restricted to eigenvalues `λ_i ≤ f_A(𝔅_{Cx})`. Terms above
/// `f` carry zero weight, so this equals [`born_sum`] exactly.
pub fn truncated_born_sum<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<T> {
    let (_, f) = outcome_bounds(a, x)?;
    Ok(born_weights(a, x)?
        .iter()
        .filter(|(v, _)| *v <= f)
        .fold(T::zero(), |acc, &(v, w)| acc + v * w))
}

/// `(g_A(𝔅_{Cx}), f_A(𝔅_{Cx}))`: smallest and largest possible outcomes.
pub fn outcome_bounds<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<(T, T)> {
    same_dim(a.dim(), x.len())?;
    let q = Quasipoint::atomic(x.clone())?;
    Ok((antonymous(a, &q)?, observable(a, &q)?))
}

/// Summary of a simulated measurement run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStatistics {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub g: f64,
    pub f: f64,
    pub trials: usize,
    pub seed: u64,
    /// Observed count per eigenvalue, in increasing eigenvalue order.
    #[serde(skip)]
    pub counts: Vec<(f64, usize)>,
}

/// Draws `trials` outcomes of measuring `A` in the pure state `Cx`, using a
/// ChaCha8 generator seeded with `seed`.
pub fn simulate_measurements<T: Real>(
    a: &HermitianOperator<T>,
    x: &CVector<T>,
    trials: usize,
    seed: u64,
) -> Result<SampleStatistics> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    let weights = born_weights(a, x)?;
    let (g, f) = outcome_bounds(a, x)?;
    let dist = WeightedIndex::new(weights.iter().map(|(_, w)| w.as_f64()))
        .map_err(|e| Error::InvalidWeights(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; weights.len()];
    for _ in 0..trials {
        counts[dist.sample(&mut rng)] += 1;
    }

    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (&(v, _), &k) in weights.iter().zip(&counts) {
        if k > 0 {
            let v = v.as_f64();
            sum += v * k as f64;
            min = min.min(v);
            max = max.max(v);
        }
    }
    Ok(SampleStatistics {
        mean: sum / trials as f64,
        min,
        max,
        g: g.as_f64(),
        f: f.as_f64(),
        trials,
        seed,
        counts: weights.iter().zip(counts).map(|(&(v, _), k)| (v.as_f64(), k)).collect(),
    })
}

fn check_mixture<T: Real>(weights: &[T], vectors: &[CVector<T>]) -> Result<()> {
    let t = tol::<T>();
    if weights.is_empty() || weights.len() != vectors.len() {
        return Err(Error::InvalidWeights(format!("{} weights for {} vectors", weights.len(), vectors.len())));
    }
    if weights.iter().any(|w| !(*w > T::zero())) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let total = weights.iter().fold(T::zero(), |acc, &w| acc + w);
    if (total - T::one()).abs() > t.identity {
        return Err(Error::InvalidWeights(format!("weights sum to {}", total.as_f64())));
    }
    let n = vectors[0].len();
    for (i, u) in vectors.iter().enumerate() {
        same_dim(n, u.len())?;
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let ip = u.dotc(v);
            let expected = if i == j { T::one() } else { T::zero() };
            if (ip.re - expected).abs() > t.proj || ip.im.abs() > t.proj {
                return Err(Error::NotOrthonormal(format!("⟨x_{i}, x_{j}⟩ = {} + {}i", ip.re.as_f64(), ip.im.as_f64())));
            }
        }
    }
    Ok(())
}

/// `Σ_j a_j ⟨A x_j, x_j⟩` for a convex combination of orthonormal pure
/// states.
pub fn mixed_expectation<T: Real>(a: &HermitianOperator<T>, weights: &[T], vectors: &[CVector<T>]) -> Result<T> {
    check_mixture(weights, vectors)?;
    weights
        .iter()
        .zip(vectors)
        .try_fold(T::zero(), |acc, (&w, x)| Ok(acc + w * expectation(a, x)?))
}

/// `tr(ρA)` with `ρ = Σ_j a_j P_{Cx_j}`, computed from the density matrix.
pub fn density_trace<T: Real>(a: &HermitianOperator<T>, weights: &[T], vectors: &[CVector<T>]) -> Result<T> {
    check_mixture(weights, vectors)?;
    same_dim(a.dim(), vectors[0].len())?;
    let mut rho = crate::scalar::CMatrix::<T>::zeros(a.dim(), a.dim());
    for (&w, x) in weights.iter().zip(vectors) {
        rho += Projection::onto_line(x)?.matrix() * crate::scalar::c(w);
    }
    Ok((rho * a.matrix()).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn v(x: &[f64]) -> CVector<f64> {
        CVector::from_iterator(x.len(), x.iter().map(|&r| Complex::new(r, 0.0)))
    }

    fn diag(x: &[f64]) -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(x).unwrap()
    }

    fn plus() -> CVector<f64> {
        let s = 0.5f64.sqrt();
        v(&[s, s])
    }

    #[test]
    fn expectation_examples() {
        let a = diag(&[1.0, 3.0]);
        assert_eq!(expectation(&a, &v(&[0.0, 1.0])).unwrap(), 3.0);
        assert!((expectation(&a, &plus()).unwrap() - 2.0).abs() < 1e-12);
        assert!((expectation(&a, &plus()).unwrap() - born_sum(&a, &plus()).unwrap()).abs() < 1e-10);
        let p = Projection::<f64>::diagonal(&[true, false]);
        let hp = HermitianOperator::new(p.matrix().clone()).unwrap();
        let x = v(&[0.6, 0.8]);
        assert!((expectation(&hp, &x).unwrap() - p.apply(&x).norm_squared()).abs() < 1e-12);
        assert!(matches!(expectation(&a, &v(&[1.0, 1.0])), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn bounds_examples() {
        let a = diag(&[1.0, 3.0]);
        assert_eq!(outcome_bounds(&a, &plus()).unwrap(), (1.0, 3.0));
        assert_eq!(outcome_bounds(&a, &v(&[1.0, 0.0])).unwrap(), (1.0, 1.0));
        let p = diag(&[1.0, 0.0]);
        assert_eq!(outcome_bounds(&p, &plus()).unwrap(), (0.0, 1.0));
        assert!(matches!(outcome_bounds(&a, &v(&[0.5, 0.5])), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn truncation_is_exact() {
        let a = diag(&[1.0, 2.0, 5.0]);
        let x = v(&[0.6, 0.8, 0.0]);
        assert_eq!(truncated_born_sum(&a, &x).unwrap(), born_sum(&a, &x).unwrap());
    }

    #[test]
    fn simulator_examples() {
        let a = diag(&[1.0, 3.0]);
        let s = simulate_measurements(&a, &v(&[0.0, 1.0]), 500, 1).unwrap();
        assert_eq!((s.min, s.max, s.mean), (3.0, 3.0, 3.0));

        let s = simulate_measurements(&a, &plus(), 10_000, 7).unwrap();
        assert!((s.mean - 2.0).abs() < 0.05);
        assert_eq!((s.min, s.max), (1.0, 3.0));
        assert_eq!((s.g, s.f), (1.0, 3.0));

        let b = diag(&[1.0, 2.0, 3.0]);
        let s = simulate_measurements(&b, &v(&[0.6, 0.0, 0.8]), 2_000, 3).unwrap();
        assert_eq!(s.counts[1], (2.0, 0));

        assert!(matches!(simulate_measurements(&a, &plus(), 0, 1), Err(Error::InvalidTrials)));
    }

    #[test]
    fn simulator_is_reproducible() {
        let a = diag(&[-1.0, 0.5, 2.0]);
        let x = v(&[0.6, 0.0, 0.8]);
        assert_eq!(simulate_measurements(&a, &x, 300, 11).unwrap(), simulate_measurements(&a, &x, 300, 11).unwrap());
        let json = serde_json::to_value(simulate_measurements(&a, &x, 10, 11).unwrap()).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["f", "g", "max", "mean", "min", "seed", "trials"]);
    }

    #[test]
    fn mixed_examples() {
        let a = diag(&[1.0, 2.0, 3.0]);
        let basis = [v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])];
        let third = 1.0 / 3.0;
        let m = mixed_expectation(&a, &[third, third, third], &basis).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
        assert!((m - density_trace(&a, &[third, third, third], &basis).unwrap()).abs() < 1e-10);
        assert_eq!(mixed_expectation(&a, &[1.0], &basis[1..2]).unwrap(), 2.0);
        let b = diag(&[1.0, 3.0]);
        assert_eq!(mixed_expectation(&b, &[0.5, 0.5], &[v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap(), 2.0);
    }

    #[test]
    fn mixed_errors() {
        let a = diag(&[1.0, 3.0]);
        let e = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert!(matches!(mixed_expectation(&a, &[0.5, 0.6], &e), Err(Error::InvalidWeights(_))));
        assert!(matches!(mixed_expectation(&a, &[1.5, -0.5], &e), Err(Error::InvalidWeights(_))));
        let s = 0.5f64.sqrt();
        let skew = [v(&[1.0, 0.0]), v(&[s, s])];
        assert!(matches!(mixed_expectation(&a, &[0.5, 0.5], &skew), Err(Error::NotOrthonormal(_))));
    }
}
