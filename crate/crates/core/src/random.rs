//! Random test objects for the verification suites.

use nalgebra::Complex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::projlat::{HermitianOperator, Projection};
use crate::scalar::{CMatrix, CVector, Real};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    Complex::new(T::lit(gaussian(rng)), T::lit(gaussian(rng)))
}

/// Haar-distributed unitary, from the QR factorization of a complex
/// Gaussian matrix with the phases of `R` absorbed.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    let g = CMatrix::<T>::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let m = nalgebra::ComplexField::modulus(d);
        if m > T::zero() {
            let phase = d / Complex::new(m, T::zero());
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// GUE-style Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator<T> {
    let g = CMatrix::<T>::from_fn(n, n, |_, _| complex_gaussian(rng));
    let h = (&g + g.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    HermitianOperator::new(hermitize(h)).expect("symmetrized matrix is Hermitian")
}

/// `U diag(v) U*` with eigenvalues drawn from a few integers, so that
/// degenerate spectra are common.
pub fn random_degenerate_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator<T> {
    let distinct = rng.random_range(1..=n.max(1));
    let pool: Vec<f64> = (0..distinct).map(|_| rng.random_range(-4..=4) as f64).collect();
    let values: Vec<T> = (0..n).map(|_| T::lit(pool[rng.random_range(0..pool.len())])).collect();
    conjugated_diagonal(rng, &values)
}

/// `U diag(values) U*` for a random unitary `U`.
pub fn conjugated_diagonal<T: Real, R: Rng + ?Sized>(rng: &mut R, values: &[T]) -> HermitianOperator<T> {
    let n = values.len();
    let u = random_unitary::<T, _>(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(n, values.iter().map(|&v| Complex::new(v, T::zero()))));
    HermitianOperator::new(hermitize(&u * d * u.adjoint())).expect("unitary conjugate of a real diagonal")
}

/// Either a generic or a degenerate Hermitian operator, with equal odds.
pub fn random_test_operator<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator<T> {
    if rng.random_bool(0.5) {
        random_hermitian(rng, n)
    } else {
        random_degenerate_hermitian(rng, n)
    }
}

/// Real diagonal operator; values are small integers when `repeats` is set.
pub fn random_diagonal<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, repeats: bool) -> HermitianOperator<T> {
    let values: Vec<T> = (0..n)
        .map(|_| if repeats { T::lit(rng.random_range(-3..=3) as f64) } else { T::lit(gaussian(rng)) })
        .collect();
    HermitianOperator::from_real_diagonal(&values).expect("nonempty diagonal")
}

/// Uniform random unit vector in `C^n`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector<T> {
    loop {
        let v = CVector::<T>::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > T::lit(1e-3) {
            return v.unscale(norm);
        }
    }
}

/// Unit vector supported on a random nonempty subset of an eigenbasis-like
/// orthonormal frame, so that some Born weights vanish exactly in that frame.
pub fn random_sparse_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, frame: &CMatrix<T>) -> CVector<T> {
    let n = frame.ncols();
    let k = rng.random_range(1..=n);
    let mut cols: Vec<usize> = (0..n).collect();
    cols.shuffle(rng);
    let coeffs = random_unit_vector::<T, _>(rng, k);
    let mut x = CVector::<T>::zeros(frame.nrows());
    for (c, &j) in coeffs.iter().zip(&cols[..k]) {
        x += frame.column(j) * *c;
    }
    let norm = x.norm();
    x.unscale(norm)
}

/// Projection of rank `r` onto a random subspace.
pub fn random_projection<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> Projection<T> {
    let u = random_unitary::<T, _>(rng, n);
    columns_projection(&u, &(0..r).collect::<Vec<_>>())
}

/// Projection of uniformly random rank.
pub fn random_projection_any_rank<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Projection<T> {
    let r = rng.random_range(0..=n);
    random_projection(rng, n, r)
}

fn columns_projection<T: Real>(u: &CMatrix<T>, cols: &[usize]) -> Projection<T> {
    let n = u.nrows();
    let v = CMatrix::from_fn(n, cols.len(), |i, j| u[(i, cols[j])]);
    Projection::from_orthonormal_columns(n, &v).expect("columns of a unitary are orthonormal")
}

/// `k` mutually orthogonal nonzero projections (`1 ≤ k ≤ n`). With
/// `cover = false` some directions may be left out, so that the sum can
/// fall short of the identity.
pub fn random_orthogonal_projections<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    cover: bool,
) -> Vec<Projection<T>> {
    let u = random_unitary::<T, _>(rng, n);
    let mut cols: Vec<usize> = (0..n).collect();
    cols.shuffle(rng);
    let used = if cover { n } else { rng.random_range(k..=n) };
    let mut groups: Vec<Vec<usize>> = (0..k).map(|i| vec![cols[i]]).collect();
    for &c in &cols[k..used] {
        groups[rng.random_range(0..k)].push(c);
    }
    groups.iter().map(|g| columns_projection(&u, g)).collect()
}

/// A chain `P ≤ Q ≤ R` of projections built from nested column sets.
pub fn random_chain<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Projection<T>, Projection<T>, Projection<T>) {
    let u = random_unitary::<T, _>(rng, n);
    let r = rng.random_range(0..=n);
    let q = rng.random_range(0..=r);
    let p = rng.random_range(0..=q);
    let cols: Vec<usize> = (0..n).collect();
    (columns_projection(&u, &cols[..p]), columns_projection(&u, &cols[..q]), columns_projection(&u, &cols[..r]))
}

fn hermitize<T: Real>(m: CMatrix<T>) -> CMatrix<T> {
    let half = Complex::new(T::lit(0.5), T::zero());
    (&m + m.adjoint()) * half
}
