//! Independent reference for spectra and Born weights.
//!
//! This path shares no code with the implementation route: a Hermitian
//! `A = R + iS` is embedded as the real symmetric matrix
//! `[[R, -S], [S, R]]`, which is diagonalized by a plain cyclic Jacobi
//! sweep in `f64`. Each eigenvalue of `A` appears twice in the embedding,
//! and `|P_λ x|^2` equals the squared norm of the projection of
//! `(Re x, Im x)` onto the doubled eigenspace.

use crate::projlat::HermitianOperator;
use crate::scalar::{CVector, Real};

/// Eigenvalues (ascending, with multiplicity) and orthonormal eigenvectors
/// (as columns) of a real symmetric matrix.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1.0);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

/// Distinct eigenvalues of `A` with their Born weights for `x`, computed by
/// the reference route.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    /// `(λ, |P_λ x|^2)` in increasing order of `λ`.
    pub entries: Vec<(f64, f64)>,
}

impl OracleSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// Eigenvalues with `|P_λ x| > threshold`.
    pub fn support(&self, threshold: f64) -> Vec<f64> {
        self.entries.iter().filter(|e| e.1.sqrt() > threshold).map(|e| e.0).collect()
    }

    pub fn min_support(&self, threshold: f64) -> Option<f64> {
        self.support(threshold).first().copied()
    }

    pub fn max_support(&self, threshold: f64) -> Option<f64> {
        self.support(threshold).last().copied()
    }
}

/// Reference spectrum of `A` with weights for `x`. Eigenvalues closer than
/// `1e-8 · max(1, |A|)` are merged, mirroring the degeneracy convention of
/// the implementation.
pub fn oracle_spectrum<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> OracleSpectrum {
    let n = a.dim();
    let m = a.matrix();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let re = m[(i, j)].re.as_f64();
            let im = m[(i, j)].im.as_f64();
            big[i][j] = re;
            big[i + n][j + n] = re;
            big[i][j + n] = -im;
            big[i + n][j] = im;
        }
    }
    let xt: Vec<f64> = (0..n).map(|i| x[i].re.as_f64()).chain((0..n).map(|i| x[i].im.as_f64())).collect();
    let (values, vectors) = jacobi_eigen(big);
    let norm = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let width = 1e-8 * norm.max(1.0);

    let mut entries: Vec<(f64, f64, usize)> = Vec::new();
    for (value, vec) in values.iter().zip(&vectors) {
        let proj: f64 = vec.iter().zip(&xt).map(|(a, b)| a * b).sum();
        match entries.last_mut() {
            Some((v, w, k)) if value - *v / *k as f64 <= width => {
                *v += value;
                *w += proj * proj;
                *k += 1;
            }
            _ => entries.push((*value, proj * proj, 1)),
        }
    }
    OracleSpectrum { entries: entries.into_iter().map(|(v, w, k)| (v / k as f64, w)).collect() }
}
