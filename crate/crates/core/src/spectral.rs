//! Bounded spectral families and opposite spectral families of
//! self-adjoint operators.
//!
//! A family is stored as its finitely many breakpoints (the distinct
//! eigenvalues) together with the cumulative eigenprojections. Values at
//! `±∞` are implied by boundedness and never stored. The continuity
//! convention at breakpoints is part of the type: [`LeftFamily`] evaluates
//! `F_λ = Σ_{λ_i < λ} P_i` and [`RightFamily`] evaluates
//! `E_λ = Σ_{λ_i ≤ λ} P_i`.

use std::fmt;
use std::marker::PhantomData;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::projlat::{frob, same_dim, HermitianOperator, Projection};
use crate::scalar::{c, tol, CMatrix, CVector, Real};

/// Breakpoint convention of a spectral family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContinuityKind {
    Left,
    Right,
}

impl fmt::Display for ContinuityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuityKind::Left => f.write_str("left"),
            ContinuityKind::Right => f.write_str("right"),
        }
    }
}

mod sealed {
    pub trait Sealed {}
}

/// Type-level continuity flag.
pub trait Continuity: sealed::Sealed + fmt::Debug + Clone + Copy + PartialEq + 'static {
    const KIND: ContinuityKind;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Left;
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Right;

impl sealed::Sealed for Left {}
impl sealed::Sealed for Right {}
impl Continuity for Left {
    const KIND: ContinuityKind = ContinuityKind::Left;
}
impl Continuity for Right {
    const KIND: ContinuityKind = ContinuityKind::Right;
}

/// Distinct eigenvalues in increasing order with their eigenprojections.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T: Real> {
    pub values: Vec<T>,
    pub projections: Vec<Projection<T>>,
}

/// Eigenvalue clustering width `eig_rel * max(1, |A|)`.
pub fn clustering_width<T: Real>(norm: T) -> T {
    tol::<T>().eig_rel * norm.max(T::one())
}

/// Eigendecomposition with eigenvalues closer than the clustering width
/// merged into one breakpoint carrying the summed eigenprojection.
pub fn eigen_decomposition<T: Real>(a: &HermitianOperator<T>) -> EigenDecomposition<T> {
    let n = a.dim();
    let eig = SymmetricEigen::new(a.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let norm = eig.eigenvalues.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let width = clustering_width(norm);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()] <= width => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut values = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let mean = cl.iter().fold(T::zero(), |acc, &i| acc + eig.eigenvalues[i])
            / T::from_usize(cl.len()).unwrap();
        let mut p = CMatrix::zeros(n, n);
        for &i in &cl {
            let v: CVector<T> = eig.eigenvectors.column(i).into_owned();
            p += &v * v.adjoint();
        }
        values.push(mean);
        projections.push(Projection::new(p).expect("eigenprojection of a Hermitian matrix"));
    }
    EigenDecomposition { values, projections }
}

/// Finite step spectral family with continuity convention `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily<T: Real, C: Continuity> {
    dim: usize,
    breakpoints: Vec<T>,
    cumulative: Vec<Projection<T>>,
    _flavor: PhantomData<C>,
}

/// Left-continuous family `F^A`.
pub type LeftFamily<T> = SpectralFamily<T, Left>;
/// Right-continuous family `E^A`.
pub type RightFamily<T> = SpectralFamily<T, Right>;

impl<T: Real, C: Continuity> SpectralFamily<T, C> {
    /// Spectral family of `A` in the flavor `C`.
    pub fn of(a: &HermitianOperator<T>) -> Self {
        let eig = eigen_decomposition(a);
        let n = a.dim();
        let mut cumulative = Vec::with_capacity(eig.values.len());
        let mut acc = CMatrix::zeros(n, n);
        for (k, p) in eig.projections.iter().enumerate() {
            acc += p.matrix();
            let cum = if k + 1 == eig.projections.len() {
                Projection::identity(n)
            } else {
                Projection::new(acc.clone()).expect("sum of orthogonal eigenprojections")
            };
            cumulative.push(cum);
        }
        Self { dim: n, breakpoints: eig.values, cumulative, _flavor: PhantomData }
    }

    /// Validates breakpoints and cumulative projections supplied directly.
    pub fn from_parts(breakpoints: Vec<T>, cumulative: Vec<Projection<T>>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidFamily("no breakpoints".into()));
        }
        if breakpoints.len() != cumulative.len() {
            return Err(Error::InvalidFamily("breakpoint and projection counts differ".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidFamily("breakpoints are not strictly increasing".into()));
        }
        let dim = cumulative[0].dim();
        for w in cumulative.windows(2) {
            same_dim(dim, w[1].dim())?;
            if !w[0].leq(&w[1])? || w[0].approx_eq(&w[1]) {
                return Err(Error::InvalidFamily("cumulative projections are not strictly increasing".into()));
            }
        }
        if cumulative[0].is_zero() {
            return Err(Error::InvalidFamily("first cumulative projection is zero".into()));
        }
        if !cumulative.last().unwrap().is_identity() {
            return Err(Error::InvalidFamily("last cumulative projection is not the identity".into()));
        }
        Ok(Self { dim, breakpoints, cumulative, _flavor: PhantomData })
    }

    pub fn continuity(&self) -> ContinuityKind {
        C::KIND
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn cumulative(&self) -> &[Projection<T>] {
        &self.cumulative
    }

    /// Number of breakpoints counted by the evaluation at `lambda`.
    fn count_below(&self, lambda: T) -> usize {
        match C::KIND {
            ContinuityKind::Left => self.breakpoints.partition_point(|&b| b < lambda),
            ContinuityKind::Right => self.breakpoints.partition_point(|&b| b <= lambda),
        }
    }

    /// The projection `F_λ` (or `E_λ`).
    pub fn evaluate(&self, lambda: T) -> Projection<T> {
        match self.count_below(lambda) {
            0 => Projection::zero(self.dim),
            k => self.cumulative[k - 1].clone(),
        }
    }

    /// The eigenprojections `P_k = C_k - C_{k-1}`.
    pub fn eigenprojections(&self) -> Vec<Projection<T>> {
        let mut prev = Projection::zero(self.dim);
        self.cumulative
            .iter()
            .map(|cum| {
                let p = cum.difference(&prev).expect("cumulative projections are increasing");
                prev = cum.clone();
                p
            })
            .collect()
    }

    /// `Σ λ_k (C_k - C_{k-1})`.
    pub fn reconstruct(&self) -> HermitianOperator<T> {
        let n = self.dim;
        let mut m = CMatrix::zeros(n, n);
        let mut prev = CMatrix::zeros(n, n);
        for (&lambda, cum) in self.breakpoints.iter().zip(&self.cumulative) {
            m += (cum.matrix() - &prev) * c(lambda);
            prev = cum.matrix().clone();
        }
        HermitianOperator::new(m).expect("real combination of projections is Hermitian")
    }

    /// Equality within the projection tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.breakpoints.len() == other.breakpoints.len()
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (*a - *b).abs() <= tol::<T>().identity)
            && self.cumulative.iter().zip(&other.cumulative).all(|(a, b)| a.approx_eq(b))
    }

    fn reflavor<D: Continuity>(self) -> SpectralFamily<T, D> {
        SpectralFamily { dim: self.dim, breakpoints: self.breakpoints, cumulative: self.cumulative, _flavor: PhantomData }
    }
}

/// `φ(E)_λ = ⋁_{μ<λ} E_μ`. For a step family this keeps the breakpoints
/// and projections and switches the breakpoint convention.
pub fn phi<T: Real>(e: RightFamily<T>) -> LeftFamily<T> {
    e.reflavor()
}

/// `φ^{-1}(F)_λ = ⋀_{μ>λ} F_μ`.
pub fn phi_inv<T: Real>(f: LeftFamily<T>) -> RightFamily<T> {
    f.reflavor()
}

/// Reconstruction tolerance `recon_rel * max(1, |A|)`.
pub fn reconstruction_tolerance<T: Real>(a: &HermitianOperator<T>) -> T {
    tol::<T>().recon_rel * a.norm().max(T::one())
}

/// `|A - B|_F`.
pub fn operator_distance<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<T> {
    same_dim(a.dim(), b.dim())?;
    Ok(frob(&(a.matrix() - b.matrix())))
}

/// Bounded opposite spectral family in the corner algebra with unit
/// `unit`.
///
/// Between breakpoints `b_1 < ... < b_m` the family is constant:
/// `G_λ = levels[#{k : b_k < λ}]`, so `levels[0] = unit` and
/// `levels[m] = 0`. Evaluating with a strict comparison at breakpoints
/// realizes `⋀_{μ<λ} G_μ = G_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OppositeSpectralFamily<T: Real> {
    unit: Projection<T>,
    breakpoints: Vec<T>,
    levels: Vec<Projection<T>>,
}

impl<T: Real> OppositeSpectralFamily<T> {
    /// Builds and validates a family. Consecutive equal levels are merged so
    /// that the stored step list is minimal.
    pub fn new(unit: Projection<T>, breakpoints: Vec<T>, levels: Vec<Projection<T>>) -> Result<Self> {
        if levels.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidFamily("need exactly one more level than breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidFamily("breakpoints are not strictly increasing".into()));
        }
        let mut bps = Vec::with_capacity(breakpoints.len());
        let mut lv = vec![levels[0].clone()];
        for (b, l) in breakpoints.into_iter().zip(levels.into_iter().skip(1)) {
            if !l.approx_eq(lv.last().unwrap()) {
                bps.push(b);
                lv.push(l);
            }
        }
        let g = Self { unit, breakpoints: bps, levels: lv };
        g.validate()?;
        Ok(g)
    }

    /// Checks antitonicity, the meet condition at every breakpoint, and
    /// boundedness (`unit` below the first breakpoint, `0` above the last).
    pub fn validate(&self) -> Result<()> {
        let n = self.unit.dim();
        for l in &self.levels {
            same_dim(n, l.dim())?;
            if !l.leq(&self.unit)? {
                return Err(Error::InvalidFamily("level is not below the unit".into()));
            }
        }
        if !self.levels[0].approx_eq(&self.unit) {
            return Err(Error::InvalidFamily("family is not the unit below the first breakpoint".into()));
        }
        if !self.levels.last().unwrap().is_zero() {
            return Err(Error::InvalidFamily("family is not zero above the last breakpoint".into()));
        }
        for w in self.levels.windows(2) {
            if !w[1].leq(&w[0])? {
                return Err(Error::InvalidFamily("family is not antitone".into()));
            }
        }
        for (k, &b) in self.breakpoints.iter().enumerate() {
            let below = self.meet_from_below(b, k)?;
            if !below.approx_eq(&self.evaluate(b)) {
                return Err(Error::InvalidFamily(format!("meet condition fails at breakpoint {k}")));
            }
        }
        Ok(())
    }

    /// `⋀ G_μ` over a ladder of points `μ < b` approaching `b`.
    fn meet_from_below(&self, b: T, k: usize) -> Result<Projection<T>> {
        let gap = if k == 0 { T::one() } else { b - self.breakpoints[k - 1] };
        let mut acc = self.unit.clone();
        let two = T::lit(2.0);
        let mut step = gap / two;
        for _ in 0..8 {
            acc = acc.meet(&self.evaluate(b - step))?;
            step /= two;
        }
        Ok(acc)
    }

    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    pub fn unit(&self) -> &Projection<T> {
        &self.unit
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[Projection<T>] {
        &self.levels
    }

    /// True for the zero corner `P = 0`, where the family is identically 0.
    pub fn is_degenerate(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn evaluate(&self, lambda: T) -> Projection<T> {
        self.levels[self.breakpoints.partition_point(|&b| b < lambda)].clone()
    }

    /// Structural equality within the projection tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.unit.approx_eq(&other.unit)
            && self.breakpoints.len() == other.breakpoints.len()
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (*a - *b).abs() <= tol::<T>().identity)
            && self.levels.iter().zip(&other.levels).all(|(a, b)| a.approx_eq(b))
    }
}

/// `G = I - F`.
pub fn opposite_of<T: Real>(f: &LeftFamily<T>) -> OppositeSpectralFamily<T> {
    let n = f.dim();
    let mut levels = vec![Projection::identity(n)];
    levels.extend(f.cumulative().iter().map(|p| p.complement()));
    OppositeSpectralFamily::new(Projection::identity(n), f.breakpoints().to_vec(), levels)
        .expect("complement of a spectral family is an opposite spectral family")
}

/// `F = I - G`; requires the unit of `G` to be the identity.
pub fn from_opposite<T: Real>(g: &OppositeSpectralFamily<T>) -> Result<LeftFamily<T>> {
    if !g.unit().is_identity() {
        return Err(Error::InvalidFamily("opposite family lives in a proper corner".into()));
    }
    let cumulative = g.levels().iter().skip(1).map(|p| p.complement()).collect();
    LeftFamily::from_parts(g.breakpoints().to_vec(), cumulative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Complex;

    fn diag(v: &[f64]) -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(v).unwrap()
    }

    fn superposed_projection() -> Projection<f64> {
        let s = 0.5f64.sqrt();
        let x = CVector::from_vec(vec![Complex::new(s, 0.0), Complex::new(s, 0.0)]);
        Projection::onto_line(&x).unwrap()
    }

    #[test]
    fn family_of_a_projection_has_three_regions() {
        let p = superposed_projection();
        let a = HermitianOperator::new(p.matrix().clone()).unwrap();
        let f = LeftFamily::of(&a);
        assert_eq!(f.breakpoints().len(), 2);
        assert!(f.evaluate(-0.5).is_zero());
        assert!(f.evaluate(0.0).is_zero());
        assert!(f.evaluate(0.5).approx_eq(&p.complement()));
        assert!(f.evaluate(1.0).approx_eq(&p.complement()));
        assert!(f.evaluate(1.5).is_identity());
    }

    #[test]
    fn scalar_operator_has_one_breakpoint() {
        let a = HermitianOperator::<f64>::scalar(3, 2.5).unwrap();
        let f = LeftFamily::of(&a);
        assert_eq!(f.breakpoints(), &[2.5]);
        assert_eq!(f.cumulative().len(), 1);
        assert!(f.cumulative()[0].is_identity());
    }

    #[test]
    fn diagonal_family() {
        let f = LeftFamily::of(&diag(&[1.0, 2.0, 3.0]));
        assert_eq!(f.breakpoints().len(), 3);
        for (b, e) in f.breakpoints().iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*b, e, epsilon = 1e-12);
        }
        assert!(f.cumulative()[0].approx_eq(&Projection::diagonal(&[true, false, false])));
        assert!(f.cumulative()[1].approx_eq(&Projection::diagonal(&[true, true, false])));
        assert!(f.cumulative()[2].is_identity());
    }

    #[test]
    fn phi_changes_only_the_breakpoint_convention() {
        let p = superposed_projection();
        let a = HermitianOperator::new(p.matrix().clone()).unwrap();
        let e = RightFamily::of(&a);
        assert!(e.evaluate(0.0).approx_eq(&p.complement()));
        let f = phi(e.clone());
        assert!(f.evaluate(0.0).is_zero());
        assert_eq!(phi_inv(f), e);

        let a = diag(&[0.0, 1.0]);
        let f = LeftFamily::of(&a);
        let e = RightFamily::of(&a);
        assert!(f.evaluate(1.0).approx_eq(&Projection::diagonal(&[true, false])));
        assert!(e.evaluate(1.0).is_identity());
    }

    #[test]
    fn evaluation_between_breakpoints_agrees_for_both_flavors() {
        let a = diag(&[1.0, 3.0]);
        let expected = Projection::diagonal(&[true, false]);
        assert!(LeftFamily::of(&a).evaluate(2.0).approx_eq(&expected));
        assert!(RightFamily::of(&a).evaluate(2.0).approx_eq(&expected));
        assert!(LeftFamily::of(&a).evaluate(-10.0).is_zero());
        assert!(RightFamily::of(&a).evaluate(10.0).is_identity());
    }

    #[test]
    fn opposite_family_of_projection() {
        let p = superposed_projection();
        let a = HermitianOperator::new(p.matrix().clone()).unwrap();
        let g = opposite_of(&LeftFamily::of(&a));
        assert!(g.evaluate(0.0).is_identity());
        assert!(g.evaluate(0.5).approx_eq(&p));
        assert!(g.evaluate(1.0).approx_eq(&p));
        assert!(g.evaluate(1.01).is_zero());

        let t = HermitianOperator::<f64>::scalar(2, -1.0).unwrap();
        let g = opposite_of(&LeftFamily::of(&t));
        assert!(g.evaluate(-1.0).is_identity());
        assert!(g.evaluate(-0.99).is_zero());
    }

    #[test]
    fn reconstruction() {
        let a = diag(&[1.0, 2.0, 3.0]);
        let r = LeftFamily::of(&a).reconstruct();
        assert!(operator_distance(&a, &r).unwrap() < 1e-12);
        let p = superposed_projection();
        let a = HermitianOperator::new(p.matrix().clone()).unwrap();
        assert!(operator_distance(&a, &RightFamily::of(&a).reconstruct()).unwrap() < 1e-12);
    }

    #[test]
    fn degenerate_eigenvalues_merge() {
        let a = diag(&[1.0, 1.0 + 1e-12, 4.0]);
        let f = LeftFamily::of(&a);
        assert_eq!(f.breakpoints().len(), 2);
        assert_eq!(f.cumulative()[0].rank(), 2);
    }

    #[test]
    fn from_parts_validation() {
        let i = Projection::<f64>::identity(2);
        let e1 = Projection::<f64>::diagonal(&[true, false]);
        assert!(LeftFamily::from_parts(vec![0.0, 1.0], vec![e1.clone(), i.clone()]).is_ok());
        assert!(LeftFamily::from_parts(vec![1.0, 0.0], vec![e1.clone(), i.clone()]).is_err());
        assert!(LeftFamily::from_parts(vec![0.0, 1.0], vec![i.clone(), e1.clone()]).is_err());
        assert!(LeftFamily::from_parts(vec![0.0], vec![e1]).is_err());
    }

    #[test]
    fn opposite_validation_rejects_non_antitone_levels() {
        let i = Projection::<f64>::identity(2);
        let e1 = Projection::<f64>::diagonal(&[true, false]);
        let e2 = Projection::<f64>::diagonal(&[false, true]);
        let z = Projection::<f64>::zero(2);
        assert!(OppositeSpectralFamily::new(i.clone(), vec![0.0, 1.0], vec![i.clone(), e1.clone(), z.clone()]).is_ok());
        assert!(OppositeSpectralFamily::new(i.clone(), vec![0.0, 1.0, 2.0], vec![i.clone(), e1, e2, z.clone()]).is_err());
        assert!(OppositeSpectralFamily::new(i.clone(), vec![0.0], vec![i.clone(), i]).is_err());
    }

    #[test]
    fn from_opposite_inverts_opposite_of() {
        let f = LeftFamily::of(&diag(&[-1.0, 0.5, 0.5, 2.0]));
        assert!(from_opposite(&opposite_of(&f)).unwrap().approx_eq(&f));
    }
}
