//! Quasipoints of the Stone spectrum in finite dimension.
//!
//! Every maximal dual ideal of a finite-dimensional projection lattice
//! contains a minimal projection, so two kinds suffice: atomic quasipoints
//! `𝔅_{Cx} = {P : P ≥ P_{Cx}}` generated by a unit vector living in one
//! block of the algebra, and principal ultrafilters of the diagonal algebra
//! `D_n`. No constructor for free quasipoints exists.

use crate::error::{Error, Result};
use crate::projlat::{same_dim, AlgebraContext, Projection};
use crate::report::{Check, Report};
use crate::scalar::{c, tol, CVector, Real};

/// `𝔅_{Cx}` for a unit vector `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicQuasipoint<T: Real> {
    x: CVector<T>,
    ctx: AlgebraContext,
}

impl<T: Real> AtomicQuasipoint<T> {
    /// Atomic quasipoint of the factor `L(C^n)`.
    pub fn new(x: CVector<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let ctx = AlgebraContext::factor(x.len())?;
        Self::in_context(ctx, x)
    }

    /// Atomic quasipoint of a direct sum: `x` must be supported in exactly
    /// one block.
    pub fn in_context(ctx: AlgebraContext, x: CVector<T>) -> Result<Self> {
        same_dim(ctx.dim(), x.len())?;
        check_unit(&x)?;
        let t = tol::<T>();
        let support: Vec<usize> = ctx
            .block_ranges()
            .iter()
            .enumerate()
            .filter(|(_, &(o, s))| x.rows(o, s).norm() > t.member)
            .map(|(i, _)| i)
            .collect();
        if support.len() != 1 {
            return Err(Error::InvalidQuasipoint(format!(
                "generating vector must lie in exactly one block, found support in blocks {support:?}"
            )));
        }
        Ok(Self { x, ctx })
    }

    pub fn vector(&self) -> &CVector<T> {
        &self.x
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The generating atom `P_{Cx}`.
    pub fn atom(&self) -> Projection<T> {
        Projection::onto_line(&self.x).expect("unit vector")
    }
}

pub(crate) fn check_unit<T: Real>(x: &CVector<T>) -> Result<()> {
    let norm = x.norm();
    if (norm - T::one()).abs() > tol::<T>().unit {
        return Err(Error::NotUnit { norm: norm.as_f64() });
    }
    Ok(())
}

/// Principal ultrafilter of `D_n` generated by the atom `e_k e_k*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanUltrafilter {
    ctx: AlgebraContext,
    atom: usize,
}

impl BooleanUltrafilter {
    pub fn new(ctx: AlgebraContext, atom: usize) -> Result<Self> {
        if !ctx.is_abelian() {
            return Err(Error::NonAbelian);
        }
        if atom >= ctx.dim() {
            return Err(Error::InvalidQuasipoint(format!("atom {atom} out of range for D_{}", ctx.dim())));
        }
        Ok(Self { ctx, atom })
    }

    /// All `n` ultrafilters of `D_n`.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        let ctx = AlgebraContext::diagonal(n)?;
        Ok((0..n).map(|atom| Self { ctx: ctx.clone(), atom }).collect())
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn principal_atom(&self) -> usize {
        self.atom
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }
}

/// A point of the Stone spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum Quasipoint<T: Real> {
    Atomic(AtomicQuasipoint<T>),
    Ultrafilter(BooleanUltrafilter),
}

impl<T: Real> From<AtomicQuasipoint<T>> for Quasipoint<T> {
    fn from(q: AtomicQuasipoint<T>) -> Self {
        Quasipoint::Atomic(q)
    }
}

impl<T: Real> From<BooleanUltrafilter> for Quasipoint<T> {
    fn from(q: BooleanUltrafilter) -> Self {
        Quasipoint::Ultrafilter(q)
    }
}

/// Membership classification of the pair `P`, `I - P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dichotomy {
    Positive,
    Negative,
    Neither,
    Both,
}

impl<T: Real> Quasipoint<T> {
    /// Atomic quasipoint of `L(C^n)`.
    pub fn atomic(x: CVector<T>) -> Result<Self> {
        AtomicQuasipoint::new(x).map(Quasipoint::Atomic)
    }

    pub fn ultrafilter(n: usize, atom: usize) -> Result<Self> {
        BooleanUltrafilter::new(AlgebraContext::diagonal(n)?, atom).map(Quasipoint::Ultrafilter)
    }

    pub fn dim(&self) -> usize {
        match self {
            Quasipoint::Atomic(q) => q.dim(),
            Quasipoint::Ultrafilter(q) => q.dim(),
        }
    }

    pub fn context(&self) -> &AlgebraContext {
        match self {
            Quasipoint::Atomic(q) => q.context(),
            Quasipoint::Ultrafilter(q) => q.context(),
        }
    }

    /// Unit vector generating the quasipoint (`e_k` for an ultrafilter).
    pub fn generating_vector(&self) -> CVector<T> {
        match self {
            Quasipoint::Atomic(q) => q.vector().clone(),
            Quasipoint::Ultrafilter(q) => {
                let mut e = CVector::zeros(q.dim());
                e[q.principal_atom()] = c(T::one());
                e
            }
        }
    }

    /// The minimal projection generating the quasipoint.
    pub fn generating_atom(&self) -> Projection<T> {
        match self {
            Quasipoint::Atomic(q) => q.atom(),
            Quasipoint::Ultrafilter(q) => {
                let mut mask = vec![false; q.dim()];
                mask[q.principal_atom()] = true;
                Projection::diagonal(&mask)
            }
        }
    }

    /// `P ∈ 𝔅`, i.e. `P` dominates the generating atom. `P` must belong to
    /// the quasipoint's algebra context.
    pub fn contains(&self, p: &Projection<T>) -> Result<bool> {
        self.context().require(p.matrix(), "projection")?;
        let x = self.generating_vector();
        Ok((p.apply(&x) - &x).norm() <= tol::<T>().member)
    }

    /// `𝔅 ∈ Q_P(R)`; the base-set reading of [`Quasipoint::contains`].
    pub fn in_base_set(&self, p: &Projection<T>) -> Result<bool> {
        self.contains(p)
    }

    pub fn dichotomy(&self, p: &Projection<T>) -> Result<Dichotomy> {
        let pos = self.contains(p)?;
        let neg = self.contains(&p.complement())?;
        Ok(match (pos, neg) {
            (true, false) => Dichotomy::Positive,
            (false, true) => Dichotomy::Negative,
            (false, false) => Dichotomy::Neither,
            (true, true) => Dichotomy::Both,
        })
    }
}

/// Checks the dual-ideal axioms of `q` restricted to a finite sample of
/// projections: `0` is absent, members are closed under meets, and members
/// are closed upward within the sample. Also reports, for every sampled
/// `P`, that `P` and `I - P` are never both members.
pub fn filter_properties_check<T: Real>(q: &Quasipoint<T>, sample: &[Projection<T>]) -> Report {
    let mut report = Report::new();
    let mut members = Vec::with_capacity(sample.len());
    for (i, p) in sample.iter().enumerate() {
        match q.contains(p) {
            Ok(m) => members.push(m),
            Err(e) => {
                report.push(Check::fail("sample projection lies in the quasipoint's algebra", format!("sample[{i}]: {e}")));
                return report;
            }
        }
    }

    let zero_member = sample.iter().zip(&members).position(|(p, &m)| p.is_zero() && m);
    report.push(match zero_member {
        None => Check::pass("0 is not a member"),
        Some(i) => Check::fail("0 is not a member", format!("sample[{i}] is zero and contained")),
    });

    let mut meet_violation = None;
    let mut upward_violation = None;
    'outer: for (i, p) in sample.iter().enumerate() {
        for (j, r) in sample.iter().enumerate() {
            if members[i] && members[j] && meet_violation.is_none() {
                let m = p.meet(r).expect("same dimension");
                if !q.contains(&m).expect("meet stays in the algebra") {
                    meet_violation = Some(format!("sample[{i}] ∧ sample[{j}] is not a member"));
                }
            }
            if members[i] && !members[j] && upward_violation.is_none() && p.leq(r).expect("same dimension") {
                upward_violation = Some(format!("sample[{i}] ≤ sample[{j}] but only the former is a member"));
            }
            if meet_violation.is_some() && upward_violation.is_some() {
                break 'outer;
            }
        }
    }
    report.push(match meet_violation {
        None => Check::pass("members are closed under meets"),
        Some(w) => Check::fail("members are closed under meets", w),
    });
    report.push(match upward_violation {
        None => Check::pass("members are closed upward"),
        Some(w) => Check::fail("members are closed upward", w),
    });

    let both = sample
        .iter()
        .position(|p| q.dichotomy(p).map(|d| d == Dichotomy::Both).unwrap_or(false));
    report.push(match both {
        None => Check::pass("P and I-P are never both members"),
        Some(i) => Check::fail("P and I-P are never both members", format!("sample[{i}]")),
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projlat::boolean_projections;
    use nalgebra::Complex;

    fn vec_re(v: &[f64]) -> CVector<f64> {
        CVector::from_iterator(v.len(), v.iter().map(|&r| Complex::new(r, 0.0)))
    }

    fn superposed() -> Quasipoint<f64> {
        let s = 0.5f64.sqrt();
        Quasipoint::atomic(vec_re(&[s, s])).unwrap()
    }

    #[test]
    fn unit_and_zero_membership() {
        let q = superposed();
        assert!(q.contains(&Projection::identity(2)).unwrap());
        assert!(!q.contains(&Projection::zero(2)).unwrap());
        assert!(q.in_base_set(&Projection::identity(2)).unwrap());
        assert!(!q.in_base_set(&Projection::zero(2)).unwrap());
    }

    #[test]
    fn membership_by_domination() {
        let q = Quasipoint::atomic(vec_re(&[1.0, 0.0, 0.0])).unwrap();
        assert!(q.contains(&Projection::diagonal(&[true, true, false])).unwrap());
        assert!(!q.contains(&Projection::diagonal(&[false, true, true])).unwrap());
        assert!(!superposed().in_base_set(&Projection::diagonal(&[true, false])).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(Quasipoint::atomic(vec_re(&[1.0, 1.0])), Err(Error::NotUnit { .. })));
        let q = superposed();
        assert!(matches!(q.contains(&Projection::identity(3)), Err(Error::DimensionMismatch { .. })));
        let uf = Quasipoint::<f64>::ultrafilter(2, 0).unwrap();
        let s = 0.5f64.sqrt();
        let line = Projection::onto_line(&vec_re(&[s, s])).unwrap();
        assert!(matches!(uf.contains(&line), Err(Error::ContextMismatch(_))));
        assert!(BooleanUltrafilter::new(AlgebraContext::factor(2).unwrap(), 0).is_err());
        assert!(BooleanUltrafilter::new(AlgebraContext::diagonal(2).unwrap(), 2).is_err());
    }

    #[test]
    fn mixed_context_atomic_quasipoint() {
        let ctx = AlgebraContext::new(vec![1, 2]).unwrap();
        let s = 0.5f64.sqrt();
        assert!(AtomicQuasipoint::in_context(ctx.clone(), vec_re(&[0.0, s, s])).is_ok());
        assert!(AtomicQuasipoint::in_context(ctx.clone(), vec_re(&[s, s, 0.0])).is_err());
        let q: Quasipoint<f64> = AtomicQuasipoint::in_context(ctx, vec_re(&[1.0, 0.0, 0.0])).unwrap().into();
        assert!(q.contains(&Projection::diagonal(&[true, false, false])).unwrap());
    }

    #[test]
    fn atomic_filter_properties() {
        let q = Quasipoint::atomic(vec_re(&[1.0, 0.0, 0.0])).unwrap();
        let sample = vec![
            Projection::identity(3),
            Projection::diagonal(&[true, true, false]),
            Projection::diagonal(&[true, false, true]),
            Projection::zero(3),
        ];
        assert!(filter_properties_check(&q, &sample).passed());
    }

    #[test]
    fn ultrafilter_on_d4_full_lattice() {
        let sample = boolean_projections::<f64>(4);
        for uf in BooleanUltrafilter::all(4).unwrap() {
            let q: Quasipoint<f64> = uf.into();
            assert!(filter_properties_check(&q, &sample).passed());
            for p in &sample {
                let d = q.dichotomy(p).unwrap();
                assert!(d == Dichotomy::Positive || d == Dichotomy::Negative);
            }
        }
    }

    #[test]
    fn superposition_contains_neither_coordinate_projection() {
        let q = superposed();
        let e1 = Projection::diagonal(&[true, false]);
        assert_eq!(q.dichotomy(&e1).unwrap(), Dichotomy::Neither);
        let e2 = Projection::diagonal(&[false, true]);
        assert_eq!(q.dichotomy(&e2).unwrap(), Dichotomy::Neither);
    }
}
