//! Dense Hermitian operators and the projection lattice.
//!
//! Meets and joins are computed from singular value decompositions rather
//! than alternating products, so near-parallel ranges converge in one step.

use nalgebra::{Complex, DMatrix, SVD};

use crate::error::{Error, Result};
use crate::scalar::{c, tol, CMatrix, CVector, Real};

/// Frobenius norm of a complex matrix.
pub(crate) fn frob<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn check_square<T: Real>(m: &CMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyDimension);
    }
    Ok(m.nrows())
}

pub(crate) fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Self-adjoint operator on `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    /// Validates `m = m*` within the Hermitian tolerance. The matrix is
    /// stored as given.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        check_square(&m)?;
        let dev = frob(&(&m - m.adjoint()));
        if dev > tol::<T>().herm {
            return Err(Error::NotHermitian { deviation: dev.as_f64() });
        }
        Ok(Self { m })
    }

    /// Builds an operator from separate real and imaginary parts.
    pub fn from_parts(re: &DMatrix<T>, im: &DMatrix<T>) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::Malformed("real and imaginary parts differ in shape".into()));
        }
        Self::new(re.zip_map(im, Complex::new))
    }

    pub fn from_real_diagonal(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let d = CMatrix::from_diagonal(&CVector::from_iterator(
            values.len(),
            values.iter().map(|&v| c(v)),
        ));
        Ok(Self { m: d })
    }

    pub fn scalar(dim: usize, t: T) -> Result<Self> {
        Self::from_real_diagonal(&vec![t; dim])
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::scalar(dim, T::zero())
    }

    /// Real linear combination `sum_j a_j P_j`.
    pub fn linear_combination(coeffs: &[T], projs: &[Projection<T>]) -> Result<Self> {
        if coeffs.len() != projs.len() {
            return Err(Error::InvalidCoefficients(format!(
                "{} coefficients for {} projections",
                coeffs.len(),
                projs.len()
            )));
        }
        let dim = projs.first().map(|p| p.dim()).ok_or(Error::EmptyDimension)?;
        let mut m = CMatrix::zeros(dim, dim);
        for (&a, p) in coeffs.iter().zip(projs) {
            same_dim(dim, p.dim())?;
            m += p.matrix() * c(a);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    /// `A + tI`.
    pub fn shifted(&self, t: T) -> Self {
        let n = self.dim();
        Self { m: &self.m + CMatrix::identity(n, n) * c(t) }
    }

    /// `tA`.
    pub fn scaled(&self, t: T) -> Self {
        Self { m: &self.m * c(t) }
    }

    /// `I - A`.
    pub fn one_minus(&self) -> Self {
        self.scaled(-T::one()).shifted(T::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self { m: &self.m + &other.m })
    }

    /// `<Ax, x>`; the imaginary part vanishes for Hermitian `A`.
    pub fn quadratic_form(&self, x: &CVector<T>) -> Result<T> {
        same_dim(self.dim(), x.len())?;
        Ok(x.dotc(&(&self.m * x)).re)
    }

    /// Operator norm, `max |lambda|` over the spectrum.
    pub fn norm(&self) -> T {
        let eig = nalgebra::SymmetricEigen::new(self.m.clone());
        eig.eigenvalues.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    /// True when every off-diagonal entry vanishes within tolerance.
    pub fn is_diagonal(&self) -> bool {
        off_diagonal_norm(&self.m) <= tol::<T>().proj
    }
}

pub(crate) fn off_diagonal_norm<T: Real>(m: &CMatrix<T>) -> T {
    let mut acc = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Orthogonal projection in `P(L(C^dim))`. Validated on construction and
/// immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Real> {
    m: CMatrix<T>,
    rank: usize,
}

impl<T: Real> Projection<T> {
    /// Validates `P = P* = P^2` and an integral trace. The matrix is stored
    /// as given.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        check_square(&m)?;
        let t = tol::<T>();
        let herm = frob(&(&m - m.adjoint()));
        if herm > t.proj {
            return Err(Error::NotProjection(format!("not self-adjoint (deviation {:e})", herm.as_f64())));
        }
        let idem = frob(&(&m * &m - &m));
        if idem > t.proj {
            return Err(Error::NotProjection(format!("not idempotent (deviation {:e})", idem.as_f64())));
        }
        let trace = m.trace().re;
        let rounded = trace.round();
        if (trace - rounded).abs() > t.rank {
            return Err(Error::NotProjection(format!("trace {} is not integral", trace.as_f64())));
        }
        let rank = rounded.to_usize().ok_or_else(|| Error::NotProjection("negative trace".into()))?;
        Ok(Self { m, rank })
    }

    pub fn zero(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim), rank: 0 }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim), rank: dim }
    }

    /// Diagonal projection with ones where `mask` is set.
    pub fn diagonal(mask: &[bool]) -> Self {
        let n = mask.len();
        let d = CVector::from_iterator(n, mask.iter().map(|&b| if b { c(T::one()) } else { c(T::zero()) }));
        Self { m: CMatrix::from_diagonal(&d), rank: mask.iter().filter(|&&b| b).count() }
    }

    /// `V V*` for a matrix `V` with orthonormal columns.
    pub fn from_orthonormal_columns(dim: usize, v: &CMatrix<T>) -> Result<Self> {
        same_dim(dim, v.nrows())?;
        if v.ncols() == 0 {
            return Ok(Self::zero(dim));
        }
        let gram = v.adjoint() * v;
        let dev = frob(&(gram - CMatrix::identity(v.ncols(), v.ncols())));
        if dev > tol::<T>().proj {
            return Err(Error::NotOrthonormal(format!("Gram deviation {:e}", dev.as_f64())));
        }
        Self::new(v * v.adjoint())
    }

    /// Projection onto the line spanned by a nonzero vector.
    pub fn onto_line(x: &CVector<T>) -> Result<Self> {
        let norm = x.norm();
        if x.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if norm <= tol::<T>().member {
            return Err(Error::NotUnit { norm: norm.as_f64() });
        }
        let u = x / c(norm);
        Self::new(&u * u.adjoint())
    }

    /// Projection onto the span of the columns of `v`.
    pub fn onto_span(v: &CMatrix<T>) -> Result<Self> {
        let dim = v.nrows();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(column_space(v, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn is_identity(&self) -> bool {
        self.rank == self.dim()
    }

    pub fn apply(&self, x: &CVector<T>) -> CVector<T> {
        &self.m * x
    }

    /// Equality within the projection tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.rank == other.rank
            && frob(&(&self.m - &other.m)) <= tol::<T>().proj
    }

    /// Lattice order: `self <= other` iff `other * self = self`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        same_dim(self.dim(), other.dim())?;
        if self.rank > other.rank {
            return Ok(false);
        }
        Ok(frob(&(&other.m * &self.m - &self.m)) <= tol::<T>().proj)
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        let n = self.dim();
        Self { m: CMatrix::identity(n, n) - &self.m, rank: n - self.rank }
    }

    /// Projection onto `range(P) ∩ range(Q)`: the joint null space of
    /// `I - P` and `I - Q`, read off the SVD of the stacked complements.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        let n = self.dim();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(n));
        }
        let mut stacked = CMatrix::zeros(2 * n, n);
        stacked.rows_mut(0, n).copy_from(&self.complement().m);
        stacked.rows_mut(n, n).copy_from(&other.complement().m);
        let svd = SVD::new(stacked, false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let cut = tol::<T>().member;
        let null: Vec<CVector<T>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= cut)
            .map(|(i, _)| v_t.row(i).adjoint())
            .collect();
        Ok(from_columns(n, &null))
    }

    /// Projection onto `range(P) + range(Q)`, from the left singular
    /// vectors of `[P | Q]`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        let n = self.dim();
        let mut wide = CMatrix::zeros(n, 2 * n);
        wide.columns_mut(0, n).copy_from(&self.m);
        wide.columns_mut(n, n).copy_from(&other.m);
        Ok(column_space(&wide, n))
    }

    /// `P Q = 0` within tolerance.
    pub fn is_orthogonal_to(&self, other: &Self) -> Result<bool> {
        same_dim(self.dim(), other.dim())?;
        Ok(frob(&(&self.m * &other.m)) <= tol::<T>().proj)
    }

    /// Sum of pairwise orthogonal projections.
    pub fn orthogonal_sum(dim: usize, parts: &[&Self]) -> Result<Self> {
        let mut m = CMatrix::zeros(dim, dim);
        for (i, p) in parts.iter().enumerate() {
            same_dim(dim, p.dim())?;
            for (j, q) in parts.iter().enumerate().skip(i + 1) {
                if !p.is_orthogonal_to(q)? {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
            m += &p.m;
        }
        Self::new(m)
    }

    /// `P - Q` for `Q <= P`.
    pub fn difference(&self, below: &Self) -> Result<Self> {
        if !below.leq(self)? {
            return Err(Error::NotBelow("subtrahend is not below the minuend".into()));
        }
        Self::new(&self.m - &below.m)
    }
}

fn from_columns<T: Real>(dim: usize, cols: &[CVector<T>]) -> Projection<T> {
    let mut m = CMatrix::zeros(dim, dim);
    for v in cols {
        m += v * v.adjoint();
    }
    Projection { m, rank: cols.len() }
}

fn column_space<T: Real>(v: &CMatrix<T>, dim: usize) -> Projection<T> {
    let svd = SVD::new(v.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let cut = tol::<T>().member;
    let cols: Vec<CVector<T>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cut)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    from_columns(dim, &cols)
}

/// Direct-sum decomposition `R = M_{n1} ⊕ ... ⊕ M_{nk}` acting on
/// `C^{n1 + ... + nk}`. A single block is the factor `L(C^n)`; `n` blocks of
/// size one give the diagonal algebra `D_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    blocks: Vec<usize>,
}

impl AlgebraContext {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidContext("no blocks".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidContext("zero-sized block".into()));
        }
        Ok(Self { blocks })
    }

    /// The full matrix algebra `L(C^n)`.
    pub fn factor(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The diagonal algebra `D_n`.
    pub fn diagonal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("zero-sized block".into()));
        }
        Self::new(vec![1; n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    /// `(offset, size)` of each block.
    pub fn block_ranges(&self) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.blocks
            .iter()
            .map(|&b| {
                let r = (off, b);
                off += b;
                r
            })
            .collect()
    }

    /// Index of the block containing coordinate `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.block_ranges().iter().position(|&(o, s)| i >= o && i < o + s)
    }

    /// True when `m` is block-diagonal with respect to this decomposition.
    pub fn contains_matrix<T: Real>(&self, m: &CMatrix<T>) -> bool {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return false;
        }
        let mut acc = T::zero();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if self.block_of(i) != self.block_of(j) {
                    acc += m[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt() <= tol::<T>().proj
    }

    pub(crate) fn require<T: Real>(&self, m: &CMatrix<T>, what: &str) -> Result<()> {
        same_dim(self.dim(), m.nrows())?;
        if self.contains_matrix(m) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{what} is not block-diagonal for blocks {:?}", self.blocks)))
        }
    }
}

/// Minimal projections of an algebra context, block by block.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomFamily<T: Real> {
    /// A one-dimensional block contributes exactly one atom.
    Minimal(Projection<T>),
    /// A block of size greater than one: its atoms are all rank-one
    /// projections onto lines in `C^size`, a continuum that is not
    /// enumerated.
    Continuum { offset: usize, size: usize },
}

pub fn atoms<T: Real>(ctx: &AlgebraContext) -> Vec<AtomFamily<T>> {
    let n = ctx.dim();
    ctx.block_ranges()
        .into_iter()
        .map(|(offset, size)| {
            if size == 1 {
                let mut mask = vec![false; n];
                mask[offset] = true;
                AtomFamily::Minimal(Projection::diagonal(&mask))
            } else {
                AtomFamily::Continuum { offset, size }
            }
        })
        .collect()
}

/// All `2^n` projections of `D_n`, indexed by bitmask.
pub fn boolean_projections<T: Real>(n: usize) -> Vec<Projection<T>> {
    (0..(1usize << n))
        .map(|bits| {
            let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            Projection::diagonal(&mask)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[(f64, f64)]) -> Projection<f64> {
        let x = CVector::from_iterator(v.len(), v.iter().map(|&(r, i)| Complex::new(r, i)));
        Projection::onto_line(&x).unwrap()
    }

    #[test]
    fn leq_examples() {
        let p = Projection::<f64>::diagonal(&[true, false]);
        let q = Projection::<f64>::identity(2);
        let zero = Projection::<f64>::zero(2);
        assert!(zero.leq(&q).unwrap());
        assert!(p.leq(&p).unwrap());
        assert!(p.leq(&q).unwrap());
        assert!(!q.leq(&p).unwrap());
        assert!(matches!(
            p.leq(&Projection::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn meet_examples() {
        let p = line(&[(1.0, 0.0), (1.0, 0.0)]);
        let e1 = Projection::<f64>::diagonal(&[true, false]);
        assert!(p.meet(&Projection::identity(2)).unwrap().approx_eq(&p));
        assert!(p.meet(&p.complement()).unwrap().is_zero());
        assert!(p.meet(&e1).unwrap().is_zero());
    }

    #[test]
    fn join_and_complement_examples() {
        let p = line(&[(0.6, 0.0), (0.0, 0.8)]);
        assert!(p.join(&Projection::zero(2)).unwrap().approx_eq(&p));
        assert!(p.complement().complement().approx_eq(&p));
        let e1 = Projection::<f64>::diagonal(&[true, false]);
        let e2 = Projection::<f64>::diagonal(&[false, true]);
        assert!(e1.join(&e2).unwrap().approx_eq(&Projection::identity(2)));
    }

    #[test]
    fn meet_of_planes_in_three_dimensions_is_a_line() {
        let a = CMatrix::<f64>::from_row_slice(
            3,
            2,
            &[c(1.0), c(0.0), c(0.0), c(1.0), c(0.0), c(0.0)],
        );
        let b = CMatrix::<f64>::from_row_slice(
            3,
            2,
            &[c(1.0), c(0.0), c(0.0), c(1.0), c(0.0), c(1.0)],
        );
        let p = Projection::onto_span(&a).unwrap();
        let q = Projection::onto_span(&b).unwrap();
        let m = p.meet(&q).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.approx_eq(&Projection::diagonal(&[true, false, false])));
        assert_eq!(p.join(&q).unwrap().rank(), 3);
    }

    #[test]
    fn atoms_examples() {
        let d3 = AlgebraContext::diagonal(3).unwrap();
        let a: Vec<AtomFamily<f64>> = atoms(&d3);
        assert_eq!(a.len(), 3);
        for (i, fam) in a.iter().enumerate() {
            let mut mask = vec![false; 3];
            mask[i] = true;
            assert_eq!(fam, &AtomFamily::Minimal(Projection::diagonal(&mask)));
        }

        let f2 = AlgebraContext::factor(2).unwrap();
        assert_eq!(atoms::<f64>(&f2), vec![AtomFamily::Continuum { offset: 0, size: 2 }]);

        let mixed = AlgebraContext::new(vec![1, 2]).unwrap();
        assert_eq!(
            atoms::<f64>(&mixed),
            vec![
                AtomFamily::Minimal(Projection::diagonal(&[true, false, false])),
                AtomFamily::Continuum { offset: 1, size: 2 },
            ]
        );
    }

    #[test]
    fn construction_rejects_bad_input() {
        let m = CMatrix::<f64>::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(Projection::new(m.clone()), Err(Error::NotProjection(_))));
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        let half = CMatrix::<f64>::identity(2, 2) * c(0.5);
        assert!(matches!(Projection::new(half), Err(Error::NotProjection(_))));
        assert!(AlgebraContext::new(vec![]).is_err());
        assert!(AlgebraContext::new(vec![2, 0]).is_err());
    }

    #[test]
    fn context_membership() {
        let ctx = AlgebraContext::new(vec![1, 2]).unwrap();
        assert_eq!(ctx.dim(), 3);
        assert!(!ctx.is_abelian());
        let p = line(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(ctx.contains_matrix(p.matrix()));
        let q = line(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert!(!ctx.contains_matrix(q.matrix()));
    }

    #[test]
    fn boolean_lattice_enumeration() {
        let all = boolean_projections::<f64>(3);
        assert_eq!(all.len(), 8);
        assert!(all[0].is_zero());
        assert!(all[7].is_identity());
    }

    #[test]
    fn generic_over_f32() {
        let p = Projection::<f32>::diagonal(&[true, false, true]);
        let q = Projection::<f32>::diagonal(&[true, true, false]);
        let m = p.meet(&q).unwrap();
        assert!(m.approx_eq(&Projection::diagonal(&[true, false, false])));
        assert!(p.join(&q).unwrap().is_identity());
    }
}
