//! Antonymous functions `g_A` and observable functions `f_A` on quasipoints.
//!
//! For a left-continuous family `F^A` with breakpoints `λ_1 < ... < λ_m`,
//! `I - F_λ` is constant on each `(λ_{k-1}, λ_k]`, so
//! `g_A(𝔅) = sup{λ : I - F_λ ∈ 𝔅}` is the largest breakpoint `λ_k` with
//! `I - F_{λ_k} ∈ 𝔅`. Dually `f_A(𝔅) = inf{λ : E_λ ∈ 𝔅}` is the smallest
//! breakpoint with `E_{λ_k} ∈ 𝔅`. Both are read off the finite breakpoint
//! list; there is no numerical search.

use crate::error::{Error, Result};
use crate::projlat::{same_dim, HermitianOperator, Projection};
use crate::quasipoint::Quasipoint;
use crate::report::{Check, Report};
use crate::scalar::{tol, CMatrix, CVector, Real};
use crate::spectral::{LeftFamily, RightFamily};

fn require_operator<T: Real>(a: &HermitianOperator<T>, q: &Quasipoint<T>) -> Result<()> {
    same_dim(q.dim(), a.dim())?;
    q.context().require(a.matrix(), "operator")
}

/// `g_A(𝔅)` from a precomputed left-continuous family.
pub fn antonymous_from_family<T: Real>(f: &LeftFamily<T>, q: &Quasipoint<T>) -> Result<T> {
    same_dim(q.dim(), f.dim())?;
    let bps = f.breakpoints();
    for k in (1..bps.len()).rev() {
        // I - F_{λ_k} = I - C_{k-1}
        if q.contains(&f.cumulative()[k - 1].complement())? {
            return Ok(bps[k]);
        }
    }
    Ok(bps[0])
}

/// `f_A(𝔅)` from a precomputed right-continuous family.
pub fn observable_from_family<T: Real>(e: &RightFamily<T>, q: &Quasipoint<T>) -> Result<T> {
    same_dim(q.dim(), e.dim())?;
    let bps = e.breakpoints();
    for k in 0..bps.len() - 1 {
        if q.contains(&e.cumulative()[k])? {
            return Ok(bps[k]);
        }
    }
    Ok(bps[bps.len() - 1])
}

/// The antonymous function `g_A` evaluated at `q`.
pub fn antonymous<T: Real>(a: &HermitianOperator<T>, q: &Quasipoint<T>) -> Result<T> {
    require_operator(a, q)?;
    antonymous_from_family(&LeftFamily::of(a), q)
}

/// The observable function `f_A` evaluated at `q`.
pub fn observable<T: Real>(a: &HermitianOperator<T>, q: &Quasipoint<T>) -> Result<T> {
    require_operator(a, q)?;
    observable_from_family(&RightFamily::of(a), q)
}

/// One constant piece: `value` on `Q_lower(R) \ Q_upper(R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<T: Real> {
    pub value: T,
    pub lower: Projection<T>,
    pub upper: Projection<T>,
}

/// Piecewise-constant function on quasipoints. The pieces form a chain
/// `I = lower_1 ≥ upper_1 = lower_2 ≥ ... ≥ upper_last = 0`, so every
/// quasipoint falls into exactly one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<T: Real> {
    dim: usize,
    pieces: Vec<Piece<T>>,
}

impl<T: Real> StepFunction<T> {
    pub fn new(dim: usize, pieces: Vec<Piece<T>>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidStepFunction(m.into()));
        let (Some(first), Some(last)) = (pieces.first(), pieces.last()) else {
            return bad("no pieces");
        };
        if !first.lower.is_identity() {
            return bad("first piece does not start at the identity");
        }
        if !last.upper.is_zero() {
            return bad("last piece does not end at zero");
        }
        for p in &pieces {
            same_dim(dim, p.lower.dim())?;
            same_dim(dim, p.upper.dim())?;
            if !p.upper.leq(&p.lower)? {
                return bad("upper projection is not below lower projection");
            }
        }
        for w in pieces.windows(2) {
            if !w[1].lower.approx_eq(&w[0].upper) {
                return bad("pieces do not form a chain");
            }
        }
        Ok(Self { dim, pieces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    /// Step form of `g_A`: value `λ_k` on `Q_{I-F_{λ_k}} \ Q_{I-F_{λ_{k+1}}}`.
    pub fn antonymous_of(a: &HermitianOperator<T>) -> Self {
        let f = LeftFamily::of(a);
        let n = a.dim();
        let mut lower = Projection::identity(n);
        let pieces = f
            .breakpoints()
            .iter()
            .zip(f.cumulative())
            .map(|(&value, cum)| {
                let upper = cum.complement();
                let piece = Piece { value, lower: lower.clone(), upper: upper.clone() };
                lower = upper;
                piece
            })
            .collect();
        Self::new(n, pieces).expect("spectral family yields a partition")
    }

    /// Step form of `f_A`: value `λ_k` on `Q_{E_{λ_k}} \ Q_{E_{λ_{k-1}}}`,
    /// listed from the top breakpoint down.
    pub fn observable_of(a: &HermitianOperator<T>) -> Self {
        let e = RightFamily::of(a);
        let n = a.dim();
        let m = e.breakpoints().len();
        let pieces = (0..m)
            .rev()
            .map(|k| Piece {
                value: e.breakpoints()[k],
                lower: e.cumulative()[k].clone(),
                upper: if k == 0 { Projection::zero(n) } else { e.cumulative()[k - 1].clone() },
            })
            .collect();
        Self::new(n, pieces).expect("spectral family yields a partition")
    }

    /// Value on the unique piece whose class contains `q`.
    pub fn evaluate(&self, q: &Quasipoint<T>) -> Result<T> {
        same_dim(self.dim, q.dim())?;
        for p in &self.pieces {
            if q.contains(&p.lower)? && !q.contains(&p.upper)? {
                return Ok(p.value);
            }
        }
        Err(Error::PartitionViolation)
    }
}

/// Evaluates a step function at a quasipoint.
pub fn evaluate_step<T: Real>(sf: &StepFunction<T>, q: &Quasipoint<T>) -> Result<T> {
    sf.evaluate(q)
}

/// The rewriting `A = Σ_j a_j P_j = Σ_k b_k Q_k` with the zero coefficient
/// inserted after the last negative one, together with the resulting step
/// function `g_A = Σ_k b_k χ_{Q_{I-(Q_0+...+Q_{k-1})} \ Q_{I-(Q_0+...+Q_k)}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDecomposition<T: Real> {
    /// Number of negative coefficients (the greatest index with `a_k < 0`,
    /// counted from one, or zero).
    pub k0: usize,
    pub values: Vec<T>,
    pub parts: Vec<Projection<T>>,
    pub function: StepFunction<T>,
}

impl<T: Real> StepDecomposition<T> {
    /// `Σ_k b_k Q_k`.
    pub fn operator(&self) -> HermitianOperator<T> {
        HermitianOperator::linear_combination(&self.values, &self.parts).expect("orthogonal decomposition")
    }
}

/// Step form of the antonymous function of `Σ_j a_j P_j` for sorted nonzero
/// coefficients and pairwise orthogonal nonzero projections.
pub fn step_decomposition<T: Real>(coeffs: &[T], projs: &[Projection<T>]) -> Result<StepDecomposition<T>> {
    if coeffs.len() != projs.len() {
        return Err(Error::InvalidCoefficients(format!(
            "{} coefficients for {} projections",
            coeffs.len(),
            projs.len()
        )));
    }
    let n = projs.first().map(|p| p.dim()).ok_or(Error::EmptyDimension)?;
    if coeffs.iter().any(|a| *a == T::zero()) {
        return Err(Error::InvalidCoefficients("zero coefficient".into()));
    }
    if coeffs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidCoefficients("coefficients are not sorted".into()));
    }
    if let Some(i) = projs.iter().position(|p| p.is_zero()) {
        return Err(Error::InvalidCoefficients(format!("projection {i} is zero")));
    }
    let refs: Vec<&Projection<T>> = projs.iter().collect();
    let total = Projection::orthogonal_sum(n, &refs)?;

    let k0 = coeffs.iter().filter(|a| **a < T::zero()).count();
    let mut values = Vec::with_capacity(coeffs.len() + 1);
    let mut parts = Vec::with_capacity(coeffs.len() + 1);
    values.extend_from_slice(&coeffs[..k0]);
    parts.extend_from_slice(&projs[..k0]);
    values.push(T::zero());
    parts.push(total.complement());
    values.extend_from_slice(&coeffs[k0..]);
    parts.extend_from_slice(&projs[k0..]);

    let mut acc = CMatrix::zeros(n, n);
    let mut lower = Projection::identity(n);
    let mut pieces = Vec::with_capacity(values.len());
    for (k, (&value, q)) in values.iter().zip(&parts).enumerate() {
        acc += q.matrix();
        let upper = if k + 1 == values.len() {
            Projection::zero(n)
        } else {
            Projection::new(CMatrix::identity(n, n) - &acc)?
        };
        pieces.push(Piece { value, lower: lower.clone(), upper: upper.clone() });
        lower = upper;
    }
    let function = StepFunction::new(n, pieces)?;
    Ok(StepDecomposition { k0, values, parts, function })
}

/// The uniform approximation `A_ε = Σ_k a_k (F_{λ_k} - F_{λ_{k-1}})` used
/// to prove continuity of `g_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation<T: Real> {
    pub epsilon: T,
    /// Cells `[λ_{k-1}, λ_k)` of the grid that carry spectrum.
    pub cells: Vec<(T, T)>,
    /// Cell midpoints `a_k`, one per nonempty cell.
    pub samples: Vec<T>,
    pub operator: HermitianOperator<T>,
    pub step: StepFunction<T>,
    /// Exact `sup_𝔅 |g_{A_ε}(𝔅) - g_A(𝔅)|`: the largest distance from an
    /// eigenvalue to the sample point of its cell.
    pub sup_deviation: T,
}

/// Grid for the approximation: outer points `m - ε/2` and `M + ε/2`,
/// interior points at midpoints between consecutive distinct eigenvalues,
/// each interval then split evenly into cells shorter than `ε`. When the
/// spectrum is narrower than `ε` a single cell of width below `ε` is used.
fn approximation_grid<T: Real>(values: &[T], eps: T) -> Vec<T> {
    let two = T::lit(2.0);
    let lo = values[0];
    let hi = values[values.len() - 1];
    if hi - lo < eps {
        let margin = (eps - (hi - lo)) / T::lit(4.0);
        return vec![lo - margin, hi + margin];
    }
    let mut anchors = vec![lo - eps / two];
    anchors.extend(values.windows(2).map(|w| (w[0] + w[1]) / two));
    anchors.push(hi + eps / two);
    let mut grid = vec![anchors[0]];
    for w in anchors.windows(2) {
        let len = w[1] - w[0];
        let cells = (len / eps).floor().to_usize().unwrap_or(0) + 1;
        let width = len / T::from_usize(cells).unwrap();
        for j in 1..cells {
            grid.push(w[0] + width * T::from_usize(j).unwrap());
        }
        grid.push(w[1]);
    }
    grid
}

/// Builds `A_ε` and its step function; `|g_{A_ε} - g_A| < ε` everywhere.
pub fn approximate<T: Real>(a: &HermitianOperator<T>, eps: T) -> Result<Approximation<T>> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidEpsilon(eps.as_f64()));
    }
    let f = LeftFamily::of(a);
    let n = a.dim();
    let full_grid = approximation_grid(f.breakpoints(), eps);

    let mut cells = Vec::new();
    let mut samples = Vec::new();
    let mut parts = Vec::new();
    let mut pieces = Vec::new();
    let mut prev = f.evaluate(full_grid[0]);
    for w in full_grid.windows(2) {
        let next = f.evaluate(w[1]);
        if next.approx_eq(&prev) {
            continue;
        }
        let mid = (w[0] + w[1]) / T::lit(2.0);
        parts.push(next.difference(&prev)?);
        pieces.push(Piece { value: mid, lower: prev.complement(), upper: next.complement() });
        samples.push(mid);
        cells.push((w[0], w[1]));
        prev = next;
    }
    let operator = HermitianOperator::linear_combination(&samples, &parts)?;
    let step = StepFunction::new(n, pieces)?;

    let mut sup_deviation = T::zero();
    for &lambda in f.breakpoints() {
        let k = cells
            .iter()
            .position(|&(lo, hi)| lo <= lambda && lambda < hi)
            .expect("every eigenvalue lies in a nonempty cell");
        sup_deviation = sup_deviation.max((samples[k] - lambda).abs());
    }
    Ok(Approximation { epsilon: eps, cells, samples, operator, step, sup_deviation })
}

/// Checks the pointwise identities at `q`:
/// `g_{A+tI} = t + g_A`, `g_A = 1 - f_{I-A}`, `g_A = -f_{-A}` and
/// `g_A ≤ f_A`.
pub fn relation_suite<T: Real>(a: &HermitianOperator<T>, q: &Quasipoint<T>, t: T) -> Result<Report> {
    let eps = tol::<T>().identity;
    let g = antonymous(a, q)?;
    let f = observable(a, q)?;
    let g_shift = antonymous(&a.shifted(t), q)?;
    let f_one_minus = observable(&a.one_minus(), q)?;
    let f_neg = observable(&a.scaled(-T::one()), q)?;

    let mut report = Report::new();
    let close = |x: T, y: T| (x - y).abs() <= eps;
    report.push(Check::from_bool(
        "g_{A+tI} = t + g_A",
        close(g_shift, t + g),
        format!("g_(A+tI) = {}, t + g_A = {}", g_shift.as_f64(), (t + g).as_f64()),
    ));
    report.push(Check::from_bool(
        "g_A = 1 - f_{I-A}",
        close(g, T::one() - f_one_minus),
        format!("g_A = {}, 1 - f_(I-A) = {}", g.as_f64(), (T::one() - f_one_minus).as_f64()),
    ));
    report.push(Check::from_bool(
        "g_A = -f_{-A}",
        close(g, -f_neg),
        format!("g_A = {}, -f_(-A) = {}", g.as_f64(), (-f_neg).as_f64()),
    ));
    report.push(Check::from_bool(
        "g_A <= f_A",
        g <= f + eps,
        format!("g_A = {}, f_A = {}", g.as_f64(), f.as_f64()),
    ));
    Ok(report)
}

/// A concrete `(A_1, A_2, x)` with `g_{A_1+A_2}(𝔅_{Cx}) ≠ g_{A_1} + g_{A_2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonAdditivityWitness<T: Real> {
    pub first: HermitianOperator<T>,
    pub second: HermitianOperator<T>,
    pub vector: CVector<T>,
    pub g_sum: T,
    pub sum_of_g: T,
}

/// Searches a small family of projection pairs in `C^2` for a violation of
/// additivity of `A ↦ g_A`.
pub fn find_non_additivity_witness<T: Real>() -> Option<NonAdditivityWitness<T>> {
    let angles = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25];
    for &a1 in &angles {
        for &a2 in &angles {
            for &ax in &angles {
                let p1 = real_line::<T>(a1);
                let p2 = real_line::<T>(a2);
                let x = real_unit::<T>(ax);
                let first = HermitianOperator::new(p1.matrix().clone()).ok()?;
                let second = HermitianOperator::new(p2.matrix().clone()).ok()?;
                let q = Quasipoint::atomic(x.clone()).ok()?;
                let sum = first.add(&second).ok()?;
                let g_sum: T = antonymous(&sum, &q).ok()?;
                let sum_of_g: T = antonymous(&first, &q).ok()? + antonymous(&second, &q).ok()?;
                if (g_sum - sum_of_g).abs() > T::lit(1e-3) {
                    return Some(NonAdditivityWitness { first, second, vector: x, g_sum, sum_of_g });
                }
            }
        }
    }
    None
}

pub(crate) fn real_unit<T: Real>(angle: f64) -> CVector<T> {
    CVector::from_vec(vec![
        crate::scalar::c(T::lit(angle.cos())),
        crate::scalar::c(T::lit(angle.sin())),
    ])
}

pub(crate) fn real_line<T: Real>(angle: f64) -> Projection<T> {
    Projection::onto_line(&real_unit(angle)).expect("unit vector")
}
