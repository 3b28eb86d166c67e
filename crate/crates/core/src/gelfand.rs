//! Gelfand theory of the diagonal algebra `D_n`.
//!
//! Every finite-dimensional abelian von Neumann algebra is unitarily
//! equivalent to some `D_n`; this module requires that diagonal
//! presentation. Characters are the coordinate evaluations `χ_i(A) = A_ii`
//! and are represented by their index.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::functions::{antonymous, observable, real_line, real_unit, step_decomposition};
use crate::projlat::{same_dim, AlgebraContext, HermitianOperator, Projection};
use crate::quasipoint::{BooleanUltrafilter, Quasipoint};
use crate::report::{Check, Report};
use crate::scalar::{c, tol, CMatrix, Real};

/// Evaluation character `χ_i` of `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub usize);

impl Character {
    /// `χ_i(B) = B_ii` for any matrix of the algebra.
    pub fn apply<T: Real>(&self, ctx: &AlgebraContext, b: &CMatrix<T>) -> Result<Complex<T>> {
        require_abelian(ctx)?;
        ctx.require(b, "matrix")?;
        Ok(b[(self.0, self.0)])
    }
}

fn require_abelian(ctx: &AlgebraContext) -> Result<()> {
    if ctx.is_abelian() {
        Ok(())
    } else {
        Err(Error::NonAbelian)
    }
}

/// `Ω(D_n)`: the `n` coordinate characters.
pub fn gelfand_spectrum(ctx: &AlgebraContext) -> Result<Vec<Character>> {
    require_abelian(ctx)?;
    Ok((0..ctx.dim()).map(Character).collect())
}

/// `θ`: principal ultrafilter at atom `i` ↦ `χ_i`.
pub fn theta(q: &BooleanUltrafilter) -> Character {
    Character(q.principal_atom())
}

/// `θ^{-1}`: `χ_i` ↦ principal ultrafilter at atom `i`.
pub fn theta_inv(ctx: &AlgebraContext, c: Character) -> Result<BooleanUltrafilter> {
    BooleanUltrafilter::new(ctx.clone(), c.0)
}

/// `Â` as a function on `Ω(D_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GelfandTransform<T: Real> {
    values: Vec<T>,
}

impl<T: Real> GelfandTransform<T> {
    pub fn at(&self, c: Character) -> T {
        self.values[c.0]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}

/// `Γ(A)` for self-adjoint `A` in `D_n`.
pub fn gelfand_transform<T: Real>(a: &HermitianOperator<T>, ctx: &AlgebraContext) -> Result<GelfandTransform<T>> {
    require_abelian(ctx)?;
    ctx.require(a.matrix(), "operator")?;
    Ok(GelfandTransform { values: (0..a.dim()).map(|i| a.matrix()[(i, i)].re).collect() })
}

/// The self-adjoint preimage of a real function on the `n` ultrafilters
/// of `D_n`: the diagonal operator carrying its values.
pub fn antonymous_preimage<T: Real>(values: &[T]) -> Result<HermitianOperator<T>> {
    HermitianOperator::from_real_diagonal(values)
}

/// Verifies `g_A = f_A = Â ∘ θ` on every ultrafilter of `D_n`, the isometry
/// `|Â|_∞ = |A|`, and that the general partition form of the step function
/// agrees with the abelian form `Σ_k b_k χ_{Q_{Q_k}}`.
pub fn gelfand_coincidence_check<T: Real>(a: &HermitianOperator<T>, ctx: &AlgebraContext) -> Result<Report> {
    let hat = gelfand_transform(a, ctx)?;
    let eps = tol::<T>().identity;
    let n = ctx.dim();
    let mut report = Report::new();

    let mut coincidence = None;
    for c in gelfand_spectrum(ctx)? {
        let q: Quasipoint<T> = theta_inv(ctx, c)?.into();
        let g = antonymous(a, &q)?;
        let f = observable(a, &q)?;
        let h = hat.at(c);
        if coincidence.is_none() && ((g - f).abs() > eps || (g - h).abs() > eps) {
            coincidence = Some(format!("atom {}: g = {}, f = {}, Â = {}", c.0, g.as_f64(), f.as_f64(), h.as_f64()));
        }
    }
    report.push(match coincidence {
        None => Check::pass("g_A = f_A = Â∘θ on every ultrafilter"),
        Some(w) => Check::fail("g_A = f_A = Â∘θ on every ultrafilter", w),
    });

    let norm = a.norm();
    report.push(Check::from_bool(
        "|Â|_∞ = |A|",
        (hat.sup_norm() - norm).abs() <= eps * norm.max(T::one()),
        format!("sup |Â| = {}, |A| = {}", hat.sup_norm().as_f64(), norm.as_f64()),
    ));

    // A = Σ a_j P_j over the distinct nonzero diagonal values.
    let mut distinct: Vec<T> = Vec::new();
    for &v in hat.values() {
        if v.abs() > eps && !distinct.iter().any(|d| (*d - v).abs() <= eps) {
            distinct.push(v);
        }
    }
    distinct.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let projs: Vec<Projection<T>> = distinct
        .iter()
        .map(|&d| Projection::diagonal(&hat.values().iter().map(|v| (*v - d).abs() <= eps).collect::<Vec<_>>()))
        .collect();
    let step_form = if distinct.is_empty() {
        None
    } else {
        Some(step_decomposition(&distinct, &projs)?)
    };

    let mut step_mismatch = None;
    for uf in BooleanUltrafilter::all(n)? {
        let q: Quasipoint<T> = uf.clone().into();
        let expected = hat.at(theta(&uf));
        let Some(dec) = &step_form else {
            if expected.abs() > eps {
                step_mismatch = Some(format!("atom {}: zero operator expected", uf.principal_atom()));
            }
            continue;
        };
        let general = dec.function.evaluate(&q)?;
        let mut abelian = None;
        for (b, part) in dec.values.iter().zip(&dec.parts) {
            if !part.is_zero() && q.contains(part)? {
                abelian = Some(*b);
            }
        }
        let mut classes_agree = true;
        for (k, piece) in dec.function.pieces().iter().enumerate() {
            let in_general = q.contains(&piece.lower)? && !q.contains(&piece.upper)?;
            let in_abelian = !dec.parts[k].is_zero() && q.contains(&dec.parts[k])?;
            classes_agree &= in_general == in_abelian;
        }
        let ok = classes_agree
            && abelian.is_some_and(|v| (v - general).abs() <= eps)
            && (general - expected).abs() <= eps;
        if !ok && step_mismatch.is_none() {
            step_mismatch = Some(format!(
                "atom {}: general form {}, abelian form {:?}, Â = {}",
                uf.principal_atom(),
                general.as_f64(),
                abelian.map(|v| v.as_f64()),
                expected.as_f64()
            ));
        }
    }
    report.push(match step_mismatch {
        None => Check::pass("partition step form equals Σ b_k χ_{Q_{Q_k}} on every ultrafilter"),
        Some(w) => Check::fail("partition step form equals Σ b_k χ_{Q_{Q_k}} on every ultrafilter", w),
    });
    Ok(report)
}

/// `α'(B) = g_{A_1} + i g_{A_2}` with `A_1 = (B + B*)/2`,
/// `A_2 = (B - B*)/(2i)`.
pub fn complex_extension<T: Real>(b: &CMatrix<T>, q: &Quasipoint<T>) -> Result<Complex<T>> {
    let (a1, a2) = hermitian_parts(b)?;
    same_dim(q.dim(), a1.dim())?;
    q.context().require(b, "operator")?;
    Ok(Complex::new(antonymous(&a1, q)?, antonymous(&a2, q)?))
}

/// Unique decomposition `B = A_1 + i A_2` into self-adjoint parts.
pub fn hermitian_parts<T: Real>(b: &CMatrix<T>) -> Result<(HermitianOperator<T>, HermitianOperator<T>)> {
    let half = c(T::lit(0.5));
    let b_star = b.adjoint();
    let a1 = (b + &b_star) * half;
    let a2 = (b - &b_star) * Complex::new(T::zero(), -T::lit(0.5));
    Ok((HermitianOperator::new(a1)?, HermitianOperator::new(a2)?))
}

/// A concrete `(B_1, B_2, x)` in `C^2` with `α'(B_1 B_2) ≠ α'(B_1) α'(B_2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonMultiplicativityWitness<T: Real> {
    pub first: CMatrix<T>,
    pub second: CMatrix<T>,
    pub vector: crate::scalar::CVector<T>,
    pub of_product: Complex<T>,
    pub product_of: Complex<T>,
}

/// Searches projection pairs in `C^2` for a failure of multiplicativity of
/// `α'`.
pub fn find_non_multiplicativity_witness<T: Real>() -> Option<NonMultiplicativityWitness<T>> {
    let angles = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25];
    for &a1 in &angles {
        for &a2 in &angles {
            for &ax in &angles {
                let first = real_line::<T>(a1).matrix().clone();
                let second = real_line::<T>(a2).matrix().clone();
                let x = real_unit::<T>(ax);
                let q = Quasipoint::atomic(x.clone()).ok()?;
                let of_product = complex_extension(&(&first * &second), &q).ok()?;
                let product_of = complex_extension(&first, &q).ok()? * complex_extension(&second, &q).ok()?;
                if nalgebra::ComplexField::modulus(of_product - product_of) > T::lit(1e-3) {
                    return Some(NonMultiplicativityWitness { first, second, vector: x, of_product, product_of });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> AlgebraContext {
        AlgebraContext::diagonal(n).unwrap()
    }

    #[test]
    fn spectrum_of_diagonal_algebras() {
        assert_eq!(gelfand_spectrum(&d(1)).unwrap(), vec![Character(0)]);
        let chars = gelfand_spectrum(&d(3)).unwrap();
        assert_eq!(chars.len(), 3);
        let a = HermitianOperator::<f64>::from_real_diagonal(&[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(chars[1].apply(&d(3), a.matrix()).unwrap(), c(5.0));
        assert!(matches!(gelfand_spectrum(&AlgebraContext::factor(2).unwrap()), Err(Error::NonAbelian)));
    }

    #[test]
    fn characters_are_multiplicative_and_unital() {
        let ctx = d(3);
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), Complex::new(1.0, 1.0), c(-3.0)]));
        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5), Complex::new(0.0, 2.0), c(4.0)]));
        let one = CMatrix::<f64>::identity(3, 3);
        for ch in gelfand_spectrum(&ctx).unwrap() {
            let ab = ch.apply(&ctx, &(&a * &b)).unwrap();
            assert_eq!(ab, ch.apply(&ctx, &a).unwrap() * ch.apply(&ctx, &b).unwrap());
            assert_eq!(ch.apply(&ctx, &one).unwrap(), c(1.0));
        }
    }

    #[test]
    fn theta_round_trip_and_membership() {
        for n in 1..=8 {
            let ctx = d(n);
            for uf in BooleanUltrafilter::all(n).unwrap() {
                assert_eq!(theta_inv(&ctx, theta(&uf)).unwrap(), uf);
            }
            assert_eq!(gelfand_spectrum(&ctx).unwrap().len(), BooleanUltrafilter::all(n).unwrap().len());
        }
        let ctx = d(3);
        let p = Projection::<f64>::diagonal(&[false, true, false]);
        let owner = BooleanUltrafilter::all(3)
            .unwrap()
            .into_iter()
            .find(|uf| Quasipoint::<f64>::Ultrafilter(uf.clone()).contains(&p).unwrap())
            .unwrap();
        assert_eq!(theta(&owner), Character(1));
        let hp = HermitianOperator::new(p.matrix().clone()).unwrap();
        assert_eq!(gelfand_transform(&hp, &ctx).unwrap().at(theta(&owner)), 1.0);
    }

    #[test]
    fn transform_examples() {
        let a = HermitianOperator::<f64>::from_real_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let hat = gelfand_transform(&a, &d(3)).unwrap();
        assert_eq!(hat.values(), &[1.0, 2.0, 3.0]);
        assert!((hat.sup_norm() - a.norm()).abs() < 1e-12);
        let i = HermitianOperator::<f64>::scalar(4, 1.0).unwrap();
        assert!(gelfand_transform(&i, &d(4)).unwrap().values().iter().all(|&v| v == 1.0));
        let off = HermitianOperator::new(real_line::<f64>(0.5).matrix().clone()).unwrap();
        assert!(matches!(gelfand_transform(&off, &d(2)), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn coincidence_examples() {
        let a = HermitianOperator::<f64>::from_real_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let r = gelfand_coincidence_check(&a, &d(3)).unwrap();
        assert!(r.passed(), "{r:?}");
        let t = HermitianOperator::<f64>::scalar(3, -2.0).unwrap();
        assert!(gelfand_coincidence_check(&t, &d(3)).unwrap().passed());
        let z = HermitianOperator::<f64>::zero(2).unwrap();
        assert!(gelfand_coincidence_check(&z, &d(2)).unwrap().passed());
        let rep = HermitianOperator::<f64>::from_real_diagonal(&[2.0, -1.0, 2.0, 0.0, -1.0]).unwrap();
        assert!(gelfand_coincidence_check(&rep, &d(5)).unwrap().passed());
    }

    #[test]
    fn complex_extension_examples() {
        let hb = HermitianOperator::<f64>::from_real_diagonal(&[1.5, -2.0]).unwrap();
        let q = Quasipoint::atomic(real_unit::<f64>(0.3)).unwrap();
        let v = complex_extension(hb.matrix(), &q).unwrap();
        assert_eq!(v.im, 0.0);
        assert_eq!(v.re, antonymous(&hb, &q).unwrap());

        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex::new(1.0, 2.0), c(3.0)]));
        let uf: Quasipoint<f64> = BooleanUltrafilter::new(d(2), 0).unwrap().into();
        let v = complex_extension(&b, &uf).unwrap();
        assert!((v - Complex::new(1.0, 2.0)).norm() < 1e-12);
        assert_eq!(v, Character(0).apply(&d(2), &b).unwrap());

        let i = CMatrix::<f64>::identity(2, 2) * Complex::new(0.0, 1.0);
        let v = complex_extension(&i, &q).unwrap();
        assert!((v - Complex::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn non_multiplicativity_witness_exists() {
        let w = find_non_multiplicativity_witness::<f64>().expect("witness");
        assert!((w.of_product - w.product_of).norm() > 1e-3);
    }
}
