//! Restriction maps of the opposite spectral presheaf.
//!
//! A corner algebra `PRP` is represented in the ambient dimension: its
//! projections are the ambient projections below `P`, and its unit is `P`.

use crate::error::{Error, Result};
use crate::projlat::{same_dim, HermitianOperator, Projection};
use crate::quasipoint::check_unit;
use crate::report::{Check, Report};
use crate::scalar::{CVector, Real};
use crate::spectral::{opposite_of, LeftFamily, OppositeSpectralFamily};

/// `ρ_P(G)_λ = G_λ ∧ P`. `P` must lie below the unit of `G`. Meets are only
/// computed at the breakpoints; equal consecutive levels are merged.
pub fn restrict<T: Real>(g: &OppositeSpectralFamily<T>, p: &Projection<T>) -> Result<OppositeSpectralFamily<T>> {
    same_dim(g.dim(), p.dim())?;
    if !p.leq(g.unit())? {
        return Err(Error::NotBelow("restriction target is not below the unit of the family".into()));
    }
    let levels = g.levels().iter().map(|l| l.meet(p)).collect::<Result<Vec<_>>>()?;
    OppositeSpectralFamily::new(p.clone(), g.breakpoints().to_vec(), levels)
}

/// The jump parameter `d(Cx)` of `(I - F^A) ∧ P_{Cx}`, which equals
/// `P_{Cx}` for `λ ≤ d(Cx)` and `0` above.
pub fn restriction_d<T: Real>(a: &HermitianOperator<T>, x: &CVector<T>) -> Result<T> {
    same_dim(a.dim(), x.len())?;
    check_unit(x)?;
    let g = opposite_of(&LeftFamily::of(a));
    let line = Projection::onto_line(x)?;
    let r = restrict(&g, &line)?;
    match r.breakpoints() {
        [d] => Ok(*d),
        other => Err(Error::InvalidFamily(format!(
            "restriction to a line must have exactly one jump, found {}",
            other.len()
        ))),
    }
}

/// Checks functoriality for `P ≤ Q`: `ρ_P ∘ ρ_Q = ρ_P` and `ρ_unit = id`.
pub fn presheaf_laws_check<T: Real>(
    g: &OppositeSpectralFamily<T>,
    p: &Projection<T>,
    q: &Projection<T>,
) -> Result<Report> {
    if !p.leq(q)? {
        return Err(Error::NotBelow("P is not below Q".into()));
    }
    let mut report = Report::new();
    let via_q = restrict(&restrict(g, q)?, p)?;
    let direct = restrict(g, p)?;
    report.push(Check::from_bool(
        "restrict(restrict(G, Q), P) = restrict(G, P)",
        via_q.approx_eq(&direct),
        format!("breakpoints {:?} vs {:?}", as_f64(via_q.breakpoints()), as_f64(direct.breakpoints())),
    ));
    let unit = restrict(g, g.unit())?;
    report.push(Check::from_bool("restrict(G, unit) = G", unit.approx_eq(g), "restriction to the unit changed the family"));
    for (name, fam) in [("restrict(G, P)", &direct), ("restrict(G, Q)", &restrict(g, q)?)] {
        report.push(match fam.validate() {
            Ok(()) => Check::pass(format!("{name} is a bounded opposite spectral family")),
            Err(e) => Check::fail(format!("{name} is a bounded opposite spectral family"), e.to_string()),
        });
    }
    Ok(report)
}

fn as_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}
