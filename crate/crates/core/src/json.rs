//! JSON interchange formats.
//!
//! Output is canonical: object keys are sorted and floats use the shortest
//! representation that round-trips, so exporting and re-importing
//! reproduces bit-identical values.
//!
//! | object | shape |
//! |---|---|
//! | matrix | `{"dim": n, "re": [[..]], "im": [[..]]}` (row-major; `im` may be omitted on input) |
//! | spectral family | `{"continuity": "left"\|"right", "breakpoints": [..], "cum_projections": [matrix, ..]}` |
//! | opposite family | `{"unit": matrix, "breakpoints": [..], "levels": [matrix, ..]}` |
//! | step function | `{"dim": n, "pieces": [{"value", "lower", "upper"}, ..]}` |
//! | quasipoint | `{"kind": "atomic", "x_re": [..], "x_im": [..]}` or `{"kind": "ultrafilter", "atom": k}` |

use nalgebra::Complex;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::functions::{Approximation, Piece, StepFunction};
use crate::projlat::{AlgebraContext, HermitianOperator, Projection};
use crate::quasipoint::{BooleanUltrafilter, Quasipoint};
use crate::scalar::{CMatrix, CVector, Real};
use crate::spectral::{Continuity, OppositeSpectralFamily, SpectralFamily};

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// Pretty-printed canonical text with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializing a JSON value");
    s.push('\n');
    s
}

/// Parses JSON text, mapping syntax errors to [`Error::Malformed`].
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(e.to_string()))
}

fn num<T: Real>(x: T) -> Value {
    json!(x.as_f64())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing field \"{key}\"")))
}

fn read_num<T: Real>(v: &Value, what: &str) -> Result<T> {
    let x = v.as_f64().ok_or_else(|| malformed(format!("{what}: expected a number")))?;
    if !x.is_finite() {
        return Err(malformed(format!("{what}: non-finite number")));
    }
    Ok(T::lit(x))
}

fn read_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what}: expected an array")))
}

fn read_numbers<T: Real>(v: &Value, what: &str) -> Result<Vec<T>> {
    read_array(v, what)?.iter().map(|x| read_num(x, what)).collect()
}

fn read_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| malformed(format!("{what}: expected a non-negative integer")))
}

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> Value {
    let rows = |f: &dyn Fn(&Complex<T>) -> T| -> Value {
        Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| num(f(&m[(i, j)]))).collect())).collect())
    };
    json!({ "dim": m.nrows(), "re": rows(&|z| z.re), "im": rows(&|z| z.im) })
}

pub fn matrix_from_json<T: Real>(v: &Value) -> Result<CMatrix<T>> {
    let n = read_usize(field(v, "dim")?, "dim")?;
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let read_rows = |key: &str| -> Result<Vec<Vec<T>>> {
        let rows = read_array(field(v, key)?, key)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
        }
        rows.iter()
            .map(|r| {
                let r = read_numbers::<T>(r, key)?;
                if r.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: r.len() });
                }
                Ok(r)
            })
            .collect()
    };
    let re = read_rows("re")?;
    let im = if v.get("im").is_some() { read_rows("im")? } else { vec![vec![T::zero(); n]; n] };
    Ok(CMatrix::from_fn(n, n, |i, j| Complex::new(re[i][j], im[i][j])))
}

pub fn hermitian_to_json<T: Real>(a: &HermitianOperator<T>) -> Value {
    matrix_to_json(a.matrix())
}

pub fn hermitian_from_json<T: Real>(v: &Value) -> Result<HermitianOperator<T>> {
    HermitianOperator::new(matrix_from_json(v)?)
}

pub fn projection_to_json<T: Real>(p: &Projection<T>) -> Value {
    matrix_to_json(p.matrix())
}

pub fn projection_from_json<T: Real>(v: &Value) -> Result<Projection<T>> {
    Projection::new(matrix_from_json(v)?)
}

fn projections_from_json<T: Real>(v: &Value, key: &str) -> Result<Vec<Projection<T>>> {
    read_array(field(v, key)?, key)?.iter().map(projection_from_json).collect()
}

pub fn spectral_family_to_json<T: Real, C: Continuity>(f: &SpectralFamily<T, C>) -> Value {
    json!({
        "continuity": f.continuity().to_string(),
        "breakpoints": f.breakpoints().iter().map(|&b| num(b)).collect::<Vec<_>>(),
        "cum_projections": f.cumulative().iter().map(projection_to_json).collect::<Vec<_>>(),
    })
}

/// Imports a family of flavor `C`; a document carrying the other
/// continuity flag is rejected with [`Error::WrongContinuity`].
pub fn spectral_family_from_json<T: Real, C: Continuity>(v: &Value) -> Result<SpectralFamily<T, C>> {
    let found = field(v, "continuity")?.as_str().ok_or_else(|| malformed("continuity: expected a string"))?;
    let expected = C::KIND.to_string();
    if found != expected {
        return Err(Error::WrongContinuity { expected, found: found.to_string() });
    }
    SpectralFamily::from_parts(read_numbers(field(v, "breakpoints")?, "breakpoints")?, projections_from_json(v, "cum_projections")?)
}

pub fn opposite_to_json<T: Real>(g: &OppositeSpectralFamily<T>) -> Value {
    json!({
        "unit": projection_to_json(g.unit()),
        "breakpoints": g.breakpoints().iter().map(|&b| num(b)).collect::<Vec<_>>(),
        "levels": g.levels().iter().map(projection_to_json).collect::<Vec<_>>(),
    })
}

pub fn opposite_from_json<T: Real>(v: &Value) -> Result<OppositeSpectralFamily<T>> {
    OppositeSpectralFamily::new(
        projection_from_json(field(v, "unit")?)?,
        read_numbers(field(v, "breakpoints")?, "breakpoints")?,
        projections_from_json(v, "levels")?,
    )
}

pub fn step_function_to_json<T: Real>(s: &StepFunction<T>) -> Value {
    let pieces: Vec<Value> = s
        .pieces()
        .iter()
        .map(|p| json!({ "value": num(p.value), "lower": projection_to_json(&p.lower), "upper": projection_to_json(&p.upper) }))
        .collect();
    json!({ "dim": s.dim(), "pieces": pieces })
}

pub fn step_function_from_json<T: Real>(v: &Value) -> Result<StepFunction<T>> {
    let dim = read_usize(field(v, "dim")?, "dim")?;
    let pieces = read_array(field(v, "pieces")?, "pieces")?
        .iter()
        .map(|p| {
            Ok(Piece {
                value: read_num(field(p, "value")?, "value")?,
                lower: projection_from_json(field(p, "lower")?)?,
                upper: projection_from_json(field(p, "upper")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(dim, pieces)
}

pub fn quasipoint_to_json<T: Real>(q: &Quasipoint<T>) -> Value {
    match q {
        Quasipoint::Atomic(a) => {
            let x = a.vector();
            json!({
                "kind": "atomic",
                "x_re": x.iter().map(|z| num(z.re)).collect::<Vec<_>>(),
                "x_im": x.iter().map(|z| num(z.im)).collect::<Vec<_>>(),
            })
        }
        Quasipoint::Ultrafilter(u) => json!({ "kind": "ultrafilter", "atom": u.principal_atom() }),
    }
}

/// Imports a quasipoint. Atomic quasipoints live in the factor `M_n`; an
/// ultrafilter is bound to the diagonal algebra `D_dim`, where `dim` comes
/// from the operator it will be paired with.
pub fn quasipoint_from_json<T: Real>(v: &Value, dim: usize) -> Result<Quasipoint<T>> {
    match field(v, "kind")?.as_str() {
        Some("atomic") => {
            let re = read_numbers::<T>(field(v, "x_re")?, "x_re")?;
            let im = match v.get("x_im") {
                Some(im) => read_numbers::<T>(im, "x_im")?,
                None => vec![T::zero(); re.len()],
            };
            if re.len() != im.len() {
                return Err(malformed("x_re and x_im differ in length"));
            }
            if re.is_empty() {
                return Err(Error::EmptyDimension);
            }
            let x = CVector::from_iterator(re.len(), re.into_iter().zip(im).map(|(r, i)| Complex::new(r, i)));
            Quasipoint::atomic(x)
        }
        Some("ultrafilter") => {
            let atom = read_usize(field(v, "atom")?, "atom")?;
            Ok(Quasipoint::Ultrafilter(BooleanUltrafilter::new(AlgebraContext::diagonal(dim)?, atom)?))
        }
        Some(other) => Err(malformed(format!("unknown quasipoint kind \"{other}\""))),
        None => Err(malformed("kind: expected a string")),
    }
}

pub fn approximation_to_json<T: Real>(a: &Approximation<T>) -> Value {
    let mut m = Map::new();
    m.insert("epsilon".into(), num(a.epsilon));
    m.insert("cells".into(), Value::Array(a.cells.iter().map(|&(lo, hi)| json!([lo.as_f64(), hi.as_f64()])).collect()));
    m.insert("samples".into(), Value::Array(a.samples.iter().map(|&s| num(s)).collect()));
    m.insert("operator".into(), hermitian_to_json(&a.operator));
    m.insert("step".into(), step_function_to_json(&a.step));
    m.insert("sup_deviation".into(), num(a.sup_deviation));
    Value::Object(m)
}
