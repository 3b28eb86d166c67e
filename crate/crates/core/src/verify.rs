//! Randomized and exhaustive verification suites.
//!
//! Each suite draws its inputs from a ChaCha8 generator re-seeded with
//! `seed + trial` for every trial, so a report depends only on the
//! configuration and is reproducible byte for byte.

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{
    antonymous, approximate, evaluate_step, find_non_additivity_witness, observable, relation_suite, step_decomposition,
};
use crate::gelfand::{
    antonymous_preimage, complex_extension, find_non_multiplicativity_witness, gelfand_coincidence_check,
    gelfand_spectrum, theta, theta_inv, Character,
};
use crate::measurement::{
    born_sum, born_weights, density_trace, expectation, mixed_expectation, outcome_bounds, simulate_measurements,
    truncated_born_sum,
};
use crate::oracle::oracle_spectrum;
use crate::presheaf::{presheaf_laws_check, restrict, restriction_d};
use crate::projlat::{boolean_projections, AlgebraContext, HermitianOperator, Projection};
use crate::quasipoint::{filter_properties_check, BooleanUltrafilter, Dichotomy, Quasipoint};
use crate::random::{
    random_chain, random_diagonal, random_orthogonal_projections, random_projection_any_rank, random_test_operator,
    random_unit_vector, random_unitary,
};
use crate::report::{Check, Report};
use crate::scalar::{CMatrix, CVector};
use crate::spectral::{eigen_decomposition, from_opposite, opposite_of, phi, phi_inv, reconstruction_tolerance, operator_distance, LeftFamily, RightFamily};

/// Absolute tolerance for comparing function values against eigenvalues.
pub const VALUE_TOL: f64 = 1e-9;

/// Named verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Spectral,
    Quasipoint,
    Functions,
    Presheaf,
    Gelfand,
    Measurement,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Lattice,
        Suite::Spectral,
        Suite::Quasipoint,
        Suite::Functions,
        Suite::Presheaf,
        Suite::Gelfand,
        Suite::Measurement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Spectral => "spectral",
            Suite::Quasipoint => "quasipoint",
            Suite::Functions => "functions",
            Suite::Presheaf => "presheaf",
            Suite::Gelfand => "gelfand",
            Suite::Measurement => "measurement",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite \"{s}\"")))
    }
}

/// Suite parameters. Random trials draw dimensions from `2..=max_dim`;
/// the exhaustive abelian checks cover `D_n` for `n = 1..=max_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub max_dim: usize,
    pub trials: usize,
    pub seed: u64,
}

impl VerifyConfig {
    fn validate(&self) -> Result<()> {
        if self.max_dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if self.trials == 0 {
            return Err(Error::InvalidTrials);
        }
        Ok(())
    }

    fn rng(&self, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(trial as u64))
    }

    fn dim(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(self.max_dim.min(2)..=self.max_dim)
    }
}

/// Report of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs `suite` (every suite for [`Suite::All`]).
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    cfg.validate()?;
    let suites: Vec<Suite> = if suite == Suite::All { Suite::INDIVIDUAL.to_vec() } else { vec![suite] };
    suites
        .into_iter()
        .map(|s| {
            let report = match s {
                Suite::Lattice => lattice(cfg),
                Suite::Spectral => spectral(cfg),
                Suite::Quasipoint => quasipoint(cfg),
                Suite::Functions => functions(cfg),
                Suite::Presheaf => presheaf(cfg),
                Suite::Gelfand => gelfand(cfg),
                Suite::Measurement => measurement(cfg),
                Suite::All => unreachable!(),
            }?;
            Ok(SuiteReport { suite: s, config: *cfg, passed: report.passed(), checks: report.checks })
        })
        .collect()
}

/// Aggregates per-trial outcomes into one check per statement.
#[derive(Default)]
struct Tally {
    entries: Vec<(String, usize, usize, Option<String>)>,
}

impl Tally {
    fn record(&mut self, statement: &str, ok: bool, witness: impl FnOnce() -> String) {
        let idx = match self.entries.iter().position(|e| e.0 == statement) {
            Some(i) => i,
            None => {
                self.entries.push((statement.to_string(), 0, 0, None));
                self.entries.len() - 1
            }
        };
        let e = &mut self.entries[idx];
        e.1 += 1;
        if !ok {
            e.2 += 1;
            if e.3.is_none() {
                e.3 = Some(witness());
            }
        }
    }

    fn absorb(&mut self, report: Report, context: &str) {
        for c in report.checks {
            let w = c.witness.clone().unwrap_or_default();
            self.record(&c.statement, c.passed, || format!("{context}: {w}"));
        }
    }

    fn into_report(self) -> Report {
        let mut r = Report::new();
        for (statement, cases, failed, witness) in self.entries {
            r.push(if failed == 0 {
                Check::pass(statement).with_witness(format!("{cases} cases"))
            } else {
                Check::fail(statement, format!("{failed} of {cases} cases failed; first: {}", witness.unwrap_or_default()))
            });
        }
        r
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= VALUE_TOL
}

fn ctx_label(trial: usize, n: usize) -> String {
    format!("trial {trial}, dim {n}")
}

fn columns_projection(u: &CMatrix<f64>, cols: &[usize]) -> Result<Projection<f64>> {
    let n = u.nrows();
    Projection::from_orthonormal_columns(n, &CMatrix::from_fn(n, cols.len(), |i, j| u[(i, cols[j])]))
}

fn lattice(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);

        let (p, q, r) = random_chain::<f64, _>(&mut rng, n);
        let x = random_projection_any_rank::<f64, _>(&mut rng, n);
        t.record("leq is reflexive", x.leq(&x)?, || at.clone());
        t.record("leq is transitive", p.leq(&q)? && q.leq(&r)? && p.leq(&r)?, || at.clone());
        let y = random_projection_any_rank::<f64, _>(&mut rng, n);
        let anti = !(x.leq(&y)? && y.leq(&x)?) || x.approx_eq(&y);
        t.record("leq is antisymmetric", anti, || at.clone());

        // P = span(S ∪ A), Q = span(S ∪ B) with disjoint coordinate sets in
        // a random frame, so that P ∧ Q = span(S).
        let u = random_unitary::<f64, _>(&mut rng, n);
        let mut cols: Vec<usize> = (0..n).collect();
        cols.shuffle(&mut rng);
        let s = rng.random_range(0..=n);
        let a = rng.random_range(0..=n - s);
        let b = rng.random_range(0..=n - s - a);
        let common = &cols[..s];
        let pa: Vec<usize> = cols[..s + a].to_vec();
        let qb: Vec<usize> = common.iter().chain(&cols[s + a..s + a + b]).copied().collect();
        let p = columns_projection(&u, &pa)?;
        let q = columns_projection(&u, &qb)?;
        let sub = columns_projection(&u, &common[..rng.random_range(0..=s)])?;
        let m = p.meet(&q)?;
        t.record("P ∧ Q ≤ P and P ∧ Q ≤ Q", m.leq(&p)? && m.leq(&q)?, || at.clone());
        t.record("R ≤ P and R ≤ Q imply R ≤ P ∧ Q", sub.leq(&m)?, || at.clone());
        t.record("P ∧ Q is the common subspace", m.approx_eq(&columns_projection(&u, common)?), || at.clone());
        let j = p.join(&q)?;
        t.record("P ≤ P ∨ Q and Q ≤ P ∨ Q", p.leq(&j)? && q.leq(&j)?, || at.clone());

        let g1 = random_projection_any_rank::<f64, _>(&mut rng, n);
        let g2 = random_projection_any_rank::<f64, _>(&mut rng, n);
        let gm = g1.meet(&g2)?;
        let gj = g1.join(&g2)?;
        t.record(
            "meet and join bounds on generic pairs",
            gm.leq(&g1)? && gm.leq(&g2)? && g1.leq(&gj)? && g2.leq(&gj)?,
            || at.clone(),
        );
        t.record(
            "P ∧ P^⊥ = 0, P ∨ P^⊥ = I, P^⊥⊥ = P",
            g1.meet(&g1.complement())?.is_zero()
                && g1.join(&g1.complement())?.is_identity()
                && g1.complement().complement().approx_eq(&g1),
            || at.clone(),
        );

        let mask = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>();
        let d1 = Projection::<f64>::diagonal(&mask(&mut rng));
        let d2 = Projection::<f64>::diagonal(&mask(&mut rng));
        let d3 = Projection::<f64>::diagonal(&mask(&mut rng));
        let lhs = d1.meet(&d2)?.complement();
        let rhs = d1.complement().join(&d2.complement())?;
        t.record("De Morgan on D_n: (P ∧ Q)^⊥ = P^⊥ ∨ Q^⊥", lhs.approx_eq(&rhs), || at.clone());
        let left = d1.meet(&d2.join(&d3)?)?;
        let right = d1.meet(&d2)?.join(&d1.meet(&d3)?)?;
        t.record("distributivity on D_n: P ∧ (Q ∨ R) = (P ∧ Q) ∨ (P ∧ R)", left.approx_eq(&right), || at.clone());
    }
    let mut report = t.into_report();
    report.push(distributivity_counterexample()?);
    Ok(report)
}

/// Three lines in `C^2` violating distributivity.
fn distributivity_counterexample() -> Result<Check> {
    let s = 0.5f64.sqrt();
    let line = |a: f64, b: f64| Projection::onto_line(&CVector::from_vec(vec![Complex::new(a, 0.0), Complex::new(b, 0.0)]));
    let (p, q, r) = (line(1.0, 0.0)?, line(0.0, 1.0)?, line(s, s)?);
    let left = r.meet(&p.join(&q)?)?;
    let right = r.meet(&p)?.join(&r.meet(&q)?)?;
    let statement = "distributivity fails in M_2";
    Ok(if left.approx_eq(&right) {
        Check::fail(statement, "no counterexample among the three lines")
    } else {
        Check::pass(statement).with_witness(format!(
            "P = span(e1), Q = span(e2), R = span(e1+e2): R ∧ (P ∨ Q) has rank {}, (R ∧ P) ∨ (R ∧ Q) has rank {}",
            left.rank(),
            right.rank()
        ))
    })
}

fn spectral(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let f = LeftFamily::of(&a);
        let e = RightFamily::of(&a);
        let b = f.breakpoints().to_vec();
        let lo = b[0] - 1.0;
        let hi = b[b.len() - 1] + 1.0;

        let l1 = rng.random_range(lo..hi);
        let l2 = rng.random_range(lo..hi);
        let (l1, l2) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        t.record(
            "λ < μ implies F_λ ≤ F_μ and E_λ ≤ E_μ",
            f.evaluate(l1).leq(&f.evaluate(l2))? && e.evaluate(l1).leq(&e.evaluate(l2))?,
            || format!("{at}, λ = {l1}, μ = {l2}"),
        );

        let oracle = oracle_spectrum(&a, &random_unit_vector(&mut rng, n)).values();
        t.record(
            "breakpoints = sp A (independent eigensolver)",
            oracle.len() == b.len() && oracle.iter().zip(&b).all(|(x, y)| close(*x, *y)),
            || format!("{at}, implementation {b:?}, oracle {oracle:?}"),
        );

        for k in 0..b.len() {
            let mut below = Projection::zero(n);
            below = below.join(&f.evaluate(lo))?;
            for w in b[..k + 1].windows(2) {
                below = below.join(&f.evaluate((w[0] + w[1]) / 2.0))?;
            }
            t.record("⋁_{μ<λ} F_μ = F_λ at every breakpoint", below.approx_eq(&f.evaluate(b[k])), || {
                format!("{at}, breakpoint {}", b[k])
            });

            let gap = if k + 1 < b.len() { b[k + 1] - b[k] } else { 1.0 };
            let mut above = Projection::identity(n);
            for frac in [0.5, 0.25, 0.125] {
                above = above.meet(&e.evaluate(b[k] + gap * frac))?;
            }
            t.record("⋀_{μ>λ} E_μ = E_λ at every breakpoint", above.approx_eq(&e.evaluate(b[k])), || {
                format!("{at}, breakpoint {}", b[k])
            });
        }

        let g = opposite_of(&f);
        t.record("opposite family validates", g.validate().is_ok(), || at.clone());
        for (k, &bk) in g.breakpoints().iter().enumerate() {
            let mut m = g.evaluate(bk - 1.0);
            let prev = if k == 0 { bk - 1.0 } else { g.breakpoints()[k - 1] };
            for frac in [0.5, 0.75, 0.875] {
                m = m.meet(&g.evaluate(prev + (bk - prev) * frac))?;
            }
            t.record("⋀_{μ<λ} G_μ = G_λ at every breakpoint", m.approx_eq(&g.evaluate(bk)), || {
                format!("{at}, breakpoint {bk}")
            });
        }

        t.record("phi_inv(phi(E)) = E", phi_inv(phi(e.clone())) == e, || at.clone());
        t.record("phi(phi_inv(F)) = F", phi(phi_inv(f.clone())) == f, || at.clone());
        t.record("from_opposite(opposite_of(F)) = F", from_opposite(&g)?.approx_eq(&f), || at.clone());
        let dist = operator_distance(&f.reconstruct(), &a)?;
        t.record("Σ λ_k (F_{λ_k+} - F_{λ_k}) reconstructs A", dist <= reconstruction_tolerance(&a), || {
            format!("{at}, distance {dist:e}")
        });
    }
    Ok(t.into_report())
}

fn quasipoint(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);
        let x = random_unit_vector::<f64, _>(&mut rng, n);
        let q = Quasipoint::atomic(x.clone())?;
        let line = Projection::onto_line(&x)?;
        let p = line.join(&random_projection_any_rank(&mut rng, n))?;
        let p2 = line.join(&random_projection_any_rank(&mut rng, n))?;
        let bigger = p.join(&random_projection_any_rank(&mut rng, n))?;
        let other = random_projection_any_rank::<f64, _>(&mut rng, n);
        let sample = vec![line.clone(), p.clone(), p2, bigger, other.clone(), other.complement(), p.complement()];
        t.absorb(filter_properties_check(&q, &sample), &at);
        let d = q.dichotomy(&other)?;
        t.record("never both P ∈ 𝔅 and I - P ∈ 𝔅", d != Dichotomy::Both, || at.clone());
        t.record("𝔅_{Cx} contains P_{Cx}", q.contains(&line)?, || at.clone());
    }

    for n in 1..=cfg.max_dim.min(6) {
        let projections = boolean_projections::<f64>(n);
        for uf in BooleanUltrafilter::all(n)? {
            let q: Quasipoint<f64> = uf.into();
            let mut ok = true;
            for p in &projections {
                ok &= matches!(q.dichotomy(p)?, Dichotomy::Positive | Dichotomy::Negative);
            }
            t.record("ultrafilters of D_n contain exactly one of P, I - P (all 2^n P)", ok, || format!("dim {n}"));
        }
    }
    Ok(t.into_report())
}

/// Unit vector inside the span of a random nonempty set of eigenspaces.
fn supported_vector(rng: &mut ChaCha8Rng, a: &HermitianOperator<f64>) -> CVector<f64> {
    let eig = eigen_decomposition(a);
    let n = a.dim();
    loop {
        let mut x = CVector::zeros(n);
        for p in &eig.projections {
            if rng.random_bool(0.5) {
                x += p.apply(&random_unit_vector(rng, n));
            }
        }
        let norm = x.norm();
        if norm > 1e-3 {
            return x.unscale(norm);
        }
    }
}

/// Generic random vector half of the time, eigenspace-supported otherwise.
fn test_vector(rng: &mut ChaCha8Rng, a: &HermitianOperator<f64>) -> CVector<f64> {
    if rng.random_bool(0.5) {
        random_unit_vector(rng, a.dim())
    } else {
        supported_vector(rng, a)
    }
}

fn functions(cfg: &VerifyConfig) -> Result<Report> {
    let member = crate::scalar::tol::<f64>().member;
    let mut t = Tally::default();
    let mut negative = (0usize, 0usize);
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let x = test_vector(&mut rng, &a);
        let q = Quasipoint::atomic(x.clone())?;
        let g = antonymous(&a, &q)?;
        let f = observable(&a, &q)?;

        let oracle = oracle_spectrum(&a, &x);
        let (omin, omax) = (oracle.min_support(member), oracle.max_support(member));
        t.record(
            "g_A(𝔅_{Cx}) = min and f_A(𝔅_{Cx}) = max of the support (independent eigensolver)",
            omin.is_some_and(|m| close(m, g)) && omax.is_some_and(|m| close(m, f)),
            || format!("{at}, g = {g}, f = {f}, oracle = ({omin:?}, {omax:?})"),
        );
        let sp = oracle.values();
        t.record("im g_A ⊆ sp A and im f_A ⊆ sp A", sp.iter().any(|&l| close(l, g)) && sp.iter().any(|&l| close(l, f)), || {
            format!("{at}, g = {g}, f = {f}, sp A = {sp:?}")
        });
        let eig = eigen_decomposition(&a);
        for (lambda, p) in eig.values.iter().zip(&eig.projections) {
            let col = (0..n).max_by(|&i, &j| p.matrix().column(i).norm().total_cmp(&p.matrix().column(j).norm())).unwrap();
            let v: CVector<f64> = p.matrix().column(col).into_owned();
            let qe = Quasipoint::atomic(v.unscale(v.norm()))?;
            let (ge, fe) = (antonymous(&a, &qe)?, observable(&a, &qe)?);
            t.record("every eigenvalue is attained: g_A = f_A = λ on its eigenvectors", close(ge, *lambda) && close(fe, *lambda), || {
                format!("{at}, λ = {lambda}, g = {ge}, f = {fe}")
            });
        }

        let shift = rng.random_range(-3.0..3.0);
        t.absorb(relation_suite(&a, &q, shift)?, &at);
        let g_neg = antonymous(&a.scaled(-1.0), &q)?;
        t.record("f_A = -g_{-A}", close(f, -g_neg), || format!("{at}, f = {f}, -g_(-A) = {}", -g_neg));
        let s = rng.random_range(0.1..5.0);
        let g_scaled = antonymous(&a.scaled(s), &q)?;
        t.record("g_{tA} = t g_A for t > 0", close(g_scaled, s * g), || format!("{at}, t = {s}, g_(tA) = {g_scaled}, t g_A = {}", s * g));
        let s_neg = -rng.random_range(0.1..5.0);
        let g_sneg = antonymous(&a.scaled(s_neg), &q)?;
        t.record("g_{tA} = t f_A for t < 0", close(g_sneg, s_neg * f), || format!("{at}, t = {s_neg}"));
        negative.0 += 1;
        if close(g_sneg, s_neg * g) {
            negative.1 += 1;
        }

        // Step decomposition of a random combination of orthogonal projections.
        let k = rng.random_range(1..=n);
        let cover = rng.random_bool(0.5);
        let projs = random_orthogonal_projections::<f64, _>(&mut rng, n, k, cover);
        let mut coeffs: Vec<f64> = Vec::new();
        while coeffs.len() < k {
            let c = (rng.random_range(-40..=40) as f64) / 8.0;
            if c != 0.0 && !coeffs.contains(&c) {
                coeffs.push(c);
            }
        }
        let mut paired: Vec<(f64, Projection<f64>)> = coeffs.into_iter().zip(projs).collect();
        paired.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (coeffs, projs): (Vec<f64>, Vec<Projection<f64>>) = paired.into_iter().unzip();
        let dec = step_decomposition(&coeffs, &projs)?;
        let op = dec.operator();
        let nonzero_parts: Vec<&Projection<f64>> = dec.parts.iter().filter(|p| !p.is_zero()).collect();
        for _ in 0..4 {
            let mut y = CVector::zeros(n);
            for p in &nonzero_parts {
                if rng.random_bool(0.5) {
                    y += p.apply(&random_unit_vector(&mut rng, n));
                }
            }
            if y.norm() < 1e-3 {
                y = random_unit_vector(&mut rng, n);
            }
            let qy = Quasipoint::atomic(y.unscale(y.norm()))?;
            let stepped = evaluate_step(&dec.function, &qy)?;
            let direct = antonymous(&op, &qy)?;
            t.record("step decomposition Σ b_k χ equals g_A", close(stepped, direct), || {
                format!("{at}, coefficients {coeffs:?}, step value {stepped}, g_A = {direct}")
            });
        }

        for eps in [0.5, 0.1, 0.01] {
            let approx = approximate(&a, eps)?;
            let mut ok = approx.sup_deviation < eps;
            for _ in 0..5 {
                let qy = Quasipoint::atomic(test_vector(&mut rng, &a))?;
                let ga = antonymous(&a, &qy)?;
                ok &= (evaluate_step(&approx.step, &qy)? - ga).abs() < eps;
                ok &= (antonymous(&approx.operator, &qy)? - ga).abs() < eps;
            }
            t.record("|g_{A_ε} - g_A| < ε for ε ∈ {0.5, 0.1, 0.01}", ok, || {
                format!("{at}, ε = {eps}, sup deviation {}", approx.sup_deviation)
            });
        }
    }
    let mut report = t.into_report();
    report.push(Check::pass("g_{tA} = t g_A for t < 0 (recorded, not asserted)").with_witness(format!(
        "held in {} of {} trials; it fails whenever g_A ≠ f_A",
        negative.1, negative.0
    )));
    report.push(match find_non_additivity_witness::<f64>() {
        Some(w) => Check::pass("g_{A_1 + A_2} ≠ g_{A_1} + g_{A_2} for some pair in M_2").with_witness(format!(
            "A_1 = {}, A_2 = {}, x = {}: g_(A1+A2) = {}, g_A1 + g_A2 = {}",
            fmt_matrix(w.first.matrix()),
            fmt_matrix(w.second.matrix()),
            fmt_vector(&w.vector),
            w.g_sum,
            w.sum_of_g
        )),
        None => Check::fail("g_{A_1 + A_2} ≠ g_{A_1} + g_{A_2} for some pair in M_2", "no witness found"),
    });
    Ok(report)
}

fn presheaf(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let g = opposite_of(&LeftFamily::of(&a));
        let (p, q, r) = random_chain::<f64, _>(&mut rng, n);
        let gr = restrict(&g, &r)?;
        t.absorb(presheaf_laws_check(&gr, &p, &q)?, &at);
        t.absorb(presheaf_laws_check(&g, &q, &r)?, &at);
        let direct = restrict(&g, &p)?;
        let via = restrict(&restrict(&gr, &q)?, &p)?;
        t.record("ρ_P^Q ∘ ρ_Q^R ∘ ρ_R = ρ_P", via.approx_eq(&direct), || at.clone());
        t.record("restriction of G^A validates", gr.validate().is_ok() && direct.validate().is_ok(), || at.clone());

        let x = test_vector(&mut rng, &a);
        let d = restriction_d(&a, &x)?;
        let ga = antonymous(&a, &Quasipoint::atomic(x)?)?;
        t.record("d(Cx) = g_A(𝔅_{Cx})", d == ga, || format!("{at}, d = {d}, g_A = {ga}"));
    }
    Ok(t.into_report())
}

fn gelfand(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for n in 1..=cfg.max_dim {
        let ctx = AlgebraContext::diagonal(n)?;
        let chars = gelfand_spectrum(&ctx)?;
        let ufs = BooleanUltrafilter::all(n)?;
        t.record("|Q(D_n)| = |Ω(D_n)| = n", chars.len() == n && ufs.len() == n, || format!("dim {n}"));
        let projections = boolean_projections::<f64>(n);
        for uf in &ufs {
            t.record("θ^{-1}(θ(q)) = q", theta_inv(&ctx, theta(uf))? == *uf, || format!("dim {n}"));
            let q: Quasipoint<f64> = uf.clone().into();
            let mut preserved = true;
            let mut lemma = true;
            for p in &projections {
                let contains = q.contains(p)?;
                preserved &= contains == (theta(uf).apply(&ctx, p.matrix())?.re == 1.0);
                lemma &= contains != q.contains(&p.complement())?;
            }
            t.record("P ∈ q iff θ(q)(P) = 1 (all 2^n P)", preserved, || format!("dim {n}, atom {}", uf.principal_atom()));
            t.record("either P ∈ 𝔅 or I - P ∈ 𝔅 (all 2^n P)", lemma, || format!("dim {n}, atom {}", uf.principal_atom()));
        }
        for c in &chars {
            t.record("θ(θ^{-1}(χ)) = χ", theta(&theta_inv(&ctx, *c)?) == *c, || format!("dim {n}"));
        }

        for trial in 0..cfg.trials {
            let mut rng = cfg.rng(trial);
            let at = format!("trial {trial}, dim {n}");
            let repeats = rng.random_bool(0.5);
            let a = random_diagonal::<f64, _>(&mut rng, n, repeats);
            t.absorb(gelfand_coincidence_check(&a, &ctx)?, &at);

            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let pre = antonymous_preimage(&values)?;
            let mut ok = true;
            for uf in &ufs {
                ok &= close(antonymous(&pre, &uf.clone().into())?, values[uf.principal_atom()]);
            }
            t.record("every function on Q(D_n) is some g_A", ok, || format!("{at}, values {values:?}"));

            let b = CMatrix::from_diagonal(&CVector::from_fn(n, |_, _| {
                Complex::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
            }));
            let mut ok = true;
            for uf in &ufs {
                let v = complex_extension(&b, &uf.clone().into())?;
                let expected = Character(uf.principal_atom()).apply(&ctx, &b)?;
                ok &= close(v.re, expected.re) && close(v.im, expected.im);
            }
            t.record("α'(B) = B̂ ∘ θ on D_n", ok, || at.clone());
        }
    }
    let mut report = t.into_report();
    report.push(match find_non_multiplicativity_witness::<f64>() {
        Some(w) => Check::pass("α' is not multiplicative on M_2").with_witness(format!(
            "B_1 = {}, B_2 = {}, x = {}: α'(B1 B2) = {}, α'(B1) α'(B2) = {}",
            fmt_matrix(&w.first),
            fmt_matrix(&w.second),
            fmt_vector(&w.vector),
            w.of_product,
            w.product_of
        )),
        None => Check::fail("α' is not multiplicative on M_2", "no witness found"),
    });
    Ok(report)
}

/// Number of draws that makes missing an endpoint of weight `w` a
/// probability below `e^{-50}`, and at least `10^4`.
pub fn draws_for(weight: f64) -> usize {
    ((50.0 / weight).ceil() as usize).max(10_000)
}

fn measurement(cfg: &VerifyConfig) -> Result<Report> {
    let mut t = Tally::default();
    for trial in 0..cfg.trials {
        let mut rng = cfg.rng(trial);
        let n = cfg.dim(&mut rng);
        let at = ctx_label(trial, n);
        let raw = random_test_operator::<f64, _>(&mut rng, n);
        let a = if raw.norm() > 0.0 { raw.scaled(1.0 / raw.norm()) } else { raw };
        let x = test_vector(&mut rng, &a);
        let (g, f) = outcome_bounds(&a, &x)?;
        let ex = expectation(&a, &x)?;
        t.record("g_A ≤ ⟨Ax, x⟩ ≤ f_A", g <= ex + VALUE_TOL && ex <= f + VALUE_TOL, || format!("{at}, g = {g}, ⟨Ax,x⟩ = {ex}, f = {f}"));
        let bs = born_sum(&a, &x)?;
        t.record("⟨Ax, x⟩ = Σ λ_i |P_i x|^2", (ex - bs).abs() <= 1e-10, || format!("{at}, {ex} vs {bs}"));
        t.record("Born sum truncated at f_A is exact", truncated_born_sum(&a, &x)? == bs, || at.clone());

        let weights = born_weights(&a, &x)?;
        let w_g = weights.iter().find(|(v, _)| *v == g).map_or(0.0, |e| e.1);
        let w_f = weights.iter().find(|(v, _)| *v == f).map_or(0.0, |e| e.1);
        let draws = draws_for(w_g.min(w_f).max(1e-3));
        let stats = simulate_measurements(&a, &x, draws, cfg.seed.wrapping_add(trial as u64))?;
        t.record("every sample lies in [g_A, f_A]", stats.min >= g && stats.max <= f, || at.to_string());
        t.record(
            "zero-weight eigenvalues are never sampled",
            weights.iter().zip(&stats.counts).all(|((_, w), (_, k))| *w > 0.0 || *k == 0),
            || at.clone(),
        );
        if w_g >= 1e-3 && w_f >= 1e-3 {
            t.record("sampling attains g_A and f_A", stats.min == g && stats.max == f, || {
                format!("{at}, weights ({w_g}, {w_f}), observed [{}, {}]", stats.min, stats.max)
            });
        }
        t.record("sample mean within 0.05 of ⟨Ax, x⟩", (stats.mean - ex).abs() < 0.05, || {
            format!("{at}, mean {}, expectation {ex}", stats.mean)
        });

        let k = rng.random_range(1..=n);
        let u = random_unitary::<f64, _>(&mut rng, n);
        let vectors: Vec<CVector<f64>> = (0..k).map(|j| u.column(j).into_owned()).collect();
        let raw_w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw_w.iter().sum();
        let mut w: Vec<f64> = raw_w.iter().map(|v| v / total).collect();
        let rest: f64 = w[1..].iter().sum();
        w[0] = 1.0 - rest;
        let mixed = mixed_expectation(&a, &w, &vectors)?;
        let direct = density_trace(&a, &w, &vectors)?;
        t.record("Σ a_j ⟨A x_j, x_j⟩ = tr(ρA)", (mixed - direct).abs() <= 1e-10, || format!("{at}, {mixed} vs {direct}"));
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &vectors {
            let (gj, fj) = outcome_bounds(&a, v)?;
            lo = lo.min(gj);
            hi = hi.max(fj);
        }
        t.record("min_j g_j ≤ tr(ρA) ≤ max_j f_j", lo <= mixed + VALUE_TOL && mixed <= hi + VALUE_TOL, || at.clone());
    }
    Ok(t.into_report())
}

fn fmt_matrix(m: &CMatrix<f64>) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let cells: Vec<String> = (0..m.ncols()).map(|j| fmt_complex(m[(i, j)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_vector(v: &CVector<f64>) -> String {
    format!("({})", v.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(", "))
}

fn fmt_complex(z: Complex<f64>) -> String {
    let r = |x: f64| if x.abs() < 1e-12 { 0.0 } else { (x * 1e6).round() / 1e6 };
    let (re, im) = (r(z.re), r(z.im));
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{:+}i", im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> VerifyConfig {
        VerifyConfig { max_dim: 4, trials: 8, seed }
    }

    #[test]
    fn every_suite_passes_on_a_small_run() {
        for report in run(Suite::All, &small(7)).unwrap() {
            assert!(report.passed, "{}: {:#?}", report.suite, report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reports_are_reproducible() {
        assert_eq!(run(Suite::Functions, &small(3)).unwrap(), run(Suite::Functions, &small(3)).unwrap());
    }

    #[test]
    fn invalid_configurations() {
        assert!(matches!(run(Suite::Lattice, &VerifyConfig { max_dim: 0, trials: 1, seed: 0 }), Err(Error::EmptyDimension)));
        assert!(matches!(run(Suite::Lattice, &VerifyConfig { max_dim: 2, trials: 0, seed: 0 }), Err(Error::InvalidTrials)));
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("gelfand".parse::<Suite>().unwrap(), Suite::Gelfand);
    }

    #[test]
    fn dimension_one_is_supported() {
        for report in run(Suite::All, &VerifyConfig { max_dim: 1, trials: 3, seed: 1 }).unwrap() {
            assert!(report.passed, "{}", report.suite);
        }
    }
}
