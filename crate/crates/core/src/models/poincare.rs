//! Poincaré generators, their Hamiltonian fields, invariance of the
//! structure tensors and closure of the bracket algebra.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::common::{expect_zero, failed};
use crate::algebra::expr::format_scalar;
use crate::algebra::{int, linear_solve, Context, Monomial, RatExpr, Scalar, Solution};
use crate::contact::JacobiPair;
use crate::error::{Error, Result};
use crate::exterior::{Chart, DifferentialForm, MultivectorField};
use crate::report::{Check, Status};

/// A labelled function on a chart.
pub type Labelled = (String, RatExpr);

/// `P^μ` and `M^{ρσ} = X^ρ P^σ − X^σ P^ρ` (`ρ < σ`), from expression texts for
/// the position `X^μ` and momentum `P^μ` on `chart`.
pub fn poincare_generators(
    chart: &Arc<Chart>,
    position: &[String; 4],
    momentum: &[String; 4],
) -> Result<Vec<Labelled>> {
    let xs = position.iter().map(|t| chart.expr(t)).collect::<Result<Vec<_>>>()?;
    let ps = momentum.iter().map(|t| chart.expr(t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(10);
    for (mu, p) in ps.iter().enumerate() {
        out.push((format!("P{mu}"), p.clone()));
    }
    for r in 0..4 {
        for s in r + 1..4 {
            let m = xs[r].try_mul(&ps[s])?.try_sub(&xs[s].try_mul(&ps[r])?)?;
            out.push((format!("M{r}{s}"), m));
        }
    }
    Ok(out)
}

/// Rational coordinates of `[G_a, G_b]` in the span of the generators, or
/// `None` when the bracket leaves the span.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub labels: Vec<String>,
    /// Indexed by `(a, b)` with `a ≠ b`.
    pub entries: Vec<((usize, usize), Option<Vec<Scalar>>)>,
}

impl StructureConstants {
    pub fn compute(pair: &JacobiPair, gens: &[Labelled]) -> Result<StructureConstants> {
        let n = gens.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let entries = pairs
            .par_iter()
            .map(|&(a, b)| {
                let v = pair.bracket(&gens[a].1, &gens[b].1)?;
                Ok(((a, b), decompose(&v, gens)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureConstants {
            labels: gens.iter().map(|g| g.0.clone()).collect(),
            entries,
        })
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&Option<Vec<Scalar>>> {
        self.entries.iter().find(|(k, _)| *k == (a, b)).map(|(_, v)| v)
    }

    pub fn is_closed(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_some())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.entries.iter().all(|((a, b), v)| match (v, self.get(*b, *a)) {
            (Some(x), Some(Some(y))) => x.iter().zip(y).all(|(p, q)| *p == -q.clone()),
            _ => false,
        })
    }

    /// Render one row as a linear combination of generator labels.
    pub fn combination(&self, coeffs: &[Scalar]) -> String {
        let mut out = String::new();
        for (c, label) in coeffs.iter().zip(&self.labels) {
            if *c == int(0) {
                continue;
            }
            let neg = *c < int(0);
            let abs = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if abs != int(1) {
                out.push_str(&format_scalar(&abs));
                out.push('*');
            }
            out.push_str(label);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((a, b), v) in &self.entries {
            if a > b {
                continue;
            }
            let rhs = match v {
                Some(c) => self.combination(c),
                None => "(not in span)".into(),
            };
            writeln!(f, "[{}, {}] = {}", self.labels[*a], self.labels[*b], rhs)?;
        }
        Ok(())
    }
}

/// Solve `v = Σ c_k g_k` over ℚ, comparing monomial coefficients.
pub(crate) fn decompose(v: &RatExpr, gens: &[Labelled]) -> Result<Option<Vec<Scalar>>> {
    let polys = gens
        .iter()
        .map(|(l, g)| {
            g.as_polynomial()
                .ok_or_else(|| Error::Invalid(format!("generator {l} is not polynomial")))
        })
        .collect::<Result<Vec<_>>>()?;
    let Some(target) = v.as_polynomial() else {
        return Ok(None);
    };
    let monomials: BTreeSet<Monomial> = polys
        .iter()
        .chain(std::iter::once(&target))
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
        .collect();
    let scalars = Context::free(&[], &[]);
    let coeff = |p: &crate::algebra::MultiPoly, m: &Monomial| -> RatExpr {
        let c = p
            .terms()
            .find(|(k, _)| *k == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| int(0));
        RatExpr::from_scalar(c, &scalars)
    };
    let a: Vec<Vec<RatExpr>> = monomials
        .iter()
        .map(|m| polys.iter().map(|p| coeff(p, m)).collect())
        .collect();
    let b: Vec<RatExpr> = monomials.iter().map(|m| coeff(&target, m)).collect();
    match linear_solve(&a, &b, &scalars) {
        Ok(sol) => {
            let xs = match &sol {
                Solution::Unique(x) => x.clone(),
                Solution::Underdetermined { particular, .. } => particular.clone(),
            };
            Ok(Some(
                xs.iter().map(|x| x.as_constant().expect("constant solution")).collect(),
            ))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Closure, antisymmetry, commuting translations, unit-size constants and
/// Reeb invariance of every generator.
pub fn closure_checks(pair: &JacobiPair, gens: &[Labelled]) -> Vec<Check> {
    let sc = match StructureConstants::compute(pair, gens) {
        Ok(sc) => sc,
        Err(e) => return vec![failed("algebra.closure", "generators close under the bracket", e)],
    };
    let mut out = Vec::new();
    let open: Vec<String> = sc
        .entries
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|((a, b), _)| format!("[{}, {}]", sc.labels[*a], sc.labels[*b]))
        .collect();
    out.push(
        Check::verdict(
            "algebra.closure",
            "generators close under the bracket",
            open.is_empty(),
            || open.join(", "),
        )
        .with_measured(sc.to_string().trim_end().replace('\n', "; ")),
    );
    out.push(Check::verdict(
        "algebra.antisymmetry",
        "structure constants are antisymmetric",
        sc.is_antisymmetric(),
        || "c_ab ≠ −c_ba".into(),
    ));
    let translations: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].0.starts_with('P')).collect();
    let mut bad = Vec::new();
    for &a in &translations {
        for &b in &translations {
            if a == b {
                continue;
            }
            match sc.get(a, b) {
                Some(Some(c)) if c.iter().all(|x| *x == int(0)) => {}
                _ => bad.push(format!("[{}, {}]", gens[a].0, gens[b].0)),
            }
        }
    }
    out.push(Check::verdict(
        "algebra.translations-commute",
        "[P^μ, P^ν] = 0",
        bad.is_empty(),
        || bad.join(", "),
    ));
    let unit = sc.entries.iter().all(|(_, v)| {
        v.as_ref()
            .is_none_or(|c| c.iter().all(|x| *x == int(0) || *x == int(1) || *x == int(-1)))
    });
    out.push(Check::verdict(
        "algebra.metric-constants",
        "structure constants are metric signs",
        unit,
        || "constant outside {−1, 0, 1}".into(),
    ));
    for (label, g) in gens {
        let c = match pair.is_poisson_element(g) {
            Ok(ok) => Check::verdict(format!("algebra.reeb-invariant.{label}"), "L_Γ G = 0", ok, || {
                pair.gamma().apply(g).map(|r| r.to_string()).unwrap_or_default()
            }),
            Err(e) => failed(format!("algebra.reeb-invariant.{label}"), "L_Γ G = 0", e),
        };
        out.push(c);
    }
    out
}

/// Hamiltonian vector fields of the generators.
pub fn generator_fields(pair: &JacobiPair, gens: &[Labelled]) -> Result<Vec<(String, MultivectorField)>> {
    gens.iter()
        .map(|(l, g)| Ok((l.clone(), pair.hamiltonian_vector_field(g)?)))
        .collect()
}

/// `L_X θ`, `L_X Λ` and `L_X Γ` for every field, in parallel.
pub fn invariance_checks(
    pair: &JacobiPair,
    theta: Option<&DifferentialForm>,
    fields: &[(String, MultivectorField)],
    constrained: Option<&Arc<Context>>,
) -> Vec<Check> {
    let per_field: Vec<Vec<Check>> = fields
        .par_iter()
        .map(|(label, x)| {
            let mut cs = Vec::new();
            if let Some(theta) = theta {
                cs.push(crate::report::timed(|| {
                    expect_zero(
                        format!("invariance.{label}.theta"),
                        "L_X θ = 0",
                        theta.lie_derivative(x),
                        constrained,
                    )
                }));
            }
            cs.push(crate::report::timed(|| {
                expect_zero(
                    format!("invariance.{label}.lambda"),
                    "L_X Λ = 0",
                    pair.lambda().lie_derivative(x),
                    constrained,
                )
            }));
            cs.push(crate::report::timed(|| {
                expect_zero(
                    format!("invariance.{label}.gamma"),
                    "L_X Γ = 0",
                    pair.gamma().lie_derivative(x),
                    constrained,
                )
            }));
            cs
        })
        .collect();
    per_field.into_iter().flatten().collect()
}

/// A check that passes when `residual` is non-zero; used for negative controls.
pub fn expect_nonzero(id: &str, reference: &str, residual: Result<MultivectorField>) -> Check {
    match residual {
        Ok(r) if !r.is_zero() => Check::new(id, reference, Status::Pass).with_measured(r.to_string()),
        Ok(_) => Check::new(id, reference, Status::Fail).with_residual("residual vanished"),
        Err(e) => failed(id, reference, e),
    }
}
