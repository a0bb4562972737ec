//! Jacobi pairs `(Λ, Γ)`, their bracket and the identity battery.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Context, RatExpr};
use crate::error::{Error, Result};
use crate::exterior::{Chart, DifferentialForm, MultivectorField};
use crate::report::{Check, Status};

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiPair {
    lambda: MultivectorField,
    gamma: MultivectorField,
}

/// Classify a residual: zero on its chart, zero only after moving every
/// component into `constrained`, or non-zero.
pub fn classify<K: crate::exterior::graded::Kind>(
    residual: &crate::exterior::Graded<K>,
    constrained: Option<&Arc<Context>>,
) -> Result<(Status, Option<String>)> {
    if residual.is_zero() {
        return Ok((Status::Pass, None));
    }
    if let Some(ctx) = constrained {
        let mut all_zero = true;
        for (_, c) in residual.terms() {
            if !c.transfer(ctx)?.is_zero() {
                all_zero = false;
                break;
            }
        }
        if all_zero {
            return Ok((Status::PassModConstraint, None));
        }
    }
    Ok((Status::Fail, Some(residual.to_string())))
}

impl JacobiPair {
    pub fn new(lambda: MultivectorField, gamma: MultivectorField) -> Result<JacobiPair> {
        if !Chart::same(lambda.chart(), gamma.chart()) {
            return Err(Error::ChartMismatch);
        }
        if lambda.degree() != 2 && !lambda.is_zero() {
            return Err(Error::Invalid("Λ must be a bivector".into()));
        }
        if gamma.degree() != 1 && !gamma.is_zero() {
            return Err(Error::Invalid("Γ must be a vector field".into()));
        }
        let chart = lambda.chart().clone();
        let lambda = if lambda.degree() == 2 {
            lambda
        } else {
            MultivectorField::zero(&chart, 2)
        };
        let gamma = if gamma.degree() == 1 {
            gamma
        } else {
            MultivectorField::zero(&chart, 1)
        };
        Ok(JacobiPair { lambda, gamma })
    }

    pub fn lambda(&self) -> &MultivectorField {
        &self.lambda
    }

    pub fn gamma(&self) -> &MultivectorField {
        &self.gamma
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.lambda.chart()
    }

    fn check_ctx(&self, f: &RatExpr) -> Result<()> {
        if crate::algebra::expr::same_context(f.context(), self.chart().context()) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// `[f, g] = Λ(df, dg) + f Γ(g) − g Γ(f)`.
    pub fn bracket(&self, f: &RatExpr, g: &RatExpr) -> Result<RatExpr> {
        self.check_ctx(f)?;
        self.check_ctx(g)?;
        let chart = self.chart();
        let df = DifferentialForm::differential(chart, f)?;
        let dg = DifferentialForm::differential(chart, g)?;
        let l = self.lambda.pair(&df, &dg)?;
        let gf = self.gamma.apply(f)?;
        let gg = self.gamma.apply(g)?;
        l.try_add(&f.try_mul(&gg)?)?.try_sub(&g.try_mul(&gf)?)
    }

    /// `X_f = Λ(df, ·) + f Γ`.
    pub fn hamiltonian_vector_field(&self, f: &RatExpr) -> Result<MultivectorField> {
        self.check_ctx(f)?;
        let df = DifferentialForm::differential(self.chart(), f)?;
        self.lambda.sharp(&df)?.add(&self.gamma.scale(f))
    }

    /// `[Λ, Λ] − 2Γ∧Λ`.
    pub fn schouten_residual(&self) -> Result<MultivectorField> {
        let ll = self.lambda.schouten(&self.lambda)?;
        let two = RatExpr::from_integer(2, self.chart().context());
        ll.sub(&self.gamma.wedge(&self.lambda)?.scale(&two))
    }

    /// `L_Γ Λ`.
    pub fn reeb_invariance_residual(&self) -> Result<MultivectorField> {
        self.lambda.lie_derivative(&self.gamma)
    }

    /// Both structure equations; `constrained` is the context in which an
    /// ambient residual may still vanish.
    pub fn verify_structure_equations(&self, label: &str, constrained: Option<&Arc<Context>>) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let r1 = crate::report::timed(
            || match self.schouten_residual().and_then(|r| classify(&r, constrained)) {
                Ok((status, residual)) => {
                    let mut c = Check::new(format!("{label}.schouten"), "[Λ,Λ] = 2Γ∧Λ", status);
                    c.residual = residual;
                    c
                }
                Err(e) => {
                    Check::new(format!("{label}.schouten"), "[Λ,Λ] = 2Γ∧Λ", Status::Fail).with_residual(e.to_string())
                }
            },
        );
        out.push(r1);
        let r2 =
            crate::report::timed(
                || match self.reeb_invariance_residual().and_then(|r| classify(&r, constrained)) {
                    Ok((status, residual)) => {
                        let mut c = Check::new(format!("{label}.reeb-invariance"), "L_Γ Λ = 0", status);
                        c.residual = residual;
                        c
                    }
                    Err(e) => Check::new(format!("{label}.reeb-invariance"), "L_Γ Λ = 0", Status::Fail)
                        .with_residual(e.to_string()),
                },
            );
        out.push(r2);
        Ok(out)
    }

    /// `[f,[g,h]] − [[f,g],h] − [g,[f,h]]`.
    pub fn jacobi_residual(&self, f: &RatExpr, g: &RatExpr, h: &RatExpr) -> Result<RatExpr> {
        let a = self.bracket(f, &self.bracket(g, h)?)?;
        let b = self.bracket(&self.bracket(f, g)?, h)?;
        let c = self.bracket(g, &self.bracket(f, h)?)?;
        a.try_sub(&b)?.try_sub(&c)
    }

    /// Every ordered triple of `fs`, evaluated in parallel, reported in index order.
    pub fn verify_jacobi_identity(&self, label: &str, fs: &[RatExpr]) -> Result<Vec<Check>> {
        if fs.len() < 3 {
            return Err(Error::Invalid(
                "the Jacobi identity battery needs at least three functions".into(),
            ));
        }
        let n = fs.len();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
        let checks: Vec<Result<Check>> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                let start = std::time::Instant::now();
                let r = self.jacobi_residual(&fs[i], &fs[j], &fs[k])?;
                let c = Check::verdict(
                    format!("{label}.jacobi[{i},{j},{k}]"),
                    "[f,[g,h]] = [[f,g],h] + [g,[f,h]]",
                    r.is_zero(),
                    || r.to_string(),
                );
                Ok(c.with_ms(start.elapsed().as_millis() as u64))
            })
            .collect();
        checks.into_iter().collect()
    }

    /// `[f, gh] − [f,g]h − g[f,h] + [f,1]gh`.
    pub fn leibniz_defect(&self, f: &RatExpr, g: &RatExpr, h: &RatExpr) -> Result<RatExpr> {
        let gh = g.try_mul(h)?;
        let one = RatExpr::one(f.context());
        let a = self.bracket(f, &gh)?;
        let b = self.bracket(f, g)?.try_mul(h)?;
        let c = g.try_mul(&self.bracket(f, h)?)?;
        let d = self.bracket(f, &one)?.try_mul(&gh)?;
        a.try_sub(&b)?.try_sub(&c)?.try_add(&d)
    }

    /// `L_Γ f ≡ 0`.
    pub fn is_poisson_element(&self, f: &RatExpr) -> Result<bool> {
        self.check_ctx(f)?;
        Ok(self.gamma.apply(f)?.is_zero())
    }

    /// Move both tensors to another chart with the same coordinate names.
    pub fn transfer(&self, chart: &Arc<Chart>) -> Result<JacobiPair> {
        JacobiPair::new(self.lambda.transfer(chart)?, self.gamma.transfer(chart)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Context;

    fn darboux_pair() -> JacobiPair {
        let ctx = Context::free(&["x", "p", "z"], &[]);
        let c = Chart::all("D", &ctx).unwrap();
        JacobiPair::new(
            MultivectorField::parse("(@x + p*@z)/\\@p", &c).unwrap(),
            MultivectorField::parse("@z", &c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn one_bracket_is_reeb_derivative() {
        let pair = darboux_pair();
        let c = pair.chart().clone();
        let g = c.expr("z*x + p").unwrap();
        let one = RatExpr::one(c.context());
        assert_eq!(pair.bracket(&one, &g).unwrap(), pair.gamma().apply(&g).unwrap());
        assert_eq!(pair.hamiltonian_vector_field(&one).unwrap(), *pair.gamma());
    }

    #[test]
    fn darboux_structure_and_jacobi() {
        let pair = darboux_pair();
        let checks = pair.verify_structure_equations("darboux", None).unwrap();
        assert!(checks.iter().all(|c| c.status == Status::Pass), "{checks:?}");
        let c = pair.chart().clone();
        let fs: Vec<RatExpr> = ["x", "p", "z", "x*z"].iter().map(|t| c.expr(t).unwrap()).collect();
        let js = pair.verify_jacobi_identity("darboux", &fs).unwrap();
        assert_eq!(js.len(), 64);
        assert!(js.iter().all(Check::passed));
    }

    #[test]
    fn negated_lambda_breaks_jacobi() {
        let pair = darboux_pair();
        let bad = JacobiPair::new(pair.lambda().neg(), pair.gamma().clone()).unwrap();
        let c = pair.chart().clone();
        let fs: Vec<RatExpr> = ["x", "p", "z"].iter().map(|t| c.expr(t).unwrap()).collect();
        let js = bad.verify_jacobi_identity("bad", &fs).unwrap();
        assert!(js.iter().any(|c| !c.passed()));
    }

    #[test]
    fn poisson_pair_leibniz() {
        let ctx = Context::free(&["x", "p"], &[]);
        let c = Chart::all("T", &ctx).unwrap();
        let pair = JacobiPair::new(
            MultivectorField::parse("@p/\\@x", &c).unwrap(),
            MultivectorField::zero(&c, 1),
        )
        .unwrap();
        let checks = pair.verify_structure_equations("poisson", None).unwrap();
        assert!(checks.iter().all(|c| c.status == Status::Pass));
        let (f, g, h) = (c.expr("x^2").unwrap(), c.expr("p*x").unwrap(), c.expr("p").unwrap());
        assert!(pair.leibniz_defect(&f, &g, &h).unwrap().is_zero());
    }
}
