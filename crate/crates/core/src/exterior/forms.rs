//! Exterior derivative, contractions and the Cartan Lie derivative on forms.

use std::collections::BTreeMap;

use super::chart::CancelToken;
use super::graded::{mask_indices, wedge_sign, DifferentialForm, MultivectorField};
use crate::algebra::RatExpr;
use crate::error::{Error, Result};

fn check_chart(a: &MultivectorField, b: &DifferentialForm) -> Result<()> {
    if super::Chart::same(a.chart(), b.chart()) {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

impl DifferentialForm {
    /// `df` for a scalar `f` on `chart`.
    pub fn differential(chart: &std::sync::Arc<super::Chart>, f: &RatExpr) -> Result<DifferentialForm> {
        DifferentialForm::scalar(chart, f.clone()).exterior_derivative()
    }

    pub fn exterior_derivative(&self) -> Result<DifferentialForm> {
        self.exterior_derivative_cancellable(None)
    }

    pub fn exterior_derivative_cancellable(&self, token: Option<&CancelToken>) -> Result<DifferentialForm> {
        let chart = self.chart();
        let mut out = DifferentialForm::zero(chart, self.degree() + 1);
        if self.degree() >= chart.dim() {
            return Ok(out);
        }
        for (mask, c) in self.masks() {
            CancelToken::check(token)?;
            for a in 0..chart.dim() {
                if mask & (1 << a) != 0 {
                    continue;
                }
                let dc = c.derivative(chart.var(a))?;
                if dc.is_zero() {
                    continue;
                }
                let bit = 1u32 << a;
                out.accumulate(mask | bit, if wedge_sign(bit, mask) { -dc } else { dc });
            }
        }
        Ok(out)
    }

    /// `i_{∂_a}` for chart position `a`.
    pub fn interior_basis(&self, a: usize) -> DifferentialForm {
        let chart = self.chart();
        if self.degree() == 0 {
            return DifferentialForm::zero(chart, 0);
        }
        let mut coeffs = BTreeMap::new();
        let bit = 1u32 << a;
        for (mask, c) in self.masks() {
            if mask & bit == 0 {
                continue;
            }
            let below = (mask & (bit - 1)).count_ones();
            coeffs.insert(mask & !bit, if below % 2 == 1 { -c } else { c.clone() });
        }
        DifferentialForm::from_masks(chart, self.degree() - 1, coeffs)
    }

    /// Contraction `i_X α` with a vector field.
    pub fn interior_vector(&self, x: &MultivectorField) -> Result<DifferentialForm> {
        check_chart(x, self)?;
        if x.degree() != 1 {
            return Err(Error::Invalid(format!(
                "expected a vector field, got degree {}",
                x.degree()
            )));
        }
        if self.degree() == 0 {
            return Ok(DifferentialForm::zero(self.chart(), 0));
        }
        let mut out = DifferentialForm::zero(self.chart(), self.degree() - 1);
        for (idx, c) in x.terms() {
            out = out.add(&self.interior_basis(idx[0]).scale(&c))?;
        }
        Ok(out)
    }

    /// Contraction with a multivector: `i_{∂_{j1}∧…∧∂_{jk}} = i_{∂_{jk}} ∘ … ∘ i_{∂_{j1}}`.
    /// For a bivector this is `Σ_{a<b} Λ^{ab} i_{∂_b} i_{∂_a}`.
    pub fn interior_multivector(&self, t: &MultivectorField) -> Result<DifferentialForm> {
        self.interior_multivector_cancellable(t, None)
    }

    pub fn interior_multivector_cancellable(
        &self,
        t: &MultivectorField,
        token: Option<&CancelToken>,
    ) -> Result<DifferentialForm> {
        check_chart(t, self)?;
        if self.degree() < t.degree() {
            return Err(Error::DegreeTooLow { degree: self.degree() });
        }
        let mut out = DifferentialForm::zero(self.chart(), self.degree() - t.degree());
        for (idx, c) in t.terms() {
            CancelToken::check(token)?;
            let mut cur = self.clone();
            for &a in &idx {
                cur = cur.interior_basis(a);
            }
            out = out.add(&cur.scale(&c))?;
        }
        Ok(out)
    }

    /// Bivector contraction; requires `degree ≥ 2`.
    pub fn interior_bivector(&self, lambda: &MultivectorField) -> Result<DifferentialForm> {
        if lambda.degree() != 2 {
            return Err(Error::Invalid(format!(
                "expected a bivector, got degree {}",
                lambda.degree()
            )));
        }
        self.interior_multivector(lambda)
    }

    /// Cartan formula `L_X = i_X d + d i_X`.
    pub fn lie_derivative(&self, x: &MultivectorField) -> Result<DifferentialForm> {
        check_chart(x, self)?;
        let a = self.exterior_derivative()?.interior_vector(x)?;
        if self.degree() == 0 {
            return Ok(a);
        }
        let b = self.interior_vector(x)?.exterior_derivative()?;
        a.add(&b)
    }

    /// Coefficient of the basis top form; errors unless this is a top form.
    pub fn top_coefficient(&self) -> Result<RatExpr> {
        if self.degree() != self.chart().dim() {
            return Err(Error::NotTopForm);
        }
        Ok(self.get(&(0..self.degree()).collect::<Vec<_>>()))
    }

    /// Components along `dx^a` for a one-form, as a dense vector.
    pub fn one_form_components(&self) -> Result<Vec<RatExpr>> {
        if self.degree() != 1 {
            return Err(Error::Invalid("expected a one-form".into()));
        }
        Ok((0..self.chart().dim()).map(|a| self.get(&[a])).collect())
    }
}

/// Positions used by a mask; re-exported for callers assembling components.
pub fn positions(mask: u32) -> Vec<usize> {
    mask_indices(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Context;
    use crate::exterior::Chart;

    #[test]
    fn d_of_coordinate_and_dd_zero() {
        let ctx = Context::free(&["x", "y", "z"], &[]);
        let c = Chart::all("R3", &ctx).unwrap();
        let x = DifferentialForm::scalar(&c, c.expr("x").unwrap());
        assert_eq!(x.exterior_derivative().unwrap().to_string(), "d(x)");
        let f = DifferentialForm::scalar(&c, c.expr("x^2*y/(z+1)").unwrap());
        let ddf = f.exterior_derivative().unwrap().exterior_derivative().unwrap();
        assert!(ddf.is_zero());
    }

    #[test]
    fn liouville_differential() {
        let ctx = Context::free(&["x", "p"], &[]);
        let c = Chart::all("T", &ctx).unwrap();
        let theta = DifferentialForm::parse("p*d(x)", &c).unwrap();
        assert_eq!(theta.exterior_derivative().unwrap().to_string(), "-d(x)/\\d(p)");
    }

    #[test]
    fn contractions() {
        let ctx = Context::free(&["p", "x"], &[]);
        let c = Chart::all("T", &ctx).unwrap();
        let dx = DifferentialForm::parse("d(p)", &c).unwrap();
        let v = MultivectorField::parse("@p", &c).unwrap();
        assert!(dx.interior_vector(&v).unwrap().as_scalar().unwrap().is_one());
        let area = DifferentialForm::parse("d(p)/\\d(x)", &c).unwrap();
        let lam = MultivectorField::parse("@p/\\@x", &c).unwrap();
        assert!(area.interior_bivector(&lam).unwrap().as_scalar().unwrap().is_one());
        let f = DifferentialForm::parse("x", &c).unwrap();
        assert!(f.interior_vector(&v).unwrap().is_zero());
        assert!(matches!(dx.interior_bivector(&lam), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn cancellation_is_observed() {
        let ctx = Context::free(&["x", "y"], &[]);
        let c = Chart::all("R2", &ctx).unwrap();
        let f = DifferentialForm::parse("x*y*d(x)", &c).unwrap();
        let token = CancelToken::new();
        token.cancel();
        assert_eq!(f.exterior_derivative_cancellable(Some(&token)), Err(Error::Cancelled));
    }
}
