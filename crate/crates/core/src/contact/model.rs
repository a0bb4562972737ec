//! Contact forms: the volume test, the Reeb field and the volume-form bracket.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::pair::JacobiPair;
use crate::algebra::{linear_solve, RatExpr, Scalar, Solution};
use crate::error::{Error, Result};
use crate::exterior::{CancelToken, Chart, DifferentialForm, MultivectorField};

/// Rational point at which top forms are tested for non-vanishing.
pub type Witness = HashMap<String, Scalar>;

/// Which coefficient multiplies `df∧dg∧θ∧(dθ)^{n−1}` in the volume bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientMode {
    /// `n − 1`.
    Paper,
    /// `n`.
    Standard,
}

impl CoefficientMode {
    pub fn coefficient(self, n: usize) -> i64 {
        match self {
            CoefficientMode::Paper => n as i64 - 1,
            CoefficientMode::Standard => n as i64,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientMode::Paper => "paper",
            CoefficientMode::Standard => "standard",
        }
    }
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoefficientMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CoefficientMode::Paper),
            "standard" => Ok(CoefficientMode::Standard),
            _ => Err(Error::Invalid(format!(
                "unknown mode `{s}` (expected paper or standard)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContactModel {
    chart: Arc<Chart>,
    theta: DifferentialForm,
    dtheta: DifferentialForm,
    n: usize,
    /// θ ∧ (dθ)^{n−1}
    theta_dtheta_pow: DifferentialForm,
    /// (dθ)^n
    dtheta_pow: DifferentialForm,
    volume: DifferentialForm,
    volume_coefficient: RatExpr,
}

/// Build a contact model, certifying `θ∧(dθ)^n` is non-zero both identically
/// and at `witness`.
pub fn verify_contact(chart: &Arc<Chart>, theta: &DifferentialForm, witness: &Witness) -> Result<ContactModel> {
    verify_contact_cancellable(chart, theta, witness, None)
}

pub fn verify_contact_cancellable(
    chart: &Arc<Chart>,
    theta: &DifferentialForm,
    witness: &Witness,
    token: Option<&CancelToken>,
) -> Result<ContactModel> {
    if !Chart::same(theta.chart(), chart) {
        return Err(Error::ChartMismatch);
    }
    if theta.degree() != 1 {
        return Err(Error::NotContact(format!(
            "expected a one-form, got degree {}",
            theta.degree()
        )));
    }
    let dim = chart.dim();
    if dim % 2 == 0 {
        return Err(Error::EvenDimension(dim));
    }
    let n = (dim - 1) / 2;
    let dtheta = theta.exterior_derivative_cancellable(token)?;
    let mut pow = DifferentialForm::scalar(chart, RatExpr::one(chart.context()));
    for _ in 0..n.saturating_sub(1) {
        pow = pow.wedge_cancellable(&dtheta, token)?;
    }
    let theta_dtheta_pow = theta.wedge_cancellable(&pow, token)?;
    let dtheta_pow = pow.wedge_cancellable(&dtheta, token)?;
    let volume = theta.wedge_cancellable(&dtheta_pow, token)?;
    let volume_coefficient = volume.top_coefficient()?;
    if volume_coefficient.is_zero() {
        return Err(Error::NotContact("θ∧(dθ)^n vanishes identically".into()));
    }
    let at = volume_coefficient.eval_witness(witness)?;
    if at.is_zero() {
        return Err(Error::NotContact(format!(
            "θ∧(dθ)^n vanishes at the witness point ({at})"
        )));
    }
    Ok(ContactModel {
        chart: chart.clone(),
        theta: theta.clone(),
        dtheta,
        n,
        theta_dtheta_pow,
        dtheta_pow,
        volume,
        volume_coefficient,
    })
}

impl ContactModel {
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn theta(&self) -> &DifferentialForm {
        &self.theta
    }

    pub fn dtheta(&self) -> &DifferentialForm {
        &self.dtheta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `θ∧(dθ)^n`.
    pub fn volume(&self) -> &DifferentialForm {
        &self.volume
    }

    /// `(dθ)^n`.
    pub fn dtheta_power(&self) -> &DifferentialForm {
        &self.dtheta_pow
    }

    /// `θ∧(dθ)^{n−1}`.
    pub fn theta_dtheta_power(&self) -> &DifferentialForm {
        &self.theta_dtheta_pow
    }

    /// Solve `i_Γ θ = 1`, `i_Γ dθ = 0`.
    pub fn reeb_field(&self) -> Result<MultivectorField> {
        let chart = &self.chart;
        let ctx = chart.context();
        let dim = chart.dim();
        let mut rows = Vec::with_capacity(dim + 1);
        let mut rhs = Vec::with_capacity(dim + 1);
        rows.push((0..dim).map(|a| self.theta.get(&[a])).collect::<Vec<_>>());
        rhs.push(RatExpr::one(ctx));
        for b in 0..dim {
            rows.push((0..dim).map(|a| self.dtheta.get(&[a, b])).collect());
            rhs.push(RatExpr::zero(ctx));
        }
        match linear_solve(&rows, &rhs, ctx) {
            Ok(Solution::Unique(x)) => Ok(MultivectorField::from_terms(
                chart,
                1,
                x.into_iter().enumerate().map(|(a, c)| (vec![a], c)),
            )),
            _ => Err(Error::SolveFailed),
        }
    }

    /// `i_Γ(θ∧(dθ)^n) = (dθ)^n`, checked verbatim.
    pub fn reeb_identity_holds(&self, gamma: &MultivectorField) -> Result<bool> {
        self.volume.interior_vector(gamma)?.equal_mod(&self.dtheta_pow)
    }

    /// `i_Λ(θ∧(dθ)^n)` divided by `θ∧(dθ)^{n−1}`, if the two are proportional
    /// by a constant.
    pub fn bivector_contraction_factor(&self, lambda: &MultivectorField) -> Result<Option<Scalar>> {
        let lhs = self.volume.interior_bivector(lambda)?;
        let rhs = &self.theta_dtheta_pow;
        let mut factor: Option<RatExpr> = None;
        for (idx, c) in rhs.terms() {
            let q = lhs.get(&idx).checked_div(&c)?;
            match &factor {
                None => factor = Some(q),
                Some(f) if *f == q => {}
                Some(_) => return Ok(None),
            }
        }
        let Some(f) = factor else { return Ok(None) };
        if !lhs.equal_mod(&rhs.scale(&f))? {
            return Ok(None);
        }
        Ok(f.as_constant())
    }

    /// Solve `[f,g]·θ∧(dθ)^n = c·df∧dg∧θ∧(dθ)^{n−1} + (f dg − g df)∧(dθ)^n`.
    pub fn bracket_from_volume(&self, f: &RatExpr, g: &RatExpr, mode: CoefficientMode) -> Result<RatExpr> {
        let chart = &self.chart;
        let df = DifferentialForm::differential(chart, f)?;
        let dg = DifferentialForm::differential(chart, g)?;
        let c = mode.coefficient(self.n);
        let mut rhs = DifferentialForm::zero(chart, chart.dim());
        if c != 0 {
            let first = df.wedge(&dg)?.wedge(&self.theta_dtheta_pow)?;
            rhs = rhs.add(&first.scale(&RatExpr::from_integer(c, chart.context())))?;
        }
        let one = dg.scale(f).sub(&df.scale(g))?;
        rhs = rhs.add(&one.wedge(&self.dtheta_pow)?)?;
        if rhs.is_zero() {
            return Ok(RatExpr::zero(chart.context()));
        }
        if rhs.degree() != chart.dim() {
            return Err(Error::NotTopForm);
        }
        rhs.top_coefficient()?.checked_div(&self.volume_coefficient)
    }

    /// Γ from the Reeb system and Λ from coordinate brackets:
    /// `Λ^{ab} = [q^a, q^b] − q^a Γ^b + q^b Γ^a`.
    pub fn extract_jacobi_pair(&self, mode: CoefficientMode) -> Result<JacobiPair> {
        let gamma = self.reeb_field()?;
        let chart = &self.chart;
        let dim = chart.dim();
        let mut terms = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let qa = chart.coordinate(a);
                let qb = chart.coordinate(b);
                let br = self.bracket_from_volume(&qa, &qb, mode)?;
                let ga = gamma.get(&[a]);
                let gb = gamma.get(&[b]);
                let c = br.try_sub(&qa.try_mul(&gb)?)?.try_add(&qb.try_mul(&ga)?)?;
                terms.push((vec![a, b], c));
            }
        }
        let lambda = MultivectorField::from_terms(chart, 2, terms);
        JacobiPair::new(lambda, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Context};

    fn darboux() -> (Arc<Chart>, Witness) {
        let ctx = Context::free(&["x", "p", "z"], &[]);
        let chart = Chart::all("D", &ctx).unwrap();
        let w = ["x", "p", "z"].iter().map(|n| (n.to_string(), int(1))).collect();
        (chart, w)
    }

    #[test]
    fn darboux_is_contact_and_reeb_is_dz() {
        let (c, w) = darboux();
        let theta = DifferentialForm::parse("d(z) - p*d(x)", &c).unwrap();
        let m = verify_contact(&c, &theta, &w).unwrap();
        let reeb = m.reeb_field().unwrap();
        assert_eq!(reeb.to_string(), "@z");
        assert!(m.reeb_identity_holds(&reeb).unwrap());
    }

    #[test]
    fn closed_form_is_not_contact() {
        let (c, w) = darboux();
        let theta = DifferentialForm::parse("d(x)", &c).unwrap();
        assert!(matches!(verify_contact(&c, &theta, &w), Err(Error::NotContact(_))));
    }

    #[test]
    fn even_dimension_rejected() {
        let ctx = Context::free(&["x", "p"], &[]);
        let c = Chart::all("P", &ctx).unwrap();
        let theta = DifferentialForm::parse("p*d(x)", &c).unwrap();
        assert_eq!(
            verify_contact(&c, &theta, &Witness::new()).unwrap_err(),
            Error::EvenDimension(2)
        );
    }

    #[test]
    fn volume_bracket_is_antisymmetric_in_both_modes() {
        let (c, w) = darboux();
        let theta = DifferentialForm::parse("d(z) - p*d(x)", &c).unwrap();
        let m = verify_contact(&c, &theta, &w).unwrap();
        let f = c.expr("x*p + z").unwrap();
        for mode in [CoefficientMode::Paper, CoefficientMode::Standard] {
            assert!(m.bracket_from_volume(&f, &f, mode).unwrap().is_zero());
        }
    }

    #[test]
    fn darboux_pair_extraction() {
        let (c, w) = darboux();
        let theta = DifferentialForm::parse("d(z) - p*d(x)", &c).unwrap();
        let m = verify_contact(&c, &theta, &w).unwrap();
        let pair = m.extract_jacobi_pair(CoefficientMode::Standard).unwrap();
        let expected = MultivectorField::parse("(@x + p*@z)/\\@p", &c).unwrap();
        assert_eq!(pair.lambda(), &expected);
        // Independent route: the bracket from (Λ, Γ) equals the volume bracket.
        let (x, p) = (c.expr("x").unwrap(), c.expr("p").unwrap());
        assert_eq!(
            pair.bracket(&x, &p).unwrap(),
            m.bracket_from_volume(&x, &p, CoefficientMode::Standard).unwrap()
        );
        assert_eq!(m.bivector_contraction_factor(pair.lambda()).unwrap(), Some(int(1)));
    }
}
