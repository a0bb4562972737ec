//! Pairs of events `(x, y)` at fixed interval `(x−y)·(x−y) = m²`.

use std::sync::Arc;

use super::common::*;
use super::mass_shell::{build_mass_shell, names, MassShellModel};
use super::poincare::{self, Labelled};
use crate::algebra::expr::format_scalar;
use crate::algebra::{int, Context, RatExpr};
use crate::contact::{verify_contact, BracketTable, CoefficientMode, ContactModel, JacobiPair, Witness};
use crate::error::{Error, Result};
use crate::exterior::{restrict_multivector, Chart, DifferentialForm, MultivectorField, SmoothMap};
use crate::report::{timed, Check, Status, VerificationReport};

#[derive(Clone, Debug)]
pub struct TwoPointModel {
    mass: Mass,
    ambient: Arc<Chart>,
    chart: Arc<Chart>,
    shell: MassShellModel,
    identification: SmoothMap,
    action: RatExpr,
    contact: ContactModel,
    reference_ambient: JacobiPair,
    reference: JacobiPair,
    pair: JacobiPair,
    witness: Witness,
}

/// Build the two-point model. `θ̃` is the pullback of the mass-shell form
/// along `x ↦ x`, `p ↦ x − y`. Fails if the extracted pair differs from the
/// closed-form `(Λ̃, Γ̃)`; the commutation table is checked by [`TwoPointModel::verify`].
pub fn build_two_point(mass: Mass) -> Result<TwoPointModel> {
    mass.validate()?;
    let m = mass.text();
    let xs = names("x");
    let ys = names("y");
    let params = mass.params();
    let all: Vec<&str> = xs.iter().chain(&ys).map(String::as_str).collect();
    let free = Context::free(&all, &params);
    let ctx = Context::builder()
        .coords(&xs)
        .dependent(
            "y0",
            &format!("2*x0*y0 - x0^2 + {m}^2 + (x1 - y1)^2 + (x2 - y2)^2 + (x3 - y3)^2"),
        )
        .coords(&ys[1..])
        .params(&params)
        .build()?;
    let ambient = Chart::all("MxM", &free)?;
    let intrinsic: Vec<&String> = xs.iter().chain(&ys[1..]).collect();
    let chart = Chart::new("Sigma2_m", &ctx, &intrinsic)?;
    let shell = build_mass_shell(mass.clone())?;
    let mut images = Vec::new();
    for mu in 0..4 {
        images.push((format!("x{mu}"), chart.expr(&format!("x{mu}"))?));
        images.push((format!("p{mu}"), chart.expr(&format!("x{mu} - y{mu}"))?));
    }
    let identification = SmoothMap::new(&chart, shell.chart(), images)?;
    let theta = identification.pullback(shell.theta())?;
    let witness = witness("y", &[]);
    let contact = verify_contact(&chart, &theta, &witness)?;
    let reference_ambient = reference_pair(&ambient, &m)?;
    let reference = JacobiPair::new(
        restrict_multivector(reference_ambient.lambda(), &chart)?,
        restrict_multivector(reference_ambient.gamma(), &chart)?,
    )?;
    let pair = contact.extract_jacobi_pair(CoefficientMode::Standard)?;
    if pair != reference {
        let d = pair.lambda().sub(reference.lambda())?;
        return Err(Error::Construction(format!(
            "extracted Λ̃ differs from the closed form by {d}"
        )));
    }
    let action = ambient.expr("(x0 - y0)^2 - (x1 - y1)^2 - (x2 - y2)^2 - (x3 - y3)^2")?;
    Ok(TwoPointModel {
        mass,
        ambient,
        chart,
        shell,
        identification,
        action,
        contact,
        reference_ambient,
        reference,
        pair,
        witness,
    })
}

/// `Λ̃ = (g^{μν} − d^μd^ν/m²) ∂_{x^μ}∧∂_{y^ν}`, `Γ̃ = (d^μ/m²)(∂_{x^μ} + ∂_{y^μ})`
/// with `d = x − y`.
fn reference_pair(ambient: &Arc<Chart>, m: &str) -> Result<JacobiPair> {
    let mut lambda = Vec::new();
    let mut gamma = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let c = ambient.expr(&format!("{} - (x{mu} - y{mu})*(x{nu} - y{nu})/{m}^2", g2(mu, nu)))?;
            lambda.push((
                vec![
                    ambient.position(&format!("x{mu}"))?,
                    ambient.position(&format!("y{nu}"))?,
                ],
                c,
            ));
        }
        let c = ambient.expr(&format!("(x{mu} - y{mu})/{m}^2"))?;
        gamma.push((vec![ambient.position(&format!("x{mu}"))?], c.clone()));
        gamma.push((vec![ambient.position(&format!("y{mu}"))?], c));
    }
    JacobiPair::new(
        MultivectorField::from_terms(ambient, 2, lambda),
        MultivectorField::from_terms(ambient, 1, gamma),
    )
}

impl TwoPointModel {
    pub fn mass(&self) -> &Mass {
        &self.mass
    }

    pub fn ambient(&self) -> &Arc<Chart> {
        &self.ambient
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn constrained_context(&self) -> &Arc<Context> {
        self.chart.context()
    }

    /// `S(x, y) = (x−y)·(x−y)` on the ambient chart.
    pub fn action(&self) -> &RatExpr {
        &self.action
    }

    /// The map `x ↦ x`, `p ↦ x − y` onto the mass shell.
    pub fn identification(&self) -> &SmoothMap {
        &self.identification
    }

    pub fn theta(&self) -> &DifferentialForm {
        self.contact.theta()
    }

    pub fn contact(&self) -> &ContactModel {
        &self.contact
    }

    pub fn pair(&self) -> &JacobiPair {
        &self.pair
    }

    pub fn reference_pair(&self) -> &JacobiPair {
        &self.reference
    }

    pub fn reference_ambient(&self) -> &JacobiPair {
        &self.reference_ambient
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// Sums `(x+y)^μ` and differences `(x−y)^μ`, labelled `s0..s3`, `d0..d3`.
    pub fn sum_difference_functions(&self) -> Result<Vec<Labelled>> {
        let mut out = Vec::new();
        for mu in 0..4 {
            out.push((format!("s{mu}"), self.chart.expr(&format!("x{mu} + y{mu}"))?));
        }
        for mu in 0..4 {
            out.push((format!("d{mu}"), self.chart.expr(&format!("x{mu} - y{mu}"))?));
        }
        Ok(out)
    }

    pub fn table(&self) -> Result<BracketTable> {
        BracketTable::compute(&self.pair, &self.sum_difference_functions()?)
    }

    /// `P^μ = (x−y)^μ`, `M^{ρσ} = ((x+y)^ρ(x−y)^σ − (x−y)^ρ(x+y)^σ)/2`.
    pub fn generators(&self) -> Result<Vec<Labelled>> {
        let x: [String; 4] = std::array::from_fn(|mu| format!("(x{mu} + y{mu})/2"));
        let p: [String; 4] = std::array::from_fn(|mu| format!("(x{mu} - y{mu})"));
        poincare::poincare_generators(&self.chart, &x, &p)
    }

    /// Poincaré fields acting diagonally on both events.
    pub fn diagonal_fields(&self) -> Result<Vec<(String, MultivectorField)>> {
        let mut out = Vec::new();
        for mu in 0..4 {
            let text = format!("{}*(@x{mu} + @y{mu})", g(mu));
            out.push((format!("P{mu}"), self.restricted_field(&text)?));
        }
        for r in 0..4 {
            for s in r + 1..4 {
                let text = format!(
                    "{gs}*(x{r}*@x{s} + y{r}*@y{s}) - {gr}*(x{s}*@x{r} + y{s}*@y{r})",
                    gs = g(s),
                    gr = g(r)
                );
                out.push((format!("M{r}{s}"), self.restricted_field(&text)?));
            }
        }
        Ok(out)
    }

    fn restricted_field(&self, text: &str) -> Result<MultivectorField> {
        restrict_multivector(&MultivectorField::parse(text, &self.ambient)?, &self.chart)
    }

    /// `g^{μν} ∂_μS ∂_νS` (derivatives in `x`) reduced on the constraint.
    pub fn hamilton_jacobi_value(&self) -> Result<RatExpr> {
        let mut acc = RatExpr::zero(self.ambient.context());
        for mu in 0..4 {
            let d = self.action.partial_derivative(&format!("x{mu}"))?;
            acc = acc.try_add(&d.try_mul(&d)?.scale(&int(g(mu))))?;
        }
        acc.transfer(self.chart.context())
    }

    pub fn verify(&self) -> VerificationReport {
        let mut r = VerificationReport::new("two-point");
        let ctx = self.constrained_context().clone();
        r.push(
            Check::new("contact", "θ̃∧(dθ̃)^3 ≠ 0", Status::Pass).with_measured(format!(
                "coefficient {}",
                self.contact
                    .volume()
                    .top_coefficient()
                    .map(|c| c.to_string())
                    .unwrap_or_default()
            )),
        );
        r.push(expect_graded_equal(
            "reeb.closed-form",
            "Γ̃ = ((x−y)^μ/m²)(∂_{x^μ} + ∂_{y^μ})",
            self.pair.gamma(),
            self.reference.gamma(),
            None,
        ));
        r.push(expect_graded_equal(
            "lambda.closed-form",
            "Λ̃ = (g^{μν} − (x−y)^μ(x−y)^ν/m²)∂_{x^μ}∧∂_{y^ν}",
            self.pair.lambda(),
            self.reference.lambda(),
            None,
        ));
        r.push(timed(|| self.tangency_check(&ctx)));
        match self.pair.verify_structure_equations("structure.intrinsic", None) {
            Ok(cs) => r.extend(cs),
            Err(e) => r.push(failed("structure.intrinsic", "structure equations", e)),
        }
        match self
            .reference_ambient
            .verify_structure_equations("structure.ambient", Some(&ctx))
        {
            Ok(cs) => r.extend(cs),
            Err(e) => r.push(failed("structure.ambient", "structure equations", e)),
        }
        r.extend(self.table_checks());
        r.push(self.hamilton_jacobi_check());
        match self.generators() {
            Ok(gens) => {
                r.extend(self.generator_field_checks(&gens));
                r.push(self.consistency_check(&gens));
                r.extend(poincare::closure_checks(&self.pair, &gens));
            }
            Err(e) => r.push(failed("algebra", "Poincaré generators", e)),
        }
        match self.diagonal_fields() {
            Ok(fields) => r.extend(poincare::invariance_checks(
                &self.pair,
                Some(self.theta()),
                &fields,
                None,
            )),
            Err(e) => r.push(failed("invariance", "diagonal Poincaré action", e)),
        }
        r
    }

    fn tangency_check(&self, ctx: &Arc<Context>) -> Check {
        let run = || -> Result<Check> {
            let dc = DifferentialForm::differential(&self.ambient, &self.action)?;
            Ok(expect_zero(
                "tangency.lambda",
                "Λ̃(d((x−y)²), ·) = 0 on the constraint",
                self.reference_ambient.lambda().sharp(&dc),
                Some(ctx),
            ))
        };
        run().unwrap_or_else(|e| failed("tangency.lambda", "tangency", e))
    }

    fn table_checks(&self) -> Vec<Check> {
        let m = self.mass.text();
        let mut out = Vec::new();
        let mut entry = |l: String, rr: String, lt: String, rt: String, expected: String, reference: &str| {
            let id = format!("table.[{l},{rr}]");
            let c = (|| -> Result<Check> {
                let lhs = self.pair.bracket(&self.chart.expr(&lt)?, &self.chart.expr(&rt)?)?;
                let rhs = self.chart.expr(&expected)?;
                let c = expect_equal(id.clone(), reference, &lhs, &rhs);
                Ok(if c.passed() {
                    c
                } else {
                    c.with_measured(lhs.to_string())
                })
            })();
            out.push(c.unwrap_or_else(|e| failed(id, reference, e)));
        };
        for r in 0..4 {
            for s in r + 1..4 {
                entry(
                    format!("(x+y){r}"),
                    format!("(x+y){s}"),
                    format!("x{r} + y{r}"),
                    format!("x{s} + y{s}"),
                    format!("(2/{m}^2)*((x{r} + y{r})*(x{s} - y{s}) - (x{s} + y{s})*(x{r} - y{r}))"),
                    "[(x+y)^ρ, (x+y)^σ] = (2/m²)((x+y)^ρ(x−y)^σ − (x+y)^σ(x−y)^ρ)",
                );
            }
        }
        for r in 0..4 {
            for s in 0..4 {
                entry(
                    format!("(x+y){r}"),
                    format!("(x-y){s}"),
                    format!("x{r} + y{r}"),
                    format!("x{s} - y{s}"),
                    (2 * g2(r, s)).to_string(),
                    "[(x+y)^ρ, (x−y)^σ] = 2g^{ρσ}",
                );
            }
        }
        for r in 0..4 {
            for s in r + 1..4 {
                entry(
                    format!("(x-y){r}"),
                    format!("(x-y){s}"),
                    format!("x{r} - y{r}"),
                    format!("x{s} - y{s}"),
                    "0".into(),
                    "[(x−y)^ρ, (x−y)^σ] = 0",
                );
            }
        }
        out
    }

    fn hamilton_jacobi_check(&self) -> Check {
        let id = "hamilton-jacobi.normalization";
        let reference = "g^{μν}∂_μS∂_νS = c·m² on the constraint";
        let run = || -> Result<Check> {
            let v = self.hamilton_jacobi_value()?;
            let m2 = self.chart.expr(&format!("{}^2", self.mass.text()))?;
            let ratio = v.checked_div(&m2)?;
            Ok(match ratio.as_constant() {
                Some(c) => Check::measured(id, reference, format_scalar(&c)),
                None => Check::new(id, reference, Status::Fail).with_residual(v.to_string()),
            })
        };
        run().unwrap_or_else(|e| failed(id, reference, e))
    }

    fn generator_field_checks(&self, gens: &[Labelled]) -> Vec<Check> {
        let run = || -> Result<Vec<Check>> {
            let mut out = Vec::new();
            for ((label, f), (_, explicit)) in gens.iter().zip(self.diagonal_fields()?) {
                out.push(expect_graded_equal(
                    format!("hamiltonian.{label}"),
                    "X_G equals the diagonal Poincaré field",
                    &self.pair.hamiltonian_vector_field(f)?,
                    &explicit,
                    None,
                ));
            }
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![failed("hamiltonian", "Hamiltonian fields", e)])
    }

    /// One-point generators pulled back along the identification equal the
    /// two-point generators.
    fn consistency_check(&self, gens: &[Labelled]) -> Check {
        let id = "generators.one-point-consistency";
        let reference = "one-point generators pull back to the two-point generators";
        let run = || -> Result<Check> {
            let one = self.shell.generators()?;
            let mut bad = Vec::new();
            for ((label, f), (_, g)) in one.iter().zip(gens) {
                if self.identification.pullback_function(f)? != *g {
                    bad.push(label.clone());
                }
            }
            Ok(Check::verdict(id, reference, bad.is_empty(), || bad.join(", ")))
        };
        run().unwrap_or_else(|e| failed(id, reference, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_with_closed_form_pair() {
        let model = build_two_point(Mass::Symbolic).unwrap();
        assert_eq!(model.chart().dim(), 7);
        assert_eq!(model.pair(), model.reference_pair());
    }

    #[test]
    fn difference_is_reeb_invariant() {
        let model = build_two_point(Mass::Symbolic).unwrap();
        let d = model.chart().expr("x2 - y2").unwrap();
        assert!(model.pair().is_poisson_element(&d).unwrap());
    }

    #[test]
    fn only_the_mixed_relation_disagrees() {
        let model = build_two_point(Mass::Symbolic).unwrap();
        let report = model.verify();
        let fails: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(
            fails,
            [
                "table.[(x+y)0,(x-y)0]",
                "table.[(x+y)1,(x-y)1]",
                "table.[(x+y)2,(x-y)2]",
                "table.[(x+y)3,(x-y)3]"
            ]
        );
        let mixed = model.table().unwrap().get("s1", "d1").unwrap();
        assert_eq!(mixed, model.chart().expr("2").unwrap());
    }

    #[test]
    fn hamilton_jacobi_factor_is_four() {
        let model = build_two_point(Mass::Symbolic).unwrap();
        let v = model.hamilton_jacobi_value().unwrap();
        assert_eq!(v, model.chart().expr("4*m^2").unwrap());
    }
}
