//! The free-particle Lagrangian `L = √(v·v)` on the tangent bundle, restricted
//! to unit velocities.

use std::collections::HashMap;
use std::sync::Arc;

use super::common::*;
use super::mass_shell::{build_mass_shell, names, MassShellModel};
use crate::algebra::{int, Context, RatExpr};
use crate::contact::{verify_contact, BracketTable, CoefficientMode, ContactModel, JacobiPair, Witness};
use crate::error::{Error, Result};
use crate::exterior::{Chart, DifferentialForm, MultivectorField, SmoothMap};
use crate::report::{Check, Status, VerificationReport};

#[derive(Clone, Debug)]
pub struct LagrangianModel {
    ambient: Arc<Chart>,
    velocity_space: Arc<Chart>,
    chart: Arc<Chart>,
    theta_l: DifferentialForm,
    big_theta: DifferentialForm,
    omega: DifferentialForm,
    contact: ContactModel,
    pair: JacobiPair,
    shell: MassShellModel,
    witness: Witness,
}

fn momentum_to_velocity() -> HashMap<String, String> {
    (0..4).map(|mu| (format!("p{mu}"), format!("v{mu}"))).collect()
}

/// Build the Lagrangian model on `v·v = 1`. Fails if `θ_L` does not reduce
/// to `Θ`, if `dΘ ≠ Ω`, or if the extracted pair differs from the unit-mass
/// shell pair with `p` renamed to `v`.
pub fn build_lagrangian() -> Result<LagrangianModel> {
    let xs = names("x");
    let vs = names("v");
    let tangent = Context::builder()
        .coords(&xs)
        .coords(&vs)
        .dependent("L", "v0^2 - v1^2 - v2^2 - v3^2")
        .build()?;
    let ambient = Chart::new("TM", &tangent, &xs.iter().chain(&vs).collect::<Vec<_>>())?;
    let all: Vec<&str> = xs.iter().chain(&vs).map(String::as_str).collect();
    let free = Context::free(&all, &[]);
    let velocity_space = Chart::all("TM0", &free)?;
    let unit = Context::builder()
        .coords(&xs)
        .dependent("v0", "1 + v1^2 + v2^2 + v3^2")
        .coords(&vs[1..])
        .build()?;
    let chart = Chart::new("Sigma_L", &unit, &xs.iter().chain(&vs[1..]).collect::<Vec<_>>())?;

    let mut images: Vec<(String, RatExpr)> = all
        .iter()
        .map(|n| Ok((n.to_string(), RatExpr::var(&unit, n)?)))
        .collect::<Result<_>>()?;
    let to_velocity_space = SmoothMap::new(&chart, &velocity_space, images.clone())?;
    images.push(("L".into(), RatExpr::one(&unit)));
    let to_tangent = SmoothMap::new(&chart, &ambient, images)?;

    let theta_l = DifferentialForm::parse("(v0*d(x0) - v1*d(x1) - v2*d(x2) - v3*d(x3))/L", &ambient)?;
    let theta = to_tangent.pullback(&theta_l)?;
    let big_theta = DifferentialForm::parse("v0*d(x0) - v1*d(x1) - v2*d(x2) - v3*d(x3)", &chart)?;
    if theta != big_theta {
        return Err(Error::Construction("θ_L does not reduce to Θ at L = 1".into()));
    }
    let mut omega_terms = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let c = velocity_space.expr(&format!("{} - ({})*({})*v{mu}*v{nu}", g2(mu, nu), g(mu), g(nu)))?;
            omega_terms.push((
                vec![
                    velocity_space.position(&format!("v{mu}"))?,
                    velocity_space.position(&format!("x{nu}"))?,
                ],
                c,
            ));
        }
    }
    let omega_free = DifferentialForm::from_terms(&velocity_space, 2, omega_terms);
    let omega = to_velocity_space.pullback(&omega_free)?;
    if big_theta.exterior_derivative()? != omega {
        return Err(Error::Construction("dΘ differs from Ω on v·v = 1".into()));
    }
    let witness = witness("v", &[]);
    let contact = verify_contact(&chart, &theta, &witness)?;
    let pair = contact.extract_jacobi_pair(CoefficientMode::Standard)?;
    let shell = build_mass_shell(Mass::Value(int(1)))?;
    let model = LagrangianModel {
        ambient,
        velocity_space,
        chart,
        theta_l,
        big_theta,
        omega: omega_free,
        contact,
        pair,
        shell,
        witness,
    };
    if model.transported_shell_pair()? != model.pair {
        return Err(Error::Construction(
            "extracted pair differs from the unit-mass shell pair".into(),
        ));
    }
    Ok(model)
}

impl LagrangianModel {
    /// Chart `(x, v)` with `L` algebraic, `L² = v·v`.
    pub fn ambient(&self) -> &Arc<Chart> {
        &self.ambient
    }

    /// Chart `(x, v)` without constraints, where `Ω` is defined.
    pub fn velocity_space(&self) -> &Arc<Chart> {
        &self.velocity_space
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn unit_context(&self) -> &Arc<Context> {
        self.chart.context()
    }

    pub fn theta_l(&self) -> &DifferentialForm {
        &self.theta_l
    }

    /// `Θ = g_{μν} v^ν dx^μ` on the unit-velocity chart.
    pub fn big_theta(&self) -> &DifferentialForm {
        &self.big_theta
    }

    /// `Ω = P_{μν} dv^μ∧dx^ν` on the velocity space.
    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn contact(&self) -> &ContactModel {
        &self.contact
    }

    pub fn pair(&self) -> &JacobiPair {
        &self.pair
    }

    /// The unit-mass shell the pair is compared against.
    pub fn shell(&self) -> &MassShellModel {
        &self.shell
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// The unit-mass shell pair with `p` renamed to `v`.
    pub fn transported_shell_pair(&self) -> Result<JacobiPair> {
        let rename = momentum_to_velocity();
        let values = HashMap::new();
        JacobiPair::new(
            transport(self.shell.pair().lambda(), &self.chart, &rename, &values)?,
            transport(self.shell.pair().gamma(), &self.chart, &rename, &values)?,
        )
    }

    pub fn coordinate_functions(&self) -> Result<Vec<(String, RatExpr)>> {
        names("x")
            .into_iter()
            .chain(names("v"))
            .map(|n| Ok((n.clone(), self.chart.expr(&n)?)))
            .collect()
    }

    pub fn table(&self) -> Result<BracketTable> {
        BracketTable::compute(&self.pair, &self.coordinate_functions()?)
    }

    pub fn verify(&self) -> VerificationReport {
        let mut r = VerificationReport::new("lagrangian");
        let unit = self.unit_context().clone();
        r.push(Check::new("contact", "Θ∧(dΘ)^3 ≠ 0", Status::Pass));
        r.extend(self.form_checks(&unit));
        r.extend(self.transport_checks());
        match self.pair.verify_structure_equations("structure", None) {
            Ok(cs) => r.extend(cs),
            Err(e) => r.push(failed("structure", "structure equations", e)),
        }
        r.extend(self.table_checks());
        r
    }

    fn form_checks(&self, unit: &Arc<Context>) -> Vec<Check> {
        let run = || -> Result<Vec<Check>> {
            let to_free = SmoothMap::new(
                &self.chart,
                &self.velocity_space,
                self.velocity_space
                    .coord_names()
                    .into_iter()
                    .map(|n| Ok((n.clone(), RatExpr::var(unit, &n)?)))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let mut out = Vec::new();
            out.push(expect_graded_equal(
                "theta.reduces",
                "θ_L = Θ at L = 1",
                &SmoothMap::new(
                    &self.chart,
                    &self.ambient,
                    self.ambient
                        .coord_names()
                        .into_iter()
                        .map(|n| Ok((n.clone(), RatExpr::var(unit, &n)?)))
                        .chain(std::iter::once(Ok(("L".to_string(), RatExpr::one(unit)))))
                        .collect::<Result<Vec<_>>>()?,
                )?
                .pullback(&self.theta_l)?,
                &self.big_theta,
                None,
            ));
            let vdv = DifferentialForm::parse("v0*d(v0) - v1*d(v1) - v2*d(v2) - v3*d(v3)", &self.velocity_space)?;
            out.push(expect_zero(
                "unit.v-dv",
                "v_μ dv^μ = 0 on v·v = 1",
                to_free.pullback(&vdv),
                None,
            ));
            out.push(expect_graded_equal(
                "omega.exact",
                "dΘ = Ω on v·v = 1",
                &self.big_theta.exterior_derivative()?,
                &to_free.pullback(&self.omega)?,
                None,
            ));
            let vx = MultivectorField::parse("v0*@x0 + v1*@x1 + v2*@x2 + v3*@x3", &self.velocity_space)?;
            let vv = MultivectorField::parse("v0*@v0 + v1*@v1 + v2*@v2 + v3*@v3", &self.velocity_space)?;
            out.push(expect_zero(
                "omega.kernel.x",
                "i_{v·∂_x} Ω = 0 on v·v = 1",
                self.omega.interior_vector(&vx),
                Some(unit),
            ));
            out.push(expect_zero(
                "omega.kernel.v",
                "i_{v·∂_v} Ω = 0 on v·v = 1",
                self.omega.interior_vector(&vv),
                Some(unit),
            ));
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![failed("forms", "Θ and Ω", e)])
    }

    fn transport_checks(&self) -> Vec<Check> {
        let run = || -> Result<Vec<Check>> {
            let rename = momentum_to_velocity();
            let values = HashMap::new();
            let shell_pair = self.transported_shell_pair()?;
            let theta = transport(self.shell.theta(), &self.chart, &rename, &values)?;
            let mut out = vec![
                expect_graded_equal("shell.theta", "θ_m (m = 1, p ↦ v) = Θ", &theta, &self.big_theta, None),
                expect_graded_equal(
                    "shell.lambda",
                    "Λ_Σ (m = 1, p ↦ v) = Λ",
                    shell_pair.lambda(),
                    self.pair.lambda(),
                    None,
                ),
                expect_graded_equal(
                    "shell.gamma",
                    "Γ (m = 1, p ↦ v) = Γ",
                    shell_pair.gamma(),
                    self.pair.gamma(),
                    None,
                ),
            ];
            let shell_table = self.shell.table()?;
            let table = self.table()?;
            let mut bad = Vec::new();
            for (e, f) in shell_table.entries.iter().zip(&table.entries) {
                if transport_function(&e.value, &self.chart, &rename, &values)? != f.value {
                    bad.push(format!("[{}, {}]", f.left, f.right));
                }
            }
            out.push(Check::verdict(
                "shell.table",
                "bracket table (m = 1, p ↦ v)",
                bad.is_empty(),
                || bad.join(", "),
            ));
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![failed("shell", "unit-mass shell comparison", e)])
    }

    fn table_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let mut entry = |l: String, rr: String, expected: String, reference: &str| {
            let id = format!("table.[{l},{rr}]");
            let c = (|| -> Result<Check> {
                let lhs = self.pair.bracket(&self.chart.expr(&l)?, &self.chart.expr(&rr)?)?;
                Ok(expect_equal(id.clone(), reference, &lhs, &self.chart.expr(&expected)?))
            })();
            out.push(c.unwrap_or_else(|e| failed(id, reference, e)));
        };
        for r in 0..4 {
            for s in r + 1..4 {
                entry(
                    format!("x{r}"),
                    format!("x{s}"),
                    format!("x{r}*v{s} - x{s}*v{r}"),
                    "[x^ρ, x^σ] = x^ρv^σ − x^σv^ρ",
                );
            }
        }
        for r in 0..4 {
            for s in 0..4 {
                entry(
                    format!("v{r}"),
                    format!("x{s}"),
                    g2(r, s).to_string(),
                    "[v^ρ, x^σ] = g^{ρσ}",
                );
            }
        }
        for r in 0..4 {
            for s in r + 1..4 {
                entry(format!("v{r}"), format!("v{s}"), "0".into(), "[v^ρ, v^σ] = 0");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrangian_matches_unit_shell() {
        let model = build_lagrangian().unwrap();
        let report = model.verify();
        assert!(report.all_passed(), "{}", report.to_text());
        assert_eq!(report.get("omega.kernel.x").unwrap().status, Status::PassModConstraint);
    }

    #[test]
    fn position_bracket_has_unit_mass() {
        let model = build_lagrangian().unwrap();
        let t = model.table().unwrap();
        assert_eq!(t.get("x0", "x1").unwrap(), model.chart().expr("x0*v1 - x1*v0").unwrap());
    }
}
