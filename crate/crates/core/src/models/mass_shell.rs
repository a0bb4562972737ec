//! The one-particle mass shell `p·p = m²` in the cotangent bundle of
//! Minkowski space, with its pulled-back Liouville form.

use std::sync::Arc;

use super::common::*;
use super::poincare::{self, Labelled};
use crate::algebra::expr::format_scalar;
use crate::algebra::{Context, RatExpr, Scalar};
use crate::contact::{verify_contact, BracketTable, CoefficientMode, ContactModel, JacobiPair, Witness};
use crate::error::{Error, Result};
use crate::exterior::{restrict_multivector, Chart, DifferentialForm, MultivectorField, SmoothMap};
use crate::report::{timed, Check, Status, VerificationReport};

pub(crate) fn names(prefix: &str) -> Vec<String> {
    (0..4).map(|mu| format!("{prefix}{mu}")).collect()
}

#[derive(Clone, Debug)]
pub struct MassShellModel {
    mass: Mass,
    ambient: Arc<Chart>,
    chart: Arc<Chart>,
    immersion: SmoothMap,
    theta0: DifferentialForm,
    contact: ContactModel,
    reference_ambient: JacobiPair,
    reference: JacobiPair,
    pair: JacobiPair,
    witness: Witness,
    corruption: Option<Corruption>,
}

/// Build the mass-shell model. Fails if the extracted pair differs from the
/// closed-form `(Λ_Σ, Γ)`.
pub fn build_mass_shell(mass: Mass) -> Result<MassShellModel> {
    mass.validate()?;
    let m = mass.text();
    let xs = names("x");
    let ps = names("p");
    let params = mass.params();
    let all: Vec<&str> = xs.iter().chain(&ps).map(String::as_str).collect();
    let ambient_ctx = Context::free(&all, &params);
    let shell_ctx = Context::builder()
        .coords(&xs)
        .dependent("p0", &format!("{m}^2 + p1^2 + p2^2 + p3^2"))
        .coords(&ps[1..])
        .params(&params)
        .build()?;
    let ambient = Chart::all("T*M", &ambient_ctx)?;
    let intrinsic: Vec<&String> = xs.iter().chain(&ps[1..]).collect();
    let chart = Chart::new("Sigma_m", &shell_ctx, &intrinsic)?;
    let immersion = SmoothMap::new(
        &chart,
        &ambient,
        all.iter()
            .map(|n| Ok((n.to_string(), RatExpr::var(&shell_ctx, n)?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let theta0 = DifferentialForm::parse("p0*d(x0) - p1*d(x1) - p2*d(x2) - p3*d(x3)", &ambient)?;
    let theta = immersion.pullback(&theta0)?;
    let witness = witness("p", &[]);
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
            "extracted Λ differs from the closed form by {d}"
        )));
    }
    Ok(MassShellModel {
        mass,
        ambient,
        chart,
        immersion,
        theta0,
        contact,
        reference_ambient,
        reference,
        pair,
        witness,
        corruption: None,
    })
}

/// `Λ = (g^{μν} − p^μ p^ν/m²) ∂_{p^μ}∧∂_{x^ν}`, `Γ = (p^μ/m²) ∂_{x^μ}` on the
/// ambient chart.
fn reference_pair(ambient: &Arc<Chart>, m: &str) -> Result<JacobiPair> {
    let mut lambda = Vec::new();
    let mut gamma = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let c = ambient.expr(&format!("{} - p{mu}*p{nu}/{m}^2", g2(mu, nu)))?;
            lambda.push((
                vec![
                    ambient.position(&format!("p{mu}"))?,
                    ambient.position(&format!("x{nu}"))?,
                ],
                c,
            ));
        }
        gamma.push((
            vec![ambient.position(&format!("x{mu}"))?],
            ambient.expr(&format!("p{mu}/{m}^2"))?,
        ));
    }
    JacobiPair::new(
        MultivectorField::from_terms(ambient, 2, lambda),
        MultivectorField::from_terms(ambient, 1, gamma),
    )
}

/// The volume expansion printed for the mass shell, on the ambient chart.
fn printed_volume(ambient: &Arc<Chart>) -> Result<DifferentialForm> {
    DifferentialForm::parse(
        "(p3*d(p0)/\\d(p1)/\\d(p2) - p2*d(p0)/\\d(p1)/\\d(p3) + p1*d(p0)/\\d(p2)/\\d(p3) + p0*d(p1)/\\d(p2)/\\d(p3))\
         /\\d(x0)/\\d(x1)/\\d(x2)/\\d(x3)",
        ambient,
    )
}

/// The constant `c` with `a = c·b`, if any.
pub(crate) fn constant_ratio(a: &DifferentialForm, b: &DifferentialForm) -> Result<Option<Scalar>> {
    let Some((idx, c)) = b.terms().into_iter().next() else {
        return Ok(None);
    };
    let r = a.get(&idx).checked_div(&c)?;
    let Some(r) = r.as_constant() else { return Ok(None) };
    let scaled = b.scale(&RatExpr::from_scalar(r.clone(), b.chart().context()));
    Ok(if a.sub(&scaled)?.is_zero() { Some(r) } else { None })
}

impl MassShellModel {
    pub fn mass(&self) -> &Mass {
        &self.mass
    }

    pub fn ambient(&self) -> &Arc<Chart> {
        &self.ambient
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn shell_context(&self) -> &Arc<Context> {
        self.chart.context()
    }

    pub fn immersion(&self) -> &SmoothMap {
        &self.immersion
    }

    pub fn liouville(&self) -> &DifferentialForm {
        &self.theta0
    }

    pub fn theta(&self) -> &DifferentialForm {
        self.contact.theta()
    }

    pub fn contact(&self) -> &ContactModel {
        &self.contact
    }

    /// The pair extracted from `θ_m`.
    pub fn pair(&self) -> &JacobiPair {
        &self.pair
    }

    /// The closed-form pair restricted to the intrinsic chart.
    pub fn reference_pair(&self) -> &JacobiPair {
        &self.reference
    }

    /// The closed-form pair on the ambient chart.
    pub fn reference_ambient(&self) -> &JacobiPair {
        &self.reference_ambient
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// A copy with one tensor deliberately altered, for negative controls.
    pub fn corrupted(&self, what: Corruption) -> Result<MassShellModel> {
        let mut out = self.clone();
        out.corruption = Some(what);
        let chart = &self.chart;
        match what {
            Corruption::Lambda => {
                let idx = [chart.position("p1")?, chart.position("x1")?];
                let flip = negate_component(self.pair.lambda(), &idx);
                out.pair = JacobiPair::new(flip, self.pair.gamma().clone())?;
            }
            Corruption::Gamma => {
                let idx = [chart.position("x0")?];
                let flip = negate_component(self.pair.gamma(), &idx);
                out.pair = JacobiPair::new(self.pair.lambda().clone(), flip)?;
            }
            Corruption::Theta => {
                let idx = [chart.position("x1")?];
                let theta = negate_component(self.contact.theta(), &idx);
                out.contact = verify_contact(chart, &theta, &self.witness)?;
                out.pair = out.contact.extract_jacobi_pair(CoefficientMode::Standard)?;
            }
        }
        Ok(out)
    }

    pub fn corruption(&self) -> Option<Corruption> {
        self.corruption
    }

    /// Coordinate functions `x^μ, p^μ` on the intrinsic chart.
    pub fn coordinate_functions(&self) -> Result<Vec<Labelled>> {
        names("x")
            .into_iter()
            .chain(names("p"))
            .map(|n| Ok((n.clone(), self.chart.expr(&n)?)))
            .collect()
    }

    pub fn table(&self) -> Result<BracketTable> {
        BracketTable::compute(&self.pair, &self.coordinate_functions()?)
    }

    pub fn generators(&self) -> Result<Vec<Labelled>> {
        let x: [String; 4] = std::array::from_fn(|mu| format!("x{mu}"));
        let p: [String; 4] = std::array::from_fn(|mu| format!("p{mu}"));
        poincare::poincare_generators(&self.chart, &x, &p)
    }

    /// Explicit generator fields on the ambient chart, restricted:
    /// `X_{P^μ} = g^{μμ}∂_{x^μ}` and
    /// `X_{M^{ρσ}} = g^{σσ}(x^ρ∂_{x^σ} + p^ρ∂_{p^σ}) − g^{ρρ}(x^σ∂_{x^ρ} + p^σ∂_{p^ρ})`.
    pub fn explicit_generator_fields(&self) -> Result<Vec<(String, MultivectorField)>> {
        let mut out = Vec::new();
        for mu in 0..4 {
            let text = format!("{}*@x{mu}", g(mu));
            out.push((format!("P{mu}"), self.restricted_field(&text)?));
        }
        for r in 0..4 {
            for s in r + 1..4 {
                let text = format!(
                    "{gs}*(x{r}*@x{s} + p{r}*@p{s}) - {gr}*(x{s}*@x{r} + p{s}*@p{r})",
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

    /// `c` such that the pullback of `f·θ_0` is `c·θ_m`, for `f` a function
    /// of `p·p` alone given on the ambient chart.
    pub fn conformal_invariance(&self, factor: &RatExpr) -> Result<RatExpr> {
        let amb = &self.ambient;
        for mu in 0..4 {
            if !factor.partial_derivative(&format!("x{mu}"))?.is_zero() {
                return Err(Error::NotCasimirFunction);
            }
        }
        for r in 0..4 {
            for s in r + 1..4 {
                let rot = MultivectorField::parse(&format!("{}*p{r}*@p{s} - {}*p{s}*@p{r}", g(s), g(r)), amb)?;
                if !rot.apply(factor)?.is_zero() {
                    return Err(Error::NotCasimirFunction);
                }
            }
        }
        let on_shell = self.immersion.pullback_function(factor)?;
        for a in 0..self.chart.dim() {
            if !on_shell.partial_derivative(self.chart.coord_name(a))?.is_zero() {
                return Err(Error::NotCasimirFunction);
            }
        }
        let pulled = self.immersion.pullback(&self.theta0.scale(factor))?;
        if pulled != self.theta().scale(&on_shell) {
            return Err(Error::Construction(
                "pullback of the rescaled form is not proportional to θ_m".into(),
            ));
        }
        Ok(on_shell)
    }

    /// Modes of the volume bracket formula that reproduce the bracket of the
    /// reference pair on all coordinate functions.
    pub fn agreeing_modes(&self) -> Result<Vec<CoefficientMode>> {
        let fs = self.coordinate_functions()?;
        let mut out = Vec::new();
        for mode in [CoefficientMode::Paper, CoefficientMode::Standard] {
            let mut ok = true;
            'pairs: for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let lhs = self.contact.bracket_from_volume(&fs[i].1, &fs[j].1, mode)?;
                    if lhs != self.reference.bracket(&fs[i].1, &fs[j].1)? {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                out.push(mode);
            }
        }
        Ok(out)
    }

    /// Every check for this model.
    pub fn verify(&self) -> VerificationReport {
        let mut r = VerificationReport::new("mass-shell");
        let shell = self.shell_context().clone();
        r.push(
            Check::new("contact", "θ_m∧(dθ_m)^3 ≠ 0", Status::Pass).with_measured(format!(
                "coefficient {}",
                self.contact
                    .volume()
                    .top_coefficient()
                    .map(|c| c.to_string())
                    .unwrap_or_default()
            )),
        );
        r.push(timed(|| self.volume_expansion_check()));
        r.push(timed(|| match self.contact.reeb_identity_holds(self.pair.gamma()) {
            Ok(ok) => Check::verdict("reeb.volume-identity", "i_Γ(θ∧(dθ)^n) = (dθ)^n", ok, || {
                "differs".into()
            }),
            Err(e) => failed("reeb.volume-identity", "i_Γ(θ∧(dθ)^n) = (dθ)^n", e),
        }));
        r.push(expect_graded_equal(
            "reeb.closed-form",
            "Γ = (p^μ/m²)∂_{x^μ}",
            self.pair.gamma(),
            self.reference.gamma(),
            None,
        ));
        r.push(expect_graded_equal(
            "lambda.closed-form",
            "Λ = (g^{μν} − p^μp^ν/m²)∂_{p^μ}∧∂_{x^ν}",
            self.pair.lambda(),
            self.reference.lambda(),
            None,
        ));
        r.push(timed(|| self.contraction_check()));
        r.extend(self.tangency_checks(&shell));
        match self.pair.verify_structure_equations("structure.intrinsic", None) {
            Ok(cs) => r.extend(cs),
            Err(e) => r.push(failed("structure.intrinsic", "structure equations", e)),
        }
        match self
            .reference_ambient
            .verify_structure_equations("structure.ambient", Some(&shell))
        {
            Ok(cs) => r.extend(cs),
            Err(e) => r.push(failed("structure.ambient", "structure equations", e)),
        }
        r.extend(self.table_checks());
        r.push(timed(|| self.jacobi_check()));
        r.extend(self.hamiltonian_checks());
        match self.generators() {
            Ok(gens) => {
                r.extend(poincare::closure_checks(&self.pair, &gens));
                match poincare::generator_fields(&self.pair, &gens) {
                    Ok(fields) => r.extend(poincare::invariance_checks(
                        &self.pair,
                        Some(self.theta()),
                        &fields,
                        None,
                    )),
                    Err(e) => r.push(failed("invariance", "L_X θ = L_X Λ = L_X Γ = 0", e)),
                }
            }
            Err(e) => r.push(failed("algebra", "Poincaré generators", e)),
        }
        r.push(timed(|| self.negative_control()));
        r.extend(self.conformal_checks());
        r.push(timed(|| self.mode_check()));
        r
    }

    fn volume_expansion_check(&self) -> Check {
        let id = "contact.volume-expansion";
        let reference = "θ∧(dθ)^3 matches the printed expansion up to sign";
        let run = || -> Result<Check> {
            let dtheta = self.theta0.exterior_derivative()?;
            let vol = self.theta0.wedge(&dtheta.wedge_power(3)?)?;
            let printed = printed_volume(&self.ambient)?;
            let ratio = constant_ratio(&vol, &printed)?;
            let ok = ratio
                .as_ref()
                .is_some_and(|c| c.numer().magnitude() == c.denom().magnitude());
            let measured = match &ratio {
                Some(c) => format!("ratio {}", format_scalar(c)),
                None => format!("not proportional; computed {vol}"),
            };
            Ok(Check::verdict(id, reference, ok, || format!("computed {vol}")).with_measured(measured))
        };
        run().unwrap_or_else(|e| failed(id, reference, e))
    }

    fn contraction_check(&self) -> Check {
        let id = "lambda.volume-contraction";
        let reference = "i_Λ(θ∧(dθ)^n) = n θ∧(dθ)^{n−1}";
        match self.contact.bivector_contraction_factor(self.pair.lambda()) {
            Ok(Some(f)) if f == crate::algebra::int(self.contact.n() as i64) => {
                Check::new(id, reference, Status::Pass).with_measured(format_scalar(&f))
            }
            Ok(Some(f)) => Check::measured(id, reference, format_scalar(&f)),
            Ok(None) => Check::new(id, reference, Status::Fail).with_residual("not proportional"),
            Err(e) => failed(id, reference, e),
        }
    }

    fn tangency_checks(&self, shell: &Arc<Context>) -> Vec<Check> {
        let run = || -> Result<Vec<Check>> {
            let amb = &self.ambient;
            let casimir = amb.expr("p0^2 - p1^2 - p2^2 - p3^2")?;
            let dc = DifferentialForm::differential(amb, &casimir)?;
            let lam = expect_zero(
                "tangency.lambda",
                "Λ(d(p·p), ·) = 0 on the shell",
                self.reference_ambient.lambda().sharp(&dc),
                Some(shell),
            );
            let gam = expect_equal(
                "tangency.gamma",
                "Γ(p·p) = 0",
                &self.reference_ambient.gamma().apply(&casimir)?,
                &RatExpr::zero(amb.context()),
            );
            Ok(vec![lam, gam])
        };
        run().unwrap_or_else(|e| vec![failed("tangency", "tangency", e)])
    }

    fn table_checks(&self) -> Vec<Check> {
        let m = self.mass.text();
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
                    format!("(x{r}*p{s} - x{s}*p{r})/{m}^2"),
                    "[x^ρ, x^σ] = (x^ρp^σ − x^σp^ρ)/m²",
                );
            }
        }
        for r in 0..4 {
            for s in 0..4 {
                entry(
                    format!("p{r}"),
                    format!("x{s}"),
                    g2(r, s).to_string(),
                    "[p^ρ, x^σ] = g^{ρσ}",
                );
            }
        }
        for r in 0..4 {
            for s in r + 1..4 {
                entry(format!("p{r}"), format!("p{s}"), "0".into(), "[p^ρ, p^σ] = 0");
            }
        }
        out
    }

    fn jacobi_check(&self) -> Check {
        let id = "jacobi-identity";
        let reference = "[f,[g,h]] = [[f,g],h] + [g,[f,h]]";
        let run = || -> Result<Check> {
            let fs = ["x0", "x1", "p0", "p1", "x0*p1"]
                .iter()
                .map(|t| self.chart.expr(t))
                .collect::<Result<Vec<_>>>()?;
            let checks = self.pair.verify_jacobi_identity("jacobi", &fs)?;
            let bad: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.id.clone()).collect();
            Ok(Check::verdict(id, reference, bad.is_empty(), || bad.join(", "))
                .with_measured(format!("{} triples", checks.len())))
        };
        run().unwrap_or_else(|e| failed(id, reference, e))
    }

    fn hamiltonian_checks(&self) -> Vec<Check> {
        let run = || -> Result<Vec<Check>> {
            let mut out = Vec::new();
            let one = RatExpr::one(self.chart.context());
            out.push(expect_graded_equal(
                "hamiltonian.unit",
                "X_1 = Γ",
                &self.pair.hamiltonian_vector_field(&one)?,
                self.pair.gamma(),
                None,
            ));
            let gens = self.generators()?;
            for ((label, f), (_, explicit)) in gens.iter().zip(self.explicit_generator_fields()?) {
                out.push(expect_graded_equal(
                    format!("hamiltonian.{label}"),
                    "X_G equals the explicit Poincaré field",
                    &self.pair.hamiltonian_vector_field(f)?,
                    &explicit,
                    None,
                ));
            }
            let fs = ["x0", "p1", "x0*p1"]
                .iter()
                .map(|t| self.chart.expr(t))
                .collect::<Result<Vec<_>>>()?;
            let mut ok = true;
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let xi = self.pair.hamiltonian_vector_field(&fs[i])?;
                    let xj = self.pair.hamiltonian_vector_field(&fs[j])?;
                    let lhs = xi.schouten(&xj)?;
                    let rhs = self
                        .pair
                        .hamiltonian_vector_field(&self.pair.bracket(&fs[i], &fs[j])?)?;
                    ok &= lhs == rhs;
                }
            }
            out.push(Check::verdict(
                "hamiltonian.homomorphism",
                "[X_f, X_g] = X_{[f,g]}",
                ok,
                || "differs".into(),
            ));
            let leib = self.pair.leibniz_defect(&fs[0], &fs[1], &fs[2])?;
            out.push(expect_equal(
                "leibniz",
                "[f,gh] = [f,g]h + g[f,h] − [f,1]gh",
                &leib,
                &RatExpr::zero(self.chart.context()),
            ));
            let x0 = self.chart.expr("x0")?;
            out.push(Check::verdict(
                "poisson-element.x0",
                "x^0 is not Reeb invariant",
                !self.pair.is_poisson_element(&x0)?,
                || "Γ(x^0) = 0".into(),
            ));
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![failed("hamiltonian", "Hamiltonian fields", e)])
    }

    /// A boost without its momentum part must not preserve Λ.
    fn negative_control(&self) -> Check {
        let id = "invariance.negative-control";
        let reference = "a truncated boost fails L_X Λ = 0";
        match self.restricted_field("-(x0*@x1) - x1*@x0") {
            Ok(x) => poincare::expect_nonzero(id, reference, self.pair.lambda().lie_derivative(&x)),
            Err(e) => failed(id, reference, e),
        }
    }

    fn conformal_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for (i, text) in ["p0^2 - p1^2 - p2^2 - p3^2", "1 + (p0^2 - p1^2 - p2^2 - p3^2)^2"]
            .iter()
            .enumerate()
        {
            let id = format!("conformal.{i}");
            let reference = "f(p·p)θ_0 pulls back to a constant multiple of θ_m";
            let c = self
                .ambient
                .expr(text)
                .and_then(|f| self.conformal_invariance(&f))
                .map(|c| Check::new(id.clone(), reference, Status::Pass).with_measured(c.to_string()));
            out.push(c.unwrap_or_else(|e| failed(id, reference, e)));
        }
        out
    }

    fn mode_check(&self) -> Check {
        let id = "bracket-formula.mode";
        let reference = "exactly one volume-formula coefficient reproduces the bracket";
        match self.agreeing_modes() {
            Ok(modes) => {
                let names: Vec<&str> = modes.iter().map(|m| m.as_str()).collect();
                Check::verdict(id, reference, modes.len() == 1, || format!("agreeing modes: {names:?}"))
                    .with_measured(names.join(","))
            }
            Err(e) => failed(id, reference, e),
        }
    }
}

fn negate_component<K: crate::exterior::graded::Kind>(
    t: &crate::exterior::Graded<K>,
    idx: &[usize],
) -> crate::exterior::Graded<K> {
    let c = t.get(idx);
    let two = RatExpr::from_integer(2, t.chart().context());
    let delta = crate::exterior::Graded::<K>::basis(t.chart(), idx).scale(&(&c * &two));
    t.sub(&delta).expect("same chart")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_matches_closed_form() {
        let model = build_mass_shell(Mass::Symbolic).unwrap();
        assert_eq!(model.chart().dim(), 7);
        assert_eq!(model.pair(), model.reference_pair());
    }

    #[test]
    fn coordinate_bracket_prints_in_normal_form() {
        let model = build_mass_shell(Mass::Symbolic).unwrap();
        let t = model.table().unwrap();
        assert_eq!(t.get("x0", "x1").unwrap().to_string(), "(x0*p1 - x1*p0)/m^2");
    }

    #[test]
    fn non_casimir_factor_rejected() {
        let model = build_mass_shell(Mass::Value(crate::algebra::int(1))).unwrap();
        let f = model.ambient().expr("p1").unwrap();
        assert_eq!(model.conformal_invariance(&f), Err(Error::NotCasimirFunction));
        let f = model.ambient().expr("x0*p0").unwrap();
        assert_eq!(model.conformal_invariance(&f), Err(Error::NotCasimirFunction));
    }

    #[test]
    fn only_the_printed_volume_expansion_fails() {
        let model = build_mass_shell(Mass::Symbolic).unwrap();
        let report = model.verify();
        let fails: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(fails, ["contact.volume-expansion"]);
        assert!(report.duplicate_ids().is_empty());
        assert_eq!(
            report.get("bracket-formula.mode").unwrap().measured.as_deref(),
            Some("standard")
        );
    }

    #[test]
    fn corrupted_lambda_is_detected() {
        let model = build_mass_shell(Mass::Symbolic)
            .unwrap()
            .corrupted(Corruption::Lambda)
            .unwrap();
        assert!(!model.verify().all_passed());
    }

    #[test]
    fn zero_mass_rejected() {
        assert!(build_mass_shell(Mass::Value(crate::algebra::int(0))).is_err());
    }
}
