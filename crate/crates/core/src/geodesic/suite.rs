//! Verification battery for geodesics, Jacobi fields and the point-functional
//! bracket.

use std::array;
use std::collections::HashMap;

use super::functional::{peierls_bracket, reparam_invariant, DeltaFunctional, Gauge};
use super::green::PiecewiseKernel;
use super::path::{bilinear, dot, lower, mat_vec, Geodesic, JacobiField, Placement, Vector4, PARAM};
use crate::algebra::{int, RatExpr};
use crate::error::Result;
use crate::models::common::{expect_equal, failed, g};
use crate::models::{build_lagrangian, LagrangianModel};
use crate::report::{timed, Check, Status, VerificationReport};

const FIELD_PARAMS: [&str; 16] = [
    "a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3", "c0", "c1", "c2", "c3", "d0", "d1", "d2", "d3",
];

fn symbols(geo: &Geodesic, prefix: &str) -> Result<Vector4> {
    let v = (0..4)
        .map(|mu| geo.expr(&format!("{prefix}{mu}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().expect("four components"))
}

fn zero_vector(geo: &Geodesic) -> Vector4 {
    array::from_fn(|_| RatExpr::zero(geo.context()))
}

fn all_zero(v: &[RatExpr]) -> bool {
    v.iter().all(RatExpr::is_zero)
}

fn d_ds(f: &RatExpr) -> Result<RatExpr> {
    f.partial_derivative_any(PARAM)
}

fn guard(id: &str, reference: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    timed(|| f().unwrap_or_else(|e| failed(id, reference, e)))
}

pub fn verify() -> VerificationReport {
    let mut r = VerificationReport::new("peierls");
    let geo = match Geodesic::symbolic(&[&FIELD_PARAMS[..], &["s1", "s2", "t"]].concat()) {
        Ok(g) => g,
        Err(e) => {
            r.push(failed("setup", "symbolic geodesic", e));
            return r;
        }
    };
    r.extend(projector_checks(&geo));
    r.extend(jacobi_field_checks(&geo));
    match build_lagrangian() {
        Ok(l) => {
            r.extend(omega_checks(&geo, Some(&l)));
            r.extend(bracket_checks(&geo, Some(&l)));
        }
        Err(e) => {
            r.push(failed("lagrangian", "velocity-space model", e));
            r.extend(omega_checks(&geo, None));
            r.extend(bracket_checks(&geo, None));
        }
    }
    r.extend(reparametrization_checks(&geo));
    r.extend(gauge_checks());
    r.extend(green_checks(&geo));
    r
}

fn rest_frame() -> Result<Geodesic> {
    Geodesic::from_values([0, 0, 0, 0].map(int), [1, 0, 0, 0].map(int), &[])
}

fn projector_checks(geo: &Geodesic) -> Vec<Check> {
    vec![
        guard(
            "projector.rest-frame",
            "P = diag(0, −1, −1, −1) for k = (1, 0, 0, 0)",
            || {
                let p = rest_frame()?.projector(Placement::Lower)?;
                let ok = (0..4).all(|mu| {
                    (0..4).all(|nu| p[mu][nu].as_constant() == Some(int(if mu == nu && mu > 0 { -1 } else { 0 })))
                });
                Ok(Check::verdict(
                    "projector.rest-frame",
                    "P = diag(0, −1, −1, −1)",
                    ok,
                    || format!("{p:?}"),
                ))
            },
        ),
        guard("projector.idempotent", "P^μ_ν P^ν_ρ = P^μ_ρ", || {
            let m = geo.projector(Placement::Mixed)?;
            let mut bad = Vec::new();
            for rho in 0..4 {
                let col: Vec<RatExpr> = (0..4).map(|nu| m[nu][rho].clone()).collect();
                let image = mat_vec(&m, &col)?;
                for mu in 0..4 {
                    if image[mu] != m[mu][rho] {
                        bad.push(format!("({mu},{rho})"));
                    }
                }
            }
            Ok(Check::verdict(
                "projector.idempotent",
                "P² = P mod k·k = 1",
                bad.is_empty(),
                || bad.join(", "),
            ))
        }),
        guard("projector.transverse", "P^{μν}k_ν = 0", || {
            let up = mat_vec(&geo.projector(Placement::Upper)?, &lower(geo.velocity()))?;
            let low = mat_vec(&geo.projector(Placement::Lower)?, geo.velocity())?;
            Ok(Check::verdict(
                "projector.transverse",
                "P^{μν}k_ν = 0",
                all_zero(&up) && all_zero(&low),
                || format!("{up:?}"),
            ))
        }),
        guard("projector.symmetric", "P_{μν} = P_{νμ}", || {
            let p = geo.projector(Placement::Lower)?;
            let ok = (0..4).all(|mu| (0..4).all(|nu| p[mu][nu] == p[nu][mu]));
            Ok(Check::verdict(
                "projector.symmetric",
                "P_{μν} = P_{νμ}",
                ok,
                String::new,
            ))
        }),
    ]
}

fn jacobi_field_checks(geo: &Geodesic) -> Vec<Check> {
    let mut out = Vec::new();
    let field = || -> Result<JacobiField> { Ok(JacobiField::new(symbols(geo, "a")?, symbols(geo, "b")?)) };
    out.push(guard(
        "jacobi-operator.affine",
        "P d²J/ds² = 0 for J = J₀ + sJ₀′",
        || {
            let j = field()?;
            let v = geo.jacobi_operator_apply(&j.at(&geo.param())?)?;
            Ok(Check::verdict(
                "jacobi-operator.affine",
                "P d²J/ds² = 0",
                all_zero(&v),
                || format!("{v:?}"),
            ))
        },
    ));
    out.push(guard("jacobi-operator.reeb", "P d²(s²k)/ds² = 0", || {
        let s2 = geo.expr("s^2")?;
        let v: Vec<RatExpr> = geo.velocity().iter().map(|k| k.try_mul(&s2)).collect::<Result<_>>()?;
        let img = geo.jacobi_operator_apply(&v.try_into().expect("four components"))?;
        Ok(Check::verdict(
            "jacobi-operator.reeb",
            "P d²(s²k)/ds² = 0",
            all_zero(&img),
            || format!("{img:?}"),
        ))
    }));
    out.push(guard(
        "jacobi-operator.transverse",
        "P d²(s²e)/ds² = 2Pe for e ⊥ k",
        || {
            let rest = rest_frame()?;
            let e = ["0", "s^2", "2*s^2", "0"].map(|t| rest.expr(t).expect("parses"));
            let img = rest.jacobi_operator_apply(&e)?;
            let expected = [0, -2, -4, 0];
            let ok = (0..4).all(|mu| img[mu].as_constant() == Some(int(expected[mu])));
            Ok(Check::verdict(
                "jacobi-operator.transverse",
                "P d²(s²e)/ds² = 2Pe",
                ok,
                || format!("{img:?}"),
            ))
        },
    ));
    out.push(guard("decomposition.along", "J = (as+b)k ⇒ J_⊥ = 0", || {
        let j = JacobiField::along(geo, &geo.expr("c0")?, &geo.expr("c1")?)?;
        let (perp, a, b) = geo.decompose_jacobi_field(&j)?;
        let ok = all_zero(&perp.initial) && all_zero(&perp.rate) && a == geo.expr("c0")? && b == geo.expr("c1")?;
        Ok(Check::verdict(
            "decomposition.along",
            "J = (as+b)k ⇒ J_⊥ = 0",
            ok,
            || format!("a = {a}, b = {b}"),
        ))
    }));
    out.push(guard(
        "decomposition.transverse",
        "constant J ⊥ k ⇒ a = b = 0",
        || {
            let rest = rest_frame()?;
            let j = JacobiField::new(
                ["0", "1", "-3", "7/2"].map(|t| rest.expr(t).expect("parses")),
                zero_vector(&rest),
            );
            let (perp, a, b) = rest.decompose_jacobi_field(&j)?;
            Ok(Check::verdict(
                "decomposition.transverse",
                "constant J ⊥ k ⇒ a = b = 0",
                a.is_zero() && b.is_zero() && perp == j,
                || format!("a = {a}, b = {b}"),
            ))
        },
    ));
    out.push(guard(
        "decomposition.reassembly",
        "J = J_⊥ + (as+b)k, ⟨J_⊥, k⟩ = 0",
        || {
            let j = field()?;
            let s = geo.param();
            let (perp, a, b) = geo.decompose_jacobi_field(&j)?;
            let tail = JacobiField::along(geo, &a, &b)?.at(&s)?;
            let p = perp.at(&s)?;
            let full = j.at(&s)?;
            let mut ok = dot(&p, geo.velocity())?.is_zero();
            for mu in 0..4 {
                ok &= p[mu].try_add(&tail[mu])? == full[mu];
            }
            Ok(Check::verdict(
                "decomposition.reassembly",
                "J = J_⊥ + (as+b)k",
                ok,
                String::new,
            ))
        },
    ));
    out.push(guard("theta.reeb", "Θ(γ)[γ̇] = 1", || {
        let v = geo.theta_eval(&JacobiField::new(geo.velocity().clone(), zero_vector(geo)))?;
        Ok(Check::verdict("theta.reeb", "Θ(γ)[γ̇] = 1", v.is_one(), || {
            v.to_string()
        }))
    }));
    out.push(guard("theta.kernel", "Θ(γ)[J_⊥] = 0", || {
        let (perp, _, _) = geo.decompose_jacobi_field(&field()?)?;
        let v = geo.theta_eval(&perp)?;
        Ok(Check::verdict("theta.kernel", "Θ(γ)[J_⊥] = 0", v.is_zero(), || {
            v.to_string()
        }))
    }));
    out.push(guard("theta.linearity", "Θ(γ)[k + e] = 1 for e ⊥ k", || {
        let rest = rest_frame()?;
        let j = JacobiField::new(
            ["1", "2", "0", "-5"].map(|t| rest.expr(t).expect("parses")),
            zero_vector(&rest),
        );
        let v = rest.theta_eval(&j)?;
        Ok(Check::verdict(
            "theta.linearity",
            "Θ(γ)[k + e] = 1",
            v.is_one(),
            || v.to_string(),
        ))
    }));
    out.push(guard(
        "theta.conserved",
        "d/ds Θ(γ)[J] = 0 for ⟨J′, k⟩ = 0",
        || {
            let (perp, _, _) = geo.decompose_jacobi_field(&field()?)?;
            let j = JacobiField::new(symbols(geo, "a")?, perp.rate);
            let v = geo.theta_eval(&j)?;
            let dv = d_ds(&v)?;
            Ok(Check::verdict("theta.conserved", "d/ds ⟨J, γ̇⟩ = 0", dv.is_zero(), || {
                dv.to_string()
            })
            .with_measured(v.to_string()))
        },
    ));
    out
}

/// `Ω(T₁, T₂)` for the velocity-space two-form at `x = x(0)`, `v = k`, with
/// `T = (J(0), J′(0))`.
fn lagrangian_omega(l: &LagrangianModel, geo: &Geodesic, j1: &JacobiField, j2: &JacobiField) -> Result<RatExpr> {
    let chart = l.velocity_space();
    let mut images = HashMap::new();
    for mu in 0..4 {
        images.insert(format!("x{mu}"), geo.base()[mu].clone());
        images.insert(format!("v{mu}"), geo.velocity()[mu].clone());
    }
    let component = |j: &JacobiField, a: usize| -> RatExpr {
        let name = chart.coord_name(a);
        let mu: usize = name[1..].parse().expect("indexed coordinate");
        if name.starts_with('x') {
            j.initial[mu].clone()
        } else {
            j.rate[mu].clone()
        }
    };
    let mut acc = RatExpr::zero(geo.context());
    for (idx, c) in l.omega().terms() {
        let c = c.substitute(&images, geo.context())?;
        let (a, b) = (idx[0], idx[1]);
        let pair = component(j1, a)
            .try_mul(&component(j2, b))?
            .try_sub(&component(j1, b).try_mul(&component(j2, a))?)?;
        acc = acc.try_add(&c.try_mul(&pair)?)?;
    }
    Ok(acc)
}

fn omega_checks(geo: &Geodesic, lagrangian: Option<&LagrangianModel>) -> Vec<Check> {
    let mut out = Vec::new();
    let fields = || -> Result<(JacobiField, JacobiField)> {
        Ok((
            JacobiField::new(symbols(geo, "a")?, symbols(geo, "b")?),
            JacobiField::new(symbols(geo, "c")?, symbols(geo, "d")?),
        ))
    };
    out.push(guard("omega.conserved", "d/ds Ω(J₁, J₂) = 0", || {
        let (j1, j2) = fields()?;
        let w = geo.omega_eval(&j1, &j2)?;
        let dw = d_ds(&w)?;
        Ok(Check::verdict(
            "omega.conserved",
            "d/ds Ω(J₁, J₂) = 0",
            dw.is_zero(),
            || dw.to_string(),
        ))
    }));
    out.push(guard(
        "omega.antisymmetric",
        "Ω(J₁, J₂) = −Ω(J₂, J₁)",
        || {
            let (j1, j2) = fields()?;
            let sum = geo.omega_eval(&j1, &j2)?.try_add(&geo.omega_eval(&j2, &j1)?)?;
            Ok(Check::verdict(
                "omega.antisymmetric",
                "Ω(J₁, J₂) = −Ω(J₂, J₁)",
                sum.is_zero(),
                || sum.to_string(),
            ))
        },
    ));
    out.push(guard("omega.degenerate", "Ω((as+b)γ̇, J) = 0", || {
        let (j1, _) = fields()?;
        let along = JacobiField::along(geo, &geo.expr("c0")?, &geo.expr("c1")?)?;
        let w = geo.omega_eval(&along, &j1)?;
        Ok(Check::verdict(
            "omega.degenerate",
            "Ω((as+b)γ̇, J) = 0",
            w.is_zero(),
            || w.to_string(),
        ))
    }));
    out.push(guard(
        "omega.constant-fields",
        "Ω(J₁, J₂) = 0 for constant fields",
        || {
            let j1 = JacobiField::new(symbols(geo, "a")?, zero_vector(geo));
            let j2 = JacobiField::new(symbols(geo, "c")?, zero_vector(geo));
            let w = geo.omega_eval(&j1, &j2)?;
            Ok(Check::verdict(
                "omega.constant-fields",
                "Ω = 0 for constant fields",
                w.is_zero(),
                || w.to_string(),
            ))
        },
    ));
    out.push(guard(
        "omega.transverse-pair",
        "Ω(e₁, s e₂) = e₁·P·e₂",
        || {
            let e1 = symbols(geo, "a")?;
            let e2 = symbols(geo, "c")?;
            let j1 = JacobiField::new(e1.clone(), zero_vector(geo));
            let j2 = JacobiField::new(zero_vector(geo), e2.clone());
            let w = geo.omega_eval(&j1, &j2)?;
            let expected = bilinear(&e1, &geo.projector(Placement::Lower)?, &e2)?;
            Ok(expect_equal(
                "omega.transverse-pair",
                "Ω(e₁, s e₂) = e₁·P·e₂",
                &w,
                &expected,
            ))
        },
    ));
    if let Some(l) = lagrangian {
        out.push(guard(
            "omega.initial-conditions",
            "Ω on Jacobi fields against P_{μν}dv^μ∧dx^ν on initial data",
            || {
                let (j1, j2) = fields()?;
                let w = geo.omega_eval(&j1, &j2)?;
                let reference = lagrangian_omega(l, geo, &j1, &j2)?;
                let id = "omega.initial-conditions";
                let text = "Ω on Jacobi fields against P_{μν}dv^μ∧dx^ν on initial data";
                Ok(if w == reference {
                    Check::new(id, text, Status::Pass).with_measured("1")
                } else if w == -&reference {
                    Check::measured(id, text, "-1")
                } else {
                    Check::new(id, text, Status::Fail).with_residual(w.try_sub(&reference)?.to_string())
                })
            },
        ));
    }
    out
}

fn coordinate(mu: usize, at: &str) -> Result<DeltaFunctional> {
    format!("x{mu} @ s={at}").parse()
}

fn bracket_checks(geo: &Geodesic, lagrangian: Option<&LagrangianModel>) -> Vec<Check> {
    let mut out = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let id = format!("bracket.closed-form.{mu}{nu}");
            let reference = "[x^μ@s₁, x^ν@s₂] = P^{μν}(s₁ − s₂) + x^μ(s₁)k^ν − x^ν(s₂)k^μ";
            out.push(guard(&id, reference, || {
                let got = peierls_bracket(geo, &coordinate(mu, "s1")?, &coordinate(nu, "s2")?, None)?;
                let p = if mu == nu { g(mu) } else { 0 };
                let expected = geo.expr(&format!(
                    "({p} - k{mu}*k{nu})*(s1 - s2) + (x{mu} + s1*k{mu})*k{nu} - (x{nu} + s2*k{nu})*k{mu}"
                ))?;
                Ok(expect_equal(&id, reference, &got, &expected))
            }));
        }
    }
    for mu in 0..4 {
        for nu in 0..4 {
            let id = format!("bracket.equal-parameters.{mu}{nu}");
            let reference = "[x^μ@s₁, x^ν@s₁] = x^μk^ν − x^νk^μ";
            out.push(guard(&id, reference, || {
                let got = peierls_bracket(geo, &coordinate(mu, "s1")?, &coordinate(nu, "s1")?, None)?;
                let expected = geo.expr(&format!("(x{mu} + s1*k{mu})*k{nu} - (x{nu} + s1*k{nu})*k{mu}"))?;
                Ok(expect_equal(&id, reference, &got, &expected))
            }));
        }
    }
    if let Some(l) = lagrangian {
        let shell = l.shell();
        for rho in 0..4 {
            for sigma in 0..4 {
                let id = format!("bracket.shell.{rho}{sigma}");
                let reference = "equal-parameter bracket = unit-mass shell [x^ρ, x^σ] at p = k";
                out.push(guard(&id, reference, || {
                    let c = shell.chart();
                    let v = shell
                        .pair()
                        .bracket(&c.expr(&format!("x{rho}"))?, &c.expr(&format!("x{sigma}"))?)?;
                    let x = geo.position_at(&geo.expr("s1")?)?;
                    let mut images = HashMap::new();
                    for mu in 0..4 {
                        images.insert(format!("x{mu}"), x[mu].clone());
                        images.insert(format!("p{mu}"), geo.velocity()[mu].clone());
                    }
                    let expected = v.substitute(&images, geo.context())?;
                    let got = peierls_bracket(geo, &coordinate(rho, "s1")?, &coordinate(sigma, "s1")?, None)?;
                    Ok(expect_equal(&id, reference, &got, &expected))
                }));
            }
        }
    }
    out.push(guard("bracket.antisymmetric", "[A, B] = −[B, A]", || {
        let a: DeltaFunctional = "x0*x2 - x3^2 @ s=1/3; x1 @ s=s2".parse()?;
        let b: DeltaFunctional = "x1^2*x0 @ s=s1; 2*x3 - x0 @ s=-4".parse()?;
        let sum = peierls_bracket(geo, &a, &b, None)?.try_add(&peierls_bracket(geo, &b, &a, None)?)?;
        Ok(Check::verdict(
            "bracket.antisymmetric",
            "[A, B] = −[B, A]",
            sum.is_zero(),
            || sum.to_string(),
        ))
    }));
    out.push(guard("bracket.self", "[A, A] = 0", || {
        let a: DeltaFunctional = "x0*x2 - x3^2 @ s=1/3; x1 @ s=s2".parse()?;
        let v = peierls_bracket(geo, &a, &a, None)?;
        Ok(Check::verdict("bracket.self", "[A, A] = 0", v.is_zero(), || {
            v.to_string()
        }))
    }));
    out
}

fn reparametrization_checks(geo: &Geodesic) -> Vec<Check> {
    vec![
        guard(
            "reparam.coordinate",
            "x^μ@s₁ is not reparametrization invariant",
            || {
                let inv = reparam_invariant(&coordinate(2, "s1")?, geo)?;
                Ok(Check::verdict(
                    "reparam.coordinate",
                    "x^μ@s₁ is not invariant",
                    !inv,
                    || "reported invariant".into(),
                ))
            },
        ),
        guard(
            "reparam.transverse-quadratic",
            "P_{μν}x^μx^ν@s₁ with x(s₁) ⊥ k is invariant",
            || {
                let rest = Geodesic::from_values([0, 0, 0, 0].map(int), [1, 0, 0, 0].map(int), &[])?;
                let a: DeltaFunctional = "-x1^2 - x2^2 - x3^2 @ s=2".parse()?;
                let boosted = Geodesic::from_values(
                    [int(0), int(1), int(-2), int(3)],
                    [5, 3, 0, 0].map(|n| int(n) / int(4)),
                    &[],
                )?;
                // P_{μν}x^μx^ν for k = (5, 3, 0, 0)/4 at a point with ⟨x, k⟩ = 0.
                let b: DeltaFunctional = "x0^2 - x1^2 - x2^2 - x3^2 - (5*x0 - 3*x1)^2/16 @ s=0".parse()?;
                let ok = reparam_invariant(&a, &rest)? && reparam_invariant(&b, &boosted)?;
                Ok(Check::verdict(
                    "reparam.transverse-quadratic",
                    "k·∂F = 2k·P·x = 0",
                    ok,
                    String::new,
                ))
            },
        ),
        guard("reparam.constant", "constant functionals are invariant", || {
            let inv = reparam_invariant(&"5/3 @ s=s1".parse()?, geo)?;
            Ok(Check::verdict(
                "reparam.constant",
                "constant functionals are invariant",
                inv,
                String::new,
            ))
        }),
    ]
}

fn gauge_checks() -> Vec<Check> {
    let reference = "Green-function kernel terms leave brackets of invariant functionals unchanged";
    vec![
        guard("gauge.invariant", reference, || {
            let geo = Geodesic::from_values(
                [int(1), int(0), int(2), int(-1)],
                [5, 3, 0, 0].map(|n| int(n) / int(4)),
                &["c1", "c2", "w0", "w1", "w2", "w3"],
            )?;
            let gauge = Gauge {
                c1: geo.expr("c1")?,
                c2: geo.expr("c2")?,
                w: ["w0", "w1", "w2", "w3"].map(|t| geo.expr(t).expect("declared")),
            };
            let a: DeltaFunctional = "(3*x0 - 5*x1)^2 @ s=1; x2*x3 @ s=-2".parse()?;
            let b: DeltaFunctional = "x2 @ s=1/2; (3*x0 - 5*x1)*x3 @ s=3".parse()?;
            let plain = peierls_bracket(&geo, &a, &b, None)?;
            let gauged = peierls_bracket(&geo, &a, &b, Some(&gauge))?;
            Ok(expect_equal("gauge.invariant", reference, &gauged, &plain))
        }),
        guard(
            "gauge.control",
            "kernel terms do change brackets of non-invariant functionals",
            || {
                let geo = Geodesic::from_values([0, 0, 0, 0].map(int), [1, 0, 0, 0].map(int), &[])?;
                let gauge = Gauge {
                    c1: RatExpr::one(geo.context()),
                    c2: RatExpr::zero(geo.context()),
                    w: ["0", "1", "0", "0"].map(|t| geo.expr(t).expect("parses")),
                };
                let a = coordinate(0, "1")?;
                let b = coordinate(1, "2")?;
                let d = peierls_bracket(&geo, &a, &b, Some(&gauge))?.try_sub(&peierls_bracket(&geo, &a, &b, None)?)?;
                Ok(Check::verdict(
                    "gauge.control",
                    "kernel terms change non-invariant brackets",
                    !d.is_zero(),
                    || "no change".into(),
                ))
            },
        ),
    ]
}

fn green_checks(geo: &Geodesic) -> Vec<Check> {
    let mut out = Vec::new();
    for (id, build) in [
        (
            "green.retarded",
            PiecewiseKernel::retarded as fn(&Geodesic, &RatExpr) -> Result<PiecewiseKernel>,
        ),
        ("green.advanced", PiecewiseKernel::advanced),
    ] {
        out.push(guard(id, "P d²G/ds² = P δ(s − s₀)", || {
            let kernel = build(geo, &geo.expr("t")?)?;
            let img = kernel.apply_jacobi_operator(geo)?;
            let smooth = img
                .before
                .iter()
                .chain(&img.after)
                .chain(&img.delta_prime)
                .flatten()
                .all(RatExpr::is_zero);
            let source = img.delta == geo.projector(Placement::Mixed)?;
            Ok(Check::verdict(
                id,
                "P d²G/ds² = P δ(s − s₀)",
                smooth && source,
                || format!("{:?}", img.delta),
            ))
        }));
    }
    out.push(guard("green.commutator", "P d²G̃/ds² = 0", || {
        let img = PiecewiseKernel::commutator(geo, &geo.expr("t")?)?.apply_jacobi_operator(geo)?;
        Ok(Check::verdict(
            "green.commutator",
            "P d²G̃/ds² = 0",
            img.is_zero(),
            String::new,
        ))
    }));
    out.push(guard(
        "green.antisymmetric",
        "G̃^{μν}(s, s′) = −G̃^{νμ}(s′, s)",
        || {
            let p = geo.projector(Placement::Upper)?;
            let fwd = geo.expr("s - t")?;
            let back = geo.expr("t - s")?;
            let mut ok = true;
            for mu in 0..4 {
                for nu in 0..4 {
                    ok &= p[mu][nu].try_mul(&fwd)?.try_add(&p[nu][mu].try_mul(&back)?)?.is_zero();
                }
            }
            Ok(Check::verdict(
                "green.antisymmetric",
                "G̃^{μν}(s, s′) = −G̃^{νμ}(s′, s)",
                ok,
                String::new,
            ))
        },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes() {
        let r = verify();
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(r.duplicate_ids().is_empty());
        assert_eq!(
            r.get("omega.initial-conditions").unwrap().measured.as_deref(),
            Some("-1")
        );
    }
}
