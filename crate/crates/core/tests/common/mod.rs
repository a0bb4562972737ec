//! Random instances and property predicates shared by the property suite and
//! the acceptance battery.
#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use proptest::sample::subsequence;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestRng, TestRunner};

use jacobi_core::algebra::{int, Context, MultiPoly, RatExpr, Scalar};
use jacobi_core::contact::JacobiPair;
use jacobi_core::exterior::{Chart, DifferentialForm, MultivectorField, SmoothMap};
use jacobi_core::geodesic::{peierls_bracket, reparam_invariant, DeltaFunctional, Gauge, Geodesic, JacobiField};
use jacobi_core::models::{build_mass_shell, Mass, MassShellModel};
use jacobi_core::operators::{iterated_symbol, plane_wave_conjugation, DifferentialOperator};
use jacobi_core::Result;

pub const SEED: u64 = 0x6a61_636f_6269;
pub const CASES: u32 = 64;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

/// `n` values drawn from `strategy` with the fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::new_with_rng(config(), TestRng::from_seed(RngAlgorithm::ChaCha, &seed_bytes()));
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy generates").current())
        .collect()
}

fn seed_bytes() -> [u8; 32] {
    let mut out = [0u8; 32];
    for (i, chunk) in out.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&(SEED.wrapping_add(i as u64)).to_le_bytes());
    }
    out
}

/// Sparse polynomial: `(coefficient, exponents)` pairs.
pub type Terms = Vec<(i64, Vec<u16>)>;

pub fn terms(nvars: usize, max_deg: u16, max_terms: usize) -> impl Strategy<Value = Terms> + Clone {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_deg, nvars)), 1..=max_terms)
}

pub fn poly_text(names: &[&str], t: &Terms) -> String {
    let mut parts = Vec::new();
    for (c, exps) in t {
        let mut s = format!("({c})");
        for (name, &e) in names.iter().zip(exps) {
            if e > 0 {
                s.push_str(&format!("*{name}^{e}"));
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

pub fn poly(chart: &Arc<Chart>, names: &[&str], t: &Terms) -> RatExpr {
    chart.expr(&poly_text(names, t)).expect("generated polynomial parses")
}

pub fn free_chart(name: &str, coords: &[&str]) -> Arc<Chart> {
    Chart::all(name, &Context::free(coords, &[])).expect("free chart")
}

pub const X4: [&str; 4] = ["x0", "x1", "x2", "x3"];
pub const U3: [&str; 3] = ["u0", "u1", "u2"];

/// `Σ_I f_I dx^I` of a fixed degree.
pub type GradedSpec = Vec<(Vec<usize>, Terms)>;

pub fn graded(n: usize, degree: usize, max_deg: u16) -> impl Strategy<Value = GradedSpec> + Clone {
    prop::collection::vec(
        (subsequence((0..n).collect::<Vec<_>>(), degree), terms(n, max_deg, 2)),
        1..=3,
    )
}

pub fn build_form(chart: &Arc<Chart>, names: &[&str], spec: &GradedSpec) -> DifferentialForm {
    let degree = spec.first().map_or(0, |(i, _)| i.len());
    DifferentialForm::from_terms(
        chart,
        degree,
        spec.iter().map(|(i, t)| (i.clone(), poly(chart, names, t))),
    )
}

pub fn build_multivector(chart: &Arc<Chart>, names: &[&str], spec: &GradedSpec) -> MultivectorField {
    let degree = spec.first().map_or(0, |(i, _)| i.len());
    MultivectorField::from_terms(
        chart,
        degree,
        spec.iter().map(|(i, t)| (i.clone(), poly(chart, names, t))),
    )
}

/// A form of degree 0..=3 on `R^4`.
pub fn form4() -> impl Strategy<Value = GradedSpec> {
    (0usize..=3).prop_flat_map(|k| graded(4, k, 2))
}

/// A multivector field of degree 1 or 2 on `R^3`.
pub fn multivector3() -> impl Strategy<Value = GradedSpec> + Clone {
    prop_oneof![graded(3, 1, 2), graded(3, 2, 2)]
}

pub fn d_squared_vanishes(spec: &GradedSpec) -> Result<bool> {
    let c = free_chart("R4", &X4);
    let a = build_form(&c, &X4, spec);
    Ok(a.exterior_derivative()?.exterior_derivative()?.is_zero())
}

/// `F*(dα) = d(F*α)` for a polynomial map `F: R^3 → R^4`.
pub fn pullback_commutes(images: &[Terms], spec: &GradedSpec) -> Result<bool> {
    let src = free_chart("R3", &U3);
    let dst = free_chart("R4", &X4);
    let map = SmoothMap::new(
        &src,
        &dst,
        X4.iter().zip(images).map(|(x, t)| (x.to_string(), poly(&src, &U3, t))),
    )?;
    let a = build_form(&dst, &X4, spec);
    Ok(map.pullback(&a.exterior_derivative()?)? == map.pullback(&a)?.exterior_derivative()?)
}

/// The graded-convention bracket `(−1)^{p−1} [P, Q]` built from the public one.
fn graded_schouten(p: &MultivectorField, q: &MultivectorField) -> Result<MultivectorField> {
    let s = p.schouten(q)?;
    Ok(if p.degree().is_multiple_of(2) { s.neg() } else { s })
}

/// `(−1)^{(p−1)(r−1)}[P,[Q,R]] + cyclic = 0`.
pub fn schouten_jacobi(a: &GradedSpec, b: &GradedSpec, c: &GradedSpec) -> Result<bool> {
    let ch = free_chart("R3", &["u0", "u1", "u2"]);
    let (p, q, r) = (
        build_multivector(&ch, &U3, a),
        build_multivector(&ch, &U3, b),
        build_multivector(&ch, &U3, c),
    );
    let sign = |x: &MultivectorField, z: &MultivectorField| (x.degree() + 1) * (z.degree() + 1) % 2 == 1;
    let term = |x: &MultivectorField, y: &MultivectorField, z: &MultivectorField| -> Result<MultivectorField> {
        let t = graded_schouten(x, &graded_schouten(y, z)?)?;
        Ok(if sign(x, z) { t.neg() } else { t })
    };
    let sum = term(&p, &q, &r)?.add(&term(&q, &r, &p)?)?.add(&term(&r, &p, &q)?)?;
    Ok(sum.is_zero())
}

/// `[Λ,Λ]^{ijk} = −2 Σ_cyc Λ^{il} ∂_l Λ^{jk}` for a bivector.
pub fn schouten_matches_component_formula(spec: &GradedSpec) -> Result<bool> {
    let ch = free_chart("R3", &U3);
    let lam = build_multivector(&ch, &U3, spec);
    let ll = lam.schouten(&lam)?;
    let n = ch.dim();
    let flow = |i: usize, j: usize, k: usize| -> Result<RatExpr> {
        let mut acc = RatExpr::zero(ch.context());
        for l in 0..n {
            let d = lam.get(&[j, k]).derivative(ch.var(l))?;
            acc = acc.try_add(&lam.get(&[i, l]).try_mul(&d)?)?;
        }
        Ok(acc)
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let cyc = flow(i, j, k)?.try_add(&flow(j, k, i)?)?.try_add(&flow(k, i, j)?)?;
                if ll.get(&[i, j, k]) != cyc.scale(&int(-2)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn mass_shell() -> &'static MassShellModel {
    static M: OnceLock<MassShellModel> = OnceLock::new();
    M.get_or_init(|| build_mass_shell(Mass::Symbolic).expect("mass shell builds"))
}

/// Mass-shell functions are polynomials in `x^μ, p^μ` (with `p0` dependent).
pub const SHELL_VARS: [&str; 8] = ["x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3"];

pub fn shell_function() -> impl Strategy<Value = Terms> + Clone {
    terms(8, 2, 3)
}

/// Smaller functions for properties that nest brackets.
pub fn small_shell_function() -> impl Strategy<Value = Terms> + Clone {
    terms(8, 1, 2)
}

pub fn shell_expr(t: &Terms) -> RatExpr {
    poly(mass_shell().chart(), &SHELL_VARS, t)
}

pub fn bracket_antisymmetric(pair: &JacobiPair, f: &RatExpr, g: &RatExpr) -> Result<bool> {
    Ok(pair.bracket(f, g)?.try_add(&pair.bracket(g, f)?)?.is_zero())
}

/// `[X_f, X_g] = X_{[f,g]}`.
pub fn hamiltonian_homomorphism(pair: &JacobiPair, f: &RatExpr, g: &RatExpr) -> Result<bool> {
    let xf = pair.hamiltonian_vector_field(f)?;
    let xg = pair.hamiltonian_vector_field(g)?;
    Ok(xf.schouten(&xg)? == pair.hamiltonian_vector_field(&pair.bracket(f, g)?)?)
}

pub fn leibniz_defect_vanishes(pair: &JacobiPair, f: &RatExpr, g: &RatExpr, h: &RatExpr) -> Result<bool> {
    Ok(pair.leibniz_defect(f, g, h)?.is_zero())
}

pub fn jacobi_identity(pair: &JacobiPair, f: &RatExpr, g: &RatExpr, h: &RatExpr) -> Result<bool> {
    Ok(pair.jacobi_residual(f, g, h)?.is_zero())
}

/// Operator on `R^2` of order at most `max_order`: `(coefficient, multi-index)`.
pub type OperatorSpec = Vec<(Terms, Vec<u16>)>;

const R2: [&str; 2] = ["u0", "u1"];

pub fn operator(max_order: u16, coeff_deg: u16) -> impl Strategy<Value = OperatorSpec> + Clone {
    prop::collection::vec((terms(2, coeff_deg, 2), prop::collection::vec(0..=max_order, 2)), 1..=3)
}

pub fn r2() -> &'static Arc<Chart> {
    static C: OnceLock<Arc<Chart>> = OnceLock::new();
    C.get_or_init(|| free_chart("R2", &R2))
}

pub fn build_operator(spec: &OperatorSpec) -> DifferentialOperator {
    let c = r2();
    DifferentialOperator::from_terms(c, spec.iter().map(|(t, idx)| (idx.clone(), poly(c, &R2, t))))
}

pub fn r2_expr(t: &Terms) -> RatExpr {
    poly(r2(), &R2, t)
}

/// `[A,[B,C]] + [B,[C,A]] + [C,[A,B]] = 0`.
pub fn operator_jacobi(a: &OperatorSpec, b: &OperatorSpec, c: &OperatorSpec) -> Result<bool> {
    let (a, b, c) = (build_operator(a), build_operator(b), build_operator(c));
    let t1 = a.commutator(&b.commutator(&c)?)?;
    let t2 = b.commutator(&c.commutator(&a)?)?;
    let t3 = c.commutator(&a.commutator(&b)?)?;
    Ok(t1.add(&t2)?.add(&t3)?.is_zero())
}

/// `ord [A, B] ≤ ord A + ord B − 1`.
pub fn order_drops(a: &OperatorSpec, b: &OperatorSpec) -> Result<bool> {
    let (a, b) = (build_operator(a), build_operator(b));
    let c = a.commutator(&b)?;
    Ok(c.is_zero() || c.order() < a.order() + b.order())
}

/// Homogeneous constant-coefficient operator of order `k` on `R^2`.
pub fn homogeneous_operator() -> impl Strategy<Value = (u16, Vec<i64>)> {
    (1u16..=3).prop_flat_map(|k| (Just(k), prop::collection::vec(-3i64..=3, k as usize + 1)))
}

/// The symbol from iterated commutators equals the plane-wave polynomial
/// pulled back along `k_a ↦ ∂_a S`.
pub fn symbol_pullback(op: &(u16, Vec<i64>), phase: &Terms) -> Result<bool> {
    let c = r2();
    let (k, coeffs) = op;
    let d = DifferentialOperator::from_terms(
        c,
        coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| (vec![j as u16, k - j as u16], RatExpr::from_integer(a, c.context()))),
    );
    if d.order() == 0 {
        return Ok(true);
    }
    let s = r2_expr(phase);
    let grads = R2.iter().map(|x| s.partial_derivative(x)).collect::<Result<Vec<_>>>()?;
    let pulled = plane_wave_conjugation(&d, &grads, c.context())?;
    Ok(pulled.normalized == iterated_symbol(&d, &s)?)
}

/// Unit time-like rational velocities.
pub const VELOCITIES: [[(i64, i64); 4]; 4] = [
    [(1, 1), (0, 1), (0, 1), (0, 1)],
    [(5, 4), (3, 4), (0, 1), (0, 1)],
    [(5, 3), (0, 1), (4, 3), (0, 1)],
    [(13, 12), (0, 1), (0, 1), (5, 12)],
];

pub fn velocity(i: usize) -> [Scalar; 4] {
    VELOCITIES[i].map(|(n, d)| int(n) / int(d))
}

pub fn geodesic_spec() -> impl Strategy<Value = (usize, [i64; 4])> + Clone {
    (0..VELOCITIES.len(), prop::array::uniform4(-3i64..=3))
}

pub fn geodesic(spec: &(usize, [i64; 4]), extra: &[&str]) -> Geodesic {
    Geodesic::from_values(spec.1.map(int), velocity(spec.0), extra).expect("unit velocity")
}

/// Atoms `F_i @ s=t_i` with `F_i` in `x0..x3` and `t_i` small rationals.
pub type FunctionalSpec = Vec<(Terms, (i64, i64))>;

pub fn functional() -> impl Strategy<Value = FunctionalSpec> + Clone {
    prop::collection::vec((terms(4, 2, 2), (-4i64..=4, 1i64..=3)), 1..=2)
}

pub fn build_functional(spec: &FunctionalSpec) -> DeltaFunctional {
    let text: Vec<String> = spec
        .iter()
        .map(|(t, (n, d))| format!("{} @ s={n}/{d}", poly_text(&X4, t)))
        .collect();
    text.join("; ").parse().expect("generated functional parses")
}

/// Same as [`build_functional`] but with observables in the linear forms
/// `k1 x0 − k0 x1`, `k2 x0 − k0 x2`, `k3 x0 − k0 x3`, which `k·∂` kills.
pub fn build_invariant_functional(spec: &FunctionalSpec, k: &[Scalar; 4]) -> DeltaFunctional {
    let s = |c: &Scalar| format!("({c})");
    let forms: Vec<String> = (1..4)
        .map(|j| format!("({}*x0 - {}*x{j})", s(&k[j]), s(&k[0])))
        .collect();
    let names: Vec<&str> = forms.iter().map(String::as_str).collect();
    let text: Vec<String> = spec
        .iter()
        .map(|(t, (n, d))| {
            let t: Terms = t.iter().map(|(c, e)| (*c, e[..3].to_vec())).collect();
            format!("{} @ s={n}/{d}", poly_text(&names, &t))
        })
        .collect();
    text.join("; ").parse().expect("generated functional parses")
}

pub fn peierls_antisymmetric(geo: &(usize, [i64; 4]), a: &FunctionalSpec, b: &FunctionalSpec) -> Result<bool> {
    let g = geodesic(geo, &[]);
    let (a, b) = (build_functional(a), build_functional(b));
    Ok(peierls_bracket(&g, &a, &b, None)?
        .try_add(&peierls_bracket(&g, &b, &a, None)?)?
        .is_zero())
}

/// Kernel-direction terms in the Green function leave brackets of
/// pointwise reparametrization-invariant functionals unchanged.
pub fn gauge_independent(
    geo: &(usize, [i64; 4]),
    a: &FunctionalSpec,
    b: &FunctionalSpec,
    gauge: &(i64, i64, [i64; 4]),
) -> Result<bool> {
    let g = geodesic(geo, &[]);
    let k = velocity(geo.0);
    let (a, b) = (build_invariant_functional(a, &k), build_invariant_functional(b, &k));
    assert!(reparam_invariant(&a, &g)? && reparam_invariant(&b, &g)?);
    let ctx = g.context();
    let gauge = Gauge {
        c1: RatExpr::from_integer(gauge.0, ctx),
        c2: RatExpr::from_integer(gauge.1, ctx),
        w: gauge.2.map(|n| RatExpr::from_integer(n, ctx)),
    };
    Ok(peierls_bracket(&g, &a, &b, Some(&gauge))? == peierls_bracket(&g, &a, &b, None)?)
}

pub fn jacobi_field(g: &Geodesic, j: &([i64; 4], [i64; 4])) -> JacobiField {
    let ctx = g.context();
    JacobiField::new(
        j.0.map(|n| RatExpr::from_integer(n, ctx)),
        j.1.map(|n| RatExpr::from_integer(n, ctx)),
    )
}

pub fn field_spec() -> impl Strategy<Value = ([i64; 4], [i64; 4])> + Clone {
    (prop::array::uniform4(-3i64..=3), prop::array::uniform4(-3i64..=3))
}

fn s_independent(e: &RatExpr) -> Result<bool> {
    Ok(e.partial_derivative_any("s")?.is_zero())
}

/// `⟨J, γ̇⟩` is constant once the rate is made transverse.
pub fn theta_conserved(geo: &(usize, [i64; 4]), j: &([i64; 4], [i64; 4])) -> Result<bool> {
    let g = geodesic(geo, &[]);
    let (perp, _, _) = g.decompose_jacobi_field(&jacobi_field(&g, j))?;
    let field = JacobiField::new(jacobi_field(&g, j).initial, perp.rate);
    s_independent(&g.theta_eval(&field)?)
}

pub fn omega_conserved(geo: &(usize, [i64; 4]), j1: &([i64; 4], [i64; 4]), j2: &([i64; 4], [i64; 4])) -> Result<bool> {
    let g = geodesic(geo, &[]);
    s_independent(&g.omega_eval(&jacobi_field(&g, j1), &jacobi_field(&g, j2))?)
}

/// Context with two interacting monic quadratic rules.
pub fn two_rule_context() -> &'static Arc<Context> {
    static C: OnceLock<Arc<Context>> = OnceLock::new();
    C.get_or_init(|| {
        Context::builder()
            .coords(&["a", "b"])
            .dependent("u", "a*u + 1 + b^2")
            .dependent("w", "b*w + a - 2")
            .build()
            .expect("valid rules")
    })
}

pub const RULE_VARS: [&str; 4] = ["a", "b", "u", "w"];

pub fn raw_poly(t: &Terms) -> MultiPoly {
    let ctx = two_rule_context();
    let names: Vec<&str> = ctx.names().iter().map(String::as_str).collect();
    let free = Context::free(&names, &[]);
    RatExpr::parse(&poly_text(&RULE_VARS, t), &free)
        .expect("generated polynomial parses")
        .as_polynomial()
        .expect("polynomial")
}

/// Normal forms agree for every rule order and are idempotent and
/// multiplicative.
pub fn reduction_confluent(p: &Terms, q: &Terms) -> bool {
    let ctx = two_rule_context();
    let (p, q) = (raw_poly(p), raw_poly(q));
    let np = ctx.reduce(&p);
    let nq = ctx.reduce(&q);
    np == ctx.reduce_stepwise(&p, &[0, 1])
        && np == ctx.reduce_stepwise(&p, &[1, 0])
        && ctx.reduce(&np) == np
        && ctx.reduce(&p.mul(&q)) == ctx.reduce(&np.mul(&nq))
}

pub fn rule_poly() -> impl Strategy<Value = Terms> + Clone {
    terms(4, 4, 4)
}
