//! Time-like geodesics of Minkowski space in proper-time gauge and their
//! Jacobi fields.

use std::array;
use std::sync::Arc;

use crate::algebra::{int, Context, RatExpr, Scalar};
use crate::error::{Error, Result};
use crate::models::common::g;

pub type Vector4 = [RatExpr; 4];
pub type Matrix4 = [[RatExpr; 4]; 4];

/// Name of the evaluation parameter along the path.
pub const PARAM: &str = "s";

/// `x(s) = x + s·k` with `⟨k, k⟩ = 1`. Components are contravariant.
#[derive(Clone, Debug, PartialEq)]
pub struct Geodesic {
    ctx: Arc<Context>,
    base: Vector4,
    velocity: Vector4,
}

/// Context with symbolic base point `x0..x3`, velocity `k0..k3` constrained
/// by `k0² = 1 + k1² + k2² + k3²`, the parameter `s` and `extra` parameters.
pub fn geodesic_context(extra: &[&str]) -> Result<Arc<Context>> {
    let mut params = vec!["x0", "x1", "x2", "x3", PARAM];
    params.extend_from_slice(extra);
    Context::builder()
        .dependent("k0", "1 + k1^2 + k2^2 + k3^2")
        .coords(&["k1", "k2", "k3"])
        .params(&params)
        .build()
}

/// Minkowski product `⟨a, b⟩ = g_{μν} a^μ b^ν`.
pub fn dot(a: &Vector4, b: &Vector4) -> Result<RatExpr> {
    let mut acc = RatExpr::zero(a[0].context());
    for mu in 0..4 {
        acc = acc.try_add(&a[mu].try_mul(&b[mu])?.scale(&int(g(mu))))?;
    }
    Ok(acc)
}

/// `v` with the index lowered.
pub fn lower(v: &Vector4) -> Vector4 {
    array::from_fn(|mu| v[mu].scale(&int(g(mu))))
}

/// Index placement of the projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// `P_{μν} = g_{μν} − k_μk_ν`
    Lower,
    /// `P^{μν} = g^{μν} − k^μk^ν`
    Upper,
    /// `P_μ^ν = δ_μ^ν − k_μk^ν`
    Mixed,
}

impl Geodesic {
    /// Symbolic geodesic in [`geodesic_context`].
    pub fn symbolic(extra: &[&str]) -> Result<Geodesic> {
        let ctx = geodesic_context(extra)?;
        let base = array::from_fn(|mu| RatExpr::var(&ctx, &format!("x{mu}")).expect("declared"));
        let velocity = array::from_fn(|mu| RatExpr::var(&ctx, &format!("k{mu}")).expect("declared"));
        Geodesic::new(&ctx, base, velocity)
    }

    /// Geodesic with rational data; the context holds `s` and `extra`.
    pub fn from_values(base: [Scalar; 4], velocity: [Scalar; 4], extra: &[&str]) -> Result<Geodesic> {
        let mut params = vec![PARAM];
        params.extend_from_slice(extra);
        let ctx = Context::free(&[], &params);
        let base = base.map(|c| RatExpr::from_scalar(c, &ctx));
        let velocity = velocity.map(|c| RatExpr::from_scalar(c, &ctx));
        Geodesic::new(&ctx, base, velocity)
    }

    pub fn new(ctx: &Arc<Context>, base: Vector4, velocity: Vector4) -> Result<Geodesic> {
        let norm = dot(&velocity, &velocity)?.try_sub(&RatExpr::one(ctx))?;
        if !norm.is_zero() {
            return Err(Error::Invalid(format!(
                "velocity is not unit time-like: ⟨k, k⟩ − 1 = {norm}"
            )));
        }
        if !ctx.has(PARAM) {
            return Err(Error::UnknownSymbol(PARAM.into()));
        }
        Ok(Geodesic {
            ctx: ctx.clone(),
            base,
            velocity,
        })
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn base(&self) -> &Vector4 {
        &self.base
    }

    pub fn velocity(&self) -> &Vector4 {
        &self.velocity
    }

    /// The parameter `s` as an expression.
    pub fn param(&self) -> RatExpr {
        RatExpr::var(&self.ctx, PARAM).expect("checked in new")
    }

    pub fn expr(&self, text: &str) -> Result<RatExpr> {
        RatExpr::parse(text, &self.ctx)
    }

    /// `x(t) = x + t·k`.
    pub fn position_at(&self, t: &RatExpr) -> Result<Vector4> {
        let mut out = self.base.clone();
        for (o, k) in out.iter_mut().zip(&self.velocity) {
            *o = o.try_add(&k.try_mul(t)?)?;
        }
        Ok(out)
    }

    pub fn projector(&self, placement: Placement) -> Result<Matrix4> {
        let k_low = lower(&self.velocity);
        let mut out: Matrix4 = array::from_fn(|_| array::from_fn(|_| RatExpr::zero(&self.ctx)));
        for mu in 0..4 {
            for nu in 0..4 {
                let (delta, a, b) = match placement {
                    Placement::Lower => (if mu == nu { g(mu) } else { 0 }, &k_low[mu], &k_low[nu]),
                    Placement::Upper => (if mu == nu { g(mu) } else { 0 }, &self.velocity[mu], &self.velocity[nu]),
                    Placement::Mixed => ((mu == nu) as i64, &k_low[mu], &self.velocity[nu]),
                };
                out[mu][nu] = RatExpr::from_integer(delta, &self.ctx).try_sub(&a.try_mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// `P_{μν} d²δγ^ν/ds²`, with `L = 1` in proper-time gauge. Returns
    /// covariant components.
    pub fn jacobi_operator_apply(&self, variation: &Vector4) -> Result<Vector4> {
        let p = self.projector(Placement::Lower)?;
        let second = variation
            .iter()
            .map(|c| c.partial_derivative_any(PARAM)?.partial_derivative_any(PARAM))
            .collect::<Result<Vec<_>>>()?;
        mat_vec(&p, &second)
    }

    /// `J = J_⊥ + (a s + b) k` with `a = ⟨J₀′, k⟩`, `b = ⟨J₀, k⟩`.
    pub fn decompose_jacobi_field(&self, j: &JacobiField) -> Result<(JacobiField, RatExpr, RatExpr)> {
        let a = dot(&j.rate, &self.velocity)?;
        let b = dot(&j.initial, &self.velocity)?;
        let sub = |v: &Vector4, c: &RatExpr| -> Result<Vector4> {
            let mut out = v.clone();
            for (o, k) in out.iter_mut().zip(&self.velocity) {
                *o = o.try_sub(&k.try_mul(c)?)?;
            }
            Ok(out)
        };
        Ok((JacobiField::new(sub(&j.initial, &b)?, sub(&j.rate, &a)?), a, b))
    }

    /// `Θ(γ)[J] = ⟨γ̇, J(s)⟩`.
    pub fn theta_eval(&self, j: &JacobiField) -> Result<RatExpr> {
        dot(&self.velocity, &j.at(&self.param())?)
    }

    /// `J₁^μ P_{μν} J₂′^ν − J₁′^μ P_{μν} J₂^ν` at parameter `s`.
    pub fn omega_eval(&self, j1: &JacobiField, j2: &JacobiField) -> Result<RatExpr> {
        let p = self.projector(Placement::Lower)?;
        let s = self.param();
        let a = bilinear(&j1.at(&s)?, &p, &j2.rate)?;
        let b = bilinear(&j1.rate, &p, &j2.at(&s)?)?;
        a.try_sub(&b)
    }
}

pub(crate) fn mat_vec(m: &Matrix4, v: &[RatExpr]) -> Result<Vector4> {
    let mut out: Vector4 = array::from_fn(|_| RatExpr::zero(v[0].context()));
    for (mu, row) in m.iter().enumerate() {
        for (nu, c) in row.iter().enumerate() {
            out[mu] = out[mu].try_add(&c.try_mul(&v[nu])?)?;
        }
    }
    Ok(out)
}

/// `a^μ M_{μν} b^ν`.
pub fn bilinear(a: &[RatExpr], m: &Matrix4, b: &[RatExpr]) -> Result<RatExpr> {
    let mb = mat_vec(m, b)?;
    let mut acc = RatExpr::zero(a[0].context());
    for mu in 0..4 {
        acc = acc.try_add(&a[mu].try_mul(&mb[mu])?)?;
    }
    Ok(acc)
}

/// Affine Jacobi field `J(s) = J₀ + s·J₀′`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiField {
    pub initial: Vector4,
    pub rate: Vector4,
}

impl JacobiField {
    pub fn new(initial: Vector4, rate: Vector4) -> JacobiField {
        JacobiField { initial, rate }
    }

    /// `(a s + b) k`.
    pub fn along(geo: &Geodesic, a: &RatExpr, b: &RatExpr) -> Result<JacobiField> {
        let k = geo.velocity();
        let scale = |c: &RatExpr| -> Result<Vector4> {
            let v = k.iter().map(|x| x.try_mul(c)).collect::<Result<Vec<_>>>()?;
            Ok(v.try_into().expect("four components"))
        };
        Ok(JacobiField::new(scale(b)?, scale(a)?))
    }

    pub fn at(&self, t: &RatExpr) -> Result<Vector4> {
        let mut out = self.initial.clone();
        for (o, r) in out.iter_mut().zip(&self.rate) {
            *o = o.try_add(&r.try_mul(t)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(geo: &Geodesic, texts: [&str; 4]) -> Vector4 {
        texts.map(|t| geo.expr(t).unwrap())
    }

    fn is_zero_vector(v: &Vector4) -> bool {
        v.iter().all(RatExpr::is_zero)
    }

    #[test]
    fn rest_frame_projector() {
        let geo = Geodesic::from_values([0, 0, 0, 0].map(int), [1, 0, 0, 0].map(int), &[]).unwrap();
        for placement in [Placement::Lower, Placement::Upper] {
            let p = geo.projector(placement).unwrap();
            for mu in 0..4 {
                for nu in 0..4 {
                    let expected = if mu == nu && mu > 0 { -1 } else { 0 };
                    assert_eq!(p[mu][nu].as_constant(), Some(int(expected)));
                }
            }
        }
    }

    #[test]
    fn projector_is_idempotent_and_transverse() {
        let geo = Geodesic::symbolic(&[]).unwrap();
        let mixed = geo.projector(Placement::Mixed).unwrap();
        for mu in 0..4 {
            let row: Vec<RatExpr> = (0..4).map(|nu| mixed[nu][mu].clone()).collect();
            let col = mat_vec(&mixed, &row).unwrap();
            for rho in 0..4 {
                assert_eq!(col[rho], mixed[rho][mu]);
            }
        }
        let upper = geo.projector(Placement::Upper).unwrap();
        assert!(is_zero_vector(&mat_vec(&upper, &lower(geo.velocity())).unwrap()));
        let low = geo.projector(Placement::Lower).unwrap();
        assert!(is_zero_vector(&mat_vec(&low, geo.velocity()).unwrap()));
    }

    #[test]
    fn jacobi_operator_kernel() {
        let geo = Geodesic::symbolic(&["a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"]).unwrap();
        let affine = vector(&geo, ["a0 + s*b0", "a1 + s*b1", "a2 + s*b2", "a3 + s*b3"]);
        assert!(is_zero_vector(&geo.jacobi_operator_apply(&affine).unwrap()));
        let along = vector(&geo, ["s^2*k0", "s^2*k1", "s^2*k2", "s^2*k3"]);
        assert!(is_zero_vector(&geo.jacobi_operator_apply(&along).unwrap()));
    }

    #[test]
    fn transverse_acceleration_is_not_in_kernel() {
        let geo = Geodesic::from_values([0, 0, 0, 0].map(int), [1, 0, 0, 0].map(int), &[]).unwrap();
        let v = vector(&geo, ["0", "s^2", "0", "0"]);
        let out = geo.jacobi_operator_apply(&v).unwrap();
        assert_eq!(out[1].as_constant(), Some(int(-2)));
    }

    #[test]
    fn decomposition_reassembles() {
        let geo = Geodesic::symbolic(&["a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"]).unwrap();
        let j = JacobiField::new(
            vector(&geo, ["a0", "a1", "a2", "a3"]),
            vector(&geo, ["b0", "b1", "b2", "b3"]),
        );
        let (perp, a, b) = geo.decompose_jacobi_field(&j).unwrap();
        let s = geo.param();
        assert!(dot(&perp.at(&s).unwrap(), geo.velocity()).unwrap().is_zero());
        let along = JacobiField::along(&geo, &a, &b).unwrap();
        let back = perp.at(&s).unwrap();
        let tail = along.at(&s).unwrap();
        let full = j.at(&s).unwrap();
        for mu in 0..4 {
            assert_eq!(back[mu].try_add(&tail[mu]).unwrap(), full[mu]);
        }
    }

    #[test]
    fn theta_of_velocity_is_one() {
        let geo = Geodesic::symbolic(&[]).unwrap();
        let zero: Vector4 = array::from_fn(|_| RatExpr::zero(geo.context()));
        let j = JacobiField::new(geo.velocity().clone(), zero);
        assert!(geo.theta_eval(&j).unwrap().is_one());
    }

    #[test]
    fn omega_is_constant_and_degenerate_along_velocity() {
        let geo = Geodesic::symbolic(&["a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3", "c", "d"]).unwrap();
        let j = JacobiField::new(
            vector(&geo, ["a0", "a1", "a2", "a3"]),
            vector(&geo, ["b0", "b1", "b2", "b3"]),
        );
        let w = geo.omega_eval(&j, &j).unwrap();
        assert!(w.is_zero());
        let along = JacobiField::along(&geo, &geo.expr("c").unwrap(), &geo.expr("d").unwrap()).unwrap();
        assert!(geo.omega_eval(&along, &j).unwrap().is_zero());
        assert!(geo.omega_eval(&j, &along).unwrap().is_zero());
    }

    #[test]
    fn non_unit_velocity_rejected() {
        assert!(Geodesic::from_values([0, 0, 0, 0].map(int), [1, 1, 0, 0].map(int), &[]).is_err());
    }
}
