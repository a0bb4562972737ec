//! Functionals supported on finitely many points of a geodesic and their
//! Jacobi bracket.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::algebra::expr::format_scalar;
use crate::algebra::parse::is_identifier;
use crate::algebra::{Context, RatExpr, Scalar};
use crate::error::{Error, Result};

use super::path::{bilinear, Geodesic, Placement, Vector4};

/// Context of point observables: polynomials in `x0..x3`.
pub fn observable_context() -> &'static Arc<Context> {
    static CTX: OnceLock<Arc<Context>> = OnceLock::new();
    CTX.get_or_init(|| Context::free(&["x0", "x1", "x2", "x3"], &[]))
}

/// Parameter value at which an observable is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum At {
    Value(Scalar),
    /// A parameter of the geodesic context, such as `s1`.
    Symbol(String),
}

impl At {
    fn expr(&self, geo: &Geodesic) -> Result<RatExpr> {
        match self {
            At::Value(c) => Ok(RatExpr::from_scalar(c.clone(), geo.context())),
            At::Symbol(name) => RatExpr::var(geo.context(), name),
        }
    }
}

impl fmt::Display for At {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            At::Value(c) => f.write_str(&format_scalar(c)),
            At::Symbol(s) => f.write_str(s),
        }
    }
}

/// `F` evaluated at `x(s_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub observable: RatExpr,
    pub at: At,
}

/// `A[γ] = Σ F_i(x(s_i))`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DeltaFunctional {
    pub atoms: Vec<Atom>,
}

impl DeltaFunctional {
    pub fn new(atoms: Vec<Atom>) -> Result<DeltaFunctional> {
        for a in &atoms {
            if a.observable.as_polynomial().is_none() {
                return Err(Error::Invalid(format!(
                    "observable `{}` is not a polynomial",
                    a.observable
                )));
            }
            if !Arc::ptr_eq(a.observable.context(), observable_context()) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(DeltaFunctional { atoms })
    }

    /// Single atom `F @ s=t`.
    pub fn point(observable: &str, at: At) -> Result<DeltaFunctional> {
        let f = RatExpr::parse(observable, observable_context())?;
        DeltaFunctional::new(vec![Atom { observable: f, at }])
    }

    fn images(geo: &Geodesic, t: &RatExpr) -> Result<std::collections::HashMap<String, RatExpr>> {
        let x = geo.position_at(t)?;
        Ok((0..4).map(|mu| (format!("x{mu}"), x[mu].clone())).collect())
    }

    /// `A[γ]`.
    pub fn evaluate(&self, geo: &Geodesic) -> Result<RatExpr> {
        let mut acc = RatExpr::zero(geo.context());
        for a in &self.atoms {
            let img = Self::images(geo, &a.at.expr(geo)?)?;
            acc = acc.try_add(&a.observable.substitute(&img, geo.context())?)?;
        }
        Ok(acc)
    }

    /// Per atom: `s_i` and the covariant gradient `∂F_i/∂x^μ` at `x(s_i)`.
    pub fn gradients(&self, geo: &Geodesic) -> Result<Vec<(RatExpr, Vector4)>> {
        self.atoms
            .iter()
            .map(|a| {
                let t = a.at.expr(geo)?;
                let img = Self::images(geo, &t)?;
                let grad = (0..4)
                    .map(|mu| {
                        a.observable
                            .partial_derivative(&format!("x{mu}"))?
                            .substitute(&img, geo.context())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((t, grad.try_into().expect("four components")))
            })
            .collect()
    }

    /// `∫ γ̇^μ δA/δγ^μ ds = Σ_i k^μ ∂_μF_i(x(s_i))`.
    pub fn reeb_derivative(&self, geo: &Geodesic) -> Result<RatExpr> {
        let mut acc = RatExpr::zero(geo.context());
        for (_, grad) in self.gradients(geo)? {
            acc = acc.try_add(&contract(geo.velocity(), &grad)?)?;
        }
        Ok(acc)
    }
}

/// `v^μ w_μ`.
fn contract(v: &Vector4, w: &Vector4) -> Result<RatExpr> {
    let mut acc = RatExpr::zero(v[0].context());
    for mu in 0..4 {
        acc = acc.try_add(&v[mu].try_mul(&w[mu])?)?;
    }
    Ok(acc)
}

impl FromStr for DeltaFunctional {
    type Err = Error;

    /// Atoms `F @ s=t` separated by `;`, where `t` is a rational or a
    /// parameter name.
    fn from_str(text: &str) -> Result<DeltaFunctional> {
        let mut atoms = Vec::new();
        for part in text.split(';') {
            let (f, at) = part.split_once('@').ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("expected `F @ s=value` in `{}`", part.trim()),
            })?;
            let at = at.trim();
            let value = at
                .strip_prefix("s")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("expected `s=value`, got `{at}`"),
                })?;
            let value = value.trim();
            let at = if is_identifier(value) {
                At::Symbol(value.to_string())
            } else {
                let c = RatExpr::parse(value, observable_context())?
                    .as_constant()
                    .ok_or_else(|| Error::Invalid(format!("`{value}` is not a rational")))?;
                At::Value(c)
            };
            let observable = RatExpr::parse(f.trim(), observable_context())?;
            atoms.push(Atom { observable, at });
        }
        DeltaFunctional::new(atoms)
    }
}

impl fmt::Display for DeltaFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0 @ s=0");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("{} @ s={}", a.observable, a.at))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Kernel-direction term added to the commutator Green function:
/// `(c₁s + c₂) k^μ w^ν − w^μ k^ν (c₁s′ + c₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    pub c1: RatExpr,
    pub c2: RatExpr,
    pub w: Vector4,
}

/// `Σ_{ij} ∂F^A_i P^{μν}(s_i − s_j) ∂F^B_j + A[γ] Σ_j k·∂F^B_j − B[γ] Σ_i k·∂F^A_i`,
/// optionally with a [`Gauge`] term in the Green function.
pub fn peierls_bracket(
    geo: &Geodesic,
    a: &DeltaFunctional,
    b: &DeltaFunctional,
    gauge: Option<&Gauge>,
) -> Result<RatExpr> {
    let p = geo.projector(Placement::Upper)?;
    let ga = a.gradients(geo)?;
    let gb = b.gradients(geo)?;
    let k = geo.velocity();
    let mut acc = RatExpr::zero(geo.context());
    for (si, da) in &ga {
        for (sj, db) in &gb {
            let lag = si.try_sub(sj)?;
            acc = acc.try_add(&bilinear(da, &p, db)?.try_mul(&lag)?)?;
            if let Some(gt) = gauge {
                let fi = gt.c1.try_mul(si)?.try_add(&gt.c2)?;
                let fj = gt.c1.try_mul(sj)?.try_add(&gt.c2)?;
                let t1 = fi.try_mul(&contract(k, da)?)?.try_mul(&contract(&gt.w, db)?)?;
                let t2 = fj.try_mul(&contract(&gt.w, da)?)?.try_mul(&contract(k, db)?)?;
                acc = acc.try_add(&t1.try_sub(&t2)?)?;
            }
        }
    }
    let reeb = a
        .evaluate(geo)?
        .try_mul(&b.reeb_derivative(geo)?)?
        .try_sub(&b.evaluate(geo)?.try_mul(&a.reeb_derivative(geo)?)?)?;
    acc.try_add(&reeb)
}

/// Whether `Σ_i k·∂F_i(x(s_i))` vanishes.
pub fn reparam_invariant(a: &DeltaFunctional, geo: &Geodesic) -> Result<bool> {
    Ok(a.reeb_derivative(geo)?.is_zero())
}
