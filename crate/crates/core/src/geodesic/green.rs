//! Green functions of the Jacobi operator on piecewise-polynomial carriers.

use std::array;
use std::collections::HashMap;

use crate::algebra::RatExpr;
use crate::error::Result;

use super::path::{Geodesic, Matrix4, Placement, PARAM};

/// `G^{νρ}(s, s₀)` given by one polynomial matrix for `s < s₀` and one for
/// `s > s₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseKernel {
    pub source: RatExpr,
    pub before: Matrix4,
    pub after: Matrix4,
}

/// `P_{μν} d²G^{νρ}/ds²` in the distributional sense: smooth parts on each
/// side plus the coefficients of `δ(s − s₀)` and `δ′(s − s₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiImage {
    pub before: Matrix4,
    pub after: Matrix4,
    pub delta: Matrix4,
    pub delta_prime: Matrix4,
}

impl JacobiImage {
    pub fn is_zero(&self) -> bool {
        [&self.before, &self.after, &self.delta, &self.delta_prime]
            .iter()
            .all(|m| m.iter().flatten().all(RatExpr::is_zero))
    }
}

fn zeros(geo: &Geodesic) -> Matrix4 {
    array::from_fn(|_| array::from_fn(|_| RatExpr::zero(geo.context())))
}

fn map(m: &Matrix4, f: impl Fn(&RatExpr) -> Result<RatExpr>) -> Result<Matrix4> {
    let mut out = m.clone();
    for row in out.iter_mut() {
        for c in row.iter_mut() {
            *c = f(c)?;
        }
    }
    Ok(out)
}

fn mat_mul(a: &Matrix4, b: &Matrix4) -> Result<Matrix4> {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let mut acc = RatExpr::zero(a[0][0].context());
            for k in 0..4 {
                acc = acc.try_add(&a[i][k].try_mul(&b[k][j])?)?;
            }
            *c = acc;
        }
    }
    Ok(out)
}

fn sub(a: &Matrix4, b: &Matrix4) -> Result<Matrix4> {
    let mut out = a.clone();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i][j].try_sub(&b[i][j])?;
        }
    }
    Ok(out)
}

/// `P^{νρ}(s − s₀)`.
fn ramp(geo: &Geodesic, source: &RatExpr) -> Result<Matrix4> {
    let lag = geo.param().try_sub(source)?;
    map(&geo.projector(Placement::Upper)?, |c| c.try_mul(&lag))
}

impl PiecewiseKernel {
    /// `P^{νρ}(s − s₀) θ(s − s₀)`.
    pub fn retarded(geo: &Geodesic, source: &RatExpr) -> Result<Self> {
        Ok(PiecewiseKernel {
            source: source.clone(),
            before: zeros(geo),
            after: ramp(geo, source)?,
        })
    }

    /// `−P^{νρ}(s − s₀) θ(s₀ − s)`.
    pub fn advanced(geo: &Geodesic, source: &RatExpr) -> Result<Self> {
        Ok(PiecewiseKernel {
            source: source.clone(),
            before: map(&ramp(geo, source)?, |c| Ok(-c))?,
            after: zeros(geo),
        })
    }

    /// Retarded minus advanced: `P^{νρ}(s − s₀)` on both sides.
    pub fn commutator(geo: &Geodesic, source: &RatExpr) -> Result<Self> {
        let r = Self::retarded(geo, source)?;
        let a = Self::advanced(geo, source)?;
        Ok(PiecewiseKernel {
            source: source.clone(),
            before: sub(&r.before, &a.before)?,
            after: sub(&r.after, &a.after)?,
        })
    }

    /// Apply `P_{μν} d²/ds²`; jumps of `G` and `G′` at `s₀` give the
    /// `δ′` and `δ` coefficients.
    pub fn apply_jacobi_operator(&self, geo: &Geodesic) -> Result<JacobiImage> {
        let p = geo.projector(Placement::Lower)?;
        let d = |c: &RatExpr| c.partial_derivative_any(PARAM);
        let dd = |c: &RatExpr| d(c)?.partial_derivative_any(PARAM);
        let at: HashMap<String, RatExpr> = [(PARAM.to_string(), self.source.clone())].into();
        let eval = |c: &RatExpr| c.substitute(&at, geo.context());
        let jump = sub(&self.after, &self.before)?;
        let jump_rate = map(&jump, |c| eval(&d(c)?))?;
        let jump_value = map(&jump, eval)?;
        Ok(JacobiImage {
            before: mat_mul(&p, &map(&self.before, dd)?)?,
            after: mat_mul(&p, &map(&self.after, dd)?)?,
            delta: mat_mul(&p, &jump_rate)?,
            delta_prime: mat_mul(&p, &jump_value)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn retarded_and_advanced_have_projected_delta_source() {
        let geo = Geodesic::symbolic(&["t"]).unwrap();
        let t = geo.expr("t").unwrap();
        let mixed = geo.projector(Placement::Mixed).unwrap();
        for kernel in [
            PiecewiseKernel::retarded(&geo, &t).unwrap(),
            PiecewiseKernel::advanced(&geo, &t).unwrap(),
        ] {
            let img = kernel.apply_jacobi_operator(&geo).unwrap();
            assert!(img.before.iter().flatten().all(RatExpr::is_zero));
            assert!(img.after.iter().flatten().all(RatExpr::is_zero));
            assert!(img.delta_prime.iter().flatten().all(RatExpr::is_zero));
            assert_eq!(img.delta, mixed);
        }
    }

    #[test]
    fn commutator_kernel_solves_homogeneous_equation() {
        let geo = Geodesic::symbolic(&["t"]).unwrap();
        let t = geo.expr("t").unwrap();
        let img = PiecewiseKernel::commutator(&geo, &t)
            .unwrap()
            .apply_jacobi_operator(&geo)
            .unwrap();
        assert!(img.is_zero());
    }
}
