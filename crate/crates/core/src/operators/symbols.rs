//! Principal symbols, plane-wave conjugation and Hamilton-Jacobi residuals.

use std::sync::Arc;

use super::operator::DifferentialOperator;
use crate::algebra::{int, Context, RatExpr, Scalar};
use crate::error::{Error, Result};

/// `[⋯[D, Ŝ], Ŝ⋯, Ŝ]` with `k` copies of `Ŝ`.
pub fn iterated_commutator(d: &DifferentialOperator, s: &RatExpr, k: usize) -> Result<DifferentialOperator> {
    let sh = DifferentialOperator::multiplication(d.chart(), s.clone());
    let mut out = d.clone();
    for _ in 0..k {
        out = out.commutator(&sh)?;
    }
    Ok(out)
}

/// `k!`, the factor separating the raw `k`-fold commutator from the
/// principal symbol evaluated on `dS`.
pub fn symbol_normalization(k: usize) -> Scalar {
    (1..=k as i64).fold(int(1), |acc, i| acc * int(i))
}

/// The `k`-fold commutator of an order-`k` operator with `Ŝ`, divided by `k!`.
/// For `□` this is `g^{μν} ∂_μS ∂_νS`.
pub fn iterated_symbol(d: &DifferentialOperator, s: &RatExpr) -> Result<RatExpr> {
    let k = d.order();
    if k == 0 {
        return Err(Error::Invalid(
            "the symbol needs an operator of order at least 1".into(),
        ));
    }
    let raw = iterated_commutator(d, s, k)?;
    match raw.as_multiplication() {
        Some(f) => Ok(f.scale(&(int(1) / symbol_normalization(k)))),
        None => Err(Error::NotMultiplication { order: raw.order() }),
    }
}

/// Order-0 part of `e^{i k·x} D e^{−i k·x}` split into real and imaginary
/// parts, together with the real polynomial obtained by `∂_a ↦ k_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWave {
    pub re: RatExpr,
    pub im: RatExpr,
    pub normalized: RatExpr,
}

/// Conjugate an operator whose coefficients are free of the chart
/// coordinates by a plane wave. `covector`
/// holds the image `k_a` of each chart derivative, in one common context.
/// With `□` on Minkowski space and `k_μ = g_μμ p^μ`, `normalized` is `p·p`
/// and `re` is `−p·p`.
pub fn plane_wave_conjugation(
    d: &DifferentialOperator,
    covector: &[RatExpr],
    target: &Arc<Context>,
) -> Result<PlaneWave> {
    if covector.len() != d.chart().dim() {
        return Err(Error::Invalid(format!(
            "expected {} covector components, got {}",
            d.chart().dim(),
            covector.len()
        )));
    }
    let mut re = RatExpr::zero(target);
    let mut im = RatExpr::zero(target);
    let mut normalized = RatExpr::zero(target);
    for (idx, c) in d.terms() {
        if (0..d.chart().dim()).any(|a| c.depends_on(d.chart().coord_name(a))) {
            return Err(Error::NonConstantCoefficients);
        }
        let mut mono = c.transfer(target)?;
        let mut k = 0usize;
        for (a, &e) in idx.iter().enumerate() {
            if e > 0 {
                mono = mono.try_mul(&covector[a].pow(e as i32)?)?;
                k += e as usize;
            }
        }
        normalized = normalized.try_add(&mono)?;
        // (−i)^k
        match k % 4 {
            0 => re = re.try_add(&mono)?,
            1 => im = im.try_sub(&mono)?,
            2 => re = re.try_sub(&mono)?,
            _ => im = im.try_add(&mono)?,
        }
    }
    Ok(PlaneWave { re, im, normalized })
}

/// `g^{μν} ∂_μS ∂_νS − c` for a diagonal metric `g` over `coords`. The
/// derivatives are taken in the context of `s`; transfer the result to a
/// constrained context to test it modulo a relation.
pub fn hj_residual(s: &RatExpr, c: &RatExpr, coords: &[&str], metric: &[Scalar]) -> Result<RatExpr> {
    if coords.len() != metric.len() {
        return Err(Error::Invalid("one metric entry per coordinate".into()));
    }
    let mut acc = RatExpr::zero(s.context());
    for (name, g) in coords.iter().zip(metric) {
        let d = s.partial_derivative_any(name)?;
        acc = acc.try_add(&d.try_mul(&d)?.scale(g))?;
    }
    acc.try_sub(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn minkowski() -> Arc<Chart> {
        let ctx = Context::free(
            &["x0", "x1", "x2", "x3"],
            &["m", "k0", "k1", "k2", "k3", "y0", "y1", "y2", "y3"],
        );
        Chart::all("M", &ctx).unwrap()
    }

    const BOX: &str = "d2(x0) - d2(x1) - d2(x2) - d2(x3)";

    #[test]
    fn box_commutator_with_linear_phase() {
        let c = minkowski();
        let b = DifferentialOperator::parse(BOX, &c).unwrap();
        let s = c.expr("k0*x0 - k1*x1 - k2*x2 - k3*x3").unwrap();
        let first = iterated_commutator(&b, &s, 1).unwrap();
        let expected = DifferentialOperator::parse("2*k0*d(x0) + 2*k1*d(x1) + 2*k2*d(x2) + 2*k3*d(x3)", &c).unwrap();
        assert_eq!(first, expected);
        assert_eq!(
            iterated_symbol(&b, &s).unwrap(),
            c.expr("k0^2 - k1^2 - k2^2 - k3^2").unwrap()
        );
    }

    #[test]
    fn squared_interval_symbol_is_four_times_interval() {
        let c = minkowski();
        let b = DifferentialOperator::parse(BOX, &c).unwrap();
        let s = c.expr("(x0-y0)^2 - (x1-y1)^2 - (x2-y2)^2 - (x3-y3)^2").unwrap();
        assert_eq!(iterated_symbol(&b, &s).unwrap(), s.scale(&int(4)));
        let raw = iterated_commutator(&b, &s, 2).unwrap();
        assert_eq!(raw.as_multiplication().unwrap(), s.scale(&int(8)));
    }

    #[test]
    fn first_order_symbol_is_derivative() {
        let c = minkowski();
        let d = DifferentialOperator::parse("d(x2)", &c).unwrap();
        let s = c.expr("x2^3*x0 + y1").unwrap();
        assert_eq!(iterated_symbol(&d, &s).unwrap(), c.expr("3*x2^2*x0").unwrap());
    }

    #[test]
    fn plane_wave_of_box() {
        let c = minkowski();
        let p = Context::free(&["p0", "p1", "p2", "p3"], &["m"]);
        let k = ["p0", "-p1", "-p2", "-p3"].map(|t| RatExpr::parse(t, &p).unwrap());
        let b = DifferentialOperator::parse(BOX, &c).unwrap();
        let w = plane_wave_conjugation(&b, &k, &p).unwrap();
        let pp = RatExpr::parse("p0^2 - p1^2 - p2^2 - p3^2", &p).unwrap();
        assert_eq!(w.normalized, pp);
        assert_eq!(w.re, -&pp);
        assert!(w.im.is_zero());
        let one = plane_wave_conjugation(&DifferentialOperator::identity(&c), &k, &p).unwrap();
        assert!(one.normalized.is_one() && one.re.is_one());
    }

    #[test]
    fn klein_gordon_vanishes_on_shell_in_raw_convention() {
        let c = minkowski();
        let shell = Context::builder()
            .dependent("p0", "m^2 + p1^2 + p2^2 + p3^2")
            .coords(&["p1", "p2", "p3"])
            .params(&["m"])
            .build()
            .unwrap();
        let k = ["p0", "-p1", "-p2", "-p3"].map(|t| RatExpr::parse(t, &shell).unwrap());
        let kg = DifferentialOperator::parse(&format!("{BOX} + m^2"), &c).unwrap();
        let w = plane_wave_conjugation(&kg, &k, &shell).unwrap();
        assert!(w.re.is_zero());
        assert_eq!(w.normalized, RatExpr::parse("2*m^2", &shell).unwrap());
    }

    #[test]
    fn non_constant_operator_rejected() {
        let c = minkowski();
        let p = Context::free(&["p0", "p1", "p2", "p3"], &[]);
        let k = ["p0", "p1", "p2", "p3"].map(|t| RatExpr::parse(t, &p).unwrap());
        let d = DifferentialOperator::parse("x0*d(x1)", &c).unwrap();
        assert!(matches!(
            plane_wave_conjugation(&d, &k, &p),
            Err(Error::NonConstantCoefficients)
        ));
    }

    #[test]
    fn hamilton_jacobi_residuals() {
        let metric = [1, -1, -1, -1].map(int);
        let xs = ["x0", "x1", "x2", "x3"];
        let ctx = Context::builder()
            .coords(&xs)
            .dependent("k0", "m^2 + k1^2 + k2^2 + k3^2")
            .coords(&["k1", "k2", "k3"])
            .params(&["m", "y0", "y1", "y2", "y3"])
            .build()
            .unwrap();
        let s = RatExpr::parse("k0*(x0-y0) - k1*(x1-y1) - k2*(x2-y2) - k3*(x3-y3)", &ctx).unwrap();
        let m2 = RatExpr::parse("m^2", &ctx).unwrap();
        assert!(hj_residual(&s, &m2, &xs, &metric).unwrap().is_zero());
        let zero = RatExpr::zero(&ctx);
        assert!(hj_residual(&zero, &zero, &xs, &metric).unwrap().is_zero());

        let interval = Context::builder()
            .dependent("x0", "2*x0*y0 - y0^2 + m^2 + (x1-y1)^2 + (x2-y2)^2 + (x3-y3)^2")
            .coords(&["x1", "x2", "x3"])
            .params(&["m", "y0", "y1", "y2", "y3"])
            .build()
            .unwrap();
        let free = Context::free(&xs, &["m", "y0", "y1", "y2", "y3"]);
        let s = RatExpr::parse("(x0-y0)^2 - (x1-y1)^2 - (x2-y2)^2 - (x3-y3)^2", &free).unwrap();
        let c = RatExpr::parse("4*m^2", &free).unwrap();
        let r = hj_residual(&s, &c, &xs, &metric).unwrap();
        assert!(!r.is_zero());
        assert!(r.transfer(&interval).unwrap().is_zero());
    }
}
