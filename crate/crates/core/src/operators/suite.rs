//! Verification battery for operators, symbols and plane waves.

use std::sync::Arc;

use super::operator::DifferentialOperator;
use super::symbols::{hj_residual, iterated_commutator, iterated_symbol, plane_wave_conjugation};
use crate::algebra::{int, Context, RatExpr, Scalar};
use crate::error::Result;
use crate::exterior::Chart;
use crate::models::common::{expect_equal, failed};
use crate::report::{timed, Check, Status, VerificationReport};

pub const BOX: &str = "d2(x0) - d2(x1) - d2(x2) - d2(x3)";
const XS: [&str; 4] = ["x0", "x1", "x2", "x3"];
const LINEAR_PHASE: &str = "k0*x0 - k1*x1 - k2*x2 - k3*x3";
const INTERVAL: &str = "(x0-y0)^2 - (x1-y1)^2 - (x2-y2)^2 - (x3-y3)^2";

fn metric() -> [Scalar; 4] {
    [1, -1, -1, -1].map(int)
}

/// Minkowski chart `x0..x3` with `m`, `k` and `y` as parameters.
pub fn minkowski_chart() -> Result<Arc<Chart>> {
    let ctx = Context::free(&XS, &["m", "k0", "k1", "k2", "k3", "y0", "y1", "y2", "y3"]);
    Chart::all("M", &ctx)
}

/// `0` outright, `0` only in `constrained`, or neither.
fn zero_status(id: &str, reference: &str, residual: Result<RatExpr>, constrained: &Arc<Context>) -> Check {
    match residual.and_then(|r| Ok((r.is_zero(), r.transfer(constrained)?))) {
        Ok((true, _)) => Check::new(id, reference, Status::Pass),
        Ok((false, reduced)) if reduced.is_zero() => Check::new(id, reference, Status::PassModConstraint),
        Ok((false, reduced)) => Check::new(id, reference, Status::Fail).with_residual(reduced.to_string()),
        Err(e) => failed(id, reference, e),
    }
}

fn op(text: &str, chart: &Arc<Chart>) -> Result<DifferentialOperator> {
    DifferentialOperator::parse(text, chart)
}

fn expect_operator(
    id: &str,
    reference: &str,
    got: Result<DifferentialOperator>,
    expected: Result<DifferentialOperator>,
) -> Check {
    match (got, expected) {
        (Ok(g), Ok(e)) => Check::verdict(id, reference, g == e, || format!("{g} ≠ {e}")),
        (Err(e), _) | (_, Err(e)) => failed(id, reference, e),
    }
}

pub fn verify() -> VerificationReport {
    let mut r = VerificationReport::new("operator");
    let chart = match minkowski_chart() {
        Ok(c) => c,
        Err(e) => {
            r.push(failed("setup", "Minkowski chart", e));
            return r;
        }
    };
    r.extend(composition_checks(&chart));
    r.extend(symbol_checks(&chart));
    r.extend(plane_wave_checks(&chart));
    r.extend(hamilton_jacobi_checks());
    r
}

fn composition_checks(c: &Arc<Chart>) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(expect_operator(
        "compose.canonical",
        "∂_x ∘ x = x∂_x + 1",
        op("d(x0)", c).and_then(|d| d.compose(&op("x0", c)?)),
        op("x0*d(x0) + 1", c),
    ));
    out.push(expect_operator(
        "compose.multiplications-commute",
        "Ŝ∘T̂ = T̂∘Ŝ",
        op("x0*x1 - x2^3", c).and_then(|s| s.compose(&op("x3 + k0*x0", c)?)),
        op("x3 + k0*x0", c).and_then(|t| t.compose(&op("x0*x1 - x2^3", c)?)),
    ));
    out.push(expect_operator(
        "compose.identity",
        "□ ∘ 1 = □",
        op(BOX, c).and_then(|b| b.compose(&DifferentialOperator::identity(c))),
        op(BOX, c),
    ));
    out.push(expect_operator(
        "commutator.linear-phase",
        "[□, Ŝ] = 2k^μ∂_μ for S = k_μx^μ",
        op(BOX, c).and_then(|b| b.commutator(&op(LINEAR_PHASE, c)?)),
        op("2*k0*d(x0) + 2*k1*d(x1) + 2*k2*d(x2) + 2*k3*d(x3)", c),
    ));
    out.push(expect_operator(
        "commutator.self",
        "[Ŝ, Ŝ] = 0",
        op(INTERVAL, c).and_then(|s| s.commutator(&s)),
        Ok(DifferentialOperator::zero(c)),
    ));
    for (mu, x) in XS.iter().enumerate() {
        for (nu, y) in XS.iter().enumerate() {
            let expected = if mu == nu {
                DifferentialOperator::identity(c)
            } else {
                DifferentialOperator::zero(c)
            };
            out.push(expect_operator(
                &format!("commutator.canonical.{mu}{nu}"),
                "[∂_μ, x̂^ν] = δ_μ^ν",
                op(&format!("d({x})"), c).and_then(|d| d.commutator(&op(y, c)?)),
                Ok(expected),
            ));
        }
    }
    out.push(timed(|| {
        match op(BOX, c).and_then(|b| b.commutator(&op(INTERVAL, c)?)) {
            Ok(d) => Check::verdict("commutator.order-drop", "order([□, Ŝ]) = 1", d.order() == 1, || {
                format!("order {}", d.order())
            }),
            Err(e) => failed("commutator.order-drop", "order([□, Ŝ]) = 1", e),
        }
    }));
    out
}

fn symbol_checks(c: &Arc<Chart>) -> Vec<Check> {
    let mut out = Vec::new();
    let expr = |t: &str| c.expr(t);
    out.push(
        match (op(BOX, c), expr(LINEAR_PHASE), expr("k0^2 - k1^2 - k2^2 - k3^2")) {
            (Ok(b), Ok(s), Ok(kk)) => match iterated_symbol(&b, &s) {
                Ok(v) => expect_equal("symbol.linear-phase", "σ_□(dS) = k·k for S = k_μx^μ", &v, &kk),
                Err(e) => failed("symbol.linear-phase", "σ_□(dS) = k·k", e),
            },
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => failed("symbol.linear-phase", "σ_□(dS) = k·k", e),
        },
    );
    out.push(match (op("d(x2)", c), expr("x2^3*x0 + y1*x1")) {
        (Ok(d), Ok(s)) => match (iterated_symbol(&d, &s), s.partial_derivative("x2")) {
            (Ok(v), Ok(ds)) => expect_equal("symbol.first-order", "σ_∂(dS) = ∂S", &v, &ds),
            (Err(e), _) | (_, Err(e)) => failed("symbol.first-order", "σ_∂(dS) = ∂S", e),
        },
        (Err(e), _) | (_, Err(e)) => failed("symbol.first-order", "σ_∂(dS) = ∂S", e),
    });
    out.push(match (op(BOX, c), expr(INTERVAL)) {
        (Ok(b), Ok(s)) => match iterated_symbol(&b, &s) {
            Ok(v) => expect_equal(
                "symbol.interval",
                "σ_□(dS) = 4(x−y)² for S = (x−y)²",
                &v,
                &s.scale(&int(4)),
            ),
            Err(e) => failed("symbol.interval", "σ_□(dS) = 4(x−y)²", e),
        },
        (Err(e), _) | (_, Err(e)) => failed("symbol.interval", "σ_□(dS) = 4(x−y)²", e),
    });
    // Raw k-fold commutator over the symbol: the combinatorial factor.
    out.push(match (op(BOX, c), expr(LINEAR_PHASE)) {
        (Ok(b), Ok(s)) => match (iterated_commutator(&b, &s, 2), iterated_symbol(&b, &s)) {
            (Ok(raw), Ok(sym)) => match raw.as_multiplication().map(|f| f.checked_div(&sym)) {
                Some(Ok(ratio)) => Check::measured("symbol.normalization", "[[□, Ŝ], Ŝ] / σ_□(dS)", ratio.to_string()),
                Some(Err(e)) => failed("symbol.normalization", "[[□, Ŝ], Ŝ] / σ_□(dS)", e),
                None => Check::new("symbol.normalization", "[[□, Ŝ], Ŝ] / σ_□(dS)", Status::Fail)
                    .with_residual("double commutator keeps derivatives"),
            },
            (Err(e), _) | (_, Err(e)) => failed("symbol.normalization", "[[□, Ŝ], Ŝ] / σ_□(dS)", e),
        },
        (Err(e), _) | (_, Err(e)) => failed("symbol.normalization", "[[□, Ŝ], Ŝ] / σ_□(dS)", e),
    });
    out.push(
        match op("x0*d(x1)", c).and_then(|d| iterated_commutator(&d, &c.expr("x1")?, 2)) {
            Ok(d) => Check::verdict(
                "symbol.overshoot",
                "k+1 commutators of an order-k operator vanish",
                d.is_zero(),
                || d.to_string(),
            ),
            Err(e) => failed("symbol.overshoot", "k+1 commutators vanish", e),
        },
    );
    out
}

fn plane_wave_checks(c: &Arc<Chart>) -> Vec<Check> {
    let mut out = Vec::new();
    let run = || -> Result<Vec<Check>> {
        let free = Context::free(&["p0", "p1", "p2", "p3"], &["m"]);
        let shell = Context::builder()
            .dependent("p0", "m^2 + p1^2 + p2^2 + p3^2")
            .coords(&["p1", "p2", "p3"])
            .params(&["m"])
            .build()?;
        let covector = |ctx: &Arc<Context>| -> Result<Vec<RatExpr>> {
            ["p0", "-p1", "-p2", "-p3"]
                .iter()
                .map(|t| RatExpr::parse(t, ctx))
                .collect()
        };
        let pp = RatExpr::parse("p0^2 - p1^2 - p2^2 - p3^2", &free)?;
        let mut cs = Vec::new();
        let b = plane_wave_conjugation(&op(BOX, c)?, &covector(&free)?, &free)?;
        cs.push(expect_equal(
            "plane-wave.box",
            "e^{ip·x} □ e^{−ip·x} ↦ p·p",
            &b.normalized,
            &pp,
        ));
        cs.push(Check::measured(
            "plane-wave.box.raw",
            "order-0 part with ∂ ↦ ∂ − ip",
            format!("{} + i*({})", b.re, b.im),
        ));
        let id = plane_wave_conjugation(&DifferentialOperator::identity(c), &covector(&free)?, &free)?;
        cs.push(Check::verdict(
            "plane-wave.identity",
            "1 ↦ 1",
            id.normalized.is_one() && id.re.is_one(),
            || id.normalized.to_string(),
        ));
        let kg = op(&format!("{BOX} + m^2"), c)?;
        let w = plane_wave_conjugation(&kg, &covector(&free)?, &free)?;
        cs.push(expect_equal(
            "plane-wave.klein-gordon",
            "□ + m² ↦ p·p + m²",
            &w.normalized,
            &pp.try_add(&RatExpr::parse("m^2", &free)?)?,
        ));
        let on = plane_wave_conjugation(&kg, &covector(&shell)?, &shell)?;
        cs.push(Check::measured(
            "plane-wave.klein-gordon.on-shell",
            "□ + m² on p·p = m²",
            format!("normalized {}; raw {}", on.normalized, on.re),
        ));
        cs.push(Check::verdict(
            "plane-wave.klein-gordon.raw-on-shell",
            "raw (□ + m²) symbol vanishes on shell",
            on.re.is_zero() && on.im.is_zero(),
            || on.re.to_string(),
        ));
        // Pullback of the normalized symbol along p_μ ↦ ∂_μS agrees with the symbol.
        for (label, s) in [("linear-phase", LINEAR_PHASE), ("interval", INTERVAL)] {
            let s = c.expr(s)?;
            let grads = XS.iter().map(|x| s.partial_derivative(x)).collect::<Result<Vec<_>>>()?;
            let pulled = plane_wave_conjugation(&op(BOX, c)?, &grads, c.context())?;
            cs.push(expect_equal(
                format!("plane-wave.pullback.{label}"),
                "(dS)*σ_□ = [[□, Ŝ], Ŝ] / 2",
                &pulled.normalized,
                &iterated_symbol(&op(BOX, c)?, &s)?,
            ));
        }
        Ok(cs)
    };
    match run() {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(failed("plane-wave", "plane-wave conjugation", e)),
    }
    out
}

fn hamilton_jacobi_checks() -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let metric = metric();
        let mut cs = Vec::new();
        let params = ["m", "y0", "y1", "y2", "y3"];
        let free = Context::free(&["x0", "x1", "x2", "x3", "k0", "k1", "k2", "k3"], &params);
        let on_shell = Context::builder()
            .coords(&XS)
            .dependent("k0", "m^2 + k1^2 + k2^2 + k3^2")
            .coords(&["k1", "k2", "k3"])
            .params(&params)
            .build()?;
        let s = RatExpr::parse("k0*(x0-y0) - k1*(x1-y1) - k2*(x2-y2) - k3*(x3-y3)", &free)?;
        let m2 = RatExpr::parse("m^2", &free)?;
        cs.push(zero_status(
            "hamilton-jacobi.plane-wave",
            "g^{μν}∂_μS∂_νS = m² for S = k·(x−y), k² = m²",
            hj_residual(&s, &m2, &XS, &metric),
            &on_shell,
        ));
        let zero = RatExpr::zero(&free);
        cs.push(zero_status(
            "hamilton-jacobi.zero",
            "S = 0, c = 0",
            hj_residual(&zero, &zero, &XS, &metric),
            &free,
        ));
        let interval_free = Context::free(&XS, &params);
        let interval = Context::builder()
            .dependent("x0", "2*x0*y0 - y0^2 + m^2 + (x1-y1)^2 + (x2-y2)^2 + (x3-y3)^2")
            .coords(&["x1", "x2", "x3"])
            .params(&params)
            .build()?;
        let s = RatExpr::parse(INTERVAL, &interval_free)?;
        let gs = hj_residual(&s, &RatExpr::zero(&interval_free), &XS, &metric)?.transfer(&interval)?;
        let factor = gs.checked_div(&RatExpr::parse("m^2", &interval)?)?;
        cs.push(Check::measured(
            "hamilton-jacobi.interval.factor",
            "g^{μν}∂_μS∂_νS / m² for S = (x−y)² on (x−y)² = m²",
            factor.to_string(),
        ));
        cs.push(zero_status(
            "hamilton-jacobi.interval",
            "g^{μν}∂_μS∂_νS = 4m² for S = (x−y)²",
            hj_residual(&s, &RatExpr::parse("4*m^2", &interval_free)?, &XS, &metric),
            &interval,
        ));
        Ok(cs)
    };
    run().unwrap_or_else(|e| vec![failed("hamilton-jacobi", "Hamilton-Jacobi residuals", e)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_with_expected_measurements() {
        let r = verify();
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(r.duplicate_ids().is_empty());
        assert_eq!(r.get("symbol.normalization").unwrap().measured.as_deref(), Some("2"));
        assert_eq!(
            r.get("hamilton-jacobi.interval.factor").unwrap().measured.as_deref(),
            Some("4")
        );
        assert_eq!(
            r.get("hamilton-jacobi.plane-wave").unwrap().status,
            Status::PassModConstraint
        );
    }
}
