//! Vector-field action, pairings and the Schouten–Nijenhuis bracket.
//!
//! The bracket follows the Lichnerowicz convention: it restricts to the Lie
//! bracket on vector fields, `[X, T] = L_X T`, it is a graded derivation of
//! `∧` in its second slot, and `[P, Q] = (-1)^{pq} [Q, P]`. With this choice a
//! Jacobi pair satisfies `[Λ, Λ] = 2Γ∧Λ`.

use std::collections::BTreeMap;

use super::chart::CancelToken;
use super::graded::{mask_indices, DifferentialForm, MultivectorField};
use crate::algebra::RatExpr;
use crate::error::{Error, Result};

impl MultivectorField {
    fn check(&self, other: &MultivectorField) -> Result<()> {
        if super::Chart::same(self.chart(), other.chart()) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    fn expect_degree(&self, d: usize) -> Result<()> {
        if self.degree() == d {
            Ok(())
        } else {
            Err(Error::Invalid(format!("expected degree {d}, got {}", self.degree())))
        }
    }

    /// `X(f)` for a vector field.
    pub fn apply(&self, f: &RatExpr) -> Result<RatExpr> {
        self.expect_degree(1)?;
        let chart = self.chart();
        let mut acc = RatExpr::zero(chart.context());
        for (idx, c) in self.terms() {
            let df = f.derivative(chart.var(idx[0]))?;
            if !df.is_zero() {
                acc = acc.try_add(&c.try_mul(&df)?)?;
            }
        }
        Ok(acc)
    }

    /// `Λ(α, β) = Σ_{a<b} Λ^{ab} (α_a β_b − α_b β_a)` for a bivector and one-forms.
    pub fn pair(&self, alpha: &DifferentialForm, beta: &DifferentialForm) -> Result<RatExpr> {
        self.expect_degree(2)?;
        let a = alpha.one_form_components()?;
        let b = beta.one_form_components()?;
        let mut acc = RatExpr::zero(self.chart().context());
        for (idx, c) in self.terms() {
            let (i, j) = (idx[0], idx[1]);
            let t = a[i].try_mul(&b[j])?.try_sub(&a[j].try_mul(&b[i])?)?;
            if !t.is_zero() {
                acc = acc.try_add(&c.try_mul(&t)?)?;
            }
        }
        Ok(acc)
    }

    /// `Λ(α, ·)`: the vector field with components `Σ_a Λ^{ab} α_a`.
    pub fn sharp(&self, alpha: &DifferentialForm) -> Result<MultivectorField> {
        self.expect_degree(2)?;
        let a = alpha.one_form_components()?;
        let chart = self.chart();
        let mut out = MultivectorField::zero(chart, 1);
        for (idx, c) in self.terms() {
            let (i, j) = (idx[0], idx[1]);
            if !a[i].is_zero() {
                out.accumulate(1 << j, c.try_mul(&a[i])?);
            }
            if !a[j].is_zero() {
                out.accumulate(1 << i, -c.try_mul(&a[j])?);
            }
        }
        Ok(out)
    }

    /// Lie derivative `L_X T = [X, T]` for a vector field `X`.
    pub fn lie_derivative(&self, x: &MultivectorField) -> Result<MultivectorField> {
        x.expect_degree(1)?;
        x.schouten(self)
    }

    /// Schouten–Nijenhuis bracket `[self, other]`.
    pub fn schouten(&self, other: &MultivectorField) -> Result<MultivectorField> {
        self.schouten_cancellable(other, None)
    }

    pub fn schouten_cancellable(
        &self,
        other: &MultivectorField,
        token: Option<&CancelToken>,
    ) -> Result<MultivectorField> {
        self.check(other)?;
        let raw = graded_bracket(self, other, token)?;
        // Convert from the first-slot-derivation normalization.
        Ok(if self.degree() % 2 == 0 { raw.neg() } else { raw })
    }
}

/// Bracket with `[X, Y]` the Lie bracket, `[X, f] = X(f)`, graded derivation in
/// the first slot `[A∧B, Q] = A∧[B, Q] + (-1)^{b(q-1)} [A, Q]∧B`, and
/// antisymmetry `[P, Q] = −(-1)^{(p-1)(q-1)} [Q, P]`.
fn graded_bracket(p: &MultivectorField, q: &MultivectorField, token: Option<&CancelToken>) -> Result<MultivectorField> {
    CancelToken::check(token)?;
    let chart = p.chart();
    let (dp, dq) = (p.degree(), q.degree());
    if dp + dq == 0 {
        return Ok(MultivectorField::zero(chart, 0));
    }
    if dp == 0 {
        let r = graded_bracket(q, p, token)?;
        return Ok(if dq % 2 == 1 { r.neg() } else { r });
    }
    let mut out = MultivectorField::zero(chart, dp + dq - 1);
    let one = RatExpr::one(chart.context());
    let mut rest_cache: BTreeMap<u32, MultivectorField> = BTreeMap::new();
    for (mask, f) in p.masks() {
        let lead = mask.trailing_zeros() as usize;
        let a = MultivectorField::from_terms(chart, 1, [(vec![lead], f.clone())]);
        let term = if dp == 1 {
            lie_along(&a, q, token)?
        } else {
            let rest = mask & !(1 << lead);
            let b = MultivectorField::from_terms(chart, dp - 1, [(mask_indices(rest), one.clone())]);
            let bq = match rest_cache.get(&rest) {
                Some(v) => v.clone(),
                None => {
                    let v = graded_bracket(&b, q, token)?;
                    rest_cache.insert(rest, v.clone());
                    v
                }
            };
            let first = a.wedge(&bq)?;
            let second = lie_along(&a, q, token)?.wedge(&b)?;
            let sign_odd = ((dp - 1) * (dq + 1)) % 2 == 1; // (-1)^{b(q-1)}
            first.add(&if sign_odd { second.neg() } else { second })?
        };
        out = out.add(&term)?;
    }
    Ok(out)
}

/// `L_A Q` for a vector field `A`, computed componentwise.
fn lie_along(a: &MultivectorField, q: &MultivectorField, token: Option<&CancelToken>) -> Result<MultivectorField> {
    let chart = a.chart();
    if q.degree() == 0 {
        let g = q.as_scalar().expect("degree 0");
        return Ok(MultivectorField::scalar(chart, a.apply(&g)?));
    }
    let mut out = MultivectorField::zero(chart, q.degree());
    // [A, ∂_b] = −Σ_c ∂_b(A^c) ∂_c
    let dim = chart.dim();
    let mut brackets: Vec<Option<Vec<(usize, RatExpr)>>> = vec![None; dim];
    for (mask, g) in q.masks() {
        CancelToken::check(token)?;
        let ag = a.apply(g)?;
        if !ag.is_zero() {
            out.accumulate(mask, ag);
        }
        let idx = mask_indices(mask);
        for (k, &b) in idx.iter().enumerate() {
            if brackets[b].is_none() {
                let mut comps = Vec::new();
                for (ai, ac) in a.terms() {
                    let d = ac.derivative(chart.var(b))?;
                    if !d.is_zero() {
                        comps.push((ai[0], -d));
                    }
                }
                brackets[b] = Some(comps);
            }
            for (c, coeff) in brackets[b].as_ref().unwrap() {
                let mut new_idx = idx.clone();
                new_idx[k] = *c;
                let t = g.try_mul(coeff)?;
                out = out.add(&MultivectorField::from_terms(chart, q.degree(), [(new_idx, t)]))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Context;
    use crate::exterior::Chart;
    use std::sync::Arc;

    fn darboux() -> Arc<Chart> {
        let ctx = Context::free(&["x", "p", "z"], &[]);
        Chart::all("D", &ctx).unwrap()
    }

    #[test]
    fn lie_bracket_of_vector_fields() {
        let ctx = Context::free(&["x"], &[]);
        let c = Chart::all("R", &ctx).unwrap();
        let dx = MultivectorField::parse("@x", &c).unwrap();
        let xdx = MultivectorField::parse("x*@x", &c).unwrap();
        assert_eq!(dx.schouten(&xdx).unwrap(), dx);
    }

    #[test]
    fn constant_bivector_is_poisson() {
        let ctx = Context::free(&["x0", "x1", "p0", "p1"], &[]);
        let c = Chart::all("T", &ctx).unwrap();
        let l = MultivectorField::parse("@p0/\\@x0 + @p1/\\@x1", &c).unwrap();
        assert!(l.schouten(&l).unwrap().is_zero());
    }

    #[test]
    fn darboux_jacobi_pair_structure_equations() {
        let c = darboux();
        let lam = MultivectorField::parse("(@x + p*@z)/\\@p", &c).unwrap();
        let gam = MultivectorField::parse("@z", &c).unwrap();
        let ll = lam.schouten(&lam).unwrap();
        let rhs = gam.wedge(&lam).unwrap().scale(&c.expr("2").unwrap());
        assert_eq!(ll, rhs);
        assert!(lam.lie_derivative(&gam).unwrap().is_zero());
    }

    #[test]
    fn sharp_and_pair_agree() {
        let c = darboux();
        let lam = MultivectorField::parse("(@x + p*@z)/\\@p", &c).unwrap();
        let f = c.expr("x*z").unwrap();
        let g = c.expr("p^2 + z").unwrap();
        let df = DifferentialForm::differential(&c, &f).unwrap();
        let dg = DifferentialForm::differential(&c, &g).unwrap();
        let via_pair = lam.pair(&df, &dg).unwrap();
        let via_sharp = lam.sharp(&df).unwrap().apply(&g).unwrap();
        assert_eq!(via_pair, via_sharp);
    }
}
