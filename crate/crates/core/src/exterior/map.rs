//! Smooth maps between charts, pullback of forms and restriction of
//! tangent multivectors to intrinsic charts.

use std::collections::HashMap;
use std::sync::Arc;

use super::chart::{CancelToken, Chart};
use super::graded::{DifferentialForm, MultivectorField};
use crate::algebra::{RatExpr, VarKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SmoothMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    images: HashMap<String, RatExpr>,
}

impl SmoothMap {
    /// `images` must give every target chart coordinate and every dependent
    /// variable of the target context; target parameters not listed map to
    /// the same-named source parameter. Target constraints are checked.
    pub fn new(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        images: impl IntoIterator<Item = (String, RatExpr)>,
    ) -> Result<SmoothMap> {
        let images: HashMap<String, RatExpr> = images.into_iter().collect();
        let tctx = target.context();
        for (name, img) in &images {
            tctx.index_of(name)?;
            if !crate::algebra::expr::same_context(img.context(), source.context()) {
                return Err(Error::ContextMismatch);
            }
        }
        for a in 0..target.dim() {
            let name = target.coord_name(a);
            if !images.contains_key(name) {
                return Err(Error::Construction(format!("no image for target coordinate `{name}`")));
            }
        }
        for v in 0..tctx.nvars() {
            let name = tctx.name(v);
            match tctx.kind(v) {
                VarKind::Dependent if !images.contains_key(name) => {
                    return Err(Error::Construction(format!("no image for dependent variable `{name}`")));
                }
                VarKind::Parameter if !images.contains_key(name) => {
                    source.context().index_of(name)?;
                }
                _ => {}
            }
        }
        let map = SmoothMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for rule in tctx.rules() {
            // w² − R as an unreduced polynomial; reducing first would hide it.
            let n = tctx.nvars();
            let w = crate::algebra::MultiPoly::var(n, rule.var);
            let raw = w.mul(&w).sub(&rule.replacement());
            let one = crate::algebra::MultiPoly::one(n);
            let residual = map.pull_free(&RatExpr::from_canonical(raw, one, tctx))?;
            if !residual.is_zero() {
                return Err(Error::ConstraintViolation(tctx.name(rule.var).to_string()));
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn image(&self, name: &str) -> Option<&RatExpr> {
        self.images.get(name)
    }

    /// Substitute images into a polynomial written with target names without
    /// first reducing by the target rules.
    fn pull_free(&self, e: &RatExpr) -> Result<RatExpr> {
        e.substitute(&self.images, self.source.context())
    }

    /// Pullback of a function.
    pub fn pullback_function(&self, f: &RatExpr) -> Result<RatExpr> {
        if !crate::algebra::expr::same_context(f.context(), self.target.context()) {
            return Err(Error::ContextMismatch);
        }
        self.pull_free(f)
    }

    pub fn pullback(&self, alpha: &DifferentialForm) -> Result<DifferentialForm> {
        self.pullback_cancellable(alpha, None)
    }

    pub fn pullback_cancellable(
        &self,
        alpha: &DifferentialForm,
        token: Option<&CancelToken>,
    ) -> Result<DifferentialForm> {
        if !Chart::same(alpha.chart(), &self.target) {
            return Err(Error::ChartMismatch);
        }
        let mut differentials: Vec<Option<DifferentialForm>> = vec![None; self.target.dim()];
        let mut out = DifferentialForm::zero(&self.source, alpha.degree());
        for (idx, c) in alpha.terms() {
            CancelToken::check(token)?;
            let mut term = DifferentialForm::scalar(&self.source, self.pullback_function(&c)?);
            for &j in &idx {
                if differentials[j].is_none() {
                    let img = &self.images[self.target.coord_name(j)];
                    differentials[j] = Some(DifferentialForm::differential(&self.source, img)?);
                }
                term = term.wedge_cancellable(differentials[j].as_ref().unwrap(), token)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// Restrict a multivector tangent to a constraint surface, given on an ambient
/// chart, to an intrinsic chart sharing coordinate names. Components along
/// ambient coordinates missing from the intrinsic chart are dropped; tangency
/// itself is the caller's responsibility.
pub fn restrict_multivector(t: &MultivectorField, intrinsic: &Arc<Chart>) -> Result<MultivectorField> {
    let ambient = t.chart();
    let mut terms = Vec::new();
    'outer: for (idx, c) in t.terms() {
        let mut new_idx = Vec::with_capacity(idx.len());
        for &a in &idx {
            match intrinsic.position(ambient.coord_name(a)) {
                Ok(b) => new_idx.push(b),
                Err(Error::NotACoordinate(_)) => continue 'outer,
                Err(e) => return Err(e),
            }
        }
        terms.push((new_idx, c.transfer(intrinsic.context())?));
    }
    Ok(MultivectorField::from_terms(intrinsic, t.degree(), terms))
}
