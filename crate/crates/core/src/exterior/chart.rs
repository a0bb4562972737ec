use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::algebra::{Context, RatExpr, VarKind};
use crate::error::{Error, Result};

/// Coordinate chart: an ordered subset of a context's coordinates.
///
/// Dependent variables of the context are algebraic functions of the chart
/// coordinates; they never carry a basis differential of their own.
#[derive(Debug, Clone)]
pub struct Chart {
    name: String,
    ctx: Arc<Context>,
    coords: Vec<usize>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.coords == other.coords && *self.ctx == *other.ctx
    }
}

impl Eq for Chart {}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, ctx: &Arc<Context>, coords: &[S]) -> Result<Arc<Chart>> {
        if coords.len() > 32 {
            return Err(Error::Invalid("charts are limited to 32 coordinates".into()));
        }
        let mut idx = Vec::with_capacity(coords.len());
        for c in coords {
            let v = ctx.index_of(c.as_ref())?;
            if ctx.kind(v) != VarKind::Coordinate {
                return Err(Error::NotACoordinate(c.as_ref().to_string()));
            }
            if idx.contains(&v) {
                return Err(Error::Invalid(format!("duplicate chart coordinate `{}`", c.as_ref())));
            }
            idx.push(v);
        }
        for rule in ctx.rules() {
            let used = rule.replacement().vars_used();
            for (v, u) in used.iter().enumerate() {
                if *u && ctx.kind(v) == VarKind::Coordinate && !idx.contains(&v) {
                    return Err(Error::Invalid(format!(
                        "constraint for `{}` uses `{}`, which is not a chart coordinate",
                        ctx.name(rule.var),
                        ctx.name(v)
                    )));
                }
            }
        }
        Ok(Arc::new(Chart {
            name: name.to_string(),
            ctx: ctx.clone(),
            coords: idx,
        }))
    }

    /// A chart using every coordinate of `ctx` in declaration order.
    pub fn all(name: &str, ctx: &Arc<Context>) -> Result<Arc<Chart>> {
        let names: Vec<String> = ctx.coordinates().map(|v| ctx.name(v).to_string()).collect();
        Chart::new(name, ctx, &names)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_intrinsic(&self) -> bool {
        self.ctx.has_rules()
    }

    /// Context variable index of chart coordinate `a`.
    pub fn var(&self, a: usize) -> usize {
        self.coords[a]
    }

    pub fn coord_name(&self, a: usize) -> &str {
        self.ctx.name(self.coords[a])
    }

    pub fn coord_names(&self) -> Vec<String> {
        (0..self.dim()).map(|a| self.coord_name(a).to_string()).collect()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        let v = self.ctx.index_of(name)?;
        self.coords
            .iter()
            .position(|&c| c == v)
            .ok_or_else(|| Error::NotACoordinate(name.to_string()))
    }

    pub fn coordinate(&self, a: usize) -> RatExpr {
        RatExpr::var_index(&self.ctx, self.coords[a])
    }

    pub fn expr(&self, text: &str) -> Result<RatExpr> {
        RatExpr::parse(text, &self.ctx)
    }

    pub fn same(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.coord_names().join(", "))
    }
}

/// Cooperative cancellation flag shared between a caller and long operations.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn check(token: Option<&CancelToken>) -> Result<()> {
        match token {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}
