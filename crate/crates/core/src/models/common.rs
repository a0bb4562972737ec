//! Helpers shared by the Minkowski-space models.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::expr::format_scalar;
use crate::algebra::{int, RatExpr, Scalar};
use crate::contact::{classify, Witness};
use crate::error::{Error, Result};
use crate::exterior::graded::Kind;
use crate::exterior::{Chart, Graded};
use crate::report::{Check, Status};

/// Diagonal entries of the Minkowski metric, signature (+,−,−,−).
pub const METRIC: [i64; 4] = [1, -1, -1, -1];

pub fn g(mu: usize) -> i64 {
    METRIC[mu]
}

/// Kronecker metric component `g^{μν}` (equal to `g_{μν}`).
pub fn g2(mu: usize, nu: usize) -> i64 {
    if mu == nu {
        METRIC[mu]
    } else {
        0
    }
}

/// Mass parameter: an indeterminate `m` or a fixed rational.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Mass {
    #[default]
    Symbolic,
    Value(Scalar),
}

impl Mass {
    /// Text used in expressions for `m`.
    pub fn text(&self) -> String {
        match self {
            Mass::Symbolic => "m".to_string(),
            Mass::Value(v) => format!("({})", format_scalar(v)),
        }
    }

    pub fn params(&self) -> Vec<&'static str> {
        match self {
            Mass::Symbolic => vec!["m"],
            Mass::Value(_) => vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Mass::Value(v) if *v == int(0) => Err(Error::Invalid("the mass must be non-zero".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Mass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mass::Symbolic => f.write_str("m"),
            Mass::Value(v) => f.write_str(&format_scalar(v)),
        }
    }
}

/// Which tensor a negative-control run corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    Lambda,
    Gamma,
    Theta,
}

impl FromStr for Corruption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(Corruption::Lambda),
            "gamma" => Ok(Corruption::Gamma),
            "theta" => Ok(Corruption::Theta),
            _ => Err(Error::Invalid(format!(
                "unknown tensor `{s}` (expected lambda, gamma or theta)"
            ))),
        }
    }
}

/// The rational witness point: `x = 0`, spatial momenta `(1, 2, 3)`, `m = 1`.
pub fn witness(momentum: &str, others: &[(&str, i64)]) -> Witness {
    let mut w: Witness = HashMap::new();
    for mu in 0..4 {
        w.insert(format!("x{mu}"), int(0));
    }
    for i in 1..4 {
        w.insert(format!("{momentum}{i}"), int(i as i64));
    }
    w.insert("m".to_string(), int(1));
    for (k, v) in others {
        w.insert(k.to_string(), int(*v));
    }
    w
}

pub fn expect_equal(id: impl Into<String>, reference: &str, lhs: &RatExpr, rhs: &RatExpr) -> Check {
    match lhs.try_sub(rhs) {
        Ok(d) => Check::verdict(id, reference, d.is_zero(), || d.to_string()),
        Err(e) => Check::new(id, reference, Status::Fail).with_residual(e.to_string()),
    }
}

pub fn expect_graded_equal<K: Kind>(
    id: impl Into<String>,
    reference: &str,
    lhs: &Graded<K>,
    rhs: &Graded<K>,
    constrained: Option<&Arc<crate::algebra::Context>>,
) -> Check {
    match lhs.sub(rhs).and_then(|d| classify(&d, constrained)) {
        Ok((status, residual)) => {
            let mut c = Check::new(id, reference, status);
            c.residual = residual;
            c
        }
        Err(e) => Check::new(id, reference, Status::Fail).with_residual(e.to_string()),
    }
}

pub fn expect_zero<K: Kind>(
    id: impl Into<String>,
    reference: &str,
    t: Result<Graded<K>>,
    constrained: Option<&Arc<crate::algebra::Context>>,
) -> Check {
    match t.and_then(|d| classify(&d, constrained)) {
        Ok((status, residual)) => {
            let mut c = Check::new(id, reference, status);
            c.residual = residual;
            c
        }
        Err(e) => Check::new(id, reference, Status::Fail).with_residual(e.to_string()),
    }
}

pub fn failed(id: impl Into<String>, reference: &str, e: Error) -> Check {
    Check::new(id, reference, Status::Fail).with_residual(e.to_string())
}

/// Move a tensor to `target`, renaming coordinates and substituting values.
/// `rename` maps source names to target names; `values` fixes further
/// source symbols (for example `m ↦ 1`).
pub fn transport<K: Kind>(
    t: &Graded<K>,
    target: &Arc<Chart>,
    rename: &HashMap<String, String>,
    values: &HashMap<String, RatExpr>,
) -> Result<Graded<K>> {
    let src = t.chart();
    let images = substitution_images(src.context(), target, rename, values)?;
    let mut terms = Vec::new();
    for (idx, c) in t.terms() {
        let new_idx = idx
            .iter()
            .map(|&a| {
                let name = src.coord_name(a);
                let to = rename.get(name).map(String::as_str).unwrap_or(name);
                target.position(to)
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push((new_idx, c.substitute(&images, target.context())?));
    }
    Ok(Graded::from_terms(target, t.degree(), terms))
}

pub fn transport_function(
    f: &RatExpr,
    target: &Arc<Chart>,
    rename: &HashMap<String, String>,
    values: &HashMap<String, RatExpr>,
) -> Result<RatExpr> {
    let images = substitution_images(f.context(), target, rename, values)?;
    f.substitute(&images, target.context())
}

fn substitution_images(
    src: &Arc<crate::algebra::Context>,
    target: &Arc<Chart>,
    rename: &HashMap<String, String>,
    values: &HashMap<String, RatExpr>,
) -> Result<HashMap<String, RatExpr>> {
    let mut images = values.clone();
    for (from, to) in rename {
        if src.has(from) {
            images.insert(from.clone(), RatExpr::var(target.context(), to)?);
        }
    }
    Ok(images)
}
