//! Exact Gauss–Jordan elimination over the fraction field of a context.

use std::sync::Arc;

use super::context::Context;
use super::expr::RatExpr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<RatExpr>),
    /// One solution plus a basis of the kernel of the matrix.
    Underdetermined {
        particular: Vec<RatExpr>,
        kernel: Vec<Vec<RatExpr>>,
    },
}

impl Solution {
    pub fn particular(&self) -> &[RatExpr] {
        match self {
            Solution::Unique(x) => x,
            Solution::Underdetermined { particular, .. } => particular,
        }
    }
}

fn weight(e: &RatExpr) -> (u32, usize) {
    (
        e.numer().total_degree() + e.denom().total_degree(),
        e.numer().len() + e.denom().len(),
    )
}

/// Solve `a · x = b` for an `m × n` matrix `a`.
pub fn linear_solve(a: &[Vec<RatExpr>], b: &[RatExpr], ctx: &Arc<Context>) -> Result<Solution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::Invalid(format!("{} rows but {} right-hand sides", m, b.len())));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    let mut rows: Vec<Vec<RatExpr>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let best = (r..m)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| weight(&rows[i][col]));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip()?;
        for j in col..=n {
            if !rows[r][j].is_zero() {
                rows[r][j] = rows[r][j].try_mul(&inv)?;
            }
        }
        for i in 0..m {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..=n {
                if rows[r][j].is_zero() {
                    continue;
                }
                let t = factor.try_mul(&rows[r][j])?;
                rows[i][j] = rows[i][j].try_sub(&t)?;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(Error::NoSolution);
    }

    let mut particular = vec![RatExpr::zero(ctx); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    if pivots.len() == n {
        return Ok(Solution::Unique(particular));
    }
    let mut kernel = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RatExpr::zero(ctx); n];
        v[f] = RatExpr::one(ctx);
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -&rows[i][f];
        }
        kernel.push(v);
    }
    Ok(Solution::Underdetermined { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(t: &str, ctx: &Arc<Context>) -> RatExpr {
        RatExpr::parse(t, ctx).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let ctx = Context::free(&["x"], &[]);
        let a = vec![vec![e("1", &ctx), e("0", &ctx)], vec![e("0", &ctx), e("1", &ctx)]];
        let b = vec![e("x", &ctx), e("x^2", &ctx)];
        assert_eq!(linear_solve(&a, &b, &ctx).unwrap(), Solution::Unique(b));
    }

    #[test]
    fn diagonal_solve() {
        let ctx = Context::free(&["x"], &[]);
        let a = vec![vec![e("x", &ctx), e("0", &ctx)], vec![e("0", &ctx), e("x", &ctx)]];
        let b = vec![e("x^2", &ctx), e("x", &ctx)];
        let s = linear_solve(&a, &b, &ctx).unwrap();
        assert_eq!(s, Solution::Unique(vec![e("x", &ctx), e("1", &ctx)]));
    }

    #[test]
    fn inconsistent_system() {
        let ctx = Context::free(&["x"], &[]);
        let a = vec![vec![e("x", &ctx)], vec![e("2*x", &ctx)]];
        let b = vec![e("1", &ctx), e("1", &ctx)];
        assert_eq!(linear_solve(&a, &b, &ctx), Err(Error::NoSolution));
    }

    #[test]
    fn kernel_of_rank_deficient_system() {
        let ctx = Context::free(&["x", "y"], &[]);
        let a = vec![vec![e("x", &ctx), e("y", &ctx), e("1", &ctx)]];
        let b = vec![e("x*y", &ctx)];
        let Solution::Underdetermined { particular, kernel } = linear_solve(&a, &b, &ctx).unwrap() else {
            panic!("expected kernel");
        };
        assert_eq!(kernel.len(), 2);
        let dot = |v: &[RatExpr]| {
            a[0].iter()
                .zip(v)
                .fold(RatExpr::zero(&ctx), |acc, (p, q)| &acc + &(p * q))
        };
        assert_eq!(dot(&particular), b[0]);
        for k in &kernel {
            assert!(dot(k).is_zero());
        }
    }
}
