//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive-remainder-sequence algorithm: the polynomial is viewed
//! as univariate in one variable with coefficients in the remaining ones,
//! contents are split off recursively and the primitive parts are reduced by
//! pseudo-division. Results are monic in the graded-lex order.

use super::poly::{Monomial, MultiPoly};

/// Monic gcd of `a` and `b`; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 || b.len() == 1 {
        // gcd with a monomial is the common monomial content.
        let mc = a.monomial_content().gcd(&b.monomial_content());
        return MultiPoly::term(super::poly::int(1), mc);
    }

    // Pull out common monomial factors first; cheap and common.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let mg = ma.gcd(&mb);
        let ra = a.div_monomial(&ma).expect("monomial content divides");
        let rb = b.div_monomial(&mb).expect("monomial content divides");
        let g = gcd(&ra, &rb);
        return g.mul_term(&mg, &super::poly::int(1)).monic();
    }

    let ua = a.vars_used();
    let ub = b.vars_used();
    if let Some(v) = (0..n).find(|&v| ua[v] != ub[v]) {
        return if ua[v] {
            gcd(&content(a, v), b)
        } else {
            gcd(a, &content(b, v))
        };
    }
    // Main variable of lowest degree keeps pseudo-remainders small.
    let v = match (0..n)
        .filter(|&v| ua[v])
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v).min(b.degree_in(v))))
    {
        Some(v) => v,
        None => return MultiPoly::one(n),
    };
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_gcd(pa, pb, v);
    c.mul(&g).monic()
}

fn primitive_gcd(pa: MultiPoly, pb: MultiPoly, v: usize) -> MultiPoly {
    let n = pa.nvars();
    let (small, large) = if pb.degree_in(v) <= pa.degree_in(v) {
        (&pb, &pa)
    } else {
        (&pa, &pb)
    };
    if large.div_exact(small).is_some() {
        return small.monic();
    }
    if let Some(0) = image_degree(&pa, &pb, v) {
        return MultiPoly::one(n);
    }
    primitive_prs(pa, pb, v)
}

/// Degree in `v` of the gcd of `a` and `b` after substituting integers for
/// every other variable. It bounds the true degree from above whenever both
/// leading coefficients survive the substitution.
fn image_degree(a: &MultiPoly, b: &MultiPoly, v: usize) -> Option<usize> {
    let n = a.nvars();
    let la = a.coefficient_of(v, a.degree_in(v));
    let lb = b.coefficient_of(v, b.degree_in(v));
    for attempt in 0..4i64 {
        let point: Vec<Option<super::poly::Scalar>> = (0..n)
            .map(|i| {
                if i == v {
                    None
                } else {
                    Some(super::poly::int(3 + 7 * i as i64 + 11 * attempt))
                }
            })
            .collect();
        if la.partial_eval(&point).is_zero() || lb.partial_eval(&point).is_zero() {
            continue;
        }
        let ua = univariate(&a.partial_eval(&point), v);
        let ub = univariate(&b.partial_eval(&point), v);
        return Some(univariate_gcd_degree(ua, ub));
    }
    None
}

fn univariate(p: &MultiPoly, v: usize) -> Vec<super::poly::Scalar> {
    let d = p.degree_in(v) as usize;
    let mut out = vec![super::poly::int(0); d + 1];
    for (m, c) in p.terms() {
        out[m.exp(v) as usize] += c;
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<super::poly::Scalar>, mut b: Vec<super::poly::Scalar>) -> usize {
    use num_traits::Zero;
    let trim = |p: &mut Vec<super::poly::Scalar>| {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        while a.len() >= b.len() && !a.is_empty() {
            let shift = a.len() - b.len();
            let q = a.last().unwrap() / b.last().unwrap();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &q * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = p.coefficients_in(v);
    let mut acc: Option<MultiPoly> = None;
    // Start from the sparsest coefficient; it usually terminates early.
    let mut sorted: Vec<_> = coeffs.into_values().collect();
    sorted.sort_by_key(|c| c.len());
    for c in sorted {
        acc = Some(match acc {
            None => c.monic(),
            Some(g) => gcd(&g, &c),
        });
        if acc.as_ref().map_or(false, MultiPoly::is_one) {
            break;
        }
    }
    acc.unwrap_or_else(|| MultiPoly::zero(p.nvars()))
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content(p, v);
    if c.is_one() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides")
    }
}

fn primitive_prs(mut a: MultiPoly, mut b: MultiPoly, v: usize) -> MultiPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v).monic();
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one(a.nvars());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let n = a.nvars();
    let d = b.degree_in(v);
    let lc = b.coefficient_of(v, d);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= d {
        let e = r.degree_in(v);
        let lr = r.coefficient_of(v, e);
        let shift = Monomial::var(n, v, e - d);
        let sub = b.mul(&lr).mul_term(&shift, &super::poly::int(1));
        r = r.mul(&lc).sub(&sub);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::int;

    fn v(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let n = 3;
        let f = v(n, 0).add(&v(n, 1)).add(&MultiPoly::one(n));
        let g1 = v(n, 2).pow(2).sub(&v(n, 0));
        let g2 = v(n, 1).mul(&v(n, 2)).add(&int_poly(n, 3));
        let a = f.mul(&g1);
        let b = f.mul(&g2);
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let n = 2;
        let a = v(n, 0).pow(2).add(&v(n, 1).pow(2)).add(&MultiPoly::one(n));
        let b = v(n, 0).sub(&v(n, 1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_factors() {
        let n = 2;
        let a = v(n, 0).pow(3).mul(&v(n, 1)).add(&v(n, 0).pow(2));
        let b = v(n, 0).pow(2).mul(&v(n, 1).pow(2));
        assert_eq!(gcd(&a, &b), v(n, 0).pow(2));
    }

    fn int_poly(n: usize, k: i64) -> MultiPoly {
        MultiPoly::constant(n, int(k))
    }
}
