//! Rational functions modulo the constraint rules of a [`Context`].
//!
//! A [`RatExpr`] is stored as `num / den` where
//! * both parts are in normal form for the context,
//! * `den` is free of every dependent variable (rationalized by conjugates),
//! * `gcd(num, den) = 1` and `den` has leading coefficient 1.
//!
//! Under these conditions two equal elements of the fraction field have the
//! same representation, so structural equality decides equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::context::{Context, VarKind};
use super::gcd::gcd;
use super::poly::{int, MultiPoly, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatExpr {
    num: MultiPoly,
    den: MultiPoly,
    ctx: Arc<Context>,
}

pub(crate) fn same_context(a: &Arc<Context>, b: &Arc<Context>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && same_context(&self.ctx, &other.ctx)
    }
}

impl Eq for RatExpr {}

impl RatExpr {
    /// Build `num / den` and bring it into canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly, ctx: &Arc<Context>) -> Result<RatExpr> {
        let (num, den) = normalize(num, den, ctx)?;
        Ok(RatExpr {
            num,
            den,
            ctx: ctx.clone(),
        })
    }

    /// Trusted constructor for parts already known to be canonical.
    pub(crate) fn from_canonical(num: MultiPoly, den: MultiPoly, ctx: &Arc<Context>) -> RatExpr {
        RatExpr {
            num,
            den,
            ctx: ctx.clone(),
        }
    }

    pub fn from_poly(p: MultiPoly, ctx: &Arc<Context>) -> RatExpr {
        let n = ctx.nvars();
        RatExpr {
            num: ctx.reduce(&p),
            den: MultiPoly::one(n),
            ctx: ctx.clone(),
        }
    }

    pub fn from_scalar(c: Scalar, ctx: &Arc<Context>) -> RatExpr {
        RatExpr {
            num: MultiPoly::constant(ctx.nvars(), c),
            den: MultiPoly::one(ctx.nvars()),
            ctx: ctx.clone(),
        }
    }

    pub fn from_integer(n: i64, ctx: &Arc<Context>) -> RatExpr {
        RatExpr::from_scalar(int(n), ctx)
    }

    pub fn zero(ctx: &Arc<Context>) -> RatExpr {
        RatExpr::from_integer(0, ctx)
    }

    pub fn one(ctx: &Arc<Context>) -> RatExpr {
        RatExpr::from_integer(1, ctx)
    }

    pub fn var(ctx: &Arc<Context>, name: &str) -> Result<RatExpr> {
        let v = ctx.index_of(name)?;
        Ok(RatExpr::var_index(ctx, v))
    }

    pub fn var_index(ctx: &Arc<Context>, v: usize) -> RatExpr {
        RatExpr::from_poly(MultiPoly::var(ctx.nvars(), v), ctx)
    }

    /// Parse expression text in `ctx`.
    pub fn parse(text: &str, ctx: &Arc<Context>) -> Result<RatExpr> {
        super::parse::parse_expr(text, ctx)
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn as_polynomial(&self) -> Option<MultiPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            self.den.as_constant().map(|d| self.num.scale(&d.recip()))
        }
    }

    /// Variables that occur in numerator or denominator.
    pub fn vars_used(&self) -> Vec<bool> {
        let a = self.num.vars_used();
        let b = self.den.vars_used();
        a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self.ctx.index_of(name) {
            Ok(v) => self.num.contains_var(v) || self.den.contains_var(v),
            Err(_) => false,
        }
    }

    fn check(&self, other: &RatExpr) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &RatExpr) -> Result<RatExpr> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(RatExpr::from_canonical(
                self.num.add(&other.num),
                self.den.clone(),
                &self.ctx,
            ));
        }
        if self.den == other.den {
            return RatExpr::new(self.num.add(&other.num), self.den.clone(), &self.ctx);
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatExpr::new(num, self.den.mul(&other.den), &self.ctx)
    }

    pub fn try_sub(&self, other: &RatExpr) -> Result<RatExpr> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &RatExpr) -> Result<RatExpr> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatExpr::zero(&self.ctx));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(&c));
        }
        let num = self.ctx.reduce(&self.num.mul(&other.num));
        if self.den.is_one() && other.den.is_one() {
            return Ok(RatExpr::from_canonical(num, self.den.clone(), &self.ctx));
        }
        RatExpr::new(num, self.den.mul(&other.den), &self.ctx)
    }

    pub fn checked_div(&self, other: &RatExpr) -> Result<RatExpr> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c.recip()));
        }
        RatExpr::new(self.num.mul(&other.den), self.den.mul(&other.num), &self.ctx)
    }

    pub fn recip(&self) -> Result<RatExpr> {
        RatExpr::one(&self.ctx).checked_div(self)
    }

    pub fn scale(&self, c: &Scalar) -> RatExpr {
        if c.is_zero() {
            return RatExpr::zero(&self.ctx);
        }
        RatExpr::from_canonical(self.num.scale(c), self.den.clone(), &self.ctx)
    }

    pub fn pow(&self, e: i32) -> Result<RatExpr> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = RatExpr::one(&self.ctx);
        for _ in 0..e.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// Exact equality modulo the context: `a·d' − b·d` reduces to zero.
    pub fn equal_mod(&self, other: &RatExpr) -> Result<bool> {
        self.check(other)?;
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        Ok(self.ctx.reduce(&lhs.sub(&rhs)).is_zero())
    }

    /// Partial derivative along chart coordinate `name`.
    pub fn partial_derivative(&self, name: &str) -> Result<RatExpr> {
        let v = self.ctx.index_of(name)?;
        match self.ctx.kind(v) {
            VarKind::Coordinate => self.derivative(v),
            _ => Err(Error::NotACoordinate(name.to_string())),
        }
    }

    /// Like [`RatExpr::partial_derivative`] but also accepts parameters.
    pub fn partial_derivative_any(&self, name: &str) -> Result<RatExpr> {
        let v = self.ctx.index_of(name)?;
        match self.ctx.kind(v) {
            VarKind::Dependent => Err(Error::NotACoordinate(name.to_string())),
            _ => self.derivative(v),
        }
    }

    /// Total derivative along independent variable index `v`.
    pub fn derivative(&self, v: usize) -> Result<RatExpr> {
        if self.ctx.kind(v) == VarKind::Dependent {
            return Err(Error::NotACoordinate(self.ctx.name(v).to_string()));
        }
        let dn = self.total_poly_derivative(&self.num, v)?;
        if self.den.is_constant() {
            return Ok(dn.scale(&self.den.as_constant().unwrap().recip()));
        }
        let dd = self.total_poly_derivative(&self.den, v)?;
        let num = RatExpr::from_canonical(self.num.clone(), MultiPoly::one(self.ctx.nvars()), &self.ctx);
        let den = RatExpr::from_canonical(self.den.clone(), MultiPoly::one(self.ctx.nvars()), &self.ctx);
        let top = dn.try_mul(&den)?.try_sub(&num.try_mul(&dd)?)?;
        top.checked_div(&den.try_mul(&den)?)
    }

    fn total_poly_derivative(&self, p: &MultiPoly, v: usize) -> Result<RatExpr> {
        let mut acc = RatExpr::from_poly(p.derivative(v), &self.ctx);
        for (r, rule) in self.ctx.rules().iter().enumerate() {
            let dp = p.derivative(rule.var);
            if dp.is_zero() {
                continue;
            }
            let (n, d) = self
                .ctx
                .implicit_derivative(r, v)
                .ok_or_else(|| Error::NotACoordinate(self.ctx.name(v).to_string()))?;
            if n.is_zero() {
                continue;
            }
            let dw = RatExpr::from_canonical(n.clone(), d.clone(), &self.ctx);
            acc = acc.try_add(&RatExpr::from_poly(dp, &self.ctx).try_mul(&dw)?)?;
        }
        Ok(acc)
    }

    /// Ring homomorphism sending each mapped variable to its image and every
    /// other variable to the same-named variable of `target`.
    pub fn substitute(&self, map: &HashMap<String, RatExpr>, target: &Arc<Context>) -> Result<RatExpr> {
        let images = self.images(map, target)?;
        let num = eval_poly(&self.num, &images, target)?;
        let den = eval_poly(&self.den, &images, target)?;
        num.checked_div(&den)
    }

    fn images(&self, map: &HashMap<String, RatExpr>, target: &Arc<Context>) -> Result<Vec<Option<RatExpr>>> {
        let used = self.vars_used();
        let mut images = vec![None; self.ctx.nvars()];
        for (v, u) in used.iter().enumerate() {
            if !u {
                continue;
            }
            let name = self.ctx.name(v);
            let img = match map.get(name) {
                Some(e) => {
                    if !same_context(e.context(), target) {
                        return Err(Error::ContextMismatch);
                    }
                    e.clone()
                }
                None => RatExpr::var(target, name)?,
            };
            images[v] = Some(img);
        }
        Ok(images)
    }

    /// Move into another context by matching variable names.
    pub fn transfer(&self, target: &Arc<Context>) -> Result<RatExpr> {
        if same_context(&self.ctx, target) {
            return Ok(self.clone());
        }
        // Cheap path: identical names for all used variables, target rules
        // only make the representation smaller, so reindex and renormalize.
        let used = self.vars_used();
        let mut map = vec![0usize; self.ctx.nvars()];
        for (v, u) in used.iter().enumerate() {
            if *u {
                map[v] = target.index_of(self.ctx.name(v))?;
            }
        }
        let num = self.num.reindex(&map, target.nvars());
        let den = self.den.reindex(&map, target.nvars());
        RatExpr::new(num, den, target)
    }

    /// Replace named variables by rational values, staying in the same context.
    pub fn specialize(&self, values: &HashMap<String, Scalar>) -> Result<RatExpr> {
        let mut vals = vec![None; self.ctx.nvars()];
        for (name, val) in values {
            let v = self.ctx.index_of(name)?;
            if self.ctx.kind(v) == VarKind::Dependent {
                return Err(Error::NotACoordinate(name.clone()));
            }
            vals[v] = Some(val.clone());
        }
        RatExpr::new(self.num.partial_eval(&vals), self.den.partial_eval(&vals), &self.ctx)
    }

    /// Exact value at a point given for every independent variable. Dependent
    /// variables take the positive root of their rule; at most one of them may
    /// be irrational at the point.
    pub fn eval_witness(&self, point: &HashMap<String, Scalar>) -> Result<Surd> {
        let n = self.ctx.nvars();
        let mut vals: Vec<Option<Scalar>> = vec![None; n];
        for v in 0..n {
            if self.ctx.kind(v) != VarKind::Dependent {
                let name = self.ctx.name(v);
                if self.vars_used()[v]
                    || self
                        .ctx
                        .rules()
                        .iter()
                        .any(|r| r.lin.contains_var(v) || r.constant.contains_var(v))
                {
                    let val = point
                        .get(name)
                        .ok_or_else(|| Error::WitnessUnsupported(format!("no value for `{name}`")))?;
                    vals[v] = Some(val.clone());
                }
            }
        }
        let mut surd: Option<(usize, Scalar, Scalar)> = None; // (var, alpha/2, radicand/4)
        for rule in self.ctx.rules() {
            let lin = rule.lin.partial_eval(&vals);
            let constant = rule.constant.partial_eval(&vals);
            let (Some(a), Some(b)) = (lin.as_constant(), constant.as_constant()) else {
                return Err(Error::WitnessUnsupported(format!(
                    "rule for `{}` depends on an irrational value",
                    self.ctx.name(rule.var)
                )));
            };
            // w = a/2 + sqrt(a²/4 + b)
            let half = &a / int(2);
            let disc = &half * &half + b;
            if disc.is_negative() {
                return Err(Error::WitnessUnsupported(format!(
                    "`{}` is not real at the witness point",
                    self.ctx.name(rule.var)
                )));
            }
            match rational_sqrt(&disc) {
                Some(root) => vals[rule.var] = Some(half + root),
                None => {
                    if surd.is_some() {
                        return Err(Error::WitnessUnsupported(
                            "more than one irrational dependent value".into(),
                        ));
                    }
                    surd = Some((rule.var, half, disc));
                }
            }
        }
        let den = self.den.partial_eval(&vals);
        let Some(den) = den.as_constant() else {
            return Err(Error::WitnessUnsupported("denominator not rational".into()));
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.num.partial_eval(&vals);
        let value = match surd {
            None => Surd::rational(num.as_constant().expect("all variables assigned")),
            Some((w, half, disc)) => {
                let c = num.coefficient_of(w, 0).as_constant().expect("assigned");
                let d = num.coefficient_of(w, 1).as_constant().expect("assigned");
                Surd {
                    rational: c + &d * half,
                    irrational: d,
                    radicand: disc,
                }
            }
        };
        Ok(value.scale(&den.recip()))
    }
}

/// `rational + irrational·√radicand` with `radicand > 0` not a rational square
/// (or `irrational == 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Scalar,
    pub irrational: Scalar,
    pub radicand: Scalar,
}

impl Surd {
    pub fn rational(r: Scalar) -> Surd {
        Surd {
            rational: r,
            irrational: Scalar::zero(),
            radicand: Scalar::zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Surd {
        Surd {
            rational: &self.rational * c,
            irrational: &self.irrational * c,
            radicand: self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        if self.irrational.is_zero() {
            return self.rational.is_zero();
        }
        // c + d√D = 0  iff  √D = −c/d, which needs D to be a rational square.
        let q = -(&self.rational / &self.irrational);
        !q.is_negative() && &q * &q == self.radicand
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.irrational, self.radicand)
        }
    }
}

fn rational_sqrt(q: &Scalar) -> Option<Scalar> {
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Scalar::new(rn, rd))
    } else {
        None
    }
}

fn eval_poly(p: &MultiPoly, images: &[Option<RatExpr>], target: &Arc<Context>) -> Result<RatExpr> {
    let mut acc = RatExpr::zero(target);
    let mut powers: HashMap<(usize, u16), RatExpr> = HashMap::new();
    for (m, c) in p.terms() {
        let mut t = RatExpr::from_scalar(c.clone(), target);
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let key = (v, e);
            if !powers.contains_key(&key) {
                let base = images[v].as_ref().expect("image computed for used variable");
                powers.insert(key, base.pow(e as i32)?);
            }
            t = t.try_mul(&powers[&key])?;
        }
        acc = acc.try_add(&t)?;
    }
    Ok(acc)
}

fn normalize(num: MultiPoly, den: MultiPoly, ctx: &Context) -> Result<(MultiPoly, MultiPoly)> {
    let n = ctx.nvars();
    let mut num = ctx.reduce(&num);
    let mut den = ctx.reduce(&den);
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok((MultiPoly::zero(n), MultiPoly::one(n)));
    }
    if let Some(c) = den.as_constant() {
        return Ok((num.scale(&c.recip()), MultiPoly::one(n)));
    }
    for rule in ctx.rules().iter().rev() {
        let w = rule.var;
        if !den.contains_var(w) {
            continue;
        }
        let a = den.coefficient_of(w, 0);
        let b = den.coefficient_of(w, 1);
        let conj = a.add(&b.mul(&rule.lin)).sub(&b.mul(&MultiPoly::var(n, w)));
        num = ctx.reduce(&num.mul(&conj));
        den = ctx.reduce(&den.mul(&conj));
        debug_assert!(!den.contains_var(w));
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
    }
    if num.is_zero() {
        return Ok((MultiPoly::zero(n), MultiPoly::one(n)));
    }
    if let Some(c) = den.as_constant() {
        return Ok((num.scale(&c.recip()), MultiPoly::one(n)));
    }
    let g = gcd(&num, &den);
    if !g.is_one() {
        num = num.div_exact(&g).expect("gcd divides numerator");
        den = den.div_exact(&g).expect("gcd divides denominator");
    }
    let lc = den.leading_coeff();
    if !lc.is_one() {
        let inv = lc.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Ok((num, den))
}

/// Render a polynomial with the given variable names.
pub fn format_poly(p: &MultiPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| {
                if e == 1 {
                    names[v].clone()
                } else {
                    format!("{}^{}", names[v], e)
                }
            })
            .collect();
        if mono.is_empty() {
            out.push_str(&format_scalar(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_scalar(&abs));
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

pub fn format_scalar(c: &Scalar) -> String {
    if c.denom() == &BigInt::one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ctx.names();
        let num = format_poly(&self.num, names);
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        let den = format_poly(&self.den, names);
        let single_power = self.den.len() == 1
            && self.den.leading_coeff().is_one()
            && self.den.vars_used().iter().filter(|u| **u).count() == 1;
        if single_power {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: &RatExpr) -> RatExpr {
                self.$call(rhs).expect(concat!("RatExpr ", stringify!($method)))
            }
        }
        impl $tr<RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: RatExpr) -> RatExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: &RatExpr) -> RatExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: RatExpr) -> RatExpr {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::from_canonical(self.num.neg(), self.den.clone(), &self.ctx)
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn shell() -> Arc<Context> {
        Context::builder()
            .coords(&["x0", "x1", "x2", "x3"])
            .dependent("p0", "m^2 + p1^2 + p2^2 + p3^2")
            .coords(&["p1", "p2", "p3"])
            .params(&["m"])
            .build()
            .unwrap()
    }

    fn e(text: &str, ctx: &Arc<Context>) -> RatExpr {
        RatExpr::parse(text, ctx).unwrap()
    }

    #[test]
    fn mass_shell_square_reduces() {
        let ctx = shell();
        assert_eq!(e("p0^2 + 0", &ctx), e("m^2 + p1^2 + p2^2 + p3^2", &ctx));
        assert!(e("p0*p0 - p1^2 - p2^2 - p3^2 - m^2", &ctx).is_zero());
    }

    #[test]
    fn ring_identities_in_free_context() {
        let ctx = Context::free(&["x", "y"], &[]);
        assert_eq!(e("(x+1)*(x-1)", &ctx).to_string(), "x^2 - 1");
        assert!(!e("x", &ctx).equal_mod(&e("y", &ctx)).unwrap());
        let f = e("x^2/(y+1)", &ctx);
        assert_eq!(&f * &RatExpr::one(&ctx), f);
    }

    #[test]
    fn cancels_common_factors() {
        let ctx = Context::free(&["x", "y"], &[]);
        let f = e("(x^2 - y^2)/(2*x + 2*y)", &ctx);
        assert_eq!(f.to_string(), "1/2*x - 1/2*y");
    }

    #[test]
    fn rationalizes_dependent_denominator() {
        let ctx = shell();
        let f = e("1/p0", &ctx);
        assert_eq!(f.to_string(), "p0/(p1^2 + p2^2 + p3^2 + m^2)");
        assert!((&f * &e("p0", &ctx)).is_one());
    }

    #[test]
    fn implicit_derivative_of_p0() {
        let ctx = shell();
        let d = e("p0", &ctx).partial_derivative("p1").unwrap();
        assert!(d.equal_mod(&e("p1/p0", &ctx)).unwrap());
        let dm = e("m", &ctx).partial_derivative("x0").unwrap();
        assert!(dm.is_zero());
        assert!(matches!(
            e("x0", &ctx).partial_derivative("m"),
            Err(Error::NotACoordinate(_))
        ));
    }

    #[test]
    fn product_rule_derivative() {
        let ctx = Context::free(&["x", "y"], &[]);
        let d = e("x^2*y", &ctx).partial_derivative("x").unwrap();
        assert_eq!(d, e("2*x*y", &ctx));
    }

    #[test]
    fn division_by_zero_detected() {
        let ctx = shell();
        let z = e("p0^2 - m^2 - p1^2 - p2^2 - p3^2", &ctx);
        assert_eq!(e("x0", &ctx).checked_div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn context_mismatch_detected() {
        let a = Context::free(&["x"], &[]);
        let b = Context::free(&["y"], &[]);
        assert_eq!(e("x", &a).try_add(&e("y", &b)), Err(Error::ContextMismatch));
    }

    #[test]
    fn substitution_into_two_point() {
        let free = Context::free(&["p0", "p1", "p2", "p3"], &[]);
        let target = Context::free(&["x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"], &[]);
        let f = e("p0^2 - p1^2 - p2^2 - p3^2", &free);
        let mut map = HashMap::new();
        for i in 0..4 {
            let img = if i == 0 {
                format!("y{i} - x{i}")
            } else {
                format!("x{i} - y{i}")
            };
            map.insert(format!("p{i}"), e(&img, &target));
        }
        let s = f.substitute(&map, &target).unwrap();
        let expected = e("(x0-y0)^2 - (x1-y1)^2 - (x2-y2)^2 - (x3-y3)^2", &target);
        assert_eq!(s, expected);
        assert_eq!(f.substitute(&HashMap::new(), &free).unwrap(), f);
    }

    #[test]
    fn witness_evaluation_with_surd() {
        let ctx = shell();
        let mut pt = HashMap::new();
        for (k, v) in [
            ("x0", 0),
            ("x1", 0),
            ("x2", 0),
            ("x3", 0),
            ("p1", 1),
            ("p2", 2),
            ("p3", 3),
            ("m", 1),
        ] {
            pt.insert(k.to_string(), int(v));
        }
        let p0 = e("p0", &ctx).eval_witness(&pt).unwrap();
        assert_eq!(p0.radicand, int(15));
        assert!(!p0.is_zero());
        let zero = e("p0 - p0", &ctx).eval_witness(&pt).unwrap();
        assert!(zero.is_zero());
        let half = e("1/2 + p1", &ctx).eval_witness(&pt).unwrap();
        assert_eq!(half.rational, rat(3, 2));
    }
}
