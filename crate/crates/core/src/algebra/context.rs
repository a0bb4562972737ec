//! Variable universes and triangular quadratic constraint rules.
//!
//! A [`Context`] fixes the ordered list of symbols (chart coordinates,
//! parameters and dependent variables) and a list of rewrite rules
//! `w² → a·w + b`, one per dependent variable `w`. Each right-hand side is
//! free of `w²` and of every later rule's dependent variable, so the quotient
//! ring is a free module over the independent variables with basis the
//! square-free monomials in the dependent ones. Reducing every dependent
//! variable to degree ≤ 1 therefore yields a canonical normal form.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::expr::RatExpr;
use super::parse;
use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};

/// Role of a symbol inside a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Independent chart coordinate; partial derivatives are taken along these.
    Coordinate,
    /// Constant parameter such as the mass `m`.
    Parameter,
    /// Algebraic function of the others, eliminated by a rule.
    Dependent,
}

/// `var² → lin·var + constant`, with `lin` and `constant` free of `var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub var: usize,
    pub lin: MultiPoly,
    pub constant: MultiPoly,
}

impl Rule {
    pub fn replacement(&self) -> MultiPoly {
        self.lin
            .mul(&MultiPoly::var(self.lin.nvars(), self.var))
            .add(&self.constant)
    }
}

const POWER_CACHE: u16 = 10;

#[derive(Debug, Clone)]
pub struct Context {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    index: HashMap<String, usize>,
    rules: Vec<Rule>,
    /// `powers[r][e] = (A, B)` with `w^e ≡ A·w + B` under rule `r`.
    powers: Vec<Vec<(MultiPoly, MultiPoly)>>,
    /// `implicit[r][v] = (num, den)` of `∂w_r/∂v` for coordinate `v`.
    implicit: Vec<Vec<Option<(MultiPoly, MultiPoly)>>>,
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.kinds == other.kinds && self.rules == other.rules
    }
}

impl Eq for Context {}

impl Context {
    pub fn builder() -> ContextBuilder {
        ContextBuilder::default()
    }

    /// A context with the given coordinates and parameters and no rules.
    pub fn free(coords: &[&str], params: &[&str]) -> Arc<Context> {
        Context::builder()
            .coords(coords)
            .params(params)
            .build()
            .expect("rule-free context is always valid")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn kind(&self, v: usize) -> VarKind {
        self.kinds[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn has(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn has_rules(&self) -> bool {
        !self.rules.is_empty()
    }

    pub fn dependents(&self) -> impl Iterator<Item = usize> + '_ {
        self.rules.iter().map(|r| r.var)
    }

    pub fn coordinates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nvars()).filter(|&v| self.kinds[v] == VarKind::Coordinate)
    }

    /// Normal form of `p` modulo every rule.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let mut cur = p.clone();
        for (r, rule) in self.rules.iter().enumerate().rev() {
            let w = rule.var;
            if cur.degree_in(w) < 2 {
                continue;
            }
            let mut out = MultiPoly::zero(cur.nvars());
            for (e, coeff) in cur.coefficients_in(w) {
                match e {
                    0 => out = out.add(&coeff),
                    1 => out = out.add(&coeff.mul(&MultiPoly::var(cur.nvars(), w))),
                    _ => {
                        let (a, b) = self.power(r, e);
                        let wa = a.mul(&MultiPoly::var(cur.nvars(), w));
                        out = out.add(&coeff.mul(&wa.add(&b)));
                    }
                }
            }
            cur = out;
        }
        cur
    }

    /// Reduction by naive single-step rewriting, applying rules in the
    /// given order until a fixpoint. Agrees with [`Context::reduce`] for any
    /// order; kept public for confluence checks.
    pub fn reduce_stepwise(&self, p: &MultiPoly, order: &[usize]) -> MultiPoly {
        let mut cur = p.clone();
        loop {
            let mut changed = false;
            for &r in order {
                let rule = &self.rules[r];
                let w = rule.var;
                let repl = rule.replacement();
                let hit = cur
                    .terms()
                    .find(|(m, _)| m.exp(w) >= 2)
                    .map(|(m, c)| (m.clone(), c.clone()));
                if let Some((m, c)) = hit {
                    let rest = m.with_exp(w, m.exp(w) - 2);
                    cur = cur.sub(&MultiPoly::term(c.clone(), m)).add(&repl.mul_term(&rest, &c));
                    changed = true;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    fn power(&self, r: usize, e: u16) -> (MultiPoly, MultiPoly) {
        let table = &self.powers[r];
        if (e as usize) < table.len() {
            return table[e as usize].clone();
        }
        let rule = &self.rules[r];
        let (mut a, mut b) = table.last().cloned().expect("table starts at e = 0");
        for _ in table.len() - 1..e as usize {
            // w^{k+1} = A·w² + B·w = (A·lin + B)·w + A·constant
            let na = a.mul(&rule.lin).add(&b);
            let nb = a.mul(&rule.constant);
            a = na;
            b = nb;
        }
        (a, b)
    }

    /// `∂w/∂v` for dependent `w` (rule index `r`) and coordinate `v`, as `(num, den)`.
    pub(crate) fn implicit_derivative(&self, r: usize, v: usize) -> Option<&(MultiPoly, MultiPoly)> {
        self.implicit.get(r)?.get(v)?.as_ref()
    }

    pub fn rule_index(&self, var: usize) -> Option<usize> {
        self.rules.iter().position(|r| r.var == var)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))?;
        for rule in &self.rules {
            let rhs = super::expr::format_poly(&rule.replacement(), &self.names);
            write!(f, "; {}^2 -> {}", self.names[rule.var], rhs)?;
        }
        Ok(())
    }
}

#[derive(Default, Clone)]
pub struct ContextBuilder {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    rules: Vec<(String, String)>,
}

impl ContextBuilder {
    pub fn coords<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self.names.push(n.as_ref().to_string());
            self.kinds.push(VarKind::Coordinate);
        }
        self
    }

    pub fn params<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self.names.push(n.as_ref().to_string());
            self.kinds.push(VarKind::Parameter);
        }
        self
    }

    /// Declare `name` as a dependent variable constrained by `name² = rhs`.
    pub fn dependent(mut self, name: &str, rhs: &str) -> Self {
        self.names.push(name.to_string());
        self.kinds.push(VarKind::Dependent);
        self.rules.push((name.to_string(), rhs.to_string()));
        self
    }

    pub fn build(self) -> Result<Arc<Context>> {
        let n = self.names.len();
        let mut index = HashMap::new();
        for (i, name) in self.names.iter().enumerate() {
            if !parse::is_identifier(name) {
                return Err(Error::Invalid(format!("`{name}` is not a valid identifier")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol `{name}`")));
            }
        }
        let bare = Arc::new(Context {
            names: self.names.clone(),
            kinds: self.kinds.clone(),
            index: index.clone(),
            rules: Vec::new(),
            powers: Vec::new(),
            implicit: Vec::new(),
        });

        let mut rules: Vec<Rule> = Vec::new();
        for (name, rhs) in &self.rules {
            let w = index[name];
            let expr = parse::parse_expr(rhs, &bare)?;
            let poly = expr.as_polynomial().ok_or_else(|| Error::InvalidRule {
                var: name.clone(),
                reason: "right-hand side must be a polynomial".into(),
            })?;
            if poly.degree_in(w) > 1 {
                return Err(Error::InvalidRule {
                    var: name.clone(),
                    reason: "right-hand side must be at most linear in the rule variable".into(),
                });
            }
            for later in self.rules.iter().skip(rules.len() + 1) {
                if poly.contains_var(index[&later.0]) {
                    return Err(Error::InvalidRule {
                        var: name.clone(),
                        reason: format!("depends on later rule variable `{}`", later.0),
                    });
                }
            }
            // Bring the right-hand side into normal form for the earlier rules.
            let partial = Context {
                rules: rules.clone(),
                powers: power_tables(&rules),
                ..(*bare).clone()
            };
            let poly = partial.reduce(&poly);
            let lin = poly.coefficient_of(w, 1);
            let constant = poly.coefficient_of(w, 0);
            rules.push(Rule { var: w, lin, constant });
        }

        let staged = Arc::new(Context {
            rules: rules.clone(),
            powers: power_tables(&rules),
            ..(*bare).clone()
        });

        // Implicit derivatives: 2w·w' = lin'·w + lin·w' + constant'  (total derivatives).
        let mut implicit: Vec<Vec<Option<(MultiPoly, MultiPoly)>>> = Vec::new();
        let mut as_expr: Vec<Vec<Option<RatExpr>>> = Vec::new();
        for (r, rule) in rules.iter().enumerate() {
            let mut row = vec![None; n];
            let mut row_expr = vec![None; n];
            for v in 0..n {
                if staged.kinds[v] == VarKind::Dependent {
                    continue;
                }
                let total = |p: &MultiPoly| -> RatExpr {
                    let mut acc = RatExpr::from_poly(p.derivative(v), &staged);
                    for (j, earlier) in rules.iter().enumerate().take(r) {
                        let dp = p.derivative(earlier.var);
                        if dp.is_zero() {
                            continue;
                        }
                        if let Some(dw) = &as_expr[j][v] {
                            acc = &acc + &(&RatExpr::from_poly(dp, &staged) * dw);
                        }
                    }
                    acc
                };
                let wv = RatExpr::from_poly(MultiPoly::var(n, rule.var), &staged);
                let lin = RatExpr::from_poly(rule.lin.clone(), &staged);
                let numer = &(&total(&rule.lin) * &wv) + &total(&rule.constant);
                let denom = &(&wv * &RatExpr::from_integer(2, &staged)) - &lin;
                let d = numer.checked_div(&denom)?;
                row[v] = Some((d.numer().clone(), d.denom().clone()));
                row_expr[v] = Some(d);
            }
            implicit.push(row);
            as_expr.push(row_expr);
        }

        Ok(Arc::new(Context {
            implicit,
            ..(*staged).clone()
        }))
    }
}

fn power_tables(rules: &[Rule]) -> Vec<Vec<(MultiPoly, MultiPoly)>> {
    rules
        .iter()
        .map(|rule| {
            let n = rule.lin.nvars();
            let mut table = vec![
                (MultiPoly::zero(n), MultiPoly::one(n)),
                (MultiPoly::one(n), MultiPoly::zero(n)),
            ];
            for _ in 2..=POWER_CACHE {
                let (a, b) = table.last().unwrap().clone();
                table.push((a.mul(&rule.lin).add(&b), a.mul(&rule.constant)));
            }
            table
        })
        .collect()
}

/// Monomial helper used by tests and models: `name^e` in `ctx`.
pub fn monomial(ctx: &Context, name: &str, e: u16) -> Result<MultiPoly> {
    let v = ctx.index_of(name)?;
    Ok(MultiPoly::term(super::poly::int(1), Monomial::var(ctx.nvars(), v, e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shell() -> Arc<Context> {
        Context::builder()
            .coords(&["x0", "x1", "x2", "x3"])
            .dependent("p0", "m^2 + p1^2 + p2^2 + p3^2")
            .coords(&["p1", "p2", "p3"])
            .params(&["m"])
            .build()
            .unwrap()
    }

    #[test]
    fn reduces_mass_shell_square() {
        let ctx = shell();
        let p0sq = monomial(&ctx, "p0", 2).unwrap();
        let reduced = ctx.reduce(&p0sq);
        let expected = parse::parse_expr("m^2 + p1^2 + p2^2 + p3^2", &ctx)
            .unwrap()
            .as_polynomial()
            .unwrap();
        assert_eq!(reduced, expected);
    }

    #[test]
    fn high_powers_use_cached_and_extended_tables() {
        let ctx = shell();
        for e in [3u16, 7, 12, 15] {
            let p = monomial(&ctx, "p0", e).unwrap();
            assert_eq!(ctx.reduce(&p), ctx.reduce_stepwise(&p, &[0]), "p0^{e}");
            assert!(ctx.reduce(&p).degree_in(ctx.index_of("p0").unwrap()) <= 1);
        }
    }

    #[test]
    fn rejects_quadratic_rhs() {
        let err = Context::builder()
            .coords(&["a"])
            .dependent("w", "w^2 + a")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidRule { .. }));
    }

    #[test]
    fn rejects_forward_reference() {
        let err = Context::builder()
            .coords(&["a"])
            .dependent("u", "a + w")
            .dependent("w", "a")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidRule { .. }));
    }

    #[test]
    fn linear_term_rule_reduces() {
        // (x - y)^2 = m^2 solved for y: y^2 -> 2 x y - x^2 + m^2
        let ctx = Context::builder()
            .coords(&["x"])
            .dependent("y", "2*x*y - x^2 + m^2")
            .params(&["m"])
            .build()
            .unwrap();
        let e = parse::parse_expr("(x - y)^2", &ctx).unwrap();
        assert_eq!(e.to_string(), "m^2");
    }
}
