//! Linear differential operators with rational coefficients, stored with
//! coefficients to the left of derivatives.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::parse::{self, Ast};
use crate::algebra::{int, RatExpr, Scalar};
use crate::error::{Error, Result};
use crate::exterior::Chart;

/// Exponents of `∂_a` per chart position.
pub type MultiIndex = Vec<u16>;

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialOperator {
    chart: Arc<Chart>,
    terms: BTreeMap<MultiIndex, RatExpr>,
}

fn binomial(n: u16, k: u16) -> Scalar {
    let mut acc = int(1);
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

impl DifferentialOperator {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        DifferentialOperator {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        Self::multiplication(chart, RatExpr::one(chart.context()))
    }

    /// The operator `f̂`: multiplication by `f`.
    pub fn multiplication(chart: &Arc<Chart>, f: RatExpr) -> Self {
        Self::from_terms(chart, [(vec![0; chart.dim()], f)])
    }

    /// `∂^n` along the coordinate `name`.
    pub fn partial(chart: &Arc<Chart>, name: &str, n: u16) -> Result<Self> {
        let a = chart.position(name)?;
        let mut idx = vec![0; chart.dim()];
        idx[a] = n;
        Ok(Self::from_terms(chart, [(idx, RatExpr::one(chart.context()))]))
    }

    pub fn from_terms(chart: &Arc<Chart>, terms: impl IntoIterator<Item = (MultiIndex, RatExpr)>) -> Self {
        let mut out = Self::zero(chart);
        for (idx, c) in terms {
            assert_eq!(idx.len(), chart.dim(), "multi-index length must equal chart dimension");
            out.accumulate(idx, c);
        }
        out
    }

    fn accumulate(&mut self, idx: MultiIndex, c: RatExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let s = old.try_add(&c).expect("operator coefficients share a context");
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RatExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[u16]) -> RatExpr {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RatExpr::zero(self.chart.context()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order with a non-zero coefficient; 0 for the
    /// zero operator.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|i| i.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// The multiplier when the operator has order 0.
    pub fn as_multiplication(&self) -> Option<RatExpr> {
        if self.order() == 0 {
            Some(self.coefficient(&vec![0; self.chart.dim()]))
        } else {
            None
        }
    }

    fn same_chart(&self, other: &Self) -> Result<()> {
        if Chart::same(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_chart(other)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.accumulate(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_by(&int(-1))
    }

    pub fn scale_by(&self, c: &Scalar) -> Self {
        Self::from_terms(&self.chart, self.terms.iter().map(|(i, t)| (i.clone(), t.scale(c))))
    }

    /// Left multiplication by `f`.
    pub fn scale(&self, f: &RatExpr) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(i, c)| Ok((i.clone(), c.try_mul(f)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(&self.chart, terms))
    }

    /// `∂^γ f` for a multi-index `γ`.
    fn derive(&self, f: &RatExpr, gamma: &[u16]) -> Result<RatExpr> {
        let mut out = f.clone();
        for (a, &e) in gamma.iter().enumerate() {
            for _ in 0..e {
                if out.is_zero() {
                    return Ok(out);
                }
                out = out.derivative(self.chart.var(a))?;
            }
        }
        Ok(out)
    }

    /// `D₁∘D₂` by the Leibniz rule:
    /// `a∂^α ∘ b∂^β = Σ_{γ≤α} C(α,γ) a (∂^γ b) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_chart(other)?;
        let mut out = Self::zero(&self.chart);
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                for gamma in sub_indices(alpha) {
                    let mut coeff = int(1);
                    for (k, &g) in gamma.iter().enumerate() {
                        coeff *= binomial(alpha[k], g);
                    }
                    let db = self.derive(b, &gamma)?;
                    if db.is_zero() {
                        continue;
                    }
                    let idx: MultiIndex = (0..alpha.len()).map(|k| alpha[k] - gamma[k] + beta[k]).collect();
                    out.accumulate(idx, a.try_mul(&db)?.scale(&coeff));
                }
            }
        }
        Ok(out)
    }

    /// `D₁∘D₂ − D₂∘D₁`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Apply to a function.
    pub fn apply(&self, f: &RatExpr) -> Result<RatExpr> {
        let mut acc = RatExpr::zero(self.chart.context());
        for (i, c) in &self.terms {
            acc = acc.try_add(&c.try_mul(&self.derive(f, i)?)?)?;
        }
        Ok(acc)
    }

    /// Parse terms such as `d2(x0) - d2(x1) + m^2` or `x0*d(x1)`. Products
    /// compose, so `d(x0)*x0` is `x0*d(x0) + 1`.
    pub fn parse(text: &str, chart: &Arc<Chart>) -> Result<Self> {
        let ast = parse::parse_ast(text)?;
        Self::eval(&ast, chart)
    }

    fn eval(ast: &Ast, chart: &Arc<Chart>) -> Result<Self> {
        let ctx = chart.context();
        Ok(match ast {
            Ast::Num(_) | Ast::Sym(..) => Self::multiplication(chart, parse::eval_scalar(ast, ctx)?),
            Ast::Call(name, args, pos) => {
                let order = match name.strip_prefix('d') {
                    Some("") => 1,
                    Some(n) => n.parse::<u16>().map_err(|_| Error::Parse {
                        pos: *pos,
                        msg: format!("unknown operator `{name}`"),
                    })?,
                    None => {
                        return Err(Error::Parse {
                            pos: *pos,
                            msg: format!("unknown operator `{name}`"),
                        })
                    }
                };
                match args.as_slice() {
                    [Ast::Sym(coord, p)] => Self::partial(chart, coord, order).map_err(|_| Error::Parse {
                        pos: *p,
                        msg: format!("`{coord}` is not a coordinate of chart {}", chart.name()),
                    })?,
                    _ => {
                        return Err(Error::Parse {
                            pos: *pos,
                            msg: format!("`{name}` takes one coordinate"),
                        })
                    }
                }
            }
            Ast::Neg(a) => Self::eval(a, chart)?.neg(),
            Ast::Add(a, b) => Self::eval(a, chart)?.add(&Self::eval(b, chart)?)?,
            Ast::Sub(a, b) => Self::eval(a, chart)?.sub(&Self::eval(b, chart)?)?,
            Ast::Mul(a, b) => Self::eval(a, chart)?.compose(&Self::eval(b, chart)?)?,
            Ast::Div(a, b) => {
                let num = Self::eval(a, chart)?;
                let den = Self::eval(b, chart)?;
                match den.as_multiplication().and_then(|d| d.as_constant()) {
                    Some(d) if d != int(0) => num.scale_by(&(int(1) / d)),
                    Some(_) => return Err(Error::DivisionByZero),
                    None => match (num.as_multiplication(), den.as_multiplication()) {
                        (Some(n), Some(d)) => Self::multiplication(chart, n.checked_div(&d)?),
                        _ => return Err(Error::Invalid("operators can only be divided by constants".into())),
                    },
                }
            }
            Ast::Pow(a, e) => {
                if *e < 0 {
                    return Err(Error::Invalid("negative powers of operators are undefined".into()));
                }
                let base = Self::eval(a, chart)?;
                let mut out = Self::identity(chart);
                for _ in 0..*e {
                    out = out.compose(&base)?;
                }
                out
            }
            Ast::Wedge(..) => return Err(Error::Invalid("`/\\` is not an operator product".into())),
        })
    }
}

/// All `γ` with `0 ≤ γ ≤ α` componentwise.
fn sub_indices(alpha: &[u16]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut p = prefix.clone();
                p.push(g);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest order first, then by index.
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| {
            let oa: u32 = a.iter().map(|&e| e as u32).sum();
            let ob: u32 = b.iter().map(|&e| e as u32).sum();
            ob.cmp(&oa).then_with(|| b.cmp(a))
        });
        for (n, (idx, c)) in entries.into_iter().enumerate() {
            let derivs: Vec<String> = idx
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(a, &e)| {
                    let name = self.chart.coord_name(a);
                    if e == 1 {
                        format!("d({name})")
                    } else {
                        format!("d{e}({name})")
                    }
                })
                .collect();
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.numer().len() == 1 => (true, rest.to_string()),
                _ => (false, text),
            };
            if n > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let simple = c.denom().is_one() && c.numer().len() == 1;
            if derivs.is_empty() {
                if simple || n == 0 {
                    f.write_str(&body)?;
                } else {
                    write!(f, "({body})")?;
                }
            } else {
                if body != "1" {
                    if simple {
                        write!(f, "{body}*")?;
                    } else {
                        write!(f, "({body})*")?;
                    }
                }
                f.write_str(&derivs.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Context;

    fn chart() -> Arc<Chart> {
        let ctx = Context::free(&["x0", "x1", "x2", "x3"], &["m"]);
        Chart::all("M", &ctx).unwrap()
    }

    #[test]
    fn derivative_past_coordinate() {
        let c = chart();
        let d = DifferentialOperator::parse("d(x0)", &c).unwrap();
        let x = DifferentialOperator::parse("x0", &c).unwrap();
        let composed = d.compose(&x).unwrap();
        assert_eq!(composed, DifferentialOperator::parse("x0*d(x0) + 1", &c).unwrap());
        assert_eq!(d.commutator(&x).unwrap(), DifferentialOperator::identity(&c));
        assert_eq!(DifferentialOperator::parse("d(x0)*x0", &c).unwrap(), composed);
    }

    #[test]
    fn multiplications_commute() {
        let c = chart();
        let s = DifferentialOperator::parse("x0^2 - x1", &c).unwrap();
        let t = DifferentialOperator::parse("x2*x3", &c).unwrap();
        assert!(s.commutator(&t).unwrap().is_zero());
        assert!(s.commutator(&s).unwrap().is_zero());
    }

    #[test]
    fn box_with_identity_and_display() {
        let c = chart();
        let b = DifferentialOperator::parse("d2(x0) - d2(x1) - d2(x2) - d2(x3) + m^2", &c).unwrap();
        assert_eq!(b.compose(&DifferentialOperator::identity(&c)).unwrap(), b);
        assert_eq!(b.order(), 2);
        let back = DifferentialOperator::parse(&b.to_string(), &c).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn apply_matches_manual_derivative() {
        let c = chart();
        let op = DifferentialOperator::parse("x1*d2(x0) + d(x1)", &c).unwrap();
        let f = c.expr("x0^3*x1").unwrap();
        assert_eq!(op.apply(&f).unwrap(), c.expr("6*x0*x1^2 + x0^3").unwrap());
    }

    #[test]
    fn parse_errors() {
        let c = chart();
        assert!(DifferentialOperator::parse("d(y)", &c).is_err());
        assert!(DifferentialOperator::parse("q(x0)", &c).is_err());
        assert!(DifferentialOperator::parse("x0/d(x1)", &c).is_err());
    }
}
