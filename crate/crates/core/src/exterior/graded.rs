//! Storage shared by differential forms and multivector fields.
//!
//! Components are keyed by a bitmask over chart positions; bit `a` set means
//! coordinate `a` participates. The basis element for mask `I` is the wedge
//! of the corresponding `dx^a` (or `∂_a`) in increasing order of `a`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use super::chart::{CancelToken, Chart};
use crate::algebra::parse::{self, Ast};
use crate::algebra::RatExpr;
use crate::error::{Error, Result};

pub trait Kind: Clone + fmt::Debug + Send + Sync + 'static {
    fn basis(name: &str) -> String;
    fn label() -> &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorKind;

impl Kind for FormKind {
    fn basis(name: &str) -> String {
        format!("d({name})")
    }
    fn label() -> &'static str {
        "form"
    }
}

impl Kind for VectorKind {
    fn basis(name: &str) -> String {
        format!("@{name}")
    }
    fn label() -> &'static str {
        "multivector"
    }
}

#[derive(Clone, Debug)]
pub struct Graded<K: Kind> {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<u32, RatExpr>,
    _kind: PhantomData<K>,
}

pub type DifferentialForm = Graded<FormKind>;
pub type MultivectorField = Graded<VectorKind>;

impl<K: Kind> PartialEq for Graded<K> {
    fn eq(&self, other: &Self) -> bool {
        Chart::same(&self.chart, &other.chart) && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

pub(crate) fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|a| mask & (1 << a) != 0).collect()
}

/// Sign of sorting `idx` into increasing order, or `None` on a repeat.
pub(crate) fn sort_sign(idx: &[usize]) -> Option<(u32, bool)> {
    let mut mask = 0u32;
    let mut inversions = 0;
    for (i, &a) in idx.iter().enumerate() {
        if mask & (1 << a) != 0 {
            return None;
        }
        mask |= 1 << a;
        inversions += idx[..i].iter().filter(|&&b| b > a).count();
    }
    Some((mask, inversions % 2 == 1))
}

/// Sign of `e_I ∧ e_J = ± e_{I∪J}` for disjoint masks.
pub(crate) fn wedge_sign(i: u32, j: u32) -> bool {
    let mut inversions = 0;
    for b in mask_indices(j) {
        inversions += (i >> (b + 1)).count_ones();
    }
    inversions % 2 == 1
}

impl<K: Kind> Graded<K> {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        Graded {
            chart: chart.clone(),
            degree,
            coeffs: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    pub fn scalar(chart: &Arc<Chart>, f: RatExpr) -> Self {
        let mut g = Self::zero(chart, 0);
        g.insert(0, f);
        g
    }

    /// Basis element for chart positions `idx` (any order; sign applied).
    pub fn basis(chart: &Arc<Chart>, idx: &[usize]) -> Self {
        let one = RatExpr::one(chart.context());
        Self::from_terms(chart, idx.len(), [(idx.to_vec(), one)])
    }

    /// Basis element by coordinate names.
    pub fn basis_named(chart: &Arc<Chart>, names: &[&str]) -> Result<Self> {
        let idx = names.iter().map(|n| chart.position(n)).collect::<Result<Vec<_>>>()?;
        Ok(Self::basis(chart, &idx))
    }

    pub fn from_terms(
        chart: &Arc<Chart>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, RatExpr)>,
    ) -> Self {
        let mut g = Self::zero(chart, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "index length must equal degree");
            if let Some((mask, neg)) = sort_sign(&idx) {
                g.accumulate(mask, if neg { -c } else { c });
            }
        }
        g
    }

    pub(crate) fn from_masks(chart: &Arc<Chart>, degree: usize, coeffs: BTreeMap<u32, RatExpr>) -> Self {
        Graded {
            chart: chart.clone(),
            degree,
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            _kind: PhantomData,
        }
    }

    fn insert(&mut self, mask: u32, c: RatExpr) {
        if !c.is_zero() {
            self.coeffs.insert(mask, c);
        }
    }

    pub(crate) fn accumulate(&mut self, mask: u32, c: RatExpr) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&mask) {
            Some(old) => self.insert(mask, &old + &c),
            None => self.insert(mask, c),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn masks(&self) -> impl Iterator<Item = (u32, &RatExpr)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    /// Components as (increasing positions, coefficient), in lexicographic order.
    pub fn terms(&self) -> Vec<(Vec<usize>, RatExpr)> {
        let mut out: Vec<_> = self.coeffs.iter().map(|(m, c)| (mask_indices(*m), c.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Component along the given positions (antisymmetric in their order).
    pub fn get(&self, idx: &[usize]) -> RatExpr {
        let zero = RatExpr::zero(self.chart.context());
        if idx.len() != self.degree {
            return zero;
        }
        match sort_sign(idx) {
            None => zero,
            Some((mask, neg)) => match self.coeffs.get(&mask) {
                None => zero,
                Some(c) if neg => -c,
                Some(c) => c.clone(),
            },
        }
    }

    /// Component by coordinate names.
    pub fn get_named(&self, names: &[&str]) -> Result<RatExpr> {
        let idx = names
            .iter()
            .map(|n| self.chart.position(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.get(&idx))
    }

    /// The coefficient of a degree-0 element.
    pub fn as_scalar(&self) -> Option<RatExpr> {
        (self.degree == 0).then(|| self.get(&[]))
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
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "cannot add {}s of degree {} and {}",
                K::label(),
                self.degree,
                other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.accumulate(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_infallible(|c| -c)
    }

    pub fn scale(&self, f: &RatExpr) -> Self {
        if f.is_zero() {
            return Self::zero(&self.chart, self.degree);
        }
        self.map_infallible(|c| c * f)
    }

    fn map_infallible(&self, f: impl Fn(&RatExpr) -> RatExpr) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, c)| (*m, f(c))).collect();
        Self::from_masks(&self.chart, self.degree, coeffs)
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatExpr) -> Result<RatExpr>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            coeffs.insert(*m, f(c)?);
        }
        Ok(Self::from_masks(&self.chart, self.degree, coeffs))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.wedge_cancellable(other, None)
    }

    pub fn wedge_cancellable(&self, other: &Self, token: Option<&CancelToken>) -> Result<Self> {
        self.same_chart(other)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(&self.chart, degree);
        if degree > self.chart.dim() {
            return Ok(out);
        }
        for (i, a) in &self.coeffs {
            CancelToken::check(token)?;
            for (j, b) in &other.coeffs {
                if i & j != 0 {
                    continue;
                }
                let t = a.try_mul(b)?;
                out.accumulate(i | j, if wedge_sign(*i, *j) { -t } else { t });
            }
        }
        Ok(out)
    }

    /// `self^{∧k}`.
    pub fn wedge_power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::scalar(&self.chart, RatExpr::one(self.chart.context()));
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Componentwise equality modulo the chart context.
    pub fn equal_mod(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Re-express on another chart with the same coordinate names, moving
    /// every coefficient into that chart's context.
    pub fn transfer(&self, chart: &Arc<Chart>) -> Result<Self> {
        let mut out = Self::zero(chart, self.degree);
        for (m, c) in &self.coeffs {
            let idx = mask_indices(*m)
                .into_iter()
                .map(|a| chart.position(self.chart.coord_name(a)))
                .collect::<Result<Vec<_>>>()?;
            let (mask, neg) = sort_sign(&idx).expect("distinct positions");
            let c = c.transfer(chart.context())?;
            out.accumulate(mask, if neg { -c } else { c });
        }
        Ok(out)
    }

    /// Parse the text serialization on `chart`.
    pub fn parse(text: &str, chart: &Arc<Chart>) -> Result<Self> {
        let ast = parse::parse_ast(text)?;
        Self::eval(&ast, chart)
    }

    fn eval(ast: &Ast, chart: &Arc<Chart>) -> Result<Self> {
        let ctx = chart.context();
        let scalar_only = |g: Self, pos: usize| -> Result<RatExpr> {
            g.as_scalar().ok_or(Error::Parse {
                pos,
                msg: "expected a scalar factor".into(),
            })
        };
        Ok(match ast {
            Ast::Num(_) => Self::scalar(chart, parse::eval_scalar(ast, ctx)?),
            Ast::Sym(name, pos) => match name.strip_prefix('@') {
                Some(coord) if K::label() == "multivector" => {
                    let a = chart.position(coord).map_err(|_| Error::Parse {
                        pos: *pos,
                        msg: format!("`{coord}` is not a coordinate of chart {}", chart.name()),
                    })?;
                    Self::basis(chart, &[a])
                }
                Some(_) => {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: "`@` basis vectors are not allowed in a form".into(),
                    })
                }
                None => Self::scalar(chart, RatExpr::var(ctx, name)?),
            },
            Ast::Call(name, args, pos) => {
                if name != "d" || K::label() != "form" || args.len() != 1 {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: format!("unexpected call `{name}(...)`"),
                    });
                }
                match &args[0] {
                    Ast::Sym(coord, p) => {
                        let a = chart.position(coord).map_err(|_| Error::Parse {
                            pos: *p,
                            msg: format!("`{coord}` is not a coordinate of chart {}", chart.name()),
                        })?;
                        Self::basis(chart, &[a])
                    }
                    _ => {
                        return Err(Error::Parse {
                            pos: *pos,
                            msg: "d(...) takes a single coordinate".into(),
                        })
                    }
                }
            }
            Ast::Neg(a) => Self::eval(a, chart)?.neg(),
            Ast::Add(a, b) => Self::eval(a, chart)?.add(&Self::eval(b, chart)?)?,
            Ast::Sub(a, b) => Self::eval(a, chart)?.sub(&Self::eval(b, chart)?)?,
            Ast::Mul(a, b) => {
                let (l, r) = (Self::eval(a, chart)?, Self::eval(b, chart)?);
                if let Some(s) = l.as_scalar() {
                    r.scale(&s)
                } else if let Some(s) = r.as_scalar() {
                    l.scale(&s)
                } else {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "use /\\ to multiply two basis elements".into(),
                    });
                }
            }
            Ast::Div(a, b) => {
                let s = scalar_only(Self::eval(b, chart)?, 0)?;
                Self::eval(a, chart)?.scale(&s.recip()?)
            }
            Ast::Pow(a, e) => {
                let s = scalar_only(Self::eval(a, chart)?, 0)?;
                Self::scalar(chart, s.pow(*e)?)
            }
            Ast::Wedge(a, b) => Self::eval(a, chart)?.wedge(&Self::eval(b, chart)?)?,
        })
    }
}

fn coefficient_text(c: &RatExpr) -> String {
    let s = c.to_string();
    if c.denom().is_one() && c.numer().len() == 1 {
        s
    } else {
        format!("({s})")
    }
}

impl<K: Kind> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.get(&[]));
        }
        let mut first = true;
        for (idx, c) in self.terms() {
            let basis: Vec<String> = idx.iter().map(|&a| K::basis(self.chart.coord_name(a))).collect();
            let basis = basis.join("/\\");
            let mut term = if c.is_one() {
                basis
            } else if (-&c).is_one() {
                format!("-{basis}")
            } else {
                format!("{}*{}", coefficient_text(&c), basis)
            };
            if first {
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                term = format!(" - {rest}");
            } else {
                term = format!(" + {term}");
            }
            f.write_str(&term)?;
        }
        Ok(())
    }
}
