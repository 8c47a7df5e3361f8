//! The difference polynomial ring K{y1..yn}: transform variables,
//! sparse polynomials, transforms, partial derivatives, order bookkeeping.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::dfield::{DifferenceField, FieldElement};
use crate::error::{Error, Result};

/// The algebraic indeterminate y_{var}^{(order)}, written `y@order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub var: usize,
    pub order: usize,
}

impl VarRef {
    pub fn new(var: usize, order: usize) -> Self {
        VarRef { var, order }
    }

    pub fn shifted(&self, m: usize) -> Self {
        VarRef {
            var: self.var,
            order: self.order + m,
        }
    }

    pub fn display(&self, var_names: &[String]) -> String {
        if self.order == 0 {
            var_names[self.var].clone()
        } else {
            format!("{}@{}", var_names[self.var], self.order)
        }
    }
}

impl Ord for VarRef {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, self.var).cmp(&(other.order, other.var))
    }
}

impl PartialOrd for VarRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Power product of transform variables; factors sorted, exponents >= 1.
/// Ordered graded-lexicographically on (order, var, exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaMono(Vec<(VarRef, u32)>);

impl SigmaMono {
    pub fn one() -> Self {
        SigmaMono(Vec::new())
    }

    pub fn var(v: VarRef) -> Self {
        SigmaMono(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(VarRef, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &SigmaMono) -> SigmaMono {
        let mut map: BTreeMap<VarRef, u32> = self.0.iter().cloned().collect();
        for &(v, e) in &other.0 {
            *map.entry(v).or_insert(0) += e;
        }
        SigmaMono(map.into_iter().collect())
    }

    pub fn shifted(&self, m: usize) -> SigmaMono {
        SigmaMono(self.0.iter().map(|&(v, e)| (v.shifted(m), e)).collect())
    }

    pub fn exponent_of(&self, v: VarRef) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn display(&self, var_names: &[String]) -> String {
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    v.display(var_names)
                } else {
                    format!("{}^{}", v.display(var_names), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for SigmaMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let a: Vec<(usize, usize, u32)> =
                    self.0.iter().map(|&(v, e)| (v.order, v.var, e)).collect();
                let b: Vec<(usize, usize, u32)> =
                    other.0.iter().map(|&(v, e)| (v.order, v.var, e)).collect();
                a.cmp(&b)
            })
    }
}

impl PartialOrd for SigmaMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse difference polynomial with `FieldElement` coefficients.
///
/// `coeff_nvars` is the generator count of the coefficient field, needed to
/// mint constants; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaPolynomial {
    coeff_nvars: usize,
    terms: BTreeMap<SigmaMono, FieldElement>,
}

impl SigmaPolynomial {
    pub fn zero(coeff_nvars: usize) -> Self {
        SigmaPolynomial {
            coeff_nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let mut p = Self::zero(c.nvars());
        p.add_term(SigmaMono::one(), c);
        p
    }

    pub fn one(coeff_nvars: usize) -> Self {
        Self::constant(FieldElement::one(coeff_nvars))
    }

    pub fn var(v: VarRef, coeff_nvars: usize) -> Self {
        let mut p = Self::zero(coeff_nvars);
        p.add_term(SigmaMono::var(v), FieldElement::one(coeff_nvars));
        p
    }

    pub fn coeff_nvars(&self) -> usize {
        self.coeff_nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SigmaMono, &FieldElement)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: SigmaMono, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SigmaPolynomial) -> SigmaPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SigmaPolynomial) -> SigmaPolynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SigmaPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn mul(&self, other: &SigmaPolynomial) -> SigmaPolynomial {
        let mut out = Self::zero(self.coeff_nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &FieldElement) -> SigmaPolynomial {
        let mut out = Self::zero(self.coeff_nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul(c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> SigmaPolynomial {
        let mut base = self.clone();
        let mut acc = Self::one(self.coeff_nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Every variable order shifted by +m and every coefficient mapped
    /// through sigma^m.
    pub fn transform(&self, m: usize, field: &DifferenceField) -> SigmaPolynomial {
        if m == 0 {
            return self.clone();
        }
        let mut out = Self::zero(self.coeff_nvars);
        for (mono, c) in &self.terms {
            out.add_term(mono.shifted(m), field.sigma_apply(c, m));
        }
        out
    }

    /// Formal partial derivative, treating each transform variable as an
    /// independent indeterminate.
    pub fn partial_derivative(&self, v: VarRef) -> SigmaPolynomial {
        let mut out = Self::zero(self.coeff_nvars);
        for (mono, c) in &self.terms {
            let e = mono.exponent_of(v);
            if e == 0 {
                continue;
            }
            let reduced: Vec<(VarRef, u32)> = mono
                .factors()
                .iter()
                .filter_map(|&(w, we)| {
                    if w == v {
                        if we == 1 {
                            None
                        } else {
                            Some((w, we - 1))
                        }
                    } else {
                        Some((w, we))
                    }
                })
                .collect();
            let scale = FieldElement::from_int(self.coeff_nvars, e as i64);
            out.add_term(SigmaMono(reduced), c.mul(&scale));
        }
        out
    }

    /// Max transform order of variable `var`, `None` when absent.
    pub fn order_of(&self, var: usize) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter(|&&(v, _)| v.var == var)
            .map(|&(v, _)| v.order)
            .max()
    }

    pub fn max_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .map(|&(v, _)| v.order)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(SigmaMono::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn display(&self, var_names: &[String], gen_names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.terms.len() == 1 {
            let (mono, coeff) = self.terms.iter().next().unwrap();
            if mono.is_one() {
                return coeff.display(gen_names);
            }
        }
        let mut out = String::new();
        for (idx, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = render_term(mono, coeff, var_names, gen_names);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn render_term(
    mono: &SigmaMono,
    coeff: &FieldElement,
    var_names: &[String],
    gen_names: &[String],
) -> (bool, String) {
    let mono_str = mono.display(var_names);
    if let Some(r) = coeff.as_rational() {
        let neg = r.is_negative();
        let abs = if neg { -r } else { r };
        if mono.is_one() {
            return (neg, fmt_rational(&abs));
        }
        if abs.is_one() {
            return (neg, mono_str);
        }
        return (neg, format!("{}*{}", fmt_rational(&abs), mono_str));
    }
    // single polynomial term over the generators stays unparenthesized
    if coeff.denominator().is_one() && coeff.numerator().num_terms() == 1 {
        let neg = coeff.numerator().leading().unwrap().1.is_negative();
        let p = if neg {
            coeff.numerator().neg()
        } else {
            coeff.numerator().clone()
        };
        let body = if mono.is_one() {
            p.display(gen_names)
        } else {
            format!("{}*{}", p.display(gen_names), mono_str)
        };
        return (neg, body);
    }
    let body = if mono.is_one() {
        format!("({})", coeff.display(gen_names))
    } else {
        format!("({})*{}", coeff.display(gen_names), mono_str)
    };
    (false, body)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A difference polynomial system F over a difference field, with its
/// order matrix and maximal order.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub field: DifferenceField,
    pub var_names: Vec<String>,
    pub equations: Vec<SigmaPolynomial>,
    /// eps[i][j] = order of y_j in f_i, `None` when y_j is absent from f_i.
    pub eps: Vec<Vec<Option<usize>>>,
    pub e: usize,
}

impl SystemSpec {
    pub fn new(
        field: DifferenceField,
        var_names: Vec<String>,
        equations: Vec<SigmaPolynomial>,
    ) -> Result<SystemSpec> {
        if var_names.is_empty() {
            return Err(Error::InvalidSystem("no variables declared".into()));
        }
        if equations.is_empty() {
            return Err(Error::InvalidSystem("no equations given".into()));
        }
        for (i, name) in var_names.iter().enumerate() {
            if var_names[..i].contains(name) {
                return Err(Error::InvalidSystem(format!("duplicate variable `{name}`")));
            }
        }
        for (i, f) in equations.iter().enumerate() {
            if f.is_zero() {
                return Err(Error::InvalidSystem(format!("equation f{} is zero", i + 1)));
            }
        }
        let (eps, e) = orders(&equations, var_names.len())?;
        Ok(SystemSpec {
            field,
            var_names,
            equations,
            eps,
            e,
        })
    }

    pub fn n(&self) -> usize {
        self.var_names.len()
    }

    pub fn r(&self) -> usize {
        self.equations.len()
    }

    /// Max total degree over the equations (the default D of the
    /// membership bound).
    pub fn max_total_degree(&self) -> u32 {
        self.equations
            .iter()
            .map(SigmaPolynomial::total_degree)
            .max()
            .unwrap_or(0)
    }
}

/// Order matrix eps[i][j] and global maximum e. Rejects systems with e = 0:
/// those involve no transform at all.
pub fn orders(equations: &[SigmaPolynomial], n: usize) -> Result<(Vec<Vec<Option<usize>>>, usize)> {
    let eps: Vec<Vec<Option<usize>>> = equations
        .iter()
        .map(|f| (0..n).map(|j| f.order_of(j)).collect())
        .collect();
    let e = eps.iter().flatten().filter_map(|&o| o).max().unwrap_or(0);
    if e == 0 {
        return Err(Error::SystemNotDifference);
    }
    Ok((eps, e))
}
