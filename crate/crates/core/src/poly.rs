//! Sparse multivariate polynomials over exact rationals.
//!
//! `MultiPoly` is the coefficient workhorse for everything in the crate:
//! numerators and denominators of rational functions, cleared matrix entries
//! for fraction-free elimination, and the oracle's ideal generators. All
//! arithmetic is exact; coefficients are `BigRational` with unbounded
//! integers.
//!
//! Monomials are exponent vectors of a fixed length (`nvars`). The storage
//! order is graded lexicographic, which doubles as the deterministic display
//! order. The oracle imposes its own term orders externally (see
//! `oracle::TermOrder`).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector. Compared graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn constant(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div(&self, other: &Mono) -> Mono {
        debug_assert!(self.divides(other));
        Mono(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl Ord for Mono {
    /// Graded, then lexicographic with the later index more significant;
    /// in the oracle rings the later index is the higher transform order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for i in (0..self.0.len()).rev() {
                    if self.0[i] != other.0[i] {
                        return self.0[i].cmp(&other.0[i]);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with `BigRational` coefficients.
///
/// Invariant: no zero coefficients are stored, and every monomial key has
/// length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::constant(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.terms.insert(Mono::var(nvars, idx), BigRational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Mono, BigRational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_constant())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Leading (monomial, coefficient) in the storage order.
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono, c: &BigRational) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            out.add_term(ma.mul(m), ca * c);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
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

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[var] = e - 1;
                out.add_term(m2, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-index variables: `mapping[old] = new`, target width `new_nvars`.
    pub fn map_vars(&self, mapping: &[usize], new_nvars: usize) -> MultiPoly {
        debug_assert_eq!(mapping.len(), self.nvars);
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_nvars];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[mapping[i]] += x;
                }
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    // ---- gcd machinery ----

    /// Rational content: gcd of coefficient numerators over lcm of
    /// denominators, signed so that `self / content` has positive leading
    /// coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    /// Integer-primitive form: content removed, leading coefficient positive.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.rational_content();
        self.mul_scalar(&c.recip())
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    /// Callers rely on algebraic guarantees (Bareiss minors, gcd cofactors).
    pub fn div_exact(&self, divisor: &MultiPoly) -> MultiPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let (dm, dc) = {
            let (m, c) = divisor.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            assert!(
                dm.divides(&rm),
                "inexact polynomial division (leading monomial not divisible)"
            );
            let qm = dm.div(&rm);
            let qc = &rc / &dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = rem.sub(&divisor.mul_mono(&qm, &qc));
        }
        quot
    }

    /// View as a univariate polynomial in `var`: coefficient of `var^i`
    /// (with the `var` exponent zeroed out) at index `i`.
    fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    fn from_coeffs_in_var(nvars: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = Self::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut m2 = m.clone();
                m2.0[var] += e as u32;
                out.add_term(m2, v.clone());
            }
        }
        out
    }

    /// Greatest common divisor, integer-primitive with positive leading
    /// coefficient. Recursive content/primitive-part construction with a
    /// primitive pseudo-remainder sequence in the top variable.
    pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(a.nvars, b.nvars);
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        let a = a.primitive();
        let b = b.primitive();
        if a.is_constant() || b.is_constant() {
            return Self::one(a.nvars);
        }
        // top variable occurring in either operand
        let var = (0..a.nvars)
            .rev()
            .find(|&v| a.uses_var(v) || b.uses_var(v))
            .unwrap();
        if !a.uses_var(var) || !b.uses_var(var) {
            // gcd divides the operand free of `var`, hence has no `var`:
            // recurse on the var-content of the one that uses it.
            let (free, bound) = if a.uses_var(var) { (b, a) } else { (a, b) };
            let cont = bound
                .coeffs_in_var(var)
                .iter()
                .fold(Self::zero(free.nvars), |g, c| Self::gcd(&g, c));
            return Self::gcd(&free, &cont);
        }

        let ca = a.coeffs_in_var(var);
        let cb = b.coeffs_in_var(var);
        let cont_a = ca.iter().fold(Self::zero(a.nvars), |g, c| Self::gcd(&g, c));
        let cont_b = cb.iter().fold(Self::zero(a.nvars), |g, c| Self::gcd(&g, c));
        let cont = Self::gcd(&cont_a, &cont_b);
        let pp_a: Vec<MultiPoly> = ca.iter().map(|c| c.div_exact(&cont_a)).collect();
        let pp_b: Vec<MultiPoly> = cb.iter().map(|c| c.div_exact(&cont_b)).collect();

        let (mut u, mut v) = if pp_a.len() >= pp_b.len() {
            (pp_a, pp_b)
        } else {
            (pp_b, pp_a)
        };
        loop {
            let r = pseudo_rem(&u, &v);
            if r.is_empty() {
                break;
            }
            // primitive part in `var`: strip the content over the remaining vars
            let rc = r.iter().fold(Self::zero(a.nvars), |g, c| Self::gcd(&g, c));
            let rp: Vec<MultiPoly> = r.iter().map(|c| c.div_exact(&rc)).collect();
            u = v;
            v = rp;
        }
        let g = Self::from_coeffs_in_var(a.nvars, var, &v);
        cont.mul(&g).primitive()
    }
}

/// Pseudo-remainder of univariate views (coefficients indexed by degree,
/// top coefficient nonzero). Returns the trimmed remainder, empty if zero.
fn pseudo_rem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MultiPoly> = a.to_vec();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for i in 0..=db {
            r[dr - db + i] = r[dr - db + i].sub(&lr.mul(&b[i]));
        }
        debug_assert!(r[dr].is_zero());
        while r.last().map(MultiPoly::is_zero).unwrap_or(false) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

// ---- display ----

fn format_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl MultiPoly {
    /// Render with the given variable names, terms in descending storage
    /// order. The output re-parses in field-element context.
    pub fn display(&self, names: &[String]) -> String {
        debug_assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_constant() {
                factors.push(format_coeff(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}
