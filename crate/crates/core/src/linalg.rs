//! Exact rank computation.
//!
//! Fraction-free (Bareiss) elimination over polynomial matrices, and plain
//! Gaussian elimination over the rationals for the probabilistic fast path.
//! Pivots are chosen by minimal (degree, term count) among the remaining
//! entries, which keeps intermediate minors small on the banded block
//! matrices this crate produces.
//!
//! Matrices over at most one generator take a dense univariate route with
//! integer coefficients (rows are scaled by their coefficient denominators,
//! which preserves rank); the sparse multivariate route handles the rest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::MultiPoly;

/// Rank of a matrix of polynomials over the fraction field, by one-step
/// Bareiss elimination with full pivoting. Exact.
pub fn bareiss_rank(m: Vec<Vec<MultiPoly>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    if rows == 0 || cols == 0 {
        return 0;
    }
    let univariate = m
        .iter()
        .flatten()
        .all(|p| p.nvars() <= 1 || !(1..p.nvars()).any(|v| p.uses_var(v)));
    if univariate {
        univariate_rank(&m)
    } else {
        generic_rank(m)
    }
}

fn generic_rank(mut m: Vec<Vec<MultiPoly>>) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut prev: Option<MultiPoly> = None;
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        // cheapest nonzero pivot in the trailing submatrix
        let mut pivot: Option<(usize, usize, u32, usize)> = None;
        for i in step..rows {
            for j in step..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                let key = (m[i][j].total_degree(), m[i][j].num_terms());
                match pivot {
                    Some((_, _, d, t)) if (d, t) <= key => {}
                    _ => pivot = Some((i, j, key.0, key.1)),
                }
            }
        }
        let Some((pi, pj, _, _)) = pivot else { break };
        m.swap(step, pi);
        if pj != step {
            for row in m.iter_mut() {
                row.swap(step, pj);
            }
        }
        rank += 1;
        let piv = m[step][step].clone();
        for i in step + 1..rows {
            for j in step + 1..cols {
                let mut t = piv.mul(&m[i][j]).sub(&m[i][step].mul(&m[step][j]));
                if let Some(p) = &prev {
                    t = t.div_exact(p);
                }
                m[i][j] = t;
            }
            m[i][step] = MultiPoly::zero(piv.nvars());
        }
        prev = Some(piv);
    }
    rank
}

// ---- dense univariate route ----

/// Dense univariate polynomial with integer coefficients, ascending degree,
/// no trailing zeros.
#[derive(Clone, Debug, Default)]
struct UniPoly(Vec<BigInt>);

impl UniPoly {
    fn zero() -> Self {
        UniPoly(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(&mut self) {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = UniPoly(out);
        p.trim();
        p
    }

    fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            out.push(a - b);
        }
        let mut p = UniPoly(out);
        p.trim();
        p
    }

    /// Exact division; the Bareiss identities guarantee divisibility.
    fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        debug_assert!(!divisor.is_zero());
        if self.is_zero() {
            return UniPoly::zero();
        }
        let dd = divisor.degree();
        let lead = &divisor.0[dd];
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); self.0.len() - dd];
        for k in (dd..self.0.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / lead;
            debug_assert!((&rem[k] % lead).is_zero(), "inexact coefficient division");
            for (i, c) in divisor.0.iter().enumerate() {
                let sub = c * &q;
                rem[k - dd + i] -= sub;
            }
            quot[k - dd] = q;
        }
        debug_assert!(rem.iter().all(BigInt::is_zero), "inexact division");
        let mut p = UniPoly(quot);
        p.trim();
        p
    }
}

/// Convert, scaling each row to integer coefficients (rank-preserving).
fn to_uni_rows(m: &[Vec<MultiPoly>]) -> Vec<Vec<UniPoly>> {
    m.iter()
        .map(|row| {
            let mut den_lcm = BigInt::one();
            for p in row {
                for (_, c) in p.terms() {
                    den_lcm = den_lcm.lcm(c.denom());
                }
            }
            let scale = BigRational::from_integer(den_lcm);
            row.iter()
                .map(|p| {
                    let mut coeffs: Vec<BigInt> = Vec::new();
                    for (mono, c) in p.terms() {
                        let deg = mono.0.first().copied().unwrap_or(0) as usize;
                        if coeffs.len() <= deg {
                            coeffs.resize(deg + 1, BigInt::zero());
                        }
                        let scaled = c * &scale;
                        debug_assert!(scaled.denom().is_one());
                        coeffs[deg] = scaled.numer().clone();
                    }
                    let mut u = UniPoly(coeffs);
                    u.trim();
                    u
                })
                .collect()
        })
        .collect()
}

fn univariate_rank(m: &[Vec<MultiPoly>]) -> usize {
    let mut m = to_uni_rows(m);
    let rows = m.len();
    let cols = m[0].len();
    let mut prev: Option<UniPoly> = None;
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        let mut pivot: Option<(usize, usize, usize)> = None;
        for i in step..rows {
            for j in step..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                let d = m[i][j].degree();
                match pivot {
                    Some((_, _, best)) if best <= d => {}
                    _ => pivot = Some((i, j, d)),
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        m.swap(step, pi);
        if pj != step {
            for row in m.iter_mut() {
                row.swap(step, pj);
            }
        }
        rank += 1;
        let piv = m[step][step].clone();
        for i in step + 1..rows {
            if m[i][step].is_zero() {
                // row update reduces to scaling by piv/prev
                for j in step + 1..cols {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    let mut t = piv.mul(&m[i][j]);
                    if let Some(p) = &prev {
                        t = t.div_exact(p);
                    }
                    m[i][j] = t;
                }
                continue;
            }
            for j in step + 1..cols {
                if m[i][j].is_zero() && m[step][j].is_zero() {
                    continue;
                }
                let mut t = piv.mul(&m[i][j]).sub(&m[i][step].mul(&m[step][j]));
                if let Some(p) = &prev {
                    t = t.div_exact(p);
                }
                m[i][j] = t;
            }
            m[i][step] = UniPoly::zero();
        }
        prev = Some(piv);
    }
    rank
}

/// Rank over Q by ordinary Gaussian elimination.
pub fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        let inv = m[row][col].recip();
        for i in row + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            for j in col..cols {
                let sub = &factor * &m[row][j];
                m[i][j] -= sub;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}
