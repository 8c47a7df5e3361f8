//! Desk-scale brute-force verification over Q: Groebner bases for the
//! finite truncations of the difference ideal, elimination-ideal
//! stabilization, membership tests, and transcendence-degree cross-checks.
//!
//! Plain Buchberger with the coprimality and chain criteria; degrevlex by
//! default, a block order for elimination. The oracle exists for trust at
//! desk scale, not for performance, and is restricted to coefficient
//! field Q. Reduced bases are canonical, so ideal equality is plain
//! basis equality.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Mono, MultiPoly};
use crate::sigma::{SigmaPolynomial, SystemSpec};

pub const DEFAULT_VAR_LIMIT: usize = 14;

/// Soft cap on oracle problem size, overridable by environment or force.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    pub var_limit: usize,
    pub force: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            var_limit: DEFAULT_VAR_LIMIT,
            force: false,
        }
    }
}

impl OracleLimits {
    /// Honors `DINDEX_ORACLE_VAR_LIMIT` when set and parseable.
    pub fn from_env() -> Self {
        let mut limits = OracleLimits::default();
        if let Ok(v) = std::env::var("DINDEX_ORACLE_VAR_LIMIT") {
            if let Ok(n) = v.parse::<usize>() {
                limits.var_limit = n;
            }
        }
        limits
    }

    fn check(&self, nvars: usize) -> Result<()> {
        if !self.force && nvars > self.var_limit {
            return Err(Error::OracleTooLarge {
                nvars,
                limit: self.var_limit,
            });
        }
        Ok(())
    }
}

/// Term orders for the oracle ring. `Elim` makes any monomial touching an
/// eliminated variable (index >= retained) larger than any monomial
/// supported on the retained block, so a Groebner basis intersects cleanly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    DegRevLex,
    Elim { retained: usize },
}

/// Graded reverse-lexicographic with later indices (higher transform
/// orders) more significant, so bases solve high orders in terms of low.
fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in 0..a.len() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl TermOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            TermOrder::DegRevLex => degrevlex(&a.0, &b.0),
            TermOrder::Elim { retained } => degrevlex(&a.0[retained..], &b.0[retained..])
                .then_with(|| degrevlex(&a.0[..retained], &b.0[..retained])),
        }
    }
}

fn leading_term(p: &MultiPoly, ord: TermOrder) -> (&Mono, &BigRational) {
    p.terms()
        .max_by(|(m1, _), (m2, _)| ord.cmp(m1, m2))
        .expect("leading term of zero polynomial")
}

/// Fully reduce `p` modulo `basis`: no term of the result is divisible by
/// any basis leading term.
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly], ord: TermOrder) -> MultiPoly {
    let nvars = p.nvars();
    let lts: Vec<(Mono, BigRational)> = basis
        .iter()
        .map(|g| {
            let (m, c) = leading_term(g, ord);
            (m.clone(), c.clone())
        })
        .collect();
    let mut work = p.clone();
    let mut rem = MultiPoly::zero(nvars);
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = leading_term(&work, ord);
            (m.clone(), c.clone())
        };
        for (g, (gm, gc)) in basis.iter().zip(&lts) {
            if gm.divides(&lm) {
                let factor = lc.clone() / gc;
                work = work.sub(&g.mul_mono(&gm.div(&lm), &factor));
                continue 'outer;
            }
        }
        rem.add_term(lm.clone(), lc.clone());
        work.add_term(lm, -lc);
    }
    rem
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly, ord: TermOrder) -> MultiPoly {
    let (fm, fc) = leading_term(f, ord);
    let (gm, gc) = leading_term(g, ord);
    let lcm = fm.lcm(gm);
    let a = f.mul_mono(&fm.div(&lcm), &fc.recip());
    let b = g.mul_mono(&gm.div(&lcm), &gc.recip());
    a.sub(&b)
}

/// Buchberger's algorithm with the coprimality and chain criteria,
/// followed by full interreduction. The result is the unique reduced
/// Groebner basis: monic, mutually reduced, sorted by leading term.
pub fn groebner_basis(gens: &[MultiPoly], ord: TermOrder) -> Vec<MultiPoly> {
    let mut basis: Vec<MultiPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        // normal selection: smallest lcm degree first
        let &(i, j) = pending
            .iter()
            .min_by_key(|&&(i, j)| {
                let (mi, _) = leading_term(&basis[i], ord);
                let (mj, _) = leading_term(&basis[j], ord);
                (mi.lcm(mj).total_degree(), i, j)
            })
            .unwrap();
        pending.remove(&(i, j));
        let (mi, _) = leading_term(&basis[i], ord);
        let (mj, _) = leading_term(&basis[j], ord);
        let lcm = mi.lcm(mj);
        // coprime leading terms reduce to zero
        if lcm.total_degree() == mi.total_degree() + mj.total_degree() {
            continue;
        }
        // chain criterion: some k divides the lcm and both pairs are done
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leading_term(&basis[k], ord).0.divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], ord);
        let rem = normal_form(&s, &basis, ord);
        if !rem.is_zero() {
            let new = basis.len();
            basis.push(rem);
            for k in 0..new {
                pending.insert((k, new));
            }
        }
    }
    reduce_basis(basis, ord)
}

fn reduce_basis(mut basis: Vec<MultiPoly>, ord: TermOrder) -> Vec<MultiPoly> {
    // minimal: drop anything whose leading term another element divides
    let mut keep: Vec<MultiPoly> = Vec::new();
    basis.sort_by(|a, b| ord.cmp(leading_term(a, ord).0, leading_term(b, ord).0));
    for (idx, g) in basis.iter().enumerate() {
        let (gm, _) = leading_term(g, ord);
        let dominated = basis.iter().enumerate().any(|(k, h)| {
            k != idx && {
                let (hm, _) = leading_term(h, ord);
                hm.divides(gm) && (hm != gm || k < idx)
            }
        });
        if !dominated {
            keep.push(g.clone());
        }
    }
    // interreduce tails and normalize monic
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<MultiPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, h)| h.clone())
            .collect();
        let mut red = normal_form(&keep[i], &others, ord);
        let (_, lc) = leading_term(&red, ord);
        let inv = lc.recip();
        if !inv.is_one() {
            red = red.mul_scalar(&inv);
        }
        out.push(red);
    }
    out.sort_by(|a, b| ord.cmp(leading_term(a, ord).0, leading_term(b, ord).0));
    out
}

/// The ordinary ideal generated by F and its first k-1 transforms, as
/// polynomials in the (k+e)n variables y_j@l, l <= k-1+e. Level 0 is the
/// zero ideal in the e n variables of order < e.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    pub level: usize,
    pub n: usize,
    pub e: usize,
    pub nvars: usize,
    pub generators: Vec<MultiPoly>,
    pub var_names: Vec<String>,
}

/// Flat index of y_j@l in the oracle ring: order-major.
fn oracle_var(n: usize, var: usize, order: usize) -> usize {
    order * n + var
}

fn oracle_names(sys: &SystemSpec, max_order: usize) -> Vec<String> {
    let mut names = Vec::with_capacity((max_order + 1) * sys.n());
    for l in 0..=max_order {
        for name in &sys.var_names {
            if l == 0 {
                names.push(name.clone());
            } else {
                names.push(format!("{name}@{l}"));
            }
        }
    }
    names
}

/// Convert a difference polynomial over Q into the oracle ring with
/// variables up to order `max_order`.
pub fn to_oracle_poly(p: &SigmaPolynomial, n: usize, max_order: usize) -> Result<MultiPoly> {
    let nvars = (max_order + 1) * n;
    let mut out = MultiPoly::zero(nvars);
    for (mono, coeff) in p.terms() {
        let Some(c) = coeff.as_rational() else {
            return Err(Error::OracleFieldUnsupported);
        };
        let mut exps = vec![0u32; nvars];
        for &(v, e) in mono.factors() {
            if v.order > max_order {
                return Err(Error::InvalidSystem(format!(
                    "order {} exceeds the oracle ring's maximum {max_order}",
                    v.order
                )));
            }
            exps[oracle_var(n, v.var, v.order)] += e;
        }
        out.add_term(Mono(exps), c);
    }
    Ok(out)
}

pub fn truncated_ideal(sys: &SystemSpec, k: usize) -> Result<TruncatedIdeal> {
    if sys.field.nvars() != 0 {
        return Err(Error::OracleFieldUnsupported);
    }
    let (n, e) = (sys.n(), sys.e);
    let max_order = k + e - 1;
    let mut generators = Vec::with_capacity(k * sys.r());
    for l in 0..k {
        for f in &sys.equations {
            let shifted = f.transform(l, &sys.field);
            generators.push(to_oracle_poly(&shifted, n, max_order)?);
        }
    }
    Ok(TruncatedIdeal {
        level: k,
        n,
        e,
        nvars: (k + e) * n,
        generators,
        var_names: oracle_names(sys, max_order),
    })
}

/// Generators (a reduced Groebner basis) of the elimination ideal
/// retaining only variables of order <= i, expressed in the (i+1)n
/// variables of that smaller ring.
pub fn eliminate(t: &TruncatedIdeal, i: usize, limits: &OracleLimits) -> Result<Vec<MultiPoly>> {
    let retained = (i + 1) * t.n;
    if retained > t.nvars {
        return Err(Error::InvalidSystem(format!(
            "retain level {i} exceeds the ring's maximal order {}",
            t.nvars / t.n - 1
        )));
    }
    limits.check(t.nvars)?;
    let basis = groebner_basis(&t.generators, TermOrder::Elim { retained });
    let kept: Vec<MultiPoly> = basis
        .into_iter()
        .filter(|g| {
            g.terms()
                .all(|(m, _)| m.0[retained..].iter().all(|&x| x == 0))
        })
        .map(|g| {
            MultiPoly::from_terms(
                retained,
                g.terms()
                    .map(|(m, c)| (Mono(m.0[..retained].to_vec()), c.clone())),
            )
        })
        .collect();
    Ok(kept)
}

/// Least h such that the elimination ideal at retain level i agrees for
/// h, h+1 and h+2. Valid as a difference-index cross-check in the
/// sigma-prime case.
pub fn stabilization_scan(
    sys: &SystemSpec,
    i: usize,
    h_max: usize,
    limits: &OracleLimits,
) -> Result<usize> {
    let mut bases: Vec<Vec<MultiPoly>> = Vec::new();
    for h in 0..=h_max + 2 {
        let t = truncated_ideal(sys, h)?;
        bases.push(eliminate(&t, i.min(h + sys.e - 1), limits)?);
        if h >= 2 && bases[h] == bases[h - 1] && bases[h - 1] == bases[h - 2] {
            return Ok(h - 2);
        }
    }
    Err(Error::NoStabilizationWithinBudget(h_max))
}

/// Ideal membership by normal form against a degrevlex basis.
pub fn membership_test(f: &MultiPoly, t: &TruncatedIdeal, limits: &OracleLimits) -> Result<bool> {
    limits.check(t.nvars)?;
    if t.generators.is_empty() {
        return Ok(f.is_zero());
    }
    let basis = groebner_basis(&t.generators, TermOrder::DegRevLex);
    Ok(normal_form(f, &basis, TermOrder::DegRevLex).is_zero())
}

/// Transcendence degree of the residue field of the truncation: the
/// dimension of the ideal, computed as the largest set of variables
/// independent modulo the leading-term ideal.
pub fn trdeg_oracle(t: &TruncatedIdeal, limits: &OracleLimits) -> Result<usize> {
    limits.check(t.nvars)?;
    assert!(t.nvars <= 64, "independent-set search uses u64 bitmasks");
    if t.generators.is_empty() {
        return Ok(t.nvars);
    }
    let basis = groebner_basis(&t.generators, TermOrder::DegRevLex);
    let supports: Vec<u64> = basis
        .iter()
        .map(|g| {
            let (m, _) = leading_term(g, TermOrder::DegRevLex);
            m.0.iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .fold(0u64, |acc, (v, _)| acc | (1 << v))
        })
        .collect();
    let all = if t.nvars == 64 {
        u64::MAX
    } else {
        (1u64 << t.nvars) - 1
    };
    let mut memo: HashMap<u64, usize> = HashMap::new();
    Ok(max_independent(all, &supports, &mut memo))
}

/// Largest subset of `cand` containing no leading-term support entirely.
fn max_independent(cand: u64, supports: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
    if let Some(&v) = memo.get(&cand) {
        return v;
    }
    let result = match supports.iter().find(|&&s| s & !cand == 0) {
        None => cand.count_ones() as usize,
        Some(&s) => {
            let mut best = 0;
            let mut bits = s;
            while bits != 0 {
                let v = bits & bits.wrapping_neg();
                bits ^= v;
                best = best.max(max_independent(cand & !v, supports, memo));
            }
            best
        }
    };
    memo.insert(cand, result);
    result
}
