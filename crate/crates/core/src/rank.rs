//! Evaluate symbolic matrices through a specialization and compute ranks
//! over the target difference field.
//!
//! The specialization is a sigma-compatible generic solution point standing
//! in for the residue field of the system's minimal difference-prime ideal.
//! Genericity cannot be checked; a non-generic point can only underestimate
//! ranks, which every report states as a caveat. The default engine is
//! exact (fraction-free elimination after clearing row denominators); the
//! probabilistic engine substitutes random rational points for the target
//! generators and takes the max over trials.

use num_rational::BigRational;

use crate::dfield::{clear_row_denominators, DifferenceField, FieldElement};
use crate::error::{Error, Result};
use crate::jacobi::{FieldMatrix, SymbolicMatrix};
use crate::linalg::{bareiss_rank, rational_rank};
use crate::sigma::{SigmaPolynomial, SystemSpec};

/// Retry budget per probabilistic trial before giving up on denominators.
const POINT_ATTEMPTS: usize = 64;

/// Coordinate bound for random rational points.
const POINT_BOUND: u64 = 1000;

/// A sigma-compatible assignment of the system variables into a target
/// difference field.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub target: DifferenceField,
    /// Value of y_j at index j, as an element of the target field.
    pub assign: Vec<FieldElement>,
}

/// Specialization bound to a system: coefficient embedding plus a cache of
/// sigma powers of the assigned values.
pub struct Evaluator<'a> {
    sys: &'a SystemSpec,
    sp: &'a Specialization,
    /// K generator index -> L generator index.
    embed: Vec<usize>,
    /// pows[j][k] = sigma_L^k(assign[j]).
    pows: Vec<Vec<FieldElement>>,
}

impl<'a> Evaluator<'a> {
    /// Checks the coefficient embedding: every generator of K must exist in
    /// L under the same name with the same sigma image.
    pub fn new(sys: &'a SystemSpec, sp: &'a Specialization) -> Result<Evaluator<'a>> {
        if sp.assign.len() != sys.n() {
            return Err(Error::InvalidSystem(format!(
                "specialization assigns {} variables, system has {}",
                sp.assign.len(),
                sys.n()
            )));
        }
        let k_field = &sys.field;
        let l_field = &sp.target;
        let mut embed = Vec::with_capacity(k_field.nvars());
        for name in k_field.generators() {
            match l_field.generator_index(name) {
                Some(li) => embed.push(li),
                None => {
                    return Err(Error::EmbeddingMismatch(format!(
                        "target field has no generator named `{name}`"
                    )))
                }
            }
        }
        for (ki, name) in k_field.generators().iter().enumerate() {
            let k_img_in_l = k_field.sigma_image(ki).map_vars(&embed, l_field.nvars());
            if k_img_in_l != l_field.sigma_image(embed[ki]) {
                return Err(Error::EmbeddingMismatch(format!(
                    "sigma images of `{name}` disagree between the coefficient and target fields"
                )));
            }
        }
        let pows = sp.assign.iter().map(|v| vec![v.clone()]).collect();
        Ok(Evaluator {
            sys,
            sp,
            embed,
            pows,
        })
    }

    pub fn target(&self) -> &DifferenceField {
        &self.sp.target
    }

    fn sigma_pow(&mut self, var: usize, order: usize) -> FieldElement {
        while self.pows[var].len() <= order {
            let last = self.pows[var].last().unwrap();
            let next = self.sp.target.sigma_apply(last, 1);
            self.pows[var].push(next);
        }
        self.pows[var][order].clone()
    }

    fn embed_coeff(&self, c: &FieldElement) -> FieldElement {
        if self.sys.field.nvars() == 0 {
            // rational constant into L
            FieldElement::constant(
                self.sp.target.nvars(),
                c.as_rational().expect("constant over Q"),
            )
        } else {
            c.map_vars(&self.embed, self.sp.target.nvars())
        }
    }

    /// Evaluate a difference polynomial at the assigned point:
    /// y_j@k goes to sigma_L^k(assign[j]).
    pub fn eval_poly(&mut self, p: &SigmaPolynomial) -> FieldElement {
        let mut acc = FieldElement::zero(self.sp.target.nvars());
        let terms: Vec<_> = p
            .terms()
            .map(|(m, c)| (m.factors().to_vec(), c.clone()))
            .collect();
        for (factors, coeff) in terms {
            let mut t = self.embed_coeff(&coeff);
            for (v, e) in factors {
                let val = self.sigma_pow(v.var, v.order);
                t = t.mul(&val.pow(e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_matrix(&mut self, m: &SymbolicMatrix) -> FieldMatrix {
        let mut out = FieldMatrix::zero(m.rows, m.cols, self.sp.target.nvars());
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, self.eval_poly(m.at(i, j)));
            }
        }
        out
    }
}

/// Confirms the point solves the system: every f_i must evaluate to zero.
/// All failing equations are reported together with their residuals.
pub fn validate_specialization(sys: &SystemSpec, sp: &Specialization) -> Result<()> {
    let mut ev = Evaluator::new(sys, sp)?;
    let mut failures = Vec::new();
    for (i, f) in sys.equations.iter().enumerate() {
        let residual = ev.eval_poly(f);
        if !residual.is_zero() {
            failures.push((i, residual.display(sp.target.generators())));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::NotASolution(failures))
    }
}

/// Exact rank over the target field: clear each row's denominators, then
/// fraction-free elimination.
pub fn rank_exact(m: &FieldMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    bareiss_rank(clear_row_denominators(&m.to_rows()))
}

/// Probabilistic rank: substitute seeded random rational points for the
/// target generators and take the max rank over trials. Never exceeds the
/// true rank; equals it with high probability.
pub fn rank_probabilistic(
    m: &FieldMatrix,
    field: &DifferenceField,
    seed: u64,
    trials: usize,
) -> Result<usize> {
    assert!(trials >= 1, "at least one trial required");
    if m.rows == 0 || m.cols == 0 {
        return Ok(0);
    }
    let mut best = 0;
    for trial in 0..trials {
        let mut found = None;
        for attempt in 0..POINT_ATTEMPTS {
            let point_seed =
                crate::rng::SplitMix64::derive(seed, (trial * POINT_ATTEMPTS + attempt) as u64)
                    .next_u64();
            let point = field.random_rational_point(point_seed, POINT_BOUND);
            if let Some(rows) = eval_matrix_at(m, &point) {
                found = Some(rational_rank(rows));
                break;
            }
        }
        match found {
            Some(r) => best = best.max(r),
            None => return Err(Error::PointSearchExhausted(POINT_ATTEMPTS)),
        }
    }
    Ok(best)
}

fn eval_matrix_at(m: &FieldMatrix, point: &[BigRational]) -> Option<Vec<Vec<BigRational>>> {
    let mut rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut row = Vec::with_capacity(m.cols);
        for j in 0..m.cols {
            row.push(m.at(i, j).eval_rational(point)?);
        }
        rows.push(row);
    }
    Some(rows)
}
