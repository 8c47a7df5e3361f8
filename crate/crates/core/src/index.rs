//! The analysis pipeline: rank profiles of the Jacobian families, the
//! quasi dimension polynomial, the mu sequence and the difference index,
//! structural invariants, regularity and ideal-membership bounds, and the
//! randomized lemma lab for the generic block families.
//!
//! Every profile is computed out to a kmax that exceeds the guaranteed
//! onset bound of its eventual affine law, so tail fitting never iterates
//! open-endedly: the last points are provably on the line, and the onset
//! is read off by scanning back.

use num_bigint::BigUint;
use serde::Serialize;

use crate::dfield::{DifferenceField, FieldElement};
use crate::error::{Error, Result};
use crate::jacobi::{build_jk, build_jki, build_mk, build_nk, BlockFamily, FieldMatrix};
use crate::poly::MultiPoly;
use crate::rank::{rank_exact, rank_probabilistic, Evaluator, Specialization};
use crate::rng::SplitMix64;
use crate::sigma::SystemSpec;

/// Exponent threshold below which the doubly exponential membership bound
/// is materialized as an exact integer.
pub const EXACT_DEGREE_EXPONENT_LIMIT: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankEngine {
    Exact,
    Probabilistic { seed: u64, trials: usize },
}

impl RankEngine {
    pub fn name(&self) -> &'static str {
        match self {
            RankEngine::Exact => "exact",
            RankEngine::Probabilistic { .. } => "probabilistic",
        }
    }

    /// Rank of an evaluated matrix; the probabilistic engine derives its
    /// stream from (seed, task) so parallel schedules cannot reorder it.
    pub fn rank(&self, m: &FieldMatrix, field: &DifferenceField, task: u64) -> Result<usize> {
        match self {
            RankEngine::Exact => Ok(rank_exact(m)),
            RankEngine::Probabilistic { seed, trials } => rank_probabilistic(
                m,
                field,
                SplitMix64::derive(*seed, task).next_u64(),
                *trials,
            ),
        }
    }
}

/// A sequence k -> value with its fitted affine tail.
#[derive(Clone, Debug, Serialize)]
pub struct RankProfile {
    /// values[k] for k = 0..=kmax.
    pub values: Vec<usize>,
    pub slope: i64,
    pub intercept: i64,
    /// Least k such that every sampled j >= k lies on the fitted line.
    pub onset: usize,
    pub kmax: usize,
}

/// Fit the eventual affine law of a profile whose onset is guaranteed to be
/// at most `bound`. Requires values through kmax >= bound + 1, so the final
/// difference lies past the onset. When a further point is available the
/// two final differences are compared; a disagreement there means the
/// guarantee itself failed.
pub fn fit_tail(values: &[usize], bound: usize) -> Result<RankProfile> {
    let kmax = values.len() - 1;
    assert!(kmax > bound, "profile too short for its onset bound");
    let v = |k: usize| values[k] as i64;
    let slope = v(kmax) - v(kmax - 1);
    if kmax >= bound + 2 {
        let prev = v(kmax - 1) - v(kmax - 2);
        if prev != slope {
            return Err(Error::TailNotLinear {
                kmax,
                d1: prev,
                d2: slope,
            });
        }
    }
    let intercept = v(kmax) - slope * kmax as i64;
    let mut onset = kmax;
    while onset > 0 && v(onset - 1) == slope * (onset as i64 - 1) + intercept {
        onset -= 1;
    }
    Ok(RankProfile {
        values: values.to_vec(),
        slope,
        intercept,
        onset,
        kmax,
    })
}

/// The quasi dimension profile: psi(0) = e n, and for k >= 1
/// psi(k) = (k+e) n - rank(J_k) over the target field.
#[derive(Clone, Debug)]
pub struct PsiProfile {
    pub profile: RankProfile,
    /// rank(J_k) for k = 1..=kmax.
    pub ranks_jk: Vec<usize>,
    pub d: usize,
    pub s: i64,
    pub rho: usize,
    pub bound: usize,
}

pub fn psi_profile(
    sys: &SystemSpec,
    sp: &Specialization,
    kmax: Option<usize>,
    engine: RankEngine,
) -> Result<PsiProfile> {
    let (n, r, e) = (sys.n(), sys.r(), sys.e);
    let bound = e * (r.min(n) + 1);
    let kmax = kmax.unwrap_or(0).max(bound + 2);
    let mut ev = Evaluator::new(sys, sp)?;
    let mut ranks_jk = Vec::with_capacity(kmax);
    let mut values = vec![e * n];
    for k in 1..=kmax {
        let m = ev.eval_matrix(&build_jk(sys, k));
        let rank = engine.rank(&m, &sp.target, k as u64)?;
        ranks_jk.push(rank);
        let dim = (k + e) * n;
        if rank > dim {
            return Err(Error::InvalidSystem(format!(
                "rank(J_{k}) = {rank} exceeds the variable count {dim}"
            )));
        }
        values.push(dim - rank);
    }
    let profile = fit_tail(&values, bound)?;
    if profile.slope < 0 || profile.slope > n as i64 {
        return Err(Error::HypothesisViolation(format!(
            "dimension profile slope {} outside [0, n = {n}]",
            profile.slope
        )));
    }
    let d = profile.slope as usize;
    let s = profile.intercept;
    let rho = profile.onset;
    Ok(PsiProfile {
        profile,
        ranks_jk,
        d,
        s,
        rho,
        bound,
    })
}

/// mu_k = k r - rank(J_{k,i}) for k = 0..=kmax (mu_0 = 0), together with
/// the ranks themselves.
pub fn mu_profile(
    sys: &SystemSpec,
    sp: &Specialization,
    i: usize,
    kmax: usize,
    engine: RankEngine,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let r = sys.r();
    let mut ev = Evaluator::new(sys, sp)?;
    let mut mu = vec![0usize];
    let mut ranks = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let m = ev.eval_matrix(&build_jki(sys, k, i)?);
        let rank = engine.rank(&m, &sp.target, (1 << 32) | k as u64)?;
        ranks.push(rank);
        if rank > k * r {
            return Err(Error::InvalidSystem(format!(
                "rank(J_({k},{i})) = {rank} exceeds the row count {}",
                k * r
            )));
        }
        mu.push(k * r - rank);
    }
    Ok((mu, ranks))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportSettings {
    pub kmax_psi: usize,
    pub kmax_mu: usize,
    pub i: usize,
    pub bound_psi: usize,
    pub bound_mu: usize,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

/// The full analysis result. JSON field names are part of the interface.
#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub n: usize,
    pub r: usize,
    pub e: usize,
    pub d: usize,
    pub s: i64,
    pub rho: usize,
    pub mu: Vec<usize>,
    pub omega: usize,
    pub a: i64,
    pub sigma_dim: usize,
    pub ord_p: i64,
    pub regularity_bound: usize,
    #[serde(rename = "ranks_Jk")]
    pub ranks_jk: Vec<usize>,
    #[serde(rename = "ranks_Jki")]
    pub ranks_jki: Vec<usize>,
    pub engine: String,
    pub warnings: Vec<String>,
    pub psi: Vec<usize>,
    pub settings: ReportSettings,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub kmax: Option<usize>,
    pub i: Option<usize>,
    pub engine: Option<RankEngine>,
}

/// Render the affine polynomial c1*k + c0 as a short string in `k`.
pub fn affine_str(slope: i64, intercept: i64) -> String {
    match (slope, intercept) {
        (0, c) => format!("{c}"),
        (1, 0) => "k".to_string(),
        (m, 0) => format!("{m}k"),
        (1, c) if c > 0 => format!("k+{c}"),
        (1, c) => format!("k{c}"),
        (m, c) if c > 0 => format!("{m}k+{c}"),
        (m, c) => format!("{m}k{c}"),
    }
}

/// Run the whole pipeline: psi profile, mu profile, difference index,
/// structural invariants, regularity bound. Invariant violations surface
/// as hypothesis errors (exit code 3 at the CLI).
pub fn difference_index(
    sys: &SystemSpec,
    sp: &Specialization,
    opts: AnalyzeOptions,
) -> Result<IndexReport> {
    let (n, r, e) = (sys.n(), sys.r(), sys.e);
    let engine = opts.engine.unwrap_or(RankEngine::Exact);
    let psi = psi_profile(sys, sp, opts.kmax, engine)?;
    let (d, s, rho) = (psi.d, psi.s, psi.rho);

    let i = opts.i.unwrap_or(e - 1);
    if i + 1 < e {
        return Err(Error::IndexTooSmall { i, min: e - 1 });
    }
    let bound_mu = (e * (r.min(n) + 2)).min(rho + e);
    let kmax_mu = opts.kmax.unwrap_or(0).max(bound_mu + 2);
    let (mu, ranks_jki) = mu_profile(sys, sp, i, kmax_mu, engine)?;
    let fit = fit_tail(&mu, bound_mu)?;

    let expected_slope = d as i64 + r as i64 - n as i64;
    if fit.slope != expected_slope {
        return Err(Error::SlopeMismatch {
            found: fit.slope,
            expected: expected_slope,
        });
    }
    let a = fit.intercept;
    let omega = fit.onset;
    let ord_p = s - (e as i64) * (d as i64) - a;
    let regularity_bound = (e - 1) + rho.saturating_sub(omega);

    // structural invariants; violations falsify the standing hypotheses
    if a < 0 {
        return Err(Error::HypothesisViolation(format!(
            "a = {a} is negative (requires s >= e*d + ord)"
        )));
    }
    if ord_p < 0 {
        return Err(Error::HypothesisViolation(format!(
            "ord = {ord_p} is negative"
        )));
    }
    if d < n.saturating_sub(r) || d > n {
        return Err(Error::HypothesisViolation(format!(
            "sigma-dimension d = {d} outside [max(0, n-r), n] = [{}, {n}]",
            n.saturating_sub(r)
        )));
    }
    if omega > bound_mu {
        return Err(Error::HypothesisViolation(format!(
            "difference index omega = {omega} exceeds its bound {bound_mu}"
        )));
    }
    for k in 0..mu.len() - 1 {
        if mu[k + 1] < mu[k] {
            return Err(Error::HypothesisViolation(format!(
                "mu is not monotone at k = {k}: {} > {}",
                mu[k],
                mu[k + 1]
            )));
        }
    }
    let psi_vals = &psi.profile.values;
    for k in 1..psi_vals.len() - 1 {
        let step = psi_vals[k + 1] as i64 - psi_vals[k] as i64;
        if step < n as i64 - r as i64 || step > n as i64 {
            return Err(Error::HypothesisViolation(format!(
                "psi step {step} at k = {k} outside [n-r, n] = [{}, {n}]",
                n as i64 - r as i64
            )));
        }
    }
    // the two tails must tell one story: d(i+1) + (d+r-n)k + s - ed - mu_k
    // is constant once both laws are in force
    let start = rho.max(omega);
    let coherent: Vec<i64> = (start..mu.len())
        .map(|k| {
            d as i64 * (i as i64 + 1) + expected_slope * k as i64 + s
                - (e * d) as i64
                - mu[k] as i64
        })
        .collect();
    if coherent.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::HypothesisViolation(
            "psi and mu tails are inconsistent".into(),
        ));
    }

    let rank_slope = n as i64 - d as i64;
    let rank_intercept = (e * n) as i64 - s;
    let mut warnings = vec![
        format!(
            "the dimension polynomial psi(k) = {} is distinct from the rank growth \
             rank(J_k) = {} of the Jacobian chain; the two must not be conflated",
            affine_str(d as i64, s),
            affine_str(rank_slope, rank_intercept)
        ),
        "the supplied point is assumed generic; a non-generic point can only \
         underestimate ranks"
            .to_string(),
        "quasi-primeness and reflexivity of the truncation ideals are assumed, \
         not verified"
            .to_string(),
    ];
    if sys.field.nvars() > 0 {
        warnings.push(
            "the Groebner oracle runs over Q only; this coefficient field leaves \
             the rank engine uncorroborated"
                .to_string(),
        );
    }

    Ok(IndexReport {
        n,
        r,
        e,
        d,
        s,
        rho,
        mu,
        omega,
        a,
        sigma_dim: d,
        ord_p,
        regularity_bound,
        ranks_jk: psi.ranks_jk,
        ranks_jki,
        engine: engine.name().to_string(),
        warnings,
        psi: psi_vals.clone(),
        settings: ReportSettings {
            kmax_psi: psi_vals.len() - 1,
            kmax_mu,
            i,
            bound_psi: psi.bound,
            bound_mu,
            seed: match engine {
                RankEngine::Probabilistic { seed, .. } => Some(seed),
                RankEngine::Exact => None,
            },
            trials: match engine {
                RankEngine::Probabilistic { trials, .. } => Some(trials),
                RankEngine::Exact => None,
            },
        },
    })
}

/// mu_{k,i} computed for several i; the proposition says the tables agree.
#[derive(Clone, Debug, Serialize)]
pub struct IInvarianceReport {
    pub i_values: Vec<usize>,
    pub kmax: usize,
    /// tables[idx][k] = mu_{k, i_values[idx]} for k = 0..=kmax.
    pub tables: Vec<Vec<usize>>,
    pub mismatches: Vec<String>,
}

impl IInvarianceReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn check_i_invariance(
    sys: &SystemSpec,
    sp: &Specialization,
    kmax: usize,
    i_values: &[usize],
    engine: RankEngine,
) -> Result<IInvarianceReport> {
    let mut tables = Vec::with_capacity(i_values.len());
    for &i in i_values {
        if i + 1 < sys.e {
            return Err(Error::IndexTooSmall { i, min: sys.e - 1 });
        }
        let (mu, _) = mu_profile(sys, sp, i, kmax, engine)?;
        tables.push(mu);
    }
    let mut mismatches = Vec::new();
    for idx in 1..tables.len() {
        for k in 0..=kmax {
            if tables[idx][k] != tables[0][k] {
                mismatches.push(format!(
                    "mu_({k},{}) = {} but mu_({k},{}) = {}",
                    i_values[idx], tables[idx][k], i_values[0], tables[0][k]
                ));
            }
        }
    }
    Ok(IInvarianceReport {
        i_values: i_values.to_vec(),
        kmax,
        tables,
        mismatches,
    })
}

/// One order/degree bound: transform order N, degree exponent m = (N+e+1)n,
/// and the degree bound (2D)^(2^m), exact when m is small enough.
#[derive(Clone, Debug, Serialize)]
pub struct BoundPart {
    #[serde(rename = "N")]
    pub n_order: usize,
    pub degree_exponent: u64,
    pub degree_bound_symbolic: String,
    /// Decimal rendering, present when degree_exponent <= the exact limit.
    pub degree_bound_exact: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipBound {
    pub ord_f: usize,
    #[serde(rename = "D")]
    pub degree_cap: u64,
    pub hypothesis_met: bool,
    /// Index-based bound with N = omega + max(-1, ord_f - e); absent when
    /// the hypothesis omega + max(0, ord_f - e + 1) >= rho fails.
    pub primary: Option<BoundPart>,
    /// Always valid: N = e(min(r,n)+2) + max(-1, ord_f - e).
    pub fallback: BoundPart,
}

fn bound_part(n_order: usize, e: usize, n: usize, d_cap: u64, exact_limit: u64) -> BoundPart {
    let m = ((n_order + e + 1) * n) as u64;
    let base = 2 * d_cap;
    let symbolic = format!("(2*{d_cap})^(2^{m})");
    let exact = if m <= exact_limit {
        let exp = 1u32 << m;
        Some(BigUint::from(base).pow(exp).to_string())
    } else {
        None
    };
    BoundPart {
        n_order,
        degree_exponent: m,
        degree_bound_symbolic: symbolic,
        degree_bound_exact: exact,
    }
}

/// Effective order/degree bounds for writing an order-`ord_f` member of the
/// difference ideal over the generators and their first N transforms.
/// `degree_cap` defaults to the max total degree of F.
pub fn membership_bounds(
    sys: &SystemSpec,
    report: &IndexReport,
    ord_f: usize,
    degree_cap: Option<u64>,
    exact_limit: Option<u64>,
) -> MembershipBound {
    let (n, r, e) = (sys.n(), sys.r(), sys.e);
    let d_cap = degree_cap.unwrap_or(sys.max_total_degree() as u64);
    let exact_limit = exact_limit.unwrap_or(EXACT_DEGREE_EXPONENT_LIMIT);
    let shift = ord_f as i64 - e as i64; // max(-1, ord_f - e)
    let adj = shift.max(-1);
    let fallback_n = (e as i64 * (r.min(n) as i64 + 2) + adj) as usize;
    let fallback = bound_part(fallback_n, e, n, d_cap, exact_limit);
    let lhs = report.omega as i64 + (shift + 1).max(0);
    let hypothesis_met = lhs >= report.rho as i64;
    let primary = if hypothesis_met {
        let n_order = (report.omega as i64 + adj) as usize;
        Some(bound_part(n_order, e, n, d_cap, exact_limit))
    } else {
        None
    };
    MembershipBound {
        ord_f,
        degree_cap: d_cap,
        hypothesis_met,
        primary,
        fallback,
    }
}

// ---- lemma lab ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    M,
    N,
}

impl FamilyKind {
    /// Guaranteed onset bound for the affine rank law of the family.
    pub fn onset_bound(&self, t: usize, p: usize, q: usize) -> usize {
        match self {
            FamilyKind::M => (t - 1) * (p.min(q) + 1),
            FamilyKind::N => (t - 1) * (p.min(q) + 2),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaLabReport {
    pub kind: FamilyKind,
    pub t: usize,
    pub p: usize,
    pub q: usize,
    pub trials: usize,
    pub seed: u64,
    pub bound: usize,
    pub kmax: usize,
    pub onsets: Vec<usize>,
    /// onset value -> number of trials that hit it.
    pub onset_histogram: Vec<(usize, usize)>,
}

/// Default coefficient field of the lemma lab: Q(t) with sigma(t) = t + 1.
pub fn shift_field() -> DifferenceField {
    let t = FieldElement::generator(1, 0);
    DifferenceField::new(vec!["t".into()], Some(vec![t.add(&FieldElement::one(1))]))
        .expect("shift field is valid")
}

/// Random block with degree-<=1 entries and integer coefficients in
/// [-3, 3]: small enough for exact ranks at hundreds of trials, rich
/// enough to exercise the twisting.
fn random_block(rng: &mut SplitMix64, field: &DifferenceField, p: usize, q: usize) -> FieldMatrix {
    let g = field.nvars();
    let mut m = FieldMatrix::zero(p, q, g);
    for i in 0..p {
        for j in 0..q {
            let mut poly = MultiPoly::from_int(g, rng.range_i64(-3, 3));
            for v in 0..g {
                let c = rng.range_i64(-3, 3);
                if c != 0 {
                    poly = poly.add(&MultiPoly::var(g, v).mul_scalar(
                        &num_rational::BigRational::from_integer(num_bigint::BigInt::from(c)),
                    ));
                }
            }
            m.set(i, j, FieldElement::from_poly(poly));
        }
    }
    m
}

/// Randomized check of the affine-tail lemmas: build the family for k up to
/// bound + 3, fit the rank profile, and insist the onset stays within the
/// guaranteed bound. An excess would mean a bug, so the offending blocks
/// are dumped in the error.
pub fn lemma_lab(
    kind: FamilyKind,
    t: usize,
    p: usize,
    q: usize,
    trials: usize,
    seed: u64,
    field: Option<DifferenceField>,
) -> Result<LemmaLabReport> {
    assert!(t >= 1 && p >= 1 && q >= 1);
    let field = field.unwrap_or_else(shift_field);
    let bound = kind.onset_bound(t, p, q);
    let kmax = bound + 3;
    let mut onsets = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = SplitMix64::derive(seed, trial as u64);
        let blocks: Vec<FieldMatrix> = (0..t)
            .map(|_| random_block(&mut rng, &field, p, q))
            .collect();
        let fam = BlockFamily::new(field.clone(), blocks);
        let mut values = vec![0usize];
        for k in 1..=kmax {
            let m = match kind {
                FamilyKind::M => build_mk(&fam, k),
                FamilyKind::N => build_nk(&fam, k),
            };
            values.push(rank_exact(&m));
        }
        let fit = fit_tail(&values, bound)?;
        if fit.onset > bound {
            let artifact = fam
                .blocks
                .iter()
                .enumerate()
                .map(|(idx, b)| format!("E{}:\n{}", idx + 1, b.display_grid(field.generators())))
                .collect::<Vec<_>>()
                .join("\n");
            return Err(Error::OnsetExceedsBound {
                onset: fit.onset,
                bound,
                artifact: format!("trial {trial}, ranks {values:?}\n{artifact}"),
            });
        }
        onsets.push(fit.onset);
    }
    let mut hist: Vec<(usize, usize)> = Vec::new();
    for &o in &onsets {
        match hist.iter_mut().find(|(v, _)| *v == o) {
            Some((_, c)) => *c += 1,
            None => hist.push((o, 1)),
        }
    }
    hist.sort_unstable();
    Ok(LemmaLabReport {
        kind,
        t,
        p,
        q,
        trials,
        seed,
        bound,
        kmax,
        onsets,
        onset_histogram: hist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_equation, parse_field_element};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn swap_system() -> SystemSpec {
        let vn = names(&["y1", "y2"]);
        let eqs = ["y1@2 - y1", "y1@1 - y2", "y1*y2 - 1"]
            .iter()
            .map(|s| parse_equation(s, &vn, &[]).unwrap())
            .collect();
        SystemSpec::new(DifferenceField::rationals(), vn, eqs).unwrap()
    }

    fn swap_specialization() -> Specialization {
        let gn = names(&["t"]);
        let target = DifferenceField::new(
            vec!["t".into()],
            Some(vec![parse_field_element("1/t", &gn).unwrap()]),
        )
        .unwrap();
        Specialization {
            target,
            assign: vec![
                parse_field_element("t", &gn).unwrap(),
                parse_field_element("1/t", &gn).unwrap(),
            ],
        }
    }

    #[test]
    fn fit_tail_examples() {
        // derived from the swap system's psi values
        let fit = fit_tail(&[4, 3, 3, 3], 1).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.onset), (0, 3, 1));
        // all-equal sequence fits from 0
        let fit = fit_tail(&[5, 5, 5, 5], 1).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.onset), (0, 5, 0));
        // mu values with mu_1 off the line and mu_2 on it: minimal on-line
        // start is 2
        let fit = fit_tail(&[0, 2, 4, 5, 6, 7], 4).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.onset), (1, 2, 2));
        // a genuinely non-affine tail is rejected
        assert!(matches!(
            fit_tail(&[0, 1, 3, 4, 6], 2),
            Err(Error::TailNotLinear { .. })
        ));
    }

    #[test]
    fn psi_profile_of_swap_system() {
        let sys = swap_system();
        let sp = swap_specialization();
        let psi = psi_profile(&sys, &sp, None, RankEngine::Exact).unwrap();
        assert_eq!(psi.profile.values[0], 4); // e*n
        assert!(psi.profile.values[1..].iter().all(|&v| v == 3));
        assert_eq!((psi.d, psi.s, psi.rho), (0, 3, 1));
        assert_eq!(psi.bound, 6);
        assert_eq!(&psi.ranks_jk[..3], &[3, 5, 7]);
    }

    #[test]
    fn full_report_of_swap_system() {
        let sys = swap_system();
        let sp = swap_specialization();
        let rep = difference_index(&sys, &sp, AnalyzeOptions::default()).unwrap();
        assert_eq!((rep.n, rep.r, rep.e), (2, 3, 2));
        assert_eq!((rep.d, rep.s, rep.rho), (0, 3, 1));
        assert_eq!(rep.omega, 2);
        assert_eq!(rep.a, 2);
        assert_eq!(&rep.mu[..5], &[0, 2, 4, 5, 6]);
        assert_eq!(rep.ord_p, 1);
        assert_eq!(rep.regularity_bound, 1);
        assert_eq!(rep.sigma_dim, 0);
        // rank growth vs dimension polynomial warning carries both laws
        assert!(rep.warnings[0].contains("2k+1"));
        assert!(rep.warnings[0].contains("psi(k) = 3"));
    }

    #[test]
    fn i_invariance_on_swap_system() {
        let sys = swap_system();
        let sp = swap_specialization();
        let rep = check_i_invariance(&sys, &sp, 5, &[1, 2, 3], RankEngine::Exact).unwrap();
        assert!(rep.consistent());
        assert!(rep.tables.iter().all(|t| t[0] == 0));
    }

    #[test]
    fn membership_bound_of_swap_system() {
        let sys = swap_system();
        let sp = swap_specialization();
        let rep = difference_index(&sys, &sp, AnalyzeOptions::default()).unwrap();
        let mb = membership_bounds(&sys, &rep, 1, Some(2), None);
        assert!(mb.hypothesis_met);
        let primary = mb.primary.unwrap();
        assert_eq!(primary.n_order, 1);
        assert_eq!(primary.degree_exponent, 8);
        assert_eq!(primary.degree_bound_symbolic, "(2*2)^(2^8)");
        let exact = primary.degree_bound_exact.unwrap();
        assert_eq!(exact.len(), 155);
        assert_eq!(exact, BigUint::from(4u32).pow(256).to_string());
        // fallback: e(min(r,n)+2) + max(-1, ord_f - e) = 2*4 - 1 = 7
        assert_eq!(mb.fallback.n_order, 7);
        // ord_f = e gives N = omega
        let mb = membership_bounds(&sys, &rep, 2, Some(2), None);
        assert_eq!(mb.primary.unwrap().n_order, rep.omega);
    }

    #[test]
    fn lemma_lab_degenerate_family() {
        // t = 1: block diagonal, rank(M_k) = k rank(E1), onset 0
        let rep = lemma_lab(FamilyKind::M, 1, 2, 2, 5, 11, None).unwrap();
        assert_eq!(rep.bound, 0);
        assert!(rep.onsets.iter().all(|&o| o == 0));
        let rep = lemma_lab(FamilyKind::N, 1, 2, 2, 5, 11, None).unwrap();
        assert!(rep.onsets.iter().all(|&o| o == 0));
    }

    #[test]
    fn lemma_lab_small_twisted_family() {
        let rep = lemma_lab(FamilyKind::M, 2, 2, 2, 100, 42, None).unwrap();
        assert_eq!(rep.bound, 3);
        assert!(rep.onsets.iter().all(|&o| o <= 3));
        let rep = lemma_lab(FamilyKind::N, 2, 2, 2, 100, 42, None).unwrap();
        assert_eq!(rep.bound, 4);
        assert!(rep.onsets.iter().all(|&o| o <= 4));
    }

    #[test]
    fn zero_blocks_have_zero_profile() {
        let field = shift_field();
        let blocks = vec![FieldMatrix::zero(2, 2, 1), FieldMatrix::zero(2, 2, 1)];
        let fam = BlockFamily::new(field, blocks);
        for k in 1..=4 {
            assert_eq!(rank_exact(&build_mk(&fam, k)), 0);
            assert_eq!(rank_exact(&build_nk(&fam, k)), 0);
        }
    }
}
