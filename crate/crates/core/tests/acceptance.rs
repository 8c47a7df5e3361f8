//! Acceptance suite. One test per criterion; each prints a PASS line with
//! the checked values (run with `--nocapture` to see them).
//!
//! 1. Golden reproduction of the bundled worked example.
//! 2. psi cross-validation: rank engine against the Groebner trdeg oracle.
//! 3. Elimination-ideal stabilization at the difference index.
//! 4. Onset bounds of the twisted block families, randomized.
//! 5. Transform invariance of exact ranks.
//! 6. Structural invariants across the bundled and constructed systems.
//! 7. Membership bound formula.
//! 8. Probabilistic/exact rank agreement.

use dindex_core::dfield::{DifferenceField, FieldElement};
use dindex_core::index::{
    check_i_invariance, difference_index, lemma_lab, membership_bounds, psi_profile,
    AnalyzeOptions, FamilyKind, IndexReport, RankEngine,
};
use dindex_core::jacobi::{build_jk, build_jki, FieldMatrix};
use dindex_core::oracle::{
    eliminate, normal_form, stabilization_scan, trdeg_oracle, truncated_ideal, OracleLimits,
    TermOrder,
};
use dindex_core::poly::MultiPoly;
use dindex_core::rank::{rank_exact, rank_probabilistic, Evaluator, Specialization};
use dindex_core::rng::SplitMix64;
use dindex_core::sigma::SystemSpec;
use dindex_core::sysfile::{SystemFile, EXAMPLE_SYSTEM_JSON};

fn golden() -> (SystemSpec, Specialization) {
    SystemFile::from_json(EXAMPLE_SYSTEM_JSON)
        .unwrap()
        .load()
        .unwrap()
}

fn golden_report() -> IndexReport {
    let (sys, sp) = golden();
    difference_index(&sys, &sp, AnalyzeOptions::default()).unwrap()
}

fn from_json(text: &str) -> (SystemSpec, Specialization) {
    SystemFile::from_json(text).unwrap().load().unwrap()
}

/// sigma(y) = y as a fixed point: one linear shift equation over Q.
const SYS_FIXED_POINT: &str = r#"{
  "variables": ["y1"],
  "equations": ["y1@1 - y1"],
  "specialization": { "assign": { "y1": "1" } }
}"#;

/// Two-step linear recurrence over Q, solved in Q(a,b) with the shift
/// sigma(a) = b, sigma(b) = a + b.
const SYS_TWO_STEP: &str = r#"{
  "variables": ["y1"],
  "equations": ["y1@2 - y1@1 - y1"],
  "specialization": {
    "target_field": {
      "generators": ["a", "b"],
      "sigma_images": { "a": "b", "b": "a + b" }
    },
    "assign": { "y1": "a" }
  }
}"#;

/// Product recurrence with positive sigma-dimension: y1@1 = y1*y2.
const SYS_PRODUCT: &str = r#"{
  "variables": ["y1", "y2"],
  "equations": ["y1@1 - y1*y2"],
  "specialization": {
    "target_field": {
      "generators": ["u", "t"],
      "sigma_images": { "u": "u*t", "t": "t" }
    },
    "assign": { "y1": "u", "y2": "t" }
  }
}"#;

/// Coefficient field Q(t) with the shift; the oracle does not apply here.
const SYS_Q_SHIFT: &str = r#"{
  "coefficient_field": {
    "generators": ["t"],
    "sigma_images": { "t": "t + 1" }
  },
  "variables": ["y1"],
  "equations": ["y1@1 - t*y1"],
  "specialization": {
    "target_field": {
      "generators": ["t", "u"],
      "sigma_images": { "t": "t + 1", "u": "t*u" }
    },
    "assign": { "y1": "u" }
  }
}"#;

/// Redundant chain with r > n and positive regularity degree.
const SYS_CHAIN: &str = r#"{
  "variables": ["y1"],
  "equations": ["y1@2 - y1@1", "y1@1 - y1"],
  "specialization": { "assign": { "y1": "1" } }
}"#;

#[test]
fn criterion_1_golden_reproduction() {
    let (sys, sp) = golden();
    let mut ev = Evaluator::new(&sys, &sp).unwrap();
    for (k, want) in (1..=3).zip([3, 5, 7]) {
        let m = ev.eval_matrix(&build_jk(&sys, k));
        assert_eq!(rank_exact(&m), want, "rank(J_{k})");
    }
    for (k, want) in (1..=4).zip([1, 2, 4, 6]) {
        let m = ev.eval_matrix(&build_jki(&sys, k, 1).unwrap());
        assert_eq!(rank_exact(&m), want, "rank(J_({k},1))");
    }
    let rep = golden_report();
    assert_eq!(&rep.mu[1..5], &[2, 4, 5, 6]);
    assert_eq!(rep.rho, 1);
    assert_eq!(rep.omega, 2);
    assert_eq!(rep.a, 2);
    assert_eq!(
        rep.d as i64 + rep.r as i64 - rep.n as i64,
        1,
        "mu tail slope"
    );
    println!(
        "ACCEPTANCE 1 PASS: golden values rank(J_1..3)=3,5,7 rank(J_(1..4,1))=1,2,4,6 \
         mu=2,4,5,6 rho=1 omega=2 a=2 slope=1"
    );
}

#[test]
fn criterion_2_psi_cross_validation() {
    let (sys, sp) = golden();
    let psi = psi_profile(&sys, &sp, Some(6), RankEngine::Exact).unwrap();
    for k in 1..=6 {
        assert_eq!(psi.profile.values[k], 3, "psi({k}) from the rank engine");
    }
    let limits = OracleLimits::default();
    for k in 1..=3 {
        let t = truncated_ideal(&sys, k).unwrap();
        assert_eq!(trdeg_oracle(&t, &limits).unwrap(), 3, "oracle trdeg at {k}");
    }
    let rep = golden_report();
    let warning = rep
        .warnings
        .iter()
        .find(|w| w.contains("2k+1") && w.contains("psi(k) = 3"))
        .expect("report must warn about rank growth vs dimension polynomial");
    println!("ACCEPTANCE 2 PASS: psi(k)=3 for k<=6, oracle trdeg=3 for k<=3; warning: {warning}");
}

#[test]
fn criterion_3_stabilization_scan() {
    let (sys, _) = golden();
    let limits = OracleLimits::default();
    let h = stabilization_scan(&sys, 1, 6, &limits).unwrap();
    assert_eq!(h, 2, "stabilization level equals the difference index");
    let bases: Vec<_> = (1..=4)
        .map(|k| eliminate(&truncated_ideal(&sys, k).unwrap(), 1, &limits).unwrap())
        .collect();
    // reduced bases are canonical: equality of bases is equality of ideals
    assert_ne!(bases[0], bases[1], "level 1 is strictly smaller");
    for g in &bases[0] {
        assert!(
            normal_form(g, &bases[1], TermOrder::DegRevLex).is_zero(),
            "level-1 ideal must embed in level 2"
        );
    }
    assert_eq!(bases[1], bases[2]);
    assert_eq!(bases[2], bases[3]);
    println!("ACCEPTANCE 3 PASS: scan h=2=omega with level-1 ideal strictly inside levels 2..4");
}

#[test]
fn criterion_4_lemma_onset_bounds() {
    let mut failures = 0;
    for (kind, label, stream) in [
        (FamilyKind::M, "M", 0xACCE0u64),
        (FamilyKind::N, "N", 0xACCE1),
    ] {
        let mut worst = 0usize;
        for instance in 0..100u64 {
            let mut rng = SplitMix64::derive(stream, instance);
            let t = 1 + rng.below(3) as usize;
            let p = 1 + rng.below(4) as usize;
            let q = 1 + rng.below(4) as usize;
            match lemma_lab(kind, t, p, q, 1, rng.next_u64(), None) {
                Ok(rep) => worst = worst.max(rep.onsets[0]),
                Err(e) => {
                    eprintln!("instance {instance} ({label}, t={t}, p={p}, q={q}): {e}");
                    failures += 1;
                }
            }
        }
        println!("ACCEPTANCE 4 ({label}): 100 instances, worst onset {worst}, failures {failures}");
    }
    assert_eq!(failures, 0);
    println!("ACCEPTANCE 4 PASS: all 200 random family instances within their onset bounds");
}

#[test]
fn criterion_5_transform_rank_invariance() {
    let identity = DifferenceField::new(vec!["t".into()], None).unwrap();
    let shift = {
        let t = FieldElement::generator(1, 0);
        DifferenceField::new(vec!["t".into()], Some(vec![t.add(&FieldElement::one(1))])).unwrap()
    };
    let inversion = {
        let t = FieldElement::generator(1, 0);
        DifferenceField::new(vec!["t".into()], Some(vec![t.inv().unwrap()])).unwrap()
    };
    let fields = [identity, shift, inversion];
    let mut checked = 0;
    for case in 0..200u64 {
        let mut rng = SplitMix64::derive(0x51AC, case);
        let field = &fields[(case % 3) as usize];
        let rows = 1 + rng.below(4) as usize;
        let cols = 1 + rng.below(4) as usize;
        let mut m = FieldMatrix::zero(rows, cols, 1);
        for i in 0..rows {
            for j in 0..cols {
                let mut p = MultiPoly::from_int(1, rng.range_i64(-3, 3));
                if rng.below(2) == 1 {
                    p = p.add(&MultiPoly::var(1, 0).mul_scalar(
                        &num_rational::BigRational::from_integer(num_bigint::BigInt::from(
                            rng.range_i64(-3, 3),
                        )),
                    ));
                }
                let den = match rng.below(3) {
                    0 => MultiPoly::var(1, 0),
                    _ => MultiPoly::one(1),
                };
                m.set(i, j, FieldElement::new(p, den).unwrap());
            }
        }
        let shifted = m.transform(1, field);
        assert_eq!(
            rank_exact(&m),
            rank_exact(&shifted),
            "case {case} over sigma #{}",
            case % 3
        );
        checked += 1;
    }
    assert_eq!(checked, 200);
    println!("ACCEPTANCE 5 PASS: rank(sigma(M)) = rank(M) on 200 random matrices, 3 sigmas");
}

#[test]
fn criterion_6_invariant_suite() {
    // (file, expected (d, s, rho, omega, a, ord))
    let systems: [(&str, &str, (usize, i64, usize, usize, i64, i64)); 6] = [
        ("golden", EXAMPLE_SYSTEM_JSON, (0, 3, 1, 2, 2, 1)),
        ("fixed-point", SYS_FIXED_POINT, (0, 1, 0, 0, 0, 1)),
        ("two-step", SYS_TWO_STEP, (0, 2, 0, 0, 0, 2)),
        ("product", SYS_PRODUCT, (1, 2, 0, 0, 0, 1)),
        ("q-shift", SYS_Q_SHIFT, (0, 1, 0, 0, 0, 1)),
        ("chain", SYS_CHAIN, (0, 1, 1, 0, 0, 1)),
    ];
    for (name, text, expect) in systems {
        let (sys, sp) = from_json(text);
        // difference_index internally enforces: mu monotone, psi step
        // bounds, a >= 0, mu slope, omega bound, tail coherence
        let rep = difference_index(&sys, &sp, AnalyzeOptions::default()).unwrap();
        assert_eq!(
            (rep.d, rep.s, rep.rho, rep.omega, rep.a, rep.ord_p),
            expect,
            "{name}"
        );
        assert!(rep.a >= 0, "{name}: a");
        assert!(
            rep.mu.windows(2).all(|w| w[0] <= w[1]),
            "{name}: mu monotone"
        );
        assert!(
            rep.omega <= (sys.e * (sys.r().min(sys.n()) + 2)).min(rep.rho + sys.e),
            "{name}: omega bound"
        );
        let e = sys.e;
        let i_list: Vec<usize> = vec![e - 1, e, e + 1];
        let inv = check_i_invariance(&sys, &sp, rep.rho + e, &i_list, RankEngine::Exact).unwrap();
        assert!(inv.consistent(), "{name}: mu tables differ across i");
    }
    println!("ACCEPTANCE 6 PASS: invariants and i-invariance hold on all 6 systems");
}

#[test]
fn criterion_7_membership_bound_formula() {
    let (sys, _) = golden();
    let rep = golden_report();
    let mb = membership_bounds(&sys, &rep, 1, Some(2), None);
    assert!(mb.hypothesis_met);
    let primary = mb.primary.as_ref().unwrap();
    assert_eq!(primary.n_order, 1, "N = omega + max(-1, ord_f - e)");
    assert_eq!(primary.degree_exponent, 8);
    let exact = primary.degree_bound_exact.as_ref().unwrap();
    let four_pow = num_bigint::BigUint::from(4u32).pow(256).to_string();
    assert_eq!(exact, &four_pow, "degree bound is exactly 4^256");
    assert_eq!(exact.len(), 155);
    assert_eq!(mb.fallback.n_order, 7, "fallback N = e(min(r,n)+2) - 1");
    println!(
        "ACCEPTANCE 7 PASS: N=1, bound 4^256 ({} digits), fallback N=7",
        exact.len()
    );
}

#[test]
fn criterion_8_probabilistic_exact_agreement() {
    let (sys, sp) = golden();
    let mut ev = Evaluator::new(&sys, &sp).unwrap();
    for k in 1..=3 {
        let m = ev.eval_matrix(&build_jk(&sys, k));
        assert_eq!(
            rank_probabilistic(&m, &sp.target, 1234 + k as u64, 3).unwrap(),
            rank_exact(&m),
            "J_{k}"
        );
    }
    for k in 1..=4 {
        let m = ev.eval_matrix(&build_jki(&sys, k, 1).unwrap());
        assert_eq!(
            rank_probabilistic(&m, &sp.target, 99 + k as u64, 3).unwrap(),
            rank_exact(&m),
            "J_({k},1)"
        );
    }
    let shift = {
        let t = FieldElement::generator(1, 0);
        DifferenceField::new(vec!["t".into()], Some(vec![t.add(&FieldElement::one(1))])).unwrap()
    };
    let mut agree = 0;
    for case in 0..500u64 {
        let mut rng = SplitMix64::derive(0xA9EE, case);
        let rows = 1 + rng.below(5) as usize;
        let cols = 1 + rng.below(5) as usize;
        let mut m = FieldMatrix::zero(rows, cols, 1);
        for i in 0..rows {
            for j in 0..cols {
                let mut p = MultiPoly::from_int(1, rng.range_i64(-3, 3));
                for e in 1..=2u32 {
                    if rng.below(2) == 1 {
                        p = p.add(&MultiPoly::var(1, 0).pow(e).mul_scalar(
                            &num_rational::BigRational::from_integer(num_bigint::BigInt::from(
                                rng.range_i64(-3, 3),
                            )),
                        ));
                    }
                }
                m.set(i, j, FieldElement::from_poly(p));
            }
        }
        let exact = rank_exact(&m);
        let prob = rank_probabilistic(&m, &shift, rng.next_u64(), 3).unwrap();
        assert!(
            prob <= exact,
            "case {case}: probabilistic rank overestimates"
        );
        if prob == exact {
            agree += 1;
        }
    }
    assert!(
        agree >= 495,
        "agreement {agree}/500 below the 99% requirement"
    );
    println!("ACCEPTANCE 8 PASS: engines agree on all golden matrices and {agree}/500 random ones");
}
