//! Randomized algebraic invariants: sigma is a ring homomorphism, the
//! transform commutes with partial derivatives, canonical forms are stable,
//! printing round-trips through the parser, and ranks behave metamorphically.

use proptest::prelude::*;

use dindex_core::dfield::{DifferenceField, FieldElement};
use dindex_core::jacobi::FieldMatrix;
use dindex_core::oracle::{groebner_basis, normal_form, TermOrder};
use dindex_core::parse::{parse_equation, parse_field_element};
use dindex_core::poly::{Mono, MultiPoly};
use dindex_core::rank::{rank_exact, rank_probabilistic};
use dindex_core::sigma::{SigmaPolynomial, VarRef};

fn rat(n: i64, d: u32) -> num_rational::BigRational {
    num_rational::BigRational::new(num_bigint::BigInt::from(n), num_bigint::BigInt::from(d))
}

fn shift_field() -> DifferenceField {
    let t = FieldElement::generator(1, 0);
    DifferenceField::new(vec!["t".into()], Some(vec![t.add(&FieldElement::one(1))])).unwrap()
}

fn inversion_field() -> DifferenceField {
    let t = FieldElement::generator(1, 0);
    DifferenceField::new(vec!["t".into()], Some(vec![t.inv().unwrap()])).unwrap()
}

prop_compose! {
    /// Sparse polynomial in t with small coefficients.
    fn arb_poly()(terms in prop::collection::vec((0u32..4, -4i64..5), 0..4)) -> MultiPoly {
        let mut p = MultiPoly::zero(1);
        for (e, c) in terms {
            p = p.add(&MultiPoly::var(1, 0).pow(e).mul_scalar(&rat(c, 1)));
        }
        p
    }
}

prop_compose! {
    fn arb_field_element()(num in arb_poly(), den in arb_poly()) -> FieldElement {
        let den = if den.is_zero() { MultiPoly::one(1) } else { den };
        FieldElement::new(num, den).unwrap()
    }
}

prop_compose! {
    /// Difference polynomial in two variables with orders <= 2 and
    /// polynomial coefficients in t (printable and re-parseable).
    fn arb_sigma_poly()(
        terms in prop::collection::vec(
            ((0usize..2, 0usize..3, 0u32..3), (0usize..2, 0usize..3, 0u32..3), arb_poly()),
            0..4,
        )
    ) -> SigmaPolynomial {
        let mut p = SigmaPolynomial::zero(1);
        for ((v1, o1, e1), (v2, o2, e2), c) in terms {
            if c.is_zero() {
                continue;
            }
            let m1 = SigmaPolynomial::var(VarRef::new(v1, o1), 1).pow(e1);
            let m2 = SigmaPolynomial::var(VarRef::new(v2, o2), 1).pow(e2);
            p = p.add(&m1.mul(&m2).mul_coeff(&FieldElement::from_poly(c)));
        }
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_is_a_ring_homomorphism(x in arb_field_element(), y in arb_field_element()) {
        for field in [shift_field(), inversion_field()] {
            let sx = field.sigma_apply(&x, 1);
            let sy = field.sigma_apply(&y, 1);
            prop_assert_eq!(field.sigma_apply(&x.add(&y), 1), sx.add(&sy));
            prop_assert_eq!(field.sigma_apply(&x.mul(&y), 1), sx.mul(&sy));
            prop_assert!(field.sigma_apply(&field.one(), 1).is_one());
        }
    }

    #[test]
    fn sigma_powers_compose(x in arb_field_element(), m1 in 0usize..3, m2 in 0usize..3) {
        for field in [shift_field(), inversion_field()] {
            let once = field.sigma_apply(&x, m1 + m2);
            let twice = field.sigma_apply(&field.sigma_apply(&x, m1), m2);
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn canonical_form_is_stable(x in arb_field_element()) {
        // x - x vanishes, and rebuilding from the reduced parts is identity
        prop_assert!(x.sub(&x).is_zero());
        let rebuilt = FieldElement::new(x.numerator().clone(), x.denominator().clone()).unwrap();
        prop_assert_eq!(&rebuilt, &x);
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn transform_commutes_with_derivative(p in arb_sigma_poly(), v in 0usize..2, o in 0usize..3) {
        let field = shift_field();
        let vref = VarRef::new(v, o);
        let lhs = p.partial_derivative(vref).transform(1, &field);
        let rhs = p.transform(1, &field).partial_derivative(VarRef::new(v, o + 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transform_is_multiplicative(p in arb_sigma_poly(), q in arb_sigma_poly(), m in 0usize..3) {
        let field = inversion_field();
        prop_assert_eq!(
            p.mul(&q).transform(m, &field),
            p.transform(m, &field).mul(&q.transform(m, &field))
        );
        prop_assert_eq!(
            p.add(&q).transform(m, &field),
            p.transform(m, &field).add(&q.transform(m, &field))
        );
    }

    #[test]
    fn print_parse_round_trip(p in arb_sigma_poly()) {
        let var_names = vec!["y1".to_string(), "y2".to_string()];
        let gen_names = vec!["t".to_string()];
        let text = p.display(&var_names, &gen_names);
        let back = parse_equation(&text, &var_names, &gen_names).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn field_element_print_parse_round_trip(x in arb_field_element()) {
        let gen_names = vec!["t".to_string()];
        let text = x.display(&gen_names);
        let back = parse_field_element(&text, &gen_names).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn rank_is_permutation_and_scaling_invariant(
        rows in prop::collection::vec(prop::collection::vec(arb_poly(), 3), 3),
        scale in arb_poly(),
        swap in (0usize..3, 0usize..3),
    ) {
        let m = FieldMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|p| FieldElement::from_poly(p.clone())).collect())
                .collect(),
        );
        let base = rank_exact(&m);
        // swap two rows
        let mut swapped = rows.clone();
        swapped.swap(swap.0, swap.1);
        let ms = FieldMatrix::from_rows(
            swapped.iter()
                .map(|r| r.iter().map(|p| FieldElement::from_poly(p.clone())).collect())
                .collect(),
        );
        prop_assert_eq!(rank_exact(&ms), base);
        // scale one row by a nonzero element
        let scale = if scale.is_zero() { MultiPoly::one(1) } else { scale };
        let mut scaled_rows = rows.clone();
        scaled_rows[swap.0] = scaled_rows[swap.0]
            .iter()
            .map(|p| p.mul(&scale))
            .collect();
        let msc = FieldMatrix::from_rows(
            scaled_rows.iter()
                .map(|r| r.iter().map(|p| FieldElement::from_poly(p.clone())).collect())
                .collect(),
        );
        prop_assert_eq!(rank_exact(&msc), base);
    }

    #[test]
    fn groebner_bases_pass_the_buchberger_criterion(
        gens in prop::collection::vec(
            prop::collection::vec((prop::collection::vec(0u32..3, 3), -3i64..4), 1..4),
            1..4,
        )
    ) {
        // random small ideals in Q[x0,x1,x2]: every S-polynomial of the
        // reduced basis must reduce to zero, and every input generator
        // must lie in the ideal of the basis
        let gens: Vec<MultiPoly> = gens
            .into_iter()
            .map(|terms| {
                MultiPoly::from_terms(
                    3,
                    terms.into_iter().map(|(exps, c)| (Mono(exps), rat(c, 1))),
                )
            })
            .filter(|p| !p.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let ord = TermOrder::DegRevLex;
        let basis = groebner_basis(&gens, ord);
        for g in &gens {
            prop_assert!(normal_form(g, &basis, ord).is_zero());
        }
        let lead = |p: &MultiPoly| {
            p.terms()
                .max_by(|(m1, _), (m2, _)| ord.cmp(m1, m2))
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap()
        };
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (mi, ci) = lead(&basis[i]);
                let (mj, cj) = lead(&basis[j]);
                let lcm = mi.lcm(&mj);
                let s = basis[i]
                    .mul_mono(&mi.div(&lcm), &ci.recip())
                    .sub(&basis[j].mul_mono(&mj.div(&lcm), &cj.recip()));
                prop_assert!(
                    normal_form(&s, &basis, ord).is_zero(),
                    "S-polynomial of basis elements {i}, {j} does not reduce to zero"
                );
            }
        }
    }

    #[test]
    fn probabilistic_rank_never_exceeds_exact(
        rows in prop::collection::vec(prop::collection::vec(arb_poly(), 3), 3),
        seed in 0u64..1000,
    ) {
        let field = shift_field();
        let m = FieldMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|p| FieldElement::from_poly(p.clone())).collect())
                .collect(),
        );
        let exact = rank_exact(&m);
        let prob = rank_probabilistic(&m, &field, seed, 1).unwrap();
        prop_assert!(prob <= exact);
    }
}
