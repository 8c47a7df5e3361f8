//! Difference fields: Q and multivariate rational-function fields Q(t1..tm)
//! with a declared injective endomorphism sigma.
//!
//! `FieldElement` is a reduced fraction of `MultiPoly`s in the field's
//! generators; all operations return canonical forms (gcd cancelled, monic
//! denominator). `DifferenceField` validates that the declared sigma images
//! actually define a field endomorphism in characteristic 0: nonconstant
//! images, and for several generators a full-rank Jacobian of the image
//! tuple.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::bareiss_rank;
use crate::poly::MultiPoly;
use crate::rng::SplitMix64;

/// Reduced fraction of polynomials in the field generators.
///
/// Invariants: `den` is nonzero and monic in the storage order,
/// `gcd(num, den) = 1`, and the element is zero iff `num` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    num: MultiPoly,
    den: MultiPoly,
}

impl FieldElement {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<FieldElement> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MultiPoly, den: MultiPoly) -> FieldElement {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return FieldElement {
                den: MultiPoly::one(num.nvars()),
                num,
            };
        }
        let g = MultiPoly::gcd(&num, &den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let lc = den.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.mul_scalar(&inv);
            den = den.mul_scalar(&inv);
        }
        FieldElement { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> FieldElement {
        let nvars = p.nvars();
        FieldElement {
            num: p,
            den: MultiPoly::one(nvars),
        }
    }

    pub fn zero(nvars: usize) -> FieldElement {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> FieldElement {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRational) -> FieldElement {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> FieldElement {
        Self::from_poly(MultiPoly::from_int(nvars, c))
    }

    pub fn generator(nvars: usize, idx: usize) -> FieldElement {
        Self::from_poly(MultiPoly::var(nvars, idx))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        FieldElement {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// d/d(generator `var`), quotient rule.
    pub fn derivative(&self, var: usize) -> FieldElement {
        let num = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        let den = self.den.mul(&self.den);
        Self::reduced(num, den)
    }

    /// Evaluate at a rational point; `None` when the denominator vanishes.
    pub fn eval_rational(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(point) / d)
    }

    /// Re-index generators (embedding into a larger field).
    pub fn map_vars(&self, mapping: &[usize], new_nvars: usize) -> FieldElement {
        FieldElement {
            num: self.num.map_vars(mapping, new_nvars),
            den: self.den.map_vars(mapping, new_nvars),
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.display(names);
        }
        let n = self.num.display(names);
        let d = self.den.display(names);
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        // parenthesize any denominator that is not a single positive atom
        let d_atomic = self.den.num_terms() == 1 && {
            let (m, c) = self.den.leading().unwrap();
            (m.is_constant() && c.is_positive())
                || (c.is_one()
                    && m.0.iter().filter(|&&e| e > 0).count() == 1
                    && m.total_degree() == 1)
        };
        let d = if d_atomic { d } else { format!("({d})") };
        format!("{n}/{d}")
    }
}

/// A computable difference field: Q (no generators) or Q(t1..tm) with
/// sigma given by rational images of the generators. `sigma_images = None`
/// means sigma is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceField {
    generators: Vec<String>,
    sigma_images: Option<Vec<FieldElement>>,
}

impl DifferenceField {
    /// The rationals with sigma = id.
    pub fn rationals() -> DifferenceField {
        DifferenceField {
            generators: Vec::new(),
            sigma_images: None,
        }
    }

    /// Validated constructor. `images` pairs each generator with its sigma
    /// image; `None` declares sigma = id.
    ///
    /// Endomorphism validity is checked by: every image nonconstant, and for
    /// more than one generator a full-rank Jacobian of the image tuple
    /// (sufficient in characteristic 0). Injectivity then holds because a
    /// field endomorphism is injective.
    pub fn new(
        generators: Vec<String>,
        images: Option<Vec<FieldElement>>,
    ) -> Result<DifferenceField> {
        let m = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidSystem(format!("duplicate generator `{g}`")));
            }
        }
        if let Some(images) = &images {
            if images.len() != m {
                return Err(Error::InvalidSystem(
                    "sigma image count differs from generator count".into(),
                ));
            }
            for (g, img) in generators.iter().zip(images) {
                if img.is_constant() {
                    return Err(Error::ConstantSigmaImage(g.clone()));
                }
            }
            if m > 1 {
                let jac: Vec<Vec<FieldElement>> = images
                    .iter()
                    .map(|img| (0..m).map(|j| img.derivative(j)).collect())
                    .collect();
                let cleared = clear_row_denominators(&jac);
                let rank = bareiss_rank(cleared);
                if rank < m {
                    return Err(Error::DependentSigmaImages { rank, expected: m });
                }
            }
        }
        Ok(DifferenceField {
            generators,
            sigma_images: images,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn sigma_is_identity(&self) -> bool {
        self.sigma_images.is_none()
    }

    pub fn sigma_image(&self, idx: usize) -> FieldElement {
        match &self.sigma_images {
            None => FieldElement::generator(self.nvars(), idx),
            Some(images) => images[idx].clone(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.nvars())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.nvars())
    }

    /// sigma^m applied to a field element, by m-fold substitution of the
    /// generator images.
    pub fn sigma_apply(&self, x: &FieldElement, m: usize) -> FieldElement {
        if self.sigma_is_identity() || m == 0 {
            return x.clone();
        }
        let images: Vec<FieldElement> = (0..self.nvars()).map(|i| self.sigma_image(i)).collect();
        let mut out = x.clone();
        for _ in 0..m {
            out = subst_field(&out, &images);
        }
        out
    }

    pub fn display_element(&self, x: &FieldElement) -> String {
        x.display(&self.generators)
    }

    /// Deterministic-under-seed assignment of the generators to positive
    /// rationals with numerator and denominator in `[1, bound]`.
    pub fn random_rational_point(&self, seed: u64, bound: u64) -> Vec<BigRational> {
        assert!(bound >= 2, "bound must be at least 2");
        let mut rng = SplitMix64::new(seed);
        (0..self.nvars())
            .map(|_| {
                let n = 1 + rng.below(bound);
                let d = 1 + rng.below(bound);
                BigRational::new(BigInt::from(n), BigInt::from(d))
            })
            .collect()
    }
}

/// Substitute field elements for the variables of a polynomial.
pub fn subst_poly(p: &MultiPoly, values: &[FieldElement]) -> FieldElement {
    let nvars = values.first().map(FieldElement::nvars).unwrap_or(0);
    let mut acc = FieldElement::zero(nvars);
    for (m, c) in p.terms() {
        let mut t = FieldElement::constant(nvars, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&values[i].pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn subst_field(x: &FieldElement, values: &[FieldElement]) -> FieldElement {
    let num = subst_poly(x.numerator(), values);
    let den = subst_poly(x.denominator(), values);
    // sigma is injective, so a nonzero denominator stays nonzero
    num.div(&den)
        .expect("sigma image of a nonzero denominator vanished")
}

/// Multiply each row by the lcm of its entry denominators, yielding a
/// polynomial matrix with the same rank.
pub fn clear_row_denominators(m: &[Vec<FieldElement>]) -> Vec<Vec<MultiPoly>> {
    m.iter()
        .map(|row| {
            let nvars = row.first().map(FieldElement::nvars).unwrap_or(0);
            let mut lcm = MultiPoly::one(nvars);
            for e in row {
                let g = MultiPoly::gcd(&lcm, e.denominator());
                lcm = lcm.mul(&e.denominator().div_exact(&g));
            }
            row.iter()
                .map(|e| e.numerator().mul(&lcm.div_exact(e.denominator())))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_of_t(image: &str) -> DifferenceField {
        // sigma(t) given by a tiny hand-built image to avoid the parser here
        let t = FieldElement::generator(1, 0);
        let img = match image {
            "1/t" => t.inv().unwrap(),
            "t+1" => t.add(&FieldElement::one(1)),
            _ => panic!(),
        };
        DifferenceField::new(vec!["t".into()], Some(vec![img])).unwrap()
    }

    #[test]
    fn rationals_identity() {
        let f = DifferenceField::rationals();
        assert_eq!(f.nvars(), 0);
        let x = FieldElement::from_int(0, 7);
        assert_eq!(f.sigma_apply(&x, 5), x);
    }

    #[test]
    fn constant_image_rejected() {
        let img = FieldElement::from_int(1, 5);
        let err = DifferenceField::new(vec!["t".into()], Some(vec![img])).unwrap_err();
        assert!(matches!(err, Error::ConstantSigmaImage(_)));
    }

    #[test]
    fn dependent_images_rejected() {
        // sigma(u) = t, sigma(t) = t: Jacobian [[0,1],[0,1]] is singular
        let t = FieldElement::generator(2, 1);
        let err = DifferenceField::new(
            vec!["u".into(), "t".into()],
            Some(vec![t.clone(), t.clone()]),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::DependentSigmaImages {
                rank: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn two_generator_shift_valid() {
        // sigma(u) = t, sigma(t) = u + t: Jacobian [[0,1],[1,1]]
        let u = FieldElement::generator(2, 0);
        let t = FieldElement::generator(2, 1);
        let f = DifferenceField::new(
            vec!["u".into(), "t".into()],
            Some(vec![t.clone(), u.add(&t)]),
        );
        assert!(f.is_ok());
    }

    #[test]
    fn sigma_involution() {
        // sigma(t) = 1/t; sigma^2 = id
        let f = q_of_t("1/t");
        let t = FieldElement::generator(1, 0);
        assert_eq!(f.sigma_apply(&t, 1), t.inv().unwrap());
        assert_eq!(f.sigma_apply(&t, 2), t);
    }

    #[test]
    fn sigma_shift_on_square() {
        // sigma(t) = t+1 applied to t^2 gives (t+1)^2
        let f = q_of_t("t+1");
        let t = FieldElement::generator(1, 0);
        let expect = t.add(&FieldElement::one(1)).pow(2);
        assert_eq!(f.sigma_apply(&t.pow(2), 1), expect);
    }

    #[test]
    fn field_arithmetic_cancels() {
        // (t/(t+1)) + (1/(t+1)) = 1
        let t = FieldElement::generator(1, 0);
        let tp1 = t.add(&FieldElement::one(1));
        let lhs = t
            .div(&tp1)
            .unwrap()
            .add(&FieldElement::one(1).div(&tp1).unwrap());
        assert!(lhs.is_one());
        // (1/t) * t = 1
        assert!(t.inv().unwrap().mul(&t).is_one());
        // inv(0) fails
        assert!(matches!(
            FieldElement::zero(1).inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn random_point_deterministic() {
        let f = q_of_t("1/t");
        let p1 = f.random_rational_point(99, 10);
        let p2 = f.random_rational_point(99, 10);
        assert_eq!(p1, p2);
        assert!(!p1[0].is_zero());
        assert!(DifferenceField::rationals()
            .random_rational_point(1, 5)
            .is_empty());
    }
}
