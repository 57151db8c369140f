use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{same_set, GeneratorSet};
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Canonical monomial: bit `i` set means generator `i` is a factor, with
/// factors ordered by increasing index.
pub type Monomial = u64;

/// Sign of `x · y` after sorting into canonical order, or `None` when the
/// product vanishes because a generator repeats.
pub(crate) fn product_sign(x: Monomial, y: Monomial) -> Option<bool> {
    if x & y != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = y;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (x >> j).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

pub(crate) fn parity(m: Monomial) -> bool {
    m.count_ones() % 2 == 1
}

fn bits(m: Monomial) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        (rest != 0).then(|| {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            j
        })
    })
}

/// Element of the Grassmann algebra with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement<C> {
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> GrassmannElement<C> {
    pub fn zero(gens: &Arc<GeneratorSet>) -> Self {
        Self { gens: gens.clone(), terms: BTreeMap::new() }
    }

    pub fn one(gens: &Arc<GeneratorSet>) -> Self {
        Self::scalar(gens, C::one())
    }

    pub fn scalar(gens: &Arc<GeneratorSet>, c: C) -> Self {
        Self::from_terms(gens, [(0, c)])
    }

    /// Sums the given terms, dropping zero coefficients.
    pub fn from_terms(gens: &Arc<GeneratorSet>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut out = Self::zero(gens);
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out
    }

    pub fn generator(gens: &Arc<GeneratorSet>, label: &str) -> Result<Self> {
        Ok(Self::generator_at(gens, gens.index_of(label)?))
    }

    pub fn generator_at(gens: &Arc<GeneratorSet>, index: usize) -> Self {
        assert!(index < gens.len(), "generator index {index} out of range");
        Self::from_terms(gens, [(1 << index, C::one())])
    }

    /// Ordered product of the named generators, e.g. `["α*", "α"]`.
    pub fn product_of(gens: &Arc<GeneratorSet>, labels: &[&str]) -> Result<Self> {
        labels.iter().try_fold(Self::one(gens), |acc, l| acc.g_mul(&Self::generator(gens, l)?))
    }

    fn accumulate(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Number of monomials with a nonzero coefficient.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scalar_part(&self) -> C {
        self.coefficient(0)
    }

    /// True when no monomial of positive degree survives.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|&m| m == 0)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|&m| !parity(m))
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|&m| parity(m))
    }

    pub fn even_part(&self) -> Self {
        self.filter(|m| !parity(m))
    }

    pub fn odd_part(&self) -> Self {
        self.filter(parity)
    }

    fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        Self {
            gens: self.gens.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(**m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_set(&self.gens, &other.gens) {
            Ok(())
        } else {
            Err(Error::GeneratorMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(&self.gens, self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())))
    }

    /// Product with the Koszul sign of sorting the concatenated monomial.
    pub fn g_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.gens);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                if let Some(negative) = product_sign(*x, *y) {
                    let c = cx.clone() * cy.clone();
                    out.accumulate(x | y, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `exp(x) = Σ_k x^k / k!` for `x` without scalar part; the series ends
    /// because every power beyond the generator count vanishes.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.scalar_part().is_zero() {
            return Err(Error::NotNilpotent { max_order: self.gens.len() });
        }
        let mut sum = Self::one(&self.gens);
        let mut power = sum.clone();
        let mut factorial = C::one();
        for k in 1..=self.gens.len() {
            power = power.g_mul(self)?;
            if power.is_zero() {
                break;
            }
            factorial = factorial * C::integer(k as i64);
            sum = sum.try_add(&power.scale(&(C::one() / factorial.clone())))?;
        }
        Ok(sum)
    }

    /// Antilinear conjugation: reverses factor order, conjugates
    /// coefficients and maps every generator to its partner.
    pub fn g_conjugate(&self) -> Self {
        let mut out = Self::zero(&self.gens);
        for (m, c) in &self.terms {
            let mut image: Vec<usize> = bits(*m).map(|i| self.gens.partner(i)).collect();
            image.reverse();
            let inversions = (0..image.len())
                .flat_map(|i| (i + 1..image.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| image[i] > image[j])
                .count();
            let mask = image.iter().fold(0, |acc, i| acc | (1 << i));
            let c = c.conj();
            out.accumulate(mask, if inversions % 2 == 1 { -c } else { c });
        }
        out
    }

    /// `∫dθ x` for generator `θ`: moves `θ` to the front of each monomial
    /// containing it and strips it; monomials without `θ` integrate to zero.
    pub fn berezin_integrate(&self, var: usize) -> Self {
        let bit = 1 << var;
        let mut out = Self::zero(&self.gens);
        for (m, c) in &self.terms {
            if m & bit != 0 {
                let before = (m & (bit - 1)).count_ones();
                out.accumulate(m & !bit, if before % 2 == 1 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn berezin_integrate_label(&self, label: &str) -> Result<Self> {
        Ok(self.berezin_integrate(self.gens.index_of(label)?))
    }

    /// `∫dθ₁ dθ₂ … dθₖ x`, the rightmost differential acting first.
    pub fn integrate_measure(&self, measure: &[&str]) -> Result<Self> {
        measure.iter().rev().try_fold(self.clone(), |acc, l| acc.berezin_integrate_label(l))
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max))
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> GrassmannElement<D> {
        GrassmannElement::from_terms(&self.gens, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Canonical text form, e.g. `1 - α·α*`; terms sorted by degree.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ordered: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| (m.count_ones(), m.reverse_bits()));
        let mut out = String::new();
        for (k, (m, c)) in ordered.into_iter().enumerate() {
            let word = bits(*m).map(|i| self.gens.label(i)).collect::<Vec<_>>().join("·");
            let coeff = c.render();
            let (negative, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, coeff),
            };
            let body = match (word.is_empty(), magnitude.as_str()) {
                (true, _) => magnitude,
                (false, "1") => word,
                (false, _) => format!("{magnitude}·{word}"),
            };
            match (k, negative) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for GrassmannElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Operator forms panic on mismatched generator sets; the `try_*` and
// `g_mul` methods report the mismatch instead.

impl<C: Coefficient> Add for &GrassmannElement<C> {
    type Output = GrassmannElement<C>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(rhs).expect("generator set mismatch")
    }
}

impl<C: Coefficient> Sub for &GrassmannElement<C> {
    type Output = GrassmannElement<C>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.try_sub(rhs).expect("generator set mismatch")
    }
}

impl<C: Coefficient> Mul for &GrassmannElement<C> {
    type Output = GrassmannElement<C>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.g_mul(rhs).expect("generator set mismatch")
    }
}

impl<C: Coefficient> Neg for &GrassmannElement<C> {
    type Output = GrassmannElement<C>;
    fn neg(self) -> Self::Output {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_rational::Rational64;

    type Q = Complex<Rational64>;

    fn q(n: i64) -> Q {
        Q::integer(n)
    }

    fn gen(g: &Arc<GeneratorSet>, l: &str) -> GrassmannElement<Q> {
        GrassmannElement::generator(g, l).unwrap()
    }

    #[test]
    fn product_sign_counts_inversions() {
        assert_eq!(product_sign(0b01, 0b10), Some(false));
        assert_eq!(product_sign(0b10, 0b01), Some(true));
        assert_eq!(product_sign(0b110, 0b001), Some(false));
        assert_eq!(product_sign(0b100, 0b011), Some(false));
        assert_eq!(product_sign(0b010, 0b101), Some(true));
        assert_eq!(product_sign(0b11, 0b01), None);
    }

    #[test]
    fn generators_square_to_zero() {
        let g = GeneratorSet::two_mode();
        for l in ["α", "α*", "β", "β*"] {
            assert!((&gen(&g, l) * &gen(&g, l)).is_zero());
        }
    }

    #[test]
    fn reversed_product_picks_up_a_sign() {
        let g = GeneratorSet::one_mode();
        let (a, ac) = (gen(&g, "α"), gen(&g, "α*"));
        assert_eq!(&ac * &a, -&(&a * &ac));
        assert_eq!((&ac * &a).coefficient(0b11), q(-1));
    }

    #[test]
    fn expansion_of_two_binomials() {
        let g = GeneratorSet::one_mode();
        let one = GrassmannElement::<Q>::one(&g);
        let lhs = &(&one + &gen(&g, "α")) * &(&one + &gen(&g, "α*"));
        let rhs = GrassmannElement::from_terms(&g, [(0, q(1)), (0b01, q(1)), (0b10, q(1)), (0b11, q(1))]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_swaps_partners_and_reverses() {
        let g = GeneratorSet::one_mode();
        let x = GrassmannElement::<Q>::product_of(&g, &["α", "α*"]).unwrap();
        // (α α*)* = α** α* = α α*
        assert_eq!(x.g_conjugate(), x);
        let c = GrassmannElement::scalar(&g, Complex::new(Rational64::new(1, 2), Rational64::new(3, 1)));
        assert_eq!(c.g_conjugate().scalar_part(), Complex::new(Rational64::new(1, 2), Rational64::new(-3, 1)));
        assert_eq!(gen(&g, "α").g_conjugate(), gen(&g, "α*"));
    }

    #[test]
    fn berezin_rules() {
        let g = GeneratorSet::one_mode();
        let one = GrassmannElement::<Q>::one(&g);
        assert!(one.berezin_integrate_label("α").unwrap().is_zero());
        assert_eq!(gen(&g, "α").berezin_integrate_label("α").unwrap(), one);
        assert_eq!(gen(&g, "α*").berezin_integrate_label("α*").unwrap(), one);
        let aac = GrassmannElement::product_of(&g, &["α", "α*"]).unwrap();
        assert_eq!(aac.integrate_measure(&["α*", "α"]).unwrap(), one);
        // reversed measure gives the opposite sign
        assert_eq!(aac.integrate_measure(&["α", "α*"]).unwrap(), -&one);
    }

    #[test]
    fn mismatched_sets_rejected() {
        let x = gen(&GeneratorSet::one_mode(), "α");
        let y = gen(&GeneratorSet::two_mode(), "α");
        assert_eq!(x.g_mul(&y), Err(Error::GeneratorMismatch));
        assert_eq!(x.try_add(&y), Err(Error::GeneratorMismatch));
    }

    #[test]
    fn equal_sets_built_separately_are_compatible() {
        let x = gen(&GeneratorSet::two_mode(), "α");
        let y = gen(&GeneratorSet::two_mode(), "β");
        assert!(x.g_mul(&y).is_ok());
    }

    #[test]
    fn rendering() {
        let g = GeneratorSet::one_mode();
        let one = GrassmannElement::<Q>::one(&g);
        let aca = GrassmannElement::product_of(&g, &["α*", "α"]).unwrap();
        assert_eq!((&one - &aca).render(), "1 + α·α*");
        assert_eq!(GrassmannElement::<Q>::zero(&g).render(), "0");
        let half = GrassmannElement::scalar(&g, Complex::new(Rational64::new(-1, 2), Rational64::new(0, 1)));
        assert_eq!((&half * &gen(&g, "α*")).render(), "-1/2·α*");
    }

    #[test]
    fn nilpotent_exponential() {
        let g = GeneratorSet::two_mode();
        let ab = gen(&g, "α").g_mul(&gen(&g, "β")).unwrap();
        let cd = gen(&g, "α*").g_mul(&gen(&g, "β*")).unwrap();
        let x = &ab + &cd;
        // exp(x) = 1 + x + x²/2 with x² = 2·(αβ)(α*β*)
        let want = &(&GrassmannElement::one(&g) + &x) + &ab.g_mul(&cd).unwrap();
        assert_eq!(x.exp_nilpotent().unwrap(), want);
        let e = gen(&g, "α").exp_nilpotent().unwrap();
        assert_eq!(e, &GrassmannElement::one(&g) + &gen(&g, "α"));
        let shifted = &GrassmannElement::one(&g) + &x;
        assert!(matches!(shifted.exp_nilpotent(), Err(Error::NotNilpotent { .. })));
    }
}
