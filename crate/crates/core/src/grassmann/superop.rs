use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::{parity, product_sign, GrassmannElement, Monomial};
use super::{same_set, GeneratorSet};
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// One fermion mode (`{|0⟩, |1⟩}`) or two (`|n_a n_b⟩` at index `2 n_a + n_b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FermionModes {
    One,
    Two,
}

impl FermionModes {
    pub fn count(self) -> usize {
        match self {
            FermionModes::One => 1,
            FermionModes::Two => 2,
        }
    }

    pub fn dim(self) -> usize {
        1 << self.count()
    }

    /// Fermion-number parity of basis state `index`.
    pub fn parity(self, index: usize) -> bool {
        index.count_ones() % 2 == 1
    }
}

/// Small dense row-major matrix over a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix<C> {
    dim: usize,
    data: Vec<C>,
}

impl<C: Coefficient> FockMatrix<C> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C) -> Self {
        Self { dim, data: (0..dim * dim).map(|k| f(k / dim, k % dim)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.data[i * self.dim + j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).fold(C::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).clone() + other.get(i, j).clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entries connecting basis states of equal (`odd = false`) or opposite
    /// (`odd = true`) fermion parity.
    pub fn parity_part(&self, modes: FermionModes, odd: bool) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if (modes.parity(i) != modes.parity(j)) == odd {
                self.get(i, j).clone()
            } else {
                C::zero()
            }
        })
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

/// Operator `Σ_r A_r r` on the fermion Fock space with Grassmann
/// coefficients: each term is the matrix `A_r` followed by the monomial `r`.
///
/// Products carry the Koszul sign `(A x)(B y) = (−1)^{|x||B|} (AB)(xy)`, so
/// every generator anticommutes with `a`, `a†`, `b`, `b†`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator<C> {
    modes: FermionModes,
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<Monomial, FockMatrix<C>>,
}

impl<C: Coefficient> SuperOperator<C> {
    pub fn zero(modes: FermionModes, gens: &Arc<GeneratorSet>) -> Self {
        Self { modes, gens: gens.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(modes: FermionModes, gens: &Arc<GeneratorSet>) -> Self {
        Self::from_matrix(modes, gens, FockMatrix::identity(modes.dim()))
    }

    /// Grassmann-free operator.
    pub fn from_matrix(modes: FermionModes, gens: &Arc<GeneratorSet>, m: FockMatrix<C>) -> Self {
        assert_eq!(m.dim(), modes.dim(), "matrix dimension does not match the mode count");
        let mut out = Self::zero(modes, gens);
        out.accumulate(0, m);
        out
    }

    /// `1 · x`.
    pub fn grassmann(modes: FermionModes, x: &GrassmannElement<C>) -> Self {
        let mut out = Self::zero(modes, x.generators());
        for (m, c) in x.terms() {
            out.accumulate(m, FockMatrix::identity(modes.dim()).scale(c));
        }
        out
    }

    /// Annihilator of `mode` (0 = a, 1 = b). With two modes `b` carries the
    /// Jordan-Wigner string `(−1)^{n_a}`.
    pub fn annihilation(modes: FermionModes, gens: &Arc<GeneratorSet>, mode: usize) -> Self {
        assert!(mode < modes.count(), "mode {mode} out of range");
        let dim = modes.dim();
        let m = FockMatrix::from_fn(dim, |i, j| match (modes, mode) {
            (FermionModes::One, _) => {
                if i == 0 && j == 1 {
                    C::one()
                } else {
                    C::zero()
                }
            }
            (FermionModes::Two, 0) => {
                // |1 n_b⟩ → |0 n_b⟩
                if j >= 2 && i == j - 2 {
                    C::one()
                } else {
                    C::zero()
                }
            }
            (FermionModes::Two, _) => {
                // |n_a 1⟩ → (−1)^{n_a} |n_a 0⟩
                if j % 2 == 1 && i == j - 1 {
                    if j / 2 == 1 {
                        -C::one()
                    } else {
                        C::one()
                    }
                } else {
                    C::zero()
                }
            }
        });
        Self::from_matrix(modes, gens, m)
    }

    pub fn creation(modes: FermionModes, gens: &Arc<GeneratorSet>, mode: usize) -> Self {
        Self::annihilation(modes, gens, mode).super_dagger()
    }

    /// `|ψ⟩ = Σ_n |n⟩ c_n`, stored as the operator `Σ_n |n⟩⟨0| c_n`.
    pub fn ket(modes: FermionModes, amplitudes: &[GrassmannElement<C>]) -> Result<Self> {
        if amplitudes.len() != modes.dim() {
            return Err(Error::DimensionMismatch { expected: modes.dim(), found: amplitudes.len() });
        }
        let gens = amplitudes[0].generators().clone();
        let mut out = Self::zero(modes, &gens);
        for (n, c) in amplitudes.iter().enumerate() {
            if !same_set(&gens, c.generators()) {
                return Err(Error::GeneratorMismatch);
            }
            for (r, coeff) in c.terms() {
                let mut m = FockMatrix::zeros(modes.dim());
                m.set(n, 0, coeff.clone());
                out.accumulate(r, m);
            }
        }
        Ok(out)
    }

    /// Operator with prescribed matrix elements `⟨m|X|n⟩ = s[m][n]`.
    pub fn from_sandwich(modes: FermionModes, gens: &Arc<GeneratorSet>, s: &[Vec<GrassmannElement<C>>]) -> Self {
        let dim = modes.dim();
        let mut out = Self::zero(modes, gens);
        for (m, row) in s.iter().enumerate().take(dim) {
            for (n, x) in row.iter().enumerate().take(dim) {
                for (r, c) in x.terms() {
                    // ⟨m| A r |n⟩ = (−1)^{|r| p(n)} A_mn r
                    let c = if parity(r) && modes.parity(n) { -c.clone() } else { c.clone() };
                    let mut a = FockMatrix::zeros(dim);
                    a.set(m, n, c);
                    out.accumulate(r, a);
                }
            }
        }
        out
    }

    fn accumulate(&mut self, r: Monomial, m: FockMatrix<C>) {
        if m.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&r) {
            Some(old) => old.add(&m),
            None => m,
        };
        if !sum.is_zero() {
            self.terms.insert(r, sum);
        }
    }

    pub fn modes(&self) -> FermionModes {
        self.modes
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &FockMatrix<C>)> {
        self.terms.iter().map(|(r, m)| (*r, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no Grassmann monomial of positive degree appears.
    pub fn is_grassmann_free(&self) -> bool {
        self.terms.keys().all(|&r| r == 0)
    }

    /// The plain matrix, if the operator is Grassmann free.
    pub fn numeric_matrix(&self) -> Option<FockMatrix<C>> {
        self.is_grassmann_free()
            .then(|| self.terms.get(&0).cloned().unwrap_or_else(|| FockMatrix::zeros(self.modes.dim())))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch(self.modes.count(), other.modes.count()));
        }
        if !same_set(&self.gens, &other.gens) {
            return Err(Error::GeneratorMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (r, m) in &other.terms {
            out.accumulate(*r, m.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.modes, &self.gens);
        for (r, m) in &self.terms {
            out.accumulate(*r, m.scale(c));
        }
        out
    }

    /// Koszul-signed product.
    pub fn super_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let split: Vec<(Monomial, FockMatrix<C>, FockMatrix<C>)> = other
            .terms
            .iter()
            .map(|(y, b)| (*y, b.parity_part(self.modes, false), b.parity_part(self.modes, true)))
            .collect();
        let mut out = Self::zero(self.modes, &self.gens);
        for (x, a) in &self.terms {
            for (y, b_even, b_odd) in &split {
                let Some(negative) = product_sign(*x, *y) else { continue };
                // moving x past the odd part of B costs (−1)^{|x|}
                let b = if parity(*x) { b_even.add(&b_odd.neg()) } else { b_even.add(b_odd) };
                let ab = a.mul(&b);
                out.accumulate(x | y, if negative { ab.neg() } else { ab });
            }
        }
        Ok(out)
    }

    /// `(A x)† = x* A† = (−1)^{|x||A|} A† x*`.
    pub fn super_dagger(&self) -> Self {
        let mut out = Self::zero(self.modes, &self.gens);
        for (x, a) in &self.terms {
            let image = GrassmannElement::from_terms(&self.gens, [(*x, C::one())]).g_conjugate();
            let (x_conj, sign) = image.terms().next().map(|(m, c)| (m, c.clone())).expect("nonzero monomial");
            let even = a.parity_part(self.modes, false).adjoint();
            let odd = a.parity_part(self.modes, true).adjoint();
            let dagger = if parity(*x) { even.add(&odd.neg()) } else { even.add(&odd) };
            out.accumulate(x_conj, dagger.scale(&sign));
        }
        out
    }

    /// `⟨m|X|n⟩` as a Grassmann element.
    pub fn matrix_element(&self, m: usize, n: usize) -> GrassmannElement<C> {
        GrassmannElement::from_terms(
            &self.gens,
            self.terms.iter().map(|(r, a)| {
                let c = a.get(m, n).clone();
                (*r, if parity(*r) && self.modes.parity(n) { -c } else { c })
            }),
        )
    }

    /// All matrix elements `⟨m|X|n⟩`.
    pub fn sandwich(&self) -> Vec<Vec<GrassmannElement<C>>> {
        let dim = self.modes.dim();
        (0..dim).map(|m| (0..dim).map(|n| self.matrix_element(m, n)).collect()).collect()
    }

    /// Plain trace over the Fock factor, `Σ_n ⟨n|X|n⟩`.
    pub fn super_trace(&self) -> GrassmannElement<C> {
        (0..self.modes.dim()).fold(GrassmannElement::zero(&self.gens), |acc, n| &acc + &self.matrix_element(n, n))
    }

    /// Trace over mode `b`. Each Grassmann coefficient is carried past the
    /// mode-a ket only, so `Tr_b(X_a Y_b) = X_a Tr(Y_b)` for an even mode-b
    /// factor `Y_b`; in stored form this sums the Fock blocks `(mk, nk)`.
    pub fn partial_trace_b(&self) -> Result<Self> {
        if self.modes != FermionModes::Two {
            return Err(Error::ModeMismatch(2, self.modes.count()));
        }
        let mut out = Self::zero(FermionModes::One, &self.gens);
        for (r, a) in &self.terms {
            let reduced =
                FockMatrix::from_fn(2, |m, n| a.get(2 * m, 2 * n).clone() + a.get(2 * m + 1, 2 * n + 1).clone());
            out.accumulate(*r, reduced);
        }
        Ok(out)
    }

    /// `Σ_{j<k} X^j / j!` where `X^k = 0` with `k ≤ max_order`.
    pub fn super_exp_nilpotent(&self, max_order: usize) -> Result<Self> {
        let mut sum = Self::identity(self.modes, &self.gens);
        let mut power = sum.clone();
        let mut factorial = C::one();
        for j in 1..=max_order {
            power = power.super_mul(self)?;
            if power.is_zero() {
                return Ok(sum);
            }
            factorial = factorial * C::integer(j as i64);
            sum = sum.try_add(&power.scale(&(C::one() / factorial.clone())))?;
        }
        Err(Error::NotNilpotent { max_order })
    }

    /// `∫dθ X`; the odd differential passes the Fock-odd part of each
    /// matrix with a sign before acting on the Grassmann factor.
    pub fn berezin_integrate(&self, label: &str) -> Result<Self> {
        let var = self.gens.index_of(label)?;
        let mut out = Self::zero(self.modes, &self.gens);
        for (x, a) in &self.terms {
            let integrated = GrassmannElement::from_terms(&self.gens, [(*x, C::one())]).berezin_integrate(var);
            for (r, c) in integrated.terms() {
                let passed = a.parity_part(self.modes, false).add(&a.parity_part(self.modes, true).neg());
                out.accumulate(r, passed.scale(c));
            }
        }
        Ok(out)
    }

    /// `∫dθ₁ … dθₖ X`, the rightmost differential acting first.
    pub fn integrate_measure(&self, measure: &[&str]) -> Result<Self> {
        measure.iter().rev().try_fold(self.clone(), |acc, l| acc.berezin_integrate(l))
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.terms.values().map(|m| m.max_magnitude()).fold(0.0, f64::max))
    }

    /// Text form listing `⟨m|X|n⟩` row by row.
    pub fn render(&self) -> String {
        self.sandwich()
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|x| x.render()).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_rational::Rational64;

    type Q = Complex<Rational64>;
    type Op = SuperOperator<Q>;

    fn setup() -> (Arc<GeneratorSet>, Op, Op) {
        let g = GeneratorSet::one_mode();
        let a = Op::annihilation(FermionModes::One, &g, 0);
        let ad = Op::creation(FermionModes::One, &g, 0);
        (g, a, ad)
    }

    fn scalar(g: &Arc<GeneratorSet>, l: &str) -> Op {
        Op::grassmann(FermionModes::One, &GrassmannElement::generator(g, l).unwrap())
    }

    #[test]
    fn car_in_one_mode() {
        let (g, a, ad) = setup();
        let anti = a.super_mul(&ad).unwrap().try_add(&ad.super_mul(&a).unwrap()).unwrap();
        assert_eq!(anti, Op::identity(FermionModes::One, &g));
        assert!(a.super_mul(&a).unwrap().is_zero());
    }

    #[test]
    fn generators_anticommute_with_ladder() {
        let (g, a, ad) = setup();
        for l in ["α", "α*"] {
            let x = scalar(&g, l);
            for op in [&a, &ad] {
                let anti = x.super_mul(op).unwrap().try_add(&op.super_mul(&x).unwrap()).unwrap();
                assert!(anti.is_zero(), "{l}");
            }
        }
    }

    #[test]
    fn dagger_of_ladder() {
        let (_, a, ad) = setup();
        assert_eq!(a.super_dagger(), ad);
        assert_eq!(ad.super_dagger(), a);
    }

    #[test]
    fn two_mode_ladders_anticommute() {
        let g = GeneratorSet::two_mode();
        let m = FermionModes::Two;
        let (a, b) = (Op::annihilation(m, &g, 0), Op::annihilation(m, &g, 1));
        let (ad, bd) = (a.super_dagger(), b.super_dagger());
        let anti = |x: &Op, y: &Op| x.super_mul(y).unwrap().try_add(&y.super_mul(x).unwrap()).unwrap();
        assert_eq!(anti(&b, &bd), Op::identity(m, &g));
        assert!(anti(&a, &b).is_zero());
        assert!(anti(&a, &bd).is_zero());
        assert!(anti(&ad, &b).is_zero());
    }

    #[test]
    fn matrix_element_matches_literal_product() {
        let (g, a, ad) = setup();
        let x = a.super_mul(&scalar(&g, "α")).unwrap().try_add(&ad.super_mul(&scalar(&g, "α*")).unwrap()).unwrap();
        let one = GrassmannElement::one(&g);
        let zero = GrassmannElement::zero(&g);
        for m in 0..2 {
            for n in 0..2 {
                let unit = |k: usize| {
                    let amps = if k == 0 { [one.clone(), zero.clone()] } else { [zero.clone(), one.clone()] };
                    Op::ket(FermionModes::One, &amps).unwrap()
                };
                let bra = unit(m).super_dagger();
                let product = bra.super_mul(&x).unwrap().super_mul(&unit(n)).unwrap();
                assert_eq!(product.matrix_element(0, 0), x.matrix_element(m, n), "({m},{n})");
            }
        }
    }

    #[test]
    fn sandwich_round_trip() {
        let (g, a, _) = setup();
        let x = a.super_mul(&scalar(&g, "α")).unwrap().try_add(&scalar(&g, "α*")).unwrap();
        assert_eq!(Op::from_sandwich(FermionModes::One, &g, &x.sandwich()), x);
    }

    #[test]
    fn nilpotent_exponential() {
        let (g, _, _) = setup();
        let zero = Op::zero(FermionModes::One, &g);
        assert_eq!(zero.super_exp_nilpotent(1).unwrap(), Op::identity(FermionModes::One, &g));
        let x = scalar(&g, "α");
        let e = x.super_exp_nilpotent(3).unwrap();
        assert_eq!(e, Op::identity(FermionModes::One, &g).try_add(&x).unwrap());
        let id = Op::identity(FermionModes::One, &g);
        assert!(matches!(id.super_exp_nilpotent(5), Err(Error::NotNilpotent { max_order: 5 })));
    }

    #[test]
    fn trace_of_identity() {
        let (g, _, _) = setup();
        let t = Op::identity(FermionModes::One, &g).super_trace();
        assert_eq!(t, GrassmannElement::scalar(&g, Q::integer(2)));
        let t2 = Op::identity(FermionModes::Two, &GeneratorSet::two_mode()).super_trace();
        assert_eq!(t2.scalar_part(), Q::integer(4));
    }

    #[test]
    fn mode_and_set_mismatch() {
        let (g, a, _) = setup();
        let two = Op::identity(FermionModes::Two, &g);
        assert_eq!(a.super_mul(&two), Err(Error::ModeMismatch(1, 2)));
        let other = Op::identity(FermionModes::One, &GeneratorSet::two_mode());
        assert_eq!(a.super_mul(&other), Err(Error::GeneratorMismatch));
        assert!(a.partial_trace_b().is_err());
    }
}
