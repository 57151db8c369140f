//! Exact relation suite for the Grassmann algebra and the super-operator
//! algebra, evaluated with rational coefficients. Every residual is the
//! largest coefficient of a difference that must vanish identically.

use std::sync::Arc;

use num_complex::Complex;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FermionModes, FockMatrix, GeneratorSet, GrassmannElement, SuperOperator};
use crate::error::Result;
use crate::scalar::Coefficient;

pub type Exact = Complex<Rational64>;
type Elem = GrassmannElement<Exact>;
type Op = SuperOperator<Exact>;

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
}

fn check(name: impl Into<String>, residual: f64) -> RelationCheck {
    RelationCheck { name: name.into(), residual }
}

fn q(n: i64) -> Exact {
    Exact::integer(n)
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Exact {
    let re = Rational64::new(rng.random_range(-4..=4), rng.random_range(1..=3));
    let im = Rational64::new(rng.random_range(-4..=4), rng.random_range(1..=3));
    Complex::new(re, im)
}

/// Random element with up to `max_terms` monomials.
pub fn random_element(gens: &Arc<GeneratorSet>, rng: &mut ChaCha8Rng, max_terms: usize) -> Elem {
    let full = (1u64 << gens.len()) - 1;
    let n = rng.random_range(1..=max_terms);
    Elem::from_terms(gens, (0..n).map(|_| (rng.random_range(0..=full), random_coefficient(rng))))
}

/// Random sparse two-mode super-operator: a few terms, each a random
/// matrix with few nonzero entries times a random monomial.
pub fn random_operator(gens: &Arc<GeneratorSet>, rng: &mut ChaCha8Rng) -> Op {
    let modes = FermionModes::Two;
    let dim = modes.dim();
    let full = (1u64 << gens.len()) - 1;
    let mut out = Op::zero(modes, gens);
    for _ in 0..rng.random_range(1..=3) {
        let mut m = FockMatrix::zeros(dim);
        for _ in 0..rng.random_range(1..=3) {
            m.set(rng.random_range(0..dim), rng.random_range(0..dim), random_coefficient(rng));
        }
        let x = Elem::from_terms(gens, [(rng.random_range(0..=full), q(1))]);
        let term = Op::from_matrix(modes, gens, m).super_mul(&Op::grassmann(modes, &x)).expect("same space");
        out = out.try_add(&term).expect("same space");
    }
    out
}

fn elem_diff(x: &Elem, y: &Elem) -> f64 {
    x.max_abs_diff(y).expect("same generator set")
}

fn op_diff(x: &Op, y: &Op) -> f64 {
    x.max_abs_diff(y).expect("same space")
}

fn anticommutator(x: &Op, y: &Op) -> Result<Op> {
    x.super_mul(y)?.try_add(&y.super_mul(x)?)
}

/// Runs every relation; `trials` random instances per randomized check.
pub fn relation_suite(seed: u64, trials: usize) -> Result<Vec<RelationCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = GeneratorSet::two_mode();
    let labels = ["α", "α*", "β", "β*"];
    let gen = |l: &str| Elem::generator(&gens, l);
    let one = Elem::one(&gens);
    let mut out = Vec::new();

    let nil = labels.iter().try_fold(0.0_f64, |acc, l| -> Result<f64> {
        let g = gen(l)?;
        Ok(acc.max(elem_diff(&g.g_mul(&g)?, &Elem::zero(&gens))))
    })?;
    out.push(check("nilpotency g² = 0", nil));

    let mut anti = 0.0_f64;
    for x in labels {
        for y in labels {
            if x != y {
                let (gx, gy) = (gen(x)?, gen(y)?);
                anti = anti.max(elem_diff(&gx.g_mul(&gy)?, &-&gy.g_mul(&gx)?));
            }
        }
    }
    for _ in 0..trials {
        let (x, y) = (random_element(&gens, &mut rng, 4).odd_part(), random_element(&gens, &mut rng, 4).odd_part());
        let (sx, sy) = (x.terms().fold(0, |m, (k, _)| m | k), y.terms().fold(0, |m, (k, _)| m | k));
        if sx & sy == 0 {
            anti = anti.max(elem_diff(&x.g_mul(&y)?, &-&y.g_mul(&x)?));
        }
    }
    out.push(check("anticommutation of odd elements", anti));

    let (mut invol, mut anti_auto) = (0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let (x, y) = (random_element(&gens, &mut rng, 5), random_element(&gens, &mut rng, 5));
        invol = invol.max(elem_diff(&x.g_conjugate().g_conjugate(), &x));
        anti_auto = anti_auto.max(elem_diff(&x.g_mul(&y)?.g_conjugate(), &y.g_conjugate().g_mul(&x.g_conjugate())?));
    }
    out.push(check("conjugation involution (x*)* = x", invol));
    out.push(check("conjugation anti-automorphism (xy)* = y*x*", anti_auto));
    out.push(check("conjugation worked example", conjugation_example()?));

    let one_mode = GeneratorSet::one_mode();
    let a = Elem::generator(&one_mode, "α")?;
    let ac = Elem::generator(&one_mode, "α*")?;
    let unit = Elem::one(&one_mode);
    let zero = Elem::zero(&one_mode);
    out.push(check("∫dα 1 = 0", elem_diff(&unit.berezin_integrate_label("α")?, &zero)));
    out.push(check("∫dα α = 1", elem_diff(&a.berezin_integrate_label("α")?, &unit)));
    out.push(check("∫dα* α* = 1", elem_diff(&ac.berezin_integrate_label("α*")?, &unit)));
    out.push(check("∫dα* dα αα* = 1", elem_diff(&a.g_mul(&ac)?.integrate_measure(&["α*", "α"])?, &unit)));

    let modes = FermionModes::Two;
    let op_a = Op::annihilation(modes, &gens, 0);
    let op_b = Op::annihilation(modes, &gens, 1);
    let (op_ad, op_bd) = (op_a.super_dagger(), op_b.super_dagger());
    let id = Op::identity(modes, &gens);
    let zero_op = Op::zero(modes, &gens);
    let car = op_diff(&anticommutator(&op_a, &op_ad)?, &id).max(op_diff(&anticommutator(&op_b, &op_bd)?, &id));
    out.push(check("{a, a†} = {b, b†} = 1", car));
    let mixed = [
        anticommutator(&op_a, &op_b)?,
        anticommutator(&op_a, &op_bd)?,
        anticommutator(&op_ad, &op_b)?,
        op_a.super_mul(&op_a)?,
        op_b.super_mul(&op_b)?,
    ]
    .iter()
    .map(|x| op_diff(x, &zero_op))
    .fold(0.0, f64::max);
    out.push(check("{a, b} = {a, b†} = 0, a² = b² = 0", mixed));
    let mut graded = 0.0_f64;
    for l in labels {
        let g = Op::grassmann(modes, &gen(l)?);
        for op in [&op_a, &op_ad, &op_b, &op_bd] {
            graded = graded.max(op_diff(&anticommutator(&g, op)?, &zero_op));
        }
        for l2 in labels {
            let g2 = Op::grassmann(modes, &gen(l2)?);
            graded = graded.max(op_diff(&anticommutator(&g, &g2)?, &zero_op));
        }
    }
    out.push(check("{g, a} = {g, a†} = {g, b} = {g, b†} = {g, g'} = 0", graded));

    let (mut assoc, mut dagger) = (0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let (x, y, z) =
            (random_operator(&gens, &mut rng), random_operator(&gens, &mut rng), random_operator(&gens, &mut rng));
        assoc = assoc.max(op_diff(&x.super_mul(&y)?.super_mul(&z)?, &x.super_mul(&y.super_mul(&z)?)?));
        dagger = dagger.max(op_diff(&x.super_mul(&y)?.super_dagger(), &y.super_dagger().super_mul(&x.super_dagger())?));
        dagger = dagger.max(op_diff(&x.super_dagger().super_dagger(), &x));
    }
    out.push(check(format!("associativity on {trials} random triples"), assoc));
    out.push(check(format!("(XY)† = Y†X† and X†† = X on {trials} random pairs"), dagger));
    out.push(check("dagger worked example", dagger_example()?));

    let scalar_one = Op::grassmann(modes, &one);
    out.push(check("1 ⊗ 1 is the identity", op_diff(&scalar_one, &id)));
    Ok(out)
}

/// `(α_i α_j* + c β_i β_j)* = α_j α_i* + c* β_j* β_i*`.
pub fn conjugation_example() -> Result<f64> {
    let gens = GeneratorSet::from_pairs(&[("α_i", "α_i*"), ("α_j", "α_j*"), ("β_i", "β_i*"), ("β_j", "β_j*")])?;
    let c = Complex::new(Rational64::new(2, 3), Rational64::new(-5, 7));
    let p = |ls: &[&str]| Elem::product_of(&gens, ls);
    let x = &p(&["α_i", "α_j*"])? + &p(&["β_i", "β_j"])?.scale(&c);
    let want = &p(&["α_j", "α_i*"])? + &p(&["β_j*", "β_i*"])?.scale(&c.conj());
    Ok(elem_diff(&x.g_conjugate(), &want))
}

/// `(a_i α_j a_k† β_l*)† = a_k a_i† α_j* β_l`, with `a_i = a`, `a_k = b`.
pub fn dagger_example() -> Result<f64> {
    let gens = GeneratorSet::from_pairs(&[("α_j", "α_j*"), ("β_l", "β_l*")])?;
    let modes = FermionModes::Two;
    let g = |l: &str| -> Result<Op> { Ok(Op::grassmann(modes, &Elem::generator(&gens, l)?)) };
    let a = Op::annihilation(modes, &gens, 0);
    let b = Op::annihilation(modes, &gens, 1);
    let x = a.super_mul(&g("α_j")?)?.super_mul(&b.super_dagger())?.super_mul(&g("β_l*")?)?;
    let want = b.super_mul(&a.super_dagger())?.super_mul(&g("α_j*")?)?.super_mul(&g("β_l")?)?;
    Ok(op_diff(&x.super_dagger(), &want))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_relation_is_exact() {
        let checks = relation_suite(7, 100).unwrap();
        assert!(checks.len() >= 15);
        for c in &checks {
            assert_eq!(c.residual, 0.0, "{}", c.name);
        }
    }

    #[test]
    fn random_operators_are_not_trivial() {
        let gens = GeneratorSet::two_mode();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let nontrivial = (0..20).filter(|_| !random_operator(&gens, &mut rng).is_grassmann_free()).count();
        assert!(nontrivial > 10);
    }

    #[test]
    fn worked_examples_fail_when_perturbed() {
        // the conjugation without reversal would give α_i* α_j, which differs
        let gens = GeneratorSet::from_pairs(&[("α_i", "α_i*"), ("α_j", "α_j*")]).unwrap();
        let wrong = Elem::product_of(&gens, &["α_i*", "α_j"]).unwrap();
        let right = Elem::product_of(&gens, &["α_i", "α_j*"]).unwrap().g_conjugate();
        assert!(elem_diff(&wrong, &right) > 0.0);
    }
}
