use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;

use super::{fermion_displacement, FermionState};
use crate::entanglement::{reduced_energy, von_neumann_entropy, DensityMatrix};
use crate::error::{Error, Result};
use crate::grassmann::{FermionModes, FockMatrix, GeneratorSet, GrassmannElement, SuperOperator};
use crate::scalar::{cx, Real};

type Op<T> = SuperOperator<Complex<T>>;
type Elem<T> = GrassmannElement<Complex<T>>;

const TWO: FermionModes = FermionModes::Two;

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if tau.is_nan() || tau < T::zero() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau.to_f64().unwrap_or(f64::NAN),
            reason: "must be non-negative",
        });
    }
    Ok(())
}

fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "must be finite",
        });
    }
    Ok(())
}

fn ladders<T: Real>(gens: &Arc<GeneratorSet>) -> [Op<T>; 4] {
    let a = Op::annihilation(TWO, gens, 0);
    let b = Op::annihilation(TWO, gens, 1);
    let (ad, bd) = (a.super_dagger(), b.super_dagger());
    [a, ad, b, bd]
}

/// `K = a†b† − ba`, anti-Hermitian, with `K|00⟩ = |11⟩` and `K|11⟩ = −|00⟩`.
pub fn fermion_squeeze_generator<T: Real>(gens: &Arc<GeneratorSet>) -> Op<T> {
    let [a, ad, b, bd] = ladders::<T>(gens);
    let pair = ad.super_mul(&bd).expect("same generators");
    pair.try_sub(&b.super_mul(&a).expect("same generators")).expect("same generators")
}

/// `S(γ) = exp(γK) = 1 + sin γ K + (1 − cos γ) K²`, since `K³ = −K`.
pub fn fermion_squeeze<T: Real>(gamma: T, gens: &Arc<GeneratorSet>) -> Result<Op<T>> {
    check_gamma(gamma)?;
    let k = fermion_squeeze_generator::<T>(gens);
    let k2 = k.super_mul(&k)?;
    Op::identity(TWO, gens).try_add(&k.scale(&cx(gamma.sin())))?.try_add(&k2.scale(&cx(T::one() - gamma.cos())))
}

/// Residuals of the squeezing operator's defining properties.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeReport<T: Real> {
    pub gamma: T,
    /// `S a S† − (cos γ a − sin γ b†)`.
    pub bogoliubov_a: f64,
    /// `S b S† − (cos γ b + sin γ a†)`.
    pub bogoliubov_b: f64,
    /// Largest anticommutator residual among the transformed operators.
    pub car: f64,
    /// `S†S − 1`.
    pub unitarity: f64,
    /// `cos²γ + sin²γ − 1`.
    pub determinant: f64,
    /// `S|00⟩ − (cos γ|00⟩ + sin γ|11⟩)`.
    pub vacuum: f64,
}

impl<T: Real> SqueezeReport<T> {
    pub fn worst(&self) -> f64 {
        [self.bogoliubov_a, self.bogoliubov_b, self.car, self.unitarity, self.determinant, self.vacuum]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn anticommutator<T: Real>(x: &Op<T>, y: &Op<T>) -> Result<Op<T>> {
    x.super_mul(y)?.try_add(&y.super_mul(x)?)
}

pub fn fermion_squeeze_check<T: Real>(gamma: T) -> Result<SqueezeReport<T>> {
    let gens = GeneratorSet::new(vec![], vec![])?;
    let s = fermion_squeeze(gamma, &gens)?;
    let s_dag = s.super_dagger();
    let (c, sn) = (cx(gamma.cos()), cx(gamma.sin()));
    let [a, ad, b, bd] = ladders::<T>(&gens);
    let conj = |x: &Op<T>| s.super_mul(x)?.super_mul(&s_dag);
    let (at, bt) = (conj(&a)?, conj(&b)?);
    let bogoliubov_a = at.max_abs_diff(&a.scale(&c).try_sub(&bd.scale(&sn))?)?;
    let bogoliubov_b = bt.max_abs_diff(&b.scale(&c).try_add(&ad.scale(&sn))?)?;

    let id = Op::identity(TWO, &gens);
    let zero = Op::zero(TWO, &gens);
    let (atd, btd) = (at.super_dagger(), bt.super_dagger());
    let pairs = [
        (&at, &atd, &id),
        (&bt, &btd, &id),
        (&at, &at, &zero),
        (&bt, &bt, &zero),
        (&at, &bt, &zero),
        (&at, &btd, &zero),
    ];
    let car = pairs
        .into_iter()
        .try_fold(0.0_f64, |acc, (x, y, want)| Ok::<_, Error>(acc.max(anticommutator(x, y)?.max_abs_diff(want)?)))?;

    let unitarity = s_dag.super_mul(&s)?.max_abs_diff(&id)?;
    let det = gamma.cos().powi(2) + gamma.sin().powi(2) - T::one();
    let vacuum = FermionState::basis(TWO, &gens, 0)
        .apply(&s)?
        .max_abs_diff(&numeric_state(&gens, [c, cx(T::zero()), cx(T::zero()), sn]))?;
    Ok(SqueezeReport {
        gamma,
        bogoliubov_a,
        bogoliubov_b,
        car,
        unitarity,
        determinant: det.abs().to_f64().unwrap_or(f64::NAN),
        vacuum,
    })
}

fn numeric_state<T: Real, const N: usize>(gens: &Arc<GeneratorSet>, amps: [Complex<T>; N]) -> FermionState<Complex<T>> {
    let modes = if N == 2 { FermionModes::One } else { TWO };
    FermionState::new(modes, amps.iter().map(|c| Elem::scalar(gens, *c)).collect()).expect("length matches modes")
}

/// `cos γ = (1 + e^{−τ})^{−1/2}`, i.e. `γ = atan(e^{−τ/2}) ∈ (0, π/4]`; `τ = ∞` gives 0.
pub fn fermion_gamma_from_tau<T: Real>(tau: T) -> Result<T> {
    check_tau(tau)?;
    Ok((-tau * T::lit(0.5)).exp().atan())
}

/// Inverse of [`fermion_gamma_from_tau`] on `[0, π/4]`: `τ = −2 ln tan γ`.
pub fn fermion_tau_from_gamma<T: Real>(gamma: T) -> Result<T> {
    if !(gamma >= T::zero() && gamma <= T::FRAC_PI_4()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "has a Gibbs image only on [0, π/4]",
        });
    }
    if gamma == T::FRAC_PI_4() {
        return Ok(T::zero());
    }
    Ok(-T::lit(2.0) * gamma.tan().ln())
}

/// Reduced Gibbs density of the fermionic TMSS, `f = diag(1, e^{−τ})/Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermionGibbs<T: Real> {
    pub tau: T,
    /// `1 + e^{−τ}`.
    pub z: T,
}

impl<T: Real> FermionGibbs<T> {
    /// `τ = 0` is the maximally entangled limit; `τ = ∞` the vacuum.
    pub fn new(tau: T) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self { tau, z: T::one() + (-tau).exp() })
    }

    /// `(1/Z, e^{−τ}/Z)`.
    pub fn weights(&self) -> [T; 2] {
        [self.z.recip(), (-self.tau).exp() / self.z]
    }

    pub fn density(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::from_diagonal(&self.weights())
    }

    /// `f` as a one-mode operator over `gens`.
    pub fn operator(&self, gens: &Arc<GeneratorSet>) -> Op<T> {
        let [p0, p1] = self.weights();
        let m = FockMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => cx(p0),
            (1, 1) => cx(p1),
            _ => cx(T::zero()),
        });
        Op::from_matrix(FermionModes::One, gens, m)
    }
}

/// `(1 + e^{−τ})^{−1/2} (|00⟩ + e^{−τ/2}|11⟩)`.
pub fn fermion_tmss<T: Real>(tau: T) -> Result<FermionState<Complex<T>>> {
    check_tau(tau)?;
    let root = FermionGibbs::new(tau)?.z.sqrt();
    let zero = cx(T::zero());
    Ok(numeric_state(
        &GeneratorSet::new(vec![], vec![])?,
        [cx(root.recip()), zero, zero, cx((-tau * T::lit(0.5)).exp() / root)],
    ))
}

/// Largest amplitude deviation of [`fermion_tmss`] from `S(γ(τ))|00⟩`.
pub fn fermion_tmss_deviation<T: Real>(tau: T) -> Result<f64> {
    let gens = GeneratorSet::new(vec![], vec![])?;
    let squeeze = fermion_squeeze(fermion_gamma_from_tau(tau)?, &gens)?;
    fermion_tmss(tau)?.max_abs_diff(&FermionState::basis(TWO, &gens, 0).apply(&squeeze)?)
}

/// `(|0⟩|1⟩ + e^{−τ/2}|1⟩|0⟩)/√Z`.
pub fn alt_state<T: Real>(tau: T) -> Result<FermionState<Complex<T>>> {
    check_tau(tau)?;
    let root = FermionGibbs::new(tau)?.z.sqrt();
    let zero = cx(T::zero());
    Ok(numeric_state(
        &GeneratorSet::new(vec![], vec![])?,
        [zero, cx(root.recip()), cx((-tau * T::lit(0.5)).exp() / root), zero],
    ))
}

/// Mode-a density of a Grassmann-free two-mode state.
fn physical_reduced_density<T: Real>(state: &FermionState<Complex<T>>) -> Result<DensityMatrix<T>> {
    let rho = state.outer(state)?.partial_trace_b()?;
    let m = rho.numeric_matrix().ok_or_else(|| Error::InvalidDensity("Grassmann-valued density".into()))?;
    DensityMatrix::new(DMatrix::from_fn(2, 2, |i, j| *m.get(i, j)))
}

/// `S_F = ln(1 + e^{−τ}) + τ/(e^τ + 1)` and `E_F = 1/(e^τ + 1)`; `τ = 0`
/// gives `(ln 2, 1/2)`, `τ = ∞` gives `(0, 0)`.
pub fn fermion_entropy_energy<T: Real>(tau: T) -> Result<(T, T)> {
    check_tau(tau)?;
    if tau.is_infinite() {
        return Ok((T::zero(), T::zero()));
    }
    if tau.is_zero() {
        return Ok((T::LN_2(), T::lit(0.5)));
    }
    let energy = (tau.exp() + T::one()).recip();
    Ok(((-tau).exp().ln_1p() + tau * energy, energy))
}

/// Comparison of the mirrored state with the fermionic TMSS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AltStateReport<T: Real> {
    pub tau: T,
    /// Largest entry of `ρ′_a − ρ_a`.
    pub deviation: T,
    /// `ρ_a − f`.
    pub gibbs_deviation: T,
    pub entropy: T,
    pub alt_entropy: T,
    pub energy: T,
    pub alt_energy: T,
}

pub fn alt_state_check<T: Real>(tau: T) -> Result<AltStateReport<T>> {
    let rho = physical_reduced_density(&fermion_tmss(tau)?)?;
    let alt = physical_reduced_density(&alt_state(tau)?)?;
    Ok(AltStateReport {
        tau,
        deviation: rho.max_abs_diff(&alt),
        gibbs_deviation: rho.max_abs_diff(&FermionGibbs::new(tau)?.density()?),
        entropy: von_neumann_entropy(&rho),
        alt_entropy: von_neumann_entropy(&alt),
        energy: reduced_energy(&rho),
        alt_energy: reduced_energy(&alt),
    })
}

fn two_mode_alpha_beta<T: Real>() -> Result<(Arc<GeneratorSet>, Elem<T>, Elem<T>)> {
    let gens = GeneratorSet::two_mode();
    let alpha = Elem::generator(&gens, "α")?;
    let beta = Elem::generator(&gens, "β")?;
    Ok((gens, alpha, beta))
}

/// Residuals of `S D_a(α) D_b(β) = D_a(ᾱ) D_b(β̄) S` for generic Grassmann
/// `α, β`, with `(ᾱ, β̄*)` from the rotation or from its inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsIdentityReport<T: Real> {
    pub gamma: T,
    /// `(ᾱ, β̄*) = B_F(γ)(α, β*)`: `ᾱ = cos γ α + sin γ β*`, `β̄ = cos γ β − sin γ α*`.
    pub forward: f64,
    /// `(ᾱ, β̄*) = B_F(−γ)(α, β*)`.
    pub inverse: f64,
    /// `α = β = 0`: both sides against `S` itself.
    pub vacuum: f64,
}

fn displace_pair<T: Real>(alpha: &Elem<T>, beta: &Elem<T>) -> Result<Op<T>> {
    fermion_displacement(TWO, 0, alpha)?.super_mul(&fermion_displacement(TWO, 1, beta)?)
}

fn rotated<T: Real>(alpha: &Elem<T>, beta: &Elem<T>, gamma: T) -> Result<(Elem<T>, Elem<T>)> {
    let (c, s) = (cx(gamma.cos()), cx(gamma.sin()));
    let alpha_bar = alpha.scale(&c).try_add(&beta.g_conjugate().scale(&s))?;
    let beta_bar = beta.scale(&c).try_sub(&alpha.g_conjugate().scale(&s))?;
    Ok((alpha_bar, beta_bar))
}

pub fn fermion_cs_identity_check<T: Real>(gamma: T) -> Result<CsIdentityReport<T>> {
    let (gens, alpha, beta) = two_mode_alpha_beta::<T>()?;
    let s = fermion_squeeze(gamma, &gens)?;
    let lhs = s.super_mul(&displace_pair(&alpha, &beta)?)?;
    let side = |g: T| -> Result<f64> {
        let (ab, bb) = rotated(&alpha, &beta, g)?;
        lhs.max_abs_diff(&displace_pair(&ab, &bb)?.super_mul(&s)?)
    };
    let zero = Elem::zero(&gens);
    let vacuum = s.super_mul(&displace_pair(&zero, &zero)?)?.max_abs_diff(&s)?;
    Ok(CsIdentityReport { gamma, forward: side(gamma)?, inverse: side(-gamma)?, vacuum })
}

/// `ρ_a = Tr_b |−α, −β, γ⟩⟨γ, β, α|` with `|α, β, γ⟩ = D_a(α) D_b(β) S(γ)|00⟩`,
/// over the generators `{α, α*, β, β*}`.
pub fn fermion_reduced_density<T: Real>(gamma: T) -> Result<Op<T>> {
    let (gens, alpha, beta) = two_mode_alpha_beta::<T>()?;
    let squeezed = FermionState::basis(TWO, &gens, 0).apply(&fermion_squeeze(gamma, &gens)?)?;
    let ket = squeezed.apply(&displace_pair(&-&alpha, &-&beta)?)?;
    let bra_state = squeezed.apply(&displace_pair(&alpha, &beta)?)?;
    ket.outer(&bra_state)?.partial_trace_b()
}

/// Comparison of the reduced Grassmann density with displaced Gibbs forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedDensityReport<T: Real> {
    pub gamma: T,
    pub tau: T,
    /// `ρ_a − D(α) f D(α)†`.
    pub factorized: f64,
    /// `ρ_a − D(−α) f D(α)†`.
    pub mirrored: f64,
    /// `ρ_a` at `α = β = 0` against `f`.
    pub gibbs: f64,
    /// `Tr ρ_a − 1`.
    pub trace_defect: f64,
    /// `Tr(D(α) f D(α)†) − 1`; nonzero whenever `α` enters.
    pub factorized_trace_defect: f64,
}

/// Requires `γ ∈ [0, π/4]` so that `f` has a Gibbs parameter.
pub fn fermion_reduced_density_check<T: Real>(gamma: T) -> Result<ReducedDensityReport<T>> {
    let tau = fermion_tau_from_gamma(gamma)?;
    let (gens, alpha, _) = two_mode_alpha_beta::<T>()?;
    let one = FermionModes::One;
    let f = FermionGibbs::new(tau)?.operator(&gens);
    let rho = fermion_reduced_density(gamma)?;
    let d = fermion_displacement(one, 0, &alpha)?;
    let d_dag = d.super_dagger();
    let literal = d.super_mul(&f)?.super_mul(&d_dag)?;
    let factorized = rho.max_abs_diff(&literal)?;
    let unit = Elem::one(&gens);
    let minus = fermion_displacement(one, 0, &-&alpha)?;
    let mirrored = rho.max_abs_diff(&minus.super_mul(&f)?.super_mul(&d_dag)?)?;

    let squeezed = FermionState::basis(TWO, &gens, 0).apply(&fermion_squeeze(gamma, &gens)?)?;
    let gibbs = squeezed.outer(&squeezed)?.partial_trace_b()?.max_abs_diff(&f)?;
    Ok(ReducedDensityReport {
        gamma,
        tau,
        factorized,
        mirrored,
        gibbs,
        trace_defect: rho.super_trace().max_abs_diff(&unit)?,
        factorized_trace_defect: literal.super_trace().max_abs_diff(&unit)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

    fn empty() -> Arc<GeneratorSet> {
        GeneratorSet::new(vec![], vec![]).unwrap()
    }

    #[test]
    fn generator_action_on_the_paired_subspace() {
        let g = empty();
        let k = fermion_squeeze_generator::<f64>(&g);
        let vac = FermionState::basis(TWO, &g, 0);
        let pair = FermionState::basis(TWO, &g, 3);
        assert_eq!(vac.apply(&k).unwrap(), pair);
        assert_eq!(pair.apply(&k).unwrap().numeric_amplitudes().unwrap()[0], cx(-1.0));
        assert_eq!(k.super_dagger().max_abs_diff(&k.scale(&cx(-1.0))).unwrap(), 0.0);
    }

    #[test]
    fn squeeze_limits() {
        let g = empty();
        assert_eq!(fermion_squeeze(0.0f64, &g).unwrap(), Op::identity(TWO, &g));
        let s = fermion_squeeze(FRAC_PI_2, &g).unwrap();
        let out = FermionState::basis(TWO, &g, 0).apply(&s).unwrap();
        assert!(out.max_abs_diff(&FermionState::basis(TWO, &g, 3)).unwrap() < 1e-15);
    }

    #[test]
    fn squeeze_properties() {
        for gamma in [0.0f64, 0.3, 0.7, FRAC_PI_4, 1.2, 2.5] {
            let r = fermion_squeeze_check(gamma).unwrap();
            assert!(r.worst() <= 1e-13, "γ={gamma}: {r:?}");
        }
    }

    #[test]
    fn tau_gamma_map() {
        assert_eq!(fermion_gamma_from_tau(0.0f64).unwrap(), FRAC_PI_4);
        assert_eq!(fermion_gamma_from_tau(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(fermion_tau_from_gamma(FRAC_PI_4).unwrap(), 0.0);
        assert!(fermion_tau_from_gamma(0.0f64).unwrap().is_infinite());
        for tau in [0.01f64, 0.5, 1.0, 4.0, 30.0] {
            let g = fermion_gamma_from_tau(tau).unwrap();
            assert!((g.cos() - (1.0 + (-tau).exp()).powf(-0.5)).abs() < 1e-15);
            assert!((g.sin() - (1.0 + tau.exp()).powf(-0.5)).abs() < 1e-15);
            assert!((fermion_tau_from_gamma(g).unwrap() - tau).abs() < 1e-12 * tau.max(1.0));
        }
        assert!(fermion_gamma_from_tau(-1.0f64).is_err() && fermion_tau_from_gamma(1.0f64).is_err());
    }

    #[test]
    fn tmss_matches_squeezed_vacuum() {
        for tau in [0.0f64, 0.2, 1.0, 5.0, 50.0] {
            assert!(fermion_tmss_deviation(tau).unwrap() <= 1e-13, "τ={tau}");
        }
        let amps = fermion_tmss(1.0f64).unwrap().numeric_amplitudes().unwrap();
        let n = (1.0 + (-1f64).exp()).powf(-0.5);
        assert!((amps[0].re - n).abs() < 1e-15 && (amps[3].re - n * (-0.5f64).exp()).abs() < 1e-15);
        let far = fermion_tmss(50.0f64).unwrap().numeric_amplitudes().unwrap();
        assert!((far[0].re - 1.0).abs() < 1e-10 && far[3].re < 1e-10);
        let half = fermion_tmss(0.0f64).unwrap().numeric_amplitudes().unwrap();
        assert_eq!(half[0], half[3]);
        assert!(fermion_tmss(-0.1f64).is_err());
    }

    #[test]
    fn entropy_and_energy() {
        assert_eq!(fermion_entropy_energy(0.0f64).unwrap(), (LN_2, 0.5));
        assert_eq!(fermion_entropy_energy(f64::INFINITY).unwrap(), (0.0, 0.0));
        let (_, e) = fermion_entropy_energy(1.0f64).unwrap();
        assert!((e - 0.2689414213699951).abs() < 1e-15);
        for tau in [0.0f64, 0.1, 1.0, 3.0, 20.0] {
            let (s, e) = fermion_entropy_energy(tau).unwrap();
            let rho = physical_reduced_density(&fermion_tmss(tau).unwrap()).unwrap();
            assert!((von_neumann_entropy(&rho) - s).abs() <= 1e-13, "τ={tau}");
            assert!((reduced_energy(&rho) - e).abs() <= 1e-13);
            assert!((0.0..=LN_2).contains(&s) && (0.0..=0.5).contains(&e));
        }
        let rho = physical_reduced_density(&fermion_tmss(0.0f64).unwrap()).unwrap();
        assert!((von_neumann_entropy(&rho) - LN_2).abs() <= f64::EPSILON);
    }

    #[test]
    fn alt_state_shares_the_reduced_density() {
        for tau in [0.0f64, 1.0, 3.0, 50.0] {
            let r = alt_state_check(tau).unwrap();
            assert_eq!(r.deviation, 0.0, "τ={tau}");
            assert!(r.gibbs_deviation <= 1e-15);
            assert!((r.entropy - r.alt_entropy).abs() <= 1e-15);
            assert_eq!(r.energy, r.alt_energy);
        }
    }

    #[test]
    fn intertwining_identity() {
        for gamma in [0.0f64, 0.6, FRAC_PI_4] {
            let r = fermion_cs_identity_check(gamma).unwrap();
            assert!(r.forward <= 1e-13, "γ={gamma}: {r:?}");
            assert_eq!(r.vacuum, 0.0);
        }
        assert!(fermion_cs_identity_check(0.6f64).unwrap().inverse > 0.1);
    }

    #[test]
    fn reduced_density_outcomes() {
        for gamma in [0.0f64, 0.6, FRAC_PI_4] {
            let r = fermion_reduced_density_check(gamma).unwrap();
            assert!(r.mirrored <= 1e-13 && r.gibbs <= 1e-13 && r.trace_defect <= 1e-13, "γ={gamma}: {r:?}");
            assert!(r.factorized > 0.5, "γ={gamma}: {r:?}");
            assert_eq!(r.factorized_trace_defect > 0.5, gamma < FRAC_PI_4, "γ={gamma}: {r:?}");
        }
    }

    #[test]
    fn single_precision() {
        let r = fermion_squeeze_check(0.7f32).unwrap();
        assert!(r.worst() <= 1e-6);
        assert_eq!(fermion_entropy_energy(0.0f32).unwrap().0, std::f32::consts::LN_2);
    }
}
