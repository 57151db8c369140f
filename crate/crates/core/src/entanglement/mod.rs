//! Reduced densities of two-mode boson states, their entropy and energy,
//! the Gibbs form of the reduced TMSS density, and the closed-form curves.
//!
//! Entropies are in nats; energies in quanta of mode a (`H_a = a†a`).

mod curves;
mod maxent;

pub use curves::{
    curve_chi, delta_s_chi, energy_chi, energy_closed_form, entropy_chi, entropy_closed_form, psi_n_state, psi_n_stats,
    tau_for_energy, tmss_beats_psi_n, EntanglementCurvePoint,
};
pub use maxent::{maxent_property_check, sample_fixed_energy_state, MaxentReport};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::boson::{
    bogoliubov_transform_params, cs_state, displacement_operator, gamma_from_tau, tmss_fock, DisplacementParams,
    FockCutoff, StatisticsKind, TwoModeState,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{cx, Real};

/// Hermiticity and trace tolerance of [`DensityMatrix`].
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalues in `[−EIGEN_FLOOR, 0)` are clamped to zero.
pub const EIGEN_FLOOR: f64 = 1e-12;
/// Largest `|Σ|c|² − 1|` accepted by [`partial_trace_b`].
pub const PARTIAL_TRACE_NORM_TOL: f64 = 1e-8;

/// Validated single-mode density matrix with cached eigenvalues.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Real> {
    entries: CMatrix<T>,
    eigenvalues: Vec<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks Hermiticity, unit trace and positivity; eigenvalues in
    /// `[−1e-12, 0)` are clamped to zero.
    pub fn new(entries: CMatrix<T>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidDensity(format!("{}x{} is not square", entries.nrows(), entries.ncols())));
        }
        if !linalg::is_finite(&entries) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let tol = T::tol(DENSITY_TOL);
        let herm = linalg::max_abs_diff(&entries, &linalg::adjoint(&entries));
        if herm > tol {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = entries.trace();
        if (trace.re - T::one()).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidDensity(format!("trace {} + {}i is not 1", trace.re, trace.im)));
        }
        let mut eigenvalues = T::hermitian_eigenvalues(&entries);
        let floor = T::tol(EIGEN_FLOOR);
        for l in eigenvalues.iter_mut() {
            if *l < -floor {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {l:e}")));
            }
            *l = l.max(T::zero());
        }
        Ok(Self { entries, eigenvalues })
    }

    /// `diag(p_0, p_1, …)`.
    pub fn from_diagonal(p: &[T]) -> Result<Self> {
        Self::new(DMatrix::from_fn(p.len(), p.len(), |i, j| if i == j { cx(p[i]) } else { Complex::zero() }))
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let n = psi.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex<T> {
        self.entries[(m, n)]
    }

    /// Ascending, clamped at zero.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let d = self.dim().min(other.dim());
        linalg::max_abs_diff(
            &self.entries.view((0, 0), (d, d)).into_owned(),
            &other.entries.view((0, 0), (d, d)).into_owned(),
        )
    }
}

/// `(ρ_a)_{mn} = Σ_r c[m][r] c[n][r]*`, rescaled by the state's norm.
pub fn partial_trace_b<T: Real>(state: &TwoModeState<T>) -> Result<DensityMatrix<T>> {
    let norm = state.norm_sqr();
    if (norm - T::one()).abs() > T::tol(PARTIAL_TRACE_NORM_TOL) {
        return Err(Error::NotNormalized { norm_sqr: norm.to_f64().unwrap_or(f64::NAN) });
    }
    let c = state.amplitudes();
    let rho = c * linalg::adjoint(c);
    DensityMatrix::new(linalg::scale(&rho, cx(T::one() / norm)))
}

/// `−Σ λ ln λ` over the eigenvalues, with `0 ln 0 = 0`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.eigenvalues.iter().filter(|l| **l > T::zero()).fold(T::zero(), |acc, &l| acc - l * l.ln())
}

/// `Tr(ρ a†a) = Σ n ρ_nn`.
pub fn reduced_energy<T: Real>(rho: &DensityMatrix<T>) -> T {
    (0..rho.dim()).fold(T::zero(), |acc, n| acc + T::from_usize(n).unwrap() * rho.entries[(n, n)].re)
}

/// Truncated Gibbs density `e^{−τ a†a} / Z`.
#[derive(Clone, Debug)]
pub struct GibbsDensity<T: Real> {
    pub tau: T,
    /// `Σ_{n ≤ n_max} e^{−τn}`.
    pub z: T,
    /// `(1 − e^{−τ})^{−1}`.
    pub z_infinite: T,
    /// `e^{−τ(n_max+1)} = 1 − z / z_infinite`, the weight lost to truncation.
    pub tail: T,
    pub density: DensityMatrix<T>,
}

pub fn gibbs_density<T: Real>(tau: T, cutoff: FockCutoff) -> Result<GibbsDensity<T>> {
    if tau.is_nan() || tau <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau.to_f64().unwrap_or(f64::NAN),
            reason: "must be positive",
        });
    }
    let weights: Vec<T> = (0..cutoff.dim()).map(|n| (-tau * T::from_usize(n).unwrap()).exp()).collect();
    let z = weights.iter().fold(T::zero(), |acc, w| acc + *w);
    let p: Vec<T> = weights.iter().map(|w| *w / z).collect();
    Ok(GibbsDensity {
        tau,
        z,
        z_infinite: -T::one() / (-tau).exp_m1(),
        tail: (-tau * T::from_usize(cutoff.dim()).unwrap()).exp(),
        density: DensityMatrix::from_diagonal(&p)?,
    })
}

/// Outcome of [`displaced_gibbs_check`].
#[derive(Clone, Debug)]
pub struct DisplacedGibbsReport<T: Real> {
    /// `ρ_a` of `D_a(ξ) D_b(η) S(γ)|0⟩` against `D(ξ) f(τ) D(ξ)†`.
    pub deviation: T,
    /// `ρ_a` of the same construction at `η` and at `η = 0`.
    pub eta_spread: T,
    /// `ρ_a` of the squeezed-last state `S(γ) D_a(ξ) D_b(η)|0⟩` against
    /// `D(ξ̄) f(τ) D(ξ̄)†`, `ξ̄` from the inverse Bogoliubov map.
    pub squeezed_last_deviation: T,
    pub xi_bar: Complex<T>,
    pub entropy: T,
    pub squeezed_last_entropy: T,
    pub gibbs_entropy: T,
    pub energy: T,
    pub squeezed_last_energy: T,
    pub gibbs_energy: T,
}

/// Compares the reduced density of a displaced TMSS with the displaced
/// Gibbs form `D(ξ) f(τ) D(ξ)†`, `f(τ) = e^{−τ a†a}/Z`, `tanh γ = e^{−τ/2}`.
///
/// Displacing after squeezing leaves mode a's parameter as is; squeezing
/// after displacing (the CS state) moves it to `ξ̄ = u ξ + v η*`. Both are
/// reported. `η` acts on mode b only and drops out of `ρ_a`.
pub fn displaced_gibbs_check<T: Real>(
    xi: Complex<T>,
    eta: Complex<T>,
    tau: T,
    cutoff: FockCutoff,
) -> Result<DisplacedGibbsReport<T>> {
    let gibbs = gibbs_density(tau, cutoff)?;
    let f = gibbs.density.entries();
    let gamma = gamma_from_tau(tau);
    let displaced_gibbs = |z: Complex<T>| -> Result<DensityMatrix<T>> {
        let d = displacement_operator(z, cutoff)?;
        DensityMatrix::new(d.matrix() * f * linalg::adjoint(d.matrix()))
    };

    let tmss = tmss_fock(tau, cutoff)?;
    let rho = partial_trace_b(&tmss.displace(DisplacementParams::new(xi, eta))?)?;
    let rho_eta0 = partial_trace_b(&tmss.displace(DisplacementParams::new(xi, Complex::zero()))?)?;

    let params = DisplacementParams::new(xi, eta);
    let xi_bar = bogoliubov_transform_params(params, -gamma, StatisticsKind::Boson).xi;
    let rho_cs = partial_trace_b(&cs_state(params, gamma, cutoff)?)?;

    Ok(DisplacedGibbsReport {
        deviation: rho.max_abs_diff(&displaced_gibbs(xi)?),
        eta_spread: rho.max_abs_diff(&rho_eta0),
        squeezed_last_deviation: rho_cs.max_abs_diff(&displaced_gibbs(xi_bar)?),
        xi_bar,
        entropy: von_neumann_entropy(&rho),
        squeezed_last_entropy: von_neumann_entropy(&rho_cs),
        gibbs_entropy: von_neumann_entropy(&gibbs.density),
        energy: reduced_energy(&rho),
        squeezed_last_energy: reduced_energy(&rho_cs),
        gibbs_energy: reduced_energy(&gibbs.density),
    })
}

/// Multipliers and thermodynamic bookkeeping of a truncated Gibbs density.
#[derive(Clone, Copy, Debug)]
pub struct LagrangeSolution<T: Real> {
    /// `λ0 = 1 − ln Z`.
    pub lambda0: T,
    /// `λ1 = −τ`.
    pub lambda1: T,
    /// `F = −ln Z / τ`.
    pub free_energy: T,
    pub entropy: T,
    pub energy: T,
    pub ln_z: T,
    /// `|ln Z − (λ1 E + S)|`.
    pub ln_z_residual: T,
    /// `|F − (E − S/τ)|`.
    pub free_energy_residual: T,
}

/// Fills a [`LagrangeSolution`] from the truncated Gibbs density, with `S`
/// from the eigenvalues and `E` from the diagonal, so the two identities
/// are checked rather than assumed.
pub fn legendre_report<T: Real>(tau: T, cutoff: FockCutoff) -> Result<LagrangeSolution<T>> {
    let g = gibbs_density(tau, cutoff)?;
    let entropy = von_neumann_entropy(&g.density);
    let energy = reduced_energy(&g.density);
    let ln_z = g.z.ln();
    let lambda1 = -tau;
    let free_energy = -ln_z / tau;
    Ok(LagrangeSolution {
        lambda0: T::one() - ln_z,
        lambda1,
        free_energy,
        entropy,
        energy,
        ln_z,
        ln_z_residual: (ln_z - (lambda1 * energy + entropy)).abs(),
        free_energy_residual: (free_energy - (energy - entropy / tau)).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn vacuum_and_bell_reductions() {
        let c = cut(3);
        let rho = partial_trace_b(&TwoModeState::<f64>::vacuum(c)).unwrap();
        assert_eq!(rho.get(0, 0), cx(1.0));
        assert!(von_neumann_entropy(&rho).abs() < 1e-15);
        assert_eq!(reduced_energy(&rho), 0.0);

        let mut amps = linalg::zeros::<f64>(4, 4);
        amps[(0, 0)] = cx(0.5f64.sqrt());
        amps[(1, 1)] = cx(0.5f64.sqrt());
        let bell = TwoModeState::from_amplitudes(c, amps).unwrap();
        let rho = partial_trace_b(&bell).unwrap();
        assert!((rho.get(0, 0).re - 0.5).abs() < 1e-15 && (rho.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let c = cut(2);
        let amps = linalg::scale(&TwoModeState::<f64>::vacuum(c).amplitudes().clone(), cx(1.001));
        let s = TwoModeState::unnormalized(c, amps).unwrap();
        assert!(matches!(partial_trace_b(&s), Err(Error::NotNormalized { .. })));

        let nonherm = DMatrix::from_row_slice(2, 2, &[cx(0.5), cx(0.1), cx(0.0), cx(0.5)]);
        assert!(matches!(DensityMatrix::new(nonherm), Err(Error::InvalidDensity(_))));
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.4]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.1, -0.1]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.0 + 1e-13, -1e-13]).is_ok());
    }

    #[test]
    fn tmss_reduces_to_gibbs() {
        let c = cut(60);
        for tau in [0.5f64, 1.0, 2.0] {
            let rho = partial_trace_b(&tmss_fock(tau, c).unwrap()).unwrap();
            let g = gibbs_density(tau, c).unwrap();
            assert!(rho.max_abs_diff(&g.density) < 1e-12);
        }
        let rho = partial_trace_b(&tmss_fock(1.0f64, c).unwrap()).unwrap();
        for n in 0..10 {
            let want = (1.0 - (-1.0f64).exp()) * (-(n as f64)).exp();
            assert!((rho.get(n, n).re - want).abs() < 1e-15);
        }
        assert!((reduced_energy(&rho) - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!((von_neumann_entropy(&rho) - 1.0406518522564083).abs() < 1e-12);
    }

    #[test]
    fn gibbs_examples() {
        let c = cut(60);
        let g = gibbs_density(2f64.ln(), c).unwrap();
        for n in 0..20 {
            assert!((g.density.get(n, n).re - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
        }
        assert!((reduced_energy(&g.density) - 1.0).abs() < 1e-12);
        assert!((g.z - g.z_infinite).abs() <= g.z_infinite * g.tail * 1.01);
        let frozen = gibbs_density(50.0f64, c).unwrap();
        assert!((frozen.density.get(0, 0).re - 1.0).abs() < 1e-20);
        assert!(gibbs_density(0.0, c).is_err());
        assert!(gibbs_density(-1.0, c).is_err());
    }

    #[test]
    fn displaced_gibbs_zero_displacement() {
        let r = displaced_gibbs_check(Complex::zero(), Complex::zero(), 1.0, cut(40)).unwrap();
        assert!(r.deviation <= 1e-12 && r.squeezed_last_deviation <= 1e-12);
    }

    #[test]
    fn displaced_gibbs_matches_and_ignores_eta() {
        let r = displaced_gibbs_check(Complex::new(0.3f64, 0.0), Complex::new(0.2, 0.0), 1.0, cut(40)).unwrap();
        assert!(r.deviation <= 1e-8, "{:e}", r.deviation);
        assert!(r.eta_spread <= 1e-10, "{:e}", r.eta_spread);
        assert!(r.squeezed_last_deviation <= 1e-8, "{:e}", r.squeezed_last_deviation);
        assert!((r.entropy - r.gibbs_entropy).abs() <= 1e-8);
        assert!((r.squeezed_last_entropy - r.gibbs_entropy).abs() <= 1e-8);
        assert!((r.energy - r.gibbs_energy - 0.09).abs() <= 1e-8);
        assert!((r.squeezed_last_energy - r.gibbs_energy - r.xi_bar.norm_sqr()).abs() <= 1e-8);
    }

    #[test]
    fn energy_ordering() {
        let (tau, c) = (1.5f64, cut(40));
        let gamma = gamma_from_tau(tau);
        let base = displaced_gibbs_check(Complex::zero(), Complex::zero(), tau, c).unwrap().energy;
        for (xi, eta) in [(0.3, 0.0), (0.0, 0.3), (0.2, -0.1)] {
            let r = displaced_gibbs_check(Complex::new(xi, 0.1), Complex::new(eta, 0.0), tau, c).unwrap();
            assert!(r.energy > base && r.squeezed_last_energy >= base);
        }
        // the squeezed-last state reaches the minimum at ξ̄ = 0 with ξ ≠ 0
        let eta = Complex::new(0.2, 0.1);
        let xi = -eta.conj() * gamma.tanh();
        let r = displaced_gibbs_check(xi, eta, tau, c).unwrap();
        assert!(r.xi_bar.norm() < 1e-15);
        assert!((r.squeezed_last_energy - base).abs() < 1e-9);
    }

    #[test]
    fn legendre_identities() {
        for tau in [0.5f64, 1.0, 2.0] {
            let s = legendre_report(tau, cut(60)).unwrap();
            assert!(s.ln_z_residual <= 1e-10 && s.free_energy_residual <= 1e-10);
            assert_eq!(s.lambda1, -tau);
        }
        let s = legendre_report(2.0f64, cut(60)).unwrap();
        assert!((s.ln_z + (1.0 - (-2.0f64).exp()).ln()).abs() < 1e-12);
        let s = legendre_report(2f64.ln(), cut(80)).unwrap();
        assert!((s.free_energy + 1.0).abs() < 1e-12);
        let s = legendre_report(50.0f64, cut(60)).unwrap();
        assert!(s.entropy.abs() < 1e-15 && s.free_energy.abs() < 1e-15);
    }

    #[test]
    fn single_precision_is_supported() {
        let c = cut(40);
        let rho = partial_trace_b(&tmss_fock(1.0f32, c).unwrap()).unwrap();
        assert!((von_neumann_entropy(&rho) - 1.040_652).abs() < 1e-4);
    }
}
