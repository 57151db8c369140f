use crate::boson::{tau_from_chi, FockCutoff, TwoModeState};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if tau.is_nan() || tau <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau.to_f64().unwrap_or(f64::NAN),
            reason: "must be positive",
        });
    }
    Ok(())
}

fn check_chi<T: Real>(chi: T) -> Result<()> {
    if !(chi.is_finite() && chi >= T::one()) {
        return Err(Error::InvalidParameter {
            name: "chi",
            value: chi.to_f64().unwrap_or(f64::NAN),
            reason: "must be finite and at least 1",
        });
    }
    Ok(())
}

/// `S(τ) = τ/(e^τ − 1) − ln(1 − e^{−τ})`.
pub fn entropy_closed_form<T: Real>(tau: T) -> Result<T> {
    check_tau(tau)?;
    if tau.is_infinite() {
        return Ok(T::zero());
    }
    Ok(tau / tau.exp_m1() - (-(-tau).exp_m1()).ln())
}

/// `E(τ) = 1/(e^τ − 1)`.
pub fn energy_closed_form<T: Real>(tau: T) -> Result<T> {
    check_tau(tau)?;
    Ok(T::one() / tau.exp_m1())
}

/// Inverse of [`energy_closed_form`]: `τ = ln(1 + 1/E)`, infinite at `E = 0`.
pub fn tau_for_energy<T: Real>(energy: T) -> Result<T> {
    if !(energy.is_finite() && energy >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "energy",
            value: energy.to_f64().unwrap_or(f64::NAN),
            reason: "must be finite and non-negative",
        });
    }
    if energy.is_zero() {
        return Ok(T::infinity());
    }
    Ok(energy.recip().ln_1p())
}

/// `E(χ) = (χ − 1)/2`.
pub fn energy_chi<T: Real>(chi: T) -> Result<T> {
    check_chi(chi)?;
    Ok((chi - T::one()) * T::lit(0.5))
}

/// `ΔS(χ) = S(χ) − ln χ = [(χ+1) ln(1 + 1/χ) − (χ−1) ln(1 − 1/χ)]/2 − ln 2`,
/// written without the `ln χ` cancellation and with `0 ln 0 = 0` at `χ = 1`.
pub fn delta_s_chi<T: Real>(chi: T) -> Result<T> {
    check_chi(chi)?;
    let inv = chi.recip();
    let up = (chi + T::one()) * inv.ln_1p();
    let down = if chi == T::one() { T::zero() } else { (chi - T::one()) * (-inv).ln_1p() };
    Ok((up - down) * T::lit(0.5) - T::LN_2())
}

/// `S(χ) = [(χ+1) ln(χ+1) − (χ−1) ln(χ−1)]/2 − ln 2`.
pub fn entropy_chi<T: Real>(chi: T) -> Result<T> {
    Ok(chi.ln() + delta_s_chi(chi)?)
}

/// One sample of the entropy and energy curves at parameter `χ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementCurvePoint<T: Real> {
    pub chi: T,
    pub tau: T,
    pub s: T,
    pub e: T,
    pub lnchi: T,
    /// `s − lnchi`.
    pub delta_s: T,
}

pub fn curve_chi<T: Real>(chi: T) -> Result<EntanglementCurvePoint<T>> {
    let s = entropy_chi(chi)?;
    let lnchi = chi.ln();
    Ok(EntanglementCurvePoint { chi, tau: tau_from_chi(chi), s, e: energy_chi(chi)?, lnchi, delta_s: s - lnchi })
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter { name: "N", value: n as f64, reason: "too small" });
    }
    Ok(())
}

/// `N^{−1/2} Σ_{n<N} |n⟩|n⟩`.
pub fn psi_n_state<T: Real>(n: usize, cutoff: FockCutoff) -> Result<TwoModeState<T>> {
    check_n(n, 1)?;
    if n > cutoff.dim() {
        return Err(Error::InvalidParameter { name: "N", value: n as f64, reason: "needs N − 1 ≤ n_max" });
    }
    Ok(TwoModeState::twin_fock(cutoff, &vec![T::one(); n], T::zero()))
}

/// `(E′, S′) = ((N − 1)/2, ln N)`.
pub fn psi_n_stats<T: Real>(n: usize) -> Result<(T, T)> {
    check_n(n, 1)?;
    let big_n = T::from_usize(n).unwrap();
    Ok(((big_n - T::one()) * T::lit(0.5), big_n.ln()))
}

/// Entropy excess of the TMSS over `|Ψ⟩^(N)` at equal energy: equal energy
/// forces `χ = N`, so this is `ΔS(N)`.
pub fn tmss_beats_psi_n<T: Real>(n: usize) -> Result<T> {
    check_n(n, 2)?;
    delta_s_chi(T::from_usize(n).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{partial_trace_b, reduced_energy, von_neumann_entropy};

    #[test]
    fn closed_form_values() {
        let ln2 = 2f64.ln();
        assert!((entropy_closed_form(ln2).unwrap() - 2.0 * ln2).abs() < 1e-15);
        assert!((energy_closed_form(ln2).unwrap() - 1.0).abs() < 1e-15);
        assert!((entropy_closed_form(1.0f64).unwrap() - 1.0406518522564083).abs() < 1e-15);
        assert!(entropy_closed_form(50.0).unwrap() < 1e-19);
        assert!(energy_closed_form(50.0).unwrap() < 1e-21);
        assert!(entropy_closed_form(0.0).is_err() && energy_closed_form(-1.0).is_err());
        assert!((tau_for_energy(1.0).unwrap() - ln2).abs() < 1e-15);
    }

    #[test]
    fn chi_curve_examples() {
        let p = curve_chi(1.0f64).unwrap();
        assert_eq!((p.s, p.e, p.delta_s), (0.0, 0.0, 0.0));
        assert!(p.tau.is_infinite());
        let p = curve_chi(3.0f64).unwrap();
        assert!((p.e - 1.0).abs() < 1e-15);
        assert!((p.s - 4f64.ln()).abs() < 1e-15);
        let want = 1.5 * 3f64.ln() - 2.0 * 2f64.ln();
        assert!((delta_s_chi(2.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.261624071882274).abs() < 1e-15 && (want - 0.26165).abs() < 1e-4);
        assert!(curve_chi(0.5).is_err());
    }

    #[test]
    fn chi_and_tau_forms_agree() {
        for chi in [1.01f64, 1.5, 2.0, 3.0, 10.0, 100.0, 1e4] {
            let s_tau = entropy_closed_form(tau_from_chi(chi)).unwrap();
            let s_chi: f64 = entropy_chi(chi).unwrap();
            assert!((s_tau - s_chi).abs() <= 1e-12 * s_chi.max(1.0), "chi={chi}");
            let e_tau = energy_closed_form(tau_from_chi(chi)).unwrap();
            assert!((e_tau - energy_chi::<f64>(chi).unwrap()).abs() <= 1e-12 * e_tau.max(1.0));
        }
    }

    #[test]
    fn asymptote_and_positivity() {
        let big = tmss_beats_psi_n::<f64>(1_000_000).unwrap();
        assert!((big - (1.0 - 2f64.ln())).abs() < 1e-5);
        for n in 2..=100 {
            let d = tmss_beats_psi_n::<f64>(n).unwrap();
            assert!(d > 0.0 && d < 1.0 - 2f64.ln(), "N={n}");
        }
        assert!(tmss_beats_psi_n::<f64>(1).is_err());
    }

    #[test]
    fn psi_n_family() {
        let c = FockCutoff::new(8).unwrap();
        assert!(psi_n_state::<f64>(0, c).is_err());
        assert!(psi_n_state::<f64>(10, c).is_err());
        let one = psi_n_state::<f64>(1, c).unwrap();
        assert_eq!(one.amplitude(0, 0).re, 1.0);
        assert_eq!(psi_n_stats::<f64>(1).unwrap(), (0.0, 0.0));
        let (e, s) = psi_n_stats::<f64>(2).unwrap();
        assert_eq!((e, s), (0.5, 2f64.ln()));
        let rho = partial_trace_b(&psi_n_state::<f64>(4, c).unwrap()).unwrap();
        assert!((von_neumann_entropy(&rho) - 4f64.ln()).abs() < 1e-14);
        assert!((reduced_energy(&rho) - 1.5).abs() < 1e-14);
    }
}
