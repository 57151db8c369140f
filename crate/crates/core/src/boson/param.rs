use crate::error::{Error, Result};
use crate::scalar::Real;

/// The equivalent squeeze parameters `γ`, `τ`, `χ`, linked by
/// `tanh γ = e^{−τ/2}` and `χ = coth(τ/2) = cosh 2γ`.
///
/// The unsqueezed limit `γ = 0` maps to `τ = ∞`, `χ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeParametrization<T: Real> {
    pub gamma: T,
    pub tau: T,
    pub chi: T,
}

impl<T: Real> SqueezeParametrization<T> {
    pub fn from_gamma(gamma: T) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= T::zero()) {
            return Err(invalid("gamma", gamma, "must be finite and non-negative"));
        }
        let tau = tau_from_gamma(gamma);
        Ok(Self { gamma, tau, chi: chi_from_tau(tau) })
    }

    pub fn from_tau(tau: T) -> Result<Self> {
        if tau.is_nan() || tau <= T::zero() {
            return Err(invalid("tau", tau, "must be positive"));
        }
        Ok(Self { gamma: gamma_from_tau(tau), tau, chi: chi_from_tau(tau) })
    }

    pub fn from_chi(chi: T) -> Result<Self> {
        if !(chi.is_finite() && chi >= T::one()) {
            return Err(invalid("chi", chi, "must be finite and at least 1"));
        }
        let tau = tau_from_chi(chi);
        Ok(Self { gamma: gamma_from_tau(tau), tau, chi })
    }

    /// `u(γ) = cosh γ`.
    pub fn u(&self) -> T {
        self.gamma.cosh()
    }

    /// `v(γ) = sinh γ`.
    pub fn v(&self) -> T {
        self.gamma.sinh()
    }
}

fn invalid<T: Real>(name: &'static str, value: T, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value: value.to_f64().unwrap_or(f64::NAN), reason }
}

/// `τ = −2 ln tanh γ`, evaluated through `e^{−2γ}` so large `γ` keeps its
/// relative precision.
pub fn tau_from_gamma<T: Real>(gamma: T) -> T {
    if gamma.is_zero() {
        return T::infinity();
    }
    let q = (-(gamma + gamma)).exp();
    T::lit(2.0) * (q.ln_1p() - (-q).ln_1p())
}

/// `γ = atanh e^{−τ/2}`, with `1 − e^{−τ/2}` taken from `expm1`.
pub fn gamma_from_tau<T: Real>(tau: T) -> T {
    if tau.is_infinite() {
        return T::zero();
    }
    let half = T::lit(0.5);
    let x = (-tau * half).exp();
    half * (x.ln_1p() - (-(-tau * half).exp_m1()).ln())
}

/// `χ = coth(τ/2)`.
pub fn chi_from_tau<T: Real>(tau: T) -> T {
    if tau.is_infinite() {
        return T::one();
    }
    T::one() / (tau * T::lit(0.5)).tanh()
}

/// `τ = ln(χ + 1) − ln(χ − 1)`; infinite at `χ = 1`.
pub fn tau_from_chi<T: Real>(chi: T) -> T {
    if chi == T::one() {
        return T::infinity();
    }
    (T::lit(2.0) / (chi - T::one())).ln_1p()
}
