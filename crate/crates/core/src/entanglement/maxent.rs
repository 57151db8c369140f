use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{entropy_closed_form, partial_trace_b, tau_for_energy, von_neumann_entropy};
use crate::boson::{tmss_fock, FockCutoff, TwoModeState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::Real;

/// Bisection steps allowed when landing a sample on the energy shell.
pub const SHELL_ITERATIONS: usize = 200;
/// Slack on the entropy bound.
pub const BOUND_SLACK: f64 = 1e-9;
/// Largest cutoff used to evaluate the reference TMSS.
const TMSS_MAX_CUTOFF: usize = 400;

/// Outcome of [`maxent_property_check`]. The sampler corroborates the
/// maximum-entropy property on finitely many states; it is not a proof.
#[derive(Clone, Debug)]
pub struct MaxentReport<T: Real> {
    pub energy: T,
    /// Entropy of the Gibbs density at this energy, `S(τ)` with `E(τ) = energy`.
    pub bound: T,
    pub max_entropy: T,
    /// `bound − max_entropy`.
    pub gap: T,
    /// Samples with entropy above `bound + 1e-9`.
    pub violations: usize,
    pub entropies: Vec<T>,
    /// Reduced entropy of the TMSS at this energy.
    pub tmss_entropy: T,
    /// `bound − tmss_entropy`.
    pub tmss_gap: T,
    pub tmss_cutoff: usize,
}

fn reduced_energy_of<T: Real>(amps: &CMatrix<T>) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for m in 0..amps.nrows() {
        let row = (0..amps.ncols()).fold(T::zero(), |acc, n| acc + amps[(m, n)].norm_sqr());
        num += T::from_usize(m).unwrap() * row;
        den += row;
    }
    num / den
}

fn normalized<T: Real>(amps: CMatrix<T>) -> CMatrix<T> {
    let norm = amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    amps.map(|z| z.unscale(norm))
}

/// Draws a complex Gaussian two-mode vector and mixes it with the vacuum
/// (if its reduced energy is above `energy`) or with `|n_max, n_max⟩`
/// (if below), bisecting the mixing weight until the normalized result has
/// reduced energy `energy`.
pub fn sample_fixed_energy_state<T: Real>(
    energy: T,
    cutoff: FockCutoff,
    rng: &mut ChaCha8Rng,
) -> Result<TwoModeState<T>> {
    check_energy(energy, cutoff)?;
    let d = cutoff.dim();
    let random = normalized(CMatrix::<T>::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::lit(re), T::lit(im))
    }));
    let start = reduced_energy_of(&random);
    let mut anchor = linalg::zeros::<T>(d, d);
    let top = if start > energy { 0 } else { d - 1 };
    anchor[(top, top)] = Complex::new(T::one(), T::zero());
    let mix = |t: T| normalized(random.map(|z| z * (T::one() - t)) + anchor.map(|z| z * t));

    let tol = T::tol(1e-13) * energy.max(T::one());
    let end = T::from_usize(top).unwrap();
    if (end - energy).abs() <= tol {
        return TwoModeState::from_amplitudes(cutoff, anchor);
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let above_at_lo = start > energy;
    for _ in 0..SHELL_ITERATIONS {
        let mid = (lo + hi) * T::lit(0.5);
        let amps = mix(mid);
        let e = reduced_energy_of(&amps);
        if (e - energy).abs() <= tol {
            return TwoModeState::from_amplitudes(cutoff, amps);
        }
        if (e > energy) == above_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::SamplerFailed { target: energy.to_f64().unwrap_or(f64::NAN), iterations: SHELL_ITERATIONS })
}

fn check_energy<T: Real>(energy: T, cutoff: FockCutoff) -> Result<()> {
    if !(energy.is_finite() && energy >= T::zero() && energy <= T::from_usize(cutoff.n_max()).unwrap()) {
        return Err(Error::InvalidParameter {
            name: "energy",
            value: energy.to_f64().unwrap_or(f64::NAN),
            reason: "must lie in [0, n_max]",
        });
    }
    Ok(())
}

/// Samples `samples` pure states with reduced energy `energy` and checks
/// none exceeds the Gibbs entropy at that energy. The TMSS at the same
/// energy is evaluated on a cutoff large enough for its tail to vanish at
/// double precision.
pub fn maxent_property_check<T: Real>(
    energy: T,
    cutoff: FockCutoff,
    samples: usize,
    seed: u64,
) -> Result<MaxentReport<T>> {
    check_energy(energy, cutoff)?;
    if samples == 0 {
        return Err(Error::InvalidParameter { name: "samples", value: 0.0, reason: "need at least one" });
    }
    let tau = tau_for_energy(energy)?;
    let bound = if tau.is_infinite() { T::zero() } else { entropy_closed_form(tau)? };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entropies = Vec::with_capacity(samples);
    for _ in 0..samples {
        let state = sample_fixed_energy_state(energy, cutoff, &mut rng)?;
        entropies.push(von_neumann_entropy(&partial_trace_b(&state)?));
    }
    let max_entropy = entropies.iter().copied().fold(T::neg_infinity(), T::max);
    let slack = T::tol(BOUND_SLACK);
    let violations = entropies.iter().filter(|s| **s > bound + slack).count();

    let (tmss_entropy, tmss_cutoff) = if tau.is_infinite() {
        (T::zero(), cutoff.n_max())
    } else {
        let needed = (T::lit(45.0) / tau).ceil().to_usize().unwrap_or(TMSS_MAX_CUTOFF);
        let n = needed.clamp(cutoff.n_max(), TMSS_MAX_CUTOFF);
        let state = tmss_fock(tau, FockCutoff::new(n)?)?;
        (von_neumann_entropy(&partial_trace_b(&state)?), n)
    };
    Ok(MaxentReport {
        energy,
        bound,
        max_entropy,
        gap: bound - max_entropy,
        violations,
        entropies,
        tmss_entropy,
        tmss_gap: bound - tmss_entropy,
        tmss_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::reduced_energy;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn samples_land_on_the_shell() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for target in [0.25f64, 1.0, 3.0, 7.5] {
            for _ in 0..10 {
                let s = sample_fixed_energy_state(target, cut(8), &mut rng).unwrap();
                let e = reduced_energy(&partial_trace_b(&s).unwrap());
                assert!((e - target).abs() < 1e-12, "target {target}, got {e}");
            }
        }
    }

    #[test]
    fn zero_energy_is_vacuum() {
        let r = maxent_property_check(0.0f64, cut(8), 5, 1).unwrap();
        assert!(r.entropies.iter().all(|s| s.abs() < 1e-15));
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn no_sample_beats_the_gibbs_bound() {
        let r = maxent_property_check(1.0, cut(8), 200, 7).unwrap();
        assert_eq!(r.violations, 0);
        assert!((r.bound - 4f64.ln()).abs() < 1e-15);
        assert!(r.gap >= -1e-9);
        assert!(r.tmss_entropy >= 4f64.ln() - 1e-10, "{}", r.tmss_entropy);
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = maxent_property_check(1.0, cut(6), 20, 11).unwrap();
        let b = maxent_property_check(1.0, cut(6), 20, 11).unwrap();
        assert_eq!(a.entropies, b.entropies);
    }

    #[test]
    fn rejects_unreachable_energy() {
        assert!(maxent_property_check(9.0, cut(8), 5, 1).is_err());
        assert!(maxent_property_check(-1.0, cut(8), 5, 1).is_err());
        assert!(maxent_property_check(1.0, cut(8), 0, 1).is_err());
    }
}
