use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::{
    check_gamma, displacement_operator, squeeze_column, squeeze_sectors, DisplacementParams, FockCutoff, ModeOperator,
    Modes, TAIL_WARN,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{cx, Real};

/// Tolerance on Σ|c|² for states flagged normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Pure state on the truncated two-mode space, stored as the amplitude grid
/// `c[n_a][n_b]`.
#[derive(Clone, Debug)]
pub struct TwoModeState<T: Real> {
    cutoff: FockCutoff,
    amps: CMatrix<T>,
    tail: T,
    normalized: bool,
}

impl<T: Real> TwoModeState<T> {
    /// Wraps a normalized amplitude grid.
    pub fn from_amplitudes(cutoff: FockCutoff, amps: CMatrix<T>) -> Result<Self> {
        let s = Self::unnormalized(cutoff, amps)?;
        let n = s.norm_sqr();
        if (n - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: n.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { normalized: true, ..s })
    }

    /// Wraps an amplitude grid without a norm check; the state is flagged
    /// unnormalized.
    pub fn unnormalized(cutoff: FockCutoff, amps: CMatrix<T>) -> Result<Self> {
        let d = cutoff.dim();
        if amps.nrows() != d || amps.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: amps.nrows() });
        }
        if !linalg::is_finite(&amps) {
            return Err(Error::InvalidParameter { name: "amplitudes", value: f64::NAN, reason: "non-finite entry" });
        }
        Ok(Self { cutoff, amps, tail: T::zero(), normalized: false })
    }

    pub fn vacuum(cutoff: FockCutoff) -> Self {
        let mut amps = linalg::zeros::<T>(cutoff.dim(), cutoff.dim());
        amps[(0, 0)] = Complex::one();
        Self { cutoff, amps, tail: T::zero(), normalized: true }
    }

    /// Twin-Fock superposition `Σ_n w_n |n⟩|n⟩`, rescaled to unit norm.
    /// `tail` is the weight the caller knows was dropped before rescaling.
    pub(crate) fn twin_fock(cutoff: FockCutoff, weights: &[T], tail: T) -> Self {
        let d = cutoff.dim();
        let norm = weights.iter().fold(T::zero(), |acc, w| acc + *w * *w).sqrt();
        let mut amps = linalg::zeros::<T>(d, d);
        for (n, w) in weights.iter().enumerate().take(d) {
            amps[(n, n)] = cx(*w / norm);
        }
        Self { cutoff, amps, tail, normalized: true }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &CMatrix<T> {
        &self.amps
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex<T> {
        self.amps[(n_a, n_b)]
    }

    /// Probability weight discarded by truncation before renormalization.
    pub fn tail(&self) -> T {
        self.tail
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Amplitudes before renormalization over the truncated space, i.e. the
    /// exact infinite-space amplitudes of the retained components.
    pub fn unrenormalized(&self) -> CMatrix<T> {
        linalg::scale(&self.amps, cx((T::one() - self.tail).sqrt()))
    }

    /// Flat vector in the product basis, index `n_a * dim + n_b`.
    pub fn to_vector(&self) -> Vec<Complex<T>> {
        let d = self.cutoff.dim();
        (0..d * d).map(|i| self.amps[(i / d, i % d)]).collect()
    }

    pub fn apply(&self, op: &ModeOperator<T>) -> Result<Self> {
        if op.cutoff() != self.cutoff || op.modes() != Modes::Two {
            return Err(Error::DimensionMismatch { expected: self.cutoff.dim().pow(2), found: op.dim() });
        }
        let d = self.cutoff.dim();
        let v = nalgebra::DVector::from_vec(self.to_vector());
        let w = op.matrix() * v;
        let amps = DMatrix::from_fn(d, d, |i, j| w[i * d + j]);
        Ok(Self { amps, ..self.clone() })
    }

    /// `D_a(ξ) ⊗ D_b(η)` applied to the state.
    pub fn displace(&self, params: DisplacementParams<T>) -> Result<Self> {
        let da = displacement_operator(params.xi, self.cutoff)?;
        let db = displacement_operator(params.eta, self.cutoff)?;
        let amps = da.matrix() * &self.amps * db.matrix().transpose();
        Ok(Self { amps, tail: self.tail + da.tail() + db.tail(), ..self.clone() })
    }

    /// Largest amplitude difference on the indices both states retain.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let d = self.cutoff.dim().min(other.cutoff.dim());
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.amps[(i, j)] - other.amps[(i, j)]).norm());
            }
        }
        worst
    }

    /// Largest off-diagonal amplitude `|c[m][n]|`, `m ≠ n`.
    pub fn off_diagonal_max(&self) -> T {
        let d = self.cutoff.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.amps[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Weight resident in the top quarter of either mode's occupations; a
    /// leakage indicator for constructions without a closed-form tail.
    pub fn edge_weight(&self) -> T {
        let d = self.cutoff.dim();
        let edge = 3 * self.cutoff.n_max() / 4;
        let mut w = T::zero();
        for i in 0..d {
            for j in 0..d {
                if i > edge || j > edge {
                    w += self.amps[(i, j)].norm_sqr();
                }
            }
        }
        w
    }

    // Ladder actions on the grid.

    pub(crate) fn lower_a(&self) -> CMatrix<T> {
        let d = self.cutoff.dim();
        DMatrix::from_fn(d, d, |m, n| {
            if m + 1 < d {
                self.amps[(m + 1, n)] * T::from_usize(m + 1).unwrap().sqrt()
            } else {
                Complex::zero()
            }
        })
    }

    pub(crate) fn lower_b(&self) -> CMatrix<T> {
        Self { amps: self.amps.transpose(), ..self.clone() }.lower_a().transpose()
    }

    pub(crate) fn raise_a(&self) -> CMatrix<T> {
        let d = self.cutoff.dim();
        DMatrix::from_fn(d, d, |m, n| {
            if m > 0 {
                self.amps[(m - 1, n)] * T::from_usize(m).unwrap().sqrt()
            } else {
                Complex::zero()
            }
        })
    }

    pub(crate) fn raise_b(&self) -> CMatrix<T> {
        Self { amps: self.amps.transpose(), ..self.clone() }.raise_a().transpose()
    }
}

/// `|γ⟩ = (1/cosh γ) exp[(tanh γ) a†b†] |0⟩`, i.e. `c[n][n] = tanh^n γ / cosh γ`,
/// renormalized over the retained twin-Fock levels. The discarded weight
/// is `tanh^{2(n_max+1)} γ`.
pub fn tmss_bch<T: Real>(gamma: T, cutoff: FockCutoff) -> Result<TwoModeState<T>> {
    check_gamma(gamma)?;
    let t = gamma.tanh();
    let c0 = T::one() / gamma.cosh();
    let weights: Vec<T> = (0..cutoff.dim()).map(|n| c0 * t.powi(n as i32)).collect();
    let tail = t.powi(2 * cutoff.dim() as i32);
    if tail > T::lit(TAIL_WARN) {
        warn!("tmss_bch: gamma={gamma} leaves tail {tail:e} beyond n_max={}", cutoff.n_max());
    }
    Ok(TwoModeState::twin_fock(cutoff, &weights, tail))
}

/// `|γ⟩ = Z(τ)^{-1/2} Σ_n e^{-τn/2} |n⟩|n⟩` with `Z(τ) = (1 − e^{-τ})^{-1}`.
/// `τ = ∞` gives the vacuum.
pub fn tmss_fock<T: Real>(tau: T, cutoff: FockCutoff) -> Result<TwoModeState<T>> {
    if tau.is_nan() || tau <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau.to_f64().unwrap_or(f64::NAN),
            reason: "must be positive (tau = 0 is infinite squeezing)",
        });
    }
    if tau.is_infinite() {
        return Ok(TwoModeState::vacuum(cutoff));
    }
    let inv_sqrt_z = (-(-tau).exp_m1()).sqrt();
    let weights: Vec<T> =
        (0..cutoff.dim()).map(|n| inv_sqrt_z * (-tau * T::from_usize(n).unwrap() / T::lit(2.0)).exp()).collect();
    let tail = (-tau * T::from_usize(cutoff.dim()).unwrap()).exp();
    if tail > T::lit(TAIL_WARN) {
        warn!("tmss_fock: tau={tau} leaves tail {tail:e} beyond n_max={}", cutoff.n_max());
    }
    Ok(TwoModeState::twin_fock(cutoff, &weights, tail))
}

/// `S_ab(γ)|0⟩` by numerically exponentiating the generator on the vacuum
/// sector `{|n, n⟩}`, padded beyond `n_max` until converged (see
/// [`squeeze_column`]). The result is restricted to `n ≤ n_max`,
/// renormalized, and the discarded weight is reported as the tail.
pub fn tmss_expm<T: Real>(gamma: T, cutoff: FockCutoff) -> Result<TwoModeState<T>> {
    check_gamma(gamma)?;
    let column = squeeze_column(gamma, 0, 0)?;
    let d = cutoff.dim();
    let mut amps = linalg::zeros::<T>(d, d);
    let mut tail = T::zero();
    for (&(n_a, n_b), &z) in &column {
        if n_a < d && n_b < d {
            amps[(n_a, n_b)] = z;
        } else {
            tail += z.norm_sqr();
        }
    }
    let norm = amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    amps.iter_mut().for_each(|z| *z = z.unscale(norm));
    if tail > T::lit(TAIL_WARN) {
        warn!("tmss_expm: gamma={gamma} leaves tail {tail:e} beyond n_max={}", cutoff.n_max());
    }
    Ok(TwoModeState { cutoff, amps, tail, normalized: true })
}

/// Applies the truncated `S_ab(γ)` to a state sector by sector.
pub(crate) fn squeeze_state<T: Real>(state: &TwoModeState<T>, gamma: T) -> Result<TwoModeState<T>> {
    check_gamma(gamma)?;
    let mut out = linalg::zeros::<T>(state.cutoff.dim(), state.cutoff.dim());
    for sector in squeeze_sectors(gamma, state.cutoff) {
        for (r, &(ra, rb)) in sector.basis.iter().enumerate() {
            let mut acc = Complex::zero();
            for (c, &(ca, cb)) in sector.basis.iter().enumerate() {
                acc += sector.block[(r, c)] * state.amps[(ca, cb)];
            }
            out[(ra, rb)] = acc;
        }
    }
    Ok(TwoModeState { amps: out, ..state.clone() })
}

/// Caves-Schumaker state `S_ab(γ) D_a(ξ) D_b(η) |0⟩`.
pub fn cs_state<T: Real>(params: DisplacementParams<T>, gamma: T, cutoff: FockCutoff) -> Result<TwoModeState<T>> {
    params.validate()?;
    let displaced = TwoModeState::vacuum(cutoff).displace(params)?;
    let mut out = squeeze_state(&displaced, gamma)?;
    out.tail += out.edge_weight();
    if out.tail > T::lit(1e-8) {
        warn!("cs_state: truncation tail {:e} at n_max={}", out.tail, cutoff.n_max());
    }
    Ok(out)
}

/// Norm of `a(γ)|ψ⟩` and `b(γ)|ψ⟩` with `a(γ) = u a − v b†`,
/// `b(γ) = u b − v a†`, restricted to the safe subspace; returns the larger.
pub fn annihilation_residual<T: Real>(state: &TwoModeState<T>, gamma: T) -> T {
    let (u, v) = (cx(gamma.cosh()), cx(gamma.sinh()));
    let ag = linalg::scale(&state.lower_a(), u) - linalg::scale(&state.raise_b(), v);
    let bg = linalg::scale(&state.lower_b(), u) - linalg::scale(&state.raise_a(), v);
    let safe = state.cutoff.safe_max();
    let restricted_norm = |m: &CMatrix<T>| {
        let mut s = T::zero();
        for i in 0..=safe {
            for j in 0..=safe {
                s += m[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };
    restricted_norm(&ag).max(restricted_norm(&bg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::squeeze_blockwise;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn normalization_is_checked() {
        let c = cut(2);
        let mut amps = linalg::zeros::<f64>(3, 3);
        amps[(0, 0)] = cx(0.9);
        assert!(matches!(TwoModeState::from_amplitudes(c, amps.clone()), Err(Error::NotNormalized { .. })));
        let s = TwoModeState::unnormalized(c, amps).unwrap();
        assert!(!s.is_normalized());
        assert!(TwoModeState::unnormalized(c, linalg::zeros::<f64>(2, 2)).is_err());
    }

    #[test]
    fn bch_zero_squeeze_is_vacuum() {
        let s = tmss_bch(0.0_f64, cut(10)).unwrap();
        assert_eq!(s.amplitude(0, 0), cx(1.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.tail(), 0.0);
    }

    #[test]
    fn bch_geometric_amplitudes_at_tau_ln2() {
        let tau = 2.0_f64.ln();
        let gamma = (-tau / 2.0).exp().atanh();
        let s = tmss_bch(gamma, cut(60)).unwrap();
        let c0 = s.amplitude(0, 0).re;
        for n in 1..20 {
            let ratio = s.amplitude(n, n).re / c0;
            assert!((ratio - 2.0_f64.powf(-(n as f64) / 2.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn fock_route_zero_squeeze_limit() {
        let s = tmss_fock(50.0_f64, cut(20)).unwrap();
        assert!((s.amplitude(0, 0).re - 1.0).abs() < 1e-10);
        assert!(s.amplitude(1, 1).norm() < 1e-10);
        let inf = tmss_fock(f64::INFINITY, cut(20)).unwrap();
        assert_eq!(inf.amplitude(0, 0), cx(1.0));
    }

    #[test]
    fn fock_route_probabilities_at_tau_ln2() {
        let s = tmss_fock(2.0_f64.ln(), cut(60)).unwrap();
        for n in 0..30 {
            let p = s.amplitude(n, n).norm_sqr();
            assert!((p - 0.5_f64.powi(n as i32 + 1)).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn fock_route_rejects_nonpositive_tau() {
        assert!(tmss_fock(0.0_f64, cut(5)).is_err());
        assert!(tmss_fock(-1.0_f64, cut(5)).is_err());
        assert!(tmss_fock(f64::NAN, cut(5)).is_err());
    }

    #[test]
    fn fock_and_bch_routes_agree() {
        let tau = 1.0_f64;
        let gamma = (-tau / 2.0).exp().atanh();
        let f = tmss_fock(tau, cut(60)).unwrap();
        let b = tmss_bch(gamma, cut(60)).unwrap();
        assert!(f.max_abs_diff(&b) < 1e-12);
        assert!(linalg::max_abs_diff(&f.unrenormalized(), &b.unrenormalized()) < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_is_annihilated() {
        let gamma = 0.9_f64;
        let s = tmss_bch(gamma, cut(60)).unwrap();
        assert!(annihilation_residual(&s, gamma) <= 1e-8);
        assert!(s.off_diagonal_max() == 0.0);
    }

    #[test]
    fn sector_application_matches_dense_operator() {
        let c = cut(8);
        let start = TwoModeState::vacuum(c).displace(DisplacementParams::new(cx(0.3), Complex::new(0.0, 0.2))).unwrap();
        let dense = start.apply(&squeeze_blockwise(0.6_f64, c).unwrap()).unwrap();
        let sectors = squeeze_state(&start, 0.6).unwrap();
        assert!(dense.max_abs_diff(&sectors) < 1e-13);
    }

    #[test]
    fn cs_state_zero_displacement_is_tmss() {
        let c = cut(40);
        let cs = cs_state(DisplacementParams::zero(), 0.5_f64, c).unwrap();
        let t = tmss_bch(0.5_f64, c).unwrap();
        assert!(cs.max_abs_diff(&t) < 1e-10);
    }

    #[test]
    fn cs_state_without_squeezing_is_product_of_coherent_states() {
        let c = cut(30);
        let (xi, eta) = (cx(0.3_f64), Complex::new(0.0, 0.2));
        let cs = cs_state(DisplacementParams::new(xi, eta), 0.0, c).unwrap();
        let coherent = |z: Complex<f64>, n: usize| {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            z.powu(n as u32) * (-z.norm_sqr() / 2.0).exp() / fact.sqrt()
        };
        for m in 0..8 {
            for n in 0..8 {
                let want = coherent(xi, m) * coherent(eta, n);
                assert!((cs.amplitude(m, n) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn three_routes_agree() {
        let c = cut(12);
        for g in [0.1_f64, 0.3, 0.7, 1.0] {
            let bch = tmss_bch(g, c).unwrap();
            let fock = tmss_fock(-2.0 * g.tanh().ln(), c).unwrap();
            let expm = tmss_expm(g, c).unwrap();
            assert!(expm.max_abs_diff(&bch) <= 1e-9, "gamma={g}");
            assert!(expm.max_abs_diff(&fock) <= 1e-9, "gamma={g}");
            assert!((expm.tail() - bch.tail()).abs() <= 1e-12);
        }
    }

    #[test]
    fn expm_route_rejects_negative_gamma() {
        assert!(tmss_expm(-0.2_f64, cut(4)).is_err());
    }
}
