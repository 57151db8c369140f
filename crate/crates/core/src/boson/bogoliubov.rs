use num_complex::Complex;
use num_traits::{One, Zero};

use super::state::{cs_state, squeeze_state};
use super::{check_gamma, squeeze_columns, FockCutoff, SparseState, TwoModeState};
use crate::error::{Error, Result};
use crate::scalar::{cx, Real};

/// Displacements of mode a (`ξ`) and mode b (`η`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacementParams<T: Real> {
    pub xi: Complex<T>,
    pub eta: Complex<T>,
}

impl<T: Real> DisplacementParams<T> {
    pub fn new(xi: Complex<T>, eta: Complex<T>) -> Self {
        Self { xi, eta }
    }

    pub fn zero() -> Self {
        Self { xi: Complex::zero(), eta: Complex::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, z) in [("xi", self.xi), ("eta", self.eta)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: z.norm().to_f64().unwrap_or(f64::NAN),
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatisticsKind {
    Boson,
    Fermion,
}

/// 2×2 matrix acting on `(ξ, η*)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BogoliubovMatrix<T: Real> {
    pub entries: [[T; 2]; 2],
    pub kind: StatisticsKind,
}

impl<T: Real> BogoliubovMatrix<T> {
    pub fn det(&self) -> T {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn apply(&self, x: Complex<T>, y: Complex<T>) -> (Complex<T>, Complex<T>) {
        let e = &self.entries;
        (x * e[0][0] + y * e[0][1], x * e[1][0] + y * e[1][1])
    }
}

/// Boson: `[[cosh γ, −sinh γ], [−sinh γ, cosh γ]]`;
/// fermion: `[[cos γ, sin γ], [−sin γ, cos γ]]`.
pub fn bogoliubov_matrix<T: Real>(gamma: T, kind: StatisticsKind) -> BogoliubovMatrix<T> {
    let entries = match kind {
        StatisticsKind::Boson => {
            let (u, v) = (gamma.cosh(), gamma.sinh());
            [[u, -v], [-v, u]]
        }
        StatisticsKind::Fermion => {
            let (u, v) = (gamma.cos(), gamma.sin());
            [[u, v], [-v, u]]
        }
    };
    BogoliubovMatrix { entries, kind }
}

/// `(ξ̄, η̄*)ᵀ = B(γ) (ξ, η*)ᵀ`; the second output is conjugated back so the
/// result holds `η̄` itself.
pub fn bogoliubov_transform_params<T: Real>(
    params: DisplacementParams<T>,
    gamma: T,
    kind: StatisticsKind,
) -> DisplacementParams<T> {
    let (xi_bar, eta_bar_conj) = bogoliubov_matrix(gamma, kind).apply(params.xi, params.eta.conj());
    DisplacementParams { xi: xi_bar, eta: eta_bar_conj.conj() }
}

/// Result of comparing the two orderings of squeezing and displacement.
#[derive(Clone, Copy, Debug)]
pub struct CsOrderingReport<T: Real> {
    /// `S D(ξ) D(η)|0⟩` vs `D(ξ̄) D(η̄) S|0⟩` with `(ξ̄, η̄*) = B_B(γ)(ξ, η*)`.
    pub forward_deviation: T,
    /// Same comparison with `(ξ̄, η̄*) = B_B(γ)⁻¹ (ξ, η*) = B_B(−γ)(ξ, η*)`.
    pub inverse_deviation: T,
}

/// Builds `S_ab(γ) D_a(ξ) D_b(η)|0⟩` and `D_a(ξ̄) D_b(η̄) S_ab(γ)|0⟩` for
/// both the forward and the inverse Bogoliubov map and reports the largest
/// amplitude deviation on the safe subspace.
///
/// With `S = exp[γ(a†b† − ab)]` one has `S a S† = u a − v b†`, which turns
/// `S D(ξ)D(η) S†` into `D(uξ + vη*) D(uη + vξ*)`: the displaced-last
/// parameters are the inverse map of `(ξ, η*)`.
pub fn cs_ordering_check<T: Real>(
    params: DisplacementParams<T>,
    gamma: T,
    cutoff: FockCutoff,
) -> Result<CsOrderingReport<T>> {
    let lhs = cs_state(params, gamma, cutoff)?;
    let squeezed_vacuum = squeeze_state(&TwoModeState::vacuum(cutoff), gamma)?;
    let safe = cutoff.safe_max();
    let deviation = |p: DisplacementParams<T>| -> Result<T> {
        let rhs = squeezed_vacuum.displace(p)?;
        let mut worst = T::zero();
        for i in 0..=safe {
            for j in 0..=safe {
                worst = worst.max((lhs.amplitude(i, j) - rhs.amplitude(i, j)).norm());
            }
        }
        Ok(worst)
    };
    Ok(CsOrderingReport {
        forward_deviation: deviation(bogoliubov_transform_params(params, gamma, StatisticsKind::Boson))?,
        inverse_deviation: deviation(bogoliubov_transform_params(params, -gamma, StatisticsKind::Boson))?,
    })
}

/// Residuals of the squeezing Bogoliubov relations on the safe subspace.
#[derive(Clone, Copy, Debug)]
pub struct BogoliubovReport<T: Real> {
    /// `max |S a S† − (u a − v b†)|`.
    pub a_deviation: T,
    /// `max |S b S† − (u b − v a†)|`.
    pub b_deviation: T,
    /// Worst of `[a(γ), a(γ)†] − 1`, `[b(γ), b(γ)†] − 1`, `[a(γ), b(γ)]`.
    pub canonical_deviation: T,
    pub safe_max: usize,
}

/// Checks `S a S† = u a − v b†`, `S b S† = u b − v a†` and that the
/// transformed operators keep the canonical commutators, on the block of
/// occupations `≤ n_max / 2`.
///
/// Matrix elements are evaluated as `⟨i|S X S†|j⟩ = ⟨S†i| X |S†j⟩` with
/// `S†|j⟩` from the padded sector exponential and ladder operators acting
/// without truncation, so the result reflects the exact operator rather
/// than artifacts of a hard cutoff.
pub fn bogoliubov_operator_check<T: Real>(gamma: T, cutoff: FockCutoff) -> Result<BogoliubovReport<T>> {
    check_gamma(gamma)?;
    let safe = cutoff.safe_max();
    let states: Vec<(usize, usize)> = (0..=safe).flat_map(|i| (0..=safe).map(move |j| (i, j))).collect();
    let pulled_back = squeeze_columns(-gamma, &states)?;
    let units: Vec<SparseState<T>> = states.iter().map(|&k| SparseState::from([(k, Complex::one())])).collect();
    let (u, v) = (cx(gamma.cosh()), cx(gamma.sinh()));

    let mut report = BogoliubovReport {
        a_deviation: T::zero(),
        b_deviation: T::zero(),
        canonical_deviation: T::zero(),
        safe_max: safe,
    };
    let one = Complex::one();
    for (j, wj) in pulled_back.iter().enumerate() {
        let a_exp = sparse::combine(u, &sparse::lower(&units[j], 0), -v, &sparse::raise(&units[j], 1));
        let b_exp = sparse::combine(u, &sparse::lower(&units[j], 1), -v, &sparse::raise(&units[j], 0));
        let a_wj = sparse::lower(wj, 0);
        let b_wj = sparse::lower(wj, 1);
        let ccr = |mode: usize| {
            let x = sparse::lower(&sparse::raise(wj, mode), mode);
            let y = sparse::raise(&sparse::lower(wj, mode), mode);
            sparse::combine(one, &x, -one, &y)
        };
        let (ccr_a, ccr_b) = (ccr(0), ccr(1));
        let ab = sparse::combine(one, &sparse::lower(&b_wj, 0), -one, &sparse::lower(&a_wj, 1));

        for (i, wi) in pulled_back.iter().enumerate() {
            let a_got = sparse::inner(wi, &a_wj);
            let b_got = sparse::inner(wi, &b_wj);
            report.a_deviation = report.a_deviation.max((a_got - sparse::inner(&units[i], &a_exp)).norm());
            report.b_deviation = report.b_deviation.max((b_got - sparse::inner(&units[i], &b_exp)).norm());

            let delta = cx(if i == j { T::one() } else { T::zero() });
            let worst = (sparse::inner(wi, &ccr_a) - delta)
                .norm()
                .max((sparse::inner(wi, &ccr_b) - delta).norm())
                .max(sparse::inner(wi, &ab).norm());
            report.canonical_deviation = report.canonical_deviation.max(worst);
        }
    }
    Ok(report)
}

/// Untruncated ladder action on finitely supported two-mode vectors.
mod sparse {
    use num_complex::Complex;
    use num_traits::Zero;

    use crate::boson::SparseState;
    use crate::scalar::Real;

    fn bump(k: (usize, usize), mode: usize, up: bool) -> Option<((usize, usize), usize)> {
        let n = if mode == 0 { k.0 } else { k.1 };
        let m = if up { n + 1 } else { n.checked_sub(1)? };
        let target = if mode == 0 { (m, k.1) } else { (k.0, m) };
        Some((target, n.max(m)))
    }

    fn ladder<T: Real>(v: &SparseState<T>, mode: usize, up: bool) -> SparseState<T> {
        v.iter()
            .filter_map(|(&k, &z)| {
                let (target, top) = bump(k, mode, up)?;
                Some((target, z * T::from_usize(top).unwrap().sqrt()))
            })
            .collect()
    }

    pub fn lower<T: Real>(v: &SparseState<T>, mode: usize) -> SparseState<T> {
        ladder(v, mode, false)
    }

    pub fn raise<T: Real>(v: &SparseState<T>, mode: usize) -> SparseState<T> {
        ladder(v, mode, true)
    }

    pub fn combine<T: Real>(x: Complex<T>, v: &SparseState<T>, y: Complex<T>, w: &SparseState<T>) -> SparseState<T> {
        let mut out: SparseState<T> = v.iter().map(|(&k, &z)| (k, z * x)).collect();
        for (&k, &z) in w {
            *out.entry(k).or_insert_with(Complex::zero) += z * y;
        }
        out
    }

    /// `⟨v|w⟩`.
    pub fn inner<T: Real>(v: &SparseState<T>, w: &SparseState<T>) -> Complex<T> {
        v.iter().filter_map(|(k, z)| w.get(k).map(|x| z.conj() * x)).fold(Complex::zero(), |a, b| a + b)
    }
}
