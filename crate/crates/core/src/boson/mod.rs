//! Truncated two-mode bosonic Fock space.
//!
//! Single-mode operators live on `{|0⟩, …, |n_max⟩}`; two-mode operators on
//! the product space with flat index `n_a * dim + n_b`.

mod bogoliubov;
mod param;
mod state;

pub use bogoliubov::{
    bogoliubov_matrix, bogoliubov_operator_check, bogoliubov_transform_params, cs_ordering_check, BogoliubovMatrix,
    BogoliubovReport, CsOrderingReport, DisplacementParams, StatisticsKind,
};
pub use param::{chi_from_tau, gamma_from_tau, tau_from_chi, tau_from_gamma, SqueezeParametrization};
pub use state::{annihilation_residual, cs_state, tmss_bch, tmss_expm, tmss_fock, TwoModeState};

use std::collections::BTreeMap;

use log::warn;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{cx, Real};

/// Default cutoff for state construction.
pub const DEFAULT_STATE_CUTOFF: usize = 60;
/// Default cutoff for dense two-mode exponentials.
pub const DEFAULT_EXPM_CUTOFF: usize = 12;
/// Largest two-mode dimension `squeeze_expm` will exponentiate densely.
pub const EXPM_DIM_CAP: usize = 441;
/// Truncation weight above which constructors log a warning.
pub const TAIL_WARN: f64 = 1e-10;

/// Highest occupation number kept per mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockCutoff {
    n_max: usize,
}

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(self) -> usize {
        self.n_max
    }

    /// Single-mode dimension.
    pub fn dim(self) -> usize {
        self.n_max + 1
    }

    /// Highest occupation of the subspace on which operator identities are
    /// compared against their infinite-dimensional form.
    pub fn safe_max(self) -> usize {
        self.n_max / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modes {
    One,
    Two,
}

/// Dense operator on one mode or on the two-mode product space.
#[derive(Clone, Debug)]
pub struct ModeOperator<T: Real> {
    cutoff: FockCutoff,
    modes: Modes,
    matrix: CMatrix<T>,
    tail: T,
}

impl<T: Real> ModeOperator<T> {
    pub fn from_matrix(cutoff: FockCutoff, modes: Modes, matrix: CMatrix<T>) -> Result<Self> {
        let d = match modes {
            Modes::One => cutoff.dim(),
            Modes::Two => cutoff.dim() * cutoff.dim(),
        };
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.nrows() });
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::InvalidParameter { name: "matrix", value: f64::NAN, reason: "non-finite entry" });
        }
        Ok(Self { cutoff, modes, matrix, tail: T::zero() })
    }

    pub fn identity(cutoff: FockCutoff, modes: Modes) -> Self {
        let d = match modes {
            Modes::One => cutoff.dim(),
            Modes::Two => cutoff.dim() * cutoff.dim(),
        };
        Self { cutoff, modes, matrix: linalg::identity(d), tail: T::zero() }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// Probability weight estimated to be lost to truncation when the
    /// operator was built (zero for exact constructions).
    pub fn tail(&self) -> T {
        self.tail
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff || self.modes != other.modes {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.with_matrix(&self.matrix * &other.matrix);
        out.tail = self.tail + other.tail;
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.with_matrix(&self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.with_matrix(&self.matrix - &other.matrix))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.with_matrix(linalg::scale(&self.matrix, s))
    }

    pub fn dagger(&self) -> Self {
        self.with_matrix(linalg::adjoint(&self.matrix))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Lifts a single-mode operator onto mode a of the product space.
    pub fn on_mode_a(&self) -> Self {
        assert_eq!(self.modes, Modes::One, "already a two-mode operator");
        let id = linalg::identity(self.cutoff.dim());
        Self { modes: Modes::Two, ..self.with_matrix(linalg::kron(&self.matrix, &id)) }
    }

    /// Lifts a single-mode operator onto mode b of the product space.
    pub fn on_mode_b(&self) -> Self {
        assert_eq!(self.modes, Modes::One, "already a two-mode operator");
        let id = linalg::identity(self.cutoff.dim());
        Self { modes: Modes::Two, ..self.with_matrix(linalg::kron(&id, &self.matrix)) }
    }

    /// Largest deviation from `self† self = 1` on basis states whose
    /// occupations are all at most `safe_max`.
    pub fn unitarity_deviation(&self, safe_max: usize) -> T {
        let prod = &linalg::adjoint(&self.matrix) * &self.matrix;
        let id = linalg::identity::<T>(self.dim());
        self.restricted_max_diff(&prod, &id, safe_max)
    }

    /// Maximum entry deviation between two matrices on this operator's
    /// space, restricted to rows and columns inside the safe subspace.
    pub fn restricted_max_diff(&self, a: &CMatrix<T>, b: &CMatrix<T>, safe_max: usize) -> T {
        let safe = self.safe_indices(safe_max);
        let mut worst = T::zero();
        for &i in &safe {
            for &j in &safe {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        worst
    }

    /// Flat indices of basis states with every occupation `≤ safe_max`.
    pub fn safe_indices(&self, safe_max: usize) -> Vec<usize> {
        let d = self.cutoff.dim();
        match self.modes {
            Modes::One => (0..d.min(safe_max + 1)).collect(),
            Modes::Two => (0..d * d).filter(|i| i / d <= safe_max && i % d <= safe_max).collect(),
        }
    }

    fn with_matrix(&self, matrix: CMatrix<T>) -> Self {
        Self { cutoff: self.cutoff, modes: self.modes, matrix, tail: self.tail }
    }
}

/// Annihilation and creation matrices: `a|n⟩ = √n |n−1⟩`.
pub fn make_ladder<T: Real>(cutoff: FockCutoff) -> (ModeOperator<T>, ModeOperator<T>) {
    let d = cutoff.dim();
    let mut a = linalg::zeros::<T>(d, d);
    for n in 1..d {
        a[(n - 1, n)] = cx(T::from_usize(n).unwrap().sqrt());
    }
    let a = ModeOperator { cutoff, modes: Modes::One, matrix: a, tail: T::zero() };
    let ad = a.dagger();
    (a, ad)
}

/// Weight of a coherent state with mean occupation `mean` beyond `n_max`,
/// `Σ_{n>n_max} e^{-mean} mean^n / n!`.
pub(crate) fn poisson_tail<T: Real>(mean: T, n_max: usize) -> T {
    if mean <= T::zero() {
        return T::zero();
    }
    // log of the first omitted term
    let n0 = n_max + 1;
    let mut log_term = -mean + T::from_usize(n0).unwrap() * mean.ln();
    for k in 1..=n0 {
        log_term -= T::from_usize(k).unwrap().ln();
    }
    let mut term = log_term.exp();
    let mut total = T::zero();
    let mut n = n0;
    while term > total * T::epsilon() && n < n0 + 10_000 {
        total += term;
        n += 1;
        term = term * mean / T::from_usize(n).unwrap();
    }
    total
}

/// `D(ξ) = exp(ξ a† − ξ* a)`, exponentiated on the truncated space so it is
/// exactly unitary there. The coherent-state tail beyond the cutoff is
/// recorded on the result and logged when it exceeds [`TAIL_WARN`].
pub fn displacement_operator<T: Real>(xi: Complex<T>, cutoff: FockCutoff) -> Result<ModeOperator<T>> {
    if !(xi.re.is_finite() && xi.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "xi",
            value: xi.norm().to_f64().unwrap_or(f64::NAN),
            reason: "must be finite",
        });
    }
    let (a, ad) = make_ladder::<T>(cutoff);
    if xi.is_zero() {
        return Ok(ModeOperator::identity(cutoff, Modes::One));
    }
    let gen = &linalg::scale(ad.matrix(), xi) - &linalg::scale(a.matrix(), xi.conj());
    let tail = poisson_tail(xi.norm_sqr(), cutoff.n_max());
    if tail > T::lit(TAIL_WARN) {
        warn!("displacement |xi|={} leaves truncation tail {:e} beyond n_max={}", xi.norm(), tail, cutoff.n_max());
    }
    Ok(ModeOperator { cutoff, modes: Modes::One, matrix: linalg::expm(&gen), tail })
}

pub(crate) fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if !(gamma.is_finite() && gamma >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "squeeze strength must be finite and non-negative",
        });
    }
    Ok(())
}

/// `γ(a†b† − ab)` on the product space.
pub fn squeeze_generator<T: Real>(gamma: T, cutoff: FockCutoff) -> ModeOperator<T> {
    let (a, ad) = make_ladder::<T>(cutoff);
    let (aa, ab) = (a.on_mode_a(), a.on_mode_b());
    let (ada, adb) = (ad.on_mode_a(), ad.on_mode_b());
    let pair_create = &ada.matrix * &adb.matrix;
    let pair_destroy = &aa.matrix * &ab.matrix;
    let matrix = linalg::scale(&(&pair_create - &pair_destroy), cx(gamma));
    ModeOperator { cutoff, modes: Modes::Two, matrix, tail: T::zero() }
}

/// Two-mode squeezing operator by dense matrix exponential of the full
/// `(n_max+1)^2` generator.
pub fn squeeze_expm<T: Real>(gamma: T, cutoff: FockCutoff) -> Result<ModeOperator<T>> {
    check_gamma(gamma)?;
    let dim = cutoff.dim() * cutoff.dim();
    if dim > EXPM_DIM_CAP {
        return Err(Error::ExpmTooLarge { dim, cap: EXPM_DIM_CAP });
    }
    let gen = squeeze_generator(gamma, cutoff);
    Ok(ModeOperator { matrix: linalg::expm(&gen.matrix), ..gen })
}

/// One difference sector of the truncated squeeze generator: the basis
/// pairs `(n_a, n_b)` with fixed `n_a − n_b`, and `exp` of the generator
/// restricted to them.
pub(crate) struct SqueezeSector<T: Real> {
    pub(crate) basis: Vec<(usize, usize)>,
    pub(crate) block: CMatrix<T>,
}

/// Off-diagonal weights `γ √((n_a+1)(n_b+1))` of the generator
/// `γ(a†b† − ab)` on the first `len` states `(m + off_a, m + off_b)` of the
/// difference sector `diff`.
fn sector_weights<T: Real>(gamma: T, diff: isize, len: usize) -> Vec<T> {
    let (off_a, off_b) = sector_offsets(diff);
    (0..len.saturating_sub(1))
        .map(|m| T::from_usize((m + off_a + 1) * (m + off_b + 1)).unwrap().sqrt() * gamma)
        .collect()
}

fn sector_generator<T: Real>(gamma: T, diff: isize, len: usize) -> CMatrix<T> {
    let mut gen = linalg::zeros::<T>(len, len);
    // a†b† |n_a, n_b⟩ = √((n_a+1)(n_b+1)) |n_a+1, n_b+1⟩
    for (m, w) in sector_weights(gamma, diff, len).into_iter().enumerate() {
        gen[(m + 1, m)] = cx(w);
        gen[(m, m + 1)] = cx(-w);
    }
    gen
}

fn sector_offsets(diff: isize) -> (usize, usize) {
    (diff.max(0) as usize, (-diff).max(0) as usize)
}

/// The generator conserves `n_a − n_b`, so its truncation is block diagonal
/// with one tridiagonal block per difference sector.
pub(crate) fn squeeze_sectors<T: Real>(gamma: T, cutoff: FockCutoff) -> Vec<SqueezeSector<T>> {
    let d = cutoff.dim();
    let n_max = cutoff.n_max() as isize;
    (-n_max..=n_max)
        .map(|diff| {
            let (off_a, off_b) = sector_offsets(diff);
            let len = d - diff.unsigned_abs();
            let basis: Vec<(usize, usize)> = (0..len).map(|m| (m + off_a, m + off_b)).collect();
            SqueezeSector { basis, block: linalg::expm(&sector_generator(gamma, diff, len)) }
        })
        .collect()
}

/// Two-mode vector with finite support, keyed by `(n_a, n_b)`.
pub type SparseState<T> = BTreeMap<(usize, usize), Complex<T>>;

/// Longest sector the padded column exponential will grow to.
pub const MAX_WORKING_LEN: usize = 4096;

/// `S_ab(γ)|n_a, n_b⟩` without a fixed cutoff.
///
/// The generator is exponentiated on the sector of `|n_a, n_b⟩`, padded with
/// extra pair levels; the padding doubles until the weight in the top
/// quarter of the padding reaches the rounding floor, so reflections off the
/// artificial boundary are invisible at working precision. Any finite `γ` is accepted
/// (negative values give `S†`).
pub fn squeeze_column<T: Real>(gamma: T, n_a: usize, n_b: usize) -> Result<SparseState<T>> {
    Ok(squeeze_columns(gamma, &[(n_a, n_b)])?.remove(0))
}

/// [`squeeze_column`] for several states, exponentiating each sector once.
pub fn squeeze_columns<T: Real>(gamma: T, states: &[(usize, usize)]) -> Result<Vec<SparseState<T>>> {
    if !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
            reason: "must be finite",
        });
    }
    let mut by_sector: BTreeMap<isize, Vec<usize>> = BTreeMap::new();
    for &(n_a, n_b) in states {
        by_sector.entry(n_a as isize - n_b as isize).or_default().push(n_a.min(n_b));
    }
    let mut blocks = BTreeMap::new();
    for (&diff, starts) in &by_sector {
        blocks.insert(diff, padded_sector_block(gamma, diff, starts.iter().copied().max().unwrap_or(0))?);
    }
    Ok(states
        .iter()
        .map(|&(n_a, n_b)| {
            let diff = n_a as isize - n_b as isize;
            let (off_a, off_b) = sector_offsets(diff);
            let block: &CMatrix<T> = &blocks[&diff];
            let start = n_a.min(n_b);
            (0..block.nrows())
                .map(|m| ((m + off_a, m + off_b), block[(m, start)]))
                .filter(|(_, z)| !z.is_zero())
                .collect()
        })
        .collect())
}

/// Columns `0..=start` of the sector exponential, padded until every
/// column has negligible weight near the artificial boundary. The
/// threshold scales with the block length so rounding noise cannot stall
/// the doubling.
fn padded_sector_block<T: Real>(gamma: T, diff: isize, start: usize) -> Result<CMatrix<T>> {
    let mut pad = 16;
    loop {
        let len = start + pad + 1;
        let block = linalg::expm_antisymmetric_tridiagonal(&sector_weights(gamma, diff, len), start + 1);
        let floor = T::epsilon() * T::lit(16.0);
        let threshold = floor * floor * T::from_usize(len).unwrap();
        let converged = (0..=start)
            .all(|c| (len - pad / 4..len).fold(T::zero(), |acc, m| acc + block[(m, c)].norm_sqr()) <= threshold);
        if converged {
            return Ok(block);
        }
        pad *= 2;
        if start + pad >= MAX_WORKING_LEN {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma.to_f64().unwrap_or(f64::NAN),
                reason: "squeezed column does not converge within the working-space limit",
            });
        }
    }
}

/// Two-mode squeezing operator exponentiated sector by sector. Equal to
/// [`squeeze_expm`] on the same truncated space, without the size cap.
pub fn squeeze_blockwise<T: Real>(gamma: T, cutoff: FockCutoff) -> Result<ModeOperator<T>> {
    check_gamma(gamma)?;
    let d = cutoff.dim();
    let mut out = linalg::zeros::<T>(d * d, d * d);
    for sector in squeeze_sectors(gamma, cutoff) {
        for (r, &(ra, rb)) in sector.basis.iter().enumerate() {
            for (c, &(ca, cb)) in sector.basis.iter().enumerate() {
                out[(ra * d + rb, ca * d + cb)] = sector.block[(r, c)];
            }
        }
    }
    Ok(ModeOperator { cutoff, modes: Modes::Two, matrix: out, tail: T::zero() })
}
