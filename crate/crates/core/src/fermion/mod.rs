//! Fermionic coherent states, the density `ρ_α = |−α⟩⟨α|`, two-mode
//! fermionic squeezing and its reduced densities, built on the Grassmann
//! superalgebra.
//!
//! Kets are stored with amplitudes to the right of the basis vectors,
//! `|ψ⟩ = Σ_n |n⟩ c_n`, so that `c_n = ⟨n|ψ⟩`. Moving an odd amplitude to
//! the left of `|n⟩` costs `(−1)^{p(n)}`; [`FermionState::coefficient_first`]
//! gives that form.

mod coherent;
mod squeeze;

pub use coherent::{
    coherent_state, coherent_state_from_expansion, convention_probes, displaced_number_state,
    displaced_number_state_from_ladder, displacement_generator, fermion_displacement, fermion_identity_suite,
    overlap_formula, rho_alpha, rho_alpha_matrix,
};
pub use squeeze::{
    alt_state, alt_state_check, fermion_cs_identity_check, fermion_entropy_energy, fermion_gamma_from_tau,
    fermion_reduced_density, fermion_reduced_density_check, fermion_squeeze, fermion_squeeze_check,
    fermion_squeeze_generator, fermion_tau_from_gamma, fermion_tmss, fermion_tmss_deviation, AltStateReport,
    CsIdentityReport, FermionGibbs, ReducedDensityReport, SqueezeReport,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grassmann::{FermionModes, GeneratorSet, GrassmannElement, SuperOperator};
use crate::scalar::Coefficient;

/// Grassmann-valued state vector on one or two fermion modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionState<C> {
    modes: FermionModes,
    amplitudes: Vec<GrassmannElement<C>>,
}

impl<C: Coefficient> FermionState<C> {
    /// `|ψ⟩ = Σ_n |n⟩ c_n`.
    pub fn new(modes: FermionModes, amplitudes: Vec<GrassmannElement<C>>) -> Result<Self> {
        if amplitudes.len() != modes.dim() {
            return Err(Error::DimensionMismatch { expected: modes.dim(), found: amplitudes.len() });
        }
        let gens = amplitudes[0].generators();
        if amplitudes.iter().any(|c| c.generators() != gens) {
            return Err(Error::GeneratorMismatch);
        }
        Ok(Self { modes, amplitudes })
    }

    /// `|ψ⟩ = Σ_n c̃_n |n⟩`, coefficients written before the basis vector.
    pub fn from_coefficient_first(modes: FermionModes, coefficients: Vec<GrassmannElement<C>>) -> Result<Self> {
        let swapped = coefficients.into_iter().enumerate().map(|(n, c)| move_past_basis(modes, n, &c)).collect();
        Self::new(modes, swapped)
    }

    /// Basis state `|n⟩`.
    pub fn basis(modes: FermionModes, gens: &Arc<GeneratorSet>, n: usize) -> Self {
        let amplitudes = (0..modes.dim())
            .map(|k| if k == n { GrassmannElement::one(gens) } else { GrassmannElement::zero(gens) })
            .collect();
        Self { modes, amplitudes }
    }

    /// Reads the state off column 0 of an operator `Σ_n |n⟩⟨0| c_n`.
    pub fn from_ket_operator(op: &SuperOperator<C>) -> Self {
        Self { modes: op.modes(), amplitudes: (0..op.modes().dim()).map(|n| op.matrix_element(n, 0)).collect() }
    }

    pub fn modes(&self) -> FermionModes {
        self.modes
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        self.amplitudes[0].generators()
    }

    /// `c_n = ⟨n|ψ⟩`.
    pub fn amplitudes(&self) -> &[GrassmannElement<C>] {
        &self.amplitudes
    }

    /// `c̃_n` with `|ψ⟩ = Σ_n c̃_n |n⟩`.
    pub fn coefficient_first(&self) -> Vec<GrassmannElement<C>> {
        self.amplitudes.iter().enumerate().map(|(n, c)| move_past_basis(self.modes, n, c)).collect()
    }

    /// `Σ_n |n⟩⟨0| c_n`.
    pub fn ket(&self) -> SuperOperator<C> {
        SuperOperator::ket(self.modes, &self.amplitudes).expect("validated at construction")
    }

    /// `|0⟩⟨ψ|`, the adjoint of [`ket`](Self::ket).
    pub fn bra(&self) -> SuperOperator<C> {
        self.ket().super_dagger()
    }

    pub fn apply(&self, op: &SuperOperator<C>) -> Result<Self> {
        Ok(Self::from_ket_operator(&op.super_mul(&self.ket())?))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<GrassmannElement<C>> {
        Ok(self.bra().super_mul(&other.ket())?.matrix_element(0, 0))
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Result<SuperOperator<C>> {
        self.ket().super_mul(&other.bra())
    }

    /// Physical states have Grassmann-free amplitudes.
    pub fn is_physical(&self) -> bool {
        self.amplitudes.iter().all(|c| c.is_scalar())
    }

    /// The plain amplitudes, if the state is physical.
    pub fn numeric_amplitudes(&self) -> Option<Vec<C>> {
        self.is_physical().then(|| self.amplitudes.iter().map(|c| c.scalar_part()).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch(self.modes.count(), other.modes.count()));
        }
        self.amplitudes.iter().zip(&other.amplitudes).try_fold(0.0_f64, |acc, (x, y)| Ok(acc.max(x.max_abs_diff(y)?)))
    }
}

/// `c |n⟩ = |n⟩ c'`: the odd part of `c` changes sign past an odd `|n⟩`.
fn move_past_basis<C: Coefficient>(modes: FermionModes, n: usize, c: &GrassmannElement<C>) -> GrassmannElement<C> {
    if modes.parity(n) {
        &c.even_part() - &c.odd_part()
    } else {
        c.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::relations::Exact;

    #[test]
    fn coefficient_first_round_trip() {
        let g = GeneratorSet::one_mode();
        let a = GrassmannElement::<Exact>::generator(&g, "α").unwrap();
        let one = GrassmannElement::one(&g);
        let s = FermionState::from_coefficient_first(FermionModes::One, vec![one.clone(), a.clone()]).unwrap();
        assert_eq!(s.amplitudes()[1], -&a);
        assert_eq!(s.coefficient_first(), vec![one, a]);
    }

    #[test]
    fn basis_states_are_orthonormal() {
        let g = GeneratorSet::two_mode();
        for m in 0..4 {
            for n in 0..4 {
                let x = FermionState::<Exact>::basis(FermionModes::Two, &g, m);
                let y = FermionState::basis(FermionModes::Two, &g, n);
                let want = if m == n { GrassmannElement::one(&g) } else { GrassmannElement::zero(&g) };
                assert_eq!(x.overlap(&y).unwrap(), want);
            }
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let g = GeneratorSet::one_mode();
        assert!(FermionState::<Exact>::new(FermionModes::Two, vec![GrassmannElement::one(&g)]).is_err());
    }
}
